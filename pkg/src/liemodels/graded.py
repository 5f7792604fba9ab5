"""Graded generators, free graded-commutative algebras and free graded Lie
algebras.

Degrees are homological internally: a generator declared with cohomological
degree n has homological degree -n.  Lie elements live in the tensor algebra
as dicts mapping a word to a Fraction.  A word is a ``str`` whose characters
are ``chr(i)`` for generator index i, so concatenation, hashing and the
lexicographic order are all native string operations.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import InvalidInput, VerificationError
from .linalg import Echelon, clean, to_scalar, vec_iadd

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    convention: str = HOMOLOGICAL

    def __post_init__(self):
        if self.convention not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise InvalidInput(f"unknown grading convention {self.convention!r}")

    @property
    def hdeg(self):
        return self.degree if self.convention == HOMOLOGICAL else -self.degree


class GeneratorSet:
    """Ordered, named generators.  The order fixes all basis orderings."""

    def __init__(self, generators):
        self.generators = tuple(
            g if isinstance(g, Generator) else Generator(*g) for g in generators)
        self.names = tuple(g.name for g in self.generators)
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("generator names must be unique")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.hdeg = tuple(g.hdeg for g in self.generators)
        self.letters = tuple(chr(i) for i in range(len(self.generators)))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def letter(self, name):
        try:
            return chr(self.index[name])
        except KeyError:
            raise InvalidInput(f"unknown generator {name!r}") from None

    def word(self, names):
        return "".join(self.letter(n) for n in names)

    def word_names(self, word):
        return tuple(self.names[ord(c)] for c in word)

    def word_degree(self, word):
        h = self.hdeg
        return sum(h[ord(c)] for c in word)

    def extend(self, extra):
        return GeneratorSet(self.generators + tuple(extra))

    def content(self, word):
        """Multidegree of a word: occurrence count of every generator."""
        c = [0] * len(self.generators)
        for ch in word:
            c[ord(ch)] += 1
        return tuple(c)


# -- tensor algebra ----------------------------------------------------------

def tensor_bracket(a, da, b, db):
    """[a, b] = ab - (-1)^{|a||b|} ba for homogeneous word dicts."""
    s = 1 if (da * db) % 2 else -1
    out = {}
    get = out.get
    for u, x in a.items():
        for v, y in b.items():
            z = x * y
            w = u + v
            t = get(w, 0) + z
            if t:
                out[w] = t
            else:
                del out[w]
            w = v + u
            t = get(w, 0) + s * z
            if t:
                out[w] = t
            else:
                del out[w]
    return out


def tensor_mul(a, b):
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            w = u + v
            t = out.get(w, 0) + x * y
            if t:
                out[w] = t
            else:
                out.pop(w, None)
    return out


class GradedLieElement:
    """A homogeneous element of a free graded Lie algebra, stored as a
    combination of tensor words."""

    __slots__ = ("gens", "terms", "degree")

    def __init__(self, gens, terms, degree=None):
        self.gens = gens
        self.terms = clean(terms)
        if degree is None:
            degs = {gens.word_degree(w) for w in self.terms}
            if len(degs) > 1:
                raise InvalidInput("Lie element is not homogeneous")
            degree = degs.pop() if degs else 0
        self.degree = degree

    @classmethod
    def generator(cls, gens, name):
        i = gens.index[name]
        return cls(gens, {chr(i): Fraction(1)}, gens.hdeg[i])

    @classmethod
    def from_names(cls, gens, pairs):
        """Build from [(coeff, [name, ...]), ...]."""
        terms = {}
        for c, names in pairs:
            vec_iadd(terms, {gens.word(names): to_scalar(c)})
        return cls(gens, terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        return GradedLieElement(self.gens, vec_iadd(dict(self.terms), other.terms), self.degree)

    def __sub__(self, other):
        return GradedLieElement(self.gens, vec_iadd(dict(self.terms), other.terms, -1), self.degree)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = to_scalar(c)
        return GradedLieElement(self.gens, {w: c * x for w, x in self.terms.items()}, self.degree)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, GradedLieElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def named_terms(self):
        return sorted((self.gens.word_names(w), x) for w, x in self.terms.items())

    def __repr__(self):
        return f"GradedLieElement({format_word_sum(self.gens, self.terms)})"


def lie_bracket(a, b):
    return GradedLieElement(a.gens, tensor_bracket(a.terms, a.degree, b.terms, b.degree),
                            a.degree + b.degree)


def format_coeff(c, first):
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    c = abs(c)
    body = "" if c == 1 else (str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
    if first:
        return ("-" if sign == "-" else "") + body
    return f" {sign} " + body


def format_word_sum(gens, terms):
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = terms[w]
        pre = format_coeff(c, not parts)
        body = "".join(gens.names[ord(ch)] for ch in w) if w else "1"
        if pre and pre[-1] not in " -":
            pre += "*"
        parts.append(pre + body)
    return "".join(parts)


def format_bracket(gens, word_tree):
    """Render a nested tuple of generator indices as nested brackets."""
    if isinstance(word_tree, int):
        return gens.names[word_tree]
    a, b = word_tree
    return f"[{format_bracket(gens, a)},{format_bracket(gens, b)}]"


# -- multidegree enumeration -------------------------------------------------

def contents_of_degree(hdegs, degree):
    """All occurrence vectors c with sum c_i hdeg_i == degree, c != 0."""
    out = []
    n = len(hdegs)
    if degree <= 0 or any(h <= 0 for h in hdegs):
        return out

    def rec(i, rest, acc):
        if i == n:
            if rest == 0 and any(acc):
                out.append(tuple(acc))
            return
        h = hdegs[i]
        for k in range(rest // h + 1):
            acc.append(k)
            rec(i + 1, rest - k * h, acc)
            acc.pop()
    rec(0, degree, [])
    return out


def words_with_content(content):
    """All words (strings) with the given letter counts, in lex order."""
    n = len(content)
    total = sum(content)
    counts = list(content)
    out = []
    buf = []

    def rec():
        if len(buf) == total:
            out.append("".join(buf))
            return
        for i in range(n):
            if counts[i]:
                counts[i] -= 1
                buf.append(chr(i))
                rec()
                buf.pop()
                counts[i] += 1
    rec()
    return out


# -- free Lie algebra: spanning set elimination --------------------------------

def _left_normed_span(gens, content):
    """Expansions of all left-normed brackets [[[x1,x2],x3],...] with a given
    content, generated along a prefix tree so shared prefixes are reused."""
    hd = gens.hdeg
    n = len(content)
    counts = list(content)
    total = sum(content)
    out = []

    def rec(elem, deg, length):
        if length == total:
            if elem:
                out.append(elem)
            return
        for i in range(n):
            if counts[i]:
                counts[i] -= 1
                if length == 0:
                    nxt = {chr(i): Fraction(1)}
                else:
                    nxt = tensor_bracket(elem, deg, {chr(i): 1}, hd[i]) if elem else {}
                if nxt or length == 0:
                    rec(nxt, deg + hd[i], length + 1)
                counts[i] += 1
    rec({}, 0, 0)
    return out


def _check_positive(gens):
    if any(h <= 0 for h in gens.hdeg):
        raise InvalidInput("free Lie algebras need generators of positive homological degree")


def free_glie_basis(gens, degree):
    """Basis of the degree-n part of the free graded Lie algebra.

    Every left-normed bracket of generators is expanded in the tensor algebra
    and the span is brought to reduced echelon form, one multidegree at a
    time.  The basis is the reduced rows, ordered by multidegree and then by
    pivot word.
    """
    _check_positive(gens)
    out = []
    for content in sorted(contents_of_degree(gens.hdeg, degree), reverse=True):
        e = Echelon(full=True)
        for v in _left_normed_span(gens, content):
            e.add(v)
        for row in e.basis():
            out.append(GradedLieElement(gens, row, degree))
    return out


# -- free Lie algebra: super-Lyndon basis -------------------------------------

def lyndon_words(alphabet_size, max_length):
    """Lyndon words over chr(0)..chr(k-1) of length <= max_length (Duval)."""
    if alphabet_size <= 0 or max_length <= 0:
        return []
    out = []
    w = [-1]
    k = alphabet_size
    while w:
        w[-1] += 1
        out.append("".join(chr(i) for i in w))
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def _standard_split(w, is_lyndon):
    for i in range(1, len(w)):
        if w[i:] in is_lyndon:
            return w[:i], w[i:]
    raise AssertionError("not a Lyndon word")


class LieBasis:
    """Triangular basis of a free graded Lie algebra from super-Lyndon words.

    Basis elements are the standard bracketings b(w) of Lyndon words w, plus
    the squares [b(w), b(w)] for Lyndon words of odd degree.  Each element
    has a distinct smallest word (w, respectively ww), so coordinates come
    from a triangular reduction and no elimination is needed to build it.
    Components are produced lazily per degree and cached.
    """

    def __init__(self, gens):
        _check_positive(gens)
        self.gens = gens
        self._expansion = {}
        self._degree = {}
        self._built_upto = 0
        self._by_degree = {}
        self._ech = {}

    def _word_degree(self, w):
        d = self._degree.get(w)
        if d is None:
            d = self.gens.word_degree(w)
            self._degree[w] = d
        return d

    def _build(self, top):
        if top <= self._built_upto:
            return
        gens = self.gens
        hmin = min(gens.hdeg)
        words = [w for w in lyndon_words(len(gens), top // hmin)
                 if gens.word_degree(w) <= top]
        words.sort(key=lambda w: (len(w), w))
        lyn = set(words)
        for d in range(self._built_upto + 1, top + 1):
            self._by_degree[d] = []
        for w in words:
            if w not in self._expansion:
                if len(w) == 1:
                    self._expansion[w] = {w: Fraction(1)}
                else:
                    u, v = _standard_split(w, lyn)
                    self._expansion[w] = tensor_bracket(
                        self._expansion[u], self._word_degree(u),
                        self._expansion[v], self._word_degree(v))
            d = self._word_degree(w)
            if d > self._built_upto:
                self._by_degree[d].append((w, self._expansion[w]))
            if d % 2 and 2 * d <= top and 2 * d > self._built_upto:
                sq = tensor_bracket(self._expansion[w], d, self._expansion[w], d)
                self._by_degree[2 * d].append((w + w, sq))
        for d in range(self._built_upto + 1, top + 1):
            self._by_degree[d].sort(key=lambda t: t[0])
        self._built_upto = top

    def component(self, degree):
        """List of (leading word, expansion) in the given degree."""
        if degree <= 0:
            return []
        self._build(degree)
        return self._by_degree[degree]

    def dim(self, degree):
        return len(self.component(degree))

    def elements(self, degree):
        return [GradedLieElement(self.gens, e, degree) for _, e in self.component(degree)]

    def echelon(self, degree):
        """Triangular echelon of the component, tracked by basis position."""
        e = self._ech.get(degree)
        if e is None:
            e = Echelon(full=False, track=True)
            for i, (lead, exp) in enumerate(self.component(degree)):
                c = exp[lead]
                e.rows[lead] = {k: x / c for k, x in exp.items()}
                e.combos[lead] = {i: 1 / Fraction(c)}
            self._ech[degree] = e
        return e

    def coordinates(self, terms, degree):
        """Coordinates of a Lie element (word dict) in this basis."""
        c = self.echelon(degree).express(terms)
        if c is None:
            raise VerificationError("element is not in the free Lie algebra")
        return c


# -- quotients of free Lie algebras ---------------------------------------------

class LieQuotient:
    """The quotient of a free graded Lie algebra by the ideal generated by
    homogeneous relations, computed degree by degree."""

    def __init__(self, gens, relations=(), basis=None):
        self.gens = gens
        self.relations = [r.terms if isinstance(r, GradedLieElement) else clean(r)
                          for r in relations]
        self.rel_degrees = [gens.word_degree(next(iter(r))) if r else 0 for r in self.relations]
        self.free = basis or LieBasis(gens)
        self._ideal = {}
        self._reps = {}
        self._ech = {}

    def ideal(self, degree):
        """Reduced echelon basis (list of word dicts) of the ideal in a degree."""
        if degree in self._ideal:
            return self._ideal[degree]
        e = Echelon(full=True)
        for r, d in zip(self.relations, self.rel_degrees):
            if d == degree:
                e.add(r)
        for i, h in enumerate(self.gens.hdeg):
            lower = degree - h
            if lower >= 1:
                for v in self.ideal(lower):
                    e.add(tensor_bracket(v, lower, {chr(i): 1}, h))
        rows = e.basis()
        self._ideal[degree] = rows
        return rows

    def _echelon(self, degree):
        if degree in self._ech:
            return self._ech[degree]
        e = Echelon(full=True, track=True)
        for j, v in enumerate(self.ideal(degree)):
            e.add(v, label=("I", j))
        reps = []
        for lead, exp in self.free.component(degree):
            if e.add(exp, label=("R", len(reps))):
                reps.append(exp)
        self._reps[degree] = reps
        self._ech[degree] = e
        return e

    def representatives(self, degree):
        """Free Lie elements projecting to a basis of the quotient."""
        self._echelon(degree)
        return self._reps[degree]

    def dim(self, degree):
        return len(self.representatives(degree))

    def coordinates(self, terms, degree):
        """Quotient coordinates {rep index: coeff} of a free Lie element."""
        if not terms:
            return {}
        c = self._echelon(degree).express(terms)
        if c is None:
            raise VerificationError("element is not in the free Lie algebra")
        return {k[1]: x for k, x in c.items() if k[0] == "R"}

    def in_ideal(self, terms, degree):
        return not self.coordinates(terms, degree)


def lie_quotient_basis(gens, relations, degree):
    """Representatives of a basis of (free Lie algebra / ideal) in a degree."""
    q = LieQuotient(gens, relations)
    return [GradedLieElement(gens, r, degree) for r in q.representatives(degree)]


# -- dimension oracle ------------------------------------------------------------

def pbw_dims_oracle(generator_degrees, max_degree):
    """Dimensions a_1..a_N of the free graded Lie algebra, from PBW.

    Solves 1/(1 - h(t)) = prod_{n even} (1-t^n)^{-a_n} prod_{n odd} (1+t^n)^{a_n}
    degree by degree.  Returns a list indexed by degree (entry 0 is 0).
    """
    N = max_degree
    h = [0] * (N + 1)
    for d in generator_degrees:
        if d <= 0:
            raise InvalidInput("generator degrees must be positive")
        if d <= N:
            h[d] += 1
    u = [0] * (N + 1)
    u[0] = 1
    for n in range(1, N + 1):
        u[n] = sum(h[j] * u[n - j] for j in range(1, n + 1))
    p = [0] * (N + 1)
    p[0] = 1
    a = [0] * (N + 1)
    for n in range(1, N + 1):
        an = u[n] - p[n]
        if an < 0:
            raise VerificationError(f"negative Lie dimension in degree {n}")
        a[n] = an
        if an:
            factor = [0] * (N + 1)
            for j in range(N // n + 1):
                factor[n * j] = comb(an, j) if n % 2 else comb(an + j - 1, j)
            p = [sum(p[i] * factor[k - i] for i in range(k + 1) if factor[k - i]) for k in range(N + 1)]
    return a


# -- free graded-commutative algebras ----------------------------------------------

def _gca_degrees(gens):
    degs = [-h for h in gens.hdeg]
    if any(d <= 0 for d in degs):
        raise InvalidInput("graded-commutative generators need positive cohomological degree")
    return degs


def free_gca_basis(gens, degree):
    """Monomials (exponent tuples) of a cohomological degree.

    Odd generators appear at most once.  Ordered by decreasing exponent
    tuple, so higher powers of earlier generators come first.
    """
    degs = _gca_degrees(gens)
    n = len(degs)
    out = []
    if degree < 0:
        return out

    def rec(i, rest, acc):
        if i == n:
            if rest == 0:
                out.append(tuple(acc))
            return
        d = degs[i]
        top = rest // d
        if d % 2:
            top = min(top, 1)
        for k in range(top, -1, -1):
            acc.append(k)
            rec(i + 1, rest - k * d, acc)
            acc.pop()
    rec(0, degree, [])
    return out


def gca_monomial_mul(a, b, odd):
    """Product of two exponent tuples: (sign, monomial) or (0, None)."""
    sign = 0
    odd_seen = 0
    # b's odd letters must move past the odd letters of a with larger index
    for i in range(len(a) - 1, -1, -1):
        if odd[i]:
            if b[i]:
                if a[i]:
                    return 0, None
                sign += odd_seen
            odd_seen += a[i]
    return (-1 if sign % 2 else 1), tuple(x + y for x, y in zip(a, b))


class GcElement:
    """Element of a free graded-commutative algebra: monomial -> Fraction."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms):
        self.gens = gens
        self.terms = clean(terms)

    @classmethod
    def monomial(cls, gens, exps, c=1):
        return cls(gens, {tuple(exps): to_scalar(c)})

    @classmethod
    def one(cls, gens):
        return cls.monomial(gens, (0,) * len(gens))

    @classmethod
    def generator(cls, gens, name):
        e = [0] * len(gens)
        e[gens.index[name]] = 1
        return cls.monomial(gens, e)

    def is_zero(self):
        return not self.terms

    def degree(self):
        degs = _gca_degrees(self.gens)
        ds = {sum(k * d for k, d in zip(m, degs)) for m in self.terms}
        if len(ds) > 1:
            raise InvalidInput("element is not homogeneous")
        return ds.pop() if ds else 0

    def __add__(self, other):
        return GcElement(self.gens, vec_iadd(dict(self.terms), other.terms))

    def __sub__(self, other):
        return GcElement(self.gens, vec_iadd(dict(self.terms), other.terms, -1))

    def scale(self, c):
        c = to_scalar(c)
        return GcElement(self.gens, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        return GcElement(self.gens, gca_mul(self.terms, other.terms, gca_odd(self.gens)))

    def __eq__(self, other):
        return isinstance(other, GcElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"GcElement({format_monomial_sum(self.gens, self.terms)})"


def gca_odd(gens):
    return tuple((-h) % 2 == 1 for h in gens.hdeg)


def gca_mul(a, b, odd):
    out = {}
    for m1, x in a.items():
        for m2, y in b.items():
            s, m = gca_monomial_mul(m1, m2, odd)
            if s:
                t = out.get(m, 0) + s * x * y
                if t:
                    out[m] = t
                else:
                    out.pop(m, None)
    return out


def format_monomial(gens, m):
    parts = []
    for name, k in zip(gens.names, m):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "".join(parts) if parts else "1"


def format_monomial_sum(gens, terms):
    if not terms:
        return "0"
    parts = []
    for m in sorted(terms, reverse=True):
        pre = format_coeff(terms[m], not parts)
        if pre and pre[-1] not in " -":
            pre += "*"
        parts.append(pre + format_monomial(gens, m))
    return "".join(parts)


def gca_dims_oracle(cohomological_degrees, max_degree):
    """Coefficients of prod_even 1/(1-t^d) * prod_odd (1+t^d)."""
    s = [0] * (max_degree + 1)
    s[0] = 1
    for d in cohomological_degrees:
        if d % 2:
            s = [s[k] + (s[k - d] if k >= d else 0) for k in range(max_degree + 1)]
        else:
            for k in range(d, max_degree + 1):
                s[k] += s[k - d]
    return s


def all_words(gens, degree):
    """Every tensor word of a total degree (positive generator degrees)."""
    out = []
    for c in contents_of_degree(gens.hdeg, degree):
        out.extend(words_with_content(c))
    return sorted(out)


__all__ = [
    "HOMOLOGICAL", "COHOMOLOGICAL", "Generator", "GeneratorSet", "GradedLieElement",
    "GcElement", "LieBasis", "LieQuotient", "lie_bracket", "free_glie_basis",
    "lie_quotient_basis", "pbw_dims_oracle", "free_gca_basis", "gca_dims_oracle",
    "tensor_bracket", "tensor_mul", "lyndon_words",
]
