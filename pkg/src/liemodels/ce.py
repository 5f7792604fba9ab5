"""Chevalley-Eilenberg chains and cochains of finite slices of dg Lie algebras.

Chains are Lambda(s g) with d = d0 + d1,

    d0(sx) = -s(dx),    d1(sx1 ^ sx2) = (-1)^{|x1|} s[x1, x2],

extended as a coderivation.  Cochains are the degreewise dual: the dual of a
word in cohomological degree n is the linear form evaluating on it, and the
coboundary of a degree-n cochain f is (-1)^{n+1} f composed with d.  That sign
makes the cup product satisfy the usual Leibniz rule.  A label (k, j) stands for the
suspension of basis element j of the slice in degree k; its degree is k + 1.
"""

from collections import Counter
from fractions import Fraction
from itertools import product as iproduct
from math import comb

from .errors import InvalidInput, PreconditionError, VerificationError, WindowError
from .linalg import Echelon, kernel_of, vec_iadd, vec_scale


# -- exterior words -----------------------------------------------------------------

def _odd(label):
    return (label[0] + 1) % 2 == 1


def word_degree(word):
    return sum(l[0] + 1 for l in word)


def wedge(u, v):
    """(sign, sorted word) for u ^ v in the free graded-commutative algebra,
    or (0, None) when an odd label repeats."""
    if not u:
        return 1, v
    if not v:
        return 1, u
    sign = 1
    for a in u:
        if _odd(a):
            for b in v:
                if b == a:
                    return 0, None
                if b < a and _odd(b):
                    sign = -sign
    return sign, tuple(sorted(u + v))


def multiply(x, y):
    """Product of two chain (or word-indexed) elements."""
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            s, w = wedge(u, v)
            if s:
                t = out.get(w, 0) + s * a * b
                if t:
                    out[w] = t
                else:
                    out.pop(w, None)
    return out


def coproduct(word):
    """The unshuffle coproduct of a word: {(u, v): coeff}."""
    counts = sorted(Counter(word).items())
    out = {}
    ranges = [range(m + 1) for _, m in counts]
    for pick in iproduct(*ranges):
        u = tuple(l for (l, _), c in zip(counts, pick) for _ in range(c))
        v = tuple(l for (l, m), c in zip(counts, pick) for _ in range(m - c))
        s, w = wedge(u, v)
        coef = 1
        for (_, m), c in zip(counts, pick):
            coef *= comb(m, c)
        out[(u, v)] = out.get((u, v), 0) + s * coef
    return out


def words_of_degree(labels, n):
    """Sorted words in the labels of total degree n (odd labels at most once)."""
    labels = sorted(labels)
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(labels)):
            l = labels[i]
            d = l[0] + 1
            if d > remaining or d <= 0:
                continue
            nxt = i + 1 if _odd(l) else i
            acc.append(l)
            rec(nxt, remaining - d, acc)
            acc.pop()

    rec(0, n, [])
    return out


# -- the complex ----------------------------------------------------------------------

class CEComplex:
    """CE chains of a slice through cohomological degree ``top``; cohomology is
    valid through ``top - 1``."""

    def __init__(self, g, top):
        self.g = g
        if not g.floor or g.lo < 0:
            raise InvalidInput("CE complexes need a slice concentrated in degrees >= 0")
        self.top = top
        self.labels = []
        for k in range(g.lo, top):
            try:
                dk = g.dim(k)
            except WindowError:
                raise WindowError(f"CE degree {top} needs the slice in degree {k}")
            self.labels += [(k, j) for j in range(dk)]
        self.bases = {n: words_of_degree(self.labels, n) for n in range(0, top + 1)}
        self.index = {n: {w: i for i, w in enumerate(b)} for n, b in self.bases.items()}
        self._dlab = {}
        self._blab = {}
        self._bound = {}

    # slice data on labels
    def _d_label(self, l):
        if l not in self._dlab:
            k, j = l
            b = self.g.basis(k)[j]
            c = self.g.coords(self.g.d(b)) if k - 1 >= self.g.lo else {}
            self._dlab[l] = {(k - 1, i): x for i, x in c.items()}
        return self._dlab[l]

    def _bracket_label(self, a, b):
        key = (a, b)
        if key not in self._blab:
            k = a[0] + b[0]
            el = self.g.bracket(self.g.basis(a[0])[a[1]], self.g.basis(b[0])[b[1]])
            c = self.g.coords(el) if not el.is_zero() else {}
            self._blab[key] = {(k, i): x for i, x in c.items()}
        return self._blab[key]

    def boundary_word(self, word):
        """d0 + d1 applied to one word."""
        if word in self._bound:
            return self._bound[word]
        out = {}
        m = len(word)
        # d0: derivation, sign (-1)^{degree of the factors on the left}
        left = 0
        for i, l in enumerate(word):
            dl = self._d_label(l)
            if dl:
                s = -1 if left % 2 else 1
                rest_l, rest_r = word[:i], word[i + 1:]
                for l2, x in dl.items():
                    piece = multiply(multiply({rest_l: 1}, {(l2,): -x}), {rest_r: 1})
                    vec_iadd(out, piece, s)
            left += l[0] + 1
        # d1: sum over pairs of positions
        for i in range(m):
            for j in range(i + 1, m):
                a, b = word[i], word[j]
                br = self._bracket_label(a, b)
                if not br:
                    continue
                rest = word[:i] + word[i + 1:j] + word[j + 1:]
                # a ^ b ^ rest = sign * word
                s1, w1 = wedge((a, b), rest)
                if not s1:
                    continue
                sgn = s1 * (-1 if a[0] % 2 else 1)
                for l2, x in br.items():
                    piece = multiply({(l2,): x}, {rest: 1})
                    vec_iadd(out, piece, sgn)
        self._bound[word] = out
        return out

    def boundary(self, chain):
        out = {}
        for w, c in chain.items():
            vec_iadd(out, self.boundary_word(w), c)
        return out

    # cochains: dicts word -> value, homogeneous of one degree
    def coboundary(self, f, n):
        """(delta f)(w) = (-1)^{n+1} f(d w) for words w of degree n + 1."""
        if n + 1 > self.top:
            raise WindowError(f"coboundary out of degree n={n} needs CE degree {n + 1}")
        out = {}
        for w in self.bases[n + 1]:
            s = 0
            for u, x in self.boundary_word(w).items():
                y = f.get(u)
                if y:
                    s += x * y
            if s:
                out[w] = Fraction(s) if n % 2 else -Fraction(s)
        return out

    def dim(self, n):
        return len(self.bases[n])

    def differential_matrix(self, n):
        """Coboundary C^n -> C^{n+1} as {(row word index, col word index): x}."""
        ent = {}
        idx = self.index[n]
        for r, w in enumerate(self.bases[n + 1]):
            for u, x in self.boundary_word(w).items():
                ent[(r, idx[u])] = x if n % 2 else -x
        return ent

    def verify(self):
        for n in range(2, self.top + 1):
            for w in self.bases[n]:
                if self.boundary(self.boundary_word(w)):
                    raise VerificationError(f"d^2 != 0 on a CE word of degree {n}")
        return True

    def render_word(self, w):
        if not w:
            return "1"
        parts = []
        for l in w:
            el = self.g.basis(l[0])[l[1]]
            parts.append(f"(s {el.render()})^")
        return " ∧ ".join(parts)

    def render(self, f):
        if not f:
            return "0"
        from .derivations import render_terms
        return render_terms([(f[w], self.render_word(w)) for w in sorted(f)])


def ce_complex(g, N, verify=True):
    c = CEComplex(g, N + 1)
    if verify:
        c.verify()
    return c


class CECohomology:
    """Per-degree cohomology with rref-canonical representatives."""

    def __init__(self, cx):
        self.cx = cx
        self._data = {}

    def _compute(self, n):
        if n in self._data:
            return self._data[n]
        cx = self.cx
        if n + 1 > cx.top:
            raise WindowError(f"CE cohomology in degree {n} needs CE degree {n + 1}")
        basis = cx.bases[n]
        idx = cx.index[n]
        # delta(w^) = sum_u (d u)_w u^
        images = [dict() for _ in basis]
        for r, u in enumerate(cx.bases[n + 1]):
            for w, x in cx.boundary_word(u).items():
                images[idx[w]][r] = x
        cocycles = [{basis[i]: x for i, x in v.items()} for v in kernel_of(images)]
        e = Echelon(full=True, track=True)
        if n >= 1:
            for u in cx.bases[n - 1]:
                b = cx.coboundary({u: Fraction(1)}, n - 1)
                if b:
                    e.add(b, label=("B", len(e.rows)))
        reps = []
        for z in cocycles:
            if e.add(z, label=("H", len(reps))):
                reps.append(z)
        self._data[n] = (reps, e)
        return self._data[n]

    def dim(self, n):
        return len(self._compute(n)[0])

    def representatives(self, n):
        return self._compute(n)[0]

    def is_cocycle(self, f, n):
        return not self.cx.coboundary(f, n)

    def class_of(self, f, n):
        """Coordinates of a cocycle on the representative basis."""
        if not self.is_cocycle(f, n):
            raise PreconditionError("not a cocycle")
        reps, e = self._compute(n)
        c = e.express(f) if f else {}
        if c is None:
            raise VerificationError("cocycle not expressible in cocycle basis")
        return {lab[1]: x for lab, x in c.items() if lab[0] == "H"}


def ce_cohomology(g, N):
    """{degree: (dim, representatives)} for degrees 0..N."""
    cx = ce_complex(g, N)
    h = CECohomology(cx)
    return {n: (h.dim(n), h.representatives(n)) for n in range(0, N + 1)}, h


def _degree_of(f):
    degs = {word_degree(w) for w in f}
    if len(degs) > 1:
        raise InvalidInput("inhomogeneous cochain")
    return degs.pop() if degs else 0


def cup_cochains(f, g):
    """Product of cochains, dual to the unshuffle coproduct, with the Koszul
    sign (-1)^{|f||g|} of evaluation on u (x) v."""
    df, dg = _degree_of(f), _degree_of(g)
    ks = -1 if (df * dg) % 2 else 1
    out = {}
    for u, a in f.items():
        for v, b in g.items():
            s, w = wedge(u, v)
            if not s:
                continue
            cu = Counter(u)
            cw = Counter(w)
            mult = 1
            for l, m in cu.items():
                mult *= comb(cw[l], m)
            t = out.get(w, 0) + ks * s * mult * a * b
            if t:
                out[w] = t
            else:
                out.pop(w, None)
    return out


def cup(h, rep1, rep2):
    """Class of rep1 . rep2 on the representative basis of its degree."""
    n1, n2 = _degree_of(rep1), _degree_of(rep2)
    if not h.is_cocycle(rep1, n1) or not h.is_cocycle(rep2, n2):
        raise PreconditionError("cup needs cocycle inputs")
    p = cup_cochains(rep1, rep2)
    return h.class_of(p, n1 + n2), p


# -- Massey triple products in a dg Lie algebra --------------------------------------

class HomologyData:
    """Cycles, boundaries and class coordinates of a slice in one degree."""

    def __init__(self, g, k):
        from .derivations import homology
        self.g = g
        self.k = k
        self.dim, self.reps = homology(g, k)
        self.cycles = g.cycles(k)
        self.e = Echelon(full=True, track=True)
        for j, b in enumerate(g.boundaries(k)):
            self.e.add(b.raw(), label=("B", j))
        for j, r in enumerate(self.reps):
            self.e.add(r.raw(), label=("H", j))

    def class_of(self, el):
        if el.is_zero():
            return {}
        if not self.g.d(el).is_zero():
            raise PreconditionError("not a cycle")
        c = self.e.express(el.raw())
        if c is None:
            raise VerificationError("cycle not in span of boundaries and representatives")
        return {lab[1]: x for lab, x in c.items() if lab[0] == "H"}

    def is_boundary(self, el):
        return not self.class_of(el)


def _solve_primitive(g, target):
    """Some x with d x = target (deterministic), or None."""
    k = target.degree + 1
    src = g.basis(k)
    e = Echelon(full=False, track=True)
    for j, b in enumerate(src):
        e.add(g.d(b).raw(), label=j)
    c = e.express(target.raw()) if not target.is_zero() else {}
    if c is None:
        return None
    from .derivations import combine
    x = combine(src, c)
    return x if x is not None else g.space.zero(k)


class MasseyResult:
    def __init__(self, value, value_class, indeterminacy, degree, agreed, choices):
        self.value = value
        self.value_class = value_class
        self.indeterminacy = indeterminacy
        self.degree = degree
        self.nontrivial = bool(value_class) and not _in_span(value_class, indeterminacy)
        self.choices_checked = choices
        self.choice_independent = agreed

    def __repr__(self):
        return (f"MasseyResult(degree={self.degree}, nontrivial={self.nontrivial}, "
                f"value={self.value.render()}, indeterminacy dim={len(self.indeterminacy)})")


def _in_span(v, vectors):
    e = Echelon(full=False)
    for w in vectors:
        e.add(w)
    return e.contains(v)


def massey_triple(g, a, b, c, choices=3):
    """<a, b, c> for cycles of a dg Lie slice: with dx = [a,b] and dy = [b,c],
    the class of [x,c] - (-1)^{|a|}[a,y], modulo [a,H] + [H,c]."""
    for z in (a, b, c):
        if not g.d(z).is_zero():
            raise PreconditionError("Massey inputs must be cycles")
    ab = g.bracket(a, b)
    bc = g.bracket(b, c)
    x = _solve_primitive(g, ab)
    y = _solve_primitive(g, bc)
    if x is None or y is None:
        raise PreconditionError("Massey product undefined: [a,b] or [b,c] is not a boundary")
    sa = -1 if a.degree % 2 else 1
    deg = a.degree + b.degree + c.degree + 1
    target = HomologyData(g, deg)

    def value(xx, yy):
        v = g.bracket(xx, c) - g.bracket(a, yy).scale(sa)
        if not g.d(v).is_zero():
            raise PreconditionError("Massey value is not a cycle ([a,c] does not vanish suitably)")
        return v

    v0 = value(x, y)
    cls0 = target.class_of(v0)
    ind = []
    h_right = HomologyData(g, b.degree + c.degree + 1).reps
    h_left = HomologyData(g, a.degree + b.degree + 1).reps
    for h in h_right:
        k = target.class_of(g.bracket(a, h))
        if k:
            ind.append(k)
    for h in h_left:
        k = target.class_of(g.bracket(h, c))
        if k:
            ind.append(k)
    # other primitives: add cycles of the source degrees
    zx = g.cycles(x.degree)
    zy = g.cycles(y.degree)
    agreed = True
    tried = 1
    for t in range(1, choices):
        xx = x
        yy = y
        if zx:
            xx = xx + zx[(t - 1) % len(zx)].scale(t)
        if zy:
            yy = yy + zy[(t * 7) % len(zy)].scale(-t)
        diff = vec_iadd(dict(target.class_of(value(xx, yy))), cls0, -1)
        tried += 1
        if diff and not _in_span(diff, ind):
            agreed = False
    if not agreed:
        raise VerificationError("Massey product depends on the choice of primitives")
    return MasseyResult(v0, cls0, ind, deg, agreed, tried)


# -- curved derivations acting on chains of a Quillen model ---------------------------

class LieChains:
    """Lambda(s L) for a free Quillen model, with labels (degree, Lie basis index)."""

    def __init__(self, space):
        self.space = space
        self.lie = space.lie

    def label_of(self, terms, degree):
        return {(degree, i): x for i, x in self.lie.coordinates(terms, degree).items()}

    def expansion(self, label):
        return self.lie.component(label[0])[label[1]][1]

    def coproduct(self, chain):
        out = {}
        for w, c in chain.items():
            for key, x in coproduct(w).items():
                vec_iadd(out, {key: x}, c)
        return out


def curved_action_on_chains(phi, chain, chains=None):
    """The coderivation of Lambda(sL) determined by a curved derivation."""
    space = phi.space
    chains = chains or LieChains(space)
    k = phi.degree
    out = {}
    nu_tau = space.to_nu(phi).get(len(space.gens))
    for w, c in chain.items():
        if nu_tau:
            s = -1 if k % 2 else 1
            lab = chains.label_of(nu_tau, k - 1)
            vec_iadd(out, multiply({(l,): x for l, x in lab.items()}, {w: 1}), s * c)
        left = 0
        for i, l in enumerate(w):
            img = space.der.apply(phi.theta, chains.expansion(l))
            if img:
                s = -1 if (k % 2 and left % 2) else 1
                lab = chains.label_of(img, l[0] + k)
                piece = multiply(multiply({w[:i]: 1}, {(l2,): x for l2, x in lab.items()}),
                                 {w[i + 1:]: 1})
                vec_iadd(out, piece, s * c)
            left += l[0] + 1
    return out


def _tensor_apply(phi_fn, deg_phi, tensor, side):
    """(phi (x) 1) or (1 (x) phi) on {(u, v): c} with Koszul signs."""
    out = {}
    for (u, v), c in tensor.items():
        if side == 0:
            for u2, x in phi_fn({u: 1}).items():
                vec_iadd(out, {(u2, v): x}, c)
        else:
            s = -1 if (deg_phi % 2 and word_degree(u) % 2) else 1
            for v2, x in phi_fn({v: 1}).items():
                vec_iadd(out, {(u, v2): x}, s * c)
    return out


def coderivation_defect(phi, word, chains=None):
    """Delta phi - (phi (x) 1 + 1 (x) phi) Delta on one word (zero when phi is a coderivation)."""
    chains = chains or LieChains(phi.space)
    fn = lambda ch: curved_action_on_chains(phi, ch, chains)
    lhs = chains.coproduct(fn({word: 1}))
    delta = chains.coproduct({word: 1})
    rhs = _tensor_apply(fn, phi.degree, delta, 0)
    vec_iadd(rhs, _tensor_apply(fn, phi.degree, delta, 1))
    return vec_iadd(lhs, rhs, -1)


def chain_words(space, max_degree):
    """All words of Lambda(sL) of degree <= max_degree on Lie basis labels."""
    labels = []
    for d in range(1, max_degree):
        labels += [(d, i) for i in range(len(space.lie.component(d)))]
    out = []
    for n in range(0, max_degree + 1):
        out += words_of_degree(labels, n)
    return out


__all__ = [
    "wedge", "multiply", "coproduct", "words_of_degree", "CEComplex", "ce_complex",
    "CECohomology", "ce_cohomology", "cup", "cup_cochains", "massey_triple", "MasseyResult",
    "HomologyData", "curved_action_on_chains", "coderivation_defect", "chain_words", "LieChains",
]
