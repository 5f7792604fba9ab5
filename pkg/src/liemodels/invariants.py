"""Invariants of finite monomial groups acting on weighted polynomial rings."""

import json
from fractions import Fraction

from .errors import InvalidInput, ParseError, PreconditionError, UnsupportedCase
from .linalg import Echelon, to_scalar, scalar_str

WEIGHT = "weight"
WORD_LENGTH = "word-length"
DEFAULT_CAP = 100_000


class MonomialGroup:
    """A finite group of monomial substitutions x_j -> c_j x_{perm[j]}.

    Elements are pairs (perm, scalars) of tuples.  The group is the closure
    of the given generators, enumerated eagerly up to ``cap`` elements.
    """

    def __init__(self, variables, generators, cap=DEFAULT_CAP):
        self.variables = [(str(n), int(w)) for n, w in variables]
        self.names = [n for n, _ in self.variables]
        self.weights = [w for _, w in self.variables]
        if any(w <= 0 for w in self.weights):
            raise InvalidInput("weights must be positive integers")
        n = len(self.variables)
        gens = [self._normalize(g) for g in generators]
        for perm, sc in gens:
            for j in range(n):
                if self.weights[perm[j]] != self.weights[j]:
                    raise InvalidInput("group element does not preserve weights")
        self.generators = gens
        self.elements = self._closure(gens, cap)

    @property
    def identity(self):
        n = len(self.variables)
        return (tuple(range(n)), tuple(Fraction(1) for _ in range(n)))

    def _normalize(self, g):
        """A tuple (perm, scalars), a dict {"perm", "scalars"}, or a matrix
        given as a list of rows."""
        if isinstance(g, dict):
            perm, sc = g["perm"], g.get("scalars", [1] * len(g["perm"]))
        elif isinstance(g, tuple):
            perm, sc = g
        else:
            return self.from_matrix(g)
        perm = tuple(int(p) for p in perm)
        sc = tuple(to_scalar(c) for c in sc)
        if sorted(perm) != list(range(len(self.variables))) or len(sc) != len(perm):
            raise InvalidInput("not a permutation")
        if any(c == 0 for c in sc):
            raise InvalidInput("zero scalar in a monomial matrix")
        return perm, sc

    def from_matrix(self, m):
        """Column j is the image of variable j."""
        n = len(self.variables)
        if len(m) != n or any(len(r) != n for r in m):
            raise InvalidInput("matrix size does not match the variables")
        perm, sc = [], []
        for j in range(n):
            nz = [(i, to_scalar(m[i][j])) for i in range(n) if to_scalar(m[i][j]) != 0]
            if len(nz) != 1:
                raise InvalidInput("not a monomial matrix")
            perm.append(nz[0][0])
            sc.append(nz[0][1])
        if sorted(perm) != list(range(n)):
            raise InvalidInput("not a monomial matrix")
        return tuple(perm), tuple(sc)

    @staticmethod
    def mul(g, h):
        """The substitution 'apply h, then g'."""
        pg, cg = g
        ph, ch = h
        perm = tuple(pg[ph[j]] for j in range(len(ph)))
        sc = tuple(ch[j] * cg[ph[j]] for j in range(len(ph)))
        return perm, sc

    def _closure(self, gens, cap):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise PreconditionError(f"group closure exceeds {cap} elements")
            frontier = nxt
        els = sorted(seen)
        return els

    @property
    def order(self):
        return len(self.elements)

    def is_closed(self):
        s = set(self.elements)
        return all(self.mul(g, h) in s for g in self.elements for h in self.elements) \
            and self.identity in s

    def act(self, g, poly):
        perm, sc = g
        out = {}
        for e, c in poly.terms.items():
            coef = c
            new = [0] * len(e)
            for j, k in enumerate(e):
                if k:
                    coef *= sc[j] ** k
                    new[perm[j]] += k
            key = tuple(new)
            t = out.get(key, 0) + coef
            if t:
                out[key] = t
            else:
                out.pop(key, None)
        return WeightedPoly(out, len(e) if poly.terms else len(self.variables))

    def to_json(self):
        return {"variables": [{"name": n, "weight": w} for n, w in self.variables],
                "generators": [{"perm": list(p), "scalars": [scalar_str(c) for c in s]}
                               for p, s in self.generators]}


def group_from_json(data):
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    try:
        variables = [(v["name"], v.get("weight", 1)) for v in data["variables"]]
        gens = data.get("generators", data.get("elements", []))
    except (KeyError, TypeError):
        raise ParseError("group file needs 'variables' and 'generators'", "$") from None
    return MonomialGroup(variables, gens)


# -- polynomials ----------------------------------------------------------------------

class WeightedPoly:
    """A polynomial as {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars=None):
        self.terms = {tuple(e): Fraction(c) for e, c in terms.items() if c}
        if nvars is None:
            nvars = len(next(iter(self.terms))) if self.terms else 0
        self.nvars = nvars

    @classmethod
    def variable(cls, i, n):
        e = [0] * n
        e[i] = 1
        return cls({tuple(e): 1}, n)

    @classmethod
    def constant(cls, c, n):
        return cls({(0,) * n: c}, n)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            t = out.get(e, 0) + c
            if t:
                out[e] = t
            else:
                out.pop(e, None)
        return WeightedPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return WeightedPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t = out.get(e, 0) + c1 * c2
                if t:
                    out[e] = t
                else:
                    out.pop(e, None)
        return WeightedPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = WeightedPoly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def _lift(self, other):
        if isinstance(other, WeightedPoly):
            return other
        return WeightedPoly.constant(other, self.nvars)

    def __eq__(self, other):
        return isinstance(other, WeightedPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degrees(self, weights=None):
        w = weights or [1] * self.nvars
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    def degree(self, weights=None):
        ds = self.degrees(weights)
        if len(ds) > 1:
            raise InvalidInput("inhomogeneous polynomial")
        return ds.pop() if ds else 0

    def substitute(self, values):
        """Replace variable i by the polynomial values[i]."""
        n = values[0].nvars if values else 0
        out = WeightedPoly({}, n)
        for e, c in self.terms.items():
            t = WeightedPoly.constant(c, n)
            for i, k in enumerate(e):
                if k:
                    t = t * values[i] ** k
            out = out + t
        return out

    def render(self, names):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"WeightedPoly({self.render([f'x{i + 1}' for i in range(self.nvars)])})"

    def to_json(self):
        return [[scalar_str(c), list(e)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, nvars):
        return cls({tuple(e): to_scalar(c) for c, e in data}, nvars)


def parse_poly(text, names):
    """A small parser for sums of products like '2*a*b^2 - c + 1/2'."""
    idx = {n: i for i, n in enumerate(names)}
    n = len(names)
    s = text.replace(" ", "").replace("-", "+-")
    out = WeightedPoly({}, n)
    for term in filter(None, s.split("+")):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        coef = Fraction(sign)
        e = [0] * n
        for f in filter(None, term.split("*")):
            base, _, p = f.partition("^")
            k = int(p) if p else 1
            if base in idx:
                e[idx[base]] += k
            else:
                try:
                    coef *= Fraction(base) ** k
                except ValueError:
                    raise ParseError(f"unknown symbol {base!r}", text) from None
        out = out + WeightedPoly({tuple(e): coef}, n)
    return out


# -- series ---------------------------------------------------------------------------

def _grading_weights(group, grading):
    if grading == WEIGHT:
        if any(w % 2 for w in group.weights):
            raise UnsupportedCase("Molien series under weight grading needs even weights")
        return list(group.weights)
    if grading == WORD_LENGTH:
        return [1] * len(group.weights)
    raise InvalidInput(f"unknown grading {grading!r}")


def _cycles(perm):
    seen = set()
    out = []
    for j in range(len(perm)):
        if j in seen:
            continue
        cyc = []
        k = j
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = perm[k]
        out.append(cyc)
    return out


def molien_series(group, grading, N):
    """Coefficients [c_0..c_N] of (1/|G|) sum_g 1/det(I - t^w g)."""
    w = _grading_weights(group, grading)
    total = [Fraction(0)] * (N + 1)
    for perm, sc in group.elements:
        ser = [Fraction(0)] * (N + 1)
        ser[0] = Fraction(1)
        for cyc in _cycles(perm):
            c = Fraction(1)
            for j in cyc:
                c *= sc[j]
            step = len(cyc) * w[cyc[0]]
            # multiply by 1/(1 - c t^step)
            for k in range(step, N + 1):
                ser[k] += c * ser[k - step]
        for k in range(N + 1):
            total[k] += ser[k]
    out = []
    for x in total:
        v = x / group.order
        if v.denominator != 1 or v < 0:
            raise PreconditionError("Molien coefficient is not a nonnegative integer")
        out.append(int(v))
    return out


def reynolds(group, poly):
    out = WeightedPoly({}, poly.nvars or len(group.variables))
    for g in group.elements:
        out = out + group.act(g, poly)
    return WeightedPoly({e: c / group.order for e, c in out.terms.items()}, out.nvars)


def monomials(weights, degree):
    """Exponent vectors of the given weighted degree, in lex-descending order."""
    n = len(weights)
    out = []

    def rec(i, rem, acc):
        if i == n:
            if rem == 0:
                out.append(tuple(acc))
            return
        for k in range(rem // weights[i], -1, -1):
            acc.append(k)
            rec(i + 1, rem - k * weights[i], acc)
            acc.pop()

    if degree >= 0:
        rec(0, degree, [])
    return out


def invariant_basis(group, degree, grading=WEIGHT):
    """Reynolds images of the monomials of one degree, reduced to a basis."""
    w = group.weights if grading == WEIGHT else [1] * len(group.weights)
    n = len(w)
    e = Echelon(full=True)
    for m in monomials(w, degree):
        r = reynolds(group, WeightedPoly({m: 1}, n))
        if r.terms:
            e.add(r.terms)
    return [WeightedPoly(v, n) for v in sorted(e.basis(), key=lambda v: min(v), reverse=False)]


class PresentationReport:
    def __init__(self):
        self.generators_invariant = True
        self.relations_hold = True
        self.presented_series = []
        self.molien = []
        self.image_dims = []
        self.first_failing_degree = None
        self.failures = []
        self.eps_series = None

    @property
    def ok(self):
        return (self.generators_invariant and self.relations_hold
                and self.first_failing_degree is None and not self.failures)

    def to_json(self):
        return {"ok": self.ok, "generators_invariant": self.generators_invariant,
                "relations_hold": self.relations_hold,
                "presented_series": self.presented_series, "molien": self.molien,
                "image_dims": self.image_dims,
                "first_failing_degree": self.first_failing_degree,
                "failures": self.failures,
                "eps_series": self.eps_series}


def presented_hilbert_series(gen_degrees, relations, N, signs=None):
    """Hilbert series of Q[y_1..y_m]/(relations) through degree N, by rank
    computations on multiples of the relations.  With ``signs`` (+-1 per
    generator) returns (plus, minus) coefficient lists for the induced
    involution instead."""
    m = len(gen_degrees)
    rel = [(r, r.degree(gen_degrees)) for r in relations]
    plus, minus = [], []
    for n in range(N + 1):
        monos = monomials(gen_degrees, n)
        e = Echelon(full=False)
        for r, rd in rel:
            for mono in monomials(gen_degrees, n - rd):
                e.add((r * WeightedPoly({mono: 1}, m)).terms)
        if signs is None:
            plus.append(len(monos) - e.rank)
            continue
        # the relations are assumed sign-homogeneous; split by parity
        def parity(mono):
            s = 1
            for k, g in zip(mono, signs):
                if g < 0 and k % 2:
                    s = -s
            return s
        ep = sum(1 for x in monos if parity(x) > 0)
        em = len(monos) - ep
        rp = rm = 0
        rows = e.basis()
        for row in rows:
            if parity(min(row)) > 0:
                rp += 1
            else:
                rm += 1
        plus.append(ep - rp)
        minus.append(em - rm)
    return plus if signs is None else (plus, minus)


def verify_presentation(group, generators, relations, N, grading=WEIGHT, signs=None,
                        full_group=None):
    """Check that the generators are invariant, the relations hold after
    substitution, and the presented ring has the Molien series through N.
    Also checks that the substituted monomials span the invariants in every
    degree.  With ``signs`` and ``full_group`` (a group containing ``group``
    with index 2) the involution-refined series is compared as well."""
    rep = PresentationReport()
    w = group.weights if grading == WEIGHT else [1] * len(group.weights)
    if grading == WEIGHT:
        _grading_weights(group, grading)
    for k, g in enumerate(generators):
        if reynolds(group, g) != g:
            rep.generators_invariant = False
            rep.failures.append(f"generator {k} is not invariant")
    for k, r in enumerate(relations):
        if not r.substitute(generators).is_zero():
            rep.relations_hold = False
            rep.failures.append(f"relation {k} does not hold")
    degs = [g.degree(w) for g in generators]
    rep.molien = molien_series(group, grading, N)
    rep.presented_series = presented_hilbert_series(degs, relations, N)
    nv = len(group.variables)
    for n in range(N + 1):
        e = Echelon(full=False)
        for mono in monomials(degs, n):
            e.add(WeightedPoly({mono: 1}, len(degs)).substitute(generators).terms)
        rep.image_dims.append(e.rank)
    for n in range(N + 1):
        if not (rep.presented_series[n] == rep.molien[n] == rep.image_dims[n]):
            rep.first_failing_degree = n
            rep.failures.append(f"series mismatch in degree {n}")
            break
    if signs is not None and full_group is not None:
        plus, minus = presented_hilbert_series(degs, relations, N, signs)
        inv_plus = molien_series(full_group, grading, N)
        inv_minus = [a - b for a, b in zip(rep.molien, inv_plus)]
        rep.eps_series = {"plus": plus, "minus": minus}
        if plus != inv_plus or minus != inv_minus:
            for n in range(N + 1):
                if plus[n] != inv_plus[n] or minus[n] != inv_minus[n]:
                    rep.failures.append(f"involution-refined series mismatch in degree {n}")
                    if rep.first_failing_degree is None:
                        rep.first_failing_degree = n
                    break
    return rep


# -- catalog ---------------------------------------------------------------------------

def swap_group_abcd():
    """Sigma_2 acting on Q[a, b, c, d] by the permutation (ad)(bc)."""
    return MonomialGroup([("a", 1), ("b", 1), ("c", 1), ("d", 1)], [((3, 2, 1, 0), (1, 1, 1, 1))])


def signed_permutation_group(n, weight=1):
    """Sigma_n^+- on n variables."""
    vs = [(f"x{i + 1}", weight) for i in range(n)]
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append((tuple(p), (1,) * n))
    sc = [1] * n
    sc[0] = -1
    gens.append((tuple(range(n)), tuple(sc)))
    return MonomialGroup(vs, gens)


def even_sphere_pair_group(d, oriented=False):
    """Gamma of S^d x S^d (d even) on Q[a1, a2, b12, b21]: (sigma, lambda)
    sends a_i to a_sigma(i) and b_ij to lambda_i b_sigma(i)sigma(j).  The
    oriented subgroup is lambda_1 lambda_2 = 1."""
    if d % 2:
        raise InvalidInput("d must be even")
    vs = [("a1", 2 * d), ("a2", 2 * d), ("b12", d), ("b21", d)]
    swap = ((1, 0, 3, 2), (1, 1, 1, 1))
    if oriented:
        both = ((0, 1, 2, 3), (1, 1, -1, -1))
        return MonomialGroup(vs, [swap, both])
    flip1 = ((0, 1, 2, 3), (1, 1, -1, 1))
    return MonomialGroup(vs, [swap, flip1])


def even_sphere_pair_presentation(d):
    """Generators alpha0, alpha1, alpha2, beta1, beta2, eta and relations of
    the oriented even-d, n=2 invariant ring, as polynomials."""
    n = 4
    a1, a2, b12, b21 = (WeightedPoly.variable(i, n) for i in range(4))
    a, b, c, dd = a1, b12 ** 2, b21 ** 2, a2
    gens = [b12 * b21, a + dd, b + c, a * dd, b * c, a * b + c * dd]
    names = ["α0", "α1", "α2", "β1", "β2", "η"]
    m = 6
    y = [WeightedPoly.variable(i, m) for i in range(m)]
    al0, al1, al2, be1, be2, eta = y
    rels = [eta ** 2 - al1 * al2 * eta + (al1 ** 2 * be2 + be1 * al2 ** 2 - 4 * be1 * be2),
            al0 ** 2 - be2]
    signs = [-1, 1, 1, 1, 1, 1]
    return gens, rels, names, signs


def swap_presentation():
    """Primary and secondary invariants of (ad)(bc) on Q[a,b,c,d] with the
    relation expressing (ab+cd)^2."""
    n = 4
    a, b, c, d = (WeightedPoly.variable(i, n) for i in range(4))
    gens = [a + d, b + c, a * d, b * c, a * b + c * d]
    names = ["α1", "α2", "β1", "β2", "η"]
    y = [WeightedPoly.variable(i, 5) for i in range(5)]
    al1, al2, be1, be2, eta = y
    rels = [eta ** 2 - al1 * al2 * eta + (al1 ** 2 * be2 + be1 * al2 ** 2 - 4 * be1 * be2)]
    return gens, rels, names


def abcd_identity_holds():
    """(ab+cd)^2 = (a+d)(b+c)(ab+cd) - ((a+d)^2 bc + ad(b+c)^2 - 4 ad bc)."""
    a, b, c, d = (WeightedPoly.variable(i, 4) for i in range(4))
    lhs = (a * b + c * d) ** 2
    rhs = (a + d) * (b + c) * (a * b + c * d) - ((a + d) ** 2 * b * c + a * d * (b + c) ** 2
                                                 - 4 * (a * d) * (b * c))
    return lhs == rhs


__all__ = [
    "MonomialGroup", "WeightedPoly", "group_from_json", "parse_poly", "molien_series",
    "reynolds", "monomials", "invariant_basis", "verify_presentation",
    "presented_hilbert_series", "PresentationReport", "swap_group_abcd",
    "signed_permutation_group", "even_sphere_pair_group", "even_sphere_pair_presentation",
    "swap_presentation", "abcd_identity_holds", "WEIGHT", "WORD_LENGTH",
]
