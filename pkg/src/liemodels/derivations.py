"""Derivation complexes of Sullivan and Quillen models.

Conventions (homological grading throughout):

* a derivation of degree k sends a generator of degree h to degree h + k;
  for a Sullivan algebra it lowers cohomological degree by k;
* the differential of the complex is [d, t] = d t - (-1)^{|t|} t d;
* the bracket is [t, s] = t s - (-1)^{|t||s|} s t.

Curved derivations of a Quillen model L are pairs (t, s x) with x in L of
degree |t| - 1.  They are identified with derivations n of the free product
of L with a free generator tau of degree -1 that preserve L and send tau into
L, via n|_L = t and n(tau) = (-1)^{|x|} x.  Transporting the commutator
bracket and the twisted differential (d_tau = d + ad_tau on L, d_tau(tau) =
[tau, tau]/2) along this identification gives the cone formulas

    D(t, s x) = ([d, t] + ad_x, -s dx),

which ``CurvedSpace.differential`` implements directly; the property tests
compare them against the derivations of the free product.
"""

from fractions import Fraction

from .errors import InvalidInput, VerificationError, WindowError
from .graded import (Generator, GeneratorSet, LieBasis, LieQuotient, format_monomial,
                     format_word_sum, free_gca_basis, tensor_bracket)
from .linalg import (Echelon, SparseMatrix, kernel_of, span_basis, trace_form_radical,
                     vec_iadd, vec_scale)
from .models import QUILLEN, SULLIVAN, gca_apply_derivation, tensor_apply_derivation


class Derivation:
    """A homogeneous derivation given by its values on the generators."""

    __slots__ = ("space", "degree", "values")

    def __init__(self, space, degree, values):
        self.space = space
        self.degree = degree
        self.values = {i: v for i, v in values.items() if v}

    def raw(self):
        return {(i, k): x for i, v in self.values.items() for k, x in v.items()}

    def is_zero(self):
        return not self.values

    def __add__(self, other):
        vals = {i: dict(v) for i, v in self.values.items()}
        for i, v in other.values.items():
            vals[i] = vec_iadd(vals.get(i, {}), v)
        return Derivation(self.space, self.degree, vals)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Derivation(self.space, self.degree,
                          {i: vec_scale(v, c) for i, v in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, Derivation) and self.degree == other.degree
                and self.values == other.values)

    def __hash__(self):
        return hash((self.degree, frozenset(self.raw().items())))

    def render(self):
        return self.space.render(self)

    def __repr__(self):
        return f"Derivation(deg {self.degree}: {self.render()})"


def combine(elements, coeffs):
    """Sum of c_i * elements[i] for a coefficient dict or list."""
    items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
    out = None
    for i, c in items:
        if not c:
            continue
        t = elements[i].scale(c)
        out = t if out is None else out + t
    return out


class DerivationSpace:
    """All derivations of a Sullivan or Quillen model, degree by degree."""

    def __init__(self, model):
        self.model = model
        self.gens = model.gens
        self.kind = model.kind
        self.hdeg = model.gens.hdeg
        self._basis = {}
        self._index = {}
        if self.kind == QUILLEN:
            self.lie = LieBasis(self.gens)

    # degrees in which the space can be nonzero
    def zero_in_degree(self, k):
        if self.kind == SULLIVAN:
            return k > max(-h for h in self.hdeg)
        return k < 1 - max(self.hdeg)

    def target_degree(self, i, k):
        return self.hdeg[i] + k

    def _component(self, i, k):
        """(key, expansion) pairs spanning the possible values on generator i."""
        if self.kind == SULLIVAN:
            cd = -(self.hdeg[i] + k)
            return [(m, {m: Fraction(1)}) for m in free_gca_basis(self.gens, cd)]
        td = self.hdeg[i] + k
        return list(self.lie.component(td)) if td >= 1 else []

    def basis(self, k):
        b = self._basis.get(k)
        if b is None:
            b = []
            idx = {}
            for i in range(len(self.gens)):
                for key, exp in self._component(i, k):
                    idx[(i, key)] = len(b)
                    b.append(Derivation(self, k, {i: exp}))
            self._basis[k] = b
            self._index[k] = idx
        return b

    def dim(self, k):
        return len(self.basis(k))

    def coords(self, theta):
        """Coordinates of a derivation on ``basis(theta.degree)``."""
        k = theta.degree
        self.basis(k)
        idx = self._index[k]
        out = {}
        for i, v in theta.values.items():
            if self.kind == SULLIVAN:
                for m, x in v.items():
                    out[idx[(i, m)]] = x
            else:
                td = self.hdeg[i] + k
                comp = self.lie.component(td)
                for j, x in self.lie.coordinates(v, td).items():
                    out[idx[(i, comp[j][0])]] = x
        return out

    # -- algebra --------------------------------------------------------------
    def apply(self, theta, terms):
        """theta applied to an algebra element (monomial or word dict)."""
        if self.kind == SULLIVAN:
            return gca_apply_derivation(self.gens, theta.values, theta.degree % 2, terms)
        return tensor_apply_derivation(self.hdeg, theta.values, theta.degree % 2, terms)

    def _apply_d(self, terms):
        m = self.model
        if self.kind == SULLIVAN:
            return gca_apply_derivation(self.gens, m.differential, 1, terms)
        return tensor_apply_derivation(self.hdeg, m.differential, 1, terms)

    def differential(self, theta):
        """[d, theta] = d theta - (-1)^{|theta|} theta d, on generators."""
        s = 1 if theta.degree % 2 else -1
        vals = {}
        for i, v in theta.values.items():
            dv = self._apply_d(v)
            if dv:
                vals[i] = dv
        for j, dj in self.model.differential.items():
            t = self.apply(theta, dj)
            if t:
                vals[j] = vec_iadd(vals.get(j, {}), t, s)
        return Derivation(self, theta.degree - 1, vals)

    def bracket(self, a, b):
        s = -1 if (a.degree * b.degree) % 2 == 0 else 1
        vals = {}
        for i, v in b.values.items():
            t = self.apply(a, v)
            if t:
                vals[i] = dict(t)
        for i, v in a.values.items():
            t = self.apply(b, v)
            if t:
                vals[i] = vec_iadd(vals.get(i, {}), t, s)
        return Derivation(self, a.degree + b.degree, vals)

    def zero(self, k):
        return Derivation(self, k, {})

    def inner(self, x_terms, x_degree):
        """ad_x for a Lie element x (Quillen only)."""
        vals = {}
        for i, h in enumerate(self.hdeg):
            t = tensor_bracket(x_terms, x_degree, {chr(i): Fraction(1)}, h)
            if t:
                vals[i] = t
        return Derivation(self, x_degree, vals)

    def render(self, theta):
        """Terms 'c·m∂/∂g' with the monomial (or word) m and generator g."""
        terms = []
        for i in sorted(theta.values):
            name = self.gens.names[i]
            v = theta.values[i]
            keys = sorted(v, reverse=True) if self.kind == SULLIVAN else sorted(v, key=lambda w: (len(w), w))
            for key in keys:
                if self.kind == SULLIVAN:
                    m = format_monomial(self.gens, key)
                else:
                    m = "".join(self.gens.names[ord(ch)] for ch in key)
                m = "" if m == "1" else m
                terms.append((v[key], f"{m}∂/∂{name}"))
        return render_terms(terms)


def render_terms(terms):
    """Join (coefficient, body) pairs as 'c·body' with signs."""
    if not terms:
        return "0"
    out = []
    for c, body in terms:
        a = abs(c)
        text = body if a == 1 else f"{format_scalar(a)}·{body}"
        if not out:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


def format_scalar(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def der_basis(model, degree):
    return DerivationSpace(model).basis(degree)


def der_differential(model, theta):
    return theta.space.differential(theta)


def derivation(model_or_space, values, degree=None):
    """Build a derivation from {generator name: value}.

    A value is a list of generator names (one monomial or word with
    coefficient 1) or a list of [coefficient, [names]] terms.  The degree is
    read off from the values unless given.
    """
    from .models import _parse_term
    space = model_or_space if isinstance(model_or_space, DerivationSpace) else DerivationSpace(model_or_space)
    gens = space.gens
    vals = {}
    for name, v in values.items():
        if name not in gens.index:
            raise InvalidInput(f"unknown generator {name!r}")
        terms = [[1, v]] if all(isinstance(x, str) for x in v) else v
        acc = {}
        for j, t in enumerate(terms):
            vec_iadd(acc, _parse_term(gens, space.kind, t, f"$.{name}[{j}]"))
        i = gens.index[name]
        if acc:
            key = next(iter(acc))
            if space.kind == SULLIVAN:
                vd = sum(e * -h for e, h in zip(key, gens.hdeg))
                k = -gens.hdeg[i] - vd
            else:
                k = gens.word_degree(key) - gens.hdeg[i]
            if degree is None:
                degree = k
            elif degree != k:
                raise InvalidInput("inhomogeneous derivation")
        vals[i] = acc
    if degree is None:
        raise InvalidInput("the degree of a zero derivation must be given")
    return Derivation(space, degree, vals)


# -- curved derivations ---------------------------------------------------------------

class CurvedDerivation:
    """A pair (theta, s xi) in the cone of ad: L -> Der L."""

    __slots__ = ("space", "degree", "theta", "xi")

    def __init__(self, space, degree, theta, xi):
        self.space = space
        self.degree = degree
        self.theta = theta
        self.xi = {w: c for w, c in xi.items() if c}

    @property
    def derivation_part(self):
        return self.theta

    @property
    def suspended_part(self):
        return self.xi

    def raw(self):
        r = self.theta.raw()
        n = len(self.space.gens)
        for w, c in self.xi.items():
            r[(n, w)] = c
        return r

    def is_zero(self):
        return self.theta.is_zero() and not self.xi

    def __add__(self, other):
        return CurvedDerivation(self.space, self.degree, self.theta + other.theta,
                                vec_iadd(dict(self.xi), other.xi))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return CurvedDerivation(self.space, self.degree, self.theta.scale(c), vec_scale(self.xi, c))

    def __eq__(self, other):
        return (isinstance(other, CurvedDerivation) and self.degree == other.degree
                and self.theta == other.theta and self.xi == other.xi)

    def __hash__(self):
        return hash((self.degree, frozenset(self.raw().items())))

    def render(self):
        return self.space.render(self)

    def __repr__(self):
        return f"CurvedDerivation(deg {self.degree}: {self.render()})"


class CurvedSpace:
    """Curved derivations of a Quillen model: (Der L)_k + s L_{k-1}."""

    def __init__(self, model):
        if model.kind != QUILLEN:
            raise InvalidInput("curved derivations need a Quillen model")
        self.model = model
        self.gens = model.gens
        self.der = DerivationSpace(model)
        self.lie = self.der.lie
        self._basis = {}
        self._ext = None

    def zero_in_degree(self, k):
        return self.der.zero_in_degree(k) and k - 1 < 1

    def basis(self, k):
        b = self._basis.get(k)
        if b is None:
            zero_xi = {}
            b = [CurvedDerivation(self, k, t, zero_xi) for t in self.der.basis(k)]
            zero_t = self.der.zero(k)
            if k - 1 >= 1:
                b += [CurvedDerivation(self, k, zero_t, exp) for _, exp in self.lie.component(k - 1)]
            self._basis[k] = b
        return b

    def dim(self, k):
        return len(self.basis(k))

    def coords(self, el):
        k = el.degree
        out = self.der.coords(el.theta)
        if el.xi:
            off = self.der.dim(k)
            for j, x in self.lie.coordinates(el.xi, k - 1).items():
                out[off + j] = x
        return out

    def differential(self, el):
        """D(theta, s xi) = ([d, theta] + ad_xi, -s d xi)."""
        k = el.degree
        t = self.der.differential(el.theta)
        if el.xi:
            t = t + self.der.inner(el.xi, k - 1)
            dxi = self.der._apply_d(el.xi)
            xi = vec_scale(dxi, -1)
        else:
            xi = {}
        return CurvedDerivation(self, k - 1, t, xi)

    # -- the free-product picture --------------------------------------------------
    def extended_gens(self):
        if self._ext is None:
            self._ext = self.gens.extend([Generator("τ", -1)])
        return self._ext

    def to_nu(self, el):
        """Values of the derivation of L * (tau) corresponding to el."""
        vals = dict(el.theta.values)
        if el.xi:
            s = -1 if (el.degree - 1) % 2 else 1
            vals[len(self.gens)] = vec_scale(el.xi, s)
        return vals

    def from_nu(self, degree, vals):
        n = len(self.gens)
        xi = vals.get(n, {})
        for i, v in vals.items():
            for w in v:
                if chr(n) in w:
                    raise VerificationError("curved derivation value contains tau")
        s = -1 if (degree + 1) % 2 else 1
        theta = Derivation(self.der, degree, {i: v for i, v in vals.items() if i < n})
        return CurvedDerivation(self, degree, theta, vec_scale(xi, s))

    def _apply_nu(self, vals, parity, terms):
        hd = self.extended_gens().hdeg
        return tensor_apply_derivation(hd, vals, parity, terms)

    def bracket(self, a, b):
        """Commutator in the free-product picture, transported back."""
        na, nb = self.to_nu(a), self.to_nu(b)
        pa, pb = a.degree % 2, b.degree % 2
        s = -1 if (a.degree * b.degree) % 2 == 0 else 1
        out = {}
        for i, v in nb.items():
            t = self._apply_nu(na, pa, v)
            if t:
                out[i] = dict(t)
        for i, v in na.items():
            t = self._apply_nu(nb, pb, v)
            if t:
                out[i] = vec_iadd(out.get(i, {}), t, s)
        return self.from_nu(a.degree + b.degree, {i: v for i, v in out.items() if v})

    def twisted_differential_values(self):
        """d_tau on the generators of L * (tau)."""
        n = len(self.gens)
        hd = self.extended_gens().hdeg
        tau = {chr(n): Fraction(1)}
        vals = {}
        for i in range(n):
            v = dict(self.model.d_of(i))
            vec_iadd(v, tensor_bracket(tau, -1, {chr(i): Fraction(1)}, hd[i]))
            vals[i] = v
        vals[n] = vec_scale(tensor_bracket(tau, -1, tau, -1), Fraction(1, 2))
        return vals

    def nu_differential(self, el):
        """[d_tau, n] computed on L * (tau); used to cross-check ``differential``."""
        nu = self.to_nu(el)
        dt = self.twisted_differential_values()
        p = el.degree % 2
        s = 1 if p else -1
        n = len(self.gens)
        out = {}
        for i in range(n + 1):
            v = nu.get(i)
            acc = {}
            if v:
                vec_iadd(acc, self._apply_nu(dt, 1, v))
            vec_iadd(acc, self._apply_nu(nu, p, dt[i]), s)
            if acc:
                out[i] = acc
        return out

    def render(self, el):
        parts = []
        if not el.theta.is_zero():
            parts.append(self.der.render(el.theta))
        if el.xi:
            parts.append(f"s({format_word_sum(self.gens, el.xi)})")
        return " + ".join(parts) if parts else "0"

    def zero(self, k):
        return CurvedDerivation(self, k, self.der.zero(k), {})


def curved_der(model, lo, hi):
    """The slice of curved derivations in degrees lo..hi."""
    return DglaSlice(CurvedSpace(model), lo, hi, name=f"Der^c {model.metadata.get('name', '')}")


# -- slices ---------------------------------------------------------------------------

class DglaSlice:
    """A window lo..hi of a dg Lie algebra of derivations.

    Each degree is either the whole ambient component or a subspace given by
    spanning elements.  With ``floor=True`` degrees below lo are zero (the
    slice is a truncation); otherwise asking for them is a window error.
    Degrees above hi are zero only where the ambient space is known to vanish.
    """

    def __init__(self, space, lo, hi, subspaces=None, floor=False, name=""):
        self.space = space
        self.lo = lo
        self.hi = hi
        self.floor = floor
        self.name = name
        self._sub = {}
        self._ech = {}
        for k, elems in (subspaces or {}).items():
            self._sub[k] = self._independent(elems)

    @staticmethod
    def _independent(elems):
        e = Echelon(full=False)
        out = []
        for el in elems:
            if e.add(el.raw()):
                out.append(el)
        return out

    def in_window(self, k):
        return self.lo <= k <= self.hi

    def _check(self, k):
        if self.lo <= k <= self.hi:
            return True
        if k < self.lo and self.floor:
            return False
        if self.space.zero_in_degree(k):
            return False
        raise WindowError(f"degree {k} lies outside the computed window {self.lo}..{self.hi}")

    def basis(self, k):
        if not self._check(k):
            return []
        if k in self._sub:
            return self._sub[k]
        return self.space.basis(k)

    def dim(self, k):
        return len(self.basis(k))

    def dims(self):
        return {k: self.dim(k) for k in range(self.lo, self.hi + 1)}

    def is_full(self, k):
        return k not in self._sub

    def coords(self, el):
        """Coordinates of an element on ``basis(el.degree)``; raises if the
        element is not in the slice."""
        k = el.degree
        if not self._check(k):
            if el.is_zero():
                return {}
            raise VerificationError(f"nonzero element in a zero degree {k}")
        if k not in self._sub:
            return self.space.coords(el)
        e = self._ech.get(k)
        if e is None:
            e = Echelon(full=False, track=True)
            for j, b in enumerate(self._sub[k]):
                e.add(b.raw(), label=j)
            self._ech[k] = e
        c = e.express(el.raw())
        if c is None:
            raise VerificationError(f"element is not in the slice in degree {k}")
        return c

    def contains(self, el):
        try:
            self.coords(el)
            return True
        except VerificationError:
            return False

    def d(self, el):
        return self.space.differential(el)

    def bracket(self, a, b):
        return self.space.bracket(a, b)

    def element(self, k, coeffs):
        b = self.basis(k)
        out = combine(b, coeffs)
        return out if out is not None else self.space.zero(k)

    def differential_matrix(self, k):
        """Matrix of d: degree k -> degree k-1 in the slice bases."""
        src = self.basis(k)
        tgt_dim = self.dim(k - 1)
        ent = {}
        for j, b in enumerate(src):
            for i, x in self.coords(self.d(b)).items():
                ent[(i, j)] = x
        return SparseMatrix(tgt_dim, len(src), ent)

    def bracket_constants(self, p, q):
        """{(i, j): coords of [b_i, b_j]} for bases in degrees p and q."""
        out = {}
        bp, bq = self.basis(p), self.basis(q)
        for i, a in enumerate(bp):
            for j, b in enumerate(bq):
                c = self.coords(self.bracket(a, b)) if self._check_soft(p + q) else {}
                if c:
                    out[(i, j)] = c
        return out

    def _check_soft(self, k):
        try:
            return self._check(k)
        except WindowError:
            return False

    def rank_d(self, k):
        """Rank of d on degree k, computed on raw coordinates."""
        e = Echelon(full=False)
        for b in self.basis(k):
            e.add(self.d(b).raw())
        return e.rank

    def cycles(self, k):
        """Basis of the cycles in degree k (elements of the slice)."""
        src = self.basis(k)
        if not src:
            return []
        self._check(k - 1)
        images = [self.d(b).raw() for b in src]
        return [combine(src, v) for v in kernel_of(images)]

    def boundaries(self, k):
        return span_elements([self.d(b) for b in self.basis(k + 1)])


def span_elements(elems):
    """An independent subfamily spanning the same space (deterministic)."""
    e = Echelon(full=False)
    out = []
    for el in elems:
        if not el.is_zero() and e.add(el.raw()):
            out.append(el)
    return out


def truncate(g, k):
    """g<k>: zero below degree k, cycles in degree k, unchanged above."""
    subs = {n: g.basis(n) for n in range(max(g.lo, k + 1), g.hi + 1) if not g.is_full(n)}
    subs[k] = g.cycles(k) if g.in_window(k) or not g.space.zero_in_degree(k) else []
    return DglaSlice(g.space, k, g.hi, subs, floor=True, name=f"{g.name}<{k}>")


def homology(g, degree, representatives=True):
    """(dimension, representative cycles) of H_degree of a slice."""
    g._check(degree)
    g._check(degree + 1)
    g._check(degree - 1)
    n = g.dim(degree)
    if not representatives:
        h = n - g.rank_d(degree) - g.rank_d(degree + 1)
        return h, None
    z = g.cycles(degree)
    b = g.boundaries(degree)
    e = Echelon(full=True)
    for x in b:
        e.add(x.raw())
    reps = []
    for x in z:
        if e.add(x.raw()):
            reps.append(x)
    return len(reps), reps


def homology_dims(g, degrees):
    return {k: homology(g, k, representatives=False)[0] for k in degrees}


def lcs_component(g, k, degree, _memo=None):
    """(dim, spanning elements) of the k-th lower central series term
    Gamma^k g in one degree: Gamma^1 = g, Gamma^{k+1} = [Gamma^k, g]."""
    memo = _memo if _memo is not None else {}
    key = (k, degree)
    if key in memo:
        return memo[key]
    if k <= 1:
        res = g.basis(degree) if g._check_soft(degree) else []
        res = list(res)
    else:
        elems = []
        for p in range(g.lo, g.hi + 1):
            q = degree - p
            if not (g.lo <= q <= g.hi):
                continue
            left = lcs_component(g, k - 1, p, memo)[1]
            right = g.basis(q)
            for a in left:
                for b in right:
                    c = g.bracket(a, b)
                    if not c.is_zero():
                        elems.append(c)
        res = span_elements(elems)
    memo[key] = (len(res), res)
    return memo[key]


# -- nilradicals ----------------------------------------------------------------------

def derivation_space(model):
    return DerivationSpace(model) if model.kind == SULLIVAN else CurvedSpace(model)


def _rep_basis(space, top):
    """Basis keys of the faithful truncated representation, per degree."""
    model = space.model
    out = []
    if model.kind == SULLIVAN:
        for cd in range(0, top + 1):
            for m in free_gca_basis(model.gens, cd):
                out.append((cd, m, {m: Fraction(1)}))
    else:
        lie = LieBasis(model.gens)
        for hd in range(1, top + 1):
            for lead, exp in lie.component(hd):
                out.append((hd, lead, exp))
        space._rep_lie = lie
    return out


def representation_matrix(space, theta, rep):
    """Matrix of a degree-0 derivation on the truncated algebra."""
    model = space.model
    der = space.der if isinstance(space, CurvedSpace) else space
    t = theta.theta if isinstance(theta, CurvedDerivation) else theta
    n = len(rep)
    pos = {}
    for j, (deg, key, _) in enumerate(rep):
        pos[(deg, key)] = j
    mat = [[Fraction(0)] * n for _ in range(n)]
    for j, (deg, key, exp) in enumerate(rep):
        img = der.apply(t, exp)
        if not img:
            continue
        if model.kind == SULLIVAN:
            for m, x in img.items():
                mat[pos[(deg, m)]][j] = x
        else:
            lie = space._rep_lie
            comp = lie.component(deg)
            for i, x in lie.coordinates(img, deg).items():
                mat[pos[(deg, comp[i][0])]][j] = x
    return mat


class NilradicalResult(DglaSlice):
    pass


def nilradical(model, hi=None, top=None, verify=True):
    """nil of g<0>, where g is Der of a Sullivan model or the curved
    derivations of a Quillen model, in degrees 0..hi.

    The degree-0 part is the preimage, inside the degree-0 cycles, of the
    trace-form radical of the algebra generated by their action on the
    algebra truncated at the top generator degree (or at ``top``).
    """
    space = derivation_space(model)
    if hi is None:
        if model.kind != SULLIVAN:
            raise InvalidInput("a Quillen nilradical needs an explicit top degree")
        hi = max(-h for h in model.gens.hdeg)
    full = DglaSlice(space, 0, hi, floor=True)
    z0 = full.cycles(0)
    top = top if top is not None else max(abs(h) for h in model.gens.hdeg)
    rep = _rep_basis(space, top)
    mats = [representation_matrix(space, t, rep) for t in z0]
    n0 = []
    if z0:
        flat = [{i * len(rep) + j: x for i, row in enumerate(m) for j, x in enumerate(row) if x}
                for m in mats]
        if verify and _rank(flat) != len(z0):
            raise VerificationError("truncated representation is not faithful on Z_0")
        rad = trace_form_radical(mats) if rep else None
        e = Echelon(full=True)
        if rad is not None:
            for b in rad.basis:
                e.add({k: x for k, x in enumerate(b) if x})
        residuals = [e.reduce(v) for v in flat]
        for c in kernel_of(residuals):
            n0.append(combine(z0, c))
    nil = NilradicalResult(space, 0, hi, {0: n0}, floor=True,
                           name=f"nil {model.metadata.get('name', '')}")
    nil.z0 = z0
    nil.rep_size = len(rep)
    if verify:
        verify_nilradical(nil)
    return nil


def _rank(vectors):
    e = Echelon(full=False)
    for v in vectors:
        e.add(v)
    return e.rank


def verify_nilradical(nil):
    """Ideal check on bases, B_0 inside N_0, and LCS termination."""
    n0 = nil.basis(0)
    for z in nil.z0:
        for x in n0:
            if not nil.contains(nil.bracket(z, x)):
                raise VerificationError("N_0 is not an ideal of Z_0")
    for b in nil.space.basis(1) if nil.hi >= 1 else []:
        if not nil.contains(nil.d(b)):
            raise VerificationError("a degree-0 boundary is not in N_0")
    memo = {}
    prev = None
    bound = (nil.hi + 2) * (nil.rep_size + 2) + 2
    for k in range(1, bound + 1):
        dims = tuple(lcs_component(nil, k, n, memo)[0] for n in range(0, nil.hi + 1))
        if not any(dims):
            nil.nilpotency_class = k - 1
            return True
        if dims == prev:
            raise VerificationError("lower central series of N does not terminate")
        prev = dims
    raise VerificationError("lower central series of N does not terminate")


# -- derivations annihilating an element ---------------------------------------------

def der_annihilating(model, omega, degree):
    """Basis of {theta in Der_k : theta(omega) = 0} for a free Lie model."""
    space = DerivationSpace(model)
    terms = omega.terms if hasattr(omega, "terms") else omega
    basis = space.basis(degree)
    images = [space.apply(t, terms) for t in basis]
    return [combine(basis, c) for c in kernel_of(images)]


def der_omega_slice(model, omega, lo, hi, truncate_at=1):
    """Der_omega of a free Lie model in degrees lo..hi, truncated."""
    space = DerivationSpace(model)
    subs = {k: der_annihilating(model, omega, k) for k in range(lo, hi + 1)}
    g = DglaSlice(space, lo, hi, subs, name="Der_omega")
    return truncate(g, truncate_at) if truncate_at is not None else g


# -- outer derivations of a quotient Lie algebra --------------------------------------

class QuotientDerivation:
    __slots__ = ("space", "degree", "values")

    def __init__(self, space, degree, values):
        self.space = space
        self.degree = degree
        self.values = {i: v for i, v in values.items() if v}

    def raw(self):
        return {(i, j): x for i, v in self.values.items() for j, x in v.items()}

    def is_zero(self):
        return not self.values

    def __add__(self, other):
        vals = {i: dict(v) for i, v in self.values.items()}
        for i, v in other.values.items():
            vals[i] = vec_iadd(vals.get(i, {}), v)
        return QuotientDerivation(self.space, self.degree, vals)

    def scale(self, c):
        return QuotientDerivation(self.space, self.degree,
                                  {i: vec_scale(v, c) for i, v in self.values.items()})

    def render(self):
        return self.space.render(self)


class QuotientDerivationSpace:
    """Derivations of L/(relations) in quotient coordinates, modulo inner
    derivations.  Elements store, for every generator, the quotient
    coordinates of its value."""

    def __init__(self, model):
        if model.kind != QUILLEN:
            raise InvalidInput("outer derivations need a Quillen model")
        if any(model.differential.values()):
            raise InvalidInput("outer_quotient expects a model with zero differential")
        self.model = model
        self.gens = model.gens
        self.hdeg = model.gens.hdeg
        self.q = LieQuotient(model.gens, model.relations)
        self._der = {}
        self._basis = {}
        self._ech = {}

    def zero_in_degree(self, k):
        return k < 1 - max(self.hdeg)

    def _lift_values(self, qd):
        vals = {}
        for i, v in qd.values.items():
            td = self.hdeg[i] + qd.degree
            reps = self.q.representatives(td)
            acc = {}
            for j, x in v.items():
                vec_iadd(acc, reps[j], x)
            vals[i] = acc
        return vals

    def _to_quotient(self, degree, word_vals):
        vals = {}
        for i, v in word_vals.items():
            c = self.q.coordinates(v, self.hdeg[i] + degree)
            if c:
                vals[i] = c
        return QuotientDerivation(self, degree, vals)

    def derivations(self, k):
        """Basis of Der_k of the quotient (values lifted to representatives)."""
        if k in self._der:
            return self._der[k]
        cands = []
        for i, h in enumerate(self.hdeg):
            td = h + k
            if td < 1:
                continue
            for j in range(self.q.dim(td)):
                cands.append(QuotientDerivation(self, k, {i: {j: Fraction(1)}}))
        images = []
        for c in cands:
            lifted = self._lift_values(c)
            img = {}
            for r, rd in zip(self.q.relations, self.q.rel_degrees):
                t = tensor_apply_derivation(self.hdeg, lifted, k % 2, r)
                for j, x in self.q.coordinates(t, rd + k).items():
                    img[(rd, id(r), j)] = x
            images.append(img)
        ders = [combine(cands, c) for c in kernel_of(images)] if cands else []
        self._der[k] = ders
        return ders

    def inner(self, k):
        """Images of ad_x for x running over the quotient basis in degree k."""
        out = []
        if k < 1:
            return out
        for x in self.q.representatives(k):
            vals = {}
            for i, h in enumerate(self.hdeg):
                vals[i] = tensor_bracket(x, k, {chr(i): Fraction(1)}, h)
            out.append(self._to_quotient(k, vals))
        return out

    def basis(self, k):
        """Representatives of a basis of Der_k / ad L_k."""
        if k in self._basis:
            return self._basis[k]
        e = Echelon(full=True, track=True)
        for j, x in enumerate(self.inner(k)):
            e.add(x.raw(), label=("ad", j))
        reps = []
        for d in self.derivations(k):
            if e.add(d.raw(), label=("out", len(reps))):
                reps.append(d)
        self._basis[k] = reps
        self._ech[k] = e
        return reps

    def dim(self, k):
        return len(self.basis(k))

    def coords(self, el):
        k = el.degree
        self.basis(k)
        c = self._ech[k].express(el.raw())
        if c is None:
            raise VerificationError("not a derivation of the quotient")
        return {lab[1]: x for lab, x in c.items() if lab[0] == "out"}

    def differential(self, el):
        return QuotientDerivation(self, el.degree - 1, {})

    def bracket(self, a, b):
        la, lb = self._lift_values(a), self._lift_values(b)
        s = -1 if (a.degree * b.degree) % 2 == 0 else 1
        out = {}
        for i, v in lb.items():
            t = tensor_apply_derivation(self.hdeg, la, a.degree % 2, v)
            if t:
                out[i] = dict(t)
        for i, v in la.items():
            t = tensor_apply_derivation(self.hdeg, lb, b.degree % 2, v)
            if t:
                out[i] = vec_iadd(out.get(i, {}), t, s)
        return self._to_quotient(a.degree + b.degree, out)

    def zero(self, k):
        return QuotientDerivation(self, k, {})

    def render(self, el):
        vals = self._lift_values(el)
        parts = []
        for i in sorted(vals):
            parts.append(f"({format_word_sum(self.gens, vals[i])})∂/∂{self.gens.names[i]}")
        return " + ".join(parts) if parts else "0"


def outer_quotient(model, lo, hi, truncate_at=1):
    """Der L/ad L for L the free Lie algebra modulo the model's relations."""
    space = QuotientDerivationSpace(model)
    if truncate_at is None:
        return DglaSlice(space, lo, hi, name="Der/ad")
    # the differential is zero, so truncating only drops the low degrees
    return DglaSlice(space, max(lo, truncate_at), hi, floor=True, name=f"Der/ad<{truncate_at}>")


# -- finite dg Lie algebras given by structure constants ------------------------------

class VectorElement:
    __slots__ = ("space", "degree", "coeffs")

    def __init__(self, space, degree, coeffs):
        self.space = space
        self.degree = degree
        self.coeffs = {i: Fraction(x) for i, x in coeffs.items() if x}

    def raw(self):
        return dict(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        return VectorElement(self.space, self.degree, vec_iadd(dict(self.coeffs), other.coeffs))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return VectorElement(self.space, self.degree, vec_scale(self.coeffs, c))

    def __eq__(self, other):
        return (isinstance(other, VectorElement) and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def render(self):
        return self.space.render(self)


class FiniteDglaSpace:
    """A finite-dimensional dgla from explicit data.

    ``dims`` maps degree to dimension; ``differential`` maps (degree, j) to a
    coordinate dict in degree - 1; ``brackets`` maps ((p, i), (q, j)) to a
    coordinate dict in degree p + q.  Missing brackets are zero; the opposite
    order is filled in by graded antisymmetry.
    """

    def __init__(self, dims, differential=None, brackets=None, names=None):
        self.dims = {k: v for k, v in dims.items() if v}
        self.diff = differential or {}
        self.br = {}
        for (a, b), v in (brackets or {}).items():
            self.br[(a, b)] = v
            s = -1 if (a[0] * b[0]) % 2 == 0 else 1
            if (b, a) not in (brackets or {}):
                self.br[(b, a)] = vec_scale(v, s)
        self.names = names or {}
        self._basis = {}

    def zero_in_degree(self, k):
        return k not in self.dims

    def basis(self, k):
        if k not in self._basis:
            self._basis[k] = [VectorElement(self, k, {j: 1}) for j in range(self.dims.get(k, 0))]
        return self._basis[k]

    def dim(self, k):
        return self.dims.get(k, 0)

    def coords(self, el):
        return dict(el.coeffs)

    def differential(self, el):
        out = {}
        for j, x in el.coeffs.items():
            vec_iadd(out, self.diff.get((el.degree, j), {}), x)
        return VectorElement(self, el.degree - 1, out)

    def bracket(self, a, b):
        out = {}
        for i, x in a.coeffs.items():
            for j, y in b.coeffs.items():
                vec_iadd(out, self.br.get(((a.degree, i), (b.degree, j)), {}), x * y)
        return VectorElement(self, a.degree + b.degree, out)

    def zero(self, k):
        return VectorElement(self, k, {})

    def render(self, el):
        if not el.coeffs:
            return "0"
        parts = []
        for j in sorted(el.coeffs):
            nm = self.names.get((el.degree, j), f"e{el.degree}_{j}")
            x = el.coeffs[j]
            parts.append(nm if x == 1 else f"{x}·{nm}")
        return " + ".join(parts)


def finite_slice(space, lo=None, hi=None):
    lo = min(space.dims, default=0) if lo is None else lo
    hi = max(space.dims, default=0) if hi is None else hi
    return DglaSlice(space, lo, hi, floor=True)


def abelian_slice(dims):
    """Abelian Lie algebra with zero differential, {degree: dim}."""
    return finite_slice(FiniteDglaSpace(dims))


def homology_algebra(g, lo, hi):
    """H_*(g) in degrees lo..hi with the induced bracket, as a finite slice."""
    from .ce import HomologyData
    data = {k: HomologyData(g, k) for k in range(lo, hi + 1)}
    dims = {k: data[k].dim for k in data}
    br = {}
    names = {}
    for p in data:
        for i, r in enumerate(data[p].reps):
            names[(p, i)] = f"[{r.render()}]"
        for q in data:
            if p + q not in data:
                continue
            for i, a in enumerate(data[p].reps):
                for j, b in enumerate(data[q].reps):
                    c = data[p + q].class_of(g.bracket(a, b))
                    if c:
                        br[((p, i), (q, j))] = c
    space = FiniteDglaSpace(dims, {}, br, names)
    return DglaSlice(space, lo, hi, floor=True, name=f"H({g.name})")


__all__ = [
    "Derivation", "DerivationSpace", "CurvedDerivation", "CurvedSpace", "DglaSlice",
    "der_basis", "der_differential", "curved_der", "truncate", "homology", "homology_dims",
    "lcs_component", "nilradical", "der_annihilating", "der_omega_slice", "outer_quotient",
    "derivation", "derivation_space", "combine", "span_elements", "verify_nilradical",
    "QuotientDerivationSpace", "VectorElement", "FiniteDglaSpace", "finite_slice",
    "abelian_slice", "homology_algebra",
]
