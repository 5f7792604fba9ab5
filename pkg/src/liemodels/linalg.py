"""Exact sparse linear algebra over the rationals.

Vectors are plain dicts mapping an ordered key to a nonzero Fraction.  Keys
can be integers (matrix columns) or any mutually comparable objects such as
tensor words; the pivot of a vector is always its smallest key.
"""

from fractions import Fraction
from heapq import heappop, heappush
from math import factorial, lcm

from .errors import InvalidInput, PreconditionError

Scalar = Fraction


def to_scalar(x):
    """Coerce an int, Fraction or "p/q" string to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational number: {x!r}") from exc
    raise InvalidInput(f"not a rational number: {x!r}")


def scalar_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- sparse vector helpers ---------------------------------------------------

def vec_add(u, v, c=1):
    """Return u + c*v as a new dict."""
    out = dict(u)
    if c == 0:
        return out
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(u, v, c=1):
    """In place u += c*v."""
    if c == 0:
        return u
    get = u.get
    for k, x in v.items():
        y = get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            del u[k]
    return u


def vec_scale(v, c):
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def clean(v):
    return {k: x for k, x in v.items() if x}


class Echelon:
    """Incrementally maintained echelon basis of a subspace.

    With ``full=True`` the rows are kept in reduced form (each pivot key
    occurs in exactly one row, with coefficient 1), which makes reduction a
    single pass and gives canonical coordinates.  With ``full=False`` rows are
    only triangular; reduction then walks the keys in increasing order.  That
    mode avoids back substitution and is much cheaper for pure rank counts.

    With ``track=True`` every row remembers how it was combined from the
    labelled input vectors, which is what solving needs.
    """

    def __init__(self, full=True, track=False):
        self.full = full
        self.track = track
        self.rows = {}
        self.combos = {}
        self._cols = {} if full else None
        self._count = 0

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def _reduce(self, v, combo):
        rows = self.rows
        if self.full:
            for k in [k for k in v if k in rows]:
                c = v.get(k)
                if c:
                    vec_iadd(v, rows[k], -c)
                    if combo is not None:
                        vec_iadd(combo, self.combos[k], -c)
            return v
        heap = list(v)
        heap.sort()
        seen = set(heap)
        while heap:
            k = heappop(heap)
            c = v.get(k)
            if not c or k not in rows:
                continue
            row = rows[k]
            get = v.get
            for j, x in row.items():
                y = get(j, 0) - c * x
                if y:
                    v[j] = y
                    if j not in seen:
                        seen.add(j)
                        heappush(heap, j)
                else:
                    v.pop(j, None)
            if combo is not None:
                vec_iadd(combo, self.combos[k], -c)
        return v

    def reduce(self, v):
        """Residual of v modulo the span (a new dict)."""
        return self._reduce(clean(v), None)

    def contains(self, v):
        return not self.reduce(v)

    def add(self, v, label=None):
        """Insert v; return True if it enlarged the span.

        When tracking, a dependent vector returns False and the relation
        expressing it is available from ``last_relation``.
        """
        combo = None
        if self.track:
            if label is None:
                label = self._count
            combo = {label: Fraction(1)}
        self._count += 1
        r = self._reduce(clean(v), combo)
        if not r:
            self.last_relation = combo
            return False
        p = min(r)
        inv = 1 / Fraction(r[p])
        if inv != 1:
            r = vec_scale(r, inv)
            if combo is not None:
                combo = vec_scale(combo, inv)
        if self.full:
            cols = self._cols
            for q in list(cols.get(p, ())):
                row = self.rows[q]
                c = row[p]
                for j, x in r.items():
                    y = row.get(j, 0) - c * x
                    if y:
                        if j not in row:
                            cols.setdefault(j, set()).add(q)
                        row[j] = y
                    else:
                        del row[j]
                        cols[j].discard(q)
                if combo is not None:
                    vec_iadd(self.combos[q], combo, -c)
            cols.pop(p, None)
            for j in r:
                if j != p:
                    cols.setdefault(j, set()).add(p)
        self.rows[p] = r
        if combo is not None:
            self.combos[p] = combo
        return True

    def coordinates(self, v):
        """Coefficients of v on the rows (keyed by pivot), or None."""
        if not self.full:
            raise ValueError("coordinates need a fully reduced echelon")
        coords = {k: v[k] for k in v if k in self.rows and v[k]}
        r = self.reduce(v)
        if r:
            return None
        return coords

    def express(self, v):
        """Combination of the labelled inputs equal to v, or None."""
        if not self.track:
            raise ValueError("express needs track=True")
        combo = {}
        r = self._reduce(clean(v), combo)
        if r:
            return None
        return {k: -c for k, c in combo.items() if c}

    def basis(self):
        """Rows ordered by pivot."""
        return [self.rows[p] for p in sorted(self.rows)]


def rank_of(vectors, full=False):
    e = Echelon(full=full)
    for v in vectors:
        e.add(v)
    return e.rank


def span_basis(vectors):
    """Canonical (reduced echelon) basis of the span, ordered by pivot."""
    e = Echelon(full=True)
    for v in vectors:
        e.add(v)
    return e.basis()


def kernel_of(images):
    """Kernel of the map e_i -> images[i], as dicts over input indices.

    The basis is canonical: it is read off the reduced echelon form of the
    matrix whose columns are the images.
    """
    rows = {}
    for j, v in enumerate(images):
        for k, x in v.items():
            if x:
                rows.setdefault(k, {})[j] = x
    e = Echelon(full=True)
    for k in sorted(rows):
        e.add(rows[k])
    piv = set(e.rows)
    out = []
    for f in range(len(images)):
        if f in piv:
            continue
        v = {f: Fraction(1)}
        for p, row in e.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        out.append(v)
    return out


# -- matrices ----------------------------------------------------------------

class SparseMatrix:
    """rows x cols matrix with entries stored as {(i, j): Fraction}."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise InvalidInput(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            x = to_scalar(x)
            if x:
                self.entries[(i, j)] = x

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        nr = len(data)
        nc = len(data[0]) if data else 0
        if any(len(r) != nc for r in data):
            raise InvalidInput("ragged matrix")
        return cls(nr, nc, {(i, j): x for i, r in enumerate(data) for j, x in enumerate(r) if x})

    @classmethod
    def from_rows(cls, row_dicts, cols):
        ent = {(i, j): x for i, r in enumerate(row_dicts) for j, x in r.items()}
        return cls(len(row_dicts), cols, ent)

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def mul_vec(self, v):
        out = [Fraction(0)] * self.rows
        for (i, j), x in self.entries.items():
            out[i] += x * v[j]
        return out

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}, {self.cols}, {len(self.entries)} entries)"


class Subspace:
    """Subspace of Q^ambient_dim given by independent basis vectors."""

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        self.basis = [tuple(to_scalar(x) for x in b) for b in basis]
        for b in self.basis:
            if len(b) != ambient_dim:
                raise InvalidInput("basis vector has the wrong length")

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def rref(m):
    """Reduced row echelon form: (rank, pivot columns, reduced matrix)."""
    e = Echelon(full=True)
    for r in m.row_dicts():
        e.add(r)
    piv = e.pivots()
    reduced = SparseMatrix.from_rows([e.rows[p] for p in piv] + [{}] * (m.rows - len(piv)), m.cols)
    return len(piv), piv, reduced


def kernel_basis(m):
    rank, piv, red = rref(m)
    rows = red.row_dicts()[:rank]
    pset = set(piv)
    basis = []
    for f in range(m.cols):
        if f in pset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for p, r in zip(piv, rows):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return Subspace(m.cols, basis)


def solve_in_span(vectors, target):
    """Coefficients c with sum c_i vectors[i] == target, or None."""
    vectors = [list(v) for v in vectors]
    target = list(target)
    n = len(target)
    for v in vectors:
        if len(v) != n:
            raise InvalidInput("vectors and target have different dimensions")
    e = Echelon(full=True, track=True)
    for i, v in enumerate(vectors):
        e.add({j: to_scalar(x) for j, x in enumerate(v) if x}, label=i)
    combo = e.express({j: to_scalar(x) for j, x in enumerate(target) if x})
    if combo is None:
        return None
    return [combo.get(i, Fraction(0)) for i in range(len(vectors))]


# -- dense matrix utilities ---------------------------------------------------

def _as_dense(a):
    if isinstance(a, SparseMatrix):
        return a.to_dense()
    return [[to_scalar(x) for x in row] for row in a]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _flatten(a):
    return {i * len(a) + j: x for i, row in enumerate(a) for j, x in enumerate(row) if x}


def _unflatten(v, n):
    out = [[Fraction(0)] * n for _ in range(n)]
    for k, x in v.items():
        out[k // n][k % n] = x
    return out


def algebra_closure(generators):
    """Basis (as matrices) of the unital algebra generated by square matrices."""
    gens = [_as_dense(g) for g in generators]
    if not gens:
        raise InvalidInput("need at least one generator")
    n = len(gens[0])
    for g in gens:
        if len(g) != n or any(len(r) != n for r in g):
            raise InvalidInput("generators must be square matrices of one size")
    e = Echelon(full=True)
    basis = []
    frontier = []
    for a in [identity(n)] + gens:
        if e.add(_flatten(a)):
            basis.append(a)
            frontier.append(a)
    cap = n * n
    while frontier and len(basis) < cap:
        new = []
        for a in frontier:
            for g in gens:
                p = mat_mul(g, a)
                if e.add(_flatten(p)):
                    basis.append(p)
                    new.append(p)
        frontier = new
    return basis


def trace(a):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def trace_form_radical(generators):
    """Radical of the trace form on the algebra generated by the inputs.

    Returns a Subspace of flattened (row-major) n x n matrices.  In
    characteristic zero this is the Jacobson radical of the algebra.
    """
    basis = algebra_closure(generators)
    n = len(basis[0])
    m = len(basis)
    gram = [[trace(mat_mul(basis[i], basis[j])) for j in range(m)] for i in range(m)]
    ker = kernel_basis(SparseMatrix.from_dense(gram))
    rad = []
    for c in ker.basis:
        v = {}
        for ci, b in zip(c, basis):
            if ci:
                vec_iadd(v, _flatten(b), ci)
        rad.append(v)
    rows = span_basis(rad)
    return Subspace(n * n, [[r.get(k, Fraction(0)) for k in range(n * n)] for r in rows])


def subspace_matrices(sub):
    n = int(round(sub.ambient_dim ** 0.5))
    return [_unflatten({k: x for k, x in enumerate(b) if x}, n) for b in sub.basis]


def _is_integral(a):
    return all(x.denominator == 1 for row in a for x in row)


def unipotent_integrality_exponent(a):
    """Smallest k >= 1 with a^k integral, for a unipotent rational matrix."""
    a = _as_dense(a)
    n = len(a)
    if any(len(r) != n for r in a):
        raise InvalidInput("matrix must be square")
    nil = [[a[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    powers = [identity(n)]
    for _ in range(n):
        powers.append(mat_mul(powers[-1], nil))
    if any(x for row in powers[n] for x in row):
        raise PreconditionError("matrix is not unipotent: (a - I)^n != 0")
    den = 1
    for p in powers[:n]:
        for row in p:
            for x in row:
                den = lcm(den, x.denominator)
    bound = den
    for j in range(1, n + 1):
        bound *= factorial(j)
    for k in range(1, bound + 1):
        ak = [[Fraction(0)] * n for _ in range(n)]
        binom = 1
        for j in range(n):
            if j > k:
                break
            if j:
                binom = binom * (k - j + 1) // j
            pj = powers[j]
            for r in range(n):
                for c in range(n):
                    if pj[r][c]:
                        ak[r][c] += binom * pj[r][c]
        if _is_integral(ak):
            return k
    raise AssertionError("no integral power below the proven bound")


def integrality_bound(a):
    """The bound 1! 2! ... n! * d on the exponent, d clearing all denominators."""
    a = _as_dense(a)
    n = len(a)
    nil = [[a[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    p = identity(n)
    den = 1
    for _ in range(n):
        for row in p:
            for x in row:
                den = lcm(den, x.denominator)
        p = mat_mul(p, nil)
    for j in range(1, n + 1):
        den *= factorial(j)
    return den
