"""Truncated power series in z with coefficients in Z[eps]/(eps^2 - 1).

A coefficient is a pair (plus, minus) meaning plus + minus*eps.  When the
series is a Poincare series of a graded space with an involution, eps marks
the -1 eigenspace: the pair (p, m) means p invariant and m anti-invariant
dimensions.
"""

from .errors import InvalidInput


def eps_mul(a, b):
    return (a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def eps_inverse(a):
    p, m = a
    if (p, m) in ((1, 0), (-1, 0)):
        return (p, 0)
    if (p, m) in ((0, 1), (0, -1)):
        return (0, m)
    raise InvalidInput(f"{p} + {m}eps is not a unit in Z[eps]/(eps^2-1)")


def _coerce_coeff(c):
    if isinstance(c, int):
        return (c, 0)
    p, m = c
    return (int(p), int(m))


def _coerce_poly(poly):
    """Accept a list of coefficients or a {exponent: coefficient} dict."""
    if isinstance(poly, dict):
        if not poly:
            return [(0, 0)]
        top = max(poly)
        out = [(0, 0)] * (top + 1)
        for k, c in poly.items():
            if k < 0:
                raise InvalidInput("negative exponent in polynomial")
            a = _coerce_coeff(c)
            out[k] = (out[k][0] + a[0], out[k][1] + a[1])
        return out
    return [_coerce_coeff(c) for c in poly] or [(0, 0)]


class InvolutionSeries:
    __slots__ = ("truncation_degree", "coefficients")

    def __init__(self, coefficients, truncation_degree=None):
        coeffs = [_coerce_coeff(c) for c in coefficients]
        if truncation_degree is None:
            truncation_degree = len(coeffs) - 1
        coeffs = coeffs[:truncation_degree + 1]
        coeffs += [(0, 0)] * (truncation_degree + 1 - len(coeffs))
        self.truncation_degree = truncation_degree
        self.coefficients = coeffs

    @classmethod
    def zero(cls, N):
        return cls([], N)

    @classmethod
    def one(cls, N):
        return cls([(1, 0)], N)

    @classmethod
    def eps(cls, N):
        return cls([(0, 1)], N)

    @classmethod
    def monomial(cls, k, coeff, N):
        c = [(0, 0)] * (N + 1)
        if 0 <= k <= N:
            c[k] = _coerce_coeff(coeff)
        return cls(c, N)

    def _n(self, other):
        return min(self.truncation_degree, other.truncation_degree)

    def __add__(self, other):
        other = self._lift(other)
        n = self._n(other)
        return InvolutionSeries([(a[0] + b[0], a[1] + b[1]) for a, b in
                                 zip(self.coefficients[:n + 1], other.coefficients[:n + 1])], n)

    __radd__ = __add__

    def __neg__(self):
        return InvolutionSeries([(-a, -b) for a, b in self.coefficients], self.truncation_degree)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        n = self._n(other)
        out = [[0, 0] for _ in range(n + 1)]
        a = self.coefficients
        b = other.coefficients
        for i in range(n + 1):
            ai = a[i]
            if ai == (0, 0):
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj == (0, 0):
                    continue
                out[i + j][0] += ai[0] * bj[0] + ai[1] * bj[1]
                out[i + j][1] += ai[0] * bj[1] + ai[1] * bj[0]
        return InvolutionSeries([tuple(c) for c in out], n)

    __rmul__ = __mul__

    def _lift(self, other):
        if isinstance(other, InvolutionSeries):
            return other
        return InvolutionSeries([_coerce_coeff(other)], self.truncation_degree)

    def shift(self, k):
        """Multiply by z^k (k >= 0), keeping the truncation degree."""
        n = self.truncation_degree
        return InvolutionSeries([(0, 0)] * k + self.coefficients[:max(0, n + 1 - k)], n)

    def truncate(self, n):
        return InvolutionSeries(self.coefficients[:n + 1], n)

    def __eq__(self, other):
        return (isinstance(other, InvolutionSeries)
                and self.truncation_degree == other.truncation_degree
                and self.coefficients == other.coefficients)

    def __hash__(self):
        return hash((self.truncation_degree, tuple(self.coefficients)))

    def __getitem__(self, k):
        return self.coefficients[k]

    def at_eps_one(self):
        """Total dimensions: specialize eps to 1."""
        return [p + m for p, m in self.coefficients]

    def plus_part(self):
        return [p for p, _ in self.coefficients]

    def minus_part(self):
        return [m for _, m in self.coefficients]

    def to_json(self):
        return [[p, m] for p, m in self.coefficients]

    @classmethod
    def from_json(cls, data):
        return cls([tuple(c) for c in data])

    def render(self, max_terms=None):
        return render_series(self.coefficients, max_terms)

    def __repr__(self):
        return f"InvolutionSeries({self.render(12)}, N={self.truncation_degree})"


def _coeff_text(p, m):
    if m == 0:
        return str(p)
    e = "ε" if m == 1 else ("-ε" if m == -1 else f"{m}ε")
    if p == 0:
        return e
    if m > 0:
        return f"({p} + {e})"
    return f"({p} - {e[1:]})"


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def render_series(coeffs, max_terms=None):
    parts = []
    for k, (p, m) in enumerate(coeffs):
        if p == 0 and m == 0:
            continue
        neg = (m == 0 and p < 0) or (p == 0 and m < 0)
        if neg:
            p, m = -p, -m
        c = _coeff_text(p, m)
        if k == 0:
            term = c
        else:
            zk = "z" if k == 1 else "z" + str(k).translate(_SUPERSCRIPT)
            term = zk if c == "1" else f"{c}{zk}" if c == "ε" else f"{c}·{zk}"
        if parts:
            parts.append((" - " if neg else " + ") + term)
        else:
            parts.append(("-" if neg else "") + term)
        if max_terms and len(parts) >= max_terms:
            parts.append(" + …")
            break
    return "".join(parts) if parts else "0"


def involution_series_expand(numerator, denominator, N):
    """Expand numerator/denominator to degree N with eps^2 = 1."""
    num = _coerce_poly(numerator)
    den = _coerce_poly(denominator)
    inv0 = eps_inverse(den[0])
    out = []
    for n in range(N + 1):
        acc = list(num[n]) if n < len(num) else [0, 0]
        for j in range(1, min(n, len(den) - 1) + 1):
            t = eps_mul(den[j], out[n - j])
            acc[0] -= t[0]
            acc[1] -= t[1]
        out.append(eps_mul(inv0, tuple(acc)))
    return InvolutionSeries(out, N)


def poly_mul(a, b):
    a = _coerce_poly(a)
    b = _coerce_poly(b)
    out = [(0, 0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t = eps_mul(x, y)
            out[i + j] = (out[i + j][0] + t[0], out[i + j][1] + t[1])
    return out


def poly_product(*polys):
    out = [(1, 0)]
    for p in polys:
        out = poly_mul(out, p)
    return out


def one_minus(k, c=(1, 0)):
    """The polynomial 1 - c z^k."""
    p = {0: (1, 0)}
    c = _coerce_coeff(c)
    p[k] = (-c[0], -c[1]) if k else (1 - c[0], -c[1])
    return p


def one_plus(k, c=(1, 0)):
    p = {0: (1, 0)}
    c = _coerce_coeff(c)
    p[k] = c if k else (1 + c[0], c[1])
    return p
