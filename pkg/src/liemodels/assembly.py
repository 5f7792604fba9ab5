"""Poincare series assembled from modular-form dimensions, and the closed forms
they are compared against.

The arithmetic inputs are transcribed constants: dimension series of
modular and cusp forms for SL_2(Z) and the theta group, and the shape of the
SL_3(Z) cohomology with symmetric-power coefficients.  Nothing here computes
modular forms.
"""

from .errors import InvalidInput, UnsupportedCase
from .series import (InvolutionSeries, involution_series_expand, one_minus, one_plus,
                     poly_mul, poly_product)

SL2Z = "SL2Z"
THETA = "Theta"
MODULAR = "modular"
CUSP = "cusp"

# numerator exponent and denominator exponents of sum_k dim t^k
_MODFORM_DATA = {
    (SL2Z, MODULAR): (0, (4, 6)),
    (SL2Z, CUSP): (12, (4, 6)),
    (THETA, MODULAR): (0, (2, 4)),
    (THETA, CUSP): (8, (2, 4)),
}

HURWITZ_DIMS = (1, 3, 7)


def modform_dim_series(tag, kind, N):
    """[dim M_k or S_k for k = 0..N]."""
    try:
        num, den = _MODFORM_DATA[(tag, kind)]
    except KeyError:
        raise InvalidInput(f"unknown arithmetic input {tag!r}/{kind!r}") from None
    s = involution_series_expand({num: 1}, poly_product(*(one_minus(k) for k in den)), N)
    return s.plus_part()


def group_for(d):
    return SL2Z if d in HURWITZ_DIMS else THETA


def eichler_shimura_poincare(d, N):
    """1 + sum_{k>=2} (eps dim M_k + dim S_k) z^{(k-2)(d+1)+1} for d odd."""
    if d < 1 or d % 2 == 0:
        raise InvalidInput("eichler_shimura_poincare needs an odd d >= 1")
    ell = d + 1
    tag = group_for(d)
    kmax = (N - 1) // ell + 2 if N >= 1 else 1
    m = modform_dim_series(tag, MODULAR, kmax)
    s = modform_dim_series(tag, CUSP, kmax)
    coeffs = [(0, 0)] * (N + 1)
    coeffs[0] = (1, 0)
    for k in range(2, kmax + 1):
        deg = (k - 2) * ell + 1
        if deg > N:
            break
        p, q = coeffs[deg]
        coeffs[deg] = (p + s[k], q + m[k])
    return InvolutionSeries(coeffs, N)


def sl3_poincare(d, N):
    """Reduced series sum_k eps dim M_k z^{(k-3)(d+1)+2} + dim S_k z^{(k-2)(d+1)+3}
    over SL_2(Z) forms, for d in {1, 3, 7}.

    The M-terms come from odd symmetric powers j = k - 3 >= 1 in cohomological
    degree 2, the S-terms from even positive powers j = k - 2 in degree 3.
    """
    if d not in HURWITZ_DIMS:
        raise UnsupportedCase("the SL_3 assembly is only available for d in {1, 3, 7}")
    ell = d + 1
    kmax = N // ell + 4
    m = modform_dim_series(SL2Z, MODULAR, kmax)
    s = modform_dim_series(SL2Z, CUSP, kmax)
    coeffs = [(0, 0)] * (N + 1)
    for k in range(0, kmax + 1):
        j = k - 3
        if j >= 1 and j % 2 == 1:
            deg = j * ell + 2
            if deg <= N:
                p, q = coeffs[deg]
                coeffs[deg] = (p, q + m[k])
        j = k - 2
        if j >= 2 and j % 2 == 0:
            deg = j * ell + 3
            if deg <= N:
                p, q = coeffs[deg]
                coeffs[deg] = (p + s[k], q)
    return InvolutionSeries(coeffs, N)


EPS = (0, 1)


def _closed_odd_n2(d, N):
    ell = d + 1
    if d in HURWITZ_DIMS:
        num = {0: EPS, 4 * ell: EPS, 6 * ell: (0, -1), 8 * ell: (1, 0)}
        den = poly_product(one_minus(4 * ell), one_minus(6 * ell))
        shift = 2 * ell + 1
    else:
        num = {0: EPS, 2 * ell: EPS, 4 * ell: (0, -1), 6 * ell: (1, 0)}
        den = poly_product(one_minus(2 * ell), one_minus(4 * ell))
        shift = 1
    tail = involution_series_expand(num, den, max(N - shift, 0))
    return InvolutionSeries.one(N) + _shifted(tail, shift, N)


def _closed_odd_n2_rederived(d, N):
    """The odd n=2 series re-expanded from the modular-form data.  For
    d in {1, 3, 7} the eps-numerator is 1 + z^{2l} - z^{6l}, which keeps the
    weight-6 Eisenstein class in degree 4l + 1."""
    if d not in HURWITZ_DIMS:
        return _closed_odd_n2(d, N)
    ell = d + 1
    num = {0: EPS, 2 * ell: EPS, 6 * ell: (0, -1), 8 * ell: (1, 0)}
    den = poly_product(one_minus(4 * ell), one_minus(6 * ell))
    shift = 2 * ell + 1
    tail = involution_series_expand(num, den, max(N - shift, 0))
    return InvolutionSeries.one(N) + _shifted(tail, shift, N)


def _closed_odd_n3(d, N):
    if d not in HURWITZ_DIMS:
        raise UnsupportedCase("the n=3 closed form is only available for d in {1, 3, 7}")
    ell = d + 1
    num = {0: EPS, 2 * ell: EPS, 6 * ell: (0, -1)}
    num[9 * ell + 1] = (1, 0)
    den = poly_product(one_minus(4 * ell), one_minus(6 * ell))
    shift = ell + 2
    tail = involution_series_expand(num, den, max(N - shift, 0))
    return _shifted(tail, shift, N)


def _closed_even_n2(d, N):
    if d % 2:
        raise InvalidInput("the even n=2 closed form needs even d")
    num = poly_mul(one_plus(2 * d, EPS), one_plus(4 * d))
    den = poly_product(one_minus(2 * d), one_minus(2 * d), one_minus(4 * d), one_minus(4 * d))
    return involution_series_expand(num, den, N)


def _closed_stable(d, N):
    """Exterior algebra on generators in degrees 5, 9, 13, ..."""
    poly = [(1, 0)]
    k = 5
    while k <= N:
        poly = poly_mul(poly, one_plus(k))
        k += 4
    return InvolutionSeries(poly[:N + 1], N)


def _shifted(series, k, N):
    coeffs = [(0, 0)] * (N + 1)
    for i, c in enumerate(series.coefficients):
        if i + k <= N:
            coeffs[i + k] = c
    return InvolutionSeries(coeffs, N)


CLOSED_FORMS = {
    "odd-n2": _closed_odd_n2,
    "odd-n2-rederived": _closed_odd_n2_rederived,
    "odd-n3": _closed_odd_n3,
    "even-n2": _closed_even_n2,
    "stable": _closed_stable,
}


def closed_form_poincare(case, d, N):
    """Expansion of a cataloged closed form through z^N."""
    try:
        fn = CLOSED_FORMS[case]
    except KeyError:
        raise InvalidInput(f"unknown closed form {case!r}; known: {', '.join(CLOSED_FORMS)}") from None
    if case.startswith("odd") and d % 2 == 0:
        raise InvalidInput(f"{case} needs odd d")
    return fn(d, N)


def crosscheck_series(N=200):
    """[(label, equal)] for the assembly-versus-closed-form comparisons."""
    out = []
    for d in (1, 3, 5, 7, 9):
        out.append((f"odd-n2 d={d}", eichler_shimura_poincare(d, N) == closed_form_poincare("odd-n2", d, N)))
    for d in HURWITZ_DIMS:
        out.append((f"odd-n3 d={d}", sl3_poincare(d, N) == closed_form_poincare("odd-n3", d, N)))
    return out


__all__ = [
    "SL2Z", "THETA", "MODULAR", "CUSP", "modform_dim_series", "eichler_shimura_poincare",
    "sl3_poincare", "closed_form_poincare", "crosscheck_series", "CLOSED_FORMS",
]
