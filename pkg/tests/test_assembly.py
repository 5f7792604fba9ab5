import pytest

from liemodels.assembly import (closed_form_poincare, crosscheck_series, eichler_shimura_poincare,
                                modform_dim_series, sl3_poincare)
from liemodels.errors import InvalidInput, UnsupportedCase
from liemodels.series import InvolutionSeries, render_series

EPS = (0, 1)


def test_modform_dimensions():
    assert modform_dim_series("SL2Z", "modular", 12)[4] == 1
    assert modform_dim_series("SL2Z", "cusp", 12)[12] == 1
    assert modform_dim_series("Theta", "cusp", 8)[8] == 1
    full = modform_dim_series("SL2Z", "modular", 40)
    assert [full[k] for k in (0, 2, 4, 6, 8, 10, 12, 14, 24)] == [1, 0, 1, 1, 1, 1, 2, 1, 3]
    with pytest.raises(InvalidInput):
        modform_dim_series("Gamma0", "modular", 4)


def test_eichler_shimura_examples():
    assert eichler_shimura_poincare(3, 20)[9] == EPS
    s1 = eichler_shimura_poincare(1, 30)
    assert s1[21] == (1, 2)
    assert all(s1[k][0] == 0 for k in range(1, 21))
    s5 = eichler_shimura_poincare(5, 10)
    assert s5[1] == EPS
    assert s5[0] == (1, 0)
    with pytest.raises(InvalidInput):
        eichler_shimura_poincare(2, 10)


def test_sl3_examples():
    assert sl3_poincare(3, 30)[6] == EPS
    assert all(sl3_poincare(3, 30)[k] == (0, 0) for k in range(0, 6))
    assert sl3_poincare(1, 20)[4] == EPS
    with pytest.raises(UnsupportedCase):
        sl3_poincare(5, 20)


def test_closed_form_examples():
    assert closed_form_poincare("odd-n2", 3, 20)[9] == EPS
    assert closed_form_poincare("stable", 0, 20)[5] == (1, 0)
    assert closed_form_poincare("even-n2", 2, 8)[4] == (2, 1)
    with pytest.raises(InvalidInput):
        closed_form_poincare("nope", 3, 10)


def test_stable_series_is_exterior():
    s = closed_form_poincare("stable", 0, 30)
    assert [k for k in range(31) if s[k] != (0, 0)] == [0, 5, 9, 13, 14, 17, 18, 21, 22, 25, 26, 27, 29, 30]


@pytest.mark.parametrize("d", [5, 9])
def test_assembly_matches_listed_form_off_hurwitz(d):
    assert eichler_shimura_poincare(d, 200) == closed_form_poincare("odd-n2", d, 200)


@pytest.mark.parametrize("d", [1, 3, 5, 7, 9])
def test_assembly_matches_rederived_form(d):
    assert eichler_shimura_poincare(d, 200) == closed_form_poincare("odd-n2-rederived", d, 200)


@pytest.mark.parametrize("d", [1, 3, 7])
def test_listed_hurwitz_form_differs_first_at_weight_six(d):
    a = eichler_shimura_poincare(d, 200)
    b = closed_form_poincare("odd-n2", d, 200)
    first = min(k for k in range(201) if a[k] != b[k])
    assert first == 4 * (d + 1) + 1


@pytest.mark.parametrize("d", [1, 3, 7])
def test_sl3_matches_closed_form(d):
    assert sl3_poincare(d, 200) == closed_form_poincare("odd-n3", d, 200)


@pytest.mark.parametrize("d", [1, 3, 5, 7, 9])
def test_nonnegative_and_odd_support(d):
    s = eichler_shimura_poincare(d, 200)
    for k, (p, q) in enumerate(s.coefficients):
        assert p >= 0 and q >= 0
        if k and (p or q):
            assert k % 2 == 1


def test_crosscheck_labels():
    rows = dict(crosscheck_series(60))
    assert rows["odd-n2 d=5"] and rows["odd-n3 d=3"]
    assert not rows["odd-n2 d=3"]


def test_series_rendering_and_json():
    s = eichler_shimura_poincare(3, 40)
    text = s.render()
    assert text.startswith("1 + εz⁹")
    assert InvolutionSeries.from_json(s.to_json()) == s
    assert render_series([(0, 0)]) == "0"
