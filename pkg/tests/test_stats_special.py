import pytest
from hypothesis import given, strategies as st

from nlgcrowd.stats.special import betainc, f_survival, normal_sf, t_sf_two_sided

from helpers import load_fixture


def test_f_survival_matches_frozen_oracle():
    cases = load_fixture("fsurv_oracle.json")
    assert len(cases) >= 50
    for case in cases:
        p = f_survival(case["F"], case["df1"], case["df2"])
        assert p == pytest.approx(case["p"], abs=1e-10)


def test_f_survival_edges():
    assert f_survival(0.0, 2, 10) == 1.0
    assert f_survival(1e9, 2, 10) < 1e-12
    assert f_survival(24.99, 2, 1236) < 0.001


def test_f_survival_monotone_in_f():
    last = 1.0
    for f in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0]:
        p = f_survival(f, 3, 17)
        assert p <= last + 1e-15
        last = p


@given(
    f1=st.floats(min_value=0.01, max_value=30.0),
    f2=st.floats(min_value=0.01, max_value=30.0),
    df1=st.integers(min_value=1, max_value=10),
    df2=st.integers(min_value=2, max_value=500),
)
def test_f_survival_monotone_property(f1, f2, df1, df2):
    lo, hi = sorted((f1, f2))
    assert f_survival(hi, df1, df2) <= f_survival(lo, df1, df2) + 1e-12


def test_betainc_range_and_symmetry():
    assert betainc(2.0, 3.0, 0.0) == 0.0
    assert betainc(2.0, 3.0, 1.0) == 1.0
    # I_x(a, b) = 1 - I_{1-x}(b, a)
    for a, b, x in [(2.5, 1.5, 0.3), (7.0, 0.5, 0.8), (0.5, 0.5, 0.5)]:
        assert betainc(a, b, x) == pytest.approx(1.0 - betainc(b, a, 1.0 - x), abs=1e-13)


def test_betainc_rejects_bad_shapes():
    with pytest.raises(ValueError):
        betainc(0.0, 1.0, 0.5)


def test_normal_sf():
    assert normal_sf(0.0) == pytest.approx(0.5)
    assert normal_sf(1.959963984540054) == pytest.approx(0.025, abs=1e-12)


def test_t_two_sided():
    # t = 0 is no evidence at all.
    assert t_sf_two_sided(0.0, 10) == pytest.approx(1.0)
    # Classic 97.5% quantile of t with 10 df (the quantile is only good to
    # ~1e-12 itself, so the round trip cannot be tighter).
    assert t_sf_two_sided(2.2281388519649385, 10) == pytest.approx(0.05, abs=1e-10)


def test_f_survival_rejects_bad_input():
    with pytest.raises(ValueError):
        f_survival(-1.0, 2, 3)
    with pytest.raises(ValueError):
        f_survival(1.0, 0, 3)
