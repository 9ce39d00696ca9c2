import mpmath
import numpy as np
import pytest

from bimatcrack import fieldops as fo
from bimatcrack import oracles as orc
from bimatcrack.materials import formal_constants

from conftest import grid

mpmath.mp.dps = 40
mp = mpmath.mpf

# points on both sides of the switch to the asymptotic series
X_PTS = [1e-6, 0.01, 0.5, 1.0, 3.0, 12.0, 39.0, 41.0, 80.0, 300.0]
ETA, K, F = 0.5, 1.0, 1.0
MU_SUM = 4.0 / (K * (1.0 - ETA ** 2))


def D(t):
    return mpmath.sqrt(mpmath.pi) / 2 * mpmath.exp(-t * t) * mpmath.erfi(t)


def erfcx(t):
    return mpmath.exp(t * t) * mpmath.erfc(t)


# the closed forms, evaluated in 40-digit arithmetic
def antisym_jump(X):
    X = mp(X)
    return F * ETA * K * mpmath.sqrt(X) * (1 - X * mpmath.exp(-X) * mpmath.ei(X)) / (3 * mpmath.pi)


def antisym_sigma(x):
    x = mp(x)
    num = 1 + 2 * x + x * (2 * x + 3) * mpmath.exp(x) * mpmath.ei(-x)
    return F * ETA * num / (6 * mpmath.pi * mpmath.sqrt(x))


def antisym_inverse(X):
    X = mp(X)
    return -F * (4 * X ** 1.5 * D(mpmath.sqrt(X)) - 2 * X - 1) / (3 * mpmath.sqrt(mpmath.pi))


def antisym_mean_pos(x):
    x = mp(x)
    body = 2 * mpmath.sqrt(mpmath.pi) * x ** 1.5 * erfcx(mpmath.sqrt(x)) - 2 * x + 1
    return -F * body / (3 * mpmath.sqrt(mpmath.pi) * MU_SUM)


def sym_jump(X):
    X = mp(X)
    return -F * K / mpmath.sqrt(mpmath.pi) * (-2 * (X + 1) * D(mpmath.sqrt(X)) + mpmath.sqrt(X))


def sym_sigma(x):
    x = mp(x)
    return F * (x * erfcx(mpmath.sqrt(x)) + (1 - 2 * x) / (2 * mpmath.sqrt(mpmath.pi * x)))


def mixed_jump(X):
    X = mp(X)
    num = (2 + 3 * X) * 2 * mpmath.sqrt(X) * D(mpmath.sqrt(X)) - 3 * X
    return num / (2 * mpmath.sqrt(mpmath.pi * X))


def mixed_sigma(x):
    x = mp(x)
    return ((1 - 6 * x) / mpmath.sqrt(mpmath.pi * x) + 2 * (3 * x + 1) * erfcx(mpmath.sqrt(x))) / 4


def _check(got, ref_fn, pts, rel=1e-9):
    for g, p in zip(got, pts):
        ref = float(ref_fn(p))
        assert g == pytest.approx(ref, rel=rel, abs=1e-300), p


def test_antisym_against_high_precision():
    xn = -np.array(X_PTS)
    xp = np.array(X_PTS)
    out_n = orc.antisym_oracle(F, ETA, K, xn)
    out_p = orc.antisym_oracle(F, ETA, K, xp)
    _check(out_n["jump_u"], antisym_jump, X_PTS)
    _check(out_n["inverse_term"], antisym_inverse, X_PTS)
    _check(out_p["sigma"], antisym_sigma, X_PTS)
    _check(out_p["mean_u_pos"], antisym_mean_pos, X_PTS)


def test_sym_against_high_precision():
    c = formal_constants(ETA, K)
    _check(orc.sym_oracle(F, c, -np.array(X_PTS))["jump_u"], sym_jump, X_PTS)
    _check(orc.sym_oracle(F, c, np.array(X_PTS))["sigma"], sym_sigma, X_PTS)


def test_mixed_against_high_precision():
    _check(orc.mixed_oracle(-np.array(X_PTS))["jump_u"], mixed_jump, X_PTS)
    _check(orc.mixed_oracle(np.array(X_PTS))["sigma"], mixed_sigma, X_PTS)


@pytest.mark.parametrize("case,field,x0,value", [
    ("sym_412", "jump_u", -1.0, 0.650125),
    ("sym_412", "sigma", 1.0, 0.145508),
    ("mixed_appA", "jump_u", -1.0, 0.671581),
    ("mixed_appA", "sigma", 1.0, 0.149925),
])
def test_published_spot_values(case, field, x0, value):
    if case == "sym_412":
        out = orc.sym_oracle(1.0, formal_constants(0.5, 1.0), np.array([x0]))
    else:
        out = orc.mixed_oracle(np.array([x0]))
    assert out[field][0] == pytest.approx(value, rel=1e-3)


def test_mixed_sigma_closed_value_at_one():
    # 1/4 (-5/sqrt(pi) + 8 e erfc(1))
    ref = float((-5 / mpmath.sqrt(mpmath.pi) + 8 * mpmath.e * mpmath.erfc(1)) / 4)
    assert orc.mixed_oracle(np.array([1.0]))["sigma"][0] == pytest.approx(ref, rel=1e-13)


def test_linear_in_F():
    x = np.array([-2.0, -0.5, 0.5, 2.0])
    a, b = orc.antisym_oracle(1.0, ETA, K, x), orc.antisym_oracle(3.0, ETA, K, x)
    c = formal_constants(ETA, K)
    s1, s3 = orc.sym_oracle(1.0, c, x), orc.sym_oracle(3.0, c, x)
    for one, three in ((a, b), (s1, s3)):
        for key in ("jump_u", "sigma", "mean_u_neg", "mean_u_pos"):
            assert np.allclose(three[key], 3.0 * one[key], equal_nan=True), key


def test_field_supports():
    out = orc.antisym_oracle(F, ETA, K, np.array([-1.0, 1.0]))
    assert np.isnan(out["sigma"][0]) and np.isnan(out["jump_u"][1])
    assert np.isfinite(out["sigma"][1]) and np.isfinite(out["jump_u"][0])


def test_sym_mean_ahead_vanishes():
    out = orc.sym_oracle(F, formal_constants(ETA, K), np.array([0.1, 1.0, 10.0]))
    assert np.array_equal(out["mean_u_pos"], np.zeros(3))


def test_printed_variants_are_kept_separately():
    x = np.array([-2.0, -0.5])
    a = orc.antisym_oracle(F, ETA, K, x)
    assert set(a["paper_printed"]) == {"inverse_term", "mean_u_neg"}
    assert not np.allclose(a["paper_printed"]["inverse_term"], a["inverse_term"])
    s = orc.sym_oracle(F, formal_constants(ETA, K), x)
    printed = s["paper_printed"]["mean_u_neg"]
    # on principal branches the printed complex expression is real and equals (eta/2)[u]
    assert np.allclose(printed.imag, 0.0, atol=1e-15)
    assert np.allclose(printed.real, s["mean_u_neg"], rtol=1e-12)


def test_sigma_bar():
    assert orc.sigma_bar(np.array([0.0]))[0] == pytest.approx(1.0, abs=1e-15)
    xi = 0.7
    r = mpmath.sqrt(-1j * mp(xi))
    ref = complex(((2 + r) * 1j * xi + 7 * r - 4) / (4 * (xi - 1j) ** 2))
    assert orc.sigma_bar(np.array([xi]))[0] == pytest.approx(ref, rel=1e-14)
    # continuous through the origin
    small = orc.sigma_bar(np.array([-1e-10, 1e-10]))
    assert np.allclose(small, 1.0, atol=1e-4)


def test_domain_and_case_errors():
    with pytest.raises(orc.OracleDomainError):
        orc.antisym_inverse_term(np.array([0.5]))
    with pytest.raises(ValueError):
        orc.OracleCase("not_a_case", {})
    with pytest.raises(ValueError):
        orc.OracleCase("mixed_appA", {"eta": 0.5})
    orc.OracleCase("antisym_411", {"F": 2.0})
    with pytest.raises(ValueError):
        orc.case_loading("other", None)


def test_case_loading_balance():
    g = grid()
    for case in orc.CASES:
        pp, pm = orc.case_loading(case, g)
        skew = pp - pm
        assert abs(fo.integrate(skew)) <= 1e-10
