import dataclasses
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimatcrack import fieldops as fo
from bimatcrack import mode3 as m3
from bimatcrack import oracles as orc
from bimatcrack.materials import formal_constants

from conftest import grid, oracle_solution, rel_max

RESIDUAL_TOL = 1e-5
# default run tolerance of the command line, used for the whole-line cross-check
RUN_TOL = 1e-4


def _mask(g, lo=1e-3, hi=1e2):
    return g.interior(lo, hi)


# loading

def test_symmetrize_loading_parts():
    g = grid(256)
    x = g.nodes
    pp = fo.sample(g, lambda x: x * np.exp(x))
    pm = fo.sample(g, lambda x: -np.exp(x))
    L = m3.symmetrize_loading(pp, pm)
    assert np.allclose(L.sym.values, 0.5 * (x - 1) * np.exp(x))
    assert np.allclose(L.skew.values, (x + 1) * np.exp(x))
    back = m3.Mode3Loading.from_parts(L.sym, L.skew)
    assert np.allclose(back.p_plus.values, pp.values)
    assert np.allclose(back.p_minus.values, pm.values)


def test_symmetrize_warns_on_net_force():
    g = grid(64)
    with pytest.warns(m3.BalanceWarning):
        m3.symmetrize_loading(fo.sample(g, np.exp), fo.zeros(g, "negative"))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        m3.symmetrize_loading(fo.sample(g, np.exp), fo.sample(g, np.exp))


def test_symmetrize_rejects_bad_inputs():
    g = grid(64)
    with pytest.raises(fo.GridError):
        m3.symmetrize_loading(fo.zeros(g, "negative"), fo.zeros(grid(128), "negative"))
    with pytest.raises(fo.SupportError):
        m3.symmetrize_loading(fo.zeros(g, "positive"), fo.zeros(g, "negative"))


# forward solve

def test_zero_loading_gives_zero_fields():
    g = grid()
    z = fo.zeros(g, "negative")
    sol = m3.solve_forward(m3.Mode3Loading(z, z), formal_constants(0.5, 1.0))
    for f in (sol.jump_u, sol.mean_u_neg, sol.mean_u_pos, sol.sigma_interface):
        assert f.is_zero()


def test_unbalanced_loading_is_refused():
    g = grid()
    L = m3.Mode3Loading(fo.sample(g, np.exp), fo.zeros(g, "negative"))
    with pytest.raises(m3.BalanceError):
        m3.solve_jump(L, formal_constants(0.5, 1.0))


@pytest.mark.parametrize("case", orc.CASES)
def test_oracle_residuals(case):
    _, sol, _ = oracle_solution(case)
    for name, entry in sol.residuals.items():
        assert entry["max"] <= RESIDUAL_TOL, (name, entry)


@pytest.mark.parametrize("case", ["sym_412", "mixed_appA"])
def test_forward_matches_oracle(case):
    g = grid()
    _, sol, c = oracle_solution(case)
    ref = orc.case_fields(case, g, c)
    m = _mask(g)
    assert rel_max(sol.jump_u.values, ref["jump_u"], m) <= 1e-6
    assert rel_max(sol.sigma_interface.values, ref["sigma"], m) <= 1e-6


def test_antisym_mean_displacement_parts():
    # the part of <u> that does not involve [u] matches the closed form
    g = grid()
    _, sol, c = oracle_solution("antisym_411")
    m = _mask(g)
    term = orc.antisym_inverse_term(g.nodes)
    got = sol.mean_u_neg.values - 0.5 * c.eta * sol.jump_u.values
    assert rel_max(got, -term / c.mu_sum, m) <= 1e-6
    ref = orc.case_fields("antisym_411", g, c)
    assert rel_max(sol.mean_u_pos.values, ref["mean_u_pos"], m) <= 1e-6


def test_symmetric_loading_has_no_mean_ahead_of_tip():
    _, sol, c = oracle_solution("sym_412")
    assert sol.mean_u_pos.is_zero()
    assert np.allclose(sol.mean_u_neg.values, 0.5 * c.eta * sol.jump_u.values, rtol=0, atol=0)


def test_balance_values_for_mixed_case():
    L, sol, _ = oracle_solution("mixed_appA")
    sig0, p0 = m3.balance_values(L, sol)
    # int <p> = int (x - 1) e^x / 2 = -1 and <sigma> carries the opposite force
    assert p0 == pytest.approx(-1.0, abs=1e-10)
    assert sig0 == pytest.approx(1.0, abs=1e-6)


def test_eta_zero_reduction():
    g = grid()
    L = m3.Mode3Loading(*orc.case_loading("sym_412", g))
    s0 = m3.solve_forward(L, formal_constants(0.0, 1.0))
    s1 = m3.solve_forward(L, formal_constants(0.5, 1.0))
    assert "spectral_id" not in s0.residuals and "physical_id" not in s0.residuals
    assert not np.any(s0.mean_u_neg.values) and s0.mean_u_pos.is_zero()
    # for [p] = 0 the jump does not depend on eta
    assert np.array_equal(s0.jump_u.values, s1.jump_u.values)


# identities

@pytest.mark.parametrize("eta", [0.3, -0.6, 0.95])
def test_identity_rank_relations(eta):
    k = 1.7
    c = formal_constants(eta, k)
    ms = c.mu_sum
    rng = np.random.default_rng(7)
    S, P, J, U, M = (rng.normal(size=50) + 1j * rng.normal(size=50) for _ in range(5))
    xi = np.abs(rng.normal(size=50))
    R1 = S + P + J / (2 * eta) + 2 * xi * M / (k * eta)
    R2 = S + P + eta * J / 2 + xi * U / k
    R3 = J + ms * xi * M - 0.5 * eta * ms * xi * U
    R4 = S + P - 0.5 * eta * ms * xi * M + 0.25 * ms * xi * U
    assert np.allclose(R3, 2 * eta / (eta ** 2 - 1) * (R2 - R1), rtol=1e-12, atol=1e-12)
    assert np.allclose(R4, R2 - 0.5 * eta * R3, rtol=1e-12, atol=1e-12)


def test_identity_residuals_grow_with_perturbation():
    g = grid()
    L, sol, c = oracle_solution("mixed_appA")
    bump = g.X * np.exp(-g.X)
    out = []
    for delta in (1e-3, 1e-2):
        bad = dataclasses.replace(sol, jump_u=sol.jump_u.with_values(sol.jump_u.values + delta * bump))
        out.append(m3.identity_residuals(L, bad, c, spectral=False)["physical_idold"]["max"])
    assert out[0] > 100 * sol.residuals["physical_idold"]["max"]
    assert out[1] / out[0] == pytest.approx(10.0, rel=0.05)


def test_identity_residuals_of_zero_problem():
    g = grid()
    z = fo.zeros(g, "negative")
    sol = m3.solve_forward(m3.Mode3Loading(z, z), formal_constants(0.5, 1.0))
    assert all(v["max"] == 0.0 for v in sol.residuals.values())


@settings(max_examples=15, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5))
def test_forward_solve_is_linear(a, b):
    g = grid(256)
    c = formal_constants(0.5, 1.0)
    L1 = m3.Mode3Loading(*orc.case_loading("sym_412", g))
    L2 = m3.Mode3Loading(*orc.case_loading("antisym_411", g))
    s1 = m3.solve_forward(L1, c, residuals=False)
    s2 = m3.solve_forward(L2, c, residuals=False)
    L = m3.Mode3Loading(a * L1.p_plus + b * L2.p_plus, a * L1.p_minus + b * L2.p_minus)
    s = m3.solve_forward(L, c, residuals=False)
    for name in ("jump_u", "mean_u_neg", "mean_u_pos", "sigma_interface"):
        want = a * getattr(s1, name).values + b * getattr(s2, name).values
        got = getattr(s, name).values
        assert np.max(np.abs(got - want)) <= 1e-10 * (1 + np.max(np.abs(want)))


# inverse

@pytest.mark.parametrize("case", orc.CASES)
def test_recover_tractions_round_trip(case):
    g = grid()
    L, sol, c = oracle_solution(case)
    sym, skew = m3.recover_tractions(sol.mean_u, sol.jump_u, c)
    m = _mask(g)
    scale = max(np.max(np.abs(L.skew.values)), np.max(np.abs(L.sym.values)))
    assert np.max(np.abs(skew.values - L.skew.values)[m]) <= 1e-6 * scale
    assert np.max(np.abs(sym.values - L.sym.values)[m]) <= 1e-6 * scale
    assert sym.meta["cross_check"] <= RUN_TOL


def test_recover_zero():
    g = grid()
    z = fo.zeros(g, "negative")
    sym, skew = m3.recover_tractions(z, z, formal_constants(0.5, 1.0))
    assert not np.any(sym.values) and not np.any(skew.values)
