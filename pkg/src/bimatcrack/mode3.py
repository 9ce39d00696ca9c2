"""Anti-plane (Mode III) interface crack: forward and inverse solves.

Notation on the crack faces ``x < 0``: ``sym = <p>`` is the mean of the face
tractions and ``skew = [p]`` their difference. The displacement jump ``[u]``
lives on ``x < 0``, the mean displacement ``<u>`` on the whole line and the
interfacial traction ``<sigma>`` on ``x > 0``.

The two governing relations used throughout are

    -(1/k) S^(s) [u]'  = <p> + (eta/2) [p]      on x < 0,
    -(1/k) S^(c) [u]'  = <sigma>                on x > 0,

and, for the mean displacement,

    <u> = (eta/2) [u] + S Psi / (mu_+ + mu_-),   Psi(x) = int_{-inf}^x [p],

which stays regular at ``eta = 0``.

Every operator chain is evaluated as one Mellin multiplier, so a forward
solve never differentiates sampled data numerically.
"""
import dataclasses
import logging
import warnings

import numpy as np

from . import fieldops as fo
from .fieldops import (NEG, POS, D_X, INT_TO_FAR, K_CROSS, K_SAME,
                       K_SAME_INV_BOUNDED, K_SAME_INV_SINGULAR, MellinOp)

log = logging.getLogger(__name__)


class BalanceError(ValueError):
    """The skew-symmetric loading carries a net force."""


class BalanceWarning(UserWarning):
    pass


class DegenerateRouteError(ArithmeticError):
    """The requested identity carries a 1/eta factor and eta = 0."""


BALANCE_TOL = 1e-6

# chains in the variable X = |x| on the crack side (d/dx = -d/dX there)
_D_NEG = -1.0 * D_X
# [u] from g: int_{-inf}^x of (S^(s))^-1 g, symbol tan(pi s)/(s + 1). The
# pole of 1/(s+1) cancels against tan, so it is written through sinc and
# used on its full strip
_JUMP_FROM_G = MellinOp(lambda s: -np.pi * np.sinc(s + 1.0) / np.cos(np.pi * s),
                        (-1.5, -0.5), 1.0)
# <sigma> from g: S^(c) (S^(s))^-1 g, symbol tan(pi s) csc(pi s)
_SIGMA_FROM_G = MellinOp(lambda s: 1.0 / np.cos(np.pi * s), (-1.5, -0.5))
_SC_DERIV = fo.SC_DERIV                      # S^(c) d/dx
_SS_DERIV = fo.SS_DERIV                      # S^(s) d/dx
_SS_INT = INT_TO_FAR.then(K_SAME)            # S^(s) int_{-inf}^x
_SC_INT = INT_TO_FAR.then(K_CROSS)           # S^(c) int_{-inf}^x


@dataclasses.dataclass(frozen=True, eq=False)
class Mode3Loading:
    """Crack-face tractions on the upper (``p_plus``) and lower faces."""

    p_plus: fo.HalfLineField
    p_minus: fo.HalfLineField

    @property
    def sym(self):
        return 0.5 * (self.p_plus + self.p_minus)

    @property
    def skew(self):
        return self.p_plus - self.p_minus

    @property
    def grid(self):
        return self.p_plus.grid

    @classmethod
    def from_parts(cls, sym, skew):
        """Build from ``<p>`` and ``[p]``."""
        return cls(sym + 0.5 * skew, sym - 0.5 * skew)

    def net_force(self):
        """``(int <p>, int [p])`` over the crack faces."""
        return float(fo.integrate(self.sym)), float(fo.integrate(self.skew))


@dataclasses.dataclass(frozen=True, eq=False)
class Mode3Solution:
    """Displacements and interfacial traction of one Mode III problem."""

    jump_u: fo.HalfLineField
    mean_u_neg: fo.HalfLineField
    mean_u_pos: fo.HalfLineField
    sigma_interface: fo.HalfLineField
    residuals: dict = dataclasses.field(default_factory=dict)
    loading: Mode3Loading | None = None

    @property
    def mean_u(self):
        return fo.LineField(self.mean_u_neg, self.mean_u_pos)


def _check_side(f, name):
    if f.side != NEG:
        raise fo.SupportError(f"{name} must live on the crack faces (x < 0)")


def symmetrize_loading(p_plus, p_minus, tol=BALANCE_TOL):
    """Split face tractions into mean and difference parts.

    Emits :class:`BalanceWarning` when ``[p]`` has a net force; the forward
    solve later refuses such data.
    """
    _check_side(p_plus, "p_plus")
    _check_side(p_minus, "p_minus")
    if not p_plus.grid.compatible(p_minus.grid):
        raise fo.GridError("p_plus and p_minus live on different grids")
    loading = Mode3Loading(p_plus, p_minus)
    _, net = loading.net_force()
    scale = float(fo.integrate(loading.skew.with_values(np.abs(loading.skew.values))))
    if abs(net) > tol * max(scale, 1e-300) and scale > 0:
        warnings.warn(f"skew loading is unbalanced: int [p] = {net:.3e}", BalanceWarning,
                      stacklevel=2)
    return loading


def check_balance(loading, tol=BALANCE_TOL):
    """Raise :class:`BalanceError` unless ``int [p] = 0`` to relative ``tol``."""
    skew = loading.skew
    net = float(fo.integrate(skew))
    scale = float(fo.integrate(skew.with_values(np.abs(skew.values))))
    if scale > 0 and abs(net) > tol * scale:
        raise BalanceError(f"skew loading is unbalanced: int [p] = {net:.6e} "
                           f"(relative {abs(net) / scale:.2e})")
    return net


def _g(loading, constants):
    return -constants.k * (loading.sym + 0.5 * constants.eta * loading.skew)


def solve_jump(loading, constants, tol=BALANCE_TOL):
    """Displacement jump on the crack faces.

    ``[u]' = (S^(s))^-1 g`` with ``g = -k(<p> + (eta/2)[p])`` in the class
    singular like ``|x|**-1/2`` at the tip, then ``[u]`` is integrated from
    ``-inf``. That class has zero total integral, so ``[u]`` also vanishes
    at the tip.

    Returns
    -------
    HalfLineField
        ``[u]`` with ``meta["residual"]``, the relative residual of the jump
        relation on interior nodes.
    """
    check_balance(loading, tol)
    g = _g(loading, constants)
    jump = fo.apply_op(g, _JUMP_FROM_G, NEG, 0.5, -0.5)
    if not g.is_zero():
        back = fo.apply_op(jump, _SS_DERIV, NEG, g.tip_exponent, g.far_exponent)
        mask = g.grid.interior()
        scale = np.max(np.abs(g.values[mask])) or 1.0
        jump.meta["residual"] = float(np.max(np.abs(back.values - g.values)[mask]) / scale)
    else:
        jump.meta["residual"] = 0.0
    return jump


def interfacial_traction(jump_u, constants):
    """``<sigma> = -(1/k) S^(c) [u]'`` on x > 0."""
    _check_side(jump_u, "jump_u")
    return fo.apply_op(jump_u, (-1.0 / constants.k) * _SC_DERIV, POS, -0.5, -1.5)


def interfacial_traction_from_loading(loading, constants):
    """``<sigma>`` straight from the loading, ``-(1/k) S^(c) (S^(s))^-1 g``.

    An independent route to :func:`interfacial_traction`, used as a
    consistency check.
    """
    g = _g(loading, constants)
    return fo.apply_op(g, (-1.0 / constants.k) * _SIGMA_FROM_G, POS, -0.5, -1.5)


def mean_displacement(loading, jump_u, sigma_interface=None, constants=None):
    """Mean displacement on both half-lines.

    ``<u> = (eta/2)[u] + S Psi / (mu_+ + mu_-)`` with ``Psi`` the
    antiderivative of ``[p]`` from ``-inf``. ``Psi`` vanishes for x >= 0 by
    balance, so ``<u>`` ahead of the tip is ``S^(c) Psi / (mu_+ + mu_-)`` and
    is identically zero for symmetric loading. ``sigma_interface`` is not
    needed on this route and is accepted for interface symmetry only.

    Returns
    -------
    (HalfLineField, HalfLineField)
        ``<u>`` on x < 0 and on x > 0.
    """
    if constants is None:
        raise TypeError("constants are required")
    skew = loading.skew
    c = constants.c_mean
    tip_p = min(skew.tip_exponent + 1.0, 0.0)
    neg = 0.5 * constants.eta * jump_u
    neg = neg.with_values(neg.values, 0.0, -0.5)
    pos = fo.zeros(skew.grid, POS, tip=0.0, far=-1.0)
    if not skew.is_zero():
        far = -1.0
        s_neg = fo.apply_op(skew, c * _SS_INT, NEG, tip_p, far)
        s_pos = fo.apply_op(skew, c * _SC_INT, POS, tip_p, far)
        neg = neg.with_values(neg.values + s_neg.values, 0.0, -0.5)
        pos = s_pos.with_values(s_pos.values, 0.0, -1.0)
    return neg, pos


def recover_tractions(mean_u, jump_u, constants, mean_u_pos=None, tip_exponent=0.0):
    """Crack-face tractions from the displacements on the crack faces.

    Parameters
    ----------
    mean_u : HalfLineField or LineField
        ``<u>``; only the part on x < 0 is needed.
    jump_u : HalfLineField
        ``[u]`` on x < 0.
    constants : BimaterialConstants
    mean_u_pos : HalfLineField, optional
        ``<u>`` on x > 0. When given (or when ``mean_u`` is a LineField) the
        mean traction is also computed from the whole-line relation and the
        difference is stored in ``meta["cross_check"]``.
    tip_exponent : float
        Declared tip behaviour ``|x|**tip_exponent`` of the recovered
        tractions (bounded by default). Samples closer to the tip than the
        trusted window are continued with this exponent.

    Returns
    -------
    (HalfLineField, HalfLineField)
        ``<p>`` and ``[p]`` on x < 0.

    Notes
    -----
    ``[p]`` is the derivative of ``Psi = (S^(s))^-1 g_r`` with
    ``g_r = (mu_+ + mu_-)((eta/2)[u] - <u>)``, taken in the class bounded at
    the tip; ``<p>`` then follows from the jump relation.
    """
    if isinstance(mean_u, fo.LineField):
        mean_u_pos = mean_u.pos if mean_u_pos is None else mean_u_pos
        mean_u = mean_u.neg
    _check_side(mean_u, "mean_u")
    _check_side(jump_u, "jump_u")
    eta, k = constants.eta, constants.k
    g_r = (0.5 * eta * jump_u - mean_u) * (1.0 / constants.c_mean)
    # S^(s) Psi = -g_r, [p] = Psi'
    skew = fo.invert_Ss_derivative(-1.0 * g_r)
    grid = skew.grid
    skew = skew.with_values(fo.repair_tails(skew.values, grid, tip_exponent, -np.inf),
                            tip_exponent, -np.inf)
    back = fo.apply_op(jump_u, (-1.0 / k) * _SS_DERIV, NEG, tip_exponent, -np.inf)
    sym = back - 0.5 * eta * skew
    sym = sym.with_values(sym.values, tip_exponent, -np.inf)
    if mean_u_pos is not None:
        # <p> = (mu_- - mu_+)/2 S<u>' - (mu_+ + mu_-)/4 S[u]' on x < 0
        ms = constants.mu_sum
        du = fo.cauchy_derivative(fo.LineField(mean_u, mean_u_pos))
        dj = fo.cauchy_derivative(jump_u)
        t1 = 0.5 * eta * ms * du.neg.values
        t2 = -0.25 * ms * dj.neg.values
        mask = mean_u.grid.interior()
        # scaled by the largest term, since the two terms can cancel to a small <p>
        scale = max(np.max(np.abs(t[mask])) for t in (t1, t2, sym.values)) or 1.0
        sym.meta["cross_check"] = float(np.max(np.abs(t1 + t2 - sym.values)[mask]) / scale)
    return sym, skew


def solve_forward(loading, constants, residuals=True, tol=BALANCE_TOL):
    """Full forward solve: ``[u]``, ``<u>`` on both sides and ``<sigma>``."""
    jump = solve_jump(loading, constants, tol)
    sigma = interfacial_traction(jump, constants)
    mneg, mpos = mean_displacement(loading, jump, sigma, constants)
    sol = Mode3Solution(jump, mneg, mpos, sigma, {}, loading)
    if residuals:
        rep = {"jump_relation": {"max": jump.meta["residual"]}}
        alt = interfacial_traction_from_loading(loading, constants)
        mask = jump.grid.interior()
        scale = np.max(np.abs(alt.values[mask])) or 1.0
        rep["traction_routes"] = {
            "max": float(np.max(np.abs(alt.values - sigma.values)[mask]) / scale)}
        rep.update(identity_residuals(loading, sol, constants))
        sol.residuals.update(rep)
    return sol


def balance_values(loading, solution):
    """``(sigma_bar(0), pbar(0))`` from the sampled fields: the integrals of
    ``<sigma>`` over x > 0 and of ``<p>`` over x < 0."""
    return float(fo.integrate(solution.sigma_interface)), float(fo.integrate(loading.sym))


def _norms(terms, mask):
    total = sum(terms)
    scale = max(np.max(np.abs(t[..., mask])) for t in terms) or 1.0
    r = np.abs(total[..., mask]) / scale
    return {"max": float(np.max(r)), "l2": float(np.sqrt(np.mean(r ** 2)))}


def identity_residuals(loading, solution, constants, spectral=True, physical=True):
    """Residuals of the Mode III identities.

    Spectral forms are checked pointwise at ``1e-3 <= |xi| <= 1e3``;
    physical forms (``|xi| -> S d/dx``) on interior nodes of both half-lines.
    Each entry holds the maximum and RMS of ``|sum of terms|`` relative to
    the largest term. The identity with a ``1/eta`` factor is skipped when
    ``eta = 0``.
    """
    eta, k = constants.eta, constants.k
    ms = constants.mu_sum
    md = eta * ms                      # mu_- - mu_+
    sig, sym, skew = solution.sigma_interface, loading.sym, loading.skew
    jump, mean = solution.jump_u, solution.mean_u
    out = {}
    if spectral:
        S = fo.fourier_forward(sig).values
        P = fo.fourier_forward(sym).values
        J = fo.fourier_forward(skew).values
        U = fo.fourier_forward(jump).values
        M = fo.fourier_forward(mean).values
        xi = np.abs(fo.fourier_forward(sig).xi)
        mask = (xi >= 1e-3) & (xi <= 1e3)
        if abs(eta) > 1e-12:
            out["spectral_id"] = _norms([S, P, J / (2 * eta), 2 * xi / (k * eta) * M], mask)
        out["spectral_idold"] = _norms([S, P, 0.5 * eta * J, xi / k * U], mask)
        out["spectral_id3"] = _norms([J, ms * xi * M, -0.5 * eta * ms * xi * U], mask)
        out["spectral_id4"] = _norms([S, P, -0.5 * md * xi * M, 0.25 * ms * xi * U], mask)
    if physical:
        line = lambda f: fo.as_line(f).values
        Su = fo.cauchy_derivative(mean).values
        Sj = fo.cauchy_derivative(jump).values
        Sg, Pg, Jg = line(sig), line(sym), line(skew)
        m = sig.grid.interior()
        mask = np.concatenate([m[::-1], m])
        if abs(eta) > 1e-12:
            out["physical_id"] = _norms([Sg, Pg, Jg / (2 * eta), 2 / (k * eta) * Su], mask)
        out["physical_idold"] = _norms([Sg, Pg, 0.5 * eta * Jg, Sj / k], mask)
        out["physical_id3"] = _norms([Jg, ms * Su, -0.5 * eta * ms * Sj], mask)
        out["physical_id4"] = _norms([Sg, Pg, -0.5 * md * Su, 0.25 * ms * Sj], mask)
        # ahead of the tip the combination S(<u> - (eta/2)[u])' vanishes alone
        half = mask.size // 2
        pmask = mask.copy()
        pmask[:half] = False
        out["physical_homogeneous"] = _norms([Su, -0.5 * eta * Sj], pmask)
    return out
