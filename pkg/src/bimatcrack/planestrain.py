"""In-plane (Modes I and II) interface crack.

Vector fields carry the components ``(1, 2)`` along their leading axis, so a
``HalfLineField`` with values of shape ``(2, n)`` represents a displacement
``[u_1, u_2]`` or a traction ``[sigma_21, sigma_22]``.

Every symbol is of the form ``a I + c E`` with ``E = [[0, 1], [-1, 0]]``.
Such matrices commute, and on the combinations

    w_+ = v_1 - i v_2   (E acts as +i),    w_- = v_1 + i v_2   (E acts as -i)

each matrix operator reduces to a scalar Mellin multiplier. The forward
solve, the interfacial traction and the mean displacement are evaluated that
way.

Spectral symbols (``s = sgn(xi)``):

    C     = -2|xi| / (b (alpha^2 - gamma^2)) (alpha I + i gamma s E)
    D     = ((b alpha - d gamma) I + i (b gamma - d alpha) s E) / (2 b (alpha^2 - gamma^2))
    C^-1  = -b / (2|xi|) (alpha I - i gamma s E)
    C^-1D = -1 / (4|xi|) (b I - i d s E)
    G     = b / (2(b^2 - d^2)) ((b alpha - d gamma) I + i (d alpha - b gamma) s E)
    H     = -1 / (b^2 - d^2) (b |xi| I + i d xi E)

``G`` and ``H`` are the transforms of the crack-face operators acting on
``[p]`` and on ``d[u]/dx``. The two whole-line identities

    <s> + <p> + G [p] = H [u],        <s> + <p> - C <u> = -D [p]

give ``[p] = K [u] - L <u>`` and ``<p> = K <u> - M [u]`` on x < 0 with
``K = (G - D)^-1 H``, ``L = (G - D)^-1 C`` and ``M = D K``.
"""
import dataclasses
import math

import numpy as np

from . import fieldops as fo
from .fieldops import NEG, POS, INT_TO_FAR, K_CROSS, K_SAME, MellinOp
from .materials import DegeneracyError, ParameterError

BALANCE_TOL = 1e-6


class BalanceError(ValueError):
    """The skew-symmetric loading carries a net force."""


@dataclasses.dataclass(frozen=True)
class FixedMatrices:
    R: np.ndarray
    I: np.ndarray
    E: np.ndarray


FIXED = FixedMatrices(R=np.diag([-1.0, 1.0]), I=np.eye(2),
                      E=np.array([[0.0, 1.0], [-1.0, 0.0]]))
_I, _E = FIXED.I, FIXED.E


def _ie(a, c):
    """Stack of ``a I + c E`` for broadcastable scalars ``a, c``."""
    a, c = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(c, dtype=complex))
    return a[..., None, None] * _I + c[..., None, None] * _E


def vector_field(grid, f1, f2, side=NEG, tip=0.0, far=-math.inf):
    """Sample a two-component field ``(f1(x), f2(x))`` on one side of ``grid``."""
    g = grid.on(side)
    x = g.nodes
    return fo.HalfLineField(g, np.stack([np.asarray(f1(x)) * np.ones_like(x),
                                         np.asarray(f2(x)) * np.ones_like(x)]), tip, far)


def _check_vector(f, name, side=NEG):
    if f.values.shape[0] != 2 or f.values.ndim != 2:
        raise ParameterError(f"{name} must have two components")
    if f.side != side:
        raise fo.SupportError(f"{name} must live on the {side} half-line")


def apply_E(f):
    """``E f`` for a two-component field."""
    v = f.values
    return f.with_values(np.stack([v[1], -v[0]]))


@dataclasses.dataclass(frozen=True)
class PlaneStrainSymbols:
    """Matrix symbols of the plane-strain identities for one material pair.

    Each method takes an array of nonzero ``xi`` and returns an array of
    shape ``xi.shape + (2, 2)``.
    """

    constants: object

    @property
    def fixed(self):
        return FIXED

    def _c(self):
        c = self.constants
        return c.b, c.d, c.alpha, c.gamma

    def C(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = -2.0 * np.abs(xi) / (b * (al ** 2 - ga ** 2))
        return _ie(f * al, f * 1j * ga * np.sign(xi))

    def D(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = 1.0 / (2.0 * b * (al ** 2 - ga ** 2))
        return _ie(f * (b * al - d * ga) * np.ones_like(xi),
                   f * 1j * (b * ga - d * al) * np.sign(xi))

    def C_inv(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = -b / (2.0 * np.abs(xi))
        return _ie(f * al, -f * 1j * ga * np.sign(xi))

    def C_inv_D(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = -1.0 / (4.0 * np.abs(xi))
        return _ie(f * b, -f * 1j * d * np.sign(xi))

    def G(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = b / (2.0 * (b * b - d * d))
        return _ie(f * (b * al - d * ga) * np.ones_like(xi),
                   f * 1j * (d * al - b * ga) * np.sign(xi))

    def H(self, xi):
        b, d, al, ga = self._c()
        xi = np.asarray(xi, dtype=float)
        f = -1.0 / (b * b - d * d)
        return _ie(f * b * np.abs(xi), f * 1j * d * xi)

    # recovery matrices in terms of beta_1..beta_4
    def K(self, xi):
        c = self.constants
        xi = np.asarray(xi, dtype=float)
        return _ie(c.beta3 * np.abs(xi), 1j * c.beta4 * xi)

    def L(self, xi):
        c = self.constants
        xi = np.asarray(xi, dtype=float)
        return _ie(4.0 * c.beta1 * np.abs(xi), -4.0j * c.beta2 * xi)

    def M(self, xi):
        """``D K``; equals ``L / 4``."""
        c = self.constants
        xi = np.asarray(xi, dtype=float)
        return _ie(c.beta1 * np.abs(xi), -1j * c.beta2 * xi)

    def M_printed(self, xi):
        """``beta_1 |xi| I + i beta_2 xi E``, the published sign of the E-term."""
        c = self.constants
        xi = np.asarray(xi, dtype=float)
        return _ie(c.beta1 * np.abs(xi), 1j * c.beta2 * xi)

    # the same three matrices by direct elimination
    def K_elim(self, xi):
        return np.linalg.solve(self.G(xi) - self.D(xi), self.H(xi))

    def L_elim(self, xi):
        return np.linalg.solve(self.G(xi) - self.D(xi), self.C(xi))

    def M_elim(self, xi):
        return self.D(xi) @ self.K_elim(xi)


def assemble_symbols(constants):
    """Build the plane-strain symbols after checking for degeneracy.

    Raises
    ------
    DegeneracyError
        If ``b = 0``, ``alpha^2 = gamma^2`` or ``b^2 = d^2``.
    ParameterError
        If the in-plane constants are undefined (formal Mode III constants).
    """
    names = ("b", "d", "alpha", "gamma", "beta1", "beta2", "beta3", "beta4")
    if any(not math.isfinite(getattr(constants, n)) for n in names):
        raise ParameterError("in-plane constants are undefined for this parameter set")
    for flag, what in (("b=0", "b vanishes"),
                       ("alpha^2=gamma^2", "alpha^2 - gamma^2 vanishes"),
                       ("b^2=d^2", "b^2 - d^2 vanishes")):
        if constants.is_degenerate(flag):
            raise DegeneracyError(f"degenerate constants: {what} ({flag})")
    return PlaneStrainSymbols(constants)


_SS_INT = INT_TO_FAR.then(K_SAME)            # S^(s) int_{-inf}^x
_SC_INT = INT_TO_FAR.then(K_CROSS)           # S^(c) int_{-inf}^x


# scalar reduction on the eigen-combinations of E

def _to_eig(values):
    return {+1: values[0] - 1j * values[1], -1: values[0] + 1j * values[1]}


def _from_eig(w):
    return np.stack([0.5 * (w[+1] + w[-1]), 0.5j * (w[+1] - w[-1])])


def _apply_eig(f, op_for, side, tip, far, real=True):
    """Apply the E-diagonal operator with branch symbols ``op_for(lam)``."""
    if f.is_zero():
        return fo.HalfLineField(f.grid.on(side), np.zeros(f.values.shape), tip, far)
    w = _to_eig(f.values)
    out = {}
    for lam in (+1, -1):
        fl = f.with_values(w[lam], f.tip_exponent, f.far_exponent)
        out[lam] = fo.apply_op(fl, op_for(lam), side, tip, far, real=False).values
    v = _from_eig(out)
    if real:
        v = v.real
    return fo.HalfLineField(f.grid.on(side), v, tip, far)


def _den(b, d, lam):
    return lambda s: b * np.cos(np.pi * s) + 1j * lam * d * np.sin(np.pi * s)


def _jump_op(b, d, lam):
    # [u] from r on one branch: (b^2 - d^2) pi sinc(s + 1) / (b cos + i lam d sin)
    den = _den(b, d, lam)
    return MellinOp(lambda s: (b * b - d * d) * np.pi * np.sinc(s + 1.0) / den(s),
                    (-1.5, -0.5), 1.0)


def _sc_v_op(b, d, lam):
    # S^(c) d[u]/dx from r
    den = _den(b, d, lam)
    return MellinOp(lambda s: -(b * b - d * d) / den(s), (-1.5, -0.5))


def _s_jump_reg_op(b, d, lam, kind):
    # S^(s)[u] (kind "s") or S^(c)[u] (kind "c") from r, less the pole at
    # s = -1 that carries the tip value; that part is -R int_X^inf r with
    # R = (b^2 - d^2)/b on both sides
    den = _den(b, d, lam)
    q = b * b - d * d
    if kind == "s":
        return MellinOp(lambda s: q * 1j * lam * d * np.pi * np.sinc(s + 1.0) / (b * den(s)),
                        (-1.5, -0.5), 1.0)
    return MellinOp(
        lambda s: -q * np.pi * (b * np.sinc(0.5 * (s + 1.0)) * np.sin(0.5 * np.pi * (s + 1.0))
                                - 1j * lam * d * np.sinc(s + 1.0)) / (b * den(s)),
        (-1.5, -0.5), 1.0)


def _s_jump(r, sym_p, skew_p, symbols, kind):
    """``S^(s)[u]`` on x < 0 or ``S^(c)[u]`` on x > 0 straight from the loading.

    The tail integral of ``r`` is assembled term by term: the antiderivative
    of ``S^(s)[p]`` is ``S^(s) Psi``, which avoids integrating the slowly
    decaying ``S^(s)[p]`` numerically.
    """
    c = symbols.constants
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    side = NEG if kind == "s" else POS
    reg = _apply_eig(r, lambda lam: _s_jump_reg_op(b, d, lam, kind), side, 0.0, -0.5)
    tail = fo.apply_op(sym_p, INT_TO_FAR, side, 0.0, sym_p.far_exponent + 1.0).values
    if not skew_p.is_zero():
        cA = b / (2.0 * (b * b - d * d))
        tip_p = min(skew_p.tip_exponent + 1.0, 0.0)
        psi = fo.apply_op(skew_p, INT_TO_FAR, side, tip_p, -math.inf).values
        s_psi = fo.apply_op(skew_p, _SS_INT, side, tip_p, -1.0)
        tail = tail + cA * (b * al - d * ga) * psi + cA * (d * al - b * ga) * apply_E(s_psi).values
    return reg.with_values(reg.values - (b * b - d * d) / b * tail)


def check_balance(skew_p, tol=BALANCE_TOL):
    """Raise :class:`BalanceError` unless each component of ``[p]`` integrates to zero."""
    net = fo.integrate(skew_p)
    scale = fo.integrate(skew_p.with_values(np.abs(skew_p.values)))
    bad = (scale > 0) & (np.abs(net) > tol * np.where(scale > 0, scale, 1.0))
    if np.any(bad):
        raise BalanceError(f"skew loading is unbalanced: int [p] = {net}")
    return net


def crack_face_combination(sym_p, skew_p, symbols):
    """``r = <p> + A^(s)[p]`` on x < 0."""
    c = symbols.constants
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    cA = b / (2.0 * (b * b - d * d))
    out = sym_p.values + cA * (b * al - d * ga) * skew_p.values
    if not skew_p.is_zero():
        # [p] has zero integral, so S^(s)[p] decays like |x|**-2
        ss = fo.projected_cauchy(skew_p, "s", far=-2.0)
        out = out + cA * (d * al - b * ga) * apply_E(ss).values
        return fo.HalfLineField(sym_p.grid, out, min(sym_p.tip_exponent, 0.0),
                                max(sym_p.far_exponent, -2.0))
    return fo.HalfLineField(sym_p.grid, out, sym_p.tip_exponent, sym_p.far_exponent)


def solve_jump12(sym_p, skew_p, symbols, constants=None, tol=BALANCE_TOL):
    """Displacement jump ``[u]`` on x < 0 from the crack-face loadings.

    Solves ``<p> + A^(s)[p] = B^(s) d[u]/dx`` in the class singular like
    ``|x|**-1/2`` at the tip and integrates from ``-inf``. ``constants``, if
    given, must be the set the symbols were assembled from.

    Returns
    -------
    HalfLineField
        Two components; ``meta["residual"]`` holds the relative residual of
        the crack-face identity on interior nodes.
    """
    _check_vector(sym_p, "sym_p")
    _check_vector(skew_p, "skew_p")
    if constants is not None and constants != symbols.constants:
        raise ParameterError("constants differ from those the symbols were built from")
    check_balance(skew_p, tol)
    c = symbols.constants
    r = crack_face_combination(sym_p, skew_p, symbols)
    jump = _apply_eig(r, lambda lam: _jump_op(c.b, c.d, lam), NEG, 0.5, -0.5)
    jump.meta["residual"] = _crack_face_residual(jump, r, symbols)
    jump.meta["r"] = r
    return jump


def _crack_face_residual(jump, r, symbols):
    if r.is_zero():
        return 0.0
    c = symbols.constants
    b, d = c.b, c.d
    ss = fo.apply_op(jump, fo.SS_DERIV, NEG, -0.5, -1.5)
    dv = fo.derivative(jump)
    t1 = -b * ss.values / (b * b - d * d)
    t2 = d * apply_E(dv).values / (b * b - d * d)
    # scaled by the largest term; both grow like |x|**-1/2 at the tip
    mask = jump.grid.interior()
    scale = max(np.max(np.abs(t[:, mask])) for t in (t1, t2, r.values)) or 1.0
    return float(np.max(np.abs(t1 + t2 - r.values)[:, mask]) / scale)


def interfacial_traction12(jump_u, skew_p, symbols):
    """``<s> = B^(c) d[u]/dx - A^(c)[p]`` on x > 0."""
    _check_vector(jump_u, "jump_u")
    c = symbols.constants
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    sc_v = fo.apply_op(jump_u, fo.SC_DERIV, POS, -0.5, -1.5)
    out = -b / (b * b - d * d) * sc_v.values
    if not skew_p.is_zero():
        sc_p = fo.projected_cauchy(skew_p, "c", far=-2.0)
        out = out - b * (d * al - b * ga) / (2 * (b * b - d * d)) * apply_E(sc_p).values
    return fo.HalfLineField(jump_u.grid.on(POS), out, -0.5, -1.5)


def interfacial_traction12_from_loading(sym_p, skew_p, symbols):
    """``<s>`` from the loading through the fused multiplier (consistency check)."""
    c = symbols.constants
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    r = crack_face_combination(sym_p, skew_p, symbols)
    sc_v = _apply_eig(r, lambda lam: _sc_v_op(b, d, lam), POS, -0.5, -1.5)
    out = -b / (b * b - d * d) * sc_v.values
    if not skew_p.is_zero():
        sc_p = fo.projected_cauchy(skew_p, "c", far=-2.0)
        out = out - b * (d * al - b * ga) / (2 * (b * b - d * d)) * apply_E(sc_p).values
    return fo.HalfLineField(r.grid.on(POS), out, -0.5, -1.5)


def _mean_coefficients(c):
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    q = b * b - d * d
    p_i = b * b * (b * (al ** 2 + ga ** 2) - 2 * d * al * ga) / (4 * q) - b / 4
    p_e = b * b * (d * (al ** 2 + ga ** 2) - 2 * b * al * ga) / (4 * q) + d / 4
    return b / (2 * q), p_i, p_e


def mean_displacement12(sym_p, skew_p, sigma=None, symbols=None, route="identity"):
    """Mean displacement on both half-lines.

    Parameters
    ----------
    sym_p, skew_p : HalfLineField
        ``<p>`` and ``[p]`` on x < 0 (two components).
    sigma : HalfLineField, optional
        ``<s>`` on x > 0; required by ``route="spectral"``.
    symbols : PlaneStrainSymbols
    route : {"identity", "spectral"}
        ``identity`` eliminates ``<s> + <p>`` between the two whole-line
        identities, ``<u> = G[u] - C^-1 (G - D)[p]``, and evaluates every
        term in physical space from the loading. ``spectral`` inverts
        ``C^-1 (<s> + <p>) + C^-1 D [p]`` numerically; the sum
        ``<s> + <p>`` vanishes at ``xi = 0`` by balance, so no subtraction
        is needed.

    Returns
    -------
    (HalfLineField, HalfLineField)
    """
    if symbols is None:
        raise TypeError("symbols are required")
    if route == "spectral":
        return _mean_displacement_spectral(sym_p, skew_p, sigma, symbols)
    if route != "identity":
        raise ValueError(f"unknown route {route!r}")
    c = symbols.constants
    b, d, al, ga = c.b, c.d, c.alpha, c.gamma
    cg, p_i, p_e = _mean_coefficients(c)
    r = crack_face_combination(sym_p, skew_p, symbols)
    grid = sym_p.grid
    jump = _apply_eig(r, lambda lam: _jump_op(b, d, lam), NEG, 0.5, -0.5)
    s_jump_n = _s_jump(r, sym_p, skew_p, symbols, "s")
    s_jump_p = _s_jump(r, sym_p, skew_p, symbols, "c")
    neg = cg * ((al * b - ga * d) * jump.values + (al * d - ga * b) * apply_E(s_jump_n).values)
    pos = cg * (al * d - ga * b) * apply_E(s_jump_p).values
    if not skew_p.is_zero():
        tip_p = min(skew_p.tip_exponent + 1.0, 0.0)
        s_psi_n = fo.apply_op(skew_p, _SS_INT, NEG, tip_p, -1.0)
        s_psi_p = fo.apply_op(skew_p, _SC_INT, POS, tip_p, -1.0)
        psi = fo.antiderivative(skew_p, "far")
        neg = neg - p_i * s_psi_n.values + p_e * apply_E(psi).values
        pos = pos - p_i * s_psi_p.values
    return (fo.HalfLineField(grid, neg, 0.0, -0.5),
            fo.HalfLineField(grid.on(POS), pos, 0.0, -0.5))


def _mean_displacement_spectral(sym_p, skew_p, sigma, symbols, tol=1e-5):
    if sigma is None:
        raise TypeError("the spectral route needs sigma")
    q = fo.fourier_forward(fo.LineField(sym_p, sigma))
    q0 = np.abs(fo.integrate(sym_p) + fo.integrate(sigma))
    ref = np.abs(fo.integrate(sym_p)).max() + np.abs(fo.integrate(sigma)).max()
    if np.any(q0 > tol * max(ref, 1e-300)):
        raise fo.RegularizationRequired(
            f"<s> + <p> does not vanish at xi = 0 (net force {q0}); C^-1 has a pole there")
    J = fo.fourier_forward(skew_p)
    X = q.grid.X
    out = {}
    for key, xi in (("neg", -X), ("pos", X)):
        qv = getattr(q, key)
        jv = getattr(J, key)
        ci = symbols.C_inv(xi)
        cid = symbols.C_inv_D(xi)
        out[key] = (np.einsum("nij,jn->in", ci, qv) + np.einsum("nij,jn->in", cid, jv))
    spec = fo.SpectralField(q.grid, out["neg"], out["pos"], "none", None, -0.5, -1.5)
    neg = fo.fourier_invert(spec, NEG).real()
    pos = fo.fourier_invert(spec, POS).real()
    return (neg.with_values(neg.values, 0.0, -0.5), pos.with_values(pos.values, 0.0, -0.5))


def recover_tractions12(mean_u, jump_u, symbols):
    """Crack-face tractions from the displacements.

    ``[p] = K[u] - L<u>`` and ``<p> = K<u> - M[u]`` on x < 0, with
    ``|xi| -> S d/dx`` and ``i xi -> -d/dx`` in physical space. ``mean_u``
    must be given on the whole line (a LineField) since ``|xi|`` acts on
    both sides.

    Returns
    -------
    (HalfLineField, HalfLineField)
        ``<p>`` and ``[p]``.
    """
    if not isinstance(mean_u, fo.LineField):
        raise ParameterError("mean_u must be a LineField covering both half-lines")
    _check_vector(jump_u, "jump_u")
    c = symbols.constants
    s_j = fo.cauchy_derivative(jump_u).neg
    d_j = fo.derivative(jump_u)
    s_m = fo.cauchy_derivative(mean_u).neg
    d_m = fo.derivative(mean_u.neg)
    # K f = beta3 S f' - beta4 E f',  L f = 4 (beta1 S f' + beta2 E f'),
    # M f = beta1 S f' + beta2 E f'
    Kj = c.beta3 * s_j.values - c.beta4 * apply_E(d_j).values
    Km = c.beta3 * s_m.values - c.beta4 * apply_E(d_m).values
    Lm = 4.0 * (c.beta1 * s_m.values + c.beta2 * apply_E(d_m).values)
    Mj = c.beta1 * s_j.values + c.beta2 * apply_E(d_j).values
    g = jump_u.grid
    return (fo.HalfLineField(g, Km - Mj, 0.0, -math.inf),
            fo.HalfLineField(g, Kj - Lm, 0.0, -math.inf))


def components(f):
    """Split a two-component field into two scalar fields."""
    return tuple(f.with_values(f.values[i]) for i in range(f.values.shape[0]))


def balance_values12(sym_p, sigma):
    """``(sigma_bar(0), pbar(0))``: the integrals of ``<s>`` over x > 0 and of
    ``<p>`` over x < 0, per component."""
    return fo.integrate(sigma), fo.integrate(sym_p)


def identity_residuals12(sym_p, skew_p, solution, symbols, band=(1e-3, 1e3)):
    """Relative residuals of the two whole-line spectral identities.

    ``<s> + <p> + G[p] - H[u]`` and ``<s> + <p> - C<u> + D[p]`` are
    evaluated from the transforms of the sampled fields on
    ``band[0] <= |xi| <= band[1]`` and scaled by their largest term.
    """
    F = fo.fourier_forward
    S, P, J = F(solution.sigma_interface), F(sym_p), F(skew_p)
    U, M = F(solution.jump_u), F(solution.mean_u)
    xi = S.xi
    mask = (np.abs(xi) >= band[0]) & (np.abs(xi) <= band[1])

    def mv(A, v):
        return np.einsum("nij,jn->in", A, v)

    out = {}
    for name, terms in (
            ("spectral_GH", (S.values, P.values, mv(symbols.G(xi), J.values),
                             -mv(symbols.H(xi), U.values))),
            ("spectral_CD", (S.values, P.values, -mv(symbols.C(xi), M.values),
                             mv(symbols.D(xi), J.values)))):
        total = sum(terms)
        scale = max(np.max(np.abs(t[:, mask])) for t in terms) or 1.0
        out[name] = {"max": float(np.max(np.abs(total[:, mask])) / scale)}
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class PlaneStrainSolution:
    jump_u: fo.HalfLineField
    mean_u_neg: fo.HalfLineField
    mean_u_pos: fo.HalfLineField
    sigma_interface: fo.HalfLineField
    residuals: dict = dataclasses.field(default_factory=dict)

    @property
    def mean_u(self):
        return fo.LineField(self.mean_u_neg, self.mean_u_pos)


def solve_forward12(sym_p, skew_p, symbols, tol=BALANCE_TOL, residuals=True):
    """Forward plane-strain solve: ``[u]``, ``<u>`` on both sides and ``<s>``.

    ``residuals`` holds the crack-face identity, the agreement of the two
    traction routes and, if requested, the spectral identity residuals.
    """
    jump = solve_jump12(sym_p, skew_p, symbols, tol=tol)
    sigma = interfacial_traction12(jump, skew_p, symbols)
    mneg, mpos = mean_displacement12(sym_p, skew_p, sigma, symbols)
    res = {"crack_face_identity": {"max": jump.meta["residual"]}}
    alt = interfacial_traction12_from_loading(sym_p, skew_p, symbols)
    mask = jump.grid.interior()
    scale = np.max(np.abs(alt.values[:, mask])) or 1.0
    res["traction_routes"] = {
        "max": float(np.max(np.abs(alt.values - sigma.values)[:, mask]) / scale)}
    sol = PlaneStrainSolution(jump, mneg, mpos, sigma, res)
    if residuals:
        res.update(identity_residuals12(sym_p, skew_p, sol, symbols))
    return sol
