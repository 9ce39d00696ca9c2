"""Grids, half-line fields and the singular operators acting on them.

All fields live on exponentially graded grids: nodes ``x = -X`` (crack faces)
or ``x = +X`` (interface ahead of the tip) with ``X_j = exp(y_j)`` and the
``y_j`` uniformly spaced and symmetric about zero. On such grids every
operator used here is a Mellin multiplier. A field is expanded as

    f(X) = X**a * sum_k c_k X**(i kappa_k),

each power is mapped exactly, and the result is resummed by FFT. The weight
``a`` is chosen inside the strip where both the input field and the operator
symbol are analytic. The strip is inferred from the declared tip and far-field
exponents of the field.

Operators and their symbols (``s = a + i kappa``, ``T, X > 0``):

* ``(1/pi) PV int_0^inf T**s / (T - X) dT = -cot(pi s) X**s``, same-side Cauchy;
* ``(1/pi) int_0^inf T**s / (T + X) dT = -X**s / sin(pi s)``, cross-side Cauchy;
* ``int_0^inf T**s exp(i sigma w T) dT = Gamma(s+1) w**-(s+1) exp(i sigma pi (s+1)/2)``,
  half-line Fourier transform, mapping the grid onto its reciprocal.

Because ``y`` is symmetric, the reciprocal grid coincides with the original
one, so Fourier-domain fields sit on ``xi = +-X``.

The Fourier convention is ``fbar(xi) = int f(x) exp(+i xi x) dx`` with inverse
``(1/2pi) int fbar exp(-i xi x) dxi``. The Cauchy operator
``S f = (1/pi) PV int f(t)/(x - t) dt`` then has symbol ``i sgn(xi)``.
"""
import dataclasses
import functools
import logging
import math

import numpy as np
from scipy.special import loggamma

from . import specfun

log = logging.getLogger(__name__)

NEG, POS, WHOLE = "negative", "positive", "whole"
INF = math.inf


class GridError(ValueError):
    """Invalid grid request."""


class StripError(ArithmeticError):
    """No admissible Mellin weight: the field's endpoint behaviour is
    incompatible with the requested operator or solution class."""


class SupportError(ValueError):
    """Field supported on the wrong half-line."""


class RegularizationRequired(ArithmeticError):
    """An inverse transform of F/|xi| was requested with F(0) != 0."""


# grids

@dataclasses.dataclass(frozen=True)
class Grid:
    """Exponentially graded sample set.

    Parameters
    ----------
    side : {"negative", "positive", "whole"}
    n : int
        Nodes per half-line, a power of two >= 16.
    ymax : float
        Half-width of the log-window: ``|x|`` spans ``[exp(-ymax), exp(ymax)]``.
    """

    side: str
    n: int
    ymax: float

    @property
    def h(self):
        return 2.0 * self.ymax / self.n

    @property
    def y(self):
        return (np.arange(self.n) - 0.5 * (self.n - 1)) * self.h

    @property
    def X(self):
        """Distances from the crack tip, ascending."""
        return np.exp(self.y)

    @property
    def nodes(self):
        X = self.X
        if self.side == NEG:
            return -X
        if self.side == POS:
            return X
        return np.concatenate([-X[::-1], X])

    def on(self, side):
        return Grid(side, self.n, self.ymax)

    def compatible(self, other):
        return self.n == other.n and self.ymax == other.ymax

    def interior(self, lo=1e-6, hi=1e6):
        """Mask of half-line nodes with ``lo <= |x| <= hi``."""
        X = self.X
        return (X >= lo) & (X <= hi)


# beyond |y| ~ 48 the dynamic range of the weighted samples lets rounding
# error dominate the tip and far-field nodes
YMAX_CAP = 48.0


def default_ymax(n):
    """Window half-width balancing truncation against resolution.

    Grows like ``1.5 sqrt(n)`` up to ``YMAX_CAP``; larger grids refine the
    spacing instead of widening the window further.
    """
    return min(1.5 * math.sqrt(n), YMAX_CAP)


def make_grid(side, n, mapping_params=None):
    """Build a graded grid clustered at the crack tip.

    Parameters
    ----------
    side : {"negative", "positive", "whole"}
    n : int
        Nodes per half-line; a power of two, at least 16.
    mapping_params : dict, optional
        ``{"ymax": float}``; defaults to :func:`default_ymax`.

    Returns
    -------
    Grid
    """
    if side not in (NEG, POS, WHOLE):
        raise GridError(f"unknown side {side!r}")
    if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
        raise GridError(f"n must be a power of two >= 16, got {n!r}")
    params = dict(mapping_params or {})
    ymax = float(params.pop("ymax", default_ymax(n)))
    if params:
        raise GridError(f"unknown mapping parameters {sorted(params)}")
    if not ymax > 0:
        raise GridError("ymax must be positive")
    return Grid(side, int(n), ymax)


# fields

@dataclasses.dataclass(frozen=True, eq=False)
class HalfLineField:
    """Samples of a function supported on one half-line.

    ``values[..., j]`` is the value at distance ``grid.X[j]`` from the tip.
    Leading axes hold vector components. The field is assumed to behave like
    ``X**tip_exponent`` as ``X -> 0`` and ``X**far_exponent`` as
    ``X -> inf`` (``-inf`` for faster than algebraic decay).
    """

    grid: Grid
    values: np.ndarray
    tip_exponent: float = 0.0
    far_exponent: float = -INF
    meta: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.grid.side not in (NEG, POS):
            raise GridError("a half-line field needs a one-sided grid")
        v = np.asarray(self.values)
        if v.shape[-1] != self.grid.n:
            raise GridError(f"expected {self.grid.n} samples, got {v.shape[-1]}")
        object.__setattr__(self, "values", v)

    @property
    def side(self):
        return self.grid.side

    @property
    def x(self):
        return self.grid.nodes

    @property
    def strip(self):
        return (self.far_exponent, self.tip_exponent)

    def is_zero(self):
        return not np.any(self.values)

    def with_values(self, values, tip=None, far=None, **meta):
        return HalfLineField(self.grid, values,
                             self.tip_exponent if tip is None else tip,
                             self.far_exponent if far is None else far, dict(meta))

    def real(self):
        return self.with_values(np.real(self.values))

    def __add__(self, other):
        _same_grid(self, other)
        if other.is_zero():
            return self.with_values(self.values + other.values)
        if self.is_zero():
            return other.with_values(self.values + other.values)
        return HalfLineField(self.grid, self.values + other.values,
                             min(self.tip_exponent, other.tip_exponent),
                             max(self.far_exponent, other.far_exponent))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        return self.with_values(c * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self


@dataclasses.dataclass(frozen=True, eq=False)
class LineField:
    """A field on the whole line, stored as its two half-line restrictions."""

    neg: HalfLineField
    pos: HalfLineField

    def __post_init__(self):
        if self.neg.side != NEG or self.pos.side != POS:
            raise SupportError("LineField needs (negative, positive) parts")
        _same_grid(self.neg, self.pos)

    @property
    def grid(self):
        return self.neg.grid.on(WHOLE)

    @property
    def x(self):
        return self.grid.nodes

    @property
    def values(self):
        return np.concatenate([self.neg.values[..., ::-1], self.pos.values], axis=-1)

    def __add__(self, other):
        return LineField(self.neg + other.neg, self.pos + other.pos)

    def __sub__(self, other):
        return LineField(self.neg - other.neg, self.pos - other.pos)

    def __mul__(self, c):
        return LineField(c * self.neg, c * self.pos)

    __rmul__ = __mul__


def _same_grid(f, g):
    if not f.grid.compatible(g.grid):
        raise GridError("fields live on different grids")


def sample(grid, fn, side=None, tip=0.0, far=-INF):
    """Sample ``fn(x)`` on one side of ``grid``."""
    g = grid.on(side or grid.side)
    return HalfLineField(g, np.asarray(fn(g.nodes)), tip, far)


def zeros(grid, side, shape=(), tip=0.0, far=-INF):
    g = grid.on(side)
    return HalfLineField(g, np.zeros(shape + (g.n,)), tip, far)


def as_line(f):
    """Promote a half-line field to a whole-line field (zero on the other side)."""
    if isinstance(f, LineField):
        return f
    other = zeros(f.grid, POS if f.side == NEG else NEG, f.values.shape[:-1])
    return LineField(f, other) if f.side == NEG else LineField(other, f)


def integrate(f):
    """Integral of a half-line field over its support (trapezoid in log X)."""
    g = f.grid
    return np.sum(f.values * g.X, axis=-1) * g.h


# Mellin engine

def _cot(s):
    return np.cos(np.pi * s) / np.sin(np.pi * s)


def _csc(s):
    return 1.0 / np.sin(np.pi * s)


def _tan(s):
    return np.sin(np.pi * s) / np.cos(np.pi * s)


@dataclasses.dataclass(frozen=True)
class MellinOp:
    """Operator ``X**s -> mult(s) X**(s + shift)`` on the strip ``lo < Re s < hi``.

    With ``reverse=True`` the output lives on the reciprocal grid and
    ``X**s -> mult(s) w**-(s + 1)``.
    """

    mult: object
    strip: tuple = (-INF, INF)
    shift: float = 0.0
    reverse: bool = False

    def then(self, other, strip=None):
        """Composite ``other(self(f))`` as a single multiplier.

        ``strip`` overrides the intersected strip when the product has
        removable singularities that widen it.
        """
        if self.reverse or other.reverse:
            raise ValueError("reverse operators do not compose")
        sh = self.shift
        lo = max(self.strip[0], other.strip[0] - sh)
        hi = min(self.strip[1], other.strip[1] - sh)
        return MellinOp(lambda s: other.mult(s + sh) * self.mult(s),
                        strip or (lo, hi), sh + other.shift)

    def __mul__(self, c):
        return MellinOp(lambda s: c * self.mult(s), self.strip, self.shift, self.reverse)

    __rmul__ = __mul__


_POLE_MARGIN = 0.25
_Y_CHECK = math.log(1e6)


def choose_weight(field_strip, op_strip, shift=0.0, out=None, ymax=None):
    """Pick the Mellin weight inside both strips.

    Without output information the midpoint of the common strip is used; a
    one-sided strip, which arises for exponentially decaying fields, places
    the weight half a unit inside its finite end.

    With the output exponents ``out = (tip, far)`` and the window half-width
    ``ymax`` the weight minimises a model of the truncation error instead:
    the field is cut at ``|y| = ymax``, the jump at that periodic seam is
    ``exp(-ymax * dist)`` with ``dist`` the distance of the weight to the
    field's strip edges, and it reaches the output through the factor
    ``X**(a + shift)`` relative to the expected output size at
    ``|x| = 1e-6`` and ``1e6``. The weight is kept at least a quarter unit
    from finite edges of the operator strip, where the symbol has poles and
    its kernel decays too slowly for the periodic sum.
    """
    lo = max(field_strip[0], op_strip[0])
    hi = min(field_strip[1], op_strip[1])
    if not lo < hi:
        raise StripError(f"empty Mellin strip: field {field_strip}, operator {op_strip}")
    if math.isinf(lo) and math.isinf(hi):
        mid = -0.5
    elif math.isinf(lo):
        mid = hi - 0.5
    elif math.isinf(hi):
        mid = lo + 0.5
    else:
        mid = 0.5 * (lo + hi)
    if out is None or ymax is None:
        return mid
    q, p = field_strip
    c_lo = max(lo, op_strip[0] + _POLE_MARGIN, q + 0.02, mid - 3.0)
    c_hi = min(hi, op_strip[1] - _POLE_MARGIN, p - 0.02, mid + 3.0)
    if not c_lo < c_hi:
        return mid
    a = np.linspace(c_lo, c_hi, 241)
    seam = np.maximum(-ymax * (p - a), -ymax * (a - q))
    p_out = min(out[0], 0.0)
    q_out = max(out[1], -1.5)
    amp = np.maximum(_Y_CHECK * (p_out - a - shift), _Y_CHECK * (a + shift - q_out))
    err = seam + amp + 1e-6 * np.abs(a - mid)
    return float(a[np.argmin(err)])


def mellin_apply(values, grid, op, a):
    """Apply a Mellin multiplier with weight ``a`` to samples on ``grid``."""
    X, n = grid.X, grid.n
    phi = values * X ** (-a)
    c = np.fft.fft(phi, axis=-1)
    kappa = 2.0 * np.pi * np.fft.fftfreq(n, grid.h)
    m = np.asarray(op.mult(a + 1j * kappa), dtype=complex)
    m[n // 2] = 0.0
    out = np.fft.ifft(c * m, axis=-1)
    if op.reverse:
        return X ** (-(a + 1.0)) * out[..., ::-1]
    return X ** (a + op.shift) * out


def trusted_window(grid):
    """Half-width in ``y = ln|x|`` of the region where operator output is kept."""
    return max(0.6 * grid.ymax, math.log(1e6) + 2.0)


def repair_tails(values, grid, tip, far):
    """Replace samples outside the trusted window by power-law extensions.

    Outputs of Mellin multipliers carry the weight ``X**(a + shift)``, which
    magnifies the periodic truncation error near both ends of the window.
    Beyond ``|y| = trusted_window(grid)`` the samples are replaced by
    ``f(X_t) (X/X_t)**e`` with ``e`` the declared exponent, or by zero when
    the declared decay is faster than algebraic.
    """
    y = grid.y
    yt = trusted_window(grid)
    lo = np.flatnonzero(y >= -yt)
    hi = np.flatnonzero(y <= yt)
    if lo.size == 0 or hi.size == 0:
        return values
    i0, i1 = lo[0], hi[-1]
    out = np.array(values, copy=True)
    if i0 > 0:
        ext = np.exp((y[:i0] - y[i0]) * tip) if math.isfinite(tip) else 0.0
        out[..., :i0] = out[..., i0:i0 + 1] * ext
    if i1 < grid.n - 1:
        ext = np.exp((y[i1 + 1:] - y[i1]) * far) if math.isfinite(far) else 0.0
        out[..., i1 + 1:] = out[..., i1:i1 + 1] * ext
    return out


def apply_op(f, op, side, tip, far, weight=None, real=None, repair=True):
    """Apply ``op`` to field ``f`` and wrap the result.

    Parameters
    ----------
    f : HalfLineField
    op : MellinOp
    side : str
        Side of the output field.
    tip, far : float
        Declared exponents of the output.
    weight : float, optional
        Force the Mellin weight instead of choosing it from the strips.
    real : bool, optional
        Discard the imaginary part; defaults to ``True`` for real input.
    """
    g = f.grid.on(side)
    if f.is_zero():
        return HalfLineField(g, np.zeros(f.values.shape, dtype=f.values.dtype), tip, far)
    a = choose_weight(f.strip, op.strip) if weight is None else weight
    out = mellin_apply(f.values, f.grid, op, a)
    if real is None:
        real = not np.iscomplexobj(f.values)
    if real:
        out = out.real
    if repair and not op.reverse:
        out = repair_tails(out, g, tip, far)
    return HalfLineField(g, out, tip, far, {"weight": a})


# elementary operators, in the variable X = |x|

K_SAME = MellinOp(lambda s: -_cot(s), (-1.0, 0.0))       # (1/pi) PV int f(T)/(T - X)
K_CROSS = MellinOp(lambda s: -_csc(s), (-1.0, 0.0))      # (1/pi) int f(T)/(T + X)
K_SAME_INV_SINGULAR = MellinOp(lambda s: -_tan(s), (-1.5, -0.5))
K_SAME_INV_BOUNDED = MellinOp(lambda s: -_tan(s), (-0.5, 0.5))
INT_FROM_TIP = MellinOp(lambda s: 1.0 / (s + 1.0), (-1.0, INF), 1.0)    # int_0^X
INT_TO_FAR = MellinOp(lambda s: -1.0 / (s + 1.0), (-INF, -1.0), 1.0)    # int_X^inf
D_X = MellinOp(lambda s: s, (-INF, INF), -1.0)                          # d/dX
# Cauchy operator of a derivative, d/dx = -d/dX on the crack side and +d/dX
# ahead of the tip. Both kernels reduce to s cot(pi s) (same side) and
# -s csc(pi s) (other side) at shift -1, analytic on -1 < Re s < 1.
SS_DERIV = MellinOp(lambda s: np.cos(np.pi * s) / (np.pi * np.sinc(s)), (-1.0, 1.0), -1.0)
SC_DERIV = MellinOp(lambda s: -1.0 / (np.pi * np.sinc(s)), (-1.0, 1.0), -1.0)


def _out_exponents_cauchy(f):
    tip = f.tip_exponent if f.tip_exponent < 0 else 0.0
    far = max(f.far_exponent, -1.0)
    return tip, far


def _require(f, side):
    if not isinstance(f, HalfLineField) or f.side != side:
        raise SupportError(f"expected a field on the {side} half-line")


# Cauchy operators

def cauchy_transform(f):
    """Whole-line Cauchy operator ``(1/pi) PV int f(t)/(x - t) dt``.

    Parameters
    ----------
    f : HalfLineField or LineField

    Returns
    -------
    LineField
    """
    f = as_line(f)
    tip_n, far_n = _out_exponents_cauchy(f.neg)
    tip_p, far_p = _out_exponents_cauchy(f.pos)
    tip, far = min(tip_n, tip_p), max(far_n, far_p)
    # with x = -X, t = -T on the crack side and x = X, t = T ahead of it:
    #   neg <- neg:  (1/pi) PV int phi(T)/(T - X) dT   =  K_SAME
    #   neg <- pos: -(1/pi) int f(T)/(T + X) dT        = -K_CROSS
    #   pos <- neg:  (1/pi) int phi(T)/(T + X) dT      =  K_CROSS
    #   pos <- pos: -(1/pi) PV int f(T)/(T - X) dT     = -K_SAME
    neg = apply_op(f.neg, K_SAME, NEG, tip, far) - apply_op(f.pos, K_CROSS, NEG, tip, far)
    pos = apply_op(f.neg, K_CROSS, POS, tip, far) - apply_op(f.pos, K_SAME, POS, tip, far)
    return LineField(neg.with_values(neg.values, tip, far),
                     pos.with_values(pos.values, tip, far))


def cauchy_derivative(f, tip_exponent=0.5):
    """``S f'`` for a line field, with ``f'`` the piecewise derivative.

    Derivative and Cauchy operator are fused into one multiplier per block;
    the fused blocks are analytic on ``-1 < Re s < 1``. A field that is
    continuous but nonzero at the tip is first reduced by ``c/(1 + x**2)``,
    ``c`` its tip value, whose contribution ``c (1 - x**2)/(1 + x**2)**2`` is
    added back in closed form; the remainder is assumed to vanish like
    ``|x|**tip_exponent``. A jump of ``f`` across ``x = 0`` is ignored.
    """
    f = as_line(f)
    c = 0.5 * (f.neg.values[..., 0] + f.pos.values[..., 0])
    has_tip_value = max(f.neg.tip_exponent, f.pos.tip_exponent) <= 0.0 and np.any(c)
    if has_tip_value:
        bump = 1.0 / (1.0 + f.grid.X ** 2)
        c_ = np.asarray(c)[..., None]
        f = LineField(
            HalfLineField(f.neg.grid, f.neg.values - c_ * bump, tip_exponent,
                          max(f.neg.far_exponent, -2.0)),
            HalfLineField(f.pos.grid, f.pos.values - c_ * bump, tip_exponent,
                          max(f.pos.far_exponent, -2.0)))
    same, cross = SS_DERIV, SC_DERIV
    parts = [p for p in (f.neg, f.pos) if not p.is_zero()]
    tip = min([p.tip_exponent - 1.0 for p in parts], default=0.0)
    tip = tip if tip < 0 else 0.0
    far = max([max(p.far_exponent - 1.0, -1.0) for p in parts], default=-1.0)
    neg = apply_op(f.neg, same, NEG, tip, far) + apply_op(f.pos, cross, NEG, tip, far)
    pos = apply_op(f.neg, cross, POS, tip, far) + apply_op(f.pos, same, POS, tip, far)
    if has_tip_value:
        X2 = f.grid.X ** 2
        corr = np.asarray(c)[..., None] * (1.0 - X2) / (1.0 + X2) ** 2
        neg = neg.with_values(neg.values + corr)
        pos = pos.with_values(pos.values + corr)
    return LineField(neg.with_values(neg.values, tip, far),
                     pos.with_values(pos.values, tip, far))


def projected_cauchy(f, kind, far=None):
    """Crack-side projections of the Cauchy operator.

    ``kind="s"`` gives ``P- S P- f`` on x < 0 and ``kind="c"`` gives
    ``P+ S P- f`` on x > 0.

    A nonzero tip value ``c`` produces a logarithm at the tip. It is carried
    by ``c exp(-X)``, whose transforms are ``-exp(-X) Ei(X)/pi`` on the
    same side and ``exp(X) E1(X)/pi`` on the other.

    ``far`` overrides the declared far exponent of the output, e.g. ``-2``
    for a field with zero integral.
    """
    _require(f, NEG)
    if kind not in ("s", "c"):
        raise ValueError(f"kind must be 's' or 'c', got {kind!r}")
    c = np.asarray(f.values[..., 0])
    split = f.tip_exponent == 0.0 and np.any(c)
    X = f.grid.X
    if split:
        c = c[..., None]
        f = f.with_values(f.values - c * np.exp(-X), 1.0, max(f.far_exponent, -1.0))
    tip, far_out = _out_exponents_cauchy(f)
    if kind == "s":
        out = apply_op(f, K_SAME, NEG, tip, far_out)
        if split:
            out = out.with_values(out.values - c * specfun.ei_scaled(X) / np.pi, -1e-9)
    else:
        out = apply_op(f, K_CROSS, POS, tip, far_out)
        if split:
            out = out.with_values(out.values + c * specfun.e1_scaled(X) / np.pi, -1e-9)
    if far is not None:
        out = out.with_values(repair_tails(out.values, out.grid, out.tip_exponent, far),
                              None, far)
    return out


@functools.lru_cache(maxsize=16)
def _tip_pair(n, ymax):
    # psi0(x) = X exp(-X) on x = -X is bounded at the tip and
    # S^(s) psi0 = (1 - X exp(-X) Ei(X))/pi, which tends to 1/pi there
    X = Grid(NEG, n, ymax).X
    psi0 = X * np.exp(-X)
    g0 = (1.0 - X * specfun.ei_scaled(X)) / np.pi
    dpsi0 = -(1.0 - X) * np.exp(-X)          # d psi0 / dx
    return g0, psi0, dpsi0


def _split_tip_value(g):
    """Write ``g = c g0 + rest`` with ``rest`` vanishing at the tip."""
    y = g.grid.y
    i0 = int(np.flatnonzero(y >= -trusted_window(g.grid))[0])
    g0, psi0, dpsi0 = _tip_pair(g.grid.n, g.grid.ymax)
    c = np.pi * np.asarray(g.values[..., i0])
    c_ = c[..., None] if np.ndim(c) else c
    rest = g.with_values(g.values - c_ * g0, max(g.tip_exponent, 0.5),
                         max(g.far_exponent, -1.0))
    return c_, rest, psi0, dpsi0


def _residual(psi, g):
    back = projected_cauchy(psi, "s")
    mask = g.grid.interior()
    scale = np.max(np.abs(g.values[..., mask])) or 1.0
    return float(np.max(np.abs(back.values - g.values)[..., mask]) / scale)


def invert_Ss(g, solution_class="tip_singular"):
    """Solve ``S^(s) psi = g`` on x < 0.

    Parameters
    ----------
    g : HalfLineField
        Right-hand side on the crack faces.
    solution_class : {"tip_singular", "tip_bounded"}
        ``tip_singular``: ``psi ~ |x|**-1/2`` at the tip and ``|x|**-3/2``
        far away; the solution has zero integral. ``tip_bounded``:
        ``psi ~ |x|**1/2`` at the tip and ``|x|**-1/2`` far away.

    Returns
    -------
    HalfLineField
        ``psi`` with ``meta["residual"]`` the relative forward residual
        ``|S^(s) psi - g| / |g|`` on interior nodes.

    Notes
    -----
    In the bounded class a nonzero tip value of ``g`` is carried by the
    exact pair ``psi0 = X exp(-X)``, ``S^(s) psi0 = (1 - X exp(-X) Ei(X))/pi``;
    only the remainder, which vanishes at the tip, goes through the
    multiplier.
    """
    _require(g, NEG)
    if solution_class == "tip_singular":
        tip, far = -0.5, -1.5
    elif solution_class == "tip_bounded":
        tip, far = 0.5, -0.5
    else:
        raise ValueError(f"unknown solution class {solution_class!r}")
    if g.is_zero():
        return zeros(g.grid, NEG, g.values.shape[:-1], tip, far)
    if solution_class == "tip_singular":
        psi = apply_op(g, K_SAME_INV_SINGULAR, NEG, tip, far)
    else:
        c, rest, psi0, _ = _split_tip_value(g)
        psi = apply_op(rest, K_SAME_INV_BOUNDED, NEG, tip, far)
        psi = psi.with_values(psi.values + c * psi0)
    psi.meta["residual"] = _residual(psi, g)
    return psi


def invert_Ss_derivative(g):
    """``d psi / dx`` for the tip-bounded solution of ``S^(s) psi = g``.

    Differentiation is fused into the multiplier, so no sampled data are
    differenced.
    """
    _require(g, NEG)
    if g.is_zero():
        return zeros(g.grid, NEG, g.values.shape[:-1], -0.5, -1.5)
    c, rest, _, dpsi0 = _split_tip_value(g)
    op = K_SAME_INV_BOUNDED.then(-1.0 * D_X)
    out = apply_op(rest, op, NEG, -0.5, -1.5)
    return out.with_values(out.values + c * dpsi0)


def derivative(f, tip_exponent=0.5):
    """``d f / dx`` of a half-line field.

    A field declared bounded at the tip (exponent 0) with a nonzero tip
    value is first reduced by ``c/(1 + x**2)``, whose derivative is added
    back exactly; the remainder is assumed to vanish like
    ``|x|**tip_exponent``.
    """
    sgn = -1.0 if f.side == NEG else 1.0
    c = np.asarray(f.values[..., 0])
    if f.tip_exponent == 0.0 and np.any(c):
        X = f.grid.X
        c = c[..., None]
        rest = f.with_values(f.values - c / (1.0 + X * X), tip_exponent,
                             max(f.far_exponent, -2.0))
        out = apply_op(rest, sgn * D_X, f.side, tip_exponent - 1.0, rest.far_exponent - 1.0)
        corr = -sgn * c * 2.0 * X / (1.0 + X * X) ** 2
        return out.with_values(out.values + corr, 0.0, f.far_exponent - 1.0)
    return apply_op(f, sgn * D_X, f.side, f.tip_exponent - 1.0, f.far_exponent - 1.0)


def antiderivative(f, anchor="far"):
    """Antiderivative in x of a half-line field.

    ``anchor="far"`` integrates from the far end (``int_{-inf}^x`` on the
    negative side, ``-int_x^inf`` on the positive side). ``anchor="tip"``
    integrates from the crack tip, ``int_0^x``.
    """
    neg = f.side == NEG
    if anchor == "far":
        op = INT_TO_FAR if neg else -1.0 * INT_TO_FAR
        tip = max(f.tip_exponent + 1.0, 0.0)
        far = f.far_exponent + 1.0
    elif anchor == "tip":
        op = -1.0 * INT_FROM_TIP if neg else INT_FROM_TIP
        tip = f.tip_exponent + 1.0
        far = max(f.far_exponent + 1.0, 0.0)
    else:
        raise ValueError(f"anchor must be 'far' or 'tip', got {anchor!r}")
    return apply_op(f, op, f.side, tip, far)


# Fourier domain

@dataclasses.dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier-domain samples at ``xi = -X`` (``neg``) and ``xi = +X`` (``pos``).

    ``small_xi_exponent`` / ``large_xi_exponent`` describe ``|F| ~ |xi|**e``
    near zero and at infinity. ``sigma0`` is the limit at ``xi -> 0``.
    """

    grid: Grid
    neg: np.ndarray
    pos: np.ndarray
    analyticity: str = "none"
    sigma0: complex | None = None
    small_xi_exponent: float = 0.0
    large_xi_exponent: float = -1.0

    @property
    def xi(self):
        X = self.grid.X
        return np.concatenate([-X[::-1], X])

    @property
    def values(self):
        return np.concatenate([self.neg[..., ::-1], self.pos], axis=-1)

    def __call__(self, xi):
        """Interpolate (log-linearly in |xi|) at arbitrary nonzero xi."""
        xi = np.asarray(xi, dtype=float)
        y = np.log(np.abs(xi))
        yy = self.grid.y
        out = np.where(xi > 0,
                       np.interp(y, yy, self.pos.real) + 1j * np.interp(y, yy, self.pos.imag),
                       np.interp(y, yy, self.neg.real) + 1j * np.interp(y, yy, self.neg.imag))
        return out

    def map(self, fn, **changes):
        """Pointwise ``fn(xi, F)``; returns a new field."""
        X = self.grid.X
        fields = dict(neg=fn(-X, self.neg), pos=fn(X, self.pos))
        fields.update(changes)
        return dataclasses.replace(self, **fields)

    def is_zero(self):
        return not (np.any(self.neg) or np.any(self.pos))


def _gamma_kernel(sigma):
    # int_0^inf T**s exp(i sigma w T) dT = Gamma(s+1) w**-(s+1) exp(i sigma pi (s+1)/2)
    return MellinOp(lambda s: np.exp(loggamma(s + 1.0) + 0.5j * sigma * np.pi * (s + 1.0)),
                    (-1.0, INF), 0.0, True)


def _apply_reverse(values, grid, strip, sigma, a=None):
    op = _gamma_kernel(sigma)
    if not np.any(values):
        return np.zeros(values.shape, dtype=complex)
    if a is None:
        a = choose_weight(strip, op.strip)
    return mellin_apply(values, grid, op, a)


def _spectral_exponents(tip, far):
    small = 0.0 if far < -1.0 else -(far + 1.0)
    large = -(tip + 1.0)
    return small, large


def fourier_forward(f):
    """Fourier transform ``int f(x) exp(i xi x) dx`` of a half-line or line field.

    Returns
    -------
    SpectralField
        Minus-function for fields on x < 0, plus-function for x > 0.
        ``sigma0`` is the value at the smallest sampled ``|xi|``.
    """
    if isinstance(f, LineField):
        a, b = fourier_forward(f.neg), fourier_forward(f.pos)
        return SpectralField(a.grid, a.neg + b.neg, a.pos + b.pos, "none",
                             a.sigma0 + b.sigma0,
                             min(a.small_xi_exponent, b.small_xi_exponent),
                             max(a.large_xi_exponent, b.large_xi_exponent))
    g = f.grid
    if f.far_exponent >= -0.0:
        raise StripError("field does not decay; its transform is not a function")
    # x = -X: exp(i xi x) = exp(-i xi X); x = +X: exp(+i xi X)
    s_pos = -1.0 if f.side == NEG else 1.0
    small, large = _spectral_exponents(f.tip_exponent, f.far_exponent)
    pos = repair_tails(_apply_reverse(f.values, g, f.strip, s_pos), g, small, large)
    neg = repair_tails(_apply_reverse(f.values, g, f.strip, -s_pos), g, small, large)
    analyticity = "minus" if f.side == NEG else "plus"
    return SpectralField(g.on(WHOLE), neg, pos, analyticity, complex(pos[..., 0]) if
                         pos.ndim == 1 else pos[..., 0], small, large)


def fourier_invert(F, side):
    """Inverse transform ``(1/2pi) int F exp(-i xi x) dxi`` restricted to one side.

    Parameters
    ----------
    F : SpectralField
    side : {"negative", "positive"}

    Returns
    -------
    HalfLineField
        Complex samples; take ``.real()`` for real fields.
    """
    g = F.grid.on(side)
    strip = (F.large_xi_exponent, F.small_xi_exponent)
    # x = -X: exp(-i xi x) = exp(+i xi X); x = +X: exp(-i xi X)
    s_pos = 1.0 if side == NEG else -1.0
    out = (_apply_reverse(F.pos, g, strip, s_pos)
           + _apply_reverse(F.neg, g, strip, -s_pos)) / (2.0 * np.pi)
    tip = -(F.large_xi_exponent + 1.0)
    far = -(F.small_xi_exponent + 1.0)
    return HalfLineField(g, repair_tails(out, g, min(tip, 0.0), far), tip, far)


def abs_xi_multiply(F):
    """Pointwise ``|xi| F``."""
    return F.map(lambda xi, v: np.abs(xi) * v,
                 sigma0=0.0 if F.sigma0 is not None else None,
                 small_xi_exponent=F.small_xi_exponent + 1.0,
                 large_xi_exponent=F.large_xi_exponent + 1.0)


def reg_kernel(x):
    """Inverse transform of ``1/((xi - i)**2 |xi|)`` in the finite-part sense.

    Equals ``(gamma_E + I(x))/pi`` with
    ``I(x) = ln|x| + 1 - (1 - x) exp(x) Ei(-x)``; the transform of
    ``-(ln|x| + gamma_E)/pi`` is taken as ``1/|xi|``.
    """
    x = np.asarray(x, dtype=float)
    expei = np.empty_like(x)
    neg = x < 0
    expei[neg] = specfun.ei_scaled(-x[neg])          # exp(x) Ei(-x), x < 0
    expei[~neg] = -specfun.e1_scaled(x[~neg])        # exp(x) Ei(-x), x > 0
    return (specfun.EULER_GAMMA + np.log(np.abs(x)) + 1.0 - (1.0 - x) * expei) / np.pi


def regularized_inv_abs_xi(F, side):
    """Inverse transform of ``F/|xi|`` with the ``sigma0/(xi - i)**2`` subtraction.

    The subtracted term is restored through :func:`reg_kernel`, so the result
    is defined up to that finite-part convention when ``sigma0 != 0``.
    """
    if F.sigma0 is None:
        raise RegularizationRequired("sigma0 is not recorded for this field")
    s0 = F.sigma0
    remainder = F.map(lambda xi, v: (v - s0 / (xi - 1j) ** 2) / np.abs(xi),
                      small_xi_exponent=-0.5,
                      large_xi_exponent=max(F.large_xi_exponent, -2.0) - 1.0)
    low = remainder.pos[..., :4]
    if np.any(np.abs(low) * np.sqrt(F.grid.X[:4]) > 1e3 * (1.0 + abs(s0))):
        raise ArithmeticError("F - sigma0/(xi - i)^2 is not O(xi^1/2) at the origin")
    out = fourier_invert(remainder, side)
    if s0:
        out = out.with_values(out.values + s0 * reg_kernel(out.x))
    return out
