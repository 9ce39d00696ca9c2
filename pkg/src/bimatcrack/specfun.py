"""Real-argument special functions used by the closed-form reference solutions.

The exponential integral, the error function family and Dawson's integral are
evaluated from their power series, continued fractions and asymptotic
expansions. Every routine targets a relative error of about 1e-13 on the real
line and accepts scalars or arrays.

Scaled variants (``erfcx``, ``ei_scaled``, ``e1_scaled``) are provided because
the solution formulas combine these functions with exponentials that
overflow individually on wide grids.
"""
import enum
import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
_SQRT_PI = math.sqrt(math.pi)
_EPS = 1e-17
_CF_EPS = 3e-16
_MAXITER = 5000


class SpecialFunctionId(str, enum.Enum):
    EI = "Ei"
    ERF = "erf"
    ERFI = "erfi"
    ERFC = "erfc"
    DAWSON = "dawson"


class SpecialFunctionError(ArithmeticError):
    """Raised for domain errors and for results outside the float range."""


def _cf_lentz(b0, terms):
    """Evaluate b0 + a1/(b1 + a2/(b2 + ...)) by the modified Lentz method."""
    tiny = 1e-300
    f = b0 if b0 != 0.0 else tiny
    c, d = f, 0.0
    for a, b in terms:
        d = b + a * d
        d = tiny if d == 0.0 else d
        c = b + a / c
        c = tiny if c == 0.0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return f
    raise SpecialFunctionError("continued fraction did not converge")


def _series(first, ratio):
    """Sum a positive-ratio series term_{n+1} = term_n * ratio(n)."""
    term, total, n = first, first, 0
    while n < _MAXITER:
        term *= ratio(n)
        total += term
        n += 1
        if abs(term) <= _EPS * abs(total):
            return total
    raise SpecialFunctionError("series did not converge")


# erf / erfc / erfcx

def _erf_series(x):
    # erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^n x^(2n+1) / (2n+1)!!, all terms > 0
    x2 = x * x
    s = _series(x, lambda n: 2.0 * x2 / (2 * n + 3))
    return 2.0 / _SQRT_PI * math.exp(-x2) * s


def _erfcx_cf(x):
    # exp(x^2) erfc(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    def terms():
        n = 1
        while n < _MAXITER:
            yield 0.5 * n, x
            n += 1
    return 1.0 / _SQRT_PI / _cf_lentz(x, terms())


def _erf(x):
    if x < 0:
        return -_erf(-x)
    if x < 2.5:
        return _erf_series(x)
    if x > 6.5:
        return 1.0
    return 1.0 - math.exp(-x * x) * _erfcx_cf(x)


def _erfc(x):
    if x < 0:
        return 2.0 - _erfc(-x)
    if x < 1.0:
        return 1.0 - _erf_series(x)
    if x > 27.2:
        return 0.0
    return math.exp(-x * x) * _erfcx_cf(x)


def _erfcx(x):
    if x < 1.0:
        if x < -26.0:
            raise SpecialFunctionError(f"erfcx({x}) overflows")
        return math.exp(x * x) * _erfc(x)
    return _erfcx_cf(x)


# erfi / dawson

def _erfi_series(x):
    # erfi(x) = 2/sqrt(pi) sum x^(2n+1) / (n! (2n+1)), all terms > 0 for x > 0
    x2 = x * x
    s = _series(x, lambda n: x2 * (2 * n + 1) / ((n + 1) * (2 * n + 3)))
    return 2.0 / _SQRT_PI * s


def _dawson_asym(x):
    # F(x) ~ 1/(2x) sum (2n-1)!! / (2 x^2)^n, truncated at the smallest term
    t = 1.0 / (2.0 * x * x)
    term, total, n = 1.0, 1.0, 0
    while n < _MAXITER:
        nxt = term * (2 * n + 1) * t
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        n += 1
        if abs(term) <= _EPS * total:
            break
    return total / (2.0 * x)


_DAWSON_SWITCH = 6.5


def _dawson(x):
    if x < 0:
        return -_dawson(-x)
    if x < _DAWSON_SWITCH:
        return 0.5 * _SQRT_PI * math.exp(-x * x) * _erfi_series(x)
    return _dawson_asym(x)


def _erfi(x):
    if x < 0:
        return -_erfi(-x)
    if x < _DAWSON_SWITCH:
        return _erfi_series(x)
    if x * x > 709.0:
        raise SpecialFunctionError(f"erfi({x}) overflows the float range")
    return 2.0 / _SQRT_PI * math.exp(x * x) * _dawson_asym(x)


# exponential integrals

def _ei_series(x):
    # Ei(x) = gamma + ln|x| + sum x^n / (n n!)
    s = _series(x, lambda n: x * (n + 1) / ((n + 2) ** 2))
    return EULER_GAMMA + math.log(abs(x)) + s


def _e1_scaled_cf(y):
    # exp(y) E1(y) for y > 1, continued fraction of the incomplete gamma function
    b = y + 1.0
    c = 1.0 / 1e-300
    d = 1.0 / b
    h = d
    for i in range(1, _MAXITER):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise SpecialFunctionError("E1 continued fraction did not converge")


def _ei_scaled_asym(x):
    # exp(-x) Ei(x) ~ (1/x) sum n! / x^n
    term, total, n = 1.0, 1.0, 0
    while n < _MAXITER:
        nxt = term * (n + 1) / x
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        n += 1
        if term <= _EPS * total:
            break
    return total / x


def _ei(x):
    if x == 0.0:
        raise SpecialFunctionError("Ei has a logarithmic singularity at 0")
    if x < 0:
        y = -x
        if y <= 1.0:
            return _ei_series(x)
        return -math.exp(-y) * _e1_scaled_cf(y)
    if x < 40.0:
        return _ei_series(x)
    if x > 709.0:
        raise SpecialFunctionError(f"Ei({x}) overflows the float range")
    return math.exp(x) * _ei_scaled_asym(x)


def _ei_scaled(x):
    """exp(-x) Ei(x) for x > 0."""
    if x <= 0:
        raise SpecialFunctionError("ei_scaled requires x > 0")
    if x < 40.0:
        return math.exp(-x) * _ei_series(x)
    return _ei_scaled_asym(x)


def _e1_scaled(y):
    """exp(y) E1(y) = -exp(y) Ei(-y) for y > 0."""
    if y <= 0:
        raise SpecialFunctionError("e1_scaled requires y > 0")
    if y <= 1.0:
        return -math.exp(y) * _ei_series(-y)
    return _e1_scaled_cf(y)


def _vectorize(fn):
    ufunc = np.frompyfunc(lambda v: fn(float(v)), 1, 1)

    def wrapped(x):
        arr = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise SpecialFunctionError("non-finite argument")
        out = ufunc(arr)
        if arr.ndim == 0:
            return float(out)
        return out.astype(float)

    wrapped.__name__ = fn.__name__.lstrip("_")
    wrapped.__doc__ = fn.__doc__
    return wrapped


ei = _vectorize(_ei)
erf = _vectorize(_erf)
erfc = _vectorize(_erfc)
erfcx = _vectorize(_erfcx)
erfi = _vectorize(_erfi)
dawson = _vectorize(_dawson)
ei_scaled = _vectorize(_ei_scaled)
e1_scaled = _vectorize(_e1_scaled)

_DISPATCH = {
    SpecialFunctionId.EI: ei,
    SpecialFunctionId.ERF: erf,
    SpecialFunctionId.ERFI: erfi,
    SpecialFunctionId.ERFC: erfc,
    SpecialFunctionId.DAWSON: dawson,
}


def eval_special(fn, x):
    """Evaluate one of the supported special functions.

    Parameters
    ----------
    fn : SpecialFunctionId or str
        One of ``"Ei"``, ``"erf"``, ``"erfi"``, ``"erfc"``, ``"dawson"``.
    x : float or array_like
        Real argument(s).

    Returns
    -------
    float or ndarray

    Raises
    ------
    SpecialFunctionError
        ``Ei(0)``, non-finite input, or a result that overflows.
    """
    return _DISPATCH[SpecialFunctionId(fn)](x)
