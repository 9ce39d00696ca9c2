"""Closed-form reference solutions for three Mode III loadings.

* ``antisym_411``: faces loaded by ``+-(F/2)(1 + 2x/3) e^x sqrt(-x)``;
* ``sym_412``: both faces loaded by ``F x e^x``;
* ``mixed_appA``: ``p_+ = x e^x``, ``p_- = -e^x`` with the formal constants
  ``eta = 2``, ``k = 1``.

The printed expressions are evaluated with :mod:`specfun`. Where they
suffer cancellation for large ``|x|`` they switch to their asymptotic
series beyond ``|x| = 40``.

Two printed expressions are not usable as written and are returned only
under the ``paper_printed`` key:

* the anti-symmetric inverse-transform term, read literally with
  ``sqrt(-x)`` in place of ``sqrt(x)`` on ``x < 0``. The reference value
  instead continues ``x**(3/2) erf(sqrt(x))`` analytically to ``x < 0`` on
  principal branches, where it equals ``X**(3/2) e^X erfi(sqrt(X))``;
* the symmetric-case mean displacement on ``x < 0``, which carries a factor
  ``i`` and ``erf`` of an imaginary argument. On principal branches it is
  real and equal to ``(eta/2)[u]``.
"""
import dataclasses
import math

import numpy as np

from . import fieldops as fo
from . import specfun as sf
from .materials import formal_constants

_SQRT_PI = math.sqrt(math.pi)
ASYMPTOTIC_SWITCH = 40.0
CASES = ("antisym_411", "sym_412", "mixed_appA")


class OracleDomainError(ValueError):
    """A field was requested on the wrong side of the crack tip."""


@dataclasses.dataclass(frozen=True)
class OracleCase:
    """One reference problem and its parameters."""

    id: str
    parameters: dict

    def __post_init__(self):
        if self.id not in CASES:
            raise ValueError(f"unknown oracle case {self.id!r}; choose from {CASES}")
        if self.id == "mixed_appA":
            p = dict(self.parameters)
            if p.get("eta", 2.0) != 2.0 or p.get("k", 1.0) != 1.0:
                raise ValueError("mixed_appA is defined for eta = 2, k = 1 only")


def _asym(coef, z, nmax=200):
    """Sum ``sum_{n>=0} coef(n) z**n`` for small ``z``, stopping at the smallest term."""
    z = np.asarray(z, dtype=float)
    total = np.zeros_like(z)
    last = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    zn = np.ones_like(z)
    for n in range(nmax):
        term = coef(n) * zn
        mag = np.abs(term)
        active &= mag < last
        total = np.where(active, total + term, total)
        last = np.where(active, mag, last)
        active &= mag > 1e-17 * np.abs(total)
        if not active.any():
            break
        zn = zn * z
    return total


def _dfact2(n):
    """(2n - 1)!! with (-1)!! = 1."""
    return math.prod(range(1, 2 * n, 2))


def _a(n):
    return _dfact2(n) / 2.0 ** n


def _split(X):
    X = np.asarray(X, dtype=float)
    big = X > ASYMPTOTIC_SWITCH
    return X, big


def _neg(x):
    x = np.asarray(x, dtype=float)
    if np.any(x >= 0):
        raise OracleDomainError("this field is defined for x < 0 only")
    return -x


def _pos(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise OracleDomainError("this field is defined for x > 0 only")
    return x


def _piecewise(X, small_fn, big_fn):
    X, big = _split(X)
    out = np.empty_like(X)
    if np.any(~big):
        out[~big] = small_fn(X[~big])
    if np.any(big):
        out[big] = big_fn(X[big])
    return out


# anti-symmetric loading

def _one_minus_x_ei_scaled(X):
    # 1 - X exp(-X) Ei(X) ~ -sum_{n>=1} n! / X**n
    return _piecewise(
        X, lambda X: 1.0 - X * sf.ei_scaled(X),
        lambda X: -(1.0 / X) * _asym(lambda n: math.factorial(n + 1), 1.0 / X))


def _antisym_sigma_numerator(x):
    # 1 + 2x + x(2x + 3) Ei(-x) e^x ~ -sum_{m>=1} (-1)^m m! (1 - 2m) x^-m
    return _piecewise(
        x, lambda x: 1.0 + 2.0 * x - x * (2.0 * x + 3.0) * sf.e1_scaled(x),
        lambda x: -(1.0 / x) * _asym(
            lambda n: (-1) ** (n + 1) * math.factorial(n + 1) * (1 - 2 * (n + 1)), 1.0 / x))


def antisym_inverse_term(x, F=1.0):
    """Inverse transform of ``[pbar]/|xi|`` on x < 0 for the anti-symmetric loading.

    ``-F (4 X**1.5 D(sqrt X) - 2X - 1) / (3 sqrt(pi))`` with ``X = -x`` and
    ``D`` Dawson's function.
    """
    X = _neg(x)
    body = _piecewise(
        X, lambda X: 4.0 * X ** 1.5 * sf.dawson(np.sqrt(X)) - 2.0 * X - 1.0,
        lambda X: _asym(lambda n: _dfact2(n + 2) * 2.0 ** (-(n + 1)), 1.0 / X) / X)
    return -F * body / (3.0 * _SQRT_PI)


def _antisym_inverse_term_printed(x, F=1.0):
    # literal reading with sqrt(-x): -F(2 sqrt(pi) e^x (-x)^1.5 erf(sqrt(-x)) + 2x - 1)/(3 sqrt(pi))
    X = _neg(x)
    return -F * (2 * _SQRT_PI * np.exp(-X) * X ** 1.5 * sf.erf(np.sqrt(X)) - 2 * X - 1) / (
        3 * _SQRT_PI)


def _antisym_mean_pos(x, F, mu_sum):
    # 2 sqrt(pi) x^1.5 erfcx(sqrt x) - 2x + 1 ~ sum_{n>=2} (-1)^n (2n-1)!! (2x)^(1-n)
    body = _piecewise(
        x, lambda x: 2 * _SQRT_PI * x ** 1.5 * sf.erfcx(np.sqrt(x)) - 2 * x + 1,
        lambda x: (1.0 / (2 * x)) * _asym(
            lambda n: (-1) ** n * _dfact2(n + 2), 1.0 / (2 * x)))
    return -F * body / (3 * _SQRT_PI * mu_sum)


def antisym_oracle(F, eta, k, x, mu_sum=None):
    """Fields of the anti-symmetric example at the points ``x``.

    Parameters
    ----------
    F, eta, k : float
    x : array_like
        Sample points. Crack-face fields are returned where ``x < 0`` and
        interface fields where ``x > 0``; the others are NaN.
    mu_sum : float, optional
        ``mu_+ + mu_-``; defaults to ``4 / (k (1 - eta**2))``.

    Returns
    -------
    dict
        ``p_plus, p_minus, sym, skew, jump_u, mean_u_neg, inverse_term``
        (x < 0), ``sigma, mean_u_pos`` (x > 0) and ``paper_printed``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if mu_sum is None:
        mu_sum = 4.0 / (k * (1.0 - eta ** 2))
    out = {key: np.full(x.shape, np.nan) for key in
           ("p_plus", "p_minus", "sym", "skew", "jump_u", "mean_u_neg", "inverse_term",
            "sigma", "mean_u_pos")}
    printed = {"inverse_term": np.full(x.shape, np.nan),
               "mean_u_neg": np.full(x.shape, np.nan)}
    n, p = x < 0, x > 0
    if n.any():
        X = -x[n]
        skew = F * np.exp(-X) * (1 - 2 * X / 3) * np.sqrt(X)
        out["skew"][n] = skew
        out["sym"][n] = 0.0
        out["p_plus"][n] = 0.5 * skew
        out["p_minus"][n] = -0.5 * skew
        jump = F * eta * k * np.sqrt(X) * _one_minus_x_ei_scaled(X) / (3 * math.pi)
        out["jump_u"][n] = jump
        term = antisym_inverse_term(x[n], F)
        out["inverse_term"][n] = term
        out["mean_u_neg"][n] = 0.5 * eta * jump - term / mu_sum
        lit = _antisym_inverse_term_printed(x[n], F)
        printed["inverse_term"][n] = lit
        printed["mean_u_neg"][n] = 0.5 * eta * jump - lit / mu_sum
    if p.any():
        xp = x[p]
        out["sigma"][p] = F * eta * _antisym_sigma_numerator(xp) / (6 * math.pi * np.sqrt(xp))
        out["mean_u_pos"][p] = _antisym_mean_pos(xp, F, mu_sum)
    out["paper_printed"] = printed
    return out


# symmetric loading

def _sym_jump_bracket(X):
    # 2(x - 1) D(sqrt(-x)) + sqrt(-x) with x = -X
    return _piecewise(
        X, lambda X: -2.0 * (X + 1.0) * sf.dawson(np.sqrt(X)) + np.sqrt(X),
        lambda X: -X ** -0.5 * _asym(lambda m: _a(m + 1) + _a(m), 1.0 / X))


def _sym_sigma(x):
    # x erfcx(sqrt x) + (1 - 2x)/(2 sqrt(pi x)) ~ (1/sqrt pi) sum_{n>=2} (-1)^n a_n x^(1/2-n)
    return _piecewise(
        x, lambda x: x * sf.erfcx(np.sqrt(x)) + (1 - 2 * x) / (2 * np.sqrt(math.pi * x)),
        lambda x: x ** -1.5 / _SQRT_PI * _asym(lambda m: (-1) ** (m + 2) * _a(m + 2), 1.0 / x))


def sym_oracle(F, constants, x):
    """Fields of the symmetric example at the points ``x``.

    ``mean_u_pos`` is identically zero. The reference ``mean_u_neg`` is
    ``(eta/2)[u]``, which is what the mean-displacement relation gives for
    ``[p] = 0``; the printed complex expression is under ``paper_printed``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    eta, k = constants.eta, constants.k
    out = {key: np.full(x.shape, np.nan) for key in
           ("p_plus", "p_minus", "sym", "skew", "jump_u", "mean_u_neg", "sigma", "mean_u_pos")}
    printed = {"mean_u_neg": np.full(x.shape, np.nan, dtype=complex)}
    n, p = x < 0, x > 0
    if n.any():
        X = -x[n]
        load = F * x[n] * np.exp(x[n])
        out["p_plus"][n] = out["p_minus"][n] = out["sym"][n] = load
        out["skew"][n] = 0.0
        jump = -F * k / _SQRT_PI * _sym_jump_bracket(X)
        out["jump_u"][n] = jump
        out["mean_u_neg"][n] = 0.5 * eta * jump
        printed["mean_u_neg"][n] = _sym_mean_neg_printed(x[n], F, constants)
    if p.any():
        out["sigma"][p] = F * _sym_sigma(x[p])
        out["mean_u_pos"][p] = 0.0
    out["paper_printed"] = printed
    return out


def _sym_mean_neg_printed(x, F, constants):
    # i F (mu_- - mu_+)/(2 sqrt(pi) mu_- mu_+) (sqrt(pi) e^x (x - 1) erf(sqrt x) + sqrt x),
    # on principal branches: sqrt x = i sqrt X and erf(i t) = i erfi(t)
    X = -x
    mm_over_prod = constants.eta * constants.k      # (mu_- - mu_+)/(mu_- mu_+)
    root = 1j * np.sqrt(X)
    # e^x erf(i sqrt X) = i e^-X erfi(sqrt X) = i (2/sqrt pi) D(sqrt X)
    exp_erf = 2j / _SQRT_PI * sf.dawson(np.sqrt(X))
    body = _SQRT_PI * (x - 1) * exp_erf + root
    return 1j * F * mm_over_prod / (2 * _SQRT_PI) * body


# mixed loading

def _mixed_jump(X):
    # ((2 + 3X) 2 sqrt(X) D(sqrt X) - 3X) / (2 sqrt(pi X))
    num = _piecewise(
        X, lambda X: (2 + 3 * X) * 2 * np.sqrt(X) * sf.dawson(np.sqrt(X)) - 3 * X,
        lambda X: _asym(lambda m: 3 * _a(m + 1) + 2 * _a(m), 1.0 / X))
    return num / (2 * np.sqrt(math.pi * X))


def _b(n):
    return (-1) ** n * _a(n)


def _mixed_sigma(x):
    return _piecewise(
        x, lambda x: 0.25 * ((1 - 6 * x) / np.sqrt(math.pi * x)
                             + 2 * (3 * x + 1) * sf.erfcx(np.sqrt(x))),
        lambda x: x ** -1.5 / (4 * _SQRT_PI) * _asym(
            lambda m: 6 * _b(m + 2) + 2 * _b(m + 1), 1.0 / x))


def sigma_bar(xi):
    """Transform of the mixed-case interfacial traction.

    ``((2 + r) i xi + 7 r - 4) / (4 (xi - i)**2)`` with ``r = sqrt(-i xi)``
    on the principal branch. It is continuous along the real axis and equals
    1 at ``xi = 0``, the net interfacial force.
    """
    xi = np.asarray(xi, dtype=float)
    r = np.sqrt(-1j * xi.astype(complex))
    return ((2 + r) * 1j * xi + 7 * r - 4) / (4 * (xi - 1j) ** 2)


def mixed_oracle(x, xi=None):
    """Fields of the mixed example (``eta = 2``, ``k = 1``).

    Returns
    -------
    dict
        ``p_plus, p_minus, sym, skew, jump_u`` (x < 0), ``sigma`` (x > 0)
        and ``sigma_bar`` at ``xi`` when given.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = {key: np.full(x.shape, np.nan) for key in
           ("p_plus", "p_minus", "sym", "skew", "jump_u", "sigma")}
    n, p = x < 0, x > 0
    if n.any():
        xn = x[n]
        out["p_plus"][n] = xn * np.exp(xn)
        out["p_minus"][n] = -np.exp(xn)
        out["sym"][n] = 0.5 * (xn - 1) * np.exp(xn)
        out["skew"][n] = (xn + 1) * np.exp(xn)
        out["jump_u"][n] = _mixed_jump(-xn)
    if p.any():
        out["sigma"][p] = _mixed_sigma(x[p])
    if xi is not None:
        out["sigma_bar"] = sigma_bar(xi)
    return out


# sampled cases

def case_constants(case, eta=0.5, k=1.0):
    """Formal constants for an oracle case."""
    if case == "mixed_appA":
        return formal_constants(2.0, 1.0)
    return formal_constants(eta, k)


def case_loading(case, grid, F=1.0):
    """Face tractions ``(p_plus, p_minus)`` of an oracle case on ``grid``."""
    if case not in CASES:
        raise ValueError(f"unknown oracle case {case!r}")
    g = grid.on(fo.NEG)
    x = g.nodes
    if case == "antisym_411":
        vals = antisym_oracle(F, 0.5, 1.0, x)
        tip = 0.5
    elif case == "sym_412":
        vals = sym_oracle(F, formal_constants(0.5, 1.0), x)
        tip = 1.0
    elif case == "mixed_appA":
        vals = mixed_oracle(x)
        tip = 0.0
    else:
        raise ValueError(f"unknown oracle case {case!r}")
    pp = fo.HalfLineField(g, vals["p_plus"], tip, -math.inf)
    pm = fo.HalfLineField(g, vals["p_minus"], tip, -math.inf)
    return pp, pm


def case_fields(case, grid, constants, F=1.0):
    """Reference ``[u]`` (x < 0) and ``<sigma>`` (x > 0) sampled on ``grid``.

    Mean displacements are included where a reference exists.
    """
    xn, xp = grid.on(fo.NEG).nodes, grid.on(fo.POS).nodes
    x = np.concatenate([xn, xp])
    if case == "antisym_411":
        vals = antisym_oracle(F, constants.eta, constants.k, x, constants.mu_sum)
    elif case == "sym_412":
        vals = sym_oracle(F, constants, x)
    elif case == "mixed_appA":
        vals = mixed_oracle(x)
    else:
        raise ValueError(f"unknown oracle case {case!r}")
    n = xn.size
    out = {"jump_u": vals["jump_u"][:n], "sigma": vals["sigma"][n:]}
    if "mean_u_neg" in vals:
        out["mean_u_neg"] = vals["mean_u_neg"][:n]
    if "mean_u_pos" in vals:
        out["mean_u_pos"] = vals["mean_u_pos"][n:]
    return out
