"""Bimaterial parameters and the derived constants of the interface crack.

Convention: the ``plus`` material occupies the upper half-plane (x2 > 0) and
the ``minus`` material the lower one. The crack lies on x1 < 0.
"""
import dataclasses
import math


class ParameterError(ValueError):
    """Invalid material data."""


class DegeneracyError(ArithmeticError):
    """A denominator in the constitutive constants vanishes."""


@dataclasses.dataclass(frozen=True)
class MaterialPair:
    """Shear moduli and Poisson ratios of the two half-planes.

    Parameters
    ----------
    mu_plus, mu_minus : float
        Shear moduli, strictly positive.
    nu_plus, nu_minus : float
        Poisson ratios. Physical values satisfy -1 < nu < 1/2; set
        ``formal=True`` to bypass that check.
    """

    mu_plus: float
    mu_minus: float
    nu_plus: float = 0.3
    nu_minus: float = 0.3
    formal: bool = False

    def __post_init__(self):
        if not (self.mu_plus > 0 and self.mu_minus > 0):
            raise ParameterError(
                f"shear moduli must be positive, got {self.mu_plus}, {self.mu_minus}")
        if not self.formal:
            for nu in (self.nu_plus, self.nu_minus):
                if not -1.0 < nu < 0.5:
                    raise ParameterError(f"Poisson ratio {nu} outside (-1, 1/2)")

    def swapped(self):
        """Return the pair with the upper and lower materials exchanged."""
        return MaterialPair(self.mu_minus, self.mu_plus, self.nu_minus,
                            self.nu_plus, self.formal)


@dataclasses.dataclass(frozen=True)
class BimaterialConstants:
    """Derived constants of a bimaterial pair.

    ``eta`` and ``k`` govern the anti-plane problem; ``b, d, alpha, gamma``
    and ``beta1..beta4`` the in-plane one. Degeneracy flags record which
    denominators vanish so that the solvers can pick a guarded route.
    """

    eta: float
    k: float
    b: float
    d: float
    alpha: float
    gamma: float
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    formal: bool = False
    pair: MaterialPair | None = None
    flags: frozenset = frozenset()

    @property
    def mu_sum(self):
        """mu_plus + mu_minus, expressed through eta and k."""
        return 4.0 / (self.k * (1.0 - self.eta ** 2))

    @property
    def c_mean(self):
        """1 / (mu_plus + mu_minus), finite even for formal constants."""
        return self.k * (1.0 - self.eta ** 2) / 4.0

    @property
    def mu_diff(self):
        """mu_minus - mu_plus."""
        return self.eta * self.mu_sum

    def is_degenerate(self, name):
        return name in self.flags


def _flags(eta, b, d, alpha, gamma, tol=1e-12):
    out = set()
    if abs(eta) < tol:
        out.add("eta=0")
    if abs(b) < tol:
        out.add("b=0")
    if abs(b * b - d * d) < tol * max(1.0, b * b):
        out.add("b^2=d^2")
    if abs(alpha * alpha - gamma * gamma) < tol * max(1.0, gamma * gamma):
        out.add("alpha^2=gamma^2")
    return frozenset(out)


def derive_constants(pair, formal_override=None):
    """Compute every bimaterial constant from a material pair.

    Parameters
    ----------
    pair : MaterialPair
    formal_override : dict, optional
        Replacement values for ``eta`` and/or ``k``. Marks the result as
        formal, which lifts the physical range checks.

    Returns
    -------
    BimaterialConstants

    Raises
    ------
    DegeneracyError
        If either Poisson ratio equals 3/4.
    """
    mp, mm, np_, nm = pair.mu_plus, pair.mu_minus, pair.nu_plus, pair.nu_minus
    if not (mp > 0 and mm > 0):
        raise ParameterError("shear moduli must be positive")
    for nu in (np_, nm):
        if nu == 0.75:
            raise DegeneracyError("Poisson ratio 3/4 makes 4 nu - 3 vanish")

    eta = (mm - mp) / (mm + mp)
    k = (mp + mm) / (mp * mm)
    # b is the sum of the compliances; with a minus sign the K and L
    # matrices would not follow from the two spectral identities
    b = (1 - np_) / mp + (1 - nm) / mm
    d = (1 - 2 * np_) / (2 * mp) - (1 - 2 * nm) / (2 * mm)
    den = mm * (1 - np_) + mp * (1 - nm)
    alpha = (mm * (1 - np_) - mp * (1 - nm)) / den
    gamma = (mm * (1 - 2 * np_) + mp * (1 - 2 * nm)) / (2 * den)
    qp, qm = 4 * np_ - 3, 4 * nm - 3
    beta1 = mp * (np_ - 1) / qp + mm * (nm - 1) / qm
    beta2 = mm * (2 * nm - 1) / (2 * qm) - mp * (2 * np_ - 1) / (2 * qp)
    beta3 = 2 * mm * (nm - 1) / qm - 2 * mp * (np_ - 1) / qp
    beta4 = mp * (1 - 2 * np_) / qp + mm * (1 - 2 * nm) / qm

    formal = pair.formal
    if formal_override:
        unknown = set(formal_override) - {"eta", "k"}
        if unknown:
            raise ParameterError(f"formal_override accepts eta and k only, got {unknown}")
        eta = float(formal_override.get("eta", eta))
        k = float(formal_override.get("k", k))
        formal = True
    if not formal and not (abs(eta) < 1 and k > 0):
        raise ParameterError("physical constants require |eta| < 1 and k > 0")

    return BimaterialConstants(
        eta=eta, k=k, b=b, d=d, alpha=alpha, gamma=gamma,
        beta1=beta1, beta2=beta2, beta3=beta3, beta4=beta4,
        formal=formal, pair=pair, flags=_flags(eta, b, d, alpha, gamma))


def formal_constants(eta, k, **inplane):
    """Build constants directly from eta and k, without a material pair.

    In-plane constants default to NaN unless given as keywords.
    """
    vals = {name: math.nan for name in
            ("b", "d", "alpha", "gamma", "beta1", "beta2", "beta3", "beta4")}
    unknown = set(inplane) - set(vals)
    if unknown:
        raise ParameterError(f"unknown constants {unknown}")
    vals.update({key: float(v) for key, v in inplane.items()})
    if not k or not math.isfinite(k):
        raise ParameterError("k must be finite and nonzero")
    flags = _flags(float(eta), vals["b"], vals["d"], vals["alpha"], vals["gamma"])
    return BimaterialConstants(eta=float(eta), k=float(k), formal=True, flags=flags, **vals)


def constants_to_dict(c):
    """Plain-dict view for serialisation."""
    out = {f.name: getattr(c, f.name) for f in dataclasses.fields(c)
           if f.name not in ("pair", "flags")}
    out["flags"] = sorted(c.flags)
    if c.pair is not None:
        out["pair"] = dataclasses.asdict(c.pair)
    return out
