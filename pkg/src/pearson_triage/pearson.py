"""Pearson distribution system: moments, type selection and the Type I density.

The Type I member is fitted by the method of moments.  Densities are
evaluated in log space; the normalising constant is built from log-gamma
terms and exponentiated once.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

LOG_FLOOR = -690.0
KAPPA_EPS = 1e-9
QUAD_EPSABS = 1e-9
QUAD_LIMIT = 200
ENDPOINT_PULL = 1e-12


class PearsonError(ValueError):
    """A moment set cannot be turned into the requested quantity.

    ``reason`` is a short machine-readable tag, e.g. ``"zero variance"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class FamilyType(str, enum.Enum):
    TYPE_I = "TypeI"
    TYPE_IV = "TypeIV"
    TYPE_VI = "TypeVI"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class Moments:
    mu1: float
    mu2: float
    mu3: float
    mu4: float
    n: int = 0


@dataclass(frozen=True)
class ShapeStats:
    skewness: float
    kurtosis: float
    kappa: float


@dataclass(frozen=True)
class PearsonOdeCoeffs:
    b: float
    a0: float
    a1: float
    a2: float

    def log_derivative(self, t: float) -> float:
        """d/dx ln f at centred abscissa ``t = x - mu1``."""
        return -(self.b + t) / (self.a0 + self.a1 * t + self.a2 * t * t)


@dataclass(frozen=True)
class PearsonType1Model:
    m0: float
    c1: float
    c2: float
    g1: float
    g2: float
    A0: float
    stats: ShapeStats
    h: float
    n: int = 0

    @property
    def support(self) -> tuple[float, float]:
        return (self.m0 - self.c1, self.m0 + self.c2)

    def to_dict(self) -> dict:
        return {
            "m0": self.m0,
            "c1": self.c1,
            "c2": self.c2,
            "g1": self.g1,
            "g2": self.g2,
            "a0_norm": self.A0,
            "skewness": self.stats.skewness,
            "kurtosis": self.stats.kurtosis,
            "kappa": self.stats.kappa,
            "h": self.h,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PearsonType1Model":
        return cls(
            m0=float(d["m0"]),
            c1=float(d["c1"]),
            c2=float(d["c2"]),
            g1=float(d["g1"]),
            g2=float(d["g2"]),
            A0=float(d["a0_norm"]),
            stats=ShapeStats(float(d["skewness"]), float(d["kurtosis"]), float(d["kappa"])),
            h=float(d["h"]),
            n=int(d["n"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PearsonType1Model":
        return cls.from_dict(json.loads(text))


def central_moments(samples: Sequence[float]) -> Moments:
    """Mean and population central moments of order 2-4 (divide by n)."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise PearsonError("empty sample")
    mu1 = float(x.mean())
    d = x - mu1
    d2 = d * d
    return Moments(
        mu1=mu1,
        mu2=float(d2.mean()),
        mu3=float((d2 * d).mean()),
        mu4=float((d2 * d2).mean()),
        n=int(x.size),
    )


def shape_stats(m: Moments) -> ShapeStats:
    if not m.mu2 > 0:
        raise PearsonError("zero variance")
    sk = m.mu3 / m.mu2**1.5
    ku = m.mu4 / m.mu2**2
    sk2 = sk * sk
    denom = 4.0 * (4.0 * ku - 3.0 * sk2) * (2.0 * ku - 3.0 * sk2 - 6.0)
    if denom == 0.0:
        raise PearsonError("kappa denominator zero", f"skewness={sk!r}, kurtosis={ku!r}")
    kappa = sk2 * (ku + 3.0) ** 2 / denom
    return ShapeStats(skewness=sk, kurtosis=ku, kappa=kappa)


def select_type(s: ShapeStats, eps: float = KAPPA_EPS) -> FamilyType:
    k = s.kappa
    if k < -eps:
        return FamilyType.TYPE_I
    if eps < k < 1.0 - eps:
        return FamilyType.TYPE_IV
    if k > 1.0 + eps:
        return FamilyType.TYPE_VI
    return FamilyType.BOUNDARY


def ode_coefficients(m: Moments) -> PearsonOdeCoeffs:
    """Coefficients of ``d ln f/dx = -(b + t) / (a0 + a1 t + a2 t^2)``, ``t = x - mu1``.

    In this centred form the linear denominator coefficient equals ``b``.
    """
    mu2, mu3, mu4 = m.mu2, m.mu3, m.mu4
    if not mu2 > 0:
        raise PearsonError("zero variance")
    d = 10.0 * mu2 * mu4 - 18.0 * mu2**3 - 12.0 * mu3**2
    if d == 0.0:
        raise PearsonError("ode denominator zero")
    b = mu3 * (mu4 + 3.0 * mu2**2) / d
    a0 = mu2 * (4.0 * mu2 * mu4 - 3.0 * mu3**2) / d
    a2 = (2.0 * mu2 * mu4 - 3.0 * mu3**2 - 6.0 * mu2**3) / d
    return PearsonOdeCoeffs(b=b, a0=a0, a1=b, a2=a2)


def _xlogx(g: float) -> float:
    # |g| so that the sign factors of g^g cancel when both exponents are negative
    return 0.0 if g == 0.0 else g * math.log(abs(g))


def _log_norm(g1: float, g2: float, c1: float, c2: float) -> float:
    g = g1 + g2
    return (
        _xlogx(g1)
        + _xlogx(g2)
        - _xlogx(g)
        + math.lgamma(g + 2.0)
        - math.lgamma(g1 + 1.0)
        - math.lgamma(g2 + 1.0)
        - math.log(c1 + c2)
    )


def fit_type1(m: Moments) -> PearsonType1Model:
    """Fit the bounded-support Type I density to a set of moments.

    Raises:
        PearsonError: the moments select another family member, or the
            resulting parameters do not describe a proper density.
    """
    m = Moments(float(m.mu1), float(m.mu2), float(m.mu3), float(m.mu4), int(m.n))
    stats = shape_stats(m)
    family = select_type(stats)
    sk, ku = stats.skewness, stats.kurtosis
    symmetric = sk == 0.0
    if family is FamilyType.BOUNDARY and not (symmetric and stats.kappa <= 0.0):
        raise PearsonError("not type I", f"boundary kappa={stats.kappa!r}")
    if family in (FamilyType.TYPE_IV, FamilyType.TYPE_VI):
        raise PearsonError("not type I", f"{family.value} (kappa={stats.kappa!r})")

    sk2 = sk * sk
    h_denom = 6.0 + 3.0 * sk2 - 2.0 * ku
    if h_denom == 0.0:
        raise PearsonError("h denominator zero")
    h = (6.0 * ku - 6.0 * sk2 - 6.0) / h_denom

    radicand = sk2 * (h + 2.0) ** 2 + 16.0 * h + 16.0
    if not radicand > 0.0:
        raise PearsonError("invalid exponents", f"radicand={radicand!r}")
    root = math.sqrt(radicand)
    # Signed skewness carries the direction: g2 > g1 for right skew.
    spread = 0.5 * h * (h + 2.0) * sk / root
    g1 = 0.5 * h - 1.0 - spread
    g2 = 0.5 * h - 1.0 + spread
    if not (g1 > -1.0 and g2 > -1.0):
        raise PearsonError("invalid exponents", f"g1={g1!r}, g2={g2!r}")

    span = 0.5 * math.sqrt(m.mu2 * radicand)
    if g1 == g2:
        c1 = 0.5 * span
    elif g1 + g2 == 0.0:
        raise PearsonError("invalid exponents", "g1 + g2 = 0")
    else:
        c1 = span * g1 / (g1 + g2)
    c2 = span - c1
    if not (c1 > 0.0 and c2 > 0.0):
        raise PearsonError("degenerate support", f"c1={c1!r}, c2={c2!r}")

    if m.mu3 == 0.0:
        m0 = m.mu1
    elif h == 2.0:
        raise PearsonError("mode denominator zero")
    else:
        m0 = m.mu1 - 0.5 * m.mu3 * (h + 2.0) / (m.mu2 * (h - 2.0))

    A0 = math.exp(_log_norm(g1, g2, c1, c2))
    return PearsonType1Model(m0=m0, c1=c1, c2=c2, g1=g1, g2=g2, A0=A0, stats=stats, h=h, n=m.n)


def log_pdf(model: PearsonType1Model, x: float, floor: float = LOG_FLOOR) -> float:
    """Natural log of the density; ``floor`` outside the open support."""
    u = (x - model.m0)
    left = u / model.c1
    right = -u / model.c2
    if not (left > -1.0 and right > -1.0):
        return floor
    val = math.log(model.A0)
    if model.g1 != 0.0:
        val += model.g1 * math.log1p(left)
    if model.g2 != 0.0:
        val += model.g2 * math.log1p(right)
    return val


def pdf(model: PearsonType1Model, x: float) -> float:
    lo, hi = model.support
    if not lo < x < hi:
        return 0.0
    return math.exp(log_pdf(model, x))


def _quad_over_support(model: PearsonType1Model, weight=None) -> float:
    """Integrate ``weight(x) * pdf(x)`` over the support."""
    weight = weight or (lambda x: 1.0)
    lo, hi = model.support
    opts = dict(epsabs=QUAD_EPSABS, epsrel=0.0, limit=QUAD_LIMIT, full_output=1)
    if model.g1 >= 0.0 and model.g2 >= 0.0:
        pull = ENDPOINT_PULL * (model.c1 + model.c2)
        args = (lambda x: weight(x) * pdf(model, x), lo + pull, hi - pull)
        opts["points"] = [model.m0]
    else:
        # pdf = K (x - lo)^g1 (hi - x)^g2; hand the singular factor to QAWS
        k = math.exp(math.log(model.A0) - model.g1 * math.log(model.c1) - model.g2 * math.log(model.c2))
        args = (lambda x: k * weight(x), lo, hi)
        opts.update(weight="alg", wvar=(model.g1, model.g2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _err, _info, *rest = integrate.quad(*args, **opts)
    if rest:
        raise PearsonError("quadrature did not converge", rest[0])
    return value


def normalization(model: PearsonType1Model) -> float:
    """Integral of the density over its support by adaptive quadrature."""
    return _quad_over_support(model)


def model_moments(model: PearsonType1Model) -> Moments:
    """Mean and central moments 2-4 of the fitted density, by quadrature."""
    mass = normalization(model)
    mean = _quad_over_support(model, lambda x: x) / mass
    central = [
        _quad_over_support(model, lambda x, k=k: (x - mean) ** k) / mass for k in (2, 3, 4)
    ]
    return Moments(mean, *central, n=model.n)
