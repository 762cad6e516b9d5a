"""Scalar building blocks used by every exponent formula.

All internal accumulation happens in natural logarithms; conversion to the
requested output base is a single multiplication at the very end.  That keeps
mixed-base bugs out of the intermediate algebra and makes the bits/nats
consistency property exact in floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, NumericalInstabilityError, UsageError

LN2 = math.log(2.0)

# iteration caps for the incomplete-gamma evaluators
_MAX_SERIES_ITER = 600
_MAX_CF_ITER = 600
_CF_TINY = 1e-300


class LogBase(enum.Enum):
    """Output logarithm base for entropies and exponents."""

    BITS = "bits"
    NATS = "nats"

    def from_nats(self, value: float) -> float:
        """Convert a quantity accumulated in nats to this base.

        The conversion factor is exactly 1/ln 2, applied once, so
        ``x_bits == x_nats / ln 2`` holds to the last ulp.
        """
        if self is LogBase.BITS:
            return value / LN2
        return value

    @classmethod
    def parse(cls, name: str) -> "LogBase":
        try:
            return cls(name.lower())
        except ValueError:
            raise UsageError(f"unknown log base {name!r}; expected 'bits' or 'nats'") from None


@dataclass(frozen=True)
class EnergyParams:
    """Detector count and mean photon number per detector.

    Attributes
    ----------
    detectors : int
        Number of receivers observing the same optical field, >= 1.
    energy : float
        Mean photon number per detector, >= 0.
    """

    detectors: int
    energy: float

    def __post_init__(self) -> None:
        if not isinstance(self.detectors, (int,)) or isinstance(self.detectors, bool):
            raise DomainError(f"detectors must be an integer, got {self.detectors!r}")
        if self.detectors < 1:
            raise DomainError(f"detectors must be >= 1, got {self.detectors}")
        e = self.energy
        if not isinstance(e, (int, float)) or isinstance(e, bool):
            raise DomainError(f"energy must be a real number, got {e!r}")
        if not math.isfinite(e) or e < 0:
            raise DomainError(f"energy must be finite and >= 0, got {e}")
        object.__setattr__(self, "energy", float(e))


def gordon_g(x: float, base: LogBase = LogBase.BITS) -> float:
    """Entropy of a thermal state with mean photon number ``x``.

    g(x) = (x+1) log(x+1) - x log(x), with g(0) = 0 by continuity.
    Uses log1p so small arguments keep full relative accuracy.
    """
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"gordon_g requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    nats = (x + 1.0) * math.log1p(x) - x * math.log(x)
    return base.from_nats(nats)


def symplectic_mode_entropy(x: float, base: LogBase = LogBase.BITS) -> float:
    """Entropy of a Gaussian mode whose covariance has symplectic eigenvalue ``x``.

    f(x) = ((x+1)/2) log((x+1)/2) - ((x-1)/2) log((x-1)/2), f(1) = 0.
    Satisfies f(1 + 2y) = gordon_g(y) for y >= 0.
    """
    if not math.isfinite(x) or x < 1.0:
        raise DomainError(f"symplectic_mode_entropy requires x >= 1, got {x}")
    if x == 1.0:
        return 0.0
    u = 0.5 * (x + 1.0)
    v = 0.5 * (x - 1.0)
    nats = u * math.log(u) - v * math.log(v)
    return base.from_nats(nats)


def _log_lower_gamma_series(a: float, z: float) -> float:
    """log gamma_lower(a, z) by the ascending series, valid for z < a + 1.

    gamma(a,z) = z^a e^{-z} sum_{n>=0} z^n / (a (a+1) ... (a+n)), accumulated
    as log(z^a e^{-z}) + log(sum).  The sum itself stays O(1)-ish in this
    region, so only the prefactor can overflow, and that is handled by the
    caller working in logs.
    """
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_SERIES_ITER):
        ap += 1.0
        term *= z / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            return a * math.log(z) - z + math.log(total)
    raise NumericalInstabilityError(
        f"incomplete gamma series did not converge for a={a}, z={z}"
    )


def _log_upper_gamma_cf(a: float, z: float) -> float:
    """log Gamma_upper(a, z) by the Lentz continued fraction, valid for z >= a + 1."""
    b = z + 1.0 - a
    c = 1.0 / _CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_CF_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = b + an / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return a * math.log(z) - z + math.log(h)
    raise NumericalInstabilityError(
        f"incomplete gamma continued fraction did not converge for a={a}, z={z}"
    )


def regularized_gamma_p(a: float, z: float) -> float:
    """Regularized lower incomplete gamma P(a, z) = gamma_lower(a, z) / Gamma(a).

    Works entirely in logs, so it stays accurate for shape parameters far
    beyond the point where Gamma(a) itself overflows a double.
    """
    if not math.isfinite(a) or a <= 0.0:
        raise DomainError(f"regularized_gamma_p requires a > 0, got {a}")
    if not math.isfinite(z) or z < 0.0:
        raise DomainError(f"regularized_gamma_p requires z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    lg = math.lgamma(a)
    if z < a + 1.0:
        return math.exp(_log_lower_gamma_series(a, z) - lg)
    # P = 1 - Q, computed as -expm1(log Q) to keep precision when Q is near 1
    log_q = _log_upper_gamma_cf(a, z) - lg
    return -math.expm1(log_q)


def incomplete_gamma_lower(a: float, z: float) -> float:
    """Lower incomplete gamma function gamma(a, z) = int_0^z t^{a-1} e^{-t} dt.

    Region split follows the classic series / continued-fraction recipe:
    ascending series for z < a+1, Lentz continued fraction for the upper
    tail otherwise.  Accumulation is in log space, so the value is correct
    up to the point where the *result* itself exceeds the double range,
    in which case inf is returned.
    """
    if not math.isfinite(a) or a <= 0.0:
        raise DomainError(f"incomplete_gamma_lower requires a > 0, got {a}")
    if not math.isfinite(z) or z < 0.0:
        raise DomainError(f"incomplete_gamma_lower requires z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    if z < a + 1.0:
        log_g = _log_lower_gamma_series(a, z)
        return math.exp(log_g) if log_g < 709.78 else math.inf
    # upper-tail region: gamma = Gamma(a) - Gamma_upper(a, z), done in logs
    lg = math.lgamma(a)
    log_q = _log_upper_gamma_cf(a, z) - lg
    # log(gamma) = lgamma + log(1 - exp(log_q))
    one_minus_q = -math.expm1(log_q)
    if one_minus_q <= 0.0:
        # Gamma_upper rounded to the full Gamma; the lower part has underflowed.
        return 0.0
    log_g = lg + math.log(one_minus_q)
    return math.exp(log_g) if log_g < 709.78 else math.inf


def binary_kl(p: float, q: float) -> float:
    """Kullback-Leibler divergence d(p || q) between Bernoulli(p) and Bernoulli(q), in nats.

    Returns inf when q puts zero mass where p does not (absolute continuity
    failure); that is a legitimate value, not an error.
    """
    for v, name in ((p, "p"), (q, "q")):
        if not math.isfinite(v) or v < 0.0 or v > 1.0:
            raise DomainError(f"binary_kl requires {name} in [0, 1], got {v}")
    total = 0.0
    if p > 0.0:
        if q == 0.0:
            return math.inf
        total += p * math.log(p / q)
    if p < 1.0:
        if q == 1.0:
            return math.inf
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return total


def bernoulli_product_kl(p0, q0, base: LogBase = LogBase.BITS) -> float:
    """KL divergence between products of Bernoulli no-click distributions.

    Parameters
    ----------
    p0, q0 : sequences of floats in [0, 1]
        No-click probabilities, one entry per output mode, for the two
        hypotheses.  Must have equal length.
    """
    p0 = list(p0)
    q0 = list(q0)
    if len(p0) != len(q0):
        raise UsageError(
            f"bernoulli_product_kl needs equal-length sequences, got {len(p0)} and {len(q0)}"
        )
    nats = 0.0
    for p, q in zip(p0, q0):
        nats += binary_kl(p, q)
        if math.isinf(nats):
            return base.from_nats(math.inf)
    return base.from_nats(nats)
