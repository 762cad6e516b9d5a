"""Classical detection-record exponents.

Covariance matrices of the detection records fall in the one-parameter
exchangeable family (constant diagonal, constant off-diagonal), so inverses
and determinants have closed forms that stay exact at any size.  Throughout,
matrices are stored in the display convention where the density is
proportional to exp(-t' M^{-1} t); true covariances are half these entries.
KL divergences are invariant under that common rescaling, which the unit
tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, NumericalInstabilityError, SingularMatrixError, UsageError
from .scalars import EnergyParams, LogBase

_SINGULARITY_TOL = 1e-14


@dataclass(frozen=True)
class ExchangeableMatrix:
    """Symmetric matrix with constant diagonal and constant off-diagonal.

    Fully described by (size, diag, offdiag); the two distinct eigenvalues
    are diag + (size-1)*offdiag (uniform vector) and diag - offdiag with
    multiplicity size-1.
    """

    size: int
    diag: float
    offdiag: float

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
            raise DomainError(f"size must be a positive integer, got {self.size!r}")
        for name in ("diag", "offdiag"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")

    def eigenvalues(self) -> tuple[float, float]:
        """(uniform-direction eigenvalue, repeated eigenvalue)."""
        return (self.diag + (self.size - 1) * self.offdiag, self.diag - self.offdiag)

    def to_dense(self) -> np.ndarray:
        out = np.full((self.size, self.size), float(self.offdiag))
        np.fill_diagonal(out, float(self.diag))
        return out


def _singularity_scale(m: ExchangeableMatrix) -> float:
    return max(1.0, abs(m.diag), m.size * abs(m.offdiag))


def exchangeable_inverse(m: ExchangeableMatrix) -> ExchangeableMatrix:
    """Closed-form inverse within the exchangeable family.

    Raises SingularMatrixError when either eigenvalue vanishes to within
    1e-14 (relative to the entry scale).
    """
    lam_sum, lam_diff = m.eigenvalues()
    tol = _SINGULARITY_TOL * _singularity_scale(m)
    if abs(lam_sum) <= tol or (m.size > 1 and abs(lam_diff) <= tol):
        raise SingularMatrixError(
            f"exchangeable matrix is singular: eigenvalues {lam_sum:.3e}, {lam_diff:.3e}"
        )
    if m.size == 1:
        return ExchangeableMatrix(1, 1.0 / m.diag, 0.0)
    denom = lam_diff * lam_sum
    inv_diag = (m.diag + (m.size - 2) * m.offdiag) / denom
    inv_off = -m.offdiag / denom
    return ExchangeableMatrix(m.size, inv_diag, inv_off)


def exchangeable_det(m: ExchangeableMatrix) -> float:
    """Determinant (diag - offdiag)^{size-1} * (diag + (size-1) offdiag)."""
    lam_sum, lam_diff = m.eigenvalues()
    if m.size == 1:
        return m.diag
    return lam_diff ** (m.size - 1) * lam_sum


def heterodyne_covariance(params: EnergyParams) -> np.ndarray:
    """Display-convention covariance of one quadrature of the heterodyne record.

    Entries: 1 + energy on the diagonal (shared signal plus unit complex
    noise), energy off the diagonal (signal common to every detector).
    """
    m = ExchangeableMatrix(params.detectors, 1.0 + params.energy, params.energy)
    return m.to_dense()


def homodyne_covariance(params: EnergyParams) -> np.ndarray:
    """Display-convention covariance of the homodyne record (single quadrature).

    Measuring one quadrature halves the noise relative to the signal, which
    doubles the effective signal-to-noise: entries 1 + 2*energy / 2*energy.
    """
    e2 = 2.0 * params.energy
    m = ExchangeableMatrix(params.detectors, 1.0 + e2, e2)
    return m.to_dense()


def _check_covariance_input(mat: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise UsageError(f"{name} must be a square matrix, got shape {mat.shape}")
    scale = max(1.0, float(np.abs(mat).max()))
    if float(np.abs(mat - mat.T).max()) > 1e-12 * scale:
        raise DomainError(f"{name} is not symmetric to 1e-12")
    return mat


def _chol_logdet(mat: np.ndarray, name: str) -> float:
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        raise SingularMatrixError(f"{name} is not positive definite") from None
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def gaussian_kl(
    mean1: np.ndarray,
    cov1: np.ndarray,
    mean2: np.ndarray,
    cov2: np.ndarray,
    base: LogBase = LogBase.BITS,
) -> float:
    """KL divergence between two multivariate normal distributions.

    D(N1 || N2) in the requested base.  Both covariance matrices must be
    symmetric positive definite; means must match their dimension.
    """
    cov1 = _check_covariance_input(cov1, "cov1")
    cov2 = _check_covariance_input(cov2, "cov2")
    mean1 = np.asarray(mean1, dtype=float).reshape(-1)
    mean2 = np.asarray(mean2, dtype=float).reshape(-1)
    n = cov1.shape[0]
    if cov2.shape[0] != n or mean1.shape[0] != n or mean2.shape[0] != n:
        raise UsageError(
            f"dimension mismatch: cov1 {cov1.shape}, cov2 {cov2.shape}, "
            f"means {mean1.shape[0]}/{mean2.shape[0]}"
        )
    logdet1 = _chol_logdet(cov1, "cov1")
    logdet2 = _chol_logdet(cov2, "cov2")
    dm = mean2 - mean1
    trace_term = float(np.trace(np.linalg.solve(cov2, cov1)))
    quad_term = float(dm @ np.linalg.solve(cov2, dm))
    nats = 0.5 * (logdet2 - logdet1 + trace_term + quad_term - n)
    if nats < 0.0:
        if nats < -1e-9 * max(1.0, abs(logdet1), abs(logdet2)):
            raise NumericalInstabilityError(f"KL evaluated to {nats}, below the rounding floor")
        nats = 0.0
    return base.from_nats(nats)


def heterodyne_exponent(params: EnergyParams, base: LogBase = LogBase.BITS) -> float:
    """Block-length-normalized error exponent of the heterodyne record.

    Equals K log(1+E) - log(1+KE) for K detectors at energy E; zero when
    either K = 1 or E = 0, since then the two hypotheses coincide.
    """
    k, e = params.detectors, params.energy
    nats = k * math.log1p(e) - math.log1p(k * e)
    return base.from_nats(nats)


def homodyne_exponent(params: EnergyParams, base: LogBase = LogBase.BITS) -> float:
    """Error exponent of the homodyne record: (K log(1+2E) - log(1+2KE)) / 2."""
    k, e = params.detectors, params.energy
    nats = 0.5 * (k * math.log1p(2.0 * e) - math.log1p(2.0 * k * e))
    return base.from_nats(nats)


_EXPONENT_NAMES = ("heterodyne", "homodyne", "quantum", "photon")


def _resolve_exponent_fn(exponent: Union[str, Callable[[float], float]], detectors: int):
    """Map a name (or callable) to E -> exponent in nats at fixed detector count."""
    if callable(exponent):
        return exponent
    aliases = {"het": "heterodyne", "hom": "homodyne", "photon_counting": "photon"}
    name = aliases.get(str(exponent).lower(), str(exponent).lower())
    if name == "heterodyne":
        return lambda e: heterodyne_exponent(EnergyParams(detectors, e), LogBase.NATS)
    if name == "homodyne":
        return lambda e: homodyne_exponent(EnergyParams(detectors, e), LogBase.NATS)
    if name in ("quantum", "photon"):
        from . import quantum as _quantum

        fn = _quantum.quantum_exponent if name == "quantum" else _quantum.photon_counting_exponent
        return lambda e: fn(EnergyParams(detectors, e), LogBase.NATS)
    raise UsageError(f"unknown exponent {exponent!r}; expected one of {_EXPONENT_NAMES}")


def taylor_coefficient(
    exponent: Union[str, Callable[[float], float]],
    detectors: int,
    order: int,
    base: LogBase = LogBase.BITS,
    energies: Sequence[float] = (1e-3, 5e-4, 2.5e-4),
) -> float:
    """Leading small-energy Taylor coefficient of an exponent curve.

    Evaluates F(E)/E^order on a geometric ladder of small energies (each
    half the previous) and removes the next two correction orders with a
    Richardson table.  The surviving spread between table entries is the
    error estimate; a relative spread above 1e-3 raises
    NumericalInstabilityError rather than returning a silently bad fit.

    Parameters
    ----------
    exponent : name or callable
        One of 'heterodyne', 'homodyne', 'quantum', 'photon' (aliases
        'het'/'hom' accepted), or any callable E -> exponent in nats.
    detectors : int
        Detector count held fixed during the fit.
    order : int
        Power of E whose coefficient is extracted (1 or 2 in practice).
    """
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")
    energies = [float(e) for e in energies]
    if len(energies) != 3:
        raise UsageError(f"need exactly 3 ladder energies, got {len(energies)}")
    for e in energies:
        if not (e > 0.0 and math.isfinite(e)):
            raise DomainError(f"ladder energies must be positive and finite, got {e}")
    for hi, lo in zip(energies, energies[1:]):
        if abs(lo - hi / 2.0) > 1e-12 * hi:
            raise UsageError("ladder energies must halve at each step for the Richardson weights")
    fn = _resolve_exponent_fn(exponent, detectors)
    scaled = [fn(e) / e**order for e in energies]
    # one Richardson level kills the O(E) correction, the second the O(E^2) one
    level1 = [2.0 * scaled[i + 1] - scaled[i] for i in range(2)]
    fitted = (4.0 * level1[1] - level1[0]) / 3.0
    spread = max(abs(level1[0] - fitted), abs(level1[1] - fitted))
    if spread > 1e-3 * max(abs(fitted), 1e-15):
        raise NumericalInstabilityError(
            f"Richardson fit did not settle: value {fitted:.6e}, spread {spread:.2e}"
        )
    return base.from_nats(fitted)
