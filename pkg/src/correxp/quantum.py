"""Quantum-side exponents and Gaussian covariance machinery.

The collective state of K detectors sharing one randomized coherent signal
is Gaussian, so its entropy is fixed by the symplectic spectrum of its
2K x 2K quadrature covariance matrix.  Quadratures are ordered
(q1, p1, q2, p2, ...), vacuum variance normalized to 1.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, UsageError
from .scalars import EnergyParams, LogBase, bernoulli_product_kl, symplectic_mode_entropy, gordon_g

_SYMMETRY_TOL = 1e-12


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal symplectic form Omega for the (q1, p1, ...) ordering."""
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise DomainError(f"modes must be a positive integer, got {modes!r}")
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def build_quantum_cov(params: EnergyParams) -> np.ndarray:
    """Quadrature covariance of the correlated K-detector state.

    Every detector sees vacuum noise plus the same Gaussian signal of mean
    photon number E: diagonal 1 + 2E, like-quadrature cross terms 2E,
    q-p cross terms zero.
    """
    k, e = params.detectors, params.energy
    dim = 2 * k
    v = np.zeros((dim, dim))
    idx = np.arange(dim)
    same_quad = (idx[:, None] % 2) == (idx[None, :] % 2)
    v[same_quad] = 2.0 * e
    np.fill_diagonal(v, 1.0 + 2.0 * e)
    return v


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a positive-definite covariance matrix, descending.

    Computed from the singular values of V^{1/2} Omega V^{1/2}: that matrix
    is real antisymmetric, so its singular values come in equal pairs, one
    pair per symplectic eigenvalue.  This keeps the whole computation in
    well-conditioned real symmetric factorizations.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise UsageError(f"covariance must be square, got shape {v.shape}")
    dim = v.shape[0]
    if dim % 2 != 0:
        raise UsageError(f"covariance must have even dimension, got {dim}")
    scale = max(1.0, float(np.abs(v).max()))
    if float(np.abs(v - v.T).max()) > _SYMMETRY_TOL * scale:
        raise DomainError("covariance is not symmetric to 1e-12")
    eigvals, eigvecs = np.linalg.eigh(v)
    if eigvals[0] <= 0.0:
        raise DomainError(f"covariance is not positive definite (min eigenvalue {eigvals[0]:.3e})")
    sqrt_v = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T
    paired = np.linalg.svd(sqrt_v @ symplectic_form(dim // 2) @ sqrt_v, compute_uv=False)
    return paired[::2].copy()


def quantum_exponent(params: EnergyParams, base: LogBase = LogBase.BITS) -> float:
    """Optimal collective-measurement exponent K g(E) - f(1 + 2KE).

    The entropy difference between K independent thermal detectors and the
    jointly correlated state; upper-bounds every concrete detection scheme
    in this package.
    """
    k, e = params.detectors, params.energy
    nats = k * gordon_g(e, LogBase.NATS) - symplectic_mode_entropy(1.0 + 2.0 * k * e, LogBase.NATS)
    return base.from_nats(max(0.0, nats))


def photon_counting_exponent(params: EnergyParams, base: LogBase = LogBase.BITS) -> float:
    """Exponent of on/off photon counting behind a beam-concentrating interferometer.

    The interferometer folds the K beams into one mode.  Under the
    correlated hypothesis the bright mode carries mean photon number KE and
    the rest are vacuum; under the uncorrelated hypothesis every output
    mode is thermal with mean photon number E.  The exponent is the KL
    divergence between the resulting product no-click distributions.
    """
    k, e = params.detectors, params.energy
    if e == 0.0:
        return 0.0
    p_corr = [1.0 / (1.0 + k * e)] + [1.0] * (k - 1)
    p_unc = [1.0 / (1.0 + e)] * k
    return bernoulli_product_kl(p_corr, p_unc, base)
