"""Truncated photon-number-basis oracle.

Everything here works in the finite basis {0..cutoff} per mode, which turns
states into explicit matrices and entropies into eigenvalue sums.  That
gives an independent numerical route to the same exponents the closed-form
modules produce, at the price of a truncation tail that the tail-bound
helpers quantify exactly.

Conventions: basis index order is row-major with mode 0 slowest, matching
np.kron of per-mode operators.  The jointly illuminated state is block
diagonal in total photon number, and each block is rank one; the builder
exploits that both for assembly and for its analytic spectrum.
"""

from __future__ import annotations

import logging
import math
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalInstabilityError, ResourceGuardError, UsageError
from .scalars import EnergyParams, LogBase, regularized_gamma_p

_LOG = logging.getLogger(__name__)

_HERMITICITY_TOL = 1e-12
_EIGENVALUE_FLOOR = 1e-14
_NEGATIVE_EIGENVALUE_TOL = 1e-10
_DIM_GUARD = 4096
_MAGIC = b"CXFOCK01"
_HEADER = struct.Struct("<8sIId")


@dataclass(eq=False)
class FockOperator:
    """Dense operator on the truncated multimode photon-number basis."""

    modes: int
    cutoff: int
    matrix: np.ndarray
    discarded_mass: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.modes, int) or isinstance(self.modes, bool) or self.modes < 1:
            raise DomainError(f"modes must be a positive integer, got {self.modes!r}")
        if not isinstance(self.cutoff, int) or isinstance(self.cutoff, bool) or self.cutoff < 0:
            raise DomainError(f"cutoff must be a non-negative integer, got {self.cutoff!r}")
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = (self.cutoff + 1) ** self.modes
        if mat.shape != (dim, dim):
            raise DomainError(
                f"matrix shape {mat.shape} does not match (cutoff+1)^modes = {dim}"
            )
        scale = max(1.0, float(np.abs(mat).max()) if mat.size else 1.0)
        if float(np.abs(mat - mat.conj().T).max()) > _HERMITICITY_TOL * scale:
            raise DomainError("matrix is not Hermitian to 1e-12")
        self.matrix = mat

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True)
class CoherentKet:
    """Truncated coherent-state vector with its truncation bookkeeping."""

    amplitude: complex
    cutoff: int
    amplitudes: np.ndarray
    severe_truncation: bool


@dataclass(frozen=True)
class CoherentTail:
    """Exact coherent truncation tail next to its factorial bound."""

    cutoff: int
    amplitude_sq: float
    exact: float
    bound: float
    bound_holds: bool
    in_guaranteed_region: bool


@dataclass(frozen=True)
class ThermalTail:
    """Exact geometric truncation tail next to the 2^-cutoff target."""

    cutoff: int
    exact: float
    target: float
    within_target: bool


def occupations(modes: int, cutoff: int) -> np.ndarray:
    """(dim, modes) table of occupation numbers in basis order."""
    grids = np.meshgrid(*([np.arange(cutoff + 1)] * modes), indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, modes)


@lru_cache(maxsize=16)
def _laguerre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.laguerre.laggauss(n)
    return nodes, weights


def _log_factorials(n_max: int) -> np.ndarray:
    """log(n!) for n in 0..n_max via a cumulative sum."""
    out = np.zeros(n_max + 1)
    if n_max >= 1:
        out[1:] = np.cumsum(np.log(np.arange(1, n_max + 1, dtype=float)))
    return out


def _logsumexp(values: np.ndarray, axis=None):
    if axis is None:
        m = float(np.max(values))
        return m + math.log(float(np.sum(np.exp(values - m))))
    m = np.max(values, axis=axis, keepdims=True)
    out = m + np.log(np.sum(np.exp(values - m), axis=axis, keepdims=True))
    return np.squeeze(out, axis=axis)


def coherent_ket(alpha: complex, cutoff: int) -> CoherentKet:
    """Coherent state |alpha> truncated at the given photon-number cutoff.

    Coefficients follow the stable recurrence c_{n+1} = c_n * alpha /
    sqrt(n+1) starting from c_0 = exp(-|alpha|^2 / 2), so every partial
    product is bounded by 1 and no factorial is ever formed.
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise DomainError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    a = complex(alpha)
    if not (math.isfinite(a.real) and math.isfinite(a.imag)):
        raise DomainError(f"amplitude must be finite, got {alpha!r}")
    amps = np.empty(cutoff + 1, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(a) ** 2)
    for n in range(cutoff):
        amps[n + 1] = amps[n] * a / math.sqrt(n + 1.0)
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    return CoherentKet(
        amplitude=a,
        cutoff=cutoff,
        amplitudes=amps,
        severe_truncation=(1.0 - norm_sq) > 1e-9,
    )


def thermal_state(energy: float, cutoff: int) -> FockOperator:
    """Single-mode thermal state, diagonal geometric photon distribution.

    The retained trace is exactly 1 - (E/(1+E))^{cutoff+1}; the discarded
    remainder is recorded on the returned operator rather than renormalized
    away.
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise DomainError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    if not math.isfinite(energy) or energy < 0.0:
        raise DomainError(f"energy must be finite and >= 0, got {energy}")
    n = np.arange(cutoff + 1, dtype=float)
    if energy == 0.0:
        diag = np.zeros(cutoff + 1)
        diag[0] = 1.0
        tail = 0.0
    else:
        # exp(n log(E/(1+E)) - log(1+E)) evaluated in logs for small E
        log_ratio = math.log(energy) - math.log1p(energy)
        diag = np.exp(n * log_ratio - math.log1p(energy))
        tail = math.exp((cutoff + 1) * log_ratio)
    return FockOperator(
        modes=1,
        cutoff=cutoff,
        matrix=np.diag(diag).astype(np.complex128),
        discarded_mass=tail,
    )


def _correlated_log_blocks(params: EnergyParams, cutoff: int, quad_nodes: int):
    """Per-total-photon-number data for the jointly illuminated state.

    Returns (totals, neg_logw, log_coeff_quad, log_coeff_exact,
    log_block_weight): per-basis-state total photon numbers, log of
    1/prod(n_i!) per basis state, and per-block coefficients.  The retained
    eigenvalue of the rank-one block at total photon number S is
    exp(log_coeff[S] + log_block_weight[S]).
    """
    k, e = params.detectors, params.energy
    s_max = k * cutoff
    s_grid = np.arange(s_max + 1, dtype=float)
    logfact = _log_factorials(max(s_max, cutoff))

    nodes, weights = _laguerre_rule(quad_nodes)
    log_nodes = np.log(nodes)
    log_weights = np.log(weights)
    # moments m_S = sum_j w_j v_j^S approximate integral of v^S e^{-v}
    log_moments = _logsumexp(log_weights[None, :] + s_grid[:, None] * log_nodes[None, :], axis=1)
    log_c = math.log1p(k * e) - math.log(e)  # integral rescaling constant (1+KE)/E
    log_coeff_quad = -math.log(e) - (s_grid + 1.0) * log_c + log_moments
    log_coeff_exact = -math.log(e) - (s_grid + 1.0) * log_c + logfact[: s_max + 1]

    occ = occupations(k, cutoff)
    totals = occ.sum(axis=1)
    neg_logw = -logfact[occ].sum(axis=1)  # log prod 1/n_i!
    log_block_weight = np.full(s_max + 1, -np.inf)
    for s in range(s_max + 1):
        sel = neg_logw[totals == s]
        if sel.size:
            log_block_weight[s] = _logsumexp(sel)
    return totals, neg_logw, log_coeff_quad, log_coeff_exact, log_block_weight


def _block_entropy(log_coeff: np.ndarray, log_block_weight: np.ndarray) -> float:
    log_lam = log_coeff + log_block_weight
    lam = np.exp(log_lam)
    total = lam.sum()
    lam_n = lam / total
    keep = lam_n > _EIGENVALUE_FLOOR
    return float(-np.sum(lam_n[keep] * np.log(lam_n[keep])))


def correlated_state(
    params: EnergyParams,
    cutoff: int,
    quad_nodes: int = 64,
    check_convergence: bool = True,
) -> FockOperator:
    """Joint state of K detectors lit by one phase-randomized Gaussian source.

    Built by radial Gauss-Laguerre quadrature of the coherent-state mixture;
    the angular average is carried out exactly, which makes the operator
    block diagonal in total photon number with rank-one blocks.  The trace
    is renormalized to the analytic truncated mass, and the discarded
    remainder is recorded.

    Raises ResourceGuardError when (cutoff+1)^detectors exceeds 4096, and
    NumericalInstabilityError when doubling the quadrature nodes moves the
    block entropy by more than 1e-6.
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise DomainError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    if not isinstance(quad_nodes, int) or isinstance(quad_nodes, bool) or quad_nodes < 20:
        raise UsageError(f"quad_nodes must be an integer >= 20, got {quad_nodes!r}")
    k, e = params.detectors, params.energy
    dim = (cutoff + 1) ** k
    if dim > _DIM_GUARD:
        raise ResourceGuardError(
            f"basis dimension (cutoff+1)^detectors = {dim} exceeds the guard of {_DIM_GUARD}; "
            "lower the cutoff or the detector count"
        )
    if e == 0.0:
        mat = np.zeros((dim, dim), dtype=np.complex128)
        mat[0, 0] = 1.0
        return FockOperator(modes=k, cutoff=cutoff, matrix=mat, discarded_mass=0.0)

    totals, neg_logw, log_coeff, log_coeff_exact, log_bw = _correlated_log_blocks(
        params, cutoff, quad_nodes
    )
    if check_convergence:
        _, _, log_coeff_2q, _, _ = _correlated_log_blocks(params, cutoff, 2 * quad_nodes)
        drift = abs(_block_entropy(log_coeff, log_bw) - _block_entropy(log_coeff_2q, log_bw))
        if drift > 1e-6:
            raise NumericalInstabilityError(
                f"quadrature not converged: entropy moved by {drift:.3e} when doubling "
                f"{quad_nodes} nodes"
            )

    mat = np.zeros((dim, dim))
    for s in range(totals.max() + 1):
        idx = np.flatnonzero(totals == s)
        if idx.size == 0:
            continue
        u = np.exp(0.5 * log_coeff[s] + 0.5 * neg_logw[idx])
        mat[np.ix_(idx, idx)] = np.outer(u, u)

    mass_analytic = min(1.0, float(np.exp(log_coeff_exact + log_bw).sum()))
    trace_num = float(np.trace(mat))
    mat *= mass_analytic / trace_num
    discarded = max(0.0, 1.0 - mass_analytic)
    _LOG.debug(
        "correlated_state K=%d E=%g cutoff=%d: discarded mass %.3e", k, e, cutoff, discarded
    )
    return FockOperator(
        modes=k, cutoff=cutoff, matrix=mat.astype(np.complex128), discarded_mass=discarded
    )


def correlated_spectrum(params: EnergyParams, cutoff: int) -> np.ndarray:
    """Analytic nonzero eigenvalues of the truncated correlated state, descending.

    One eigenvalue per total photon number S: the state's S-block is rank
    one with eigenvalue S! E^S / (1+KE)^{S+1} times the sum of 1/prod(n_i!)
    over retained occupation patterns.  Useful as an eigensolver-free route
    to the same spectrum correlated_state carries implicitly.
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise DomainError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    k, e = params.detectors, params.energy
    dim = (cutoff + 1) ** k
    if dim > _DIM_GUARD:
        raise ResourceGuardError(
            f"basis dimension {dim} exceeds the guard of {_DIM_GUARD}"
        )
    if e == 0.0:
        return np.array([1.0])
    _, _, _, log_coeff_exact, log_bw = _correlated_log_blocks(params, cutoff, 20)
    lam = np.exp(log_coeff_exact + log_bw)
    return np.sort(lam)[::-1].copy()


def tensor(a: FockOperator, b: FockOperator) -> FockOperator:
    """Tensor product of two operators sharing the same per-mode cutoff."""
    if a.cutoff != b.cutoff:
        raise UsageError(f"cutoffs differ: {a.cutoff} vs {b.cutoff}")
    return FockOperator(
        modes=a.modes + b.modes,
        cutoff=a.cutoff,
        matrix=np.kron(a.matrix, b.matrix),
        discarded_mass=1.0 - (1.0 - a.discarded_mass) * (1.0 - b.discarded_mass),
    )


def mean_photon_number(op: FockOperator, mode: int = 0) -> float:
    """Expectation of the photon number of one mode, trace-normalized."""
    if not 0 <= mode < op.modes:
        raise UsageError(f"mode {mode} out of range for {op.modes} modes")
    occ = occupations(op.modes, op.cutoff)[:, mode]
    diag = np.diag(op.matrix).real
    return float((occ * diag).sum() / diag.sum())


def von_neumann_entropy(
    op: FockOperator, base: LogBase = LogBase.BITS, trace_tol: float = 1e-6
) -> float:
    """Spectral entropy -sum p log p of a density operator.

    The trace must sit within trace_tol of 1; it is then normalized out.
    Eigenvalues below 1e-14 are treated as exact zeros, and eigenvalues
    below -1e-10 mean the operator is not a state and raise DomainError.
    """
    tr = op.trace()
    if abs(tr - 1.0) > trace_tol:
        raise DomainError(f"trace {tr} deviates from 1 by more than {trace_tol}")
    w = np.linalg.eigvalsh(op.matrix)
    if w[0] < -_NEGATIVE_EIGENVALUE_TOL:
        raise DomainError(f"operator has negative eigenvalue {w[0]:.3e}; not a state")
    w = w / tr
    keep = w > _EIGENVALUE_FLOOR
    nats = float(-np.sum(w[keep] * np.log(w[keep])))
    return base.from_nats(max(0.0, nats))


def quantum_relative_entropy(
    rho: FockOperator,
    sigma: FockOperator,
    base: LogBase = LogBase.BITS,
    trace_tol: float = 1e-6,
) -> float:
    """Relative entropy tr rho (log rho - log sigma) between two states.

    Returns inf on a support violation, detected in two tiers: rho mass
    above 1e-12 on directions where sigma's eigenvalue is nonpositive, or
    rho mass above 1e-6 on directions where sigma's eigenvalue cannot be
    distinguished from zero at eigensolver resolution (dim * eps * s_max).
    Positive eigenvalues above that resolution enter the cross term at
    their computed value, however small; a thermal tail of 1e-20 on a
    diagonal sigma is data, not noise.  Violations below the mass
    thresholds are not detectable in double precision and are absorbed.
    """
    if rho.modes != sigma.modes or rho.cutoff != sigma.cutoff:
        raise UsageError(
            f"operands live on different bases: ({rho.modes}, {rho.cutoff}) vs "
            f"({sigma.modes}, {sigma.cutoff})"
        )
    tr_r, tr_s = rho.trace(), sigma.trace()
    for tr, name in ((tr_r, "rho"), (tr_s, "sigma")):
        if abs(tr - 1.0) > trace_tol:
            raise DomainError(f"trace of {name} deviates from 1 by more than {trace_tol}")
    lam = np.linalg.eigvalsh(rho.matrix)
    if lam[0] < -_NEGATIVE_EIGENVALUE_TOL:
        raise DomainError(f"rho has negative eigenvalue {lam[0]:.3e}; not a state")
    lam = np.clip(lam / tr_r, 0.0, None)
    s, w_s = np.linalg.eigh(sigma.matrix)
    if s[0] < -_NEGATIVE_EIGENVALUE_TOL:
        raise DomainError(f"sigma has negative eigenvalue {s[0]:.3e}; not a state")
    s = np.clip(s / tr_s, 0.0, None)

    keep = lam > _EIGENVALUE_FLOOR
    entropy_term = float(np.sum(lam[keep] * np.log(lam[keep])))

    # mass of rho in each sigma eigendirection
    p = np.einsum("ij,ji->i", w_s.conj().T, (rho.matrix / tr_r) @ w_s).real
    p = np.clip(p, 0.0, None)
    noise_floor = s.size * np.finfo(float).eps * float(s[-1])
    hard_null = s <= 0.0
    soft_null = ~hard_null & (s <= noise_floor)
    if float(p[hard_null].sum()) > 1e-12 or float(p[soft_null].sum()) > 1e-6:
        return math.inf
    kept = ~hard_null
    cross_term = float(np.sum(p[kept] * np.log(s[kept])))
    nats = entropy_term - cross_term
    return base.from_nats(max(0.0, nats))


def truncation_tail_coherent(alpha: complex, cutoff: int) -> CoherentTail:
    """Exact mass of |alpha> beyond the cutoff, with its factorial bound.

    The exact tail is the regularized lower incomplete gamma
    P(cutoff+1, |alpha|^2); the bound is max(2, |alpha|^2)^cutoff / cutoff!,
    guaranteed once cutoff >= 8 e max(2, |alpha|^2).
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 1:
        raise DomainError(f"cutoff must be a positive integer, got {cutoff!r}")
    z = abs(complex(alpha)) ** 2
    if not math.isfinite(z):
        raise DomainError(f"amplitude must be finite, got {alpha!r}")
    exact = regularized_gamma_p(cutoff + 1.0, z) if z > 0.0 else 0.0
    zmax = max(2.0, z)
    bound = math.exp(cutoff * math.log(zmax) - math.lgamma(cutoff + 1.0))
    return CoherentTail(
        cutoff=cutoff,
        amplitude_sq=z,
        exact=exact,
        bound=bound,
        bound_holds=exact <= bound,
        in_guaranteed_region=cutoff >= 8.0 * math.e * zmax,
    )


def truncation_tail_thermal(energy: float, cutoff: int) -> ThermalTail:
    """Exact geometric tail (E/(1+E))^{cutoff+1} against the 2^-cutoff target.

    The target is met for every cutoff exactly when E <= 1.
    """
    if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
        raise DomainError(f"cutoff must be a non-negative integer, got {cutoff!r}")
    if not math.isfinite(energy) or energy < 0.0:
        raise DomainError(f"energy must be finite and >= 0, got {energy}")
    if energy == 0.0:
        exact = 0.0
    else:
        exact = math.exp((cutoff + 1) * (math.log(energy) - math.log1p(energy)))
    target = 2.0 ** (-cutoff)
    return ThermalTail(cutoff=cutoff, exact=exact, target=target, within_target=exact <= target)


def dump_fock_operator(op: FockOperator, path) -> None:
    """Serialize to a little-endian binary file.

    Layout: 8-byte magic, uint32 modes, uint32 cutoff, float64 discarded
    mass, then the matrix row-major as interleaved (real, imag) float64
    pairs.
    """
    header = _HEADER.pack(_MAGIC, op.modes, op.cutoff, op.discarded_mass)
    payload = np.ascontiguousarray(op.matrix, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_fock_operator(path) -> FockOperator:
    """Inverse of dump_fock_operator, with layout validation."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise DomainError(f"file too short to be a Fock operator dump: {len(raw)} bytes")
    magic, modes, cutoff, discarded = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise DomainError(f"bad magic {magic!r}; not a Fock operator dump")
    dim = (cutoff + 1) ** modes
    expected = _HEADER.size + dim * dim * 16
    if len(raw) != expected:
        raise DomainError(
            f"payload size mismatch: file has {len(raw)} bytes, header implies {expected}"
        )
    mat = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(dim, dim)
    return FockOperator(
        modes=int(modes),
        cutoff=int(cutoff),
        matrix=mat.astype(np.complex128),
        discarded_mass=float(discarded),
    )
