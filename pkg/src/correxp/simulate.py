"""Monte Carlo likelihood-ratio testing of the detection records.

The harness draws blocks under both hypotheses, scores them with the exact
closed-form log likelihood ratio, calibrates the decision threshold on a
held-out correlated stream, and reports empirical error rates with Wilson
intervals.  Everything is deterministic given the seed: stream derivation,
draw order inside a stream, and the quantile estimator are all part of the
reproducibility contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import (
    ExchangeableMatrix,
    exchangeable_inverse,
    heterodyne_exponent,
    homodyne_exponent,
)
from .errors import DomainError, UsageError
from .quantum import photon_counting_exponent
from .scalars import EnergyParams, LogBase

STRATEGY_KINDS = ("heterodyne", "homodyne", "photon_counting")
HYPOTHESES = ("correlated", "uncorrelated")

# two-sided 95% normal quantile, for Wilson intervals
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Strategy:
    """A detection scheme applied by all K receivers."""

    kind: str
    params: EnergyParams

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise UsageError(f"unknown strategy kind {self.kind!r}; expected one of {STRATEGY_KINDS}")

    @property
    def sample_width(self) -> int:
        """Numbers recorded per shot: 2K, K, or K bits."""
        k = self.params.detectors
        return 2 * k if self.kind == "heterodyne" else k


@dataclass(frozen=True)
class TestOutcome:
    """Empirical result of the likelihood-ratio test at one block length."""

    n: int
    alpha_hat: float
    beta_hat: float
    exponent_hat: float
    trials: tuple[int, int]
    ci_low: float
    ci_high: float
    censored: bool = False


def _check_hypothesis(hypothesis: str) -> None:
    if hypothesis not in HYPOTHESES:
        raise UsageError(f"unknown hypothesis {hypothesis!r}; expected one of {HYPOTHESES}")


def sample_block(strategy: Strategy, hypothesis: str, n: int, seed) -> np.ndarray:
    """Draw n i.i.d. shots of the given strategy under the given hypothesis.

    Correlated Gaussian shots are drawn hierarchically: one shared complex
    amplitude with per-axis variance E/2 per shot, then per-detector noise
    (per-axis variance 1/2).  The homodyne record keeps one quadrature of a
    sqrt(2)-amplified copy of the shared signal.  Photon-counting shots are
    Bernoulli click patterns of the concentrated-beam output.  The draw
    order (signal axes first, then noise) is fixed and part of the
    reproducibility contract.

    Returns float64 of shape (n, 2K) for heterodyne (real parts then
    imaginary parts), (n, K) for homodyne, uint8 of shape (n, K) for
    photon counting.
    """
    _check_hypothesis(hypothesis)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    rng = np.random.default_rng(seed)
    k, e = strategy.params.detectors, strategy.params.energy
    noise_scale = math.sqrt(0.5)
    if strategy.kind == "heterodyne":
        if hypothesis == "correlated":
            sig_re = rng.normal(0.0, math.sqrt(e / 2.0), (n, 1))
            sig_im = rng.normal(0.0, math.sqrt(e / 2.0), (n, 1))
            re = sig_re + rng.normal(0.0, noise_scale, (n, k))
            im = sig_im + rng.normal(0.0, noise_scale, (n, k))
        else:
            marginal = math.sqrt((1.0 + e) / 2.0)
            re = rng.normal(0.0, marginal, (n, k))
            im = rng.normal(0.0, marginal, (n, k))
        return np.concatenate([re, im], axis=1)
    if strategy.kind == "homodyne":
        if hypothesis == "correlated":
            sig = rng.normal(0.0, math.sqrt(e / 2.0), (n, 1))
            return math.sqrt(2.0) * sig + rng.normal(0.0, noise_scale, (n, k))
        return rng.normal(0.0, math.sqrt((1.0 + 2.0 * e) / 2.0), (n, k))
    # photon counting: click probabilities from the concentrated-beam model
    out = np.zeros((n, k), dtype=np.uint8)
    if e > 0.0:
        if hypothesis == "correlated":
            p_click = k * e / (1.0 + k * e)
            out[:, 0] = rng.random(n) < p_click
        else:
            p_click = e / (1.0 + e)
            out[:] = rng.random((n, k)) < p_click
    return out


def _llr_per_shot(strategy: Strategy, samples: np.ndarray) -> np.ndarray:
    """log(p_correlated / p_uncorrelated) per shot, in nats."""
    k, e = strategy.params.detectors, strategy.params.energy
    m = samples.shape[0]
    if e == 0.0:
        return np.zeros(m)
    if strategy.kind in ("heterodyne", "homodyne"):
        e_eff = e if strategy.kind == "heterodyne" else 2.0 * e
        inv = exchangeable_inverse(ExchangeableMatrix(k, 1.0 + e_eff, e_eff))
        log_det_ratio = k * math.log1p(e_eff) - math.log1p(k * e_eff)

        def quad_diff(t: np.ndarray) -> np.ndarray:
            sum_t = t.sum(axis=1)
            sum_t2 = (t**2).sum(axis=1)
            corr = (inv.diag - inv.offdiag) * sum_t2 + inv.offdiag * sum_t**2
            unc = sum_t2 / (1.0 + e_eff)
            return unc - corr

        if strategy.kind == "heterodyne":
            return quad_diff(samples[:, :k]) + quad_diff(samples[:, k:]) + log_det_ratio
        return quad_diff(samples) + 0.5 * log_det_ratio
    clicks = samples.astype(bool)
    first = clicks[:, 0]
    lr_click = math.log(k * (1.0 + e) / (1.0 + k * e))
    lr_silent = math.log((1.0 + e) / (1.0 + k * e))
    total = np.where(first, lr_click, lr_silent)
    if k > 1:
        rest = clicks[:, 1:].any(axis=1)
        total = total + np.where(rest, -np.inf, (k - 1) * math.log1p(e))
    return total


def log_likelihood_ratio(
    strategy: Strategy, block: np.ndarray, base: LogBase = LogBase.BITS
) -> float:
    """Summed log likelihood ratio of one block, correlated over uncorrelated.

    An empty block scores exactly 0.  A click pattern impossible under the
    correlated hypothesis scores -inf, which is a value, not an error.
    """
    block = np.asarray(block)
    if block.ndim != 2 or block.shape[1] != strategy.sample_width:
        raise UsageError(
            f"block shape {block.shape} does not match {strategy.kind} width "
            f"{strategy.sample_width}"
        )
    if block.shape[0] == 0:
        return 0.0
    return base.from_nats(float(_llr_per_shot(strategy, block).sum()))


def analytic_exponent(strategy: Strategy, base: LogBase = LogBase.BITS) -> float:
    """Closed-form exponent the harness is expected to approach."""
    if strategy.kind == "heterodyne":
        return heterodyne_exponent(strategy.params, base)
    if strategy.kind == "homodyne":
        return homodyne_exponent(strategy.params, base)
    return photon_counting_exponent(strategy.params, base)


def _wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    z = _Z95
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _block_llrs(strategy: Strategy, hypothesis: str, n: int, shots: int, seed) -> np.ndarray:
    samples = sample_block(strategy, hypothesis, n * shots, seed)
    per_shot = _llr_per_shot(strategy, samples)
    return per_shot.reshape(shots, n).sum(axis=1)


def estimate_exponent(
    strategy: Strategy,
    epsilon: float,
    n_grid,
    shots: int,
    seed: int,
    base: LogBase = LogBase.BITS,
) -> list[TestOutcome]:
    """Estimate the empirical type-II exponent at each block length.

    For each n: the threshold is the epsilon-quantile of the block LLR on a
    held-out correlated calibration stream (so the type-I rate is at most
    epsilon up to sampling noise), alpha_hat and beta_hat are then counted
    on fresh streams, and exponent_hat = -log(beta_hat)/n in the requested
    base.  When no type-II error is observed, beta_hat is 0, exponent_hat
    is inf, and the interval upper end is the rule-of-three bound 3/shots
    with the outcome marked censored.

    Streams are derived as SeedSequence(seed, spawn_key=(grid_index, role))
    with roles 0 calibration, 1 correlated evaluation, 2 uncorrelated
    evaluation.
    """
    if not (isinstance(epsilon, float) and 0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must be a float in (0, 1), got {epsilon!r}")
    if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1000:
        raise UsageError(f"shots must be an integer >= 1000, got {shots!r}")
    n_grid = list(n_grid)
    if not n_grid:
        raise UsageError("n_grid must not be empty")
    outcomes: list[TestOutcome] = []
    for i, n in enumerate(n_grid):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise DomainError(f"block lengths must be positive integers, got {n!r}")
        streams = [np.random.SeedSequence(entropy=seed, spawn_key=(i, role)) for role in range(3)]
        calibration = _block_llrs(strategy, "correlated", n, shots, streams[0])
        threshold = float(np.quantile(calibration, epsilon))
        corr_eval = _block_llrs(strategy, "correlated", n, shots, streams[1])
        unc_eval = _block_llrs(strategy, "uncorrelated", n, shots, streams[2])
        alpha_hat = float(np.mean(corr_eval < threshold))
        failures = int(np.count_nonzero(unc_eval >= threshold))
        beta_hat = failures / shots
        if failures == 0:
            outcomes.append(
                TestOutcome(
                    n=n, alpha_hat=alpha_hat, beta_hat=0.0, exponent_hat=math.inf,
                    trials=(shots, shots), ci_low=0.0, ci_high=3.0 / shots, censored=True,
                )
            )
            continue
        ci_low, ci_high = _wilson_interval(failures, shots)
        exponent = base.from_nats(-math.log(beta_hat) / n)
        outcomes.append(
            TestOutcome(
                n=n, alpha_hat=alpha_hat, beta_hat=beta_hat, exponent_hat=exponent,
                trials=(shots, shots), ci_low=ci_low, ci_high=ci_high, censored=False,
            )
        )
    return outcomes
