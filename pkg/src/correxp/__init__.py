"""Error exponents for detecting shared randomness in optical noise.

The package compares how fast the type-II error of the optimal test decays
when a weak common signal hides in thermal-looking noise across K
detectors, for four measurement strategies: the quantum-optimal
collective measurement, heterodyne, homodyne, and photon counting.
Closed forms live in `scalars`, `classical`, and `quantum`; truncated
number-basis constructions in `fock`; slow independent cross-checks in
`oracles`; the Monte Carlo harness in `simulate`; and the self-check
suite in `validate`.
"""

from .classical import (
    ExchangeableMatrix,
    exchangeable_det,
    exchangeable_inverse,
    gaussian_kl,
    heterodyne_covariance,
    heterodyne_exponent,
    homodyne_covariance,
    homodyne_exponent,
    taylor_coefficient,
)
from .errors import (
    CorrexpError,
    DomainError,
    NumericalInstabilityError,
    ResourceGuardError,
    SingularMatrixError,
    UsageError,
)
from .fock import (
    CoherentKet,
    CoherentTail,
    FockOperator,
    ThermalTail,
    coherent_ket,
    correlated_spectrum,
    correlated_state,
    dump_fock_operator,
    load_fock_operator,
    mean_photon_number,
    quantum_relative_entropy,
    tensor,
    thermal_state,
    truncation_tail_coherent,
    truncation_tail_thermal,
    von_neumann_entropy,
)
from .quantum import (
    build_quantum_cov,
    photon_counting_exponent,
    quantum_exponent,
    symplectic_eigenvalues,
    symplectic_form,
)
from .scalars import (
    EnergyParams,
    LogBase,
    bernoulli_product_kl,
    binary_kl,
    symplectic_mode_entropy,
    gordon_g,
    incomplete_gamma_lower,
    regularized_gamma_p,
)
from .simulate import (
    Strategy,
    TestOutcome,
    analytic_exponent,
    estimate_exponent,
    log_likelihood_ratio,
    sample_block,
)
from .validate import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CoherentKet",
    "CoherentTail",
    "CorrexpError",
    "DomainError",
    "EnergyParams",
    "ExchangeableMatrix",
    "FockOperator",
    "LogBase",
    "NumericalInstabilityError",
    "ResourceGuardError",
    "SingularMatrixError",
    "Strategy",
    "TestOutcome",
    "ThermalTail",
    "UsageError",
    "analytic_exponent",
    "bernoulli_product_kl",
    "binary_kl",
    "build_quantum_cov",
    "coherent_ket",
    "correlated_spectrum",
    "correlated_state",
    "dump_fock_operator",
    "estimate_exponent",
    "exchangeable_det",
    "exchangeable_inverse",
    "symplectic_mode_entropy",
    "gaussian_kl",
    "gordon_g",
    "heterodyne_covariance",
    "heterodyne_exponent",
    "homodyne_covariance",
    "homodyne_exponent",
    "incomplete_gamma_lower",
    "load_fock_operator",
    "log_likelihood_ratio",
    "mean_photon_number",
    "photon_counting_exponent",
    "quantum_exponent",
    "quantum_relative_entropy",
    "regularized_gamma_p",
    "run_checks",
    "sample_block",
    "symplectic_eigenvalues",
    "symplectic_form",
    "taylor_coefficient",
    "tensor",
    "thermal_state",
    "truncation_tail_coherent",
    "truncation_tail_thermal",
    "von_neumann_entropy",
]
