"""Fermionic negativity of free-fermion states and its expansion in connected
charge correlators.

Exact Gaussian negativities come from :mod:`chargeneg.negativity`, charge
cumulants from :mod:`chargeneg.cumulants`, exact expansion coefficients from
:mod:`chargeneg.expansion` and brute-force references from
:mod:`chargeneg.oracle`.
"""

from .cumulants import CumulantSet, generating_function_cumulant, trace_cumulants
from .errors import ChargeNegError, InvalidArgumentError, NumericalFailureError, ResourceLimitError
from .expansion import (
    ExpansionCoefficients,
    entropy_coefficients,
    evaluate_expansion,
    negativity_coefficients,
    negativity_coefficients_replica_limit,
)
from .gaussian import CorrelationMatrix, blocks, ground_state_correlations, thermal_correlations
from .harness import (
    ScalingConfig,
    SweepConfig,
    convergence_sweep,
    emit,
    scaling_adjacent,
    scaling_distant,
)
from .model import HoppingMatrix, RegionPartition, build_hamiltonian, make_partition
from .negativity import exact_entropies, log_negativity, renyi_negativity
from .rational import Polynomial, RationalFunction

__version__ = "0.1.0"

__all__ = [
    "ChargeNegError",
    "CorrelationMatrix",
    "CumulantSet",
    "ExpansionCoefficients",
    "HoppingMatrix",
    "InvalidArgumentError",
    "NumericalFailureError",
    "Polynomial",
    "RationalFunction",
    "RegionPartition",
    "ResourceLimitError",
    "ScalingConfig",
    "SweepConfig",
    "blocks",
    "build_hamiltonian",
    "convergence_sweep",
    "emit",
    "entropy_coefficients",
    "evaluate_expansion",
    "exact_entropies",
    "generating_function_cumulant",
    "ground_state_correlations",
    "log_negativity",
    "make_partition",
    "negativity_coefficients",
    "negativity_coefficients_replica_limit",
    "renyi_negativity",
    "scaling_adjacent",
    "scaling_distant",
    "thermal_correlations",
    "trace_cumulants",
]
