"""Support points: n-point compactions of a distribution by energy-distance minimization."""

from ._backend import available_backends, backend_name
from .dist import (DistributionSpec, Marginal, SampleBatch, Standardizer, borehole_spec,
                   fit_standardizer, load_samples, sample, write_points)
from .energy import (EnergyValue, energy_1d_vs_cdf, energy_statistic, full_energy_distance,
                     pairwise_distance_sum)
from .exceptions import (DegenerateDimensionError, InvalidInputError, NumericError,
                         ParseError, SingularityError)
from .solver import (SolverConfig, SolverReport, Termination, ccp_map, ccp_maps,
                     check_pairwise_distinct, majorizer_hq, sp_ccp, sp_sccp)

__version__ = "0.1.0"

__all__ = [
    "available_backends", "backend_name",
    "DistributionSpec", "Marginal", "SampleBatch", "Standardizer", "borehole_spec",
    "fit_standardizer", "load_samples", "sample", "write_points",
    "EnergyValue", "energy_1d_vs_cdf", "energy_statistic", "full_energy_distance",
    "pairwise_distance_sum",
    "DegenerateDimensionError", "InvalidInputError", "NumericError", "ParseError",
    "SingularityError",
    "SolverConfig", "SolverReport", "Termination", "ccp_map", "ccp_maps",
    "check_pairwise_distinct", "majorizer_hq", "sp_ccp", "sp_sccp",
]
