"""Photon-number statistics, the effective g2 and single-photon projection bounds."""

from .bounds import (
    BoundsReport,
    classical_state_bounds,
    effective_purity_bound,
    full_report,
    invert_one_n,
    invert_two_component,
    multiphoton_upper_bound,
    p_absolute_bounds,
    qn_upper_bound_meanlimit,
    qn_upper_bound_refined,
    qn_upper_bound_with_vacuum,
    ratio_lower_bound,
    ratio_lower_bound_approx,
    ratio_lower_bound_with_q,
    required_g2_for_ratio,
)
from .correlations import (
    CorrelationSummary,
    MixtureComponent,
    effective_g2,
    g2,
    mean_photon_number,
    mixture_g2,
    mixture_g2_max,
    mixture_g2_slope,
    second_factorial_moment,
    smpp_exact,
    summarize,
)
from .errors import (
    CapacityError,
    DomainError,
    EstimationError,
    InfeasibleError,
    MalformedInputError,
    NumericUnderflowError,
    PhotonStatsError,
)
from .fockspace import (
    PhotonNumberDistribution,
    add_vacuum,
    make_coherent,
    make_fock,
    make_one_n,
    make_thermal,
    make_two_component,
    mix,
)

__version__ = "0.1.0"
