"""rimlab: a numerical laboratory for random intermittent interval maps.

Random i.i.d. compositions of LSV maps with maps whose right branch
attracts exponentially to 1/2 undergo a phase transition: a finite
absolutely continuous stationary measure exists iff the threshold
eta = sum_r p_r K_r^(-alpha_min) is below 1. This package computes the
thresholds, iterates the annealed transfer operator to the stationary
density, and cross-checks the structural claims (cone invariance, density
envelopes, return-time divergence) with independent estimators.
"""

__version__ = "0.1.0"

from .maps import (
    BranchPoint,
    ConvergenceError,
    Kind,
    MapDomainError,
    MapSpec,
    Side,
    eval_derivative,
    eval_map,
    left_inverse,
    right_inverse_attracting,
    right_inverse_lsv,
    xi,
)
from .system import (
    OrbitTrace,
    Phase,
    PhaseReport,
    RandomSystem,
    classify,
    eta,
    gamma,
    iterate_orbit,
    make_rng,
    random_orbit,
    sample_word,
    spawn_rngs,
)
from .transfer import (
    ConeParams,
    DensityGrid,
    GridMismatchError,
    PowerIterationResult,
    TransferOperator,
    apply_operator,
    apply_operator_at,
    auxiliary_monotone_checks,
    check_cone_C0,
    check_cone_C1,
    check_cone_C2,
    l1_distance,
    lipschitz_envelope_check,
    pole_slope,
    power_iterate,
    random_cone_member,
)
from .diagnostics import (
    ContinuityResult,
    Histogram,
    KacResult,
    KacSet,
    PreimageReport,
    UlamModel,
    build_ulam,
    continuity_experiment,
    kac_experiment,
    kac_set,
    orbit_histogram,
    preimage_bounds_check,
    preimage_sequence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
