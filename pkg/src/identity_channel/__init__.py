"""Solver, estimator and simulator for the two-type identity channel game."""

from .equilibrium import (
    AssumptionViolated,
    AugmentedParams,
    EquilibriumResult,
    IndeterminateParams,
    NoFeasibleEncoding,
    augmented_params,
    check_equivalence,
    closed_form_equilibrium,
    full_lp_oracle,
    lower_bound_check,
    reduced_lp_feasible,
)
from .estimator import (
    DEFAULT_SEARCH_BOUND,
    BelieveOracle,
    EstimationResult,
    GroundTruthOracle,
    InvalidResolution,
    RecordingOracle,
    ReplayOracle,
    estimate_k,
    strategy_from_estimates,
)
from .experiments import (
    Direction,
    NonBelievingReceiver,
    SweepAxis,
    SweepSpec,
    audit_monotonicity,
    expected_direction,
    monte_carlo_accuracy,
    run_sweep,
    write_simulation_csv,
    write_sweep_csv,
)
from .model import (
    PARAM_NAMES,
    ChannelOutcome,
    Group,
    IdentityProfile,
    Message,
    Population,
    ReceiverStrategy,
    SenderStrategy,
    SourcePrior,
    SourceState,
    population_from_params,
    population_params,
    quality,
    sample_play,
)
from .receiver import BeliefResiduals, belief_residuals, believes, best_response

__version__ = "0.1.0"
