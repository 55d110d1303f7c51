"""Expected maximum of the random assignment process.

Exact and greedy assignment, tail quantile functions of the standard entry
laws, leading-order predictions ``n g(1/n)``, and a seeded Monte Carlo engine.
"""
from .asymptotics import (
    AssumptionError,
    PredictionRecord,
    exact_iid_max_mean,
    harmonic,
    mezard_parisi_expansion,
    parisi_sum,
    predict,
)
from .distributions import (
    DistributionError,
    DistributionSpec,
    Kind,
    QuantileValue,
    RandomStream,
    asymptotic_tail_quantile,
    erfcinv,
    sample,
    sample_array,
    tail_probability,
    tail_quantile,
)
from .greedy import GreedyTrace, greedy_assign, row_max_sum
from .montecarlo import (
    ConfigError,
    ConvergenceRow,
    ExperimentConfig,
    McEstimate,
    SandwichViolation,
    Statistic,
    convergence_scan,
    replicate_values,
    run,
    run_paired,
)
from .solver import AssignmentResult, MatrixError, Sense, brute_force, evaluate, solve

__version__ = "0.1.0"
