"""Change-point detection for piecewise-constant means with CV order selection.

The estimator fits segment means by least squares for every candidate
number of changes and picks the count minimizing a cross-validation
criterion computed on interleaved subsamples.
"""

from .criteria import (
    TWO_FOLD_METHODS,
    CriterionCurve,
    cv1,
    cv2,
    cvmod,
    select_k,
    two_fold_curves,
    vfold_criterion,
)
from .errors import (
    AdjacentLevelsEqual,
    AllInfeasible,
    BadChangePoints,
    BadFoldCount,
    BadGrid,
    BadParams,
    CpcvError,
    InconsistentScales,
    IndexOutOfRange,
    LengthMismatch,
    LInfeasible,
    LMaxTooLarge,
    OddLength,
    SeriesTooShort,
    TooLargeForOracle,
)
from .folds import FoldPlan, drop_to_even, make_fold_plan, remap_changepoints
from .pipeline import (
    METHOD_KINDS,
    FitResult,
    MethodSpec,
    evaluate_methods,
    mise,
    parse_method,
    run_estimator,
)
from .segmentation import (
    SegmentationResult,
    SegmentCostTable,
    brute_force_partition,
    build_cost_table,
    optimal_partition,
    segment_means,
)
from .signal import (
    ChangePointSet,
    PiecewiseSignal,
    Series,
    evaluate_mean,
    make_signal,
    mean_matrix,
    read_series_csv,
)
from .simulate import (
    NOISE_KINDS,
    NoiseModel,
    Scenario,
    SimulationReport,
    blocks_signal,
    generate,
    get_scenario,
    replication_seed,
    run_simulation,
    scenario_bump,
    scenario_catalog,
    scenario_overestimation,
    scenario_underestimation,
    spike_signal,
    with_seed,
    write_report_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # containers
    "ChangePointSet",
    "PiecewiseSignal",
    "Series",
    "CriterionCurve",
    "FoldPlan",
    "FitResult",
    "MethodSpec",
    "SegmentationResult",
    "SegmentCostTable",
    # signal tools
    "evaluate_mean",
    "make_signal",
    "mean_matrix",
    "read_series_csv",
    # solvers
    "build_cost_table",
    "segment_means",
    "optimal_partition",
    "brute_force_partition",
    # folds
    "drop_to_even",
    "make_fold_plan",
    "remap_changepoints",
    # criteria and selection
    "TWO_FOLD_METHODS",
    "cv1",
    "cv2",
    "cvmod",
    "two_fold_curves",
    "vfold_criterion",
    "select_k",
    # end-to-end
    "METHOD_KINDS",
    "parse_method",
    "run_estimator",
    "evaluate_methods",
    "mise",
    # simulation
    "NOISE_KINDS",
    "NoiseModel",
    "Scenario",
    "SimulationReport",
    "blocks_signal",
    "spike_signal",
    "scenario_underestimation",
    "scenario_overestimation",
    "scenario_bump",
    "scenario_catalog",
    "get_scenario",
    "with_seed",
    "generate",
    "replication_seed",
    "run_simulation",
    "write_report_csv",
    # errors
    "CpcvError",
    "AdjacentLevelsEqual",
    "AllInfeasible",
    "BadChangePoints",
    "BadFoldCount",
    "BadGrid",
    "BadParams",
    "InconsistentScales",
    "IndexOutOfRange",
    "LengthMismatch",
    "LInfeasible",
    "LMaxTooLarge",
    "OddLength",
    "SeriesTooShort",
    "TooLargeForOracle",
]
