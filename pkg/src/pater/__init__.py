"""Online passive-aggressive total-error-rate learners and benchmark tools."""

from .batch import BatchDesign, BatchTER, ter_closed_form
from .data import Dataset, load_delimited, load_libsvm, make_folds, zscore_apply, zscore_fit
from .evaluation import (
    BATCH_TER,
    DEFAULT_GRID,
    ConfusionMatrix,
    balanced_accuracy,
    cross_validate,
    evaluate_fold,
    sweep_weights,
)
from .learners import (
    ClassAggregates,
    ClassWeights,
    LearnerState,
    OnlineLearner,
    UpdateRecord,
    Variant,
    online_step,
    predict,
    run_stream,
)
from .stats import critical_difference, friedman_nemenyi, rank_table

__version__ = "0.1.0"
