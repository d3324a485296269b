"""DTW-Merge time-series augmentation with a 1NN-DTW evaluation harness."""

from .dtw import DtwResult, WarpingPath, dtw, dtw_banded, dtw_distance, oracle_dtw
from .evaluation import (
    ComparisonSummary,
    EvaluationReport,
    accuracy,
    compare_runs,
    mpce,
    nn1_dtw_classify,
    paired_t_test,
    pce,
)
from .merge import (
    AugmentationConfig,
    Pairing,
    SplitSample,
    augment_dataset,
    dtw_merge,
    sample_split_index,
    smooth_junction,
)
from .series import (
    LabeledDataset,
    Split,
    TimeSeries,
    equalize_lengths,
    is_z_normalized,
    mean_length,
    z_normalize,
)
from .ucr import DatasetPair, load_ucr_split, summarize, write_ucr

__version__ = "0.1.0"
