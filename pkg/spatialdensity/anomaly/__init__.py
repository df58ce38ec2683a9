from .injection import (
    bootstrap_background,
    global_reference,
    inject_anomaly,
    train_test_split,
)
from .ks import KsResult, ks_one_sample, ks_two_sample
from .roc import (
    DetectionRun,
    References,
    RocCurve,
    empirical_null,
    fpr_at,
    roc_curve,
    run_detection,
    threshold_for_fpr,
)

__all__ = [
    "DetectionRun",
    "KsResult",
    "References",
    "RocCurve",
    "bootstrap_background",
    "empirical_null",
    "fpr_at",
    "global_reference",
    "inject_anomaly",
    "ks_one_sample",
    "ks_two_sample",
    "roc_curve",
    "run_detection",
    "threshold_for_fpr",
    "train_test_split",
]
