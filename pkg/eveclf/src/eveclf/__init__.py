"""CNN eavesdropper for labeled IQ corpora.

Trains a small convolutional classifier on the binary datasets the
signal toolkit exports and reports how well (or how poorly, which is the
point of the security patterns) the transmitted class can be identified.
"""

from .evaluate import (
    Evaluation,
    evaluate,
    tally,
    wilson_interval,
    write_confusion_csv,
    write_curve_csv,
    write_per_class_csv,
)
from .model import PatternCnn, predict_labels, predict_proba, softmax
from .records import (
    RECORD_DTYPE,
    WINDOW,
    Corpus,
    blob_sha1,
    load_corpus,
    load_manifest,
    stratified_split,
)
from .training import EpochStats, TrainConfig, TrainResult, load_model, train

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "EpochStats",
    "Evaluation",
    "PatternCnn",
    "RECORD_DTYPE",
    "TrainConfig",
    "TrainResult",
    "WINDOW",
    "blob_sha1",
    "evaluate",
    "load_corpus",
    "load_manifest",
    "load_model",
    "predict_labels",
    "predict_proba",
    "softmax",
    "stratified_split",
    "tally",
    "train",
    "wilson_interval",
    "write_confusion_csv",
    "write_curve_csv",
    "write_per_class_csv",
]
