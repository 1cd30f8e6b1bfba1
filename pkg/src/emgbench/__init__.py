"""sEMG gesture recognition: preprocessing, three descriptor families,
a from-scratch classical classifier suite, and a benchmark harness."""

__version__ = "0.1.0"

from .signal_io import DatasetManifest, SignalRecord, generate_synthetic
from .preprocess import Window, WindowSet, bandpass, segment, segment_records
from .features import FeatureMatrix, TddParams, extract
from .evaluate import ConfusionMatrix, EvaluationReport, metrics, stratified_split

__all__ = [
    "ConfusionMatrix",
    "DatasetManifest",
    "EvaluationReport",
    "FeatureMatrix",
    "SignalRecord",
    "TddParams",
    "Window",
    "WindowSet",
    "bandpass",
    "extract",
    "generate_synthetic",
    "metrics",
    "segment",
    "segment_records",
    "stratified_split",
]
