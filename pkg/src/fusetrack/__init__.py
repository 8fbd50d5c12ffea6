"""fusetrack: multi-model visual tracking with entropy-based response fusion.

Core layout:
    geometry, image      boxes, IoU, bilinear resampling, frame codecs
    features             grayscale / gradient-histogram / color-name features
    dcf                  Fourier-domain correlation filters
    histmodel            color-histogram foreground model
    fusion               response normalization and fusion
    scalefilter          1-D multi-scale size estimation
    tracker              the full tracker with gated model updates
    synth, sequences     synthetic data and benchmark sequence I/O
    metrics, runner      precision/success curves and one-pass evaluation
    service, cli         HTTP service and its thin command-line client
"""

__version__ = "0.1.0"

from .errors import (ConfigError, FusetrackError, InvalidInputError, InvalidRegionError,
                     SequenceError, SynthSpecError, TableLoadError)
from .geometry import BoundingBox, rect_iou
from .tracker import FrameResult, Tracker, TrackerConfig, parse_config

__all__ = [
    "BoundingBox", "rect_iou", "Tracker", "TrackerConfig", "FrameResult", "parse_config",
    "FusetrackError", "InvalidInputError", "InvalidRegionError", "ConfigError",
    "TableLoadError", "SequenceError", "SynthSpecError", "__version__",
]
