"""One-pass-evaluation metrics: precision and success curves.

Precision: fraction of frames whose center error is <= threshold, over 51
thresholds 0..50 px (inclusive comparison). Success: fraction of frames whose
overlap is strictly greater than the threshold, over 21 thresholds 0..1 in
steps of 0.05; the area under it is the plain mean of the 21 values.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .geometry import rect_iou

PRECISION_THRESHOLDS = np.arange(51, dtype=np.float64)
SUCCESS_THRESHOLDS = np.arange(21, dtype=np.float64) * 0.05
PRECISION_AT = 20


def _check_pair(traj, gt):
    if len(traj) != len(gt) or len(traj) == 0:
        raise InvalidInputError(f"trajectory/ground-truth length mismatch: {len(traj)} vs {len(gt)}")


def center_errors(traj, gt) -> np.ndarray:
    _check_pair(traj, gt)
    out = np.empty(len(traj))
    for i, (a, b) in enumerate(zip(traj, gt)):
        (ax, ay), (bx, by) = a.center, b.center
        out[i] = np.hypot(ax - bx, ay - by)
    return out


def iou_series(traj, gt) -> np.ndarray:
    _check_pair(traj, gt)
    return np.array([rect_iou(a, b) for a, b in zip(traj, gt)])


def precision_curve(traj, gt) -> tuple[np.ndarray, float]:
    """51 values over thresholds 0..50 px, plus the value at 20 px."""
    err = center_errors(traj, gt)
    values = (err[None, :] <= PRECISION_THRESHOLDS[:, None]).mean(axis=1)
    return values, float(values[PRECISION_AT])


def success_curve(traj, gt) -> tuple[np.ndarray, float]:
    """21 values over overlap thresholds 0..1, plus their mean (the AUC)."""
    iou = iou_series(traj, gt)
    values = (iou[None, :] > SUCCESS_THRESHOLDS[:, None]).mean(axis=1)
    return values, float(values.mean())
