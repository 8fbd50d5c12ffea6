"""Run the tracker over a full sequence (one-pass evaluation)."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import FusetrackError, SequenceError
from .features import ColorNamesTable
from .sequences import Sequence
from .tracker import Tracker, TrackerConfig


@dataclass
class Trajectory:
    name: str
    boxes: list
    peaks: np.ndarray    # (frames, 3): fused, template, histogram
    updated: list
    fps: float


def run_ope(seq: Sequence, config: TrackerConfig | None = None,
            cn_table: ColorNamesTable | None = None) -> Trajectory:
    """Initialize on frame 1's ground truth, track the rest, time the loop.

    FPS covers init-excluded tracking only: (frames - 1) / elapsed step time.
    """
    n = len(seq)
    if n < 2:
        raise SequenceError(f"{seq.name}: need at least 2 frames, got {n}")
    if not seq.gt:
        raise SequenceError(f"{seq.name}: no ground truth")

    tracker = Tracker(config, cn_table)
    try:
        tracker.init(seq.frame(0), seq.gt[0])
    except FusetrackError as e:
        raise type(e)(f"{seq.name}, frame 1: {e}") from None

    boxes = [tracker.box]
    peaks = [(0.0, 0.0, 0.0)]
    updated = [False]
    elapsed = 0.0
    for i in range(1, n):
        frame = seq.frame(i)
        t0 = time.perf_counter()
        try:
            res = tracker.step(frame)
        except FusetrackError as e:
            raise type(e)(f"{seq.name}, frame {i + 1}: {e}") from None
        elapsed += time.perf_counter() - t0
        boxes.append(res.box)
        peaks.append((res.peak_fused, res.peak_template, res.peak_hist))
        updated.append(res.updated)

    fps = (n - 1) / elapsed if elapsed > 0 else float("inf")
    return Trajectory(name=seq.name, boxes=boxes, peaks=np.array(peaks),
                      updated=updated, fps=fps)
