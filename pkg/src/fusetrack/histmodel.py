"""Color-histogram foreground/background model.

Foreground and background histograms over quantized RGB bins yield a per-bin
discriminative weight fg / (fg + bg); looking those weights up per pixel gives
a likelihood map, and averaging it over candidate object windows (via an
integral image) scores every object position in the patch at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .features import bin_index_map
from .geometry import BoundingBox


@dataclass(frozen=True)
class HistogramModel:
    fg: np.ndarray
    bg: np.ndarray
    weights: np.ndarray
    bins: int


def _center_mask(h: int, w: int, box: BoundingBox) -> np.ndarray:
    """True where the pixel center falls inside the (continuous) box."""
    ys = np.arange(h) + 0.5
    xs = np.arange(w) + 0.5
    rows = (ys >= box.y) & (ys < box.y2)
    cols = (xs >= box.x) & (xs < box.x2)
    return rows[:, None] & cols[None, :]


def learn_hist(
    patch: np.ndarray,
    fg_box: BoundingBox,
    shrink: float = 0.85,
    bins: int = 32,
) -> tuple[np.ndarray, np.ndarray]:
    """Histograms of the shrunken foreground box and of everything outside the full box.

    The foreground box is scaled by `shrink` about its center before counting,
    which keeps mixed border pixels out of the object histogram. Background
    pixels are those outside the unshrunken box. Each histogram is normalized
    to sum 1; an empty background stays all-zero.
    """
    patch = np.asarray(patch, dtype=np.float64)
    if patch.ndim != 3:
        raise InvalidInputError("histogram model needs an RGB patch")
    if not 0.0 < shrink <= 1.0:
        raise InvalidInputError(f"shrink factor out of (0,1]: {shrink}")
    h, w = patch.shape[:2]
    if fg_box.x < 0 or fg_box.y < 0 or fg_box.x2 > w or fg_box.y2 > h:
        raise InvalidInputError(f"foreground box {fg_box} exceeds patch {h}x{w}")

    cx, cy = fg_box.center
    inner = BoundingBox(cx - fg_box.w * shrink / 2, cy - fg_box.h * shrink / 2,
                        fg_box.w * shrink, fg_box.h * shrink)
    idx = bin_index_map(patch, bins)
    total = bins**3

    fg_mask = _center_mask(h, w, inner)
    if not fg_mask.any():
        raise InvalidInputError("foreground box contains no pixel centers after shrinking")
    bg_mask = ~_center_mask(h, w, fg_box)

    fg = np.bincount(idx[fg_mask], minlength=total).astype(np.float64)
    fg /= fg.sum()
    bg = np.bincount(idx[bg_mask], minlength=total).astype(np.float64)
    s = bg.sum()
    if s > 0:
        bg /= s
    return fg, bg


def hist_weights(fg: np.ndarray, bg: np.ndarray) -> np.ndarray:
    """Per-bin foreground evidence fg/(fg+bg); bins unseen in both get 0."""
    fg = np.asarray(fg, dtype=np.float64)
    bg = np.asarray(bg, dtype=np.float64)
    if fg.shape != bg.shape:
        raise InvalidInputError(f"histogram shapes differ: {fg.shape} vs {bg.shape}")
    total = fg + bg
    out = np.zeros_like(fg)
    seen = total > 0
    out[seen] = fg[seen] / total[seen]
    return out


def likelihood_map(patch: np.ndarray, weights: np.ndarray, bins: int = 32) -> np.ndarray:
    """Per-pixel foreground weight looked up from the pixel's color bin."""
    idx = bin_index_map(patch, bins)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (bins**3,):
        raise InvalidInputError(f"weights must have {bins ** 3} entries, got {weights.shape}")
    return weights[idx]


def integral_image(grid: np.ndarray) -> np.ndarray:
    """Cumulative sum table with a zero top row and left column.

    I[i, j] holds the sum of grid[:i, :j], so any rectangle sum is four
    lookups: I[b,r] - I[t,r] - I[b,l] + I[t,l].
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2:
        raise InvalidInputError(f"expected 2-D grid, got shape {grid.shape}")
    out = np.zeros((grid.shape[0] + 1, grid.shape[1] + 1), dtype=np.float64)
    np.cumsum(np.cumsum(grid, axis=0), axis=1, out=out[1:, 1:])
    return out


def box_response(likelihood: np.ndarray, box_h: int, box_w: int) -> np.ndarray:
    """Mean likelihood inside a box_h x box_w window centered at every pixel.

    Windows are clipped at the edges and normalized by their clipped area, so
    border scores are comparable to interior ones. For even sizes the window
    extends one pixel further down/right, matching the pixel centers covered
    by a box of that size centered on the pixel.
    """
    likelihood = np.asarray(likelihood, dtype=np.float64)
    if likelihood.ndim != 2:
        raise InvalidInputError(f"expected 2-D likelihood, got shape {likelihood.shape}")
    rows, cols = likelihood.shape
    if not (1 <= box_h <= rows and 1 <= box_w <= cols):
        raise InvalidInputError(f"window {box_h}x{box_w} does not fit map {rows}x{cols}")

    ii = integral_image(likelihood)
    top = np.clip(np.arange(rows) - (box_h - 1) // 2, 0, rows)
    bot = np.clip(np.arange(rows) - (box_h - 1) // 2 + box_h, 0, rows)
    left = np.clip(np.arange(cols) - (box_w - 1) // 2, 0, cols)
    right = np.clip(np.arange(cols) - (box_w - 1) // 2 + box_w, 0, cols)

    sums = (ii[np.ix_(bot, right)] - ii[np.ix_(top, right)]
            - ii[np.ix_(bot, left)] + ii[np.ix_(top, left)])
    area = np.outer(bot - top, right - left)
    return sums / area


def lerp_hist(old: np.ndarray, new: np.ndarray, eta: float) -> np.ndarray:
    """Running-average histogram update."""
    if old.shape != new.shape:
        raise InvalidInputError("cannot blend histograms of different shapes")
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"learning rate out of [0,1]: {eta}")
    return (1.0 - eta) * old + eta * new
