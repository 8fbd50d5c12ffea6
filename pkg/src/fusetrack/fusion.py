"""Response normalization and multi-model fusion.

Each model's dense response is shifted/scaled into a probability map; the
fused map is the weighted mean of the per-model maps, which minimizes the
summed relative entropy sum_l KL(p_l || q) over probability maps q (uniform
weights give the exact minimizer; weights generalize it to a weighted mean).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .image import resample_grid

PROB_EPS = 1e-12


def to_prob(response: np.ndarray, eps: float = PROB_EPS) -> np.ndarray:
    """Shift a response to be strictly positive and scale it to sum 1.

    The shift-and-scale is affine with positive gain, so the argmax (and any
    ties) of the input survive exactly.
    """
    response = np.asarray(response, dtype=np.float64)
    if response.ndim != 2 or response.size == 0:
        raise InvalidInputError(f"expected non-empty 2-D response, got shape {response.shape}")
    if not np.all(np.isfinite(response)):
        raise InvalidInputError("response contains non-finite values")
    shifted = response - response.min() + eps
    return shifted / shifted.sum()


def kl_div(p: np.ndarray, q: np.ndarray) -> float:
    """Relative entropy sum p*log(p/q) in nats, with 0*log(0) = 0."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise InvalidInputError(f"shape mismatch: {p.shape} vs {q.shape}")
    mask = p > 0
    with np.errstate(divide="ignore"):
        terms = p[mask] * np.log(p[mask] / q[mask])
    return float(terms.sum())


def fuse(maps: list[np.ndarray], weights=None) -> np.ndarray:
    """Weighted mean of probability maps of identical shape (default uniform)."""
    if len(maps) == 0:
        raise InvalidInputError("need at least one probability map")
    shape = maps[0].shape
    for m in maps[1:]:
        if m.shape != shape:
            raise InvalidInputError(f"map shapes differ: {m.shape} vs {shape}")
    stack = np.stack([np.asarray(m, dtype=np.float64) for m in maps])
    if weights is None:
        return stack.mean(axis=0)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(maps),):
        raise InvalidInputError(f"need one weight per map, got {weights.shape} for {len(maps)}")
    if np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidInputError("weights must be nonnegative with positive sum")
    weights = weights / weights.sum()
    return np.tensordot(weights, stack, axes=1)


def peak(grid: np.ndarray) -> tuple[int, int]:
    """Location of the maximum; ties break to the smallest row, then column."""
    grid = np.asarray(grid)
    if grid.ndim != 2 or grid.size == 0:
        raise InvalidInputError(f"expected non-empty 2-D grid, got shape {grid.shape}")
    r, c = np.unravel_index(int(np.argmax(grid)), grid.shape)
    return int(r), int(c)


def resample_prob(p: np.ndarray, out_rows: int, out_cols: int) -> np.ndarray:
    """Bilinearly resize a probability map and renormalize it to sum 1.

    Interpolation keeps values positive but not the unit sum; the rescale is
    positive so peak locations are unaffected.
    """
    g = resample_grid(p, out_rows, out_cols)
    return g / g.sum()
