"""Feature extraction for the template models.

All extractors take a float image patch in [0, 1] and return an (rows, cols,
channels) cell-grid feature map, where rows = patch_h // cell (truncating).
The cosine window is NOT applied here; the tracker applies it just before the
Fourier transforms so raw features stay inspectable.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError, TableLoadError
from .image import luminance

HOG_BINS = 9
HOG_EPS = 1e-2

# Prototype RGB anchors used to synthesize a color-names table when no learned
# table file is supplied. Channel order is fixed and alphabetical.
CN_PROTOTYPES = (
    ("black", (0.0, 0.0, 0.0)),
    ("blue", (0.0, 0.0, 1.0)),
    ("brown", (0.5, 0.4, 0.25)),
    ("grey", (0.5, 0.5, 0.5)),
    ("green", (0.0, 1.0, 0.0)),
    ("orange", (1.0, 0.8, 0.0)),
    ("pink", (1.0, 0.5, 1.0)),
    ("purple", (1.0, 0.0, 1.0)),
    ("red", (1.0, 0.0, 0.0)),
    ("white", (1.0, 1.0, 1.0)),
    ("yellow", (1.0, 1.0, 0.0)),
)
CN_CHANNELS = len(CN_PROTOTYPES)
CN_PROTO_SIGMA = 0.15


def hann2d(rows: int, cols: int) -> np.ndarray:
    """Separable Hann window; degenerate axes give the all-ones factor."""
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"window size must be positive, got {rows}x{cols}")
    return np.outer(np.hanning(rows), np.hanning(cols))


def _check_patch(patch: np.ndarray) -> np.ndarray:
    patch = np.asarray(patch, dtype=np.float64)
    if patch.ndim == 3 and patch.shape[2] != 3:
        raise InvalidInputError(f"expected 3 channels, got shape {patch.shape}")
    if patch.ndim not in (2, 3):
        raise InvalidInputError(f"expected 2-D or 3-D patch, got shape {patch.shape}")
    return patch


def _pool(a: np.ndarray, cell: int, reduce: str) -> np.ndarray:
    """Aggregate non-overlapping cell x cell blocks; trailing remainder rows/cols drop."""
    if cell < 1:
        raise InvalidInputError(f"cell size must be positive, got {cell}")
    r, c = a.shape[0] // cell, a.shape[1] // cell
    if r < 1 or c < 1:
        raise InvalidInputError(f"patch {a.shape[:2]} smaller than one {cell}x{cell} cell")
    a = a[: r * cell, : c * cell]
    if a.ndim == 2:
        blocks = a.reshape(r, cell, c, cell)
    else:
        blocks = a.reshape(r, cell, c, cell, a.shape[2])
    return blocks.mean(axis=(1, 3)) if reduce == "mean" else blocks.sum(axis=(1, 3))


def extract_gray(patch: np.ndarray, cell: int = 4) -> np.ndarray:
    """Cell-averaged luminance shifted to zero mean range: values in [-0.5, 0.5]."""
    patch = _check_patch(patch)
    pooled = _pool(luminance(patch), cell, "mean") - 0.5
    return pooled[:, :, None]


def hog_stack(lum_stack: np.ndarray, cell: int = 4, bins: int = HOG_BINS) -> np.ndarray:
    """Gradient-orientation histograms for a (B, H, W) stack of luminance patches.

    Gradients use centered [-1, 0, 1] taps with replicated edges. Orientations
    in [0, pi) are soft-assigned to the two nearest of `bins` evenly spaced
    bins (wrapping), weighted by gradient magnitude, accumulated over
    cell x cell blocks, and each cell histogram h is scaled by
    1/sqrt(|h|^2 + eps^2). Returns (B, rows, cols, bins).
    """
    lum_stack = np.asarray(lum_stack, dtype=np.float64)
    b, h, w = lum_stack.shape
    if h < 2 or w < 2:
        raise InvalidInputError(f"patch too small for gradients: {(h, w)}")
    rows, cols = h // cell, w // cell
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"patch {(h, w)} smaller than one {cell}x{cell} cell")

    pad = np.pad(lum_stack, ((0, 0), (1, 1), (1, 1)), mode="edge")
    gx = pad[:, 1:-1, 2:] - pad[:, 1:-1, :-2]
    gy = pad[:, 2:, 1:-1] - pad[:, :-2, 1:-1]
    mag = np.hypot(gx, gy)
    ori = np.mod(np.arctan2(gy, gx), np.pi)  # unsigned: [0, pi)

    t = ori * (bins / np.pi)
    k0 = np.minimum(t.astype(np.int64), bins - 1)
    w1 = t - k0
    k1 = (k0 + 1) % bins

    # scatter the two weighted votes per pixel into per-cell histograms
    hp, wp = rows * cell, cols * cell
    cell_row = np.arange(hp) // cell
    cell_col = np.arange(wp) // cell
    base = ((np.arange(b)[:, None, None] * rows + cell_row[None, :, None]) * cols
            + cell_col[None, None, :]) * bins
    sl = (slice(None), slice(None, hp), slice(None, wp))
    total = b * rows * cols * bins
    hist = np.bincount((base + k0[sl]).ravel(),
                       weights=(mag[sl] * (1.0 - w1[sl])).ravel(), minlength=total)
    hist += np.bincount((base + k1[sl]).ravel(),
                        weights=(mag[sl] * w1[sl]).ravel(), minlength=total)
    hist = hist.reshape(b, rows, cols, bins)
    norm = np.sqrt(np.sum(hist * hist, axis=3) + HOG_EPS * HOG_EPS)
    return hist / norm[..., None]


def extract_hog(patch: np.ndarray, cell: int = 4, bins: int = HOG_BINS) -> np.ndarray:
    """HOG feature map for one patch; see hog_stack for the conventions."""
    patch = _check_patch(patch)
    return hog_stack(luminance(patch)[None], cell, bins)[0]


def color_bin_index(r: int, g: int, b: int) -> int:
    """Bin index of an 8-bit RGB triple under 32 bins per channel."""
    for v in (r, g, b):
        if not 0 <= v <= 255:
            raise InvalidInputError(f"8-bit channel out of range: {(r, g, b)}")
    return (r // 8) + 32 * (g // 8) + 1024 * (b // 8)


def bin_index_map(patch: np.ndarray, bins: int = 32) -> np.ndarray:
    """Per-pixel quantized-color bin index for a float RGB patch."""
    patch = _check_patch(patch)
    if patch.ndim != 3:
        raise InvalidInputError("color bin index needs an RGB patch")
    if bins < 2 or 256 % bins != 0:
        raise InvalidInputError(f"bins must divide 256, got {bins}")
    step = 256 // bins
    q = np.clip(np.floor(patch * 255.0), 0, 255).astype(np.int64) // step
    return q[:, :, 0] + bins * q[:, :, 1] + bins * bins * q[:, :, 2]


class ColorNamesTable:
    """Lookup table mapping each of 32^3 quantized RGB bins to color-name probabilities.

    `probs` has shape (32768, 11); every row is a distribution over the
    channels of CN_PROTOTYPES.
    """

    ROWS = 32 * 32 * 32

    def __init__(self, probs: np.ndarray):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (self.ROWS, CN_CHANNELS):
            raise TableLoadError(f"table must be {self.ROWS}x{CN_CHANNELS}, got {probs.shape}")
        if np.any(probs < 0):
            raise TableLoadError("table has negative entries")
        if np.max(np.abs(probs.sum(axis=1) - 1.0)) > 1e-4:
            raise TableLoadError("table rows must sum to 1 within 1e-4")
        self.probs = probs

    @classmethod
    def load_text(cls, text: str) -> "ColorNamesTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != cls.ROWS:
            raise TableLoadError(f"expected {cls.ROWS} table rows, got {len(lines)}")
        rows = np.empty((cls.ROWS, CN_CHANNELS), dtype=np.float64)
        for i, ln in enumerate(lines):
            parts = ln.split()
            if len(parts) != CN_CHANNELS:
                raise TableLoadError(f"table line {i + 1}: expected {CN_CHANNELS} values, got {len(parts)}")
            try:
                rows[i] = [float(p) for p in parts]
            except ValueError:
                raise TableLoadError(f"table line {i + 1}: non-numeric value") from None
        return cls(rows)

    @classmethod
    def load(cls, path) -> "ColorNamesTable":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise TableLoadError(f"cannot read table {path}: {e}") from None
        return cls.load_text(text)

    @classmethod
    def fallback(cls) -> "ColorNamesTable":
        """Synthesize a table from the RGB prototypes with a Gaussian kernel."""
        idx = np.arange(cls.ROWS)
        # center of each 8-wide quantization cell, on the [0, 1] scale
        centers = (np.stack([idx % 32, (idx // 32) % 32, idx // 1024], axis=1) * 8 + 3.5) / 255.0
        protos = np.array([rgb for _, rgb in CN_PROTOTYPES])
        d2 = ((centers[:, None, :] - protos[None, :, :]) ** 2).sum(axis=2)
        probs = np.exp(-d2 / (2.0 * CN_PROTO_SIGMA**2))
        return cls(probs / probs.sum(axis=1, keepdims=True))

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.probs:
                fh.write(" ".join(f"{v:.10g}" for v in row) + "\n")


def extract_cn(patch: np.ndarray, table: ColorNamesTable, cell: int = 4) -> np.ndarray:
    """Cell-averaged color-name probabilities; needs an RGB patch."""
    idx = bin_index_map(patch)
    return _pool(table.probs[idx], cell, "mean")
