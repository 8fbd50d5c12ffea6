"""One-dimensional correlation filter over a pyramid of scaled crops.

Each candidate scale contributes one feature column: the frame is cropped at
that scale around the target center, resampled to a fixed small patch, and
described by grayscale gradient-histogram features. A 1-D filter trained
against a Gaussian peaked at the current scale scores all candidates at once;
the argmax picks the relative size change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .features import hog_stack
from .image import luminance


def scale_factors(count: int = 33, step: float = 1.02) -> np.ndarray:
    """Geometric ladder step**n for n in [-(count-1)//2, count//2]; center is 1.0."""
    if count < 1 or count % 2 == 0:
        raise InvalidInputError(f"scale count must be odd and positive, got {count}")
    if step <= 1.0:
        raise InvalidInputError(f"scale step must exceed 1, got {step}")
    n = np.arange(count) - (count - 1) // 2
    return step**n.astype(np.float64)


def scale_window(count: int) -> np.ndarray:
    return np.hanning(count)


def _crop_stack(lum: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Clamped bilinear gather of per-scale sampling grids: (S, P) x (S, P) -> (S, P, P)."""
    h, w = lum.shape
    y0 = np.floor(ys)
    ty = (ys - y0)[:, :, None]
    y0 = y0.astype(np.int64)
    y1 = np.clip(y0 + 1, 0, h - 1)
    y0 = np.clip(y0, 0, h - 1)
    x0 = np.floor(xs)
    tx = (xs - x0)[:, None, :]
    x0 = x0.astype(np.int64)
    x1 = np.clip(x0 + 1, 0, w - 1)
    x0 = np.clip(x0, 0, w - 1)
    r0 = y0[:, :, None]
    r1 = y1[:, :, None]
    c0 = x0[:, None, :]
    c1 = x1[:, None, :]
    top = lum[r0, c0] + tx * (lum[r0, c1] - lum[r0, c0])
    bot = lum[r1, c0] + tx * (lum[r1, c1] - lum[r1, c0])
    return np.clip(top + ty * (bot - top), 0.0, 1.0)


def build_scale_samples(
    img: np.ndarray,
    center: tuple[float, float],
    base_w: float,
    base_h: float,
    factors: np.ndarray,
    window: np.ndarray,
    patch: int = 32,
    cell: int = 4,
) -> np.ndarray:
    """Feature matrix (D, S): one windowed feature column per scale factor.

    Equivalent to crop_resize + extract_hog + column-major flatten per scale,
    but all scales are cropped and described in one batch.
    """
    if base_w < 2 or base_h < 2:
        raise InvalidInputError(f"base size too small for the scale pyramid: {base_w}x{base_h}")
    factors = np.asarray(factors, dtype=np.float64)
    window = np.asarray(window, dtype=np.float64)
    if len(factors) != len(window):
        raise InvalidInputError("factors and window lengths differ")
    if factors.min() * min(base_w, base_h) < 1.0:
        raise InvalidInputError("smallest scale crop is below one pixel")
    cx, cy = center
    lum = luminance(img)
    rws = factors * base_w
    rhs = factors * base_h
    grid = np.arange(patch) + 0.5
    ys = (cy - rhs / 2.0)[:, None] + grid[None, :] * (rhs / patch)[:, None] - 0.5
    xs = (cx - rws / 2.0)[:, None] + grid[None, :] * (rws / patch)[:, None] - 0.5
    crops = _crop_stack(lum, ys, xs)
    feats = hog_stack(crops, cell=cell)                    # (S, r, c, bins)
    # per-scale column-major flatten: rows fastest, then cols, then bins
    samples = feats.transpose(0, 3, 2, 1).reshape(len(factors), -1).T
    return samples * window[None, :]


@dataclass(frozen=True)
class ScaleFilter:
    """1-D filter spectra in rfft layout: num (D, K), den (K,)."""

    num: np.ndarray
    den: np.ndarray
    count: int
    lam: float
    sigma: float


def scale_label(count: int, sigma: float) -> np.ndarray:
    """Gaussian over scale indices, peak 1.0 at the unscaled center index."""
    n = np.arange(count) - (count - 1) // 2
    return np.exp(-(n.astype(np.float64) ** 2) / (2.0 * sigma * sigma))


def train_scale(samples: np.ndarray, sigma: float = 1.5, lam: float = 1e-3) -> ScaleFilter:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        raise InvalidInputError(f"expected (D,S) sample matrix, got shape {samples.shape}")
    if lam <= 0:
        raise InvalidInputError(f"regularizer must be positive, got {lam}")
    count = samples.shape[1]
    yhat = np.fft.rfft(scale_label(count, sigma))
    fs = np.fft.rfft(samples, axis=1)
    num = np.conj(yhat)[None, :] * fs
    den = (fs.real**2 + fs.imag**2).sum(axis=0) + lam
    return ScaleFilter(num=num, den=den, count=count, lam=lam, sigma=float(sigma))


def detect_scale(filt: ScaleFilter, samples: np.ndarray) -> tuple[int, np.ndarray]:
    """Response over all scales; returns (argmax index, response)."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape != filt.num.shape[:1] + (filt.count,):
        raise InvalidInputError(f"sample matrix {samples.shape} does not match filter "
                                f"({filt.num.shape[0]}x{filt.count})")
    fs = np.fft.rfft(samples, axis=1)
    spec = (np.conj(filt.num) * fs).sum(axis=0) / filt.den
    resp = np.fft.irfft(spec, n=filt.count)
    return int(np.argmax(resp)), resp


def lerp_scale(old: ScaleFilter, new: ScaleFilter, eta: float) -> ScaleFilter:
    if old.num.shape != new.num.shape:
        raise InvalidInputError("cannot blend scale filters of different shapes")
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"learning rate out of [0,1]: {eta}")
    if eta == 0.0:
        return old
    if eta == 1.0:
        return new
    return ScaleFilter(
        num=(1.0 - eta) * old.num + eta * new.num,
        den=(1.0 - eta) * old.den + eta * new.den,
        count=old.count,
        lam=old.lam,
        sigma=old.sigma,
    )
