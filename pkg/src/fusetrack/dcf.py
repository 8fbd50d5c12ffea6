"""Correlation filters learned and applied in the Fourier domain.

A filter is the closed-form ridge regression over all cyclic shifts of a
multi-channel feature patch x against a Gaussian target response y:

    num_l = conj(F(y)) * F(x_l)
    den   = sum_l conj(F(x_l)) * F(x_l) + lam

Detection cross-correlates a new patch z against the learned template:

    response = irfft( sum_l conj(num_l) * F(z_l) / den )

so the peak sits at the label center when z matches the template and moves
with the content when z is a cyclic shift of it. Real FFTs are used
throughout; for real inputs they are exactly the complex transform restricted
to its non-redundant half.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class GaussianLabel:
    """Dense target response: peak value 1.0 at (rows//2, cols//2)."""

    grid: np.ndarray
    sigma: float


def make_label(
    rows: int,
    cols: int,
    target_w_cells: float,
    target_h_cells: float,
    sigma_factor: float = 1.0 / 16.0,
) -> GaussianLabel:
    """Gaussian label whose width follows the target's size on the cell grid."""
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"label size must be positive, got {rows}x{cols}")
    if target_w_cells <= 0 or target_h_cells <= 0:
        raise InvalidInputError("target cell size must be positive")
    sigma = np.sqrt(target_w_cells * target_h_cells) * sigma_factor
    m = np.arange(rows) - rows // 2
    n = np.arange(cols) - cols // 2
    grid = np.exp(-(m[:, None] ** 2 + n[None, :] ** 2) / (2.0 * sigma * sigma))
    return GaussianLabel(grid=grid, sigma=float(sigma))


@dataclass(frozen=True)
class CorrelationFilter:
    """Numerator/denominator spectra in rfft2 layout: num (L, M, K), den (M, K)."""

    num: np.ndarray
    den: np.ndarray
    rows: int
    cols: int
    channels: int
    lam: float


def _feature_spectra(x: np.ndarray) -> tuple[np.ndarray, tuple[int, int, int]]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, :, None]
    if x.ndim != 3:
        raise InvalidInputError(f"expected (M,N,L) features, got shape {x.shape}")
    spectra = np.fft.rfft2(np.moveaxis(x, 2, 0), axes=(1, 2))
    return spectra, (x.shape[0], x.shape[1], x.shape[2])


def train_filter(x: np.ndarray, label, lam: float = 1e-3, quotient: bool = False) -> CorrelationFilter:
    """Solve the regression for one feature patch.

    With quotient=True the stored numerator is num/den and den becomes all
    ones, so later linear interpolation acts on the assembled filter itself
    rather than on numerator and denominator separately.
    """
    grid = label.grid if isinstance(label, GaussianLabel) else np.asarray(label, dtype=np.float64)
    if lam <= 0:
        raise InvalidInputError(f"regularizer must be positive, got {lam}")
    xs, (rows, cols, channels) = _feature_spectra(x)
    if grid.shape != (rows, cols):
        raise InvalidInputError(f"features {(rows, cols)} do not match label {grid.shape}")
    yhat = np.fft.rfft2(grid)
    num = np.conj(yhat)[None, :, :] * xs
    den = (xs.real**2 + xs.imag**2).sum(axis=0) + lam
    if quotient:
        num = num / den
        den = np.ones_like(den)
    return CorrelationFilter(num=num, den=den, rows=rows, cols=cols, channels=channels, lam=lam)


def detect(filt: CorrelationFilter, z: np.ndarray) -> np.ndarray:
    """Dense response of the filter over all cyclic shifts of patch z."""
    zs, (rows, cols, channels) = _feature_spectra(z)
    if (rows, cols, channels) != (filt.rows, filt.cols, filt.channels):
        raise InvalidInputError(f"patch {(rows, cols, channels)} does not match filter "
                                f"({filt.rows}x{filt.cols}x{filt.channels})")
    spec = (np.conj(filt.num) * zs).sum(axis=0) / filt.den
    return np.fft.irfft2(spec, s=(filt.rows, filt.cols))


def lerp_filter(old: CorrelationFilter, new: CorrelationFilter, eta: float) -> CorrelationFilter:
    """Running-average update: (1 - eta) * old + eta * new, per component."""
    if old.num.shape != new.num.shape:
        raise InvalidInputError("cannot blend filters of different shapes")
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"learning rate out of [0,1]: {eta}")
    if eta == 0.0:
        return old
    if eta == 1.0:
        return new
    return CorrelationFilter(
        num=(1.0 - eta) * old.num + eta * new.num,
        den=(1.0 - eta) * old.den + eta * new.den,
        rows=old.rows,
        cols=old.cols,
        channels=old.channels,
        lam=old.lam,
    )
