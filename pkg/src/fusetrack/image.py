"""Image representation, bilinear resampling, and frame codecs.

Images are float64 numpy arrays in [0, 1]: (H, W) grayscale or (H, W, 3) RGB.
Resampling uses pixel-center alignment (coordinate 0.0 is the center of pixel
0) with clamp-to-edge behavior, so crops that extend past the frame replicate
border pixels. PPM (P6) / PGM (P5) are decoded natively; other formats fall
back to Pillow when it is installed.
"""

from __future__ import annotations

import io

import numpy as np

from .errors import InvalidInputError, InvalidRegionError, SequenceError
from .geometry import BoundingBox


def luminance(img: np.ndarray) -> np.ndarray:
    """Rec.601 luma for RGB input; grayscale passes through as float64."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] == 3:
        return img[:, :, 0] * 0.299 + img[:, :, 1] * 0.587 + img[:, :, 2] * 0.114
    raise InvalidInputError(f"expected (H,W) or (H,W,3) image, got shape {img.shape}")


def _axis_coords(starts: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split fractional coords into clamped floor/ceil indices and weights."""
    lo = np.floor(starts)
    t = starts - lo
    lo = lo.astype(np.int64)
    hi = np.clip(lo + 1, 0, size - 1)
    lo = np.clip(lo, 0, size - 1)
    return lo, hi, t


def sample_bilinear(data: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample `data` on the separable grid ys x xs (pixel-center coords, clamped).

    Interpolation is written in lerp form a + t*(b - a) so constant inputs
    reproduce exactly.
    """
    data = np.asarray(data, dtype=np.float64)
    h, w = data.shape[:2]
    y0, y1, ty = _axis_coords(np.asarray(ys, dtype=np.float64), h)
    x0, x1, tx = _axis_coords(np.asarray(xs, dtype=np.float64), w)

    v00 = data[np.ix_(y0, x0)]
    v01 = data[np.ix_(y0, x1)]
    v10 = data[np.ix_(y1, x0)]
    v11 = data[np.ix_(y1, x1)]

    if data.ndim == 3:
        tx_b = tx[None, :, None]
        ty_b = ty[:, None, None]
    else:
        tx_b = tx[None, :]
        ty_b = ty[:, None]

    top = v00 + tx_b * (v01 - v00)
    bot = v10 + tx_b * (v11 - v10)
    return top + ty_b * (bot - top)


def crop_resize(img: np.ndarray, region: BoundingBox, out_h: int, out_w: int) -> np.ndarray:
    """Resample a continuous region of `img` to (out_h, out_w).

    Output pixel (r, c) samples the source at the center of the r,c-th cell of
    the region. Regions may extend past the frame (edges replicate); regions
    smaller than one pixel are rejected.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim not in (2, 3):
        raise InvalidInputError(f"expected 2-D or 3-D image, got shape {img.shape}")
    if out_h < 1 or out_w < 1:
        raise InvalidInputError(f"output size must be positive, got {out_h}x{out_w}")
    if region.w < 1.0 or region.h < 1.0:
        raise InvalidRegionError(f"region smaller than one pixel: w={region.w} h={region.h}")
    ys = region.y + (np.arange(out_h) + 0.5) * (region.h / out_h) - 0.5
    xs = region.x + (np.arange(out_w) + 0.5) * (region.w / out_w) - 0.5
    out = sample_bilinear(img, ys, xs)
    return np.clip(out, 0.0, 1.0)


def resample_grid(grid: np.ndarray, out_rows: int, out_cols: int) -> np.ndarray:
    """Bilinearly resample a 2-D grid of arbitrary values to a new shape."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 2:
        raise InvalidInputError(f"expected 2-D grid, got shape {grid.shape}")
    if out_rows < 1 or out_cols < 1:
        raise InvalidInputError(f"output size must be positive, got {out_rows}x{out_cols}")
    h, w = grid.shape
    ys = (np.arange(out_rows) + 0.5) * (h / out_rows) - 0.5
    xs = (np.arange(out_cols) + 0.5) * (w / out_cols) - 0.5
    return sample_bilinear(grid, ys, xs)


def to_uint8(img: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(img, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)


def from_uint8(raw: np.ndarray) -> np.ndarray:
    return np.asarray(raw, dtype=np.float64) / 255.0


def write_ppm(img: np.ndarray) -> bytes:
    """Encode an RGB or grayscale float image as binary PPM (P6) / PGM (P5)."""
    img = np.asarray(img)
    u8 = to_uint8(img)
    if u8.ndim == 2:
        header = f"P5\n{u8.shape[1]} {u8.shape[0]}\n255\n"
    elif u8.ndim == 3 and u8.shape[2] == 3:
        header = f"P6\n{u8.shape[1]} {u8.shape[0]}\n255\n"
    else:
        raise InvalidInputError(f"cannot encode image of shape {img.shape}")
    return header.encode("ascii") + u8.tobytes()


def _pnm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read `count` whitespace-separated integer header tokens, skipping # comments."""
    tokens: list[int] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise SequenceError("truncated PNM header")
        try:
            tokens.append(int(data[i:j]))
        except ValueError:
            raise SequenceError(f"bad PNM header token {data[i:j]!r}") from None
        i = j
    return tokens, i + 1  # single whitespace byte terminates the header


def read_ppm(data: bytes) -> np.ndarray:
    """Decode binary PPM/PGM bytes to a float image in [0, 1]."""
    magic = data[:2]
    if magic not in (b"P6", b"P5"):
        raise SequenceError(f"unsupported PNM magic {magic!r}")
    channels = 3 if magic == b"P6" else 1
    (w, h, maxval), offset = _pnm_tokens(data[2:], 3)
    offset += 2
    if maxval != 255:
        raise SequenceError(f"unsupported PNM maxval {maxval}")
    need = w * h * channels
    if len(data) - offset < need:
        raise SequenceError("truncated PNM pixel data")
    raw = np.frombuffer(data, dtype=np.uint8, count=need, offset=offset)
    img = raw.reshape((h, w, channels)) if channels == 3 else raw.reshape((h, w))
    return from_uint8(img)


def read_image_bytes(data: bytes) -> np.ndarray:
    """Decode a frame from raw bytes: native PNM, otherwise Pillow."""
    if data[:2] in (b"P6", b"P5"):
        return read_ppm(data)
    try:
        from PIL import Image as _PILImage
    except ImportError:
        raise SequenceError(
            "frame is not PPM/PGM and Pillow is not installed; "
            "install the 'images' extra to read other formats"
        ) from None
    with _PILImage.open(io.BytesIO(data)) as im:
        if im.mode in ("L", "I;16", "I"):
            arr = np.asarray(im.convert("L"))
        else:
            arr = np.asarray(im.convert("RGB"))
    return from_uint8(arr)


def read_image(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise SequenceError(f"cannot read frame {path}: {e}") from None
    return read_image_bytes(data)
