"""Tests for image sampling, resizing, and PNM serialization."""

import numpy as np
import pytest

from fusetrack.errors import InvalidInputError, InvalidRegionError, SequenceError
from fusetrack.geometry import BoundingBox
from fusetrack.image import (
    crop_resize,
    from_uint8,
    luminance,
    read_image,
    read_image_bytes,
    read_ppm,
    resample_grid,
    sample_bilinear,
    to_uint8,
    write_ppm,
)
from oracles import loop_bilinear, loop_crop_resize


def test_luminance_weights():
    img = np.zeros((2, 2, 3))
    img[0, 0] = (1.0, 0.0, 0.0)
    img[0, 1] = (0.0, 1.0, 0.0)
    img[1, 0] = (0.0, 0.0, 1.0)
    img[1, 1] = (1.0, 1.0, 1.0)
    lum = luminance(img)
    assert lum[0, 0] == pytest.approx(0.299, abs=1e-15)
    assert lum[0, 1] == pytest.approx(0.587, abs=1e-15)
    assert lum[1, 0] == pytest.approx(0.114, abs=1e-15)
    assert lum[1, 1] == pytest.approx(1.0, abs=1e-12)


def test_luminance_passthrough_and_errors():
    gray = np.random.default_rng(0).random((4, 5))
    assert np.array_equal(luminance(gray), gray)
    with pytest.raises(InvalidInputError):
        luminance(np.zeros((4, 5, 2)))
    with pytest.raises(InvalidInputError):
        luminance(np.zeros(4))


def test_sample_bilinear_matches_loop_oracle():
    rng = np.random.default_rng(1)
    data = rng.random((7, 9))
    ys = rng.uniform(-2.0, 9.0, size=11)
    xs = rng.uniform(-2.0, 11.0, size=13)
    got = sample_bilinear(data, ys, xs)
    want = loop_bilinear(data, ys, xs)
    assert np.max(np.abs(got - want)) < 1e-12


def test_sample_bilinear_multichannel_and_exact_centers():
    rng = np.random.default_rng(2)
    data = rng.random((6, 6, 3))
    ys = np.arange(6, dtype=float)
    xs = np.arange(6, dtype=float)
    got = sample_bilinear(data, ys, xs)
    assert np.array_equal(got, data)
    ys = rng.uniform(0.0, 5.0, size=4)
    xs = rng.uniform(0.0, 5.0, size=5)
    assert np.max(np.abs(sample_bilinear(data, ys, xs) - loop_bilinear(data, ys, xs))) < 1e-12


def test_sample_bilinear_clamps_outside():
    data = np.array([[1.0, 2.0], [3.0, 4.0]])
    got = sample_bilinear(data, [-5.0, 10.0], [-5.0, 10.0])
    assert np.array_equal(got, [[1.0, 2.0], [3.0, 4.0]])


def test_crop_resize_identity_and_constant():
    rng = np.random.default_rng(3)
    img = rng.random((12, 10, 3))
    region = BoundingBox(0.0, 0.0, 10.0, 12.0)
    assert np.allclose(crop_resize(img, region, 12, 10), img, atol=1e-12)
    flat = np.full((8, 8), 0.37)
    out = crop_resize(flat, BoundingBox(-3.0, 2.5, 6.0, 4.0), 5, 7)
    assert np.allclose(out, 0.37, atol=1e-15)


def test_crop_resize_matches_loop_oracle_including_overhang():
    rng = np.random.default_rng(4)
    img = rng.random((9, 11, 3))
    cases = [
        (2.0, 1.0, 5.0, 6.0, 8, 8),
        (-4.0, -3.0, 10.0, 9.0, 6, 12),
        (7.5, 5.25, 8.0, 8.0, 10, 5),
    ]
    for x, y, w, h, oh, ow in cases:
        got = crop_resize(img, BoundingBox(x, y, w, h), oh, ow)
        want = loop_crop_resize(img, x, y, w, h, oh, ow)
        assert np.max(np.abs(got - want)) < 1e-12


def test_crop_resize_rejects_bad_arguments():
    img = np.zeros((8, 8))
    with pytest.raises(InvalidRegionError):
        crop_resize(img, BoundingBox(0.0, 0.0, 0.5, 4.0), 4, 4)
    with pytest.raises(InvalidRegionError):
        crop_resize(img, BoundingBox(0.0, 0.0, 4.0, 0.25), 4, 4)
    with pytest.raises(InvalidInputError):
        crop_resize(img, BoundingBox(0.0, 0.0, 4.0, 4.0), 0, 4)
    with pytest.raises(InvalidInputError):
        crop_resize(np.zeros((2, 2, 2, 2)), BoundingBox(0.0, 0.0, 1.0, 1.0), 2, 2)


def test_crop_resize_output_clipped():
    img = np.zeros((6, 6))
    img[2:4, 2:4] = 1.0
    out = crop_resize(img, BoundingBox(1.0, 1.0, 4.0, 4.0), 16, 16)
    assert out.min() >= 0.0 and out.max() <= 1.0


def test_resample_grid_known_expansion():
    grid = np.array([[0.0, 1.0], [0.0, 1.0]])
    out = resample_grid(grid, 2, 3)
    assert np.allclose(out, [[0.0, 0.5, 1.0], [0.0, 0.5, 1.0]], atol=1e-12)


def test_resample_grid_identity_and_oracle():
    rng = np.random.default_rng(5)
    grid = rng.random((5, 7))
    assert np.array_equal(resample_grid(grid, 5, 7), grid)
    out = resample_grid(grid, 11, 4)
    # pixel-center mapping: output cell r samples the source at the center
    # of the r-th of out_rows equal slices
    ys = (np.arange(11) + 0.5) * (5.0 / 11.0) - 0.5
    xs = (np.arange(4) + 0.5) * (7.0 / 4.0) - 0.5
    want = loop_bilinear(grid, ys, xs)
    assert np.max(np.abs(out - want)) < 1e-12


def test_resample_grid_constant_and_errors():
    assert np.allclose(resample_grid(np.full((3, 3), 2.5), 7, 2), 2.5, atol=1e-14)
    with pytest.raises(InvalidInputError):
        resample_grid(np.zeros((3, 3)), 0, 3)
    with pytest.raises(InvalidInputError):
        resample_grid(np.zeros(3), 2, 2)


def test_uint8_round_trip_is_exact_on_the_grid():
    levels = np.arange(256, dtype=np.uint8).reshape(16, 16)
    img = from_uint8(levels)
    assert img.min() == 0.0 and img.max() == 1.0
    assert np.array_equal(to_uint8(img), levels)
    # values off the grid round to nearest
    assert to_uint8(np.array([[0.4999 / 255]]))[0, 0] == 0
    assert to_uint8(np.array([[0.5001 / 255]]))[0, 0] == 1


def test_ppm_round_trip_color_and_gray():
    rng = np.random.default_rng(6)
    color = from_uint8(rng.integers(0, 256, size=(5, 4, 3), dtype=np.uint8))
    gray = from_uint8(rng.integers(0, 256, size=(3, 7), dtype=np.uint8))
    assert np.array_equal(read_ppm(write_ppm(color)), color)
    assert np.array_equal(read_ppm(write_ppm(gray)), gray)
    assert write_ppm(color).startswith(b"P6")
    assert write_ppm(gray).startswith(b"P5")


def test_ppm_reader_accepts_comments_and_rejects_garbage():
    img = from_uint8(np.arange(12, dtype=np.uint8).reshape(2, 2, 3))
    data = write_ppm(img)
    commented = data.replace(b"P6\n", b"P6\n# a comment\n", 1)
    assert np.array_equal(read_ppm(commented), img)
    with pytest.raises(SequenceError):
        read_ppm(b"P3\n2 2\n255\n" + b"\x00" * 12)
    with pytest.raises(SequenceError):
        read_ppm(data.replace(b"255", b"65535"))
    with pytest.raises(SequenceError):
        read_ppm(data[:-3])


def test_read_image_bytes_dispatch(tmp_path):
    img = from_uint8(np.arange(27, dtype=np.uint8).reshape(3, 3, 3))
    assert np.array_equal(read_image_bytes(write_ppm(img)), img)
    path = tmp_path / "frame.ppm"
    path.write_bytes(write_ppm(img))
    assert np.array_equal(read_image(str(path)), img)
    with pytest.raises(SequenceError):
        read_image(str(tmp_path / "missing.ppm"))


def test_read_image_bytes_decodes_png_when_pillow_available(tmp_path):
    PIL = pytest.importorskip("PIL.Image")
    arr = np.arange(48, dtype=np.uint8).reshape(4, 4, 3)
    path = tmp_path / "frame.png"
    PIL.fromarray(arr).save(path)
    got = read_image(str(path))
    assert np.array_equal(to_uint8(got), arr)
