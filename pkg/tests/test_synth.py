"""Tests for the deterministic synthetic sequence generator."""

import numpy as np
import pytest

from conftest import drift_spec
from fusetrack.errors import SynthSpecError
from fusetrack.image import read_ppm, write_ppm
from fusetrack.synth import SynthSpec, generate


def test_defaults_and_length():
    seq = generate(SynthSpec())
    assert len(seq) == 30
    assert seq.frame(0).shape == (240, 320, 3)
    assert len(seq.gt) == 30
    assert seq.name == "synthetic"


def test_generation_is_deterministic():
    a = generate(drift_spec())
    b = generate(drift_spec())
    for i in range(len(a)):
        assert np.array_equal(a.frame(i), b.frame(i))
    assert [(g.x, g.y, g.w, g.h) for g in a.gt] == [(g.x, g.y, g.w, g.h) for g in b.gt]
    c = generate(drift_spec(), seed=99)
    assert not np.array_equal(a.frame(0), c.frame(0))


def test_frames_are_quantized_and_round_trip_exactly():
    seq = generate(drift_spec(frames=3))
    for i in range(3):
        frame = seq.frame(i)
        assert np.array_equal(np.rint(frame * 255.0) / 255.0, frame)
        assert np.array_equal(read_ppm(write_ppm(frame)), frame)
        assert frame.min() >= 0.0 and frame.max() <= 1.0


def test_ground_truth_follows_the_motion_program():
    spec = drift_spec(frames=5, dx=3.0, dy=-1.5, start_y=50.0)
    seq = generate(spec)
    x0, y0 = seq.gt[0].center
    for u in range(5):
        cx, cy = seq.gt[u].center
        assert cx == pytest.approx(x0 + 3.0 * u, abs=1e-9)
        assert cy == pytest.approx(y0 - 1.5 * u, abs=1e-9)
    still = generate(drift_spec(frames=4, motion=[(0.0, 0.0)] * 4))
    assert all((g.x, g.y) == (still.gt[0].x, still.gt[0].y) for g in still.gt)


def test_deform_multipliers_are_absolute():
    deform = [(1.0, 1.0), (1.2, 0.9), (1.44, 0.81)]
    spec = drift_spec(frames=3, dx=0.0, dy=0.0, start_x=40.0, start_y=30.0,
                      deform=deform)
    seq = generate(spec)
    for u, (mw, mh) in enumerate(deform):
        assert seq.gt[u].w == pytest.approx(28.0 * mw, abs=1e-12)
        assert seq.gt[u].h == pytest.approx(28.0 * mh, abs=1e-12)
    # the box center never moves under pure deformation
    assert all(g.center == seq.gt[0].center for g in seq.gt)


def test_target_pixels_show_the_target_color():
    spec = drift_spec(frames=2, texture_amp=0.0)
    seq = generate(spec)
    g = seq.gt[0]
    frame = seq.frame(0)
    inner = frame[int(g.y) + 2:int(g.y2) - 2, int(g.x) + 2:int(g.x2) - 2]
    for ch, v in enumerate(spec.target_color):
        assert np.max(np.abs(inner[:, :, ch] - v)) <= 0.5 / 255.0 + 1e-12


def test_background_band_and_achromatic():
    seq = generate(drift_spec(frames=2))
    frame = seq.frame(0)
    corner = frame[:10, :10]
    assert np.array_equal(corner[:, :, 0], corner[:, :, 1])
    assert np.array_equal(corner[:, :, 0], corner[:, :, 2])
    assert corner.min() >= 0.2 - 0.5 / 255.0
    assert corner.max() <= 0.8 + 0.5 / 255.0


def test_gain_scales_brightness():
    base = drift_spec(frames=3, dx=0.0, dy=0.0)
    lit = drift_spec(frames=3, dx=0.0, dy=0.0, gain=[1.0, 1.3, 1.6])
    a = generate(base)
    b = generate(lit)
    assert np.array_equal(a.frame(0), b.frame(0))
    for u, g in enumerate([1.0, 1.3, 1.6]):
        want = np.clip(a.frame(u) * g, 0.0, 1.0)
        # both sides quantize independently, so allow one-and-a-bit levels
        assert np.max(np.abs(b.frame(u) - want)) <= 1.3 * (1.0 / 255.0)


def test_occluder_paints_its_rectangle():
    occ = [None, (20.0, 30.0, 40.0, 12.0)]
    seq = generate(drift_spec(frames=2, occluder=occ))
    frame = seq.frame(1)
    block = frame[31:41, 21:59]
    for ch in range(3):
        assert np.max(np.abs(block[:, :, ch] - 0.05)) <= 0.5 / 255.0 + 1e-12
    # frame 0 is untouched there
    assert not np.allclose(seq.frame(0)[31:41, 21:59], 0.05, atol=0.02)


def test_spec_validation():
    with pytest.raises(SynthSpecError):
        drift_spec(frames=1)
    with pytest.raises(SynthSpecError):
        drift_spec(target_w=2.0)
    with pytest.raises(SynthSpecError):
        drift_spec(frames=3, motion=[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])
    with pytest.raises(SynthSpecError):
        drift_spec(frames=3, motion=[(0.0, 0.0)] * 2)
    with pytest.raises(SynthSpecError):
        drift_spec(frames=3, deform=[(1.0, 1.0)] * 2)
    with pytest.raises(SynthSpecError):
        drift_spec(frames=3, deform=[(1.0, 1.0), (0.0, 1.0), (1.0, 1.0)])
    with pytest.raises(SynthSpecError):
        drift_spec(frames=3, gain=[1.0, -0.5, 1.0])
    with pytest.raises(SynthSpecError):
        drift_spec(texture_amp=1.5)


def test_target_leaving_canvas_names_the_frame():
    spec = drift_spec(frames=4, dx=40.0, dy=0.0)
    with pytest.raises(SynthSpecError, match="frame 3"):
        generate(spec)


def test_dict_round_trip_and_unknown_keys():
    spec = drift_spec(frames=3, gain=[1.0, 1.1, 1.2],
                      occluder=[None, (1.0, 2.0, 3.0, 4.0), None])
    again = SynthSpec.from_dict(spec.to_dict())
    assert again.to_dict() == spec.to_dict()
    a = generate(spec)
    b = generate(again)
    assert np.array_equal(a.frame(2), b.frame(2))
    with pytest.raises(SynthSpecError, match="unknown spec keys"):
        SynthSpec.from_dict({"canvas_w": 100, "wobble": 3})
    with pytest.raises(SynthSpecError, match="bad spec"):
        SynthSpec.from_dict({"canvas_w": "wide"})
