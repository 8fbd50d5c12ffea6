"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import base64

import numpy as np
import pytest

from fusetrack.image import write_ppm
from fusetrack.sequences import Sequence, write_boxes
from fusetrack.synth import SynthSpec, generate


def drift_spec(frames=6, dx=2.0, dy=1.0, **kw):
    """Small, fast synthetic sequence: a textured square drifting at (dx, dy)."""
    base = dict(
        canvas_w=128,
        canvas_h=96,
        frame_count=frames,
        start_x=18.0,
        start_y=30.0,
        target_w=28.0,
        target_h=28.0,
        target_color=(0.85, 0.3, 0.2),
        texture_amp=0.5,
        motion=[(0.0, 0.0)] + [(dx, dy)] * (frames - 1),
        bg_seed=3,
        seed=1,
        name="drift",
    )
    base.update(kw)
    return SynthSpec(**base)


@pytest.fixture()
def drift_sequence():
    return generate(drift_spec())


def write_sequence_dir(seq: Sequence, root) -> str:
    """Lay a sequence out on disk in the img/ + groundtruth_rect.txt shape."""
    img = root / "img"
    img.mkdir(parents=True)
    for i in range(len(seq)):
        (img / f"{i + 1:04d}.ppm").write_bytes(write_ppm(seq.frame(i)))
    write_boxes(root / "groundtruth_rect.txt", seq.gt)
    return str(root)


def frames_b64(seq: Sequence) -> list[str]:
    return [base64.b64encode(write_ppm(seq.frame(i))).decode("ascii")
            for i in range(len(seq))]


@pytest.fixture()
def client():
    from fastapi.testclient import TestClient

    from fusetrack.service.app import create_app

    return TestClient(create_app())


def random_patch(rng, h, w, channels=3):
    shape = (h, w) if channels == 1 else (h, w, channels)
    return rng.random(shape)
