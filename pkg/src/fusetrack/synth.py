"""Deterministic synthetic sequence generator for benchmarks and tests.

A spec describes one moving textured target over a textured background, with
optional per-frame deformation (absolute width/height multipliers on the
initial size), illumination gain, and an occluding rectangle. Frames are
quantized to 8-bit levels at generation so in-memory sequences and their PPM
round-trips are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SynthSpecError
from .geometry import BoundingBox
from .image import resample_grid, sample_bilinear
from .sequences import Sequence

BG_LO, BG_HI = 0.2, 0.8
BG_CELL = 12  # background noise knot spacing in pixels


@dataclass
class SynthSpec:
    canvas_w: int = 320
    canvas_h: int = 240
    frame_count: int = 30
    start_x: float = 120.0
    start_y: float = 90.0
    target_w: float = 48.0
    target_h: float = 48.0
    target_color: tuple = (0.85, 0.3, 0.2)
    texture_amp: float = 0.5
    motion: list = field(default_factory=list)      # per-frame (dx, dy); entry 0 must be (0, 0)
    deform: list | None = None                      # per-frame (w_mult, h_mult) on the initial size
    gain: list | None = None                        # per-frame brightness gain
    occluder: list | None = None                    # per-frame (x, y, w, h) or None
    occluder_color: tuple = (0.05, 0.05, 0.05)
    bg_seed: int = 7
    seed: int = 0
    name: str = "synthetic"

    def __post_init__(self):
        n = self.frame_count
        if n < 2:
            raise SynthSpecError(f"need at least 2 frames, got {n}")
        if self.canvas_w < 8 or self.canvas_h < 8:
            raise SynthSpecError(f"canvas too small: {self.canvas_w}x{self.canvas_h}")
        if self.target_w < 4 or self.target_h < 4:
            raise SynthSpecError(f"target too small: {self.target_w}x{self.target_h}")
        if not self.motion:
            self.motion = [(0.0, 0.0)] * n
        self.motion = [tuple(map(float, m)) for m in self.motion]
        if len(self.motion) != n:
            raise SynthSpecError(f"motion program has {len(self.motion)} entries for {n} frames")
        if tuple(self.motion[0]) != (0.0, 0.0):
            raise SynthSpecError("motion entry 0 must be (0, 0): frame 0 is the anchor")
        if self.deform is not None:
            self.deform = [tuple(map(float, d)) for d in self.deform]
            if len(self.deform) != n:
                raise SynthSpecError(f"deform program has {len(self.deform)} entries for {n} frames")
            if any(mw <= 0 or mh <= 0 for mw, mh in self.deform):
                raise SynthSpecError("deform multipliers must be positive")
        if self.gain is not None:
            self.gain = [float(g) for g in self.gain]
            if len(self.gain) != n:
                raise SynthSpecError(f"gain program has {len(self.gain)} entries for {n} frames")
            if any(g <= 0 for g in self.gain):
                raise SynthSpecError("gains must be positive")
        if self.occluder is not None:
            if len(self.occluder) != n:
                raise SynthSpecError(f"occluder program has {len(self.occluder)} entries for {n} frames")
            self.occluder = [None if o is None else tuple(map(float, o)) for o in self.occluder]
        if not 0.0 <= self.texture_amp <= 1.0:
            raise SynthSpecError(f"texture_amp out of [0,1]: {self.texture_amp}")

    def to_dict(self) -> dict:
        return {
            "canvas_w": self.canvas_w, "canvas_h": self.canvas_h,
            "frame_count": self.frame_count,
            "start_x": self.start_x, "start_y": self.start_y,
            "target_w": self.target_w, "target_h": self.target_h,
            "target_color": list(self.target_color),
            "texture_amp": self.texture_amp,
            "motion": [list(m) for m in self.motion],
            "deform": None if self.deform is None else [list(d) for d in self.deform],
            "gain": self.gain,
            "occluder": None if self.occluder is None
            else [None if o is None else list(o) for o in self.occluder],
            "occluder_color": list(self.occluder_color),
            "bg_seed": self.bg_seed, "seed": self.seed, "name": self.name,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise SynthSpecError(f"unknown spec keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("target_color", "occluder_color"):
            if key in kwargs and kwargs[key] is not None:
                kwargs[key] = tuple(kwargs[key])
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise SynthSpecError(f"bad spec: {e}") from None


def _background(spec: SynthSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.bg_seed)
    knots = rng.random((spec.canvas_h // BG_CELL + 2, spec.canvas_w // BG_CELL + 2))
    coarse = resample_grid(knots, spec.canvas_h, spec.canvas_w)
    vals = BG_LO + (BG_HI - BG_LO) * coarse
    return np.repeat(vals[:, :, None], 3, axis=2)


def generate(spec: SynthSpec, seed: int | None = None) -> Sequence:
    """Render the sequence; returns in-memory frames plus exact ground truth."""
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    bg = _background(spec)
    h, w = spec.canvas_h, spec.canvas_w

    # target texture lives at fixed base resolution and stretches with the box
    tex = rng.random((max(8, int(spec.target_h)), max(8, int(spec.target_w))))
    color = np.asarray(spec.target_color, dtype=np.float64)

    cx = spec.start_x + spec.target_w / 2.0
    cy = spec.start_y + spec.target_h / 2.0
    frames = []
    boxes = []
    for u in range(spec.frame_count):
        cx += spec.motion[u][0]
        cy += spec.motion[u][1]
        mw, mh = spec.deform[u] if spec.deform is not None else (1.0, 1.0)
        bw, bh = spec.target_w * mw, spec.target_h * mh
        box = BoundingBox(cx - bw / 2.0, cy - bh / 2.0, bw, bh)
        if box.x < 0 or box.y < 0 or box.x2 > w or box.y2 > h:
            raise SynthSpecError(f"frame {u}: target {box} leaves the {h}x{w} canvas")

        frame = bg.copy()
        r0, r1 = int(np.floor(box.y)), int(np.ceil(box.y2))
        c0, c1 = int(np.floor(box.x)), int(np.ceil(box.x2))
        ys = np.arange(r0, r1) + 0.5
        xs = np.arange(c0, c1) + 0.5
        inside = ((ys >= box.y) & (ys < box.y2))[:, None] & ((xs >= box.x) & (xs < box.x2))[None, :]
        # normalized position inside the box -> base texture coordinates
        ty = (ys - box.y) / bh * (tex.shape[0] - 1)
        tx = (xs - box.x) / bw * (tex.shape[1] - 1)
        t = sample_bilinear(tex, np.clip(ty, 0, tex.shape[0] - 1), np.clip(tx, 0, tex.shape[1] - 1))
        shade = (1.0 - spec.texture_amp) + spec.texture_amp * t
        block = frame[r0:r1, c0:c1]
        block[inside] = color[None, :] * shade[inside][:, None]

        if spec.occluder is not None and spec.occluder[u] is not None:
            ox, oy, ow, oh = spec.occluder[u]
            q0, q1 = int(np.floor(oy)), int(np.ceil(oy + oh))
            p0, p1 = int(np.floor(ox)), int(np.ceil(ox + ow))
            oys = np.arange(max(q0, 0), min(q1, h)) + 0.5
            oxs = np.arange(max(p0, 0), min(p1, w)) + 0.5
            omask = (((oys >= oy) & (oys < oy + oh))[:, None]
                     & ((oxs >= ox) & (oxs < ox + ow))[None, :])
            oblock = frame[max(q0, 0):min(q1, h), max(p0, 0):min(p1, w)]
            oblock[omask] = np.asarray(spec.occluder_color, dtype=np.float64)

        if spec.gain is not None:
            frame = np.clip(frame * spec.gain[u], 0.0, 1.0)
        # quantize to 8-bit levels: disk round-trips are then bit-exact
        frames.append(np.rint(frame * 255.0) / 255.0)
        boxes.append(box)

    return Sequence(name=spec.name, gt=boxes, frames=frames)
