"""Axis-aligned boxes and overlap measures.

Boxes are stored 0-based with continuous coordinates: (x, y) is the top-left
corner, (w, h) the extent. Benchmark files on disk are 1-based; conversion
happens at the I/O boundary (see sequences.py), never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError


@dataclass(frozen=True)
class BoundingBox:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for v in (self.x, self.y, self.w, self.h):
            if not math.isfinite(v):
                raise InvalidInputError(f"non-finite box field: {self!r}")
        if self.w <= 0 or self.h <= 0:
            raise InvalidInputError(f"box needs positive size, got w={self.w} h={self.h}")

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def area(self) -> float:
        return self.w * self.h

    def at_center(self, cx: float, cy: float) -> "BoundingBox":
        """Same size, recentered at (cx, cy)."""
        return BoundingBox(cx - self.w / 2.0, cy - self.h / 2.0, self.w, self.h)


def rect_iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection area over union area; 0.0 when disjoint."""
    ix = min(a.x2, b.x2) - max(a.x, b.x)
    iy = min(a.y2, b.y2) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)
