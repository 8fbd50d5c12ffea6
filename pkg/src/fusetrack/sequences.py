"""Benchmark sequence layout and box-file round-tripping.

On disk a sequence is a directory with an img/ subdirectory of numbered
frames plus groundtruth_rect.txt holding one `x,y,w,h` line per frame.
File coordinates are 1-based (the benchmark convention); everything in
memory is 0-based. Values may be separated by commas, tabs, or spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SequenceError
from .geometry import BoundingBox
from .image import read_image

_SEP = re.compile(r"[,\s]+")
_FRAME_SUFFIXES = (".ppm", ".pgm", ".png", ".jpg", ".jpeg", ".bmp")


def _num(value: float) -> str:
    """Integers print bare; floats print via repr so they round-trip losslessly."""
    f = float(value)
    if f.is_integer():
        return str(int(f))
    return repr(f)


def parse_box_line(line: str, base: int = 1) -> BoundingBox:
    """One `x,y,w,h` record; `base` is subtracted from x and y."""
    parts = [p for p in _SEP.split(line.strip()) if p]
    if len(parts) != 4:
        raise SequenceError(f"expected 4 values per box line, got {len(parts)}: {line!r}")
    try:
        x, y, w, h = (float(p) for p in parts)
    except ValueError:
        raise SequenceError(f"non-numeric box line: {line!r}") from None
    return BoundingBox(x - base, y - base, w, h)


def format_box_line(box: BoundingBox, base: int = 1) -> str:
    return f"{_num(box.x + base)},{_num(box.y + base)},{_num(box.w)},{_num(box.h)}"


def parse_box_text(text: str, origin: str = "boxes") -> list[BoundingBox]:
    boxes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        try:
            boxes.append(parse_box_line(raw))
        except SequenceError as e:
            raise SequenceError(f"{origin}, line {lineno}: {e}") from None
    if not boxes:
        raise SequenceError(f"{origin}: no box lines found")
    return boxes


def format_box_text(boxes) -> str:
    return "".join(format_box_line(b) + "\n" for b in boxes)


def read_boxes(path) -> list[BoundingBox]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SequenceError(f"cannot read {path}: {e}") from None
    return parse_box_text(text, origin=str(path))


def write_boxes(path, boxes) -> None:
    Path(path).write_text(format_box_text(boxes), encoding="utf-8")


@dataclass
class Sequence:
    """Frames either in memory (`frames`) or on disk (`frame_paths`), plus ground truth."""

    name: str
    gt: list = field(default_factory=list)
    frames: list | None = None
    frame_paths: list | None = None

    def __len__(self) -> int:
        return len(self.frames) if self.frames is not None else len(self.frame_paths)

    def frame(self, i: int) -> np.ndarray:
        if self.frames is not None:
            return self.frames[i]
        return read_image(self.frame_paths[i])


def _frame_sort_key(path: Path):
    digits = re.sub(r"\D", "", path.stem)
    return (int(digits) if digits else 0, path.name)


def discover(seq_dir) -> tuple[list[Path], Path]:
    """Locate the frame files (numerically sorted) and the ground-truth file."""
    root = Path(seq_dir)
    img_dir = root / "img"
    if not img_dir.is_dir():
        raise SequenceError(f"{root}: missing img/ directory")
    frames = sorted((p for p in img_dir.iterdir()
                     if p.suffix.lower() in _FRAME_SUFFIXES and p.is_file()),
                    key=_frame_sort_key)
    if len(frames) < 2:
        raise SequenceError(f"{img_dir}: need at least 2 frames, found {len(frames)}")
    gt_path = root / "groundtruth_rect.txt"
    if not gt_path.is_file():
        raise SequenceError(f"{root}: missing groundtruth_rect.txt")
    return frames, gt_path


def load_sequence(seq_dir) -> Sequence:
    """Load a sequence directory; ground truth must cover frame 1 (or all frames)."""
    root = Path(seq_dir)
    frame_paths, gt_path = discover(root)
    boxes = read_boxes(gt_path)
    if len(boxes) not in (1, len(frame_paths)):
        raise SequenceError(
            f"{gt_path}: {len(boxes)} ground-truth lines for {len(frame_paths)} frames "
            f"(need 1 or {len(frame_paths)})")
    return Sequence(name=root.name, gt=boxes, frame_paths=frame_paths)
