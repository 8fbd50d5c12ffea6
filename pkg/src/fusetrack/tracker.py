"""The tracker: multi-model detection, entropy-based fusion, gated updates.

Per frame: crop a search region around the previous position, run every
enabled template filter and the histogram model on it, convert each response
to a probability map, fuse the maps by weighted mean, and move to the fused
peak. A 1-D scale filter then re-estimates the box size at the new center.
Models are retrained and blended in only when every enabled model's peak
clears its threshold against that model's own recent peak history.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import dcf, histmodel, scalefilter
from .errors import ConfigError, InvalidInputError
from .features import ColorNamesTable, extract_cn, extract_gray, extract_hog, hann2d
from .fusion import fuse, peak, resample_prob, to_prob
from .geometry import BoundingBox
from .image import crop_resize

TEMPLATE_FEATURES = ("gray", "hog", "cn")
ALL_FEATURES = TEMPLATE_FEATURES + ("ch",)
SCALE_CELL = 4


@dataclass(frozen=True)
class TrackerConfig:
    search_scale: float = 2.0
    patch_size: int = 150
    cell: int = 4
    hist_bins: int = 32
    fg_shrink: float = 0.85
    lambda_: float = 1e-3
    label_sigma_factor: float = 1.0 / 16.0
    eta_t: float = 0.02
    eta_s: float = 0.04
    gamma_q: float = 0.5
    gamma_t: float = 0.7
    gamma_s: float = 0.5
    history_len: int = 10
    num_scales: int = 33
    scale_step: float = 1.02
    scale_sigma: float = 1.5
    eta_scale: float = 0.02
    scale_patch_size: int = 32
    fusion_weights: tuple = (1.0, 1.0, 1.0, 1.0)
    gray: bool = True
    hog: bool = True
    cn: bool = True
    ch: bool = True
    update_mode: str = "separate"

    def __post_init__(self):
        if self.search_scale <= 1.0:
            raise ConfigError(f"search_scale must exceed 1, got {self.search_scale}")
        if self.cell < 1 or self.patch_size < 2 * self.cell:
            raise ConfigError(f"patch_size {self.patch_size} too small for cell {self.cell}")
        if not 0.0 < self.fg_shrink <= 1.0:
            raise ConfigError(f"fg_shrink out of (0,1]: {self.fg_shrink}")
        if self.lambda_ <= 0:
            raise ConfigError(f"lambda must be positive, got {self.lambda_}")
        if self.label_sigma_factor <= 0:
            raise ConfigError("label_sigma_factor must be positive")
        for name in ("eta_t", "eta_s", "eta_scale"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ConfigError(f"{name} out of (0,1]: {v}")
        for name in ("gamma_q", "gamma_t", "gamma_s"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.history_len < 1:
            raise ConfigError(f"history_len must be at least 1, got {self.history_len}")
        if self.num_scales < 1 or self.num_scales % 2 == 0:
            raise ConfigError(f"num_scales must be odd, got {self.num_scales}")
        if self.scale_step <= 1.0:
            raise ConfigError(f"scale_step must exceed 1, got {self.scale_step}")
        if self.scale_sigma <= 0:
            raise ConfigError("scale_sigma must be positive")
        if self.scale_patch_size < 2 * SCALE_CELL:
            raise ConfigError(f"scale_patch_size too small: {self.scale_patch_size}")
        if self.hist_bins < 2 or 256 % self.hist_bins != 0:
            raise ConfigError(f"hist_bins must divide 256, got {self.hist_bins}")
        w = self.fusion_weights
        if len(w) != 4 or any(v < 0 for v in w) or sum(w) <= 0:
            raise ConfigError(f"fusion_weights must be 4 nonnegative values with positive sum, got {w}")
        if self.update_mode not in ("separate", "quotient"):
            raise ConfigError(f"update_mode must be 'separate' or 'quotient', got {self.update_mode!r}")
        if not (self.gray or self.hog or self.cn or self.ch):
            raise ConfigError("at least one feature must be enabled")


_CONFIG_ALIASES = {"lambda": "lambda_"}
_INT_KEYS = {"patch_size", "cell", "hist_bins", "history_len", "num_scales", "scale_patch_size"}
_BOOL_KEYS = {"gray", "hog", "cn", "ch"}
_TRUE_WORDS = {"true", "1", "yes", "on"}
_FALSE_WORDS = {"false", "0", "no", "off"}


def parse_config(text: str) -> TrackerConfig:
    """Build a TrackerConfig from `key = value` lines.

    Keys are the TrackerConfig field names (the regularizer is spelled
    `lambda`); unknown keys are rejected, missing keys keep their defaults.
    Blank lines and lines starting with # are skipped.
    """
    field_names = {f.name for f in dataclasses.fields(TrackerConfig)}
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        attr = _CONFIG_ALIASES.get(key, key)
        if key == "lambda_" or attr not in field_names:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            if attr in _BOOL_KEYS:
                low = val.lower()
                if low in _TRUE_WORDS:
                    kwargs[attr] = True
                elif low in _FALSE_WORDS:
                    kwargs[attr] = False
                else:
                    raise ValueError(val)
            elif attr == "fusion_weights":
                parts = [p for p in val.replace(",", " ").split() if p]
                if len(parts) != 4:
                    raise ValueError(val)
                kwargs[attr] = tuple(float(p) for p in parts)
            elif attr == "update_mode":
                kwargs[attr] = val
            elif attr in _INT_KEYS:
                kwargs[attr] = int(val)
            else:
                kwargs[attr] = float(val)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value for {key!r}: {val!r}") from None
    return TrackerConfig(**kwargs)


def features_override(cfg: TrackerConfig, spec: str) -> TrackerConfig:
    """Enable exactly the comma-separated feature names, disabling the rest."""
    names = [p.strip() for p in spec.split(",") if p.strip()]
    for n in names:
        if n not in ALL_FEATURES:
            raise ConfigError(f"unknown feature {n!r}; choose from {', '.join(ALL_FEATURES)}")
    if not names:
        raise ConfigError("feature list is empty")
    return dataclasses.replace(cfg, **{n: (n in names) for n in ALL_FEATURES})


def search_region(box: BoundingBox, scale: float) -> BoundingBox:
    """Concentric region `scale` times the box size."""
    cx, cy = box.center
    return BoundingBox(cx - scale * box.w / 2.0, cy - scale * box.h / 2.0,
                       scale * box.w, scale * box.h)


def should_update(peaks, histories, gammas, history_len: int) -> bool:
    """True when every criterion clears gamma times its own recent-history mean.

    Criteria whose history is still shorter than history_len pass
    unconditionally (warm-up).
    """
    for p, hist, g in zip(peaks, histories, gammas):
        if len(hist) < history_len:
            continue
        if not p > g * (sum(hist) / len(hist)):
            return False
    return True


@dataclass(frozen=True)
class FrameResult:
    box: BoundingBox
    peak_fused: float
    peak_template: float
    peak_hist: float
    updated: bool
    scale_index: int


class Tracker:
    """Stateful single-object tracker. Not thread-safe; confine to one thread."""

    def __init__(self, config: TrackerConfig | None = None, cn_table: ColorNamesTable | None = None):
        self.cfg = config if config is not None else TrackerConfig()
        self.cn_table = cn_table
        self.box: BoundingBox | None = None
        self.frame_index = 0
        self.frame_shape = None

    # -- model construction ------------------------------------------------

    def _template_features(self, patch: np.ndarray) -> dict[str, np.ndarray]:
        feats = {}
        if self.use_gray:
            feats["gray"] = extract_gray(patch, self.cfg.cell)
        if self.use_hog:
            feats["hog"] = extract_hog(patch, self.cfg.cell)
        if self.use_cn:
            feats["cn"] = extract_cn(patch, self.cn_table, self.cfg.cell)
        return {k: v * self.window[:, :, None] for k, v in feats.items()}

    def _patch_fg_box(self, region: BoundingBox) -> BoundingBox:
        p = self.cfg.patch_size
        s = self.cfg.search_scale
        # the anisotropic resize maps the object to a centered p/s square
        side = p / s
        return BoundingBox((p - side) / 2.0, (p - side) / 2.0, side, side)

    def _learn(self, frame: np.ndarray, box: BoundingBox):
        cfg = self.cfg
        region = search_region(box, cfg.search_scale)
        patch = crop_resize(frame, region, cfg.patch_size, cfg.patch_size)
        feats = self._template_features(patch)
        filters = {
            k: dcf.train_filter(v, self.label, cfg.lambda_, quotient=(cfg.update_mode == "quotient"))
            for k, v in feats.items()
        }
        fg = bg = None
        if self.use_ch:
            fg, bg = histmodel.learn_hist(patch, self._patch_fg_box(region),
                                          cfg.fg_shrink, cfg.hist_bins)
        samples = scalefilter.build_scale_samples(
            frame, box.center, box.w, box.h, self.scale_factors, self.scale_win,
            cfg.scale_patch_size, SCALE_CELL)
        sfilt = scalefilter.train_scale(samples, cfg.scale_sigma, cfg.lambda_)
        return filters, fg, bg, sfilt

    # -- lifecycle -----------------------------------------------------------

    def init(self, frame: np.ndarray, box: BoundingBox) -> None:
        frame = np.asarray(frame, dtype=np.float64)
        if frame.ndim not in (2, 3) or (frame.ndim == 3 and frame.shape[2] != 3):
            raise InvalidInputError(f"expected (H,W) or (H,W,3) frame, got shape {frame.shape}")
        cfg = self.cfg
        is_gray = frame.ndim == 2
        self.use_gray = cfg.gray
        self.use_hog = cfg.hog
        self.use_cn = cfg.cn and not is_gray
        self.use_ch = cfg.ch and not is_gray
        if not (self.use_gray or self.use_hog or self.use_cn or self.use_ch):
            raise InvalidInputError("no usable features for this input (grayscale frame?)")

        h, w = frame.shape[:2]
        if box.w < 4 or box.h < 4:
            raise InvalidInputError(f"init box must be at least 4x4 px, got {box.w}x{box.h}")
        if box.x < 0 or box.y < 0 or box.x2 > w or box.y2 > h:
            raise InvalidInputError(f"init box {box} not inside {h}x{w} frame")

        if self.use_cn and self.cn_table is None:
            self.cn_table = ColorNamesTable.fallback()

        n_cells = cfg.patch_size // cfg.cell
        self.window = hann2d(n_cells, n_cells)
        side_cells = cfg.patch_size / cfg.search_scale / cfg.cell
        self.label = dcf.make_label(n_cells, n_cells, side_cells, side_cells, cfg.label_sigma_factor)
        self.scale_factors = scalefilter.scale_factors(cfg.num_scales, cfg.scale_step)
        self.scale_win = scalefilter.scale_window(cfg.num_scales)

        self.filters, self.fg_hist, self.bg_hist, self.scale_filter = self._learn(frame, box)
        self.hist_weights = (histmodel.hist_weights(self.fg_hist, self.bg_hist)
                             if self.use_ch else None)
        self.history_fused: deque = deque(maxlen=cfg.history_len)
        self.history_template: deque = deque(maxlen=cfg.history_len)
        self.history_hist: deque = deque(maxlen=cfg.history_len)
        self.box = box
        self.frame_shape = frame.shape
        self.frame_index = 1

    def step(self, frame: np.ndarray) -> FrameResult:
        if self.box is None:
            raise InvalidInputError("tracker not initialized")
        frame = np.asarray(frame, dtype=np.float64)
        if frame.shape != self.frame_shape:
            raise InvalidInputError(f"frame size changed mid-sequence: "
                                    f"{self.frame_shape} -> {frame.shape}")
        cfg = self.cfg
        p = cfg.patch_size
        frame_h, frame_w = frame.shape[:2]

        region = search_region(self.box, cfg.search_scale)
        patch = crop_resize(frame, region, p, p)
        feats = self._template_features(patch)
        responses = {k: dcf.detect(self.filters[k], v) for k, v in feats.items()}

        peak_template = 0.0
        if responses:
            mean_resp = np.mean(list(responses.values()), axis=0)
            peak_template = float(mean_resp.max())

        maps = []
        weights = []
        for i, name in enumerate(TEMPLATE_FEATURES):
            if name in responses:
                maps.append(resample_prob(to_prob(responses[name]), p, p))
                weights.append(cfg.fusion_weights[i])

        peak_hist = 0.0
        if self.use_ch:
            lk = histmodel.likelihood_map(patch, self.hist_weights, cfg.hist_bins)
            side = max(1, int(round(p / cfg.search_scale)))
            hist_resp = histmodel.box_response(lk, side, side)
            peak_hist = float(hist_resp.max())
            maps.append(to_prob(hist_resp))
            weights.append(cfg.fusion_weights[3])

        fused = fuse(maps, np.asarray(weights))
        pr, pc = peak(fused)
        peak_fused = float(fused[pr, pc])
        if not np.isfinite(peak_fused):
            raise InvalidInputError("fused response is non-finite")

        # displacement of the peak from the patch center, mapped back to frame pixels
        cx, cy = self.box.center
        cx += (pc + 0.5 - p / 2.0) * region.w / p
        cy += (pr + 0.5 - p / 2.0) * region.h / p

        samples = scalefilter.build_scale_samples(
            frame, (cx, cy), self.box.w, self.box.h, self.scale_factors, self.scale_win,
            cfg.scale_patch_size, SCALE_CELL)
        scale_idx, _ = scalefilter.detect_scale(self.scale_filter, samples)
        mult = self.scale_factors[scale_idx]

        new_w = min(max(self.box.w * mult, 4.0), float(frame_w))
        new_h = min(max(self.box.h * mult, 4.0), float(frame_h))
        nx = min(max(cx - new_w / 2.0, 0.0), frame_w - new_w)
        ny = min(max(cy - new_h / 2.0, 0.0), frame_h - new_h)
        new_box = BoundingBox(nx, ny, new_w, new_h)

        peaks = [peak_fused]
        hists = [self.history_fused]
        gammas = [cfg.gamma_q]
        if responses:
            peaks.append(peak_template)
            hists.append(self.history_template)
            gammas.append(cfg.gamma_t)
        if self.use_ch:
            peaks.append(peak_hist)
            hists.append(self.history_hist)
            gammas.append(cfg.gamma_s)
        updated = should_update(peaks, hists, gammas, cfg.history_len)

        if updated:
            filters, fg, bg, sfilt = self._learn(frame, new_box)
            self.filters = {k: dcf.lerp_filter(self.filters[k], filters[k], cfg.eta_t)
                            for k in self.filters}
            if self.use_ch:
                self.fg_hist = histmodel.lerp_hist(self.fg_hist, fg, cfg.eta_s)
                self.bg_hist = histmodel.lerp_hist(self.bg_hist, bg, cfg.eta_s)
                self.hist_weights = histmodel.hist_weights(self.fg_hist, self.bg_hist)
            self.scale_filter = scalefilter.lerp_scale(self.scale_filter, sfilt, cfg.eta_scale)

        # histories grow every frame, update or not, after the decision
        self.history_fused.append(peak_fused)
        self.history_template.append(peak_template)
        self.history_hist.append(peak_hist)

        self.box = new_box
        self.frame_index += 1
        return FrameResult(box=new_box, peak_fused=peak_fused, peak_template=peak_template,
                           peak_hist=peak_hist, updated=updated, scale_index=scale_idx)
