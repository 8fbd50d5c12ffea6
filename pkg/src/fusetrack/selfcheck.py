"""Built-in numerical self-checks behind the `selftest` command.

Each check re-derives an expected result through an independent route (dense
linear algebra, explicit loops, closed forms) and compares the production
code against it. These mirror the heavier test-suite oracles in a quick,
deterministic form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dcf, fusion, histmodel, metrics, scalefilter
from .features import hann2d
from .geometry import BoundingBox
from .image import resample_grid


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _dense_filter_response(x: np.ndarray, y: np.ndarray, z: np.ndarray, lam: float) -> np.ndarray:
    """Solve the cyclic-shift ridge regression literally and score z at every shift.

    The training sample shifted by (i, j) carries target y[-i, -j], so content
    sitting exactly where it was trained scores the full label: the response
    to z == x peaks at the label center and moves with any cyclic shift of z.
    """
    m, n = x.shape
    rows = []
    targets = []
    for i in range(m):
        for j in range(n):
            rows.append(np.roll(np.roll(x, i, axis=0), j, axis=1).ravel())
            targets.append(y[(-i) % m, (-j) % n])
    a = np.array(rows)
    w = np.linalg.solve(a.T @ a + lam * np.eye(m * n), a.T @ np.array(targets))
    resp = np.empty((m, n))
    for u in range(m):
        for v in range(n):
            resp[u, v] = w @ np.roll(np.roll(z, -u, axis=0), -v, axis=1).ravel()
    return resp


def _check_dcf_oracle(rng) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        m = int(rng.integers(2, 7))
        n = int(rng.integers(2, 7))
        x = rng.standard_normal((m, n))
        z = rng.standard_normal((m, n))
        y = dcf.make_label(m, n, max(m / 2, 1), max(n / 2, 1)).grid
        filt = dcf.train_filter(x, y, lam=1e-3)
        got = dcf.detect(filt, z)
        want = _dense_filter_response(x, y, z, 1e-3)
        worst = max(worst, float(np.abs(got - want).max()))
    return CheckResult("filter-matches-dense-regression", worst < 1e-6, f"max |diff| = {worst:.3e}")


def _check_dcf_shift(rng) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        m, n = int(rng.integers(3, 8)), int(rng.integers(3, 8))
        x = rng.standard_normal((m, n, 2))
        y = dcf.make_label(m, n, m / 2, n / 2).grid
        filt = dcf.train_filter(x, y)
        base = dcf.detect(filt, x)
        p, q = int(rng.integers(0, m)), int(rng.integers(0, n))
        shifted = dcf.detect(filt, np.roll(np.roll(x, p, axis=0), q, axis=1))
        worst = max(worst, float(np.abs(shifted - np.roll(np.roll(base, p, axis=0), q, axis=1)).max()))
    return CheckResult("filter-shift-equivariance", worst < 1e-10, f"max |diff| = {worst:.3e}")


def _check_fusion_optimal(rng) -> CheckResult:
    ok = True
    for _ in range(5):
        maps = [fusion.to_prob(rng.standard_normal((3, 3))) for _ in range(3)]
        q = fusion.fuse(maps)
        best = sum(fusion.kl_div(p, q) for p in maps)
        for _ in range(200):
            cand = rng.random(9) + 1e-9
            cand = (cand / cand.sum()).reshape(3, 3)
            if sum(fusion.kl_div(p, cand) for p in maps) < best - 1e-12:
                ok = False
    return CheckResult("fusion-minimizes-divergence", ok, "mean beat every random candidate")


def _check_box_means(rng) -> CheckResult:
    worst = 0.0
    for rows, cols in ((1, 1), (3, 5), (7, 4), (10, 10)):
        lk = rng.random((rows, cols))
        for bh in range(1, rows + 1):
            for bw in range(1, cols + 1):
                got = histmodel.box_response(lk, bh, bw)
                for m in range(rows):
                    for n in range(cols):
                        t = max(m - (bh - 1) // 2, 0)
                        b = min(m - (bh - 1) // 2 + bh, rows)
                        l = max(n - (bw - 1) // 2, 0)
                        r = min(n - (bw - 1) // 2 + bw, cols)
                        want = lk[t:b, l:r].mean()
                        worst = max(worst, abs(got[m, n] - want))
    return CheckResult("window-means-match-loops", worst <= 1e-12, f"max |diff| = {worst:.3e}")


def _check_hist_weights(_rng) -> CheckResult:
    fg = np.array([0.2, 0.3, 0.5, 0.0])
    bg = np.array([0.2, 0.1, 0.0, 0.0])
    got = histmodel.hist_weights(fg, bg)
    # 0.3/(0.3+0.1) lands one ulp below 0.75 in doubles; the others are exact
    ok = (got[0] == 0.5 and got[2] == 1.0 and got[3] == 0.0
          and got[1] == 0.3 / (0.3 + 0.1) and abs(got[1] - 0.75) <= np.spacing(0.75))
    return CheckResult("histogram-weight-values", ok, f"got {got.tolist()}")


def _check_label(_rng) -> CheckResult:
    lab = dcf.make_label(37, 37, 8.0, 10.0)
    ok = lab.grid[18, 18] == 1.0 and abs(lab.sigma - np.sqrt(80.0) / 16.0) < 1e-12
    return CheckResult("label-peak-and-width", ok, f"sigma = {lab.sigma:.6f}")


def _check_scale_self(rng) -> CheckResult:
    samples = rng.standard_normal((64, 33))
    filt = scalefilter.train_scale(samples)
    idx, _ = scalefilter.detect_scale(filt, samples)
    return CheckResult("scale-self-detection", idx == 16, f"argmax index = {idx}")


def _check_metrics(_rng) -> CheckResult:
    boxes = [BoundingBox(i, i, 10, 10) for i in range(5)]
    pvals, p20 = metrics.precision_curve(boxes, boxes)
    svals, auc = metrics.success_curve(boxes, boxes)
    ok = (p20 == 1.0 and np.all(pvals == 1.0)
          and abs(auc - 20.0 / 21.0) < 1e-12 and svals[0] == 1.0 and svals[20] == 0.0)
    return CheckResult("perfect-trajectory-metrics", ok, f"auc = {auc:.6f}, p20 = {p20}")


def _check_resample(rng) -> CheckResult:
    g = rng.random((6, 9))
    same = resample_grid(g, 6, 9)
    ok = np.abs(same - g).max() < 1e-12
    two = resample_grid(np.array([[0.0, 1.0], [0.0, 1.0]]), 2, 3)
    ok = ok and np.abs(two[:, 1] - 0.5).max() < 1e-12
    return CheckResult("resampling-identity-and-midpoints", ok, "6x9 identity, 2x3 midpoint column")


def _check_hann(_rng) -> CheckResult:
    w = hann2d(5, 7)
    want = np.outer(np.hanning(5), np.hanning(7))
    ok = np.array_equal(w, want) and hann2d(1, 1)[0, 0] == 1.0
    return CheckResult("window-separability", ok, "outer-product form")


_CHECKS = (
    _check_dcf_oracle,
    _check_dcf_shift,
    _check_fusion_optimal,
    _check_box_means,
    _check_hist_weights,
    _check_label,
    _check_scale_self,
    _check_metrics,
    _check_resample,
    _check_hann,
)


def run_selftest(seed: int = 0) -> list[CheckResult]:
    results = []
    for fn in _CHECKS:
        rng = np.random.default_rng(seed)
        try:
            r = fn(rng)
            # comparisons on numpy scalars yield np.bool_; keep results plain
            results.append(CheckResult(r.name, bool(r.passed), r.detail))
        except Exception as e:  # a crash is a failed check, not a crash of selftest
            results.append(CheckResult(fn.__name__.removeprefix("_check_"), False, f"raised {e!r}"))
    return results
