"""FastAPI application exposing the tracker.

One-shot endpoints (/track, /eval, /synth, /selftest) wrap the library for
batch jobs; /sessions manages long-lived interactive trackers fed one frame
at a time. All domain failures map to HTTP 400 with a plain-text detail.
"""

from __future__ import annotations

import base64
import binascii
import threading
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import FusetrackError, InvalidInputError
from ..features import ColorNamesTable
from ..geometry import BoundingBox
from ..image import read_image_bytes
from ..metrics import precision_curve, success_curve
from ..runner import run_ope
from ..selfcheck import run_selftest
from ..sequences import Sequence, format_box_line, format_box_text, parse_box_text
from ..synth import SynthSpec, generate
from ..tracker import Tracker, TrackerConfig, features_override, parse_config
from ..image import write_ppm
from . import schemas


def _decode_b64(data: str, what: str) -> bytes:
    try:
        return base64.b64decode(data, validate=True)
    except (binascii.Error, ValueError):
        raise InvalidInputError(f"{what}: invalid base64") from None


def _decode_frames(frames_b64: list[str]) -> list:
    return [read_image_bytes(_decode_b64(f, f"frame {i + 1}")) for i, f in enumerate(frames_b64)]


def _build_config(config_text: str | None, features: str | None) -> TrackerConfig:
    cfg = parse_config(config_text) if config_text else TrackerConfig()
    if features:
        cfg = features_override(cfg, features)
    return cfg


def _build_table(cn_table_b64: str | None) -> ColorNamesTable | None:
    if not cn_table_b64:
        return None
    raw = _decode_b64(cn_table_b64, "cn table")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InvalidInputError("cn table: not utf-8 text") from None
    return ColorNamesTable.load_text(text)


def _box_1based(box: BoundingBox) -> list[float]:
    return [box.x + 1, box.y + 1, box.w, box.h]


def _parse_box_json(values: list[float]) -> BoundingBox:
    x, y, w, h = (float(v) for v in values)
    return BoundingBox(x - 1, y - 1, w, h)


def _curve_csv(thresholds, values) -> str:
    lines = ["threshold,value"]
    lines += [f"{t:.10g},{v:.10g}" for t, v in zip(thresholds, values)]
    return "\n".join(lines) + "\n"


def eval_texts(results_text: str, groundtruth_text: str, fps: float | None) -> schemas.EvalResponse:
    """Shared by the /eval endpoint and the CLI-facing summary format."""
    from ..metrics import PRECISION_THRESHOLDS, SUCCESS_THRESHOLDS

    traj = parse_box_text(results_text, origin="results")
    gt = parse_box_text(groundtruth_text, origin="ground truth")
    if len(traj) != len(gt):
        raise InvalidInputError(f"results have {len(traj)} boxes but ground truth has {len(gt)}")
    pvals, p20 = precision_curve(traj, gt)
    svals, auc = success_curve(traj, gt)
    fps_txt = f"{fps:.2f}" if fps is not None else "n/a"
    summary = f"frames={len(traj)} precision@20={p20:.4f} auc={auc:.4f} fps={fps_txt}"
    return schemas.EvalResponse(
        precision_csv=_curve_csv(PRECISION_THRESHOLDS, pvals),
        success_csv=_curve_csv(SUCCESS_THRESHOLDS, svals),
        precision_at_20=p20,
        auc=auc,
        summary=summary,
    )


class _Session:
    def __init__(self, tracker: Tracker):
        self.tracker = tracker
        self.lock = threading.Lock()


def create_app() -> FastAPI:
    app = FastAPI(title="fusetrack", version=__version__)
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(FusetrackError)
    async def _domain_error(_request: Request, exc: FusetrackError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/track", response_model=schemas.TrackResponse)
    def track(req: schemas.TrackRequest):
        frames = _decode_frames(req.frames_b64)
        gt = parse_box_text(req.groundtruth_text, origin="ground truth")
        cfg = _build_config(req.config_text, req.features)
        table = _build_table(req.cn_table_b64)
        seq = Sequence(name="request", gt=gt, frames=frames)
        traj = run_ope(seq, cfg, table)
        return schemas.TrackResponse(
            results_text=format_box_text(traj.boxes),
            boxes=[_box_1based(b) for b in traj.boxes],
            peaks_fused=[float(p) for p in traj.peaks[:, 0]],
            peaks_template=[float(p) for p in traj.peaks[:, 1]],
            peaks_hist=[float(p) for p in traj.peaks[:, 2]],
            updated=list(traj.updated),
            fps=traj.fps,
            frame_count=len(frames),
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def evaluate(req: schemas.EvalRequest):
        return eval_texts(req.results_text, req.groundtruth_text, req.fps)

    @app.post("/synth", response_model=schemas.SynthResponse)
    def synth(req: schemas.SynthRequest):
        spec = SynthSpec.from_dict(req.spec)
        seq = generate(spec, seed=req.seed)
        return schemas.SynthResponse(
            name=seq.name,
            frames_b64=[base64.b64encode(write_ppm(f)).decode("ascii") for f in seq.frames],
            groundtruth_text=format_box_text(seq.gt),
            frame_count=len(seq),
        )

    @app.post("/selftest", response_model=schemas.SelftestResponse)
    def selftest():
        checks = run_selftest()
        return schemas.SelftestResponse(
            checks=[schemas.CheckModel(name=c.name, passed=c.passed, detail=c.detail)
                    for c in checks],
            all_passed=all(c.passed for c in checks),
        )

    @app.post("/sessions", response_model=schemas.SessionCreateResponse)
    def create_session(req: schemas.SessionCreateRequest):
        frame = read_image_bytes(_decode_b64(req.frame_b64, "frame"))
        cfg = _build_config(req.config_text, req.features)
        table = _build_table(req.cn_table_b64)
        tracker = Tracker(cfg, table)
        tracker.init(frame, _parse_box_json(req.box))
        sid = uuid.uuid4().hex
        with registry_lock:
            sessions[sid] = _Session(tracker)
        return schemas.SessionCreateResponse(
            session_id=sid, box=_box_1based(tracker.box), frame_index=tracker.frame_index)

    def _get_session(sid: str) -> _Session:
        with registry_lock:
            sess = sessions.get(sid)
        if sess is None:
            raise InvalidInputError(f"unknown session {sid}")
        return sess

    @app.post("/sessions/{sid}/frames", response_model=schemas.StepResponse)
    def step_session(sid: str, req: schemas.StepRequest):
        sess = _get_session(sid)
        frame = read_image_bytes(_decode_b64(req.frame_b64, "frame"))
        with sess.lock:
            res = sess.tracker.step(frame)
            idx = sess.tracker.frame_index
        return schemas.StepResponse(
            box=_box_1based(res.box),
            peak_fused=res.peak_fused,
            peak_template=res.peak_template,
            peak_hist=res.peak_hist,
            updated=res.updated,
            frame_index=idx,
        )

    @app.get("/sessions", response_model=schemas.SessionList)
    def list_sessions():
        with registry_lock:
            items = list(sessions.items())
        return schemas.SessionList(sessions=[
            schemas.SessionInfo(session_id=sid, frame_index=s.tracker.frame_index,
                                box=_box_1based(s.tracker.box))
            for sid, s in items
        ])

    @app.get("/sessions/{sid}", response_model=schemas.SessionInfo)
    def session_info(sid: str):
        sess = _get_session(sid)
        return schemas.SessionInfo(session_id=sid, frame_index=sess.tracker.frame_index,
                                   box=_box_1based(sess.tracker.box))

    @app.delete("/sessions/{sid}")
    def close_session(sid: str):
        with registry_lock:
            if sessions.pop(sid, None) is None:
                raise InvalidInputError(f"unknown session {sid}")
        return {"closed": sid}

    return app


app = create_app()
