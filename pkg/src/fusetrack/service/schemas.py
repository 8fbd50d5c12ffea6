"""Request/response models for the HTTP service.

Frames travel as base64-encoded image files (PPM/PGM natively; anything
Pillow reads when it is installed). Boxes in JSON are 1-based [x, y, w, h],
matching the on-disk text convention.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class TrackRequest(BaseModel):
    frames_b64: list[str] = Field(min_length=2, description="base64 image files, in order")
    groundtruth_text: str = Field(description="1-based x,y,w,h lines; first line seeds the tracker")
    config_text: str | None = None
    cn_table_b64: str | None = None
    features: str | None = Field(default=None, description="comma list: gray,hog,cn,ch")


class TrackResponse(BaseModel):
    results_text: str
    boxes: list[list[float]]
    peaks_fused: list[float]
    peaks_template: list[float]
    peaks_hist: list[float]
    updated: list[bool]
    fps: float
    frame_count: int


class EvalRequest(BaseModel):
    results_text: str
    groundtruth_text: str
    fps: float | None = None


class EvalResponse(BaseModel):
    precision_csv: str
    success_csv: str
    precision_at_20: float
    auc: float
    summary: str


class SynthRequest(BaseModel):
    spec: dict
    seed: int | None = None


class SynthResponse(BaseModel):
    name: str
    frames_b64: list[str]
    groundtruth_text: str
    frame_count: int


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestResponse(BaseModel):
    checks: list[CheckModel]
    all_passed: bool


class SessionCreateRequest(BaseModel):
    frame_b64: str
    box: list[float] = Field(min_length=4, max_length=4, description="1-based x,y,w,h")
    config_text: str | None = None
    cn_table_b64: str | None = None
    features: str | None = None


class SessionCreateResponse(BaseModel):
    session_id: str
    box: list[float]
    frame_index: int


class StepRequest(BaseModel):
    frame_b64: str


class StepResponse(BaseModel):
    box: list[float]
    peak_fused: float
    peak_template: float
    peak_hist: float
    updated: bool
    frame_index: int


class SessionInfo(BaseModel):
    session_id: str
    frame_index: int
    box: list[float]


class SessionList(BaseModel):
    sessions: list[SessionInfo]
