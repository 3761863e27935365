"""Pydantic request/response models for the analysis API.

The service streams persisted canonical-JSON bytes, so these models
document and pin the wire schema rather than re-serializing payloads.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class InjectionOut(BaseModel):
    function_index: int
    dynamic_event_index: int
    bit: int = Field(ge=0, le=63)


class RunSummaryOut(BaseModel):
    run_id: str
    kind: str  # golden | faulty
    injection: InjectionOut | None = None


class FunctionStatusOut(BaseModel):
    function_index: int
    name: str
    status: str  # match | differ
    is_injection_site: bool


class SourceRefOut(BaseModel):
    file: str
    line_start: int
    line_end: int


class StyledNodeOut(BaseModel):
    id: str
    rank: int
    x: float
    y: float
    style: str  # head_yellow | tail_red | block_default
    source: SourceRefOut | None = None


class StyledEdgeOut(BaseModel):
    from_: str = Field(alias="from")
    to: str
    weight: int
    style: str  # gray | red
    intensity: float | None = None
    reversed: bool
    golden_count: int | None = None
    faulty_count: int | None = None
    count: int | None = None
    freq: float | None = None
    mean_w: float | None = None
    runs: int | None = None

    model_config = {"populate_by_name": True}


class CanvasOut(BaseModel):
    width: float
    height: float


class StyledGraphOut(BaseModel):
    function_index: int
    function_name: str
    run_id: str | None
    view: str  # diff | global | cvg
    threshold: int
    max_weight: int
    canvas: CanvasOut
    nodes: list[StyledNodeOut]
    edges: list[StyledEdgeOut]


class RankingEntryOut(BaseModel):
    function_index: int
    function_name: str
    from_: str = Field(alias="from")
    to: str
    score: float
    freq: float
    max_w: int
    mean_w: float

    model_config = {"populate_by_name": True}


class ApiErrorOut(BaseModel):
    code: str
    message: str
