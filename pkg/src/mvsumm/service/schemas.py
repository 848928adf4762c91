"""Pydantic request/response models for the HTTP API and the thin-client CLI."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field

from ..dataset import Event, GroundTruth, MultiViewDataset, ShotRecord, build_dataset
from ..summarizer import Summary, SummaryEntry


class ShotMeta(BaseModel):
    view: int = Field(ge=1)
    shot: int = Field(ge=1)
    frame_start: int = Field(ge=1)
    frame_end: int = Field(ge=1)


class ViewFeatures(BaseModel):
    view: int = Field(ge=1)
    features: list[list[float]]  # one row per feature dimension


class DatasetPayload(BaseModel):
    views: list[ViewFeatures]
    shots: list[ShotMeta]
    normalize: bool = True

    def to_dataset(self) -> MultiViewDataset:
        ordered = sorted(self.views, key=lambda v: v.view)
        return build_dataset(
            [np.array(v.features, dtype=float) for v in ordered],
            [
                ShotRecord(
                    view_id=s.view,
                    shot_index=s.shot,
                    frame_start=s.frame_start,
                    frame_end=s.frame_end,
                )
                for s in self.shots
            ],
            normalize=self.normalize,
        )

    @classmethod
    def from_dataset(cls, dataset: MultiViewDataset) -> DatasetPayload:
        return cls(
            views=[
                ViewFeatures(view=k, features=m.tolist())
                for k, m in enumerate(dataset.views, start=1)
            ],
            shots=[
                ShotMeta(
                    view=s.view_id,
                    shot=s.shot_index,
                    frame_start=s.frame_start,
                    frame_end=s.frame_end,
                )
                for s in dataset.shots
            ],
        )


class EventPayload(BaseModel):
    event_id: int
    frame_start: int = Field(ge=1)
    frame_end: int = Field(ge=1)
    views: list[int] | None = None

    def to_event(self) -> Event:
        return Event(
            event_id=self.event_id,
            frame_start=self.frame_start,
            frame_end=self.frame_end,
            views=frozenset(self.views) if self.views is not None else None,
        )

    @classmethod
    def from_event(cls, event: Event) -> EventPayload:
        return cls(
            event_id=event.event_id,
            frame_start=event.frame_start,
            frame_end=event.frame_end,
            views=sorted(event.views) if event.views is not None else None,
        )


def events_to_ground_truth(events: list[EventPayload]) -> GroundTruth:
    return GroundTruth(events=tuple(e.to_event() for e in events))


class SummarizeOptions(BaseModel):
    dim: int | None = Field(default=None, ge=1)
    alpha: float = Field(default=0.05, gt=0)
    rho: float = Field(default=10.0, gt=1)
    epsilon: float = Field(default=1e-8, gt=0)
    max_iters: int = Field(default=25, ge=1)
    tol: float = Field(default=1e-6, gt=0)
    rho_sim: float = Field(default=10.0, gt=1)
    sim_max_iters: int = Field(default=100, ge=1)
    sim_tol: float = Field(default=1e-6, gt=0)
    laplacian: Literal["unnormalized", "normalized"] = "unnormalized"
    weighted: bool = False
    coverage: bool = False
    lengths: list[int] = Field(default_factory=lambda: [5], min_length=1)
    multi_start: int = Field(default=1, ge=1)
    seed: int = 0
    lambda_value: float | None = Field(default=None, gt=0)


class SummarizeRequest(BaseModel):
    dataset: DatasetPayload
    options: SummarizeOptions = SummarizeOptions()
    ground_truth: list[EventPayload] | None = None
    evaluate: bool = False
    eval_mode: Literal["event", "frame"] = "event"
    include_graph: bool = False


class SummaryEntryPayload(BaseModel):
    rank: int
    view: int
    shot: int
    frame_start: int
    frame_end: int
    weight: float

    def to_entry(self) -> SummaryEntry:
        return SummaryEntry(
            rank=self.rank,
            view_id=self.view,
            shot_index=self.shot,
            frame_start=self.frame_start,
            frame_end=self.frame_end,
            weight=self.weight,
        )


class SummaryPayload(BaseModel):
    requested_length: int
    coverage: bool
    entries: list[SummaryEntryPayload]

    def to_summary(self) -> Summary:
        return Summary(
            entries=tuple(e.to_entry() for e in self.entries),
            requested_length=self.requested_length,
            coverage=self.coverage,
        )

    @classmethod
    def from_summary(cls, summary: Summary) -> SummaryPayload:
        return cls(
            requested_length=summary.requested_length,
            coverage=summary.coverage,
            entries=[
                SummaryEntryPayload(
                    rank=e.rank,
                    view=e.view_id,
                    shot=e.shot_index,
                    frame_start=e.frame_start,
                    frame_end=e.frame_end,
                    weight=e.weight,
                )
                for e in summary.entries
            ],
        )


class CurvePoint(BaseModel):
    flat_index: int
    view: int
    shot: int
    weight: float


class TraceRow(BaseModel):
    iteration: int
    augmented_obj: float
    true_obj: float
    dz: float
    dy: float


class MetricsPayload(BaseModel):
    precision: float
    recall: float
    f_measure: float
    matched: list[int]
    redundant: int
    unmatched: int


class GraphPayload(BaseModel):
    w: list[list[float]]
    laplacian: list[list[float]]


class SummarizeResponse(BaseModel):
    summaries: list[SummaryPayload]
    weight_curve: list[CurvePoint]
    trace: list[TraceRow]
    manifest: dict
    metrics: MetricsPayload | None = None
    graph: GraphPayload | None = None


class SynthRequest(BaseModel):
    views: int = Field(default=2, ge=1)
    prototypes: int = Field(default=3, ge=1)
    copies: int = Field(default=2, ge=1)
    dim: int = Field(default=16, ge=1)
    noise_sigma: float = Field(default=0.01, ge=0)
    seed: int = 0
    shot_len: int = Field(default=32, ge=1)


class SynthResponse(BaseModel):
    dataset: DatasetPayload
    ground_truth: list[EventPayload]


class SegmentRequest(BaseModel):
    frames: list[list[float]]
    change_fraction: float = Field(default=0.75, gt=0)
    min_len: int = Field(default=32, ge=1)
    max_len: int = Field(default=96, ge=1)


class SegmentResponse(BaseModel):
    boundaries: list[tuple[int, int]]


class EvaluateRequest(BaseModel):
    summary: SummaryPayload
    ground_truth: list[EventPayload]
    mode: Literal["event", "frame"] = "event"


class HealthResponse(BaseModel):
    status: str
    version: str
