"""Event-level and frame-level scoring of summaries against ground truth.

A summary shot matches an event when its frame range overlaps the event's and
its view is applicable. Each shot is assigned to at most one event (largest
overlap, earliest event id on ties); the first shot on an event is a true
positive, later ones are redundant. Recall counts matched events; precision
divides by the full summary size so redundant and unmatched shots both hurt.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataset import GroundTruth
from .errors import DataError
from .summarizer import Summary


@dataclass(frozen=True)
class Assignment:
    """Per-shot event assignment, in summary rank order (None = unmatched)."""

    per_shot: tuple[int | None, ...]
    matched_events: tuple[int, ...]
    redundant_count: int
    unmatched_count: int


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f_measure: float
    matched_events: tuple[int, ...]
    redundant_count: int
    unmatched_shot_count: int

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
            "matched": list(self.matched_events),
            "redundant": self.redundant_count,
            "unmatched": self.unmatched_shot_count,
        }


def _overlap(a_start: int, a_end: int, b_start: int, b_end: int) -> int:
    return max(0, min(a_end, b_end) - max(a_start, b_start) + 1)


def f_measure(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def match_events(summary: Summary, gt: GroundTruth) -> Assignment:
    per_shot: list[int | None] = []
    seen: list[int] = []
    redundant = 0
    for entry in summary.entries:
        best: tuple[int, int] | None = None  # (-overlap, event_id)
        for event in gt.events:
            if not event.applies_to(entry.view_id):
                continue
            ov = _overlap(entry.frame_start, entry.frame_end, event.frame_start, event.frame_end)
            if ov > 0 and (best is None or (-ov, event.event_id) < best):
                best = (-ov, event.event_id)
        if best is None:
            per_shot.append(None)
        else:
            event_id = best[1]
            per_shot.append(event_id)
            if event_id in seen:
                redundant += 1
            else:
                seen.append(event_id)
    return Assignment(
        per_shot=tuple(per_shot),
        matched_events=tuple(seen),
        redundant_count=redundant,
        unmatched_count=sum(1 for e in per_shot if e is None),
    )


def precision_recall_f(assignment: Assignment, gt: GroundTruth, summary_size: int) -> Metrics:
    if not gt.events:
        raise DataError("no events to score")
    matched = len(assignment.matched_events)
    recall = matched / len(gt.events)
    precision = matched / summary_size if summary_size > 0 else 0.0
    return Metrics(
        precision=precision,
        recall=recall,
        f_measure=f_measure(precision, recall),
        matched_events=tuple(sorted(assignment.matched_events)),
        redundant_count=assignment.redundant_count,
        unmatched_shot_count=assignment.unmatched_count,
    )


def evaluate_events(summary: Summary, gt: GroundTruth) -> Metrics:
    return precision_recall_f(match_events(summary, gt), gt, len(summary.entries))


def evaluate_frames(summary: Summary, gt: GroundTruth) -> Metrics:
    """Frame-unit variant: overlap frame counts replace event counts.

    Recall is the covered fraction of event frames (per event, views
    respected); precision is the fraction of summary frames lying inside some
    applicable event.
    """
    if not gt.events:
        raise DataError("no events to score")
    event_total = 0
    event_covered = 0
    matched_ids = []
    for event in gt.events:
        duration = event.frame_end - event.frame_start + 1
        event_total += duration
        frames = set()
        for entry in summary.entries:
            if not event.applies_to(entry.view_id):
                continue
            lo = max(entry.frame_start, event.frame_start)
            hi = min(entry.frame_end, event.frame_end)
            if lo <= hi:
                frames.update(range(lo, hi + 1))
        if frames:
            matched_ids.append(event.event_id)
        event_covered += len(frames)

    shot_total = 0
    shot_covered = 0
    unmatched_shots = 0
    for entry in summary.entries:
        duration = entry.frame_end - entry.frame_start + 1
        shot_total += duration
        frames = set()
        for event in gt.events:
            if not event.applies_to(entry.view_id):
                continue
            lo = max(entry.frame_start, event.frame_start)
            hi = min(entry.frame_end, event.frame_end)
            if lo <= hi:
                frames.update(range(lo, hi + 1))
        if not frames:
            unmatched_shots += 1
        shot_covered += len(frames)

    precision = shot_covered / shot_total if shot_total > 0 else 0.0
    recall = event_covered / event_total
    return Metrics(
        precision=precision,
        recall=recall,
        f_measure=f_measure(precision, recall),
        matched_events=tuple(sorted(matched_ids)),
        redundant_count=0,
        unmatched_shot_count=unmatched_shots,
    )


def evaluate_summary(summary: Summary, gt: GroundTruth, mode: str = "event") -> Metrics:
    if mode == "event":
        return evaluate_events(summary, gt)
    if mode == "frame":
        return evaluate_frames(summary, gt)
    raise DataError(f"unknown evaluation mode {mode!r}")
