"""From coefficient matrix to ranked, length-scalable summaries.

The weight curve is the vector of row norms of Z. Candidates are per-view
temporal local maxima of the curve; summaries of any requested length are cut
from one global ranking of the candidates, so longer summaries extend shorter
ones without re-optimization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import MultiViewDataset
from .errors import DataError


@dataclass(frozen=True)
class WeightCurve:
    """Per-shot importance ||z^i||_2, flat-indexed, with view offsets."""

    weights: np.ndarray
    offsets: np.ndarray

    def view_slice(self, view_id: int) -> np.ndarray:
        return self.weights[self.offsets[view_id - 1] : self.offsets[view_id]]


@dataclass(frozen=True)
class SummaryEntry:
    rank: int
    view_id: int
    shot_index: int
    frame_start: int
    frame_end: int
    weight: float


@dataclass(frozen=True)
class Summary:
    entries: tuple[SummaryEntry, ...]
    requested_length: int
    coverage: bool = False

    def shot_keys(self) -> set[tuple[int, int]]:
        return {(e.view_id, e.shot_index) for e in self.entries}


def weight_curve(z: np.ndarray, offsets: np.ndarray) -> WeightCurve:
    z = np.asarray(z, dtype=float)
    if not np.isfinite(z).all():
        raise DataError("non-finite coefficient matrix")
    return WeightCurve(weights=np.linalg.norm(z, axis=1), offsets=np.asarray(offsets))


def local_maxima(curve: WeightCurve) -> list[int]:
    """Flat indices of positive per-view temporal peaks.

    Boundary shots compare against their single neighbor; a plateau counts
    once, at its first shot.
    """
    out: list[int] = []
    for start, end in zip(curve.offsets[:-1], curve.offsets[1:]):
        w = curve.weights[start:end]
        for i in range(len(w)):
            if w[i] <= 0:
                continue
            if i > 0 and w[i] == w[i - 1]:  # plateau continuation
                continue
            if i > 0 and w[i] < w[i - 1]:
                continue
            if i + 1 < len(w) and w[i] < w[i + 1]:
                continue
            out.append(int(start) + i)
    return out


def _ranked(candidates: list[int], curve: WeightCurve, dataset: MultiViewDataset) -> list[int]:
    def key(flat: int):
        shot = dataset.shot_at(flat)
        return (-curve.weights[flat], shot.frame_start, shot.view_id, shot.shot_index)

    return sorted((c for c in candidates if curve.weights[c] > 0), key=key)


def select_summary(
    candidates: list[int],
    curve: WeightCurve,
    dataset: MultiViewDataset,
    length: int,
    coverage: bool = False,
) -> Summary:
    """Pick up to ``length`` candidate shots by weight.

    Without coverage the top-``length`` prefix of the global ranking is
    returned, so summaries of growing lengths nest. With coverage the global
    frame timeline is split into ``length`` equal bins, the best candidate of
    each nonempty bin is taken first, and remaining slots are filled by global
    rank. Zero-weight shots are never selected.
    """
    if length < 1:
        raise DataError("summary length must be >= 1")
    ranking = _ranked(candidates, curve, dataset)
    if coverage:
        lo = min((s.frame_start for s in dataset.shots), default=1)
        hi = max((s.frame_end for s in dataset.shots), default=1)
        edges = np.linspace(lo, hi + 1, length + 1)
        best_per_bin: dict[int, int] = {}
        for flat in ranking:
            shot = dataset.shot_at(flat)
            mid = 0.5 * (shot.frame_start + shot.frame_end)
            b = min(int(np.searchsorted(edges, mid, side="right")) - 1, length - 1)
            best_per_bin.setdefault(b, flat)
        chosen = [best_per_bin[b] for b in sorted(best_per_bin)]
        for flat in ranking:
            if len(chosen) >= length:
                break
            if flat not in chosen:
                chosen.append(flat)
        picked = chosen[:length]
        picked = [f for f in ranking if f in picked]  # re-rank by weight
    else:
        picked = ranking[:length]

    entries = tuple(
        SummaryEntry(
            rank=r,
            view_id=dataset.shot_at(flat).view_id,
            shot_index=dataset.shot_at(flat).shot_index,
            frame_start=dataset.shot_at(flat).frame_start,
            frame_end=dataset.shot_at(flat).frame_end,
            weight=float(curve.weights[flat]),
        )
        for r, flat in enumerate(picked, start=1)
    )
    return Summary(entries=entries, requested_length=length, coverage=coverage)
