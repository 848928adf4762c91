"""Multi-view shot data: containers, validation, segmentation, pooling, synthesis.

Shots are the atomic unit. A dataset holds one feature matrix per view
(columns are shot descriptors) plus shot metadata, flattened view-major
into a single global index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

NORM_TOL = 1e-9


@dataclass(frozen=True)
class ShotRecord:
    """One shot of one view: 1-based ids, inclusive frame range."""

    view_id: int
    shot_index: int
    frame_start: int
    frame_end: int

    def __post_init__(self):
        if self.view_id < 1 or self.shot_index < 1:
            raise DataError("view and shot indices are 1-based")
        if self.frame_start > self.frame_end:
            raise DataError(
                f"shot ({self.view_id},{self.shot_index}): frame_start > frame_end"
            )

    @property
    def duration(self) -> int:
        return self.frame_end - self.frame_start + 1


@dataclass(frozen=True)
class Event:
    """Ground-truth event; ``views=None`` means applicable to all views."""

    event_id: int
    frame_start: int
    frame_end: int
    views: frozenset[int] | None = None

    def __post_init__(self):
        if self.frame_start > self.frame_end:
            raise DataError(f"event {self.event_id}: frame_start > frame_end")

    def applies_to(self, view_id: int) -> bool:
        return self.views is None or view_id in self.views


@dataclass(frozen=True)
class GroundTruth:
    events: tuple[Event, ...]

    def __post_init__(self):
        ids = [e.event_id for e in self.events]
        if len(set(ids)) != len(ids):
            raise DataError("duplicate event ids in ground truth")


@dataclass
class MultiViewDataset:
    """K per-view feature matrices (D x N_k) with shot metadata in flat order.

    Columns are L2-normalized at construction unless disabled. The flat index
    enumerates shots view-major: all shots of view 1 (in temporal order),
    then view 2, and so on.
    """

    views: list[np.ndarray]
    shots: list[ShotRecord]
    offsets: np.ndarray = field(init=False)

    def __post_init__(self):
        sizes = [m.shape[1] for m in self.views]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)])

    @property
    def num_views(self) -> int:
        return len(self.views)

    @property
    def feature_dim(self) -> int:
        return self.views[0].shape[0]

    @property
    def num_shots(self) -> int:
        return int(self.offsets[-1])

    @property
    def view_sizes(self) -> list[int]:
        return [m.shape[1] for m in self.views]

    def flat_index(self, view_id: int, shot_index: int) -> int:
        """Map (view_id, shot_index), both 1-based, to the 0-based flat index."""
        if not 1 <= view_id <= self.num_views:
            raise DataError(f"view {view_id} out of range")
        if not 1 <= shot_index <= self.view_sizes[view_id - 1]:
            raise DataError(f"shot {shot_index} out of range for view {view_id}")
        return int(self.offsets[view_id - 1]) + shot_index - 1

    def shot_at(self, flat: int) -> ShotRecord:
        return self.shots[flat]

    def view_of(self, flat: int) -> int:
        """View id (1-based) owning the given flat index."""
        return int(np.searchsorted(self.offsets, flat, side="right"))

    def durations(self) -> np.ndarray:
        return np.array([s.duration for s in self.shots], dtype=float)

    def stacked(self) -> np.ndarray:
        """All views concatenated column-wise into a D x N matrix."""
        return np.concatenate(self.views, axis=1)


def normalize_columns(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=0)
    if np.any(norms < NORM_TOL):
        raise DataError("zero-norm descriptor: cannot L2-normalize")
    return matrix / norms


def build_dataset(
    views: list[np.ndarray],
    shots: list[ShotRecord],
    normalize: bool = True,
) -> MultiViewDataset:
    """Validate and assemble a dataset from raw per-view matrices and metadata.

    Raises DataError on dimension mismatch across views, metadata/column-count
    mismatch, non-finite values, or zero-norm descriptors when normalizing.
    """
    if not views:
        raise DataError("dataset needs at least one view")
    views = [np.asarray(m, dtype=float) for m in views]
    for k, m in enumerate(views, start=1):
        if m.ndim != 2 or m.shape[1] < 1:
            raise DataError(f"view {k}: feature matrix must be 2-D with >=1 column")
        if not np.isfinite(m).all():
            raise DataError(f"view {k}: non-finite feature values")
    dims = {m.shape[0] for m in views}
    if len(dims) != 1:
        raise DataError(f"feature dimension mismatch across views: {sorted(dims)}")

    sizes = [m.shape[1] for m in views]
    if len(shots) != sum(sizes):
        raise DataError(
            f"shot metadata ({len(shots)}) does not match feature columns ({sum(sizes)})"
        )
    pos = 0
    for k, nk in enumerate(sizes, start=1):
        block = shots[pos : pos + nk]
        pos += nk
        if any(s.view_id != k for s in block):
            raise DataError(f"shot metadata for view {k} out of order")
        for prev, cur in zip(block, block[1:]):
            if cur.shot_index <= prev.shot_index:
                raise DataError(f"view {k}: shot indices must be strictly increasing")
            if cur.frame_start <= prev.frame_end:
                raise DataError(f"view {k}: overlapping shot frame ranges")

    if normalize:
        views = [normalize_columns(m) for m in views]
    return MultiViewDataset(views=views, shots=list(shots))


def segment_shots(
    frame_descriptors: np.ndarray,
    change_fraction: float = 0.75,
    min_len: int = 32,
    max_len: int = 96,
) -> list[tuple[int, int]]:
    """Split a per-frame descriptor stream into shots; returns 1-based inclusive ranges.

    A boundary fires at frame t when the inter-frame change (Euclidean distance
    between consecutive descriptors) exceeds ``change_fraction`` times the
    largest change seen so far within the current shot. Shots shorter than
    ``min_len`` are merged into their predecessor, then any shot longer than
    ``max_len`` is split into near-equal pieces. The output tiles [1..T].
    """
    frames = np.asarray(frame_descriptors, dtype=float)
    if frames.ndim == 1:
        frames = frames[:, None]
    n = frames.shape[0]
    if min_len < 1 or min_len > max_len:
        raise DataError("need 1 <= min_len <= max_len")
    if n == 0:
        raise DataError("empty frame sequence")
    if n < min_len:
        raise DataError(f"sequence shorter than min_len ({n} < {min_len})")

    change = np.linalg.norm(np.diff(frames, axis=0), axis=1)

    boundaries = [0]  # 0-based start indices
    running_max = 0.0
    for t in range(1, n):
        c = change[t - 1]
        if c > change_fraction * running_max:
            boundaries.append(t)
            running_max = 0.0
        else:
            running_max = max(running_max, c)
    segments = [
        (boundaries[i], boundaries[i + 1] if i + 1 < len(boundaries) else n)
        for i in range(len(boundaries))
    ]

    # Merge short segments left into their predecessor (the first one merges right).
    merged: list[list[int]] = []
    for start, end in segments:
        if merged and (end - start) < min_len:
            merged[-1][1] = end
        else:
            merged.append([start, end])
    if len(merged) > 1 and (merged[0][1] - merged[0][0]) < min_len:
        merged[1][0] = merged[0][0]
        merged.pop(0)

    # Split long segments into the minimal number of near-equal pieces.
    final: list[tuple[int, int]] = []
    for start, end in merged:
        length = end - start
        pieces = -(-length // max_len)
        cuts = np.linspace(start, end, pieces + 1).round().astype(int)
        for a, b in zip(cuts[:-1], cuts[1:]):
            final.append((int(a), int(b)))

    for a, b in final:
        if not min_len <= (b - a) <= max_len:
            raise DataError(
                f"no tiling of {n} frames with shot lengths in [{min_len},{max_len}]"
            )
    return [(a + 1, b) for a, b in final]


def pool_shot_features(
    frame_features: np.ndarray, boundaries: list[tuple[int, int]]
) -> np.ndarray:
    """Temporal mean pooling: column j is the L2-normalized mean of shot j's frames."""
    frames = np.asarray(frame_features, dtype=float)
    if frames.ndim == 1:
        frames = frames[:, None]
    cols = []
    for start, end in boundaries:
        if start > end:
            raise DataError(f"empty shot range [{start},{end}]")
        if start < 1 or end > frames.shape[0]:
            raise DataError(f"shot range [{start},{end}] outside frame sequence")
        cols.append(frames[start - 1 : end].mean(axis=0))
    return normalize_columns(np.stack(cols, axis=1))


def generate_synthetic(
    num_views: int,
    prototypes: int,
    copies_per_prototype_per_view: int,
    dim: int,
    noise_sigma: float,
    seed: int,
    shot_len: int = 32,
) -> tuple[MultiViewDataset, GroundTruth]:
    """Planted-prototype dataset: each view holds noisy copies of m orthogonal prototypes.

    View k's shots are laid out in prototype order, copies consecutive, each
    spanning ``shot_len`` frames; all views share one timeline so the event for
    prototype e covers exactly the frame range of its copies. Copies carry
    i.i.d. Gaussian noise with per-coordinate standard deviation ``noise_sigma``
    (the prototypes are unit-norm, so sigma is on the prototype scale).
    Deterministic given the seed.
    """
    m, c = prototypes, copies_per_prototype_per_view
    if m < 1 or c < 1 or num_views < 1:
        raise DataError("need at least one view, prototype and copy")
    if dim < m:
        raise DataError(f"dim must be >= prototypes for orthogonal planting ({dim} < {m})")
    rng = np.random.default_rng(seed)
    protos, _ = np.linalg.qr(rng.standard_normal((dim, m)))

    views: list[np.ndarray] = []
    shots: list[ShotRecord] = []
    for k in range(1, num_views + 1):
        cols = []
        slot = 0
        for e in range(m):
            for _ in range(c):
                vec = protos[:, e].copy()
                if noise_sigma > 0:
                    vec = vec + noise_sigma * rng.standard_normal(dim)
                cols.append(vec)
                slot += 1
                shots.append(
                    ShotRecord(
                        view_id=k,
                        shot_index=slot,
                        frame_start=(slot - 1) * shot_len + 1,
                        frame_end=slot * shot_len,
                    )
                )
        views.append(np.stack(cols, axis=1))

    events = tuple(
        Event(
            event_id=e + 1,
            frame_start=e * c * shot_len + 1,
            frame_end=(e + 1) * c * shot_len,
            views=frozenset(range(1, num_views + 1)),
        )
        for e in range(m)
    )
    return build_dataset(views, shots), GroundTruth(events=events)
