"""Readers and writers for the on-disk formats.

Per-view features: CSV, one row per feature dimension, one column per shot,
with a ``# view=<k> dim=<D> shots=<N>`` header line. Shot metadata, ground
truth, summaries and metrics are JSON. Weight curves and optimizer traces are
CSV. All floats are written with ``repr`` so outputs round-trip exactly and
identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .dataset import Event, GroundTruth, MultiViewDataset, ShotRecord, build_dataset
from .errors import DataError

VIEW_FILE_PATTERN = "view_*.csv"
SHOTS_FILE = "shots.json"
GROUND_TRUTH_FILE = "ground_truth.json"

_HEADER_RE = re.compile(r"#\s*view=(\d+)\s+dim=(\d+)\s+shots=(\d+)\s*$")


def _fmt(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_view_features(path: Path, view_id: int, matrix: np.ndarray) -> None:
    dim, n = matrix.shape
    lines = [f"# view={view_id} dim={dim} shots={n}"]
    lines.extend(_fmt(row) for row in matrix)
    path.write_text("\n".join(lines) + "\n")


def read_view_features(path: Path) -> tuple[int, np.ndarray]:
    lines = path.read_text().splitlines()
    if not lines:
        raise DataError(f"{path}: empty feature file")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise DataError(f"{path}: missing '# view=<k> dim=<D> shots=<N>' header")
    view_id, dim, n = (int(g) for g in m.groups())
    try:
        matrix = np.array(
            [[float(v) for v in line.split(",")] for line in lines[1:] if line.strip()]
        )
    except ValueError as exc:
        raise DataError(f"{path}: malformed feature row: {exc}") from None
    if matrix.shape != (dim, n):
        raise DataError(
            f"{path}: header promises {dim}x{n} but file holds {matrix.shape[0]}x{matrix.shape[1]}"
        )
    return view_id, matrix


def write_shot_metadata(path: Path, shots: list[ShotRecord]) -> None:
    payload = [
        {
            "view": s.view_id,
            "shot": s.shot_index,
            "frame_start": s.frame_start,
            "frame_end": s.frame_end,
        }
        for s in shots
    ]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_shot_metadata(path: Path) -> list[ShotRecord]:
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    try:
        return [
            ShotRecord(
                view_id=int(item["view"]),
                shot_index=int(item["shot"]),
                frame_start=int(item["frame_start"]),
                frame_end=int(item["frame_end"]),
            )
            for item in payload
        ]
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: malformed shot record: {exc}") from None


def write_ground_truth(path: Path, gt: GroundTruth) -> None:
    payload = [
        {
            "event_id": e.event_id,
            "frame_start": e.frame_start,
            "frame_end": e.frame_end,
            **({"views": sorted(e.views)} if e.views is not None else {}),
        }
        for e in gt.events
    ]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_ground_truth(path: Path) -> GroundTruth:
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    try:
        events = tuple(
            Event(
                event_id=int(item["event_id"]),
                frame_start=int(item["frame_start"]),
                frame_end=int(item["frame_end"]),
                views=frozenset(int(v) for v in item["views"])
                if item.get("views") is not None
                else None,
            )
            for item in payload
        )
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: malformed event record: {exc}") from None
    return GroundTruth(events=events)


def save_dataset(directory: Path, dataset: MultiViewDataset) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for k, matrix in enumerate(dataset.views, start=1):
        write_view_features(directory / f"view_{k}.csv", k, matrix)
    write_shot_metadata(directory / SHOTS_FILE, dataset.shots)


def load_dataset(directory: Path, normalize: bool = True) -> MultiViewDataset:
    """Load view feature files plus shot metadata from a directory."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory}: not a directory")
    view_paths = sorted(directory.glob(VIEW_FILE_PATTERN))
    if not view_paths:
        raise DataError(f"{directory}: no {VIEW_FILE_PATTERN} feature files")
    by_id = {}
    for p in view_paths:
        view_id, matrix = read_view_features(p)
        if view_id in by_id:
            raise DataError(f"{directory}: duplicate feature file for view {view_id}")
        by_id[view_id] = matrix
    if sorted(by_id) != list(range(1, len(by_id) + 1)):
        raise DataError(f"{directory}: view ids must be 1..K, got {sorted(by_id)}")
    shots_path = directory / SHOTS_FILE
    if not shots_path.exists():
        raise DataError(f"{directory}: missing {SHOTS_FILE}")
    shots = read_shot_metadata(shots_path)
    return build_dataset([by_id[k] for k in sorted(by_id)], shots, normalize=normalize)


def read_frame_stream(path: Path) -> np.ndarray:
    """Per-frame descriptor CSV: one row per frame, '#' lines ignored."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError as exc:
            raise DataError(f"{path}: malformed frame row: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no frames")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataError(f"{path}: inconsistent descriptor widths {sorted(widths)}")
    return np.array(rows)


def write_matrix_csv(path: Path, matrix: np.ndarray) -> None:
    lines = [_fmt(row) for row in np.atleast_2d(matrix)]
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_weight_curve_csv(path: Path, rows: list[tuple[int, int, int, float]]) -> None:
    lines = ["flat_index,view,shot,weight"]
    lines.extend(f"{i},{v},{s},{repr(float(w))}" for i, v, s, w in rows)
    path.write_text("\n".join(lines) + "\n")


def write_trace_csv(path: Path, rows: list[tuple[int, float, float, float, float]]) -> None:
    lines = ["iteration,augmented_obj,true_obj,dZ,dY"]
    lines.extend(
        f"{it},{repr(float(a))},{repr(float(t))},{repr(float(dz))},{repr(float(dy))}"
        for it, a, t, dz, dy in rows
    )
    path.write_text("\n".join(lines) + "\n")
