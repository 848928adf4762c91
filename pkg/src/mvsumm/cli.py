"""Command-line client for the summarization service.

Commands run against an in-process service by default; pass ``--server URL``
to talk to a running instance instead. Exit codes: 0 success, 1 usage error,
2 data error, 3 numerical failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import dataio
from .dataset import GroundTruth, ShotRecord
from .errors import DataError, NumericalError
from .service import schemas
from .service.client import ServiceClient


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default is in-process.")
@click.pass_context
def cli(ctx, server):
    """Multi-view shot summarization toolkit."""
    ctx.obj = ServiceClient(base_url=server)


def _parse_lengths(text: str) -> list[int]:
    try:
        lengths = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.UsageError(f"--lengths expects comma-separated integers, got {text!r}")
    if not lengths or any(length < 1 for length in lengths):
        raise click.UsageError("--lengths needs at least one positive integer")
    return lengths


def _dataset_payload(directory: Path) -> schemas.DatasetPayload:
    dataset = dataio.load_dataset(directory, normalize=False)
    payload = schemas.DatasetPayload.from_dataset(dataset)
    payload.normalize = True
    return payload


def _events_payload(gt: GroundTruth) -> list[schemas.EventPayload]:
    return [schemas.EventPayload.from_event(e) for e in gt.events]


@cli.command()
@click.option("--dataset", "dataset_dir", required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--lengths", default="5", show_default=True, help="Comma-separated summary lengths.")
@click.option("--dim", type=int, default=None, help="Embedding dimension (default 2K).")
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--rho", type=float, default=10.0, show_default=True)
@click.option("--epsilon", type=float, default=1e-8, show_default=True)
@click.option("--max-iters", type=int, default=25, show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--rho-sim", type=float, default=10.0, show_default=True)
@click.option("--sim-max-iters", type=int, default=100, show_default=True)
@click.option("--sim-tol", type=float, default=1e-6, show_default=True)
@click.option("--laplacian", type=click.Choice(["unnormalized", "normalized"]), default="unnormalized", show_default=True)
@click.option("--coverage", is_flag=True, help="Spread picks over equal frame-timeline bins.")
@click.option("--weighted", is_flag=True, help="Length-weighted row penalty (favors shorter shots).")
@click.option("--multi-start", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--evaluate", "do_evaluate", is_flag=True, help="Score the longest summary against ground truth.")
@click.option("--eval-mode", type=click.Choice(["event", "frame"]), default="event", show_default=True)
@click.option("--ground-truth", "gt_path", type=click.Path(path_type=Path), default=None)
@click.option("--dump-graph", is_flag=True, help="Also write W and Laplacian as CSV.")
@click.pass_obj
def summarize(client: ServiceClient, dataset_dir, out_dir, lengths, dim, alpha, rho,
              epsilon, max_iters, tol, rho_sim, sim_max_iters, sim_tol, laplacian,
              coverage, weighted, multi_start, seed, do_evaluate, eval_mode, gt_path,
              dump_graph):
    """Analyze a dataset once and write summaries for every requested length."""
    length_list = _parse_lengths(lengths)
    ground_truth = None
    if do_evaluate:
        candidate = gt_path if gt_path is not None else dataset_dir / dataio.GROUND_TRUTH_FILE
        if not Path(candidate).exists():
            raise DataError("ground truth required for --evaluate")
        ground_truth = _events_payload(dataio.read_ground_truth(Path(candidate)))

    request = schemas.SummarizeRequest(
        dataset=_dataset_payload(dataset_dir),
        options=schemas.SummarizeOptions(
            dim=dim, alpha=alpha, rho=rho, epsilon=epsilon, max_iters=max_iters,
            tol=tol, rho_sim=rho_sim, sim_max_iters=sim_max_iters, sim_tol=sim_tol,
            laplacian=laplacian, weighted=weighted, coverage=coverage,
            lengths=length_list, multi_start=multi_start, seed=seed,
        ),
        ground_truth=ground_truth,
        evaluate=do_evaluate,
        eval_mode=eval_mode,
        include_graph=dump_graph,
    )
    response = client.summarize(request)

    out_dir.mkdir(parents=True, exist_ok=True)
    dataio.write_weight_curve_csv(
        out_dir / "weight_curve.csv",
        [(p.flat_index, p.view, p.shot, p.weight) for p in response.weight_curve],
    )
    dataio.write_trace_csv(
        out_dir / "trace.csv",
        [(r.iteration, r.augmented_obj, r.true_obj, r.dz, r.dy) for r in response.trace],
    )
    for summary in response.summaries:
        dataio.write_json(
            out_dir / f"summary_{summary.requested_length}.json", summary.model_dump()
        )
    dataio.write_json(out_dir / "manifest.json", response.manifest)
    if response.metrics is not None:
        dataio.write_json(out_dir / "metrics.json", response.metrics.model_dump())
    if response.graph is not None:
        dataio.write_matrix_csv(out_dir / "graph_w.csv", np.array(response.graph.w))
        dataio.write_matrix_csv(
            out_dir / "graph_laplacian.csv", np.array(response.graph.laplacian)
        )

    manifest = response.manifest
    click.echo(
        f"analyzed {manifest['num_shots']} shots across {manifest['num_views']} views: "
        f"{'converged' if manifest['converged'] else 'max iterations'} "
        f"in {manifest['iterations_run']} iterations"
    )
    click.echo(f"wrote summaries for lengths {[s.requested_length for s in response.summaries]} to {out_dir}")
    if response.metrics is not None:
        m = response.metrics
        click.echo(f"P={m.precision:.4f} R={m.recall:.4f} F={m.f_measure:.4f}")


@cli.command()
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--views", type=int, default=2, show_default=True)
@click.option("--prototypes", type=int, default=3, show_default=True)
@click.option("--copies", type=int, default=2, show_default=True)
@click.option("--dim", type=int, default=16, show_default=True)
@click.option("--noise", "noise_sigma", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--shot-len", type=int, default=32, show_default=True)
@click.pass_obj
def synth(client: ServiceClient, out_dir, views, prototypes, copies, dim, noise_sigma, seed, shot_len):
    """Generate a planted-prototype dataset plus ground truth."""
    response = client.synth(
        schemas.SynthRequest(
            views=views, prototypes=prototypes, copies=copies, dim=dim,
            noise_sigma=noise_sigma, seed=seed, shot_len=shot_len,
        )
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    for view in response.dataset.views:
        dataio.write_view_features(
            out_dir / f"view_{view.view}.csv", view.view, np.array(view.features)
        )
    dataio.write_shot_metadata(
        out_dir / dataio.SHOTS_FILE,
        [
            ShotRecord(
                view_id=s.view, shot_index=s.shot,
                frame_start=s.frame_start, frame_end=s.frame_end,
            )
            for s in response.dataset.shots
        ],
    )
    gt = GroundTruth(events=tuple(e.to_event() for e in response.ground_truth))
    dataio.write_ground_truth(out_dir / dataio.GROUND_TRUTH_FILE, gt)
    click.echo(
        f"wrote {len(response.dataset.views)} views, {len(response.dataset.shots)} shots, "
        f"{len(response.ground_truth)} events to {out_dir}"
    )


@cli.command()
@click.option("--summary", "summary_path", required=True, type=click.Path(path_type=Path))
@click.option("--ground-truth", "gt_path", required=True, type=click.Path(path_type=Path))
@click.option("--mode", type=click.Choice(["event", "frame"]), default="event", show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@click.pass_obj
def evaluate(client: ServiceClient, summary_path, gt_path, mode, out_path):
    """Score a summary JSON file against ground truth."""
    try:
        summary = schemas.SummaryPayload.model_validate(dataio.read_json(summary_path))
    except ValueError as exc:
        raise DataError(f"{summary_path}: not a summary file: {exc}") from None
    gt = dataio.read_ground_truth(gt_path)
    metrics = client.evaluate(
        schemas.EvaluateRequest(summary=summary, ground_truth=_events_payload(gt), mode=mode)
    )
    if out_path is not None:
        dataio.write_json(out_path, metrics.model_dump())
    click.echo(
        f'{{"precision": {metrics.precision!r}, "recall": {metrics.recall!r}, '
        f'"f_measure": {metrics.f_measure!r}}}'
    )


@cli.command()
@click.option("--frames", "frames_path", required=True, type=click.Path(path_type=Path))
@click.option("--change-fraction", type=float, default=0.75, show_default=True)
@click.option("--min-len", type=int, default=32, show_default=True)
@click.option("--max-len", type=int, default=96, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None)
@click.pass_obj
def segment(client: ServiceClient, frames_path, change_fraction, min_len, max_len, out_path):
    """Segment a per-frame descriptor CSV into shots."""
    frames = dataio.read_frame_stream(frames_path)
    response = client.segment(
        schemas.SegmentRequest(
            frames=frames.tolist(), change_fraction=change_fraction,
            min_len=min_len, max_len=max_len,
        )
    )
    boundaries = [list(b) for b in response.boundaries]
    if out_path is not None:
        dataio.write_json(out_path, {"boundaries": boundaries})
    click.echo(f"{len(boundaries)} shots: {boundaries}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.Abort:
        return 1
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
