"""Service operations over the request/response models.

These functions are the single implementation behind both the FastAPI
endpoints and the CLI's local (in-process) mode.
"""

from __future__ import annotations

import numpy as np

from .. import pipeline
from ..dataset import generate_synthetic, segment_shots
from ..evaluation import evaluate_summary
from . import schemas


def run_synth(request: schemas.SynthRequest) -> schemas.SynthResponse:
    dataset, gt = generate_synthetic(
        num_views=request.views,
        prototypes=request.prototypes,
        copies_per_prototype_per_view=request.copies,
        dim=request.dim,
        noise_sigma=request.noise_sigma,
        seed=request.seed,
        shot_len=request.shot_len,
    )
    return schemas.SynthResponse(
        dataset=schemas.DatasetPayload.from_dataset(dataset),
        ground_truth=[schemas.EventPayload.from_event(e) for e in gt.events],
    )


def run_segment(request: schemas.SegmentRequest) -> schemas.SegmentResponse:
    boundaries = segment_shots(
        np.array(request.frames, dtype=float),
        change_fraction=request.change_fraction,
        min_len=request.min_len,
        max_len=request.max_len,
    )
    return schemas.SegmentResponse(boundaries=boundaries)


def run_summarize(request: schemas.SummarizeRequest) -> schemas.SummarizeResponse:
    dataset = request.dataset.to_dataset()
    opts = request.options
    options = pipeline.RunOptions(
        dim=opts.dim,
        alpha=opts.alpha,
        rho=opts.rho,
        epsilon=opts.epsilon,
        max_iters=opts.max_iters,
        tol=opts.tol,
        rho_sim=opts.rho_sim,
        sim_max_iters=opts.sim_max_iters,
        sim_tol=opts.sim_tol,
        laplacian=opts.laplacian,
        weighted=opts.weighted,
        multi_start=opts.multi_start,
        seed=opts.seed,
        lambda_value=opts.lambda_value,
    )
    gt = (
        schemas.events_to_ground_truth(request.ground_truth)
        if request.ground_truth is not None
        else None
    )
    lengths = tuple(opts.lengths)
    result = pipeline.run(
        dataset,
        options,
        lengths=lengths,
        coverage=opts.coverage,
        ground_truth=gt,
        evaluate=request.evaluate,
        eval_mode=request.eval_mode,
    )
    curve = result.analysis.curve
    points = [
        schemas.CurvePoint(
            flat_index=i,
            view=dataset.shot_at(i).view_id,
            shot=dataset.shot_at(i).shot_index,
            weight=float(curve.weights[i]),
        )
        for i in range(dataset.num_shots)
    ]
    trace_rows = [
        schemas.TraceRow(
            iteration=r.iteration,
            augmented_obj=r.augmented_obj,
            true_obj=r.true_obj,
            dz=r.dz,
            dy=r.dy,
        )
        for r in result.analysis.trace.records
    ]
    graph_payload = None
    if request.include_graph:
        graph_payload = schemas.GraphPayload(
            w=result.analysis.graph.w.tolist(),
            laplacian=result.analysis.graph.laplacian.tolist(),
        )
    return schemas.SummarizeResponse(
        summaries=[
            schemas.SummaryPayload.from_summary(result.summaries[length])
            for length in lengths
        ],
        weight_curve=points,
        trace=trace_rows,
        manifest=pipeline.build_manifest(dataset, options, result, lengths, opts.coverage),
        metrics=schemas.MetricsPayload(**result.metrics.to_dict())
        if result.metrics is not None
        else None,
        graph=graph_payload,
    )


def run_evaluate(request: schemas.EvaluateRequest) -> schemas.MetricsPayload:
    metrics = evaluate_summary(
        request.summary.to_summary(),
        schemas.events_to_ground_truth(request.ground_truth),
        mode=request.mode,
    )
    return schemas.MetricsPayload(**metrics.to_dict())
