"""End-to-end orchestration: graph -> joint optimization -> summaries -> metrics.

One ``analyze`` call runs the expensive optimization exactly once; summaries
for any number of requested lengths are cut from the resulting weight curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dataset import GroundTruth, MultiViewDataset
from .embedding import Embedding
from .errors import DataError
from .evaluation import Metrics, evaluate_summary
from .graph import GraphConfig, SimilarityGraph, build_similarity_graph
from .optimizer import JointConfig, OptimizerTrace, optimize
from .solvers import SolverConfig
from .summarizer import Summary, WeightCurve, local_maxima, select_summary, weight_curve


@dataclass(frozen=True)
class RunOptions:
    """Resolved pipeline configuration; ``dim=None`` defaults to 2K."""

    dim: int | None = None
    alpha: float = 0.05
    rho: float = 10.0
    epsilon: float = 1e-8
    max_iters: int = 25
    tol: float = 1e-6
    rho_sim: float = 10.0
    sim_max_iters: int = 100
    sim_tol: float = 1e-6
    laplacian: str = "unnormalized"
    weighted: bool = False
    multi_start: int = 1
    seed: int = 0
    lambda_value: float | None = None


@dataclass
class AnalysisResult:
    graph: SimilarityGraph
    embedding: Embedding
    z: np.ndarray
    trace: OptimizerTrace
    curve: WeightCurve
    candidates: list[int]
    dim: int


@dataclass
class RunResult:
    analysis: AnalysisResult
    summaries: dict[int, Summary] = field(default_factory=dict)
    metrics: Metrics | None = None


def resolve_dim(dataset: MultiViewDataset, options: RunOptions) -> int:
    dim = options.dim if options.dim is not None else 2 * dataset.num_views
    if not 1 <= dim < dataset.num_shots:
        raise DataError(
            f"embedding dim {dim} must lie in [1, N-1] for N={dataset.num_shots}"
        )
    return dim


def analyze(dataset: MultiViewDataset, options: RunOptions = RunOptions()) -> AnalysisResult:
    """Build the similarity graph and run the joint optimizer once."""
    dim = resolve_dim(dataset, options)
    graph_cfg = GraphConfig(
        rho_sim=options.rho_sim,
        solver=SolverConfig(max_iters=options.sim_max_iters, rel_tol=options.sim_tol),
        laplacian=options.laplacian,
    )
    graph = build_similarity_graph(dataset, graph_cfg)

    shot_weights = None
    if options.weighted:
        durations = dataset.durations()
        shot_weights = durations / durations.mean()

    joint_cfg = JointConfig(
        dim=dim,
        alpha=options.alpha,
        rho=options.rho,
        epsilon=options.epsilon,
        max_iters=options.max_iters,
        rel_tol=options.tol,
        weighted=options.weighted,
        shot_weights=shot_weights,
        lambda_value=options.lambda_value,
        multi_start=options.multi_start,
        seed=options.seed,
    )
    embedding, z, trace = optimize(graph.laplacian, joint_cfg)
    curve = weight_curve(z, dataset.offsets)
    return AnalysisResult(
        graph=graph,
        embedding=embedding,
        z=z,
        trace=trace,
        curve=curve,
        candidates=local_maxima(curve),
        dim=dim,
    )


def run(
    dataset: MultiViewDataset,
    options: RunOptions = RunOptions(),
    lengths: tuple[int, ...] = (5,),
    coverage: bool = False,
    ground_truth: GroundTruth | None = None,
    evaluate: bool = False,
    eval_mode: str = "event",
) -> RunResult:
    """Analyze once, then emit one summary per requested length.

    Metrics are computed for the longest requested summary when evaluation is
    on (ground truth required).
    """
    if not lengths:
        raise DataError("at least one summary length is required")
    if any(length < 1 for length in lengths):
        raise DataError("summary lengths must be positive")
    if evaluate and ground_truth is None:
        raise DataError("ground truth required for evaluation")

    analysis = analyze(dataset, options)
    result = RunResult(analysis=analysis)
    for length in lengths:
        result.summaries[length] = select_summary(
            analysis.candidates, analysis.curve, dataset, length, coverage
        )
    if evaluate:
        assert ground_truth is not None
        longest = max(lengths)
        result.metrics = evaluate_summary(result.summaries[longest], ground_truth, eval_mode)
    return result


def build_manifest(
    dataset: MultiViewDataset,
    options: RunOptions,
    result: RunResult,
    lengths: tuple[int, ...],
    coverage: bool,
) -> dict:
    """Auditable record of one run: resolved config plus optimizer outcome."""
    trace = result.analysis.trace
    return {
        "package_version": __version__,
        "config": {
            "dim": result.analysis.dim,
            "alpha": options.alpha,
            "rho": options.rho,
            "epsilon": options.epsilon,
            "max_iters": options.max_iters,
            "tol": options.tol,
            "rho_sim": options.rho_sim,
            "sim_max_iters": options.sim_max_iters,
            "sim_tol": options.sim_tol,
            "laplacian": options.laplacian,
            "weighted": options.weighted,
            "multi_start": options.multi_start,
            "seed": options.seed,
            "lengths": list(lengths),
            "coverage": coverage,
        },
        "lambda0": trace.lambda0,
        "lambda": trace.lambda_value,
        "iterations_run": trace.iterations_run,
        "converged": trace.converged,
        "num_views": dataset.num_views,
        "num_shots": dataset.num_shots,
        "feature_dim": dataset.feature_dim,
    }
