"""Joint embedding / row-sparse selection by alternating minimization.

The objective

    tr(Y L Y^T) + alpha (||Y - Y Z||_F^2 + lam ||Z||_{2,1}),   Y Y^T = I

is minimized through its half-quadratic augmentation: a ridge-type Z solve,
an eigenvector Y refresh, and a closed-form diagonal weight update P. Each
step is an exact block minimizer, so the smoothed (augmented) objective is
non-increasing across iterations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedding, initial_embedding, y_step
from .errors import DataError
from .solvers import l21_norm, update_P, z_step


@dataclass(frozen=True)
class JointConfig:
    """Knobs of the alternating optimizer.

    ``lambda_value`` overrides the automatic lam = lambda0 / rho choice, where
    lambda0 is the smallest penalty with an all-zero solution, computed once
    from the initial embedding and held fixed. ``shot_weights`` switches the
    row penalty to its length-weighted form.
    """

    dim: int
    alpha: float = 0.05
    rho: float = 10.0
    epsilon: float = 1e-8
    max_iters: int = 25
    rel_tol: float = 1e-6
    weighted: bool = False
    shot_weights: np.ndarray | None = None
    lambda_value: float | None = None
    zero_tol: float = 1e-8
    multi_start: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0:
            raise DataError("alpha must be positive")
        if self.rho <= 1:
            raise DataError("rho must be > 1")
        if self.epsilon <= 0:
            raise DataError("epsilon must be positive")
        if self.max_iters < 1:
            raise DataError("max_iters must be >= 1")
        if self.rel_tol <= 0:
            raise DataError("rel_tol must be positive")
        if self.multi_start < 1:
            raise DataError("multi_start must be >= 1")
        if self.weighted and self.shot_weights is not None:
            q = np.asarray(self.shot_weights, dtype=float)
            if np.any(q <= 0):
                raise DataError("shot_weights must be strictly positive")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    augmented_obj: float
    true_obj: float
    dz: float
    dy: float


@dataclass
class OptimizerTrace:
    records: list[TraceRecord] = field(default_factory=list)
    iterations_run: int = 0
    converged: bool = False
    lambda0: float = 0.0
    lambda_value: float = 0.0


def compute_lambda0(y: np.ndarray) -> float:
    """Smallest row-sparsity penalty for which Z = 0 is optimal: 2 max_i ||(Y^T Y)^i||_2."""
    y = np.asarray(y, dtype=float)
    gram = y.T @ y
    return 2.0 * float(np.linalg.norm(gram, axis=1).max())


def compute_objective(
    y: np.ndarray,
    z: np.ndarray,
    laplacian: np.ndarray,
    alpha: float,
    lam: float,
    epsilon: float,
    row_weights: np.ndarray | None = None,
) -> tuple[float, float]:
    """(augmented, true) objective values.

    The true objective uses the exact row penalty sum_i q_i ||z^i||_2
    (q_i = 1 unweighted); the augmented one uses its smoothing
    sum_i sqrt(q_i^2 ||z^i||^2 + eps), so augmented >= true with gap at most
    alpha * lam * N * sqrt(eps).
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    base = float(np.trace(y @ laplacian @ y.T)) + alpha * float(
        np.linalg.norm(y - y @ z) ** 2
    )
    sq = np.sum(z * z, axis=1)
    q2 = (
        np.ones(z.shape[0])
        if row_weights is None
        else np.asarray(row_weights, dtype=float) ** 2
    )
    smoothed = float(np.sqrt(q2 * sq + epsilon).sum())
    exact = l21_norm(z, row_weights)
    return base + alpha * lam * smoothed, base + alpha * lam * exact


def _perturbed_start(y0: Embedding, rng: np.random.Generator, scale: float = 0.05) -> Embedding:
    noisy = y0.y + scale * rng.standard_normal(y0.y.shape)
    q, _ = np.linalg.qr(noisy.T)
    return Embedding(y=q[:, : y0.dim].T, eigenvalues=y0.eigenvalues.copy())


def _initial_y(laplacian: np.ndarray, cfg: JointConfig) -> Embedding:
    try:
        return initial_embedding(laplacian, cfg.dim, cfg.zero_tol)
    except DataError:
        # Graph too disconnected to skip all zero modes: fall back to the
        # plain bottom-d eigenvectors so degenerate graphs still optimize.
        return y_step(laplacian, np.eye(laplacian.shape[0]), cfg.alpha, cfg.dim)


def _run_loop(
    laplacian: np.ndarray, y0: Embedding, lam: float, cfg: JointConfig
) -> tuple[Embedding, np.ndarray, OptimizerTrace]:
    n = laplacian.shape[0]
    q = None
    if cfg.weighted:
        q = (
            np.asarray(cfg.shot_weights, dtype=float)
            if cfg.shot_weights is not None
            else np.ones(n)
        )
        if q.shape != (n,):
            raise DataError(f"shot_weights must have length {n}")

    embedding = y0
    z = np.zeros((n, n))
    p_diag = np.ones(n)
    trace = OptimizerTrace(lambda0=0.0, lambda_value=lam)
    prev_aug = None
    best: tuple[float, Embedding, np.ndarray] | None = None
    for it in range(1, cfg.max_iters + 1):
        z_new = z_step(embedding.y, p_diag, lam)
        emb_new = y_step(laplacian, z_new, cfg.alpha, cfg.dim)
        p_diag = update_P(z_new, cfg.epsilon, q)
        aug, true = compute_objective(
            emb_new.y, z_new, laplacian, cfg.alpha, lam, cfg.epsilon, q
        )
        trace.records.append(
            TraceRecord(
                iteration=it,
                augmented_obj=aug,
                true_obj=true,
                dz=float(np.linalg.norm(z_new - z)),
                dy=float(np.linalg.norm(emb_new.y - embedding.y)),
            )
        )
        z, embedding = z_new, emb_new
        if best is None or aug < best[0]:
            best = (aug, embedding, z)
        trace.iterations_run = it
        if prev_aug is not None and abs(prev_aug - aug) <= cfg.rel_tol * max(
            abs(prev_aug), 1e-30
        ):
            trace.converged = True
            break
        prev_aug = aug
    assert best is not None
    _, embedding, z = best
    return embedding, z, trace


def optimize(
    laplacian: np.ndarray, cfg: JointConfig
) -> tuple[Embedding, np.ndarray, OptimizerTrace]:
    """Alternate Z / Y / P updates from the Laplacian-eigenmap initialization.

    Returns the best iterate (the last, under monotone descent), the N x N
    coefficient matrix, and the per-iteration trace. Hitting ``max_iters``
    without meeting ``rel_tol`` is reported via ``trace.converged``, not an
    error. With ``multi_start > 1``, additional runs start from perturbed
    initial embeddings and the lowest final augmented objective wins.
    """
    laplacian = np.asarray(laplacian, dtype=float)
    if not np.isfinite(laplacian).all():
        raise DataError("non-finite Laplacian")
    y0 = _initial_y(laplacian, cfg)
    lambda0 = compute_lambda0(y0.y)
    lam = cfg.lambda_value if cfg.lambda_value is not None else lambda0 / cfg.rho
    if lam <= 0:
        raise DataError("resolved lambda must be positive")

    rng = np.random.default_rng(cfg.seed)
    outcomes = [_run_loop(laplacian, y0, lam, cfg)]
    for _ in range(cfg.multi_start - 1):
        outcomes.append(_run_loop(laplacian, _perturbed_start(y0, rng), lam, cfg))
    embedding, z, trace = min(outcomes, key=lambda o: o[2].records[-1].augmented_obj)
    trace.lambda0 = lambda0
    return embedding, z, trace
