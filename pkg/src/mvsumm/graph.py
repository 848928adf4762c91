"""Sparse-coding similarity graph over all shots of all views.

Intra-view blocks come from zero-diagonal self-expression within a view;
inter-view blocks from coding one view over another as dictionary. The blocks
tile an N x N matrix which is symmetrized, row-rescaled to a common scale and
re-symmetrized before forming the graph Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import MultiViewDataset
from .errors import DataError
from .solvers import SolverConfig, selfexpress_lambda0, solve_l1_selfexpress

LAMBDA_FLOOR = 1e-12


@dataclass(frozen=True)
class GraphConfig:
    """Penalty scaling and Laplacian variant for similarity construction."""

    rho_sim: float = 10.0
    solver: SolverConfig = SolverConfig()
    laplacian: str = "unnormalized"  # or "normalized"

    def __post_init__(self):
        if self.rho_sim <= 1:
            raise DataError("rho_sim must be > 1")
        if self.laplacian not in ("unnormalized", "normalized"):
            raise DataError(f"unknown laplacian variant {self.laplacian!r}")


@dataclass
class SimilarityGraph:
    c_total: np.ndarray
    w: np.ndarray
    laplacian: np.ndarray
    block_index: np.ndarray  # view-boundary offsets, length K+1


def _coding_lambda(dictionary, targets, rho_sim, zero_diagonal):
    lam0 = selfexpress_lambda0(dictionary, targets, zero_diagonal=zero_diagonal)
    return max(lam0 / rho_sim, LAMBDA_FLOOR)


def intra_view_similarity(x_k: np.ndarray, cfg: GraphConfig = GraphConfig()) -> np.ndarray:
    """|C|^T from the zero-diagonal self-expression of one view; row i holds
    the similarities of shot i to every other shot of the view."""
    x_k = np.asarray(x_k, dtype=float)
    n_k = x_k.shape[1]
    if n_k < 2:
        return np.zeros((n_k, n_k))
    lam = _coding_lambda(x_k, x_k, cfg.rho_sim, zero_diagonal=True)
    codes, _ = solve_l1_selfexpress(x_k, x_k, lam, zero_diagonal=True, cfg=cfg.solver)
    return np.abs(codes).T


def inter_view_similarity(
    x_m: np.ndarray, x_n: np.ndarray, cfg: GraphConfig = GraphConfig()
) -> np.ndarray:
    """|C|^T from coding view m over view n's dictionary; result is N_m x N_n."""
    x_m = np.asarray(x_m, dtype=float)
    x_n = np.asarray(x_n, dtype=float)
    if x_m.shape[0] != x_n.shape[0]:
        raise DataError("views must share the feature dimension")
    lam = _coding_lambda(x_n, x_m, cfg.rho_sim, zero_diagonal=False)
    codes, _ = solve_l1_selfexpress(x_n, x_m, lam, zero_diagonal=False, cfg=cfg.solver)
    return np.abs(codes).T


def assemble_total(blocks: list[list[np.ndarray]]) -> np.ndarray:
    """Tile the K x K grid of similarity blocks into the N x N total matrix."""
    k = len(blocks)
    if any(len(row) != k for row in blocks):
        raise DataError("blocks must form a square K x K grid")
    sizes = [blocks[i][i].shape[0] for i in range(k)]
    for i in range(k):
        for j in range(k):
            if blocks[i][j].shape != (sizes[i], sizes[j]):
                raise DataError(
                    f"block ({i + 1},{j + 1}) has shape {blocks[i][j].shape}, "
                    f"expected {(sizes[i], sizes[j])}"
                )
    return np.block(blocks)


def symmetrize_normalize(c_total: np.ndarray) -> np.ndarray:
    """W from C_total: add the transpose, rescale rows by their infinity norm
    (all-zero rows stay zero), then re-symmetrize by averaging."""
    c_total = np.asarray(c_total, dtype=float)
    if np.any(c_total < 0):
        raise DataError("C_total must be nonnegative")
    w0 = c_total + c_total.T
    scale = np.abs(w0).max(axis=1, keepdims=True)
    scaled = np.divide(w0, scale, out=np.zeros_like(w0), where=scale > 0)
    return 0.5 * (scaled + scaled.T)


def laplacian(w: np.ndarray, variant: str = "unnormalized") -> np.ndarray:
    """Graph Laplacian of a symmetric nonnegative affinity matrix."""
    w = np.asarray(w, dtype=float)
    if not np.allclose(w, w.T, atol=1e-12):
        raise DataError("W must be symmetric")
    if np.any(w < 0):
        raise DataError("W must be nonnegative")
    degrees = w.sum(axis=1)
    if variant == "unnormalized":
        return np.diag(degrees) - w
    if variant == "normalized":
        # Isolated nodes keep a zero row/column (eigenvalue 0).
        inv_sqrt = np.divide(
            1.0, np.sqrt(degrees), out=np.zeros_like(degrees), where=degrees > 0
        )
        norm_w = w * inv_sqrt[:, None] * inv_sqrt[None, :]
        lap = np.diag((degrees > 0).astype(float)) - norm_w
        return 0.5 * (lap + lap.T)
    raise DataError(f"unknown laplacian variant {variant!r}")


def build_similarity_graph(
    dataset: MultiViewDataset, cfg: GraphConfig = GraphConfig()
) -> SimilarityGraph:
    """Run all intra/inter coding problems and assemble the similarity graph."""
    k = dataset.num_views
    blocks: list[list[np.ndarray]] = [[None] * k for _ in range(k)]
    for i in range(k):
        blocks[i][i] = intra_view_similarity(dataset.views[i], cfg)
        for j in range(k):
            if i != j:
                blocks[i][j] = inter_view_similarity(dataset.views[i], dataset.views[j], cfg)
    c_total = assemble_total(blocks)
    w = symmetrize_normalize(c_total)
    lap = laplacian(w, cfg.laplacian)
    return SimilarityGraph(
        c_total=c_total, w=w, laplacian=lap, block_index=dataset.offsets.copy()
    )
