"""Half-quadratic solvers and primitives for the sparse coding stages.

The elementwise-smoothed l1 problem

    min_C ||T - D C||_F^2 + lam * sum_ij sqrt(c_ij^2 + eps)

is solved per column by alternating the multiplicative half-quadratic weight
update p = 1/(2 sqrt(c^2 + eps)) with an exact ridge-type linear solve
(G + lam diag(p)) c = D^T t. Both steps minimize the same augmented bound, so
the smoothed objective is non-increasing. The same weight/solve pattern drives
the row-sparse selection stage: update_P and z_step below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError


@dataclass(frozen=True)
class SolverConfig:
    """Smoothing and stopping parameters for the inner coding solves."""

    epsilon: float = 1e-8
    max_iters: int = 100
    rel_tol: float = 1e-6

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DataError("epsilon must be positive")
        if self.max_iters < 1:
            raise DataError("max_iters must be >= 1")
        if self.rel_tol <= 0:
            raise DataError("rel_tol must be positive")


def selfexpress_lambda0(
    dictionary: np.ndarray, targets: np.ndarray, zero_diagonal: bool = False
) -> float:
    """Smallest penalty for which the all-zero code is optimal: 2*max|D^T T|.

    With the zero-diagonal constraint the diagonal of D^T T is excluded,
    since those atoms never participate in their own column's solve.
    """
    corr = np.abs(dictionary.T @ targets)
    if zero_diagonal:
        if corr.shape[0] != corr.shape[1]:
            raise DataError("zero_diagonal requires dictionary and targets of equal size")
        corr = corr.copy()
        np.fill_diagonal(corr, 0.0)
    return 2.0 * float(corr.max()) if corr.size else 0.0


def solve_l1_selfexpress(
    dictionary: np.ndarray,
    targets: np.ndarray,
    lam: float,
    zero_diagonal: bool = False,
    cfg: SolverConfig = SolverConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed l1 sparse coding of ``targets`` over ``dictionary``.

    Parameters
    ----------
    dictionary : (D, Nd) array
    targets : (D, Nt) array
    lam : positive l1 penalty
    zero_diagonal : pin c_jj = 0 by excluding atom j from column j's solve
        (requires Nd == Nt)
    cfg : smoothing constant and stopping rule

    Returns
    -------
    C : (Nd, Nt) coefficient matrix, diagonal exactly zero when constrained
    history : per-iteration smoothed objective values (non-increasing)
    """
    dictionary = np.asarray(dictionary, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if dictionary.ndim != 2 or targets.ndim != 2:
        raise DataError("dictionary and targets must be 2-D")
    if dictionary.shape[0] != targets.shape[0]:
        raise DataError("dictionary and targets must share the feature dimension")
    if not (np.isfinite(dictionary).all() and np.isfinite(targets).all()):
        raise DataError("non-finite inputs")
    if lam <= 0:
        raise DataError("lambda must be positive")
    nd, nt = dictionary.shape[1], targets.shape[1]
    if zero_diagonal and nd != nt:
        raise DataError("zero_diagonal requires square coefficient matrix (Nd == Nt)")

    gram = dictionary.T @ dictionary
    rhs_full = dictionary.T @ targets

    if zero_diagonal:
        keep = np.array([[i for i in range(nd) if i != j] for j in range(nt)])
    else:
        keep = np.tile(np.arange(nd), (nt, 1))
    # Per-target reduced systems, stacked for batched solves.
    grams = gram[keep[:, :, None], keep[:, None, :]]
    rhs = rhs_full[keep, np.arange(nt)[:, None]]
    n_eff = keep.shape[1]

    def embed(codes: np.ndarray) -> np.ndarray:
        full = np.zeros((nt, nd))
        full[np.arange(nt)[:, None], keep] = codes
        return full.T

    def objective(c_full: np.ndarray) -> float:
        resid = targets - dictionary @ c_full
        return float(
            np.sum(resid * resid) + lam * np.sum(np.sqrt(c_full * c_full + cfg.epsilon))
        )

    eye = np.arange(n_eff)
    weights = np.ones((nt, n_eff))  # first pass mirrors the P0 = I convention
    history = []
    codes = np.zeros((nt, n_eff))
    for _ in range(cfg.max_iters):
        systems = grams.copy()
        systems[:, eye, eye] += lam * weights
        try:
            codes = np.linalg.solve(systems, rhs[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"sparse coding system solve failed: {exc}") from None
        obj = objective(embed(codes))
        if history and abs(history[-1] - obj) <= cfg.rel_tol * max(abs(history[-1]), 1e-30):
            history.append(obj)
            break
        history.append(obj)
        weights = 1.0 / (2.0 * np.sqrt(codes * codes + cfg.epsilon))

    return embed(codes), np.array(history)


def l21_norm(z: np.ndarray, row_weights: np.ndarray | None = None) -> float:
    """Sum of Euclidean row norms; with weights, sum of q_i * ||z^i||_2."""
    z = np.asarray(z, dtype=float)
    if not np.isfinite(z).all():
        raise DataError("non-finite matrix")
    norms = np.linalg.norm(z, axis=1)
    if row_weights is not None:
        norms = np.asarray(row_weights, dtype=float) * norms
    return float(norms.sum())


def update_P(
    z: np.ndarray, epsilon: float, row_weights: np.ndarray | None = None
) -> np.ndarray:
    """Half-quadratic diagonal weights for the (optionally length-weighted) row penalty.

    Unweighted:  P_ii = 1 / (2 sqrt(||z^i||^2 + eps))
    Weighted:    P_ii = q_i^2 / (2 sqrt(q_i^2 ||z^i||^2 + eps))
    """
    if epsilon <= 0:
        raise DataError("epsilon must be positive")
    z = np.asarray(z, dtype=float)
    sq = np.sum(z * z, axis=1)
    if row_weights is None:
        return 1.0 / (2.0 * np.sqrt(sq + epsilon))
    q = np.asarray(row_weights, dtype=float)
    if q.shape != (z.shape[0],) or np.any(q <= 0):
        raise DataError("row_weights must be a strictly positive vector of length N")
    q2 = q * q
    return q2 / (2.0 * np.sqrt(q2 * sq + epsilon))


def z_step(y: np.ndarray, p_diag: np.ndarray, lam: float) -> np.ndarray:
    """Exact minimizer of ||Y - YZ||_F^2 + lam tr(Z^T P Z): solve (Y^T Y + lam P) Z = Y^T Y."""
    y = np.asarray(y, dtype=float)
    p_diag = np.asarray(p_diag, dtype=float)
    if lam <= 0:
        raise DataError("lambda must be positive")
    if np.any(p_diag <= 0):
        raise DataError("P must have strictly positive diagonal")
    gram = y.T @ y
    system = gram + lam * np.diag(p_diag)
    try:
        factor = scipy.linalg.cho_factor(system, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"z-step system is not positive definite: {exc}") from None
    return scipy.linalg.cho_solve(factor, gram, check_finite=False)
