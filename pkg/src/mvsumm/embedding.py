"""Spectral embedding: initial Laplacian eigenmap and the embedding refresh step.

Embeddings are d x N matrices with orthonormal rows (Y Y^T = I). Eigenvectors
are sign-fixed (first non-negligible entry made nonnegative) so outputs are
deterministic under eigensolver sign ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError


@dataclass(frozen=True)
class Embedding:
    """Coordinates (d x N, orthonormal rows) and the selected eigenvalues, ascending."""

    y: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return self.y.shape[0]

    def trace_value(self) -> float:
        return float(self.eigenvalues.sum())


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the first entry of each row with magnitude above tolerance nonnegative."""
    out = vectors.copy()
    for i, row in enumerate(out):
        tol = 1e-12 * max(np.abs(row).max(), 1e-300)
        nz = np.nonzero(np.abs(row) > tol)[0]
        if nz.size and row[nz[0]] < 0:
            out[i] = -row
    return out


def _symmetric_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DataError("expected a square matrix")
    if not np.isfinite(matrix).all():
        raise DataError("non-finite matrix")
    sym = 0.5 * (matrix + matrix.T)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(sym, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from None
    return eigenvalues, eigenvectors


def initial_embedding(
    laplacian: np.ndarray, dim: int, zero_tol: float = 1e-8
) -> Embedding:
    """Bottom ``dim`` nonzero-eigenvalue eigenvectors of the graph Laplacian.

    Eigenvalues at or below ``zero_tol`` times the largest eigenvalue count as
    zero and are skipped. Raises DataError when the graph is too disconnected
    to supply ``dim`` nonzero eigenvalues.
    """
    eigenvalues, eigenvectors = _symmetric_eigh(laplacian)
    n = laplacian.shape[0]
    if not 1 <= dim < n:
        raise DataError(f"embedding dim must satisfy 1 <= d < N, got d={dim}, N={n}")
    cutoff = zero_tol * max(eigenvalues[-1], 0.0)
    nonzero = np.nonzero(eigenvalues > cutoff)[0]
    if nonzero.size < dim:
        raise DataError(
            f"fewer than {dim} nonzero eigenvalues ({nonzero.size}); "
            "graph too disconnected for the requested dimension"
        )
    selected = nonzero[:dim]
    return Embedding(
        y=_fix_signs(eigenvectors[:, selected].T),
        eigenvalues=eigenvalues[selected].copy(),
    )


def y_step(
    laplacian: np.ndarray, z: np.ndarray, alpha: float, dim: int
) -> Embedding:
    """Embedding refresh: bottom ``dim`` eigenvectors of L + alpha (I - Z - Z^T + Z Z^T).

    The quadratic reconstruction penalty enters through its symmetric expansion
    (I - Z)(I - Z)^T, which matches the asymmetric form I - 2Z + ZZ^T under the
    trace; zero eigenvalues are kept here, unlike in initial_embedding.
    """
    if alpha <= 0:
        raise DataError("alpha must be positive")
    z = np.asarray(z, dtype=float)
    n = z.shape[0]
    m = laplacian + alpha * (np.eye(n) - z - z.T + z @ z.T)
    eigenvalues, eigenvectors = _symmetric_eigh(m)
    if not 1 <= dim <= n:
        raise DataError(f"embedding dim must satisfy 1 <= d <= N, got d={dim}, N={n}")
    return Embedding(
        y=_fix_signs(eigenvectors[:, :dim].T),
        eigenvalues=eigenvalues[:dim].copy(),
    )
