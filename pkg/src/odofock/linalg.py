"""Small dense linear-algebra helpers used throughout the package."""

from __future__ import annotations

import numpy as np

from .fock import Operator


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, Operator):
        return a.matrix
    return np.asarray(a)


def op_norm(a) -> float:
    """Largest singular value of a matrix or Operator."""
    mat = _as_matrix(a)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def orthonormal_columns(mat: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the column span, rank decided by singular values > tol."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[1] == 0:
        return np.zeros((mat.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    return u[:, s > tol]


def orthonormal_complement(columns: np.ndarray, within: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of span(within) intersected with span(columns)^perp.

    Both column sets must live in the same ambient space. With `columns`
    contained in span(within) this is the orthogonal difference of the two
    spans; in general it is the set of vectors of span(within) orthogonal to
    every column.
    """
    if tol <= 0:
        raise ValueError(f"rank tolerance must be positive, got {tol}")
    within = np.asarray(within, dtype=complex)
    columns = np.asarray(columns, dtype=complex)
    if columns.ndim != 2:
        columns = columns.reshape(within.shape[0], -1)
    if within.shape[0] != columns.shape[0]:
        raise ValueError(
            f"ambient dimensions differ: {within.shape[0]} vs {columns.shape[0]}"
        )
    q = orthonormal_columns(within, tol)
    if q.shape[1] == 0 or columns.shape[1] == 0:
        return q
    # v = q x is orthogonal to the columns iff (columns^H q) x = 0.
    overlap = columns.conj().T @ q
    u, s, vh = np.linalg.svd(overlap, full_matrices=True)
    rank = int(np.sum(s > tol))
    null_coords = vh[rank:, :].conj().T
    return q @ null_coords


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite point sets in the complex plane."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0 or b.size == 0:
        return float("inf") if a.size != b.size else 0.0
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def max_angular_gap(points: np.ndarray) -> float:
    """Largest gap between consecutive arguments of nonzero complex points."""
    angles = np.sort(np.angle(np.asarray(points, dtype=complex).ravel()))
    if angles.size == 0:
        return 2.0 * np.pi
    if angles.size == 1:
        return 2.0 * np.pi
    gaps = np.diff(angles)
    wrap = angles[0] + 2.0 * np.pi - angles[-1]
    return float(max(gaps.max(), wrap))
