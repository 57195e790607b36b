"""Rank-revealing SVD, pseudoinverse and fundamental-subspace projectors.

Everything downstream (symplectic block analysis, eigenstate synthesis,
overlap collapse) is built on the narrowed decomposition A = U1 diag(s) V1'
together with the orthonormal null-space completions U2, V2.  Numerical rank
is decided by a relative singular-value cutoff.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

DEFAULT_RANK_TOL = 1e-10


def _readonly(a):
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SubspaceData:
    """Narrowed SVD of a real matrix plus its null-space completions.

    For an m x n input of rank r: `u1` (m x r) and `v1` (n x r) carry the
    range and row-space bases, `u2` (m x (m-r)) and `v2` (n x (n-r)) the left
    and right null-space bases, `sigma_r` the r positive singular values in
    non-increasing order.
    """

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    sigma_r: np.ndarray
    rank: int
    source: np.ndarray

    @property
    def shape(self):
        return self.source.shape


def decompose(a, rank_tol=DEFAULT_RANK_TOL):
    """Decompose a real matrix, keeping only singular values above the cutoff.

    The cutoff is relative: sigma_i counts toward the rank when
    sigma_i > rank_tol * sigma_max.  A zero matrix has rank 0 and full
    null-space completions.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    if rank_tol <= 0:
        raise InvalidInputError("rank_tol must be positive")

    u, s, vh = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.count_nonzero(s > rank_tol * smax)) if smax > 0 else 0
    v = vh.T
    return SubspaceData(
        u1=_readonly(u[:, :rank]),
        u2=_readonly(u[:, rank:]),
        v1=_readonly(v[:, :rank]),
        v2=_readonly(v[:, rank:]),
        sigma_r=_readonly(s[:rank]),
        rank=rank,
        source=_readonly(a),
    )


def pseudoinverse(d):
    """Moore-Penrose pseudoinverse V1 diag(1/s) U1' of the decomposed matrix.

    Satisfies the four defining equations A A+ A = A, A+ A A+ = A+,
    (A A+)' = A A+, (A+ A)' = A+ A; the zero matrix maps to zero.
    """
    m, n = d.shape
    if d.rank == 0:
        return np.zeros((n, m))
    return (d.v1 / d.sigma_r) @ d.u1.T


def projectors(d):
    """Orthogonal projectors onto range, row space, left null space, null space."""
    m, n = d.shape
    p_range = d.u1 @ d.u1.T if d.rank else np.zeros((m, m))
    p_row = d.v1 @ d.v1.T if d.rank else np.zeros((n, n))
    p_left_null = d.u2 @ d.u2.T if d.rank < m else np.zeros((m, m))
    p_null = d.v2 @ d.v2.T if d.rank < n else np.zeros((n, n))
    return p_range, p_row, p_left_null, p_null


@dataclass(frozen=True)
class ConstrainedSolution:
    """Outcome of a rank-aware linear solve.

    When `consistent`, the full solution family is
    particular + null_basis @ c for arbitrary coefficient vectors c.
    """

    consistent: bool
    particular: np.ndarray
    null_basis: np.ndarray
    residual: float


def solve_constrained(a, b, rank_tol=DEFAULT_RANK_TOL):
    """Solve a x = b via the pseudoinverse, reporting consistency.

    The system is consistent exactly when b has no component in the left
    null space of a, i.e. |U2 U2' b| <= tol * |b|.  Inconsistency is a
    returned flag, not an error; `particular` is then the least-squares
    solution.
    """
    b = np.asarray(b, dtype=np.float64)
    d = decompose(a, rank_tol)
    if b.shape != (d.shape[0],):
        raise InvalidInputError(
            f"right-hand side has shape {b.shape}, expected ({d.shape[0]},)"
        )
    out_of_range = d.u2 @ (d.u2.T @ b) if d.rank < d.shape[0] else np.zeros_like(b)
    residual = float(np.linalg.norm(out_of_range))
    bnorm = float(np.linalg.norm(b))
    consistent = residual <= rank_tol * bnorm if bnorm > 0 else True
    particular = pseudoinverse(d) @ b
    return ConstrainedSolution(
        consistent=consistent,
        particular=particular,
        null_basis=np.array(d.v2),
        residual=residual,
    )
