"""Numpy reference implementation of the hot kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
SYMPEIG_FORCE_REFERENCE_KERNELS).  Semantics must match `_core.pyx` exactly;
the parity test compares the two backends on random inputs.
"""
import numpy as np


def quad_phase_samples(points, quad, lin, damping=0.0, scale=1.0 + 0.0j):
    """Evaluate scale * exp(i(-x'Qx/2 + x'b) - damping*|x|^2) row by row."""
    pts = np.asarray(points, dtype=np.float64)
    n, q = pts.shape
    if q == 0:
        return np.full(n, complex(scale), dtype=np.complex128)
    phase = pts @ np.asarray(lin, dtype=np.float64)
    phase -= 0.5 * np.einsum("ij,ij->i", pts @ np.asarray(quad, dtype=np.float64), pts)
    out = np.exp(1j * phase)
    if damping != 0.0:
        out *= np.exp(-damping * np.einsum("ij,ij->i", pts, pts))
    out *= scale
    return out


def stencil_lastaxis(values, spacing, order):
    """Differentiate along the last axis of a 2-d complex array.

    Central differences in the interior, one-sided closures of the same
    order at the boundary.  Needs at least order+1 samples per line.
    """
    arr = np.asarray(values, dtype=np.complex128)
    h = float(spacing)
    out = np.empty_like(arr)
    if order == 2:
        out[:, 1:-1] = (arr[:, 2:] - arr[:, :-2]) / (2 * h)
        out[:, 0] = (-3 * arr[:, 0] + 4 * arr[:, 1] - arr[:, 2]) / (2 * h)
        out[:, -1] = (3 * arr[:, -1] - 4 * arr[:, -2] + arr[:, -3]) / (2 * h)
    elif order == 4:
        out[:, 2:-2] = (
            arr[:, :-4] - 8 * arr[:, 1:-3] + 8 * arr[:, 3:-1] - arr[:, 4:]
        ) / (12 * h)
        out[:, 0] = (
            -25 * arr[:, 0] + 48 * arr[:, 1] - 36 * arr[:, 2]
            + 16 * arr[:, 3] - 3 * arr[:, 4]
        ) / (12 * h)
        out[:, 1] = (
            -3 * arr[:, 0] - 10 * arr[:, 1] + 18 * arr[:, 2]
            - 6 * arr[:, 3] + arr[:, 4]
        ) / (12 * h)
        out[:, -2] = (
            3 * arr[:, -1] + 10 * arr[:, -2] - 18 * arr[:, -3]
            + 6 * arr[:, -4] - arr[:, -5]
        ) / (12 * h)
        out[:, -1] = (
            25 * arr[:, -1] - 48 * arr[:, -2] + 36 * arr[:, -3]
            - 16 * arr[:, -4] + 3 * arr[:, -5]
        ) / (12 * h)
    else:
        raise ValueError(f"unsupported stencil order {order}")
    return out


def pairwise_sum(values):
    """Deterministic pairwise reduction of a complex vector.

    numpy's sum is already a fixed-tree pairwise reduction; the compiled
    backend mirrors the same strategy, so both are independent of any
    parallel schedule.
    """
    return complex(np.sum(np.asarray(values, dtype=np.complex128)))
