"""Hot-kernel backend selection.

The compiled Cython extension is preferred; the numpy reference
implementation is the fallback.  Setting SYMPEIG_FORCE_REFERENCE_KERNELS=1
in the environment forces the fallback (used by the benchmark and the
backend parity test).
"""
import os

import numpy as np

from . import _reference

_force_ref = os.environ.get("SYMPEIG_FORCE_REFERENCE_KERNELS", "") not in ("", "0")

if _force_ref:
    _backend = _reference
    BACKEND = "reference"
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _backend = _reference
        BACKEND = "reference"


def quad_phase_samples(points, quad, lin, damping=0.0, scale=1.0 + 0.0j):
    """Sample scale * exp(i(-x'Qx/2 + x'b) - damping*|x|^2) at each row of `points`."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array of row vectors")
    q = pts.shape[1]
    quad = np.ascontiguousarray(quad, dtype=np.float64).reshape(q, q)
    lin = np.ascontiguousarray(lin, dtype=np.float64).reshape(q)
    return _backend.quad_phase_samples(pts, quad, lin, float(damping), complex(scale))


def grid_derivative(samples, axis, spacing, order=4):
    """Partial derivative of a sampled complex field along one grid axis."""
    arr = np.asarray(samples, dtype=np.complex128)
    moved = np.moveaxis(arr, axis, -1)
    flat = np.ascontiguousarray(moved.reshape(-1, moved.shape[-1]))
    der = _backend.stencil_lastaxis(flat, float(spacing), int(order))
    return np.moveaxis(np.asarray(der).reshape(moved.shape), -1, axis)


def pairwise_sum(values, parallel_width=1):
    """Deterministic reduction of a complex vector.

    `parallel_width` is accepted as a hint; both backends always reduce with
    the same fixed tree, so the result never depends on the schedule.
    """
    del parallel_width
    return _backend.pairwise_sum(np.ascontiguousarray(values, dtype=np.complex128))
