import numpy as np
import pytest

import sympeig._kernels as kernels
import sympeig._kernels._reference as reference
from sympeig._kernels import grid_derivative, pairwise_sum, quad_phase_samples

try:
    import sympeig._kernels._core as core
except ImportError:
    core = None

needs_compiled = pytest.mark.skipif(core is None, reason="compiled backend not built")


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "reference")


def test_quad_phase_matches_direct_evaluation(rng):
    pts = rng.standard_normal((500, 2))
    quad = rng.standard_normal((2, 2))
    quad = quad + quad.T
    lin = rng.standard_normal(2)
    scale = 0.7 - 0.2j
    got = quad_phase_samples(pts, quad, lin, damping=0.25, scale=scale)
    phase = pts @ lin - 0.5 * np.einsum("ij,jk,ik->i", pts, quad, pts)
    expect = scale * np.exp(1j * phase - 0.25 * (pts**2).sum(axis=1))
    np.testing.assert_allclose(got, expect, atol=1e-13)


def test_quad_phase_zero_dims(rng):
    got = quad_phase_samples(np.empty((5, 0)), np.empty((0, 0)), np.empty(0),
                             scale=2.0 + 1.0j)
    np.testing.assert_array_equal(got, np.full(5, 2.0 + 1.0j))


@needs_compiled
def test_backend_parity(rng):
    pts = rng.standard_normal((2000, 3))
    quad = rng.standard_normal((3, 3))
    quad = quad + quad.T
    lin = rng.standard_normal(3)
    a = reference.quad_phase_samples(pts, quad, lin, 0.1, 1.0 - 0.3j)
    b = core.quad_phase_samples(pts, quad, lin, 0.1, 1.0 - 0.3j)
    np.testing.assert_allclose(a, b, atol=1e-13)

    arr = rng.standard_normal((16, 120)) + 1j * rng.standard_normal((16, 120))
    for order in (2, 4):
        np.testing.assert_allclose(
            reference.stencil_lastaxis(arr, 0.05, order),
            core.stencil_lastaxis(arr, 0.05, order),
            atol=1e-11,
        )
    assert abs(reference.pairwise_sum(arr.ravel()) - core.pairwise_sum(arr.ravel())) < 1e-11


@pytest.mark.parametrize("order,expected_slope", [(2, 2.0), (4, 4.0)])
def test_stencil_order_of_accuracy(order, expected_slope):
    # differentiate exp(ikx) at two resolutions; error must drop at the order
    k = 3.0
    errs = []
    for n in (200, 400):
        x = np.linspace(-1.0, 1.0, n)
        f = np.exp(1j * k * x).reshape(1, -1)
        d = grid_derivative(f, axis=1, spacing=x[1] - x[0], order=order)
        errs.append(np.max(np.abs(d - 1j * k * f)))
    slope = np.log2(errs[0] / errs[1])
    assert slope > expected_slope - 0.5


def test_grid_derivative_any_axis(rng):
    x = np.linspace(-1, 1, 64)
    y = np.linspace(-1, 1, 64)
    f = np.exp(1j * (2.0 * x[:, None] + 0.5 * y[None, :]))
    dx = grid_derivative(f, axis=0, spacing=x[1] - x[0], order=4)
    dy = grid_derivative(f, axis=1, spacing=y[1] - y[0], order=4)
    assert np.max(np.abs(dx - 2.0j * f)) < 1e-5
    assert np.max(np.abs(dy - 0.5j * f)) < 1e-6


def test_pairwise_sum_schedule_independent(rng):
    v = rng.standard_normal(10001) + 1j * rng.standard_normal(10001)
    a = pairwise_sum(v, parallel_width=1)
    b = pairwise_sum(v, parallel_width=16)
    assert a == b  # bitwise: the reduction tree is fixed
    assert abs(a - v.sum()) < 1e-10


def test_pairwise_sum_empty():
    assert pairwise_sum(np.empty(0, dtype=complex)) == 0.0
