import numpy as np
import pytest

from sympeig import (
    InvalidInputError,
    decompose,
    projectors,
    pseudoinverse,
    solve_constrained,
)


def test_zero_matrix():
    d = decompose(np.zeros((2, 2)))
    assert d.rank == 0
    assert d.u1.shape == (2, 0)
    assert d.v1.shape == (2, 0)
    # completions are full orthonormal bases
    np.testing.assert_allclose(d.u2.T @ d.u2, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(d.v2.T @ d.v2, np.eye(2), atol=1e-14)
    np.testing.assert_array_equal(pseudoinverse(d), np.zeros((2, 2)))


def test_diagonal_rank_one():
    d = decompose(np.diag([2.0, 0.0]))
    assert d.rank == 1
    np.testing.assert_allclose(d.sigma_r, [2.0])
    np.testing.assert_allclose(np.abs(d.u1), [[1.0], [0.0]], atol=1e-14)
    np.testing.assert_allclose(np.abs(d.v1), [[1.0], [0.0]], atol=1e-14)
    np.testing.assert_allclose(pseudoinverse(d), np.diag([0.5, 0.0]), atol=1e-15)


def test_identity_pseudoinverse():
    d = decompose(np.eye(3))
    np.testing.assert_allclose(pseudoinverse(d), np.eye(3), atol=1e-14)


def test_reconstruction_full_rank(rng):
    a = rng.standard_normal((3, 3))
    d = decompose(a)
    recon = d.u1 @ np.diag(d.sigma_r) @ d.v1.T
    assert np.linalg.norm(recon - a) < 1e-12 * np.linalg.norm(a)


def test_rank_deficient_outer_product(rng):
    x = rng.standard_normal(3)
    y = rng.standard_normal(3)
    a = np.outer(x, y)
    d = decompose(a)
    assert d.rank == 1
    a_pinv = pseudoinverse(d)
    assert np.linalg.norm(a @ a_pinv @ a - a) < 1e-10 * np.linalg.norm(a)


def test_decomposition_invariants(rng):
    for _ in range(50):
        n = rng.integers(2, 7)
        k = rng.integers(0, n + 1)
        a = (
            rng.standard_normal((n, k)) @ rng.standard_normal((k, n))
            if k
            else np.zeros((n, n))
        )
        d = decompose(a)
        assert d.rank == k or k > d.rank  # random products can only lose rank
        r = d.rank
        np.testing.assert_allclose(d.u1.T @ d.u1, np.eye(r), atol=1e-12)
        np.testing.assert_allclose(d.v1.T @ d.v1, np.eye(r), atol=1e-12)
        np.testing.assert_allclose(d.u2.T @ d.u2, np.eye(n - r), atol=1e-12)
        np.testing.assert_allclose(d.v2.T @ d.v2, np.eye(n - r), atol=1e-12)
        assert np.linalg.norm(d.u1.T @ d.u2) < 1e-12
        assert np.linalg.norm(d.v1.T @ d.v2) < 1e-12
        recon = d.u1 @ np.diag(d.sigma_r) @ d.v1.T
        assert np.linalg.norm(recon - a) <= 1e-12 * max(1.0, np.linalg.norm(a))
        assert np.all(np.diff(d.sigma_r) <= 0)  # non-increasing
        if r:
            assert np.all(d.sigma_r > 1e-10 * d.sigma_r[0])


def test_penrose_equations_random(rng):
    for _ in range(100):
        n = rng.integers(2, 6)
        a = rng.standard_normal((n, n))
        if rng.random() < 0.4:  # force rank deficiency
            k = rng.integers(1, n)
            a = rng.standard_normal((n, k)) @ rng.standard_normal((k, n))
        a_pinv = pseudoinverse(decompose(a))
        scale = max(1.0, np.linalg.norm(a))
        assert np.linalg.norm(a @ a_pinv @ a - a) < 1e-10 * scale
        assert np.linalg.norm(a_pinv @ a @ a_pinv - a_pinv) < 1e-10 * max(
            1.0, np.linalg.norm(a_pinv)
        )
        assert np.linalg.norm((a @ a_pinv).T - a @ a_pinv) < 1e-10
        assert np.linalg.norm((a_pinv @ a).T - a_pinv @ a) < 1e-10


def test_projector_properties(rng):
    a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    d = decompose(a)
    p_range, p_row, p_left_null, p_null = projectors(d)
    for p in (p_range, p_row, p_left_null, p_null):
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        np.testing.assert_allclose(p.T, p, atol=1e-12)
    np.testing.assert_allclose(p_range + p_left_null, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(p_row + p_null, np.eye(4), atol=1e-12)
    # the two formulas for the range projector agree
    np.testing.assert_allclose(a @ pseudoinverse(d), p_range, atol=1e-10)


def test_projector_trivial_cases():
    p_range, _, p_left_null, _ = projectors(decompose(np.eye(2)))
    np.testing.assert_allclose(p_range, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(p_left_null, np.zeros((2, 2)), atol=1e-14)
    _, _, _, p_null = projectors(decompose(np.diag([2.0, 0.0])))
    np.testing.assert_allclose(p_null, np.diag([0.0, 1.0]), atol=1e-14)


def test_rank_invariant_under_orthogonal_factors(rng):
    a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    q1, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    q2, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    assert decompose(q1 @ a @ q2).rank == decompose(a).rank


def test_solve_identity():
    sol = solve_constrained(np.eye(2), np.array([3.0, -1.0]))
    assert sol.consistent
    np.testing.assert_allclose(sol.particular, [3.0, -1.0], atol=1e-14)
    assert sol.null_basis.shape == (2, 0)


def test_solve_inconsistent():
    sol = solve_constrained(np.diag([1.0, 0.0]), np.array([0.0, 1.0]))
    assert not sol.consistent


def test_solve_with_null_family():
    a = np.diag([1.0, 0.0])
    sol = solve_constrained(a, np.array([3.0, 0.0]))
    assert sol.consistent
    np.testing.assert_allclose(sol.particular, [3.0, 0.0], atol=1e-14)
    assert sol.null_basis.shape == (2, 1)
    np.testing.assert_allclose(np.abs(sol.null_basis[:, 0]), [0.0, 1.0], atol=1e-14)
    # every member of the family solves the system
    for c in (-2.0, 0.5):
        x = sol.particular + sol.null_basis[:, 0] * c
        np.testing.assert_allclose(a @ x, [3.0, 0.0], atol=1e-14)


def test_invalid_inputs():
    with pytest.raises(InvalidInputError):
        decompose(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(InvalidInputError):
        decompose(np.eye(2), rank_tol=0.0)
    with pytest.raises(InvalidInputError):
        decompose(np.ones(3))
    with pytest.raises(InvalidInputError):
        solve_constrained(np.eye(2), np.ones(3))
