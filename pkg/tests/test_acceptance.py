"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""
import time

import numpy as np
import pytest

from conftest import (
    balanced_mixing,
    haar_orthogonal,
    random_invertible_block,
    residual_box_halfwidth,
)
from sympeig import (
    GridSpec,
    coordinate_eigenstate,
    cross_flavor_overlap,
    decompose,
    delta_sequence_overlap,
    eigen_equation_residual,
    fresnel_integral,
    momentum_eigenstate,
    normalize,
    null_intersection_gaps,
    orthogonal_pair,
    projectors,
    pseudoinverse,
    random_symplectic,
    residual_check,
    rotation_block,
    same_flavor_overlap,
    sample_state,
    validate,
)


def _report(number, started, budget):
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"criterion {number} overran: {elapsed:.1f}s"
    print(f"criterion {number}: PASS ({elapsed:.2f}s < {budget}s)")


def test_criterion_1_pure_rotations():
    started = time.perf_counter()
    for seed in range(20):
        rng = np.random.default_rng(seed)
        for q in (1, 2, 3):
            o = haar_orthogonal(q, rng)
            m = orthogonal_pair(o)
            omega = rng.standard_normal(q)

            st_c = coordinate_eigenstate(m, omega)
            assert st_c.rank == 0
            assert np.max(np.abs(st_c.support_offset - o.T @ omega)) < 1e-12

            st_m = momentum_eigenstate(m, omega)
            assert st_m.rank == q
            assert np.max(np.abs(st_m.ambient_linear_vec() - o.T @ omega)) < 1e-12
            assert np.linalg.norm(st_m.quad_form) < 1e-12
    _report(1, started, 1.0)


def test_criterion_2_swap_rotations():
    started = time.perf_counter()
    for seed in range(20):
        rng = np.random.default_rng(seed)
        for q in (1, 2, 3):
            o = haar_orthogonal(q, rng)
            m = rotation_block(o)
            omega = rng.standard_normal(q)

            st_c = coordinate_eigenstate(m, omega)
            assert st_c.rank == q
            assert np.linalg.norm(st_c.quad_form) < 1e-12
            assert np.max(np.abs(st_c.ambient_linear_vec() - o.T @ omega)) < 1e-12
            assert abs(st_c.norm_const - (2 * np.pi) ** (-q / 2)) < 1e-12

            st_m = momentum_eigenstate(m, omega)
            assert st_m.rank == 0
            assert np.max(np.abs(st_m.support_offset + o.T @ omega)) < 1e-12

    # O = identity reproduces the canonical Fourier kernel parameters
    st = coordinate_eigenstate(rotation_block(np.eye(1)), [1.5])
    assert st.norm_const == pytest.approx((2 * np.pi) ** -0.5)
    np.testing.assert_allclose(st.ambient_linear_vec(), [1.5], atol=1e-15)
    _report(2, started, 1.0)


def test_criterion_3_balanced_mixing():
    started = time.perf_counter()
    for q in (1, 2):
        m = balanced_mixing(q)
        omega = np.linspace(0.3, -0.6, q)
        rho = np.linspace(-0.2, 0.8, q)

        st_c = coordinate_eigenstate(m, omega)
        st_m = momentum_eigenstate(m, rho)
        np.testing.assert_allclose(st_c.quad_form, np.eye(q), atol=1e-12)
        np.testing.assert_allclose(st_m.quad_form, -np.eye(q), atol=1e-12)
        expect_norm = (np.sqrt(2) * np.pi) ** (-q / 2)
        assert abs(abs(normalize(m, "coordinate")) - expect_norm) < 1e-10
        assert abs(abs(normalize(m, "momentum")) - expect_norm) < 1e-10
        assert abs(abs(st_c.norm_const) - expect_norm) < 1e-10
        assert abs(abs(st_m.norm_const) - expect_norm) < 1e-10

        result = cross_flavor_overlap(st_m, st_c)
        eta = omega - rho
        expected = (-2j * np.pi**3) ** (q / 2) * np.exp(0.5j * float(eta @ eta))
        assert abs(abs(result.value) - abs(expected)) < 1e-8 * abs(expected)
        phase_gap = abs(np.angle(result.value / expected))
        assert phase_gap < 1e-8

        # equal eigenvalues: the pairing is the constant (-2i pi^3)^(q/2)
        same = cross_flavor_overlap(
            momentum_eigenstate(m, omega), coordinate_eigenstate(m, omega)
        )
        assert abs(same.value - (-2j * np.pi**3) ** (q / 2)) < 1e-8
    _report(3, started, 1.0)


def test_criterion_4_grid_eigenvalue_oracle():
    started = time.perf_counter()
    worst = 0.0
    for trial in range(50):
        q = 1 if trial % 2 == 0 else 2
        n = 512 if q == 1 else 256
        rng = np.random.default_rng(1000 + trial)
        m = random_invertible_block(q, rng, block="f")
        omega = rng.uniform(-0.5, 0.5, q)
        st = coordinate_eigenstate(m, omega)
        half = residual_box_halfwidth(st, n)
        grid = GridSpec(np.full(q, -half), np.full(q, half), n)
        psi = sample_state(st, grid)
        res = eigen_equation_residual(m, "coordinate", psi, omega, fd_order=4)
        worst = max(worst, res)
        assert res < 1e-5, f"trial {trial}: residual {res:.2e}"
    print(f"criterion 4 worst residual: {worst:.2e}")
    _report(4, started, 60.0)


def test_criterion_5_degenerate_block_coverage():
    started = time.perf_counter()
    q = 3
    rng = np.random.default_rng(55)
    for k in range(q + 1):
        theta = np.zeros(q)
        theta[:k] = np.linspace(0.5, 1.2, k) if k else theta[:k]
        c, s = np.cos(theta), np.sin(theta)
        partial = np.block([[np.diag(c), np.diag(s)], [-np.diag(s), np.diag(c)]])
        dressed = (
            orthogonal_pair(haar_orthogonal(q, rng)).w
            @ partial
            @ orthogonal_pair(haar_orthogonal(q, rng)).w
        )
        m = validate(dressed)
        assert decompose(m.f).rank == k

        omega = rng.standard_normal(q)
        for build in (coordinate_eigenstate, momentum_eigenstate):
            st = build(m, omega)
            rep = residual_check(st, m)
            assert rep.row_residual < 1e-10
            assert rep.constraint_residual < 1e-10

        st = coordinate_eigenstate(m, omega)
        assert st.rank == k
        df = decompose(m.f)
        assert np.linalg.norm(m.f @ st.support_offset) < 1e-10
        left_null = df.u2 @ (df.u2.T @ omega) if k < q else np.zeros(q)
        assert np.linalg.norm(m.e @ st.support_offset - left_null) < 1e-10
    _report(5, started, 5.0)


def test_criterion_6_delta_normalization():
    started = time.perf_counter()
    widths = [0.2 * 2**-k for k in range(5)]
    for trial in range(20):
        q = 1 if trial % 2 == 0 else 2
        rng = np.random.default_rng(3000 + trial)
        m = random_invertible_block(q, rng, block="f")
        omega = rng.uniform(-0.4, 0.4, q)
        rho = rng.uniform(-0.4, 0.4, q)

        # collapsed coefficient equals one after normalization, both flavors
        prod = same_flavor_overlap(
            coordinate_eigenstate(m, rho), coordinate_eigenstate(m, omega)
        )
        assert abs(prod.collapsed_coefficient() - 1.0) < 1e-8
        prod_m = same_flavor_overlap(
            momentum_eigenstate(m, rho), momentum_eigenstate(m, omega)
        )
        assert abs(prod_m.collapsed_coefficient() - 1.0) < 1e-8

        # the smeared pairing follows the Gaussian delta family on the diagonal
        vals = delta_sequence_overlap(m, "coordinate", omega, omega, widths)
        rescaled = [v.real * w**q for v, w in zip(vals, widths)]
        for a, b in zip(rescaled, rescaled[1:]):
            assert abs(a / b - 1.0) < 0.05
        # and matches the family peak itself
        peak0 = (2 * np.pi * widths[0] ** 2) ** (-q / 2)
        assert abs(vals[0] / peak0 - 1.0) < 0.01

        # decay at unit eigenvalue separation
        direction = rng.standard_normal(q)
        rho_off = omega + direction / np.linalg.norm(direction)
        off = delta_sequence_overlap(m, "coordinate", omega, rho_off, widths[:3])
        for w, v in zip(widths[:3], off):
            peak = (2 * np.pi * w**2) ** (-q / 2)
            assert abs(v) / peak < 1e-3
    _report(6, started, 120.0)


def test_criterion_7_null_intersection_properties():
    started = time.perf_counter()
    for trial in range(200):
        q = 1 + trial % 3
        m = random_symplectic(q, n_factors=5, rng=trial)
        b = m.blocks
        stacks = {
            "et_ft": np.vstack([b.e.T, b.f.T]),
            "e_f": np.vstack([b.e, b.f]),
            "ht_gt": np.vstack([b.h.T, b.g.T]),
            "h_g": np.vstack([b.h, b.g]),
        }
        gaps = null_intersection_gaps(m)
        for key, stack in stacks.items():
            bound = 1e-8 * np.linalg.norm(stack, 2)
            assert gaps[key] > bound, f"trial {trial} {key}"
    _report(7, started, 10.0)


def test_criterion_8_penrose_projector_suite():
    started = time.perf_counter()
    rng = np.random.default_rng(99)
    for trial in range(500):
        n = int(rng.integers(2, 7))
        style = trial % 4
        if style == 0:
            a = rng.standard_normal((n, n))
        elif style == 1:
            k = int(rng.integers(1, n))
            a = rng.standard_normal((n, k)) @ rng.standard_normal((k, n))
        elif style == 2:
            a = np.outer(rng.standard_normal(n), rng.standard_normal(n))
        else:
            a = rng.standard_normal((n, n)) * 10.0 ** rng.integers(-3, 4)
        d = decompose(a)
        a_pinv = pseudoinverse(d)
        scale = max(1.0, np.linalg.norm(a))
        pscale = max(1.0, np.linalg.norm(a_pinv))
        assert np.linalg.norm(a @ a_pinv @ a - a) < 1e-10 * scale
        assert np.linalg.norm(a_pinv @ a @ a_pinv - a_pinv) < 1e-10 * pscale
        assert np.linalg.norm((a @ a_pinv).T - a @ a_pinv) < 1e-10
        assert np.linalg.norm((a_pinv @ a).T - a_pinv @ a) < 1e-10

        p_range, p_row, p_left_null, p_null = projectors(d)
        for p in (p_range, p_row, p_left_null, p_null):
            assert np.linalg.norm(p @ p - p) < 1e-10
            assert np.linalg.norm(p.T - p) < 1e-10
        assert np.linalg.norm(p_range + p_left_null - np.eye(n)) < 1e-10
        assert np.linalg.norm(a @ a_pinv - p_range) < 1e-10
    _report(8, started, 10.0)


def test_criterion_9_fresnel_formula():
    started = time.perf_counter()
    rng = np.random.default_rng(77)
    worst = 0.0
    for trial in range(30):
        q = 1 + trial % 2
        lam = rng.uniform(0.1, 10.0, q) * rng.choice([-1.0, 1.0], q)
        o = haar_orthogonal(q, rng)
        a = o @ np.diag(lam) @ o.T
        j = rng.uniform(-2.0, 2.0, q)
        res = fresnel_integral(a, j)
        worst = max(worst, res.rel_disagreement)
        assert res.rel_disagreement < 1e-6, f"trial {trial}: {res.rel_disagreement:.2e}"
    print(f"criterion 9 worst disagreement: {worst:.2e}")
    _report(9, started, 60.0)
