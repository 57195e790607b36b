import numpy as np
import pytest

from sympeig import random_symplectic, validate


def haar_orthogonal(q, rng):
    m = rng.standard_normal((q, q))
    qmat, r = np.linalg.qr(m)
    return qmat * np.sign(np.diag(r))


def balanced_mixing(q):
    """(1/sqrt(2)) [[I, I], [-I, I]]: the simplest fully mixing matrix."""
    eye = np.eye(q)
    return validate(np.block([[eye, eye], [-eye, eye]]) / np.sqrt(2.0))


def random_invertible_block(q, rng, block="f", n_factors=4, max_attempts=200):
    """Random symplectic matrix whose chosen block is comfortably invertible."""
    for _ in range(max_attempts):
        m = random_symplectic(q, n_factors=n_factors, rng=rng)
        blk = getattr(m, block)
        sv = np.linalg.svd(blk, compute_uv=False)
        if sv[-1] >= 0.25 * sv[0] and sv[-1] > 0.2 and np.linalg.norm(m.w) < 8.0:
            return m
    raise RuntimeError("could not draw a matrix with an invertible block")


def residual_box_halfwidth(state, n, target=2e-6):
    """Largest box halfwidth keeping the predicted stencil error under target.

    Error model for the order-4 stencil on a quadratic-phase field:
    boundary closures dominate at roughly 12 h^4 f^5 / 30 with local
    frequency f <= |M| L sqrt(q) + |b|.
    """
    mq = np.linalg.norm(state.ambient_quad_form(), 2)
    bq = np.linalg.norm(state.ambient_linear_vec())
    q = state.q_dim
    best = 0.5
    for half in np.arange(0.5, 6.01, 0.25):
        h = 2.0 * half / (n - 1)
        f = mq * half * np.sqrt(q) + bq
        if 12.0 * h**4 * f**5 / 30.0 <= target:
            best = half
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
