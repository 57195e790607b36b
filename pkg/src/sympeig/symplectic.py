"""Symplectic matrices: validation, block access, inverse, generators.

A real 2q x 2q matrix W is symplectic when W' s W = s with
s = [[0, I], [-I, 0]].  In block form W = [[E, F], [G, H]] this is
equivalent to either of

  * E'G and F'H symmetric and E'H - G'F = I   (column conditions)
  * EF' and GH' symmetric and EH' - FG' = I   (row conditions)

Validation checks all three forms redundantly as a self-test.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InternalInconsistencyError, InvalidInputError, NonSymplecticError

DEFAULT_TOL = 1e-10


def symplectic_form(q):
    """The 2q x 2q bilinear form [[0, I], [-I, 0]]."""
    s = np.zeros((2 * q, 2 * q))
    s[:q, q:] = np.eye(q)
    s[q:, :q] = -np.eye(q)
    return s


@dataclass(frozen=True)
class BlockView:
    """The four q x q blocks of W laid out as [[e, f], [g, h]]."""

    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray


@dataclass(frozen=True)
class SymplecticMatrix:
    """A validated symplectic matrix.  Construct through `validate`."""

    w: np.ndarray
    q: int

    @property
    def blocks(self):
        q = self.q
        w = self.w
        return BlockView(e=w[:q, :q], f=w[:q, q:], g=w[q:, :q], h=w[q:, q:])

    @property
    def e(self):
        return self.w[: self.q, : self.q]

    @property
    def f(self):
        return self.w[: self.q, self.q :]

    @property
    def g(self):
        return self.w[self.q :, : self.q]

    @property
    def h(self):
        return self.w[self.q :, self.q :]

    def __matmul__(self, other):
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        return validate(self.w @ other.w)


def _condition_norms(w, q):
    """Violation norms of the three equivalent symplectic conditions."""
    e, f = w[:q, :q], w[:q, q:]
    g, h = w[q:, :q], w[q:, q:]
    eye = np.eye(q)

    bilinear = np.linalg.norm(w.T @ symplectic_form(q) @ w - symplectic_form(q))

    etg = e.T @ g
    fth = f.T @ h
    cols = max(
        np.linalg.norm(etg - etg.T),
        np.linalg.norm(fth - fth.T),
        np.linalg.norm(e.T @ h - g.T @ f - eye),
    )

    eft = e @ f.T
    ght = g @ h.T
    rows = max(
        np.linalg.norm(eft - eft.T),
        np.linalg.norm(ght - ght.T),
        np.linalg.norm(e @ h.T - f @ g.T - eye),
    )
    return bilinear, cols, rows


def validate(w, tol=DEFAULT_TOL):
    """Check that w is symplectic and wrap it as a SymplecticMatrix.

    All three equivalent condition sets are evaluated; they must agree with
    each other (a disagreement signals a bug, not a property of the input).
    Rejection reports the largest violation norm.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {w.shape}")
    if w.shape[0] % 2 != 0:
        raise InvalidInputError(f"dimension {w.shape[0]} is odd")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("matrix has non-finite entries")

    q = w.shape[0] // 2
    norms = _condition_norms(w, q)
    threshold = tol * max(1.0, np.linalg.norm(w)) ** 2
    passes = [n <= threshold for n in norms]
    if any(passes) != all(passes):
        raise InternalInconsistencyError(
            f"equivalent symplectic conditions disagree: norms={norms}"
        )
    if not all(passes):
        raise NonSymplecticError(
            f"matrix is not symplectic (violation {max(norms):.3e}, "
            f"threshold {threshold:.3e})",
            violation=max(norms),
        )
    w = w.copy()
    w.flags.writeable = False
    return SymplecticMatrix(w=w, q=q)


def inverse(m):
    """Closed-form inverse [[H', -F'], [-G', E']]; itself symplectic."""
    b = m.blocks
    top = np.hstack([b.h.T, -b.f.T])
    bottom = np.hstack([-b.g.T, b.e.T])
    return validate(np.vstack([top, bottom]))


def ccr_matrix(m):
    """W s W', the conserved commutator table of the transformed observables.

    Equals the symplectic form itself for every valid input; callers assert
    the equality as the numerical form of the canonical commutation check.
    """
    return m.w @ symplectic_form(m.q) @ m.w.T


# ---------------------------------------------------------------------------
# Generators


def orthogonal_pair(o):
    """[[O, 0], [0, O]] for orthogonal O: rotates coordinates and momenta alike."""
    o = np.asarray(o, dtype=np.float64)
    q = o.shape[0]
    w = np.zeros((2 * q, 2 * q))
    w[:q, :q] = o
    w[q:, q:] = o
    return validate(w)


def rotation_block(o):
    """[[0, O], [-O, 0]]: swaps coordinates with momenta through O."""
    o = np.asarray(o, dtype=np.float64)
    q = o.shape[0]
    w = np.zeros((2 * q, 2 * q))
    w[:q, q:] = o
    w[q:, :q] = -o
    return validate(w)


def shear(s):
    """[[I, S], [0, I]] for symmetric S."""
    s = np.asarray(s, dtype=np.float64)
    if np.linalg.norm(s - s.T) > 1e-12 * max(1.0, np.linalg.norm(s)):
        raise InvalidInputError("shear parameter must be symmetric")
    q = s.shape[0]
    w = np.eye(2 * q)
    w[:q, q:] = s
    return validate(w)


def scaling(l):
    """[[L, 0], [0, inv(L)']] for invertible L."""
    l = np.asarray(l, dtype=np.float64)
    q = l.shape[0]
    try:
        l_inv_t = np.linalg.inv(l).T
    except np.linalg.LinAlgError as exc:
        raise InvalidInputError("scaling parameter must be invertible") from exc
    w = np.zeros((2 * q, 2 * q))
    w[:q, :q] = l
    w[q:, q:] = l_inv_t
    return validate(w)


def _haar_orthogonal(q, rng):
    m = rng.standard_normal((q, q))
    qmat, r = np.linalg.qr(m)
    return qmat * np.sign(np.diag(r))


def random_symplectic(q, n_factors=4, rng=None, max_shear=0.8, max_log_scale=0.35):
    """Product of randomly parameterized elementary generators.

    Composing shears, scalings and rotation blocks keeps the result exactly
    symplectic up to rounding and gives generic mixing of the blocks.  The
    magnitude caps keep the factors well conditioned so downstream rank
    decisions stay clean.
    """
    rng = np.random.default_rng(rng)
    if q < 1 or n_factors < 1:
        raise InvalidInputError("q and n_factors must be positive")
    w = np.eye(2 * q)
    kinds = rng.integers(0, 4, size=n_factors)
    for kind in kinds:
        if kind == 0:
            s = rng.standard_normal((q, q))
            s = (s + s.T) * (max_shear / (2.0 * np.sqrt(q)))
            factor = shear(s)
        elif kind == 1:
            o = _haar_orthogonal(q, rng)
            d = np.exp(rng.uniform(-max_log_scale, max_log_scale, size=q))
            factor = scaling(o * d)
        elif kind == 2:
            factor = rotation_block(_haar_orthogonal(q, rng))
        else:
            factor = orthogonal_pair(_haar_orthogonal(q, rng))
        w = w @ factor.w
    return validate(w)


# ---------------------------------------------------------------------------
# Executable block properties


def stacked_min_singular(x, y):
    """Smallest singular value of [X; Y] stacked vertically.

    Bounded away from zero exactly when the null spaces of X and Y intersect
    trivially.
    """
    return float(np.linalg.svd(np.vstack([x, y]), compute_uv=False)[-1])


def null_intersection_gaps(m):
    """The four trivial-intersection gaps guaranteed for symplectic blocks.

    Keys name the stacked pair; each value is the smallest singular value of
    the stack, positive when (and only when) the corresponding pair of null
    spaces meets only in zero.
    """
    b = m.blocks
    return {
        "et_ft": stacked_min_singular(b.e.T, b.f.T),
        "e_f": stacked_min_singular(b.e, b.f),
        "ht_gt": stacked_min_singular(b.h.T, b.g.T),
        "h_g": stacked_min_singular(b.h, b.g),
    }
