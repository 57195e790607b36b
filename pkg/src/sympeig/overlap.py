"""Overlaps between synthesized eigenstates as structured delta products.

Two states of one family (same symplectic matrix, same flavor) pair to a
product of delta factors in the eigenvalue difference eta = rho - omega; the
quadratic phases cancel between bra and ket, leaving

    conj(n_bra) n_ket (2 pi)^r  *  delta^s(transverse map @ eta)
                                *  delta^r(longitudinal map @ eta)

with the maps built from the blocks (X, Y) = (E, F) or (G, H) by flavor:
transverse V2' pinv(X) U2 U2', longitudinal V1' pinv(Y) plus a compensation
term that vanishes for block-orthogonal mixings.  The stacked factor
matrices are always invertible on eta, so the product collapses to a
multiple of delta^q(eta); `normalize` chooses the real positive constant
that makes the multiple exactly one.

A momentum-flavor bra against a coordinate-flavor ket is instead an ordinary
Gaussian of the eigenvalues whenever both supports are full rank and the
combined quadratic form is invertible; `cross_flavor_overlap` evaluates it
in closed form through the regularized oscillatory Gaussian integral.
"""
from dataclasses import dataclass

import numpy as np

from . import eigenstate as es
from . import subspace
from .errors import InvalidPairingError, NotRepresentableError
from .numeric import fresnel_closed_form
from .subspace import DEFAULT_RANK_TOL


@dataclass(frozen=True)
class DeltaFactor:
    """One factor delta^dim(matrix @ eta)."""

    matrix: np.ndarray
    dim: int


@dataclass(frozen=True)
class DeltaProduct:
    """Product of delta factors on eta = rho - omega times a complex scalar.

    `phase_quad`/`phase_lin`, when set, carry a residual phase
    exp(i(eta'P eta / 2 + v'eta)); same-flavor overlaps never need one.
    """

    factors: tuple
    prefactor: complex
    q_dim: int
    phase_quad: np.ndarray | None = None
    phase_lin: np.ndarray | None = None

    def stacked(self):
        return np.vstack([f.matrix for f in self.factors])

    def collapsed_coefficient(self):
        """Coefficient of delta^q(eta) after collapsing the factors.

        Only defined when the factors force eta = 0 through a square stacked
        map B, via delta^q(B eta) = delta^q(eta) / |det B|.
        """
        stacked = self.stacked()
        if stacked.shape != (self.q_dim, self.q_dim):
            raise NotRepresentableError(
                f"stacked factor map has shape {stacked.shape}; "
                "collapse needs a square map"
            )
        det = np.linalg.det(stacked)
        if det == 0:
            raise NotRepresentableError("stacked factor map is singular")
        return self.prefactor / abs(det)


def _require_same_family(left, right):
    if left.flavor != right.flavor:
        raise InvalidPairingError(
            f"flavor mismatch: {left.flavor} vs {right.flavor}"
        )
    if left.q_dim != right.q_dim or not np.array_equal(
        left.source.w, right.source.w
    ):
        raise InvalidPairingError("states come from different symplectic matrices")


def same_flavor_overlap(left, right):
    """Delta product representing <left | right> within one family.

    `left` is the bra (its normalization enters conjugated), `right` the
    ket; both must come from the same symplectic matrix and flavor and may
    differ only in their eigenvalue vectors.
    """
    _require_same_family(left, right)
    m = right.source
    if right.flavor == es.FLAVOR_COORDINATE:
        x, y = m.e, m.f
    else:
        x, y = m.g, m.h
    dy = subspace.decompose(y, right.rank_tol)
    x_pinv = subspace.pseudoinverse(subspace.decompose(x, right.rank_tol))

    factors = tuple(
        DeltaFactor(matrix=mat, dim=dim)
        for mat, dim in es._eta_map_factors(x, x_pinv, dy)
    )
    prefactor = (
        np.conj(left.norm_const)
        * right.norm_const
        * (2.0 * np.pi) ** dy.rank
    )
    return DeltaProduct(factors=factors, prefactor=complex(prefactor), q_dim=m.q)


def forces_eta_zero(d, rank_tol=DEFAULT_RANK_TOL):
    """True when the delta factors admit only eta = 0.

    Decided by the numerical rank of the stacked factor matrix; full rank q
    pins every component of the eigenvalue difference.
    """
    stacked = d.stacked()
    if stacked.shape[0] < d.q_dim:
        return False
    return subspace.decompose(stacked, rank_tol).rank == d.q_dim


def normalize(m, flavor, rank_tol=DEFAULT_RANK_TOL):
    """The real positive scalar making the family delta-orthonormal.

    With this constant on every state of the family, the collapsed
    same-flavor overlap coefficient is exactly one, i.e. the pairing is a
    plain delta in the eigenvalue difference.
    """
    if flavor == es.FLAVOR_COORDINATE:
        return es.coordinate_eigenstate(m, np.zeros(m.q), rank_tol).norm_const
    if flavor == es.FLAVOR_MOMENTUM:
        return es.momentum_eigenstate(m, np.zeros(m.q), rank_tol).norm_const
    raise InvalidPairingError(f"unknown flavor {flavor!r}")


@dataclass(frozen=True)
class CrossFlavorOverlap:
    """Closed-form momentum-bra coordinate-ket overlap.

    value = coefficient * fresnel_value where fresnel_value is the
    regularized Gaussian integral with quadratic form `quad_matrix` and
    linear term `lin_vec` (both functions of the two eigenvalue vectors).
    """

    quad_matrix: np.ndarray
    lin_vec: np.ndarray
    coefficient: complex
    fresnel_value: complex

    @property
    def value(self):
        return self.coefficient * self.fresnel_value


def cross_flavor_overlap(left, right, singular_tol=1e-12):
    """Evaluate a momentum-flavor bra against a coordinate-flavor ket.

    Requires both supports to be full rank; integrating out the shared
    coordinate basis leaves the oscillatory Gaussian

        integral exp(i(xi'A xi / 2 + J'xi)) d^q xi

    with A = R' M_left R - M_right and J = b_right - R' b_left, where
    R rotates between the two support bases.  A must be invertible; a
    singular A means the overlap is a delta-type distribution with no
    closed Gaussian form, which is reported rather than computed.

    Prefactor convention: the two normalization constants enter through the
    reciprocal of their conjugated product,
    coefficient = 1 / (conj(n_left) * n_right).
    """
    if left.flavor != es.FLAVOR_MOMENTUM or right.flavor != es.FLAVOR_COORDINATE:
        raise InvalidPairingError(
            "cross overlap takes a momentum-flavor bra and a coordinate-flavor ket"
        )
    if left.q_dim != right.q_dim or not np.array_equal(
        left.source.w, right.source.w
    ):
        raise InvalidPairingError("states come from different symplectic matrices")
    q = right.q_dim
    if left.rank != q or right.rank != q:
        raise NotRepresentableError(
            "cross overlap needs full-rank supports on both sides "
            f"(got {left.rank} and {right.rank})"
        )

    rot = left.support_basis.T @ right.support_basis
    a = rot.T @ left.quad_form @ rot - right.quad_form
    a = 0.5 * (a + a.T)
    j = right.linear_vec - rot.T @ left.linear_vec

    lam = np.linalg.eigvalsh(a)
    if np.min(np.abs(lam)) <= singular_tol * max(1.0, np.max(np.abs(lam))):
        raise NotRepresentableError(
            "combined quadratic form is singular; the overlap is a "
            "delta-type distribution with no closed Gaussian form"
        )

    coefficient = 1.0 / (np.conj(left.norm_const) * right.norm_const)
    return CrossFlavorOverlap(
        quad_matrix=a,
        lin_vec=j,
        coefficient=complex(coefficient),
        fresnel_value=fresnel_closed_form(a, j),
    )
