"""Stability of independence, of matrix inversion, and of interior points
under vertex perturbation.

Matrix norms follow the convention used for the recoordination argument:
``max_entry_norm`` is the largest absolute entry and ``induced_l1_norm`` the
operator norm for the l1 vector norm (largest absolute column sum). For
``n x n`` matrices the latter is at most ``n`` times the former, so the
comparison constant ``kappa`` is taken to be exactly ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .affine import as_affine, evaluate, modulus_forward
from .errors import (
    DegeneracyError,
    InvalidInputError,
    NoCertificateError,
    NotCertifiableError,
)
from .simplex import Membership, Simplex, classify
from .vecnorm import as_points, get_eta, l1_margin, solve_linear

AFFINE_SUM_TOL = 1e-9
REPRODUCTION_TOL = 1e-8
INVERSION_SLACK = 1e-6


@dataclass(frozen=True)
class MatrixNorms:
    max_entry_norm: float
    induced_l1_norm: float


def matrix_norms(A) -> MatrixNorms:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError("matrix must be square")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    if A.size == 0:
        return MatrixNorms(0.0, 0.0)
    absA = np.abs(A)
    return MatrixNorms(float(np.max(absA)), float(np.max(np.sum(absA, axis=0))))


def linear_perturbation_delta(vectors, eta: float | None = None) -> tuple[float, float]:
    """Perturbation radius preserving linear independence.

    With ``c`` the certified l1 margin of the vectors, ``delta = c / (2n + 1)``;
    any family ``y_k`` with ``||y_k - x_k|| < delta`` satisfies
    ``||sum lam_k y_k|| >= 2 n delta ||lam||_1``. Returns
    ``(delta, guaranteed_margin)``.
    """
    eta = get_eta(eta)
    V = as_points(vectors, name="vectors")
    n = V.shape[0]
    c = l1_margin(V)
    scale = float(np.max(np.linalg.norm(V, axis=1)))
    if not c > eta * scale:
        raise DegeneracyError(f"cannot certify linear independence: margin {c:.3e}")
    delta = c / (2 * n + 1)
    return delta, 2 * n * delta


def affine_perturbation_delta(points, eta: float | None = None) -> float:
    """Radius ``delta`` such that moving each point by less than ``delta`` keeps
    the family affinely independent.

    Differences from a base vertex then move by less than ``2 delta``, so
    half the linear radius of the difference vectors suffices. Every base
    vertex gives a valid radius; the largest is returned.
    """
    A = as_points(points)
    if A.shape[0] == 1:
        return math.inf
    best = 0.0
    last_error = None
    for j in range(A.shape[0] - 1, -1, -1):
        try:
            delta, _ = linear_perturbation_delta(np.delete(A, j, axis=0) - A[j], eta)
        except DegeneracyError as exc:
            last_error = exc
            continue
        best = max(best, 0.5 * delta)
    if best == 0.0:
        raise DegeneracyError("cannot certify affine independence") from last_error
    return best


def _inversion_t(n: int, eps: float) -> float:
    # largest t with t/(1-t) <= eps and n t (1+t)^(n-1) <= 1/2, by bisection
    def det_loss(t):
        return n * t * (1.0 + t) ** (n - 1)

    lo, hi = 0.0, 0.5 / n  # det_loss(0.5/n) >= 0.5
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        if det_loss(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    t = min(lo, eps / (1.0 + eps))
    return t * (1.0 - 2 * INVERSION_SLACK)


def inversion_delta(n: int, eps: float) -> float:
    """Entry-wise radius around the identity with controlled inverse and determinant.

    If ``max |A - I| < delta`` then, with ``t = n delta``, the column-sum norm
    of ``A - I`` is below ``t``; the Neumann series gives
    ``||A^-1 - I|| <= t/(1-t) < eps`` and the multilinear expansion of the
    determinant over columns gives ``det A >= 1 - n t (1+t)^(n-1) > 1/2``.
    ``t`` is taken a relative ``2e-6`` below the largest value meeting both.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidInputError(f"matrix size must be a positive integer, got {n!r}")
    eps = float(eps)
    if not (eps > 0 and math.isfinite(eps)):
        raise InvalidInputError(f"epsilon must be positive, got {eps!r}")
    n = int(n)
    return _inversion_t(n, eps) / n


@dataclass(frozen=True)
class PerturbationCertificate:
    """``delta`` together with the named constants it was derived from."""

    delta: float
    chain: tuple[tuple[str, float], ...] = ()

    def value(self, name: str) -> float:
        return dict(self.chain)[name]


def vertex_perturbation_delta(s: Simplex, c, eta: float | None = None) -> PerturbationCertificate:
    """Radius ``delta`` for which ``c`` stays interior under in-hull vertex moves.

    If every ``x_k`` lies in ``aff(s)`` with ``||x_k - a_k|| < delta``, the
    ``x_k`` are affinely independent and ``c`` has strictly positive
    coordinates with respect to them. The chain:

    ``delta_1 = min(affine radius, 1/2 - 1e-12)``;
    ``delta_2 = min(delta_1, inversion_delta(n+1, m / (2 kappa)))`` with
    ``kappa = n + 1`` and ``m`` the smallest coordinate of ``c``;
    ``delta = min(delta_2, modulus_forward(delta_2))``, so each coordinate of
    each ``x_k`` is within ``delta_2`` of the corresponding unit vector.
    """
    v = classify(s, c, eta)
    if v.verdict is not Membership.CERTIFIED_INSIDE:
        raise NoCertificateError(
            f"point is not certifiably interior (verdict {v.verdict.value})"
        )
    size = s.n + 1
    m = float(np.min(v.lam))
    affine_delta = affine_perturbation_delta(s.vertices, eta)
    delta_1 = min(affine_delta, 0.5 - 1e-12)
    kappa = float(size)
    inversion_target = m / (2.0 * kappa)
    inv_delta = inversion_delta(size, inversion_target)
    delta_2 = min(delta_1, inv_delta)
    modulus_delta = modulus_forward(s.constants, delta_2)
    delta = min(delta_2, modulus_delta)
    chain = (
        ("margin_c", s.constants.margin_c),
        ("affine_delta", affine_delta),
        ("delta_1", delta_1),
        ("m", m),
        ("kappa", kappa),
        ("inversion_target", inversion_target),
        ("inversion_delta", inv_delta),
        ("delta_2", delta_2),
        ("modulus_delta", modulus_delta),
        ("delta", delta),
    )
    return PerturbationCertificate(delta, chain)


def recoordinate(s: Simplex, new_points, lam, eta: float | None = None) -> np.ndarray:
    """Coordinates ``gamma`` of ``c = evaluate(s.vertices, lam)`` w.r.t. ``new_points``.

    Row ``k`` of ``Xi`` holds the coordinates of ``new_points[k]`` relative to
    ``s``; ``gamma`` solves ``Xi^T gamma = lam``. The result is checked to sum
    to one and to reproduce ``c``.
    """
    eta = get_eta(eta)
    X = as_points(new_points, name="new points")
    if X.shape != s.vertices.shape:
        raise InvalidInputError(
            f"expected {s.n + 1} new points of dimension {s.dim}, got shape {X.shape}"
        )
    lam = as_affine(lam, size=s.n + 1, name="lambda")
    Xi, resid = s.barycentric(X)
    tol = eta * max(s.constants.scale, float(np.max(np.linalg.norm(X, axis=1))))
    if np.any(resid > tol):
        k = int(np.argmax(resid))
        raise InvalidInputError(
            f"new point {k} is {resid[k]:.3e} away from the affine hull of the simplex"
        )
    gamma = solve_linear(Xi.T, lam, eta=eta).solution
    total = math.fsum(gamma)
    if abs(total - 1.0) > AFFINE_SUM_TOL:
        raise NotCertifiableError(f"recoordinated weights sum to {total!r}")
    c = evaluate(s.vertices, lam)
    gap = float(np.linalg.norm(evaluate(X, gamma) - c))
    if gap > REPRODUCTION_TOL * max(1.0, s.constants.scale):
        raise NotCertifiableError(f"recoordinated weights miss the point by {gap:.3e}")
    return gamma


__all__ = [
    "MatrixNorms",
    "PerturbationCertificate",
    "affine_perturbation_delta",
    "inversion_delta",
    "linear_perturbation_delta",
    "matrix_norms",
    "recoordinate",
    "vertex_perturbation_delta",
]
