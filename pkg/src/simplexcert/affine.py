"""Affine combinations, barycentric coordinates and their continuity moduli.

Coordinates are plain numpy arrays. A coefficient vector is *affine* when it
sums to one, *convex* when additionally nonnegative. The independence margin
``c`` of a point set is computed once (``coordinate_map_constants``) and every
modulus below is a closed-form function of ``c`` and the forward Lipschitz
constant.

A note on the margin: for any base vertex ``a_j`` the differences
``a_k - a_j`` give a valid margin ``c_j``, and every bound that follows
(moduli, separation, interior radii) only needs *one* base. We keep the best
``c_j`` so that the constants do not depend on vertex order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegeneracyError, DimensionError, InvalidInputError
from .vecnorm import (
    MACHINE_EPS,
    as_coefficients,
    as_points,
    get_eta,
    l1_margin,
    pairwise_sum,
)

SUM_TOL = 1e-9


class ConvexityClass(enum.Enum):
    AFFINE = "affine"
    CONVEX = "convex"
    STRICTLY_POSITIVE = "strictly_positive"


@dataclass(frozen=True)
class CoordinateMapConstants:
    """Constants of the coordinate map ``lam -> sum_k lam_k a_k``.

    Attributes
    ----------
    lip_forward : float
        Upper bound on ``||F||`` for the l1 coefficient norm; we use the
        diameter of the vertex set, which bounds ``max_k ||a_k - a_j||`` for
        every base ``j``.
    margin_c : float
        Certified ``c`` with ``||F lam|| >= c ||lam||_1`` where ``F`` is built
        on the differences from vertex ``base_index``.
    base_index : int
        The base vertex realising ``margin_c``.
    scale : float
        Magnitude of the problem, ``max(max_k ||a_k||, diameter)``; thresholds
        that compare lengths are ``eta * scale``.
    """

    lip_forward: float
    margin_c: float
    base_index: int
    scale: float

    @property
    def lip_inverse_bound(self) -> float:
        return 1.0 / self.margin_c


class Barycentric(NamedTuple):
    lam: np.ndarray
    aff_residual: float | np.ndarray


def as_affine(lam, size: int | None = None, name: str = "coefficients") -> np.ndarray:
    """Validate that ``lam`` is finite and sums to one (relative tolerance 1e-9)."""
    lam = as_coefficients(lam, size=size, name=name)
    total = math.fsum(lam)
    if abs(total - 1.0) > SUM_TOL * max(1.0, float(np.sum(np.abs(lam)))):
        raise InvalidInputError(f"{name} sum to {total!r}, not 1")
    return lam


def as_convex(lam, size: int | None = None, eta: float | None = None,
              name: str = "coefficients") -> np.ndarray:
    lam = as_affine(lam, size=size, name=name)
    if np.min(lam) < -get_eta(eta):
        raise InvalidInputError(f"{name} has a negative entry {float(np.min(lam))!r}")
    return lam


def convexity_class(lam, eta: float | None = None) -> ConvexityClass:
    """The strongest class an affine coefficient vector certifiably belongs to."""
    eta = get_eta(eta)
    lam = as_affine(lam)
    low = float(np.min(lam))
    if low > eta:
        return ConvexityClass.STRICTLY_POSITIVE
    if low >= -eta:
        return ConvexityClass.CONVEX
    return ConvexityClass.AFFINE


def flatten_affine(outer, inners: Sequence[tuple]) -> tuple[np.ndarray, np.ndarray]:
    """Rewrite an affine combination of affine combinations as one combination.

    Parameters
    ----------
    outer : array_like, shape (m,)
        Weights on the ``m`` inner combinations; must sum to one.
    inners : sequence of (coeffs, base_points)
        Each inner combination; ``coeffs`` must sum to one.

    Returns
    -------
    coeffs, points
        Weights over the distinct base points (exact coordinate equality, in
        order of first appearance) and those points. The weights sum to one.
    """
    outer = as_affine(outer, name="outer weights")
    if len(inners) != outer.size:
        raise DimensionError(f"{outer.size} outer weights but {len(inners)} inner combinations")
    index: dict[tuple, int] = {}
    points: list[np.ndarray] = []
    weights: list[float] = []
    dim = None
    for w, (coeffs, base) in zip(outer, inners):
        base = as_points(base, name="base points")
        coeffs = as_affine(coeffs, size=base.shape[0], name="inner weights")
        if dim is None:
            dim = base.shape[1]
        elif base.shape[1] != dim:
            raise DimensionError("inner combinations live in different dimensions")
        for c, p in zip(coeffs, base):
            key = tuple(p.tolist())
            if key not in index:
                index[key] = len(points)
                points.append(p)
                weights.append(0.0)
            weights[index[key]] += w * c
    return np.array(weights), np.array(points)


def evaluate(points, lam) -> np.ndarray:
    """``sum_k lam_k a_k`` with a fixed pairwise summation order."""
    A = as_points(points)
    lam = as_coefficients(lam, size=A.shape[0], name="coefficients")
    return pairwise_sum(lam[:, None] * A)


def coordinate_map_constants(points, eta: float | None = None) -> CoordinateMapConstants:
    """Certify affine independence and return the coordinate-map constants.

    Raises ``DegeneracyError`` when no base vertex yields a margin above
    ``eta * scale``. A single point (a 0-simplex) gets the vacuous constants
    ``lip_forward = margin_c = 1``.
    """
    eta = get_eta(eta)
    A = as_points(points)
    k, d = A.shape
    n = k - 1
    if n > d:
        raise DimensionError(f"{k} points in dimension {d} cannot be affinely independent")
    norms = np.linalg.norm(A, axis=1)
    if n == 0:
        return CoordinateMapConstants(1.0, 1.0, 0, max(float(norms[0]), 1.0))
    pair = np.linalg.norm(A[:, None, :] - A[None, :, :], axis=-1)
    diameter = float(np.max(pair))
    scale = max(float(np.max(norms)), diameter)
    best, best_j = 0.0, n
    # scan from the last vertex so ties resolve to the conventional base a_{n+1}
    for j in range(n, -1, -1):
        diffs = np.delete(A, j, axis=0) - A[j]
        c = l1_margin(diffs)
        if c > best:
            best, best_j = c, j
    if not best > eta * scale:
        raise DegeneracyError(
            f"cannot certify affine independence: margin {best:.3e} <= "
            f"{eta:.1e} * scale {scale:.3e}"
        )
    return CoordinateMapConstants(diameter * (1.0 + 4 * MACHINE_EPS), best, best_j, scale)


class _AffineFrame:
    """QR factorisation of the differences ``a_k - a_{n+1}``, reused across solves."""

    def __init__(self, A: np.ndarray):
        self.base = A[-1]
        self.D = (A[:-1] - A[-1]).T  # (d, n)
        if self.D.shape[1]:
            self.Q, self.R = np.linalg.qr(self.D)

    def solve(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Least-squares coordinates for each row of ``X`` (shape (m, d))."""
        Rhs = (X - self.base).T  # (d, m)
        n = self.D.shape[1]
        if n == 0:
            z = np.zeros((0, X.shape[0]))
        else:
            z = np.linalg.solve(self.R, self.Q.T @ Rhs)
            # one step of refinement on the projected residual
            z = z + np.linalg.solve(self.R, self.Q.T @ (Rhs - self.D @ z))
        resid = np.linalg.norm(Rhs - self.D @ z, axis=0)
        lam = np.vstack([z, 1.0 - np.sum(z, axis=0, keepdims=True)]).T
        return lam, resid


def barycentric(points, x, eta: float | None = None, *, _frame=None) -> Barycentric:
    """Barycentric coordinates of ``x`` relative to affinely independent points.

    ``x`` may lie off the affine hull: the coordinates are those of its
    orthogonal projection onto the hull and ``aff_residual`` is the distance
    to the hull. ``x`` can also be a stack of points of shape (m, d), in which
    case ``lam`` has shape (m, n+1) and ``aff_residual`` shape (m,).
    """
    A = as_points(points)
    if _frame is None:
        coordinate_map_constants(A, eta)
        _frame = _AffineFrame(A)
    X = np.array(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.ndim != 2 or X.shape[1] != A.shape[1]:
        raise DimensionError(f"query point(s) must have dimension {A.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("query point has non-finite entries")
    lam, resid = _frame.solve(X)
    if single:
        return Barycentric(lam[0], float(resid[0]))
    return Barycentric(lam, resid)


def modulus_forward(constants: CoordinateMapConstants, eps: float) -> float:
    """``delta`` with ``||x - y|| < delta  =>  ||xi - eta||_1 < eps``.

    Here ``x, y`` are affine combinations of the vertices with coordinates
    ``xi, eta``. The margin bounds the deviation on the non-base coordinates
    by ``eps/2``; the base coordinate deviates by at most their sum.
    """
    eps = _positive(eps, "epsilon")
    return 0.5 * eps * constants.margin_c


def modulus_inverse(constants: CoordinateMapConstants, eps: float) -> float:
    """``delta`` with ``sum_{k<=n} |xi_k - eta_k| < delta  =>  ||x - y|| < eps``.

    Holds whichever ``n`` of the ``n+1`` coordinates are summed, since
    ``lip_forward`` bounds the map for every base vertex.
    """
    eps = _positive(eps, "epsilon")
    return eps / constants.lip_forward


def separation_lb(constants: CoordinateMapConstants, lam, mu) -> float:
    """Certified lower bound ``(c/2) ||lam - mu||_1`` on ``||f(lam) - f(mu)||``."""
    lam = as_affine(lam, name="lambda")
    mu = as_affine(mu, size=lam.size, name="mu")
    return 0.5 * constants.margin_c * float(np.sum(np.abs(lam - mu)))


def _positive(value, name: str) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidInputError(f"{name} must be positive and finite, got {value!r}")
    return value


__all__ = [
    "Barycentric",
    "ConvexityClass",
    "CoordinateMapConstants",
    "as_affine",
    "as_convex",
    "barycentric",
    "convexity_class",
    "coordinate_map_constants",
    "evaluate",
    "flatten_affine",
    "modulus_forward",
    "modulus_inverse",
    "separation_lb",
]
