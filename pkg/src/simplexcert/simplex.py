"""Simplices, membership, interior radii, face geometry, epsilon-nets, transport.

Vertex and face indices are 0-based throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .affine import (
    Barycentric,
    CoordinateMapConstants,
    _AffineFrame,
    as_convex,
    barycentric as _barycentric,
    coordinate_map_constants,
    evaluate,
    modulus_forward,
)
from .errors import (
    DimensionError,
    InvalidInputError,
    NoCertificateError,
    NotCertifiableError,
    ResourceError,
)
from .vecnorm import MACHINE_EPS, as_point, as_points, get_eta

DEFAULT_NET_CAP = 10_000_000


class Simplex:
    """An n-simplex given by n+1 affinely independent vertices in R^d.

    Construction certifies the independence margin (``DegeneracyError``
    otherwise). Instances are immutable; the vertex array is read-only.
    """

    __slots__ = ("vertices", "constants", "_frame")

    def __init__(self, vertices, eta: float | None = None):
        A = as_points(vertices, name="vertices")
        if A.shape[0] - 1 > A.shape[1]:
            raise DimensionError(
                f"{A.shape[0]} vertices cannot span a simplex in dimension {A.shape[1]}"
            )
        constants = coordinate_map_constants(A, eta)
        A.setflags(write=False)
        object.__setattr__(self, "vertices", A)
        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "_frame", _AffineFrame(A))

    def __setattr__(self, name, value):
        raise AttributeError("Simplex is immutable")

    @property
    def n(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def barycentric(self, x) -> Barycentric:
        return _barycentric(self.vertices, x, _frame=self._frame)

    def __repr__(self):
        return f"Simplex(n={self.n}, dim={self.dim}, margin_c={self.constants.margin_c:.6g})"


def new_simplex(points, eta: float | None = None) -> Simplex:
    return Simplex(points, eta)


def standard_simplex(n: int) -> Simplex:
    """The standard simplex: the unit vectors e_1..e_{n+1} of R^{n+1}."""
    n = _nonnegative_int(n, "n")
    return Simplex(np.eye(n + 1))


def regular_simplex(n: int) -> Simplex:
    """A regular n-simplex in R^n with edge length sqrt(2).

    The vertices are e_1..e_n and ``(1 + sqrt(n+1))/n * (1, ..., 1)``.
    """
    n = _nonnegative_int(n, "n")
    if n < 1:
        raise InvalidInputError("regular_simplex needs n >= 1")
    apex = np.full(n, (1.0 + math.sqrt(n + 1.0)) / n)
    return Simplex(np.vstack([np.eye(n), apex]))


def face(s: Simplex, kept: Sequence[int]) -> Simplex:
    """The face spanned by the vertices with indices in ``kept``."""
    idx = sorted(int(i) for i in kept)
    if not idx:
        raise InvalidInputError("a face needs at least one vertex")
    if len(set(idx)) != len(idx):
        raise InvalidInputError(f"face indices repeat: {list(kept)}")
    if idx[0] < 0 or idx[-1] > s.n:
        raise InvalidInputError(f"face indices must lie in 0..{s.n}")
    return Simplex(s.vertices[idx])


def opposite_face(s: Simplex, nu: int) -> Simplex:
    nu = _vertex_index(s, nu)
    if s.n == 0:
        raise InvalidInputError("a 0-simplex has no facet")
    return face(s, [k for k in range(s.n + 1) if k != nu])


def barycentre(s: Simplex) -> tuple[np.ndarray, np.ndarray]:
    lam = np.full(s.n + 1, 1.0 / (s.n + 1))
    return evaluate(s.vertices, lam), lam


class Membership(enum.Enum):
    CERTIFIED_INSIDE = "inside"
    CERTIFIED_OUTSIDE = "outside"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class MembershipVerdict:
    """Tri-state membership.

    ``witness_margin`` is ``min(lam)`` for inside and indeterminate verdicts,
    and ``max(-min(lam), aff_residual)`` for outside ones, so that for a
    certified verdict it is always a positive quantity exceeding the threshold.
    """

    verdict: Membership
    lam: np.ndarray
    aff_residual: float
    witness_margin: float


def _length_scale(s: Simplex, x: np.ndarray) -> float:
    return max(s.constants.scale, float(np.linalg.norm(x)))


def classify(s: Simplex, x, eta: float | None = None) -> MembershipVerdict:
    """Classify ``x`` as certifiably inside, certifiably outside, or neither.

    Inside needs every coordinate above ``eta`` and ``x`` within
    ``eta * scale`` of the affine hull; outside needs a coordinate below
    ``-eta`` or a hull distance above ``eta * scale``. Points with a
    coordinate in ``[-eta, eta]`` are left indeterminate on purpose.
    """
    eta = get_eta(eta)
    x = as_point(x, dim=s.dim)
    lam, resid = s.barycentric(x)
    low = float(np.min(lam))
    tol = eta * _length_scale(s, x)
    if low < -eta or resid > tol:
        return MembershipVerdict(Membership.CERTIFIED_OUTSIDE, lam, resid, max(-low, resid))
    if low > eta:
        return MembershipVerdict(Membership.CERTIFIED_INSIDE, lam, resid, low)
    return MembershipVerdict(Membership.INDETERMINATE, lam, resid, low)


@dataclass(frozen=True)
class InteriorCertificate:
    radius_r: float
    lam: np.ndarray
    min_coeff_m: float


def relint_certificate(s: Simplex, x, eta: float | None = None) -> InteriorCertificate:
    """Radius ``r`` with ``B(x, r) & aff(s)`` contained in ``s``.

    ``r = m * c / 2`` with ``m`` the smallest barycentric coordinate: moving
    less than ``r`` within the hull changes the coordinates by less than ``m``
    in l1, so none of them reaches zero.
    """
    v = classify(s, x, eta)
    if v.verdict is not Membership.CERTIFIED_INSIDE:
        raise NoCertificateError(
            f"point is not certifiably interior (verdict {v.verdict.value}, "
            f"min coordinate {float(np.min(v.lam)):.3e})"
        )
    m = float(np.min(v.lam))
    return InteriorCertificate(modulus_forward(s.constants, m), v.lam, m)


def vertex_face_height(s: Simplex, nu: int) -> float:
    """Certified lower bound on the distance from vertex ``nu`` to the affine
    hull of the opposite facet."""
    nu = _vertex_index(s, nu)
    if s.n == 0:
        raise InvalidInputError("a 0-simplex has no facet")
    others = np.delete(s.vertices, nu, axis=0)
    _, resid = _AffineFrame(others).solve(s.vertices[nu][None, :])
    envelope = 8.0 * (s.n + s.dim) * MACHINE_EPS * s.constants.scale
    return max(0.0, float(resid[0]) - envelope)


def face_distance_lb(s: Simplex, lam, nu: int, eta: float | None = None) -> float:
    """Lower bound on the distance from ``evaluate(lam)`` to the facet opposite ``nu``.

    Inside ``aff(s)`` the distance to the facet's hyperplane is affine in the
    coordinates, zero on the facet and ``h_nu`` at the vertex, hence equal to
    ``lam[nu] * h_nu``; the distance to the facet itself can only be larger.
    The rounding of the floating-point point ``evaluate(lam)`` is subtracted.
    Returns exactly 0 when ``lam[nu] <= eta``.
    """
    eta = get_eta(eta)
    lam = as_convex(lam, size=s.n + 1, eta=eta, name="lambda")
    nu = _vertex_index(s, nu)
    if lam[nu] <= eta:
        return 0.0
    M = float(np.max(np.linalg.norm(s.vertices, axis=1)))
    rounding = (s.n + 2) * MACHINE_EPS * M * float(np.sum(np.abs(lam)))
    return max(0.0, float(lam[nu]) * vertex_face_height(s, nu) - rounding)


class FaceProjection(NamedTuple):
    point: np.ndarray
    coeffs: np.ndarray


def _check_projectable(s: Simplex, lam, nu: int, eta: float):
    lam = as_convex(lam, size=s.n + 1, eta=eta, name="lambda")
    nu = _vertex_index(s, nu)
    if s.n == 0:
        raise InvalidInputError("a 0-simplex has no facet")
    if not (eta < lam[nu] < 1.0 - eta):
        raise NotCertifiableError(
            f"coordinate {nu} = {float(lam[nu])!r} is not certifiably inside (0, 1)"
        )
    return lam, nu


def face_projection(s: Simplex, lam, nu: int, eta: float | None = None) -> FaceProjection:
    """Where the line from vertex ``nu`` through ``c = evaluate(lam)`` meets the facet.

    The facet coefficients are ``lam_k / (1 - lam_nu)`` for ``k != nu``; the
    meeting point is ``a_nu + t (c - a_nu)`` with ``t = 1 / (1 - lam_nu)``.
    """
    eta = get_eta(eta)
    lam, nu = _check_projectable(s, lam, nu, eta)
    coeffs = np.delete(lam, nu) / (1.0 - lam[nu])
    point = evaluate(np.delete(s.vertices, nu, axis=0), coeffs)
    return FaceProjection(point, coeffs)


def projection_stability(s: Simplex, lam, nu: int, r: float,
                         eta: float | None = None) -> float:
    """Radius ``delta`` keeping radial facet projections within ``r`` of ``b``.

    With ``M = max_k ||a_k||`` and
    ``eps = min(lam_nu, 1 - lam_nu, (1 - lam_nu)**2 r / (2M)) / 2``, any
    affine combination ``x`` with ``||x - c|| < delta = modulus_forward(eps)``
    has ``0 < xi_nu < 1`` and projects into ``B(b, r) & aff(facet)``.
    """
    eta = get_eta(eta)
    lam, nu = _check_projectable(s, lam, nu, eta)
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise NotCertifiableError(f"radius must be positive, got {r!r}")
    M = float(np.max(np.linalg.norm(s.vertices, axis=1)))
    t = float(lam[nu])
    eps = 0.5 * min(t, 1.0 - t, (1.0 - t) ** 2 * r / (2.0 * M))
    return modulus_forward(s.constants, eps)


@dataclass(frozen=True)
class NetPointSet:
    """A finite set claimed to ``epsilon``-cover a simplex.

    ``coords[i]`` are the (convex) barycentric coordinates of ``points[i]``.
    """

    epsilon: float
    points: np.ndarray
    coords: np.ndarray

    def __len__(self):
        return self.points.shape[0]


def _net_point_count(n: int, radius: float, limit: float) -> int:
    if n == 0 or radius >= 2.0 * n / (n + 1):
        return 1
    m = math.ceil(n / radius)
    if n == 1:
        return m + 1
    total = 1  # apex, t = 0
    for i in range(1, m + 1):
        total += _net_point_count(n - 1, (radius - 1.0 / m) * m / i, limit - total)
        if total > limit:
            break
    return total


def _net_coords(n: int, radius: float) -> np.ndarray:
    """An l1 ``radius``-net of the standard simplex, rows of length n+1.

    Cone construction: ``(t, v) -> (t v, 1 - t)`` over a grid ``t = i/m`` of
    [0, 1] and nets of the lower-dimensional simplex. Rounding ``t`` to the
    grid costs at most ``2 * (1/(2m))`` in l1, and the base net at level ``t``
    only needs radius ``(radius - 1/m) / t``.
    """
    if n == 0:
        return np.ones((1, 1))
    if radius >= 2.0 * n / (n + 1):
        return np.full((1, n + 1), 1.0 / (n + 1))
    m = math.ceil(n / radius)
    blocks = [np.eye(1, n + 1, n)]  # t = 0: the apex e_{n+1}
    for i in range(1, m + 1):
        t = i / m
        sub = _net_coords(n - 1, (radius - 1.0 / m) / t) if n > 1 else np.ones((1, 1))
        blocks.append(np.hstack([t * sub, np.full((sub.shape[0], 1), 1.0 - t)]))
    return np.vstack(blocks)


def epsilon_net(s: Simplex, eps: float, cap: int = DEFAULT_NET_CAP) -> NetPointSet:
    """A finite ``eps``-net of ``s`` in the ambient l2 norm.

    An l1 net of radius ``eps / lip_forward`` on the standard simplex is
    pushed through the coordinate map, which is ``lip_forward``-Lipschitz
    from l1. Raises ``ResourceError`` (with ``required`` set) when the net
    would have more than ``cap`` points.
    """
    eps = float(eps)
    if not (eps > 0 and math.isfinite(eps)):
        raise InvalidInputError(f"epsilon must be positive, got {eps!r}")
    radius = eps / s.constants.lip_forward * (1.0 - 1e-9)
    limit = 1000.0 * cap
    count = _net_point_count(s.n, radius, limit=limit)
    if count > cap:
        # counting stops once past the limit, so a huge count is only a lower bound
        qualifier = "at least " if count > limit else ""
        raise ResourceError(
            f"a net of radius {eps:g} on this {s.n}-simplex needs {qualifier}{count} points, "
            f"cap is {cap}",
            required=count,
        )
    coords = _net_coords(s.n, radius)
    points = coords @ s.vertices
    coords.setflags(write=False)
    points.setflags(write=False)
    return NetPointSet(eps, points, coords)


def transport(src: Simplex, dst: Simplex, x, eta: float | None = None) -> np.ndarray:
    """Carry ``x`` from ``src`` to ``dst`` keeping its barycentric coordinates."""
    if src.n != dst.n:
        raise DimensionError(f"cannot transport between a {src.n}-simplex and a {dst.n}-simplex")
    v = classify(src, x, eta)
    if v.verdict is Membership.CERTIFIED_OUTSIDE:
        raise InvalidInputError("point is certifiably outside the source simplex")
    return evaluate(dst.vertices, v.lam)


def _vertex_index(s: Simplex, nu) -> int:
    if isinstance(nu, bool) or int(nu) != nu:
        raise InvalidInputError(f"vertex index must be an integer, got {nu!r}")
    nu = int(nu)
    if not 0 <= nu <= s.n:
        raise InvalidInputError(f"vertex index {nu} outside 0..{s.n}")
    return nu


def _nonnegative_int(n, name: str) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InvalidInputError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


__all__ = [
    "DEFAULT_NET_CAP",
    "FaceProjection",
    "InteriorCertificate",
    "Membership",
    "MembershipVerdict",
    "NetPointSet",
    "Simplex",
    "barycentre",
    "classify",
    "epsilon_net",
    "face",
    "face_distance_lb",
    "face_projection",
    "new_simplex",
    "opposite_face",
    "projection_stability",
    "regular_simplex",
    "relint_certificate",
    "standard_simplex",
    "transport",
    "vertex_face_height",
]
