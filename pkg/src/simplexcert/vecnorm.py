"""Vectors, coefficient norms, Gram lower bounds and pivot-checked solves.

Everything here is a pure function of its arguments. The positivity tolerance
``eta`` used across the package lives in a context variable so that it can be
overridden for a block of code (``with tolerance(1e-7): ...``) without
touching shared module state.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, InvalidInputError, NotCertifiableError

MACHINE_EPS = float(np.finfo(float).eps)
DEFAULT_ETA = 1e-9

_eta = contextvars.ContextVar("simplexcert_eta", default=DEFAULT_ETA)


def get_eta(eta: float | None = None) -> float:
    """Return ``eta`` if given, else the tolerance active in this context."""
    if eta is None:
        return _eta.get()
    eta = float(eta)
    if not (eta > 0 and math.isfinite(eta)):
        raise InvalidInputError(f"tolerance must be positive and finite, got {eta!r}")
    return eta


@contextlib.contextmanager
def tolerance(eta: float):
    """Temporarily override the positivity tolerance for the current context."""
    token = _eta.set(get_eta(eta))
    try:
        yield
    finally:
        _eta.reset(token)


class NormTag(enum.Enum):
    L1 = "l1"
    L2 = "l2"


class SolveResult(NamedTuple):
    solution: np.ndarray
    residual_norm: float


def as_point(x, dim: int | None = None, name: str = "point") -> np.ndarray:
    """Validate ``x`` as a finite 1-d coordinate vector and return a float copy."""
    arr = np.array(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty 1-d coordinate vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if dim is not None and arr.size != dim:
        raise DimensionError(f"{name} has dimension {arr.size}, expected {dim}")
    return arr


def as_points(points, name: str = "points") -> np.ndarray:
    """Validate a non-empty list of equal-length finite points; returns (k, d)."""
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInputError(f"{name} must be a non-empty list of equal-length points")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def norm(v, tag: NormTag = NormTag.L2) -> float:
    """The l1 or l2 norm of a finite vector."""
    v = as_point(v, name="vector")
    if tag is NormTag.L1:
        return float(np.sum(np.abs(v)))
    if tag is NormTag.L2:
        # math.hypot rescales, so tiny entries do not underflow and huge ones do not overflow
        return math.hypot(*v.tolist())
    raise InvalidInputError(f"unknown norm tag {tag!r}")


def gram_min_eigen_lb(vectors) -> float:
    """Certified lower bound on the smallest eigenvalue of the Gram matrix.

    The floating-point eigenvalue is reduced by an envelope covering both the
    rounding in forming ``G = V V^T`` (at most ``d`` products per entry) and the
    backward error of the symmetric eigensolver, then clipped at zero.

    Parameters
    ----------
    vectors : array_like, shape (k, d)
        Rows are the vectors; requires ``1 <= k <= d``.

    Returns
    -------
    float
        A value ``0 <= lb <= lambda_min(G)``.
    """
    V = as_points(vectors, name="vectors")
    k, d = V.shape
    if k > d:
        raise DimensionError(f"{k} vectors in dimension {d} cannot be independent")
    G = V @ V.T
    lam_min = float(np.linalg.eigvalsh(G)[0])
    scale = float(np.trace(G))
    envelope = 2.0 * (k * k + d * k) * MACHINE_EPS * scale
    return max(0.0, lam_min - envelope)


def l1_margin(vectors) -> float:
    """Certified ``c`` with ``||sum_k lam_k v_k||_2 >= c * ||lam||_1`` for all ``lam``.

    Uses ``sigma_min ||lam||_2 >= sigma_min ||lam||_1 / sqrt(k)``.
    """
    V = as_points(vectors, name="vectors")
    k = V.shape[0]
    lb = gram_min_eigen_lb(V)
    # round down: sqrt and division each cost at most one ulp
    return math.sqrt(lb) / math.sqrt(k) * (1.0 - 4 * MACHINE_EPS)


def _lu_factor(A: np.ndarray, eta: float):
    n = A.shape[0]
    U = A.copy()
    L = np.eye(n)
    perm = np.arange(n)
    row_scale = np.max(np.abs(A), axis=1)
    for j in range(n):
        p = j + int(np.argmax(np.abs(U[j:, j])))
        if p != j:
            U[[j, p]] = U[[p, j]]
            L[[j, p], :j] = L[[p, j], :j]
            perm[[j, p]] = perm[[p, j]]
            row_scale[[j, p]] = row_scale[[p, j]]
        pivot = U[j, j]
        threshold = eta * max(row_scale[j], MACHINE_EPS)
        if not abs(pivot) > threshold:
            raise NotCertifiableError(
                f"pivot {pivot:.3e} in column {j} is below the certification "
                f"threshold {threshold:.3e}"
            )
        factors = U[j + 1:, j] / pivot
        L[j + 1:, j] = factors
        U[j + 1:, j:] -= np.outer(factors, U[j, j:])
        U[j + 1:, j] = 0.0
    return L, U, perm


def _lu_solve(L, U, perm, b):
    y = b[perm].copy()
    n = y.size
    for i in range(n):
        y[i] -= L[i, :i] @ y[:i]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - U[i, i + 1:] @ x[i + 1:]) / U[i, i]
    return x


def solve_linear(A, b, *, refine: bool = False, eta: float | None = None) -> SolveResult:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Raises ``NotCertifiableError`` when a pivot falls below ``eta`` times the
    magnitude of its (original) row; that signals "cannot certify
    invertibility", not singularity. The residual ``||A x - b||_2`` is always
    reported.
    """
    eta = get_eta(eta)
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidInputError("coefficient matrix must be square and non-empty")
    if b.shape != (A.shape[0],):
        raise DimensionError(f"right-hand side has shape {b.shape}, expected ({A.shape[0]},)")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise InvalidInputError("linear system has non-finite entries")
    L, U, perm = _lu_factor(A, eta)
    x = _lu_solve(L, U, perm, b)
    if refine:
        x = x + _lu_solve(L, U, perm, b - A @ x)
    return SolveResult(x, float(np.linalg.norm(A @ x - b)))


def pairwise_sum(terms: np.ndarray) -> np.ndarray:
    """Sum along axis 0 by a fixed balanced tree, for reproducible rounding."""
    terms = np.asarray(terms, dtype=float)
    while terms.shape[0] > 1:
        k = terms.shape[0]
        head = terms[0:k - k % 2:2] + terms[1:k - k % 2:2]
        terms = np.concatenate([head, terms[k - k % 2:]], axis=0) if k % 2 else head
    return terms[0].copy()


def as_coefficients(lam, size: int | None = None, name: str = "coefficients") -> np.ndarray:
    """Validate a finite 1-d coefficient vector (no sum constraint)."""
    arr = np.array(lam, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be a non-empty finite 1-d vector")
    if size is not None and arr.size != size:
        raise DimensionError(f"{name} has length {arr.size}, expected {size}")
    return arr
