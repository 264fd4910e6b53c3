"""Brute-force witnesses for the certified routines.

Nothing here imports the certified code paths: these functions only read
``vertices`` off whatever simplex-like object they are handed, and use
enumeration, sampling and local descent. They estimate; they do not certify.
Each estimate carries its own error envelope so that tests can assert
``certified <= oracle + envelope``.

Randomness comes from PCG64 streams. ``OracleConfig.rng(*key)`` derives an
independent stream per key through ``SeedSequence`` spawn keys, so parallel or
reordered trials reproduce bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

DEFAULT_SEED = 20250917


@dataclass(frozen=True)
class OracleConfig:
    seed: int = DEFAULT_SEED
    samples: int = 10_000
    grid_resolution: int = 200

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def rng(self, *key: int) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=tuple(int(k) for k in key))
        return np.random.Generator(np.random.PCG64(seq))


class OracleEstimate(NamedTuple):
    value: float
    envelope: float


def _vertices_of(s) -> np.ndarray:
    return np.asarray(getattr(s, "vertices", s), dtype=float)


def sample_simplex_coords(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Uniform points of the standard n-simplex via normalised exponential spacings."""
    E = rng.exponential(size=(count, n + 1))
    return E / E.sum(axis=1, keepdims=True)


def sample_simplex(s, rng: np.random.Generator, count: int) -> np.ndarray:
    A = _vertices_of(s)
    return sample_simplex_coords(rng, A.shape[0] - 1, count) @ A


def sample_hull_ball(s, center, radius: float, rng: np.random.Generator,
                     count: int) -> np.ndarray:
    """Uniform samples of the open ball ``B(center, radius)`` within ``aff(s)``."""
    A = _vertices_of(s)
    n = A.shape[0] - 1
    Q, _ = np.linalg.qr((A[1:] - A[0]).T)
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = radius * rng.random(count) ** (1.0 / n)
    return np.asarray(center, dtype=float) + (g * rad[:, None]) @ Q.T


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]])
    bars = np.array(list(itertools.combinations(range(total + parts - 1), parts - 1)))
    edges = np.hstack([
        np.full((bars.shape[0], 1), -1), bars, np.full((bars.shape[0], 1), total + parts - 1)
    ])
    return np.diff(edges, axis=1) - 1


def margin_oracle(vectors, cfg: OracleConfig = OracleConfig()) -> OracleEstimate:
    """Estimate ``min ||sum lam_k v_k||_2`` over the unit l1 sphere.

    Exhaustive search over lattice points ``|lam| = parts / N`` with all sign
    patterns, then Nelder-Mead on the scale-invariant ratio
    ``||V^T lam|| / ||lam||_1`` from the best few lattice points. The value is
    attained, hence never below the true minimum; ``envelope`` bounds how far
    the lattice minimum can sit above it.
    """
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    k = V.shape[0]
    N = cfg.grid_resolution
    mags = _compositions(N, k) / N
    signs = np.array(list(itertools.product([1.0, -1.0], repeat=k - 1)))
    signs = np.hstack([np.ones((signs.shape[0], 1)), signs]) if k > 1 else np.ones((1, 1))
    best_vals, best_lams = [], []
    for sg in signs:
        lam = mags * sg
        vals = np.linalg.norm(lam @ V, axis=1)
        top = np.argsort(vals)[:3]
        best_vals.extend(vals[top])
        best_lams.extend(lam[top])
    best_vals = np.array(best_vals)
    order = np.argsort(best_vals)[:3]
    value = float(best_vals[order[0]])

    def ratio(lam):
        l1 = np.sum(np.abs(lam))
        return np.linalg.norm(lam @ V) / l1 if l1 > 0 else np.inf

    if k > 1:
        for i in order:
            res = minimize(ratio, best_lams[i], method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
            value = min(value, float(res.fun))
    envelope = float(np.max(np.linalg.norm(V, axis=1))) * 2.0 * k / N
    return OracleEstimate(value, envelope)


def _pairwise_descent(A: np.ndarray, x: np.ndarray, lam: np.ndarray,
                      sweeps: int = 200) -> np.ndarray:
    # minimise ||lam @ A - x||^2 over the simplex by moving mass between pairs
    k = A.shape[0]
    r = lam @ A - x
    for _ in range(sweeps):
        moved = 0.0
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                dvec = A[i] - A[j]
                dd = dvec @ dvec
                if dd == 0.0:
                    continue
                t = -(r @ dvec) / dd
                t = min(max(t, -lam[i]), lam[j])
                if t != 0.0:
                    lam[i] += t
                    lam[j] -= t
                    r = r + t * dvec
                    moved = max(moved, abs(t))
        if moved < 1e-15:
            break
    return lam


def distance_oracle(x, s, cfg: OracleConfig = OracleConfig()) -> OracleEstimate:
    """Estimate the l2 distance from ``x`` to the simplex ``s``.

    Best of ``cfg.samples`` uniform simplex points, polished by pairwise
    coordinate descent. The value is attained by a point of ``s`` and so is an
    upper bound; ``envelope`` is ``sqrt`` of the Frank-Wolfe gap of the squared
    distance at the returned point, which bounds the excess.
    """
    A = _vertices_of(s)
    x = np.asarray(x, dtype=float)
    n = A.shape[0] - 1
    rng = cfg.rng(1)
    L = sample_simplex_coords(rng, n, cfg.samples)
    L = np.vstack([L, np.eye(n + 1)])
    d = np.linalg.norm(L @ A - x, axis=1)
    lam = _pairwise_descent(A, x, L[int(np.argmin(d))].copy())
    lam = np.clip(lam, 0.0, None)
    lam /= lam.sum()
    r = lam @ A - x
    grad = 2.0 * (A @ r)
    gap = max(0.0, float(grad @ lam - np.min(grad)))
    return OracleEstimate(float(np.linalg.norm(r)), math.sqrt(gap))


def coverage_check(net, s, cfg: OracleConfig = OracleConfig()) -> tuple[bool, float]:
    """Sample ``cfg.samples`` uniform points of ``s``; report the worst gap to the net."""
    pts = np.asarray(net.points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("a net must contain at least one point")
    samples = sample_simplex(s, cfg.rng(2), cfg.samples)
    gaps, _ = cKDTree(pts).query(samples, k=1)
    worst = float(np.max(gaps))
    return worst <= net.epsilon, worst


__all__ = [
    "DEFAULT_SEED",
    "OracleConfig",
    "OracleEstimate",
    "coverage_check",
    "distance_oracle",
    "margin_oracle",
    "sample_hull_ball",
    "sample_simplex",
    "sample_simplex_coords",
]
