"""
Barycentric coordinates and how far they move
=============================================

A triangle, a point off its hull, and the two continuity moduli that turn
"close in space" into "close in coordinates" and back.
"""

import numpy as np

import simplexcert as sc

# a right triangle in the plane; construction certifies independence
tri = sc.new_simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
print(tri)
print("margin c      =", tri.constants.margin_c)
print("forward bound =", tri.constants.lip_forward)

# %%
# Coordinates of a few points. The last one lies outside; its coordinates
# still sum to one but one of them is negative.
for x in ([1 / 3, 1 / 3], [0.2, 0.5], [1.0, 1.0]):
    lam, resid = tri.barycentric(x)
    verdict = sc.classify(tri, x).verdict.value
    print(f"x = {x}: lambda = {np.round(lam, 6)}, verdict = {verdict}")

# %%
# Off the hull: a segment in R^3 and a point above it. The coordinates are
# those of the orthogonal projection, and the residual is the height.
seg = sc.new_simplex(np.eye(3)[:2])
lam, resid = seg.barycentric([0.5, 0.5, 1.0])
print("segment coordinates", lam, "height above the line", resid)

# %%
# The forward modulus: points closer than delta have coordinates within eps
# in l1. Try it on random pairs.
rng = np.random.default_rng(0)
eps = 0.1
delta = sc.modulus_forward(tri.constants, eps)
worst = 0.0
for _ in range(5000):
    x = rng.uniform(-0.5, 1.5, 2)
    step = rng.standard_normal(2)
    y = x + step / np.linalg.norm(step) * delta * rng.random()
    worst = max(worst, np.sum(np.abs(tri.barycentric(x).lam - tri.barycentric(y).lam)))
print(f"eps = {eps}: delta = {delta:.5f}, largest coordinate change seen = {worst:.5f}")

# %%
# And in the other direction: coordinates within delta' keep points within eps.
print("inverse modulus at eps = 0.1:", sc.modulus_inverse(tri.constants, 0.1))

# %%
# A lower bound on the distance between two points, from their coordinates only.
lam, mu = np.array([0.6, 0.2, 0.2]), np.array([0.2, 0.6, 0.2])
true = np.linalg.norm(sc.evaluate(tri.vertices, lam) - sc.evaluate(tri.vertices, mu))
print("separation bound", sc.separation_lb(tri.constants, lam, mu), "<= true distance", true)
