"""
Moving the vertices
===================

An interior point stays interior when the vertices move a little within the
affine hull. The certificate says how little, and shows its working.
"""

import numpy as np

import simplexcert as sc

s = sc.regular_simplex(2)
c, lam = sc.barycentre(s)
cert = sc.vertex_perturbation_delta(s, c)
for name, value in cert.chain:
    print(f"{name:>18s} = {value:.6g}")

# %%
# Move every vertex by just under delta in a random direction and recompute
# the weights of c with respect to the moved vertices.
rng = np.random.default_rng(3)
worst = np.inf
for _ in range(2000):
    step = rng.standard_normal(s.vertices.shape)
    step *= (cert.delta * 0.999 / np.linalg.norm(step, axis=1))[:, None]
    gamma = sc.recoordinate(s, s.vertices + step, lam)
    worst = min(worst, gamma.min())
print("smallest new weight over 2000 moves:", worst)

# %%
# The radius is conservative. Far larger moves usually keep c interior too,
# but nothing is promised there.
step = rng.standard_normal(s.vertices.shape) * 0.2
gamma = sc.recoordinate(s, s.vertices + step, lam)
print("a move of about 0.2:", np.round(gamma, 4))

# %%
# Two ingredients on their own: the radius keeping a family of vectors
# independent, and the radius around the identity with a controlled inverse.
delta, margin = sc.linear_perturbation_delta(np.eye(3))
print(f"independence kept within {delta:.4f}, with margin at least {margin:.4f}")
for n in (2, 3, 5):
    print(f"n={n}: inverse within 0.1 of I while entries move < {sc.inversion_delta(n, 0.1):.5f}")
