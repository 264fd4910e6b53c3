"""
Interior radii, facet distances and radial projection
=====================================================

Given a point with strictly positive coordinates, how large a ball around it
stays in the simplex, how far it is from each facet, and where the ray from a
vertex through it exits.
"""

import numpy as np

import simplexcert as sc
from simplexcert.oracle import OracleConfig, distance_oracle, sample_hull_ball

s = sc.regular_simplex(3)
b, lam = sc.barycentre(s)
print("regular 3-simplex, barycentre", np.round(b, 6))

# %%
# The interior radius is min(lambda) * c / 2. Sample the ball and look.
cert = sc.relint_certificate(s, b)
print(f"radius r = {cert.radius_r:.6f} from min coordinate {cert.min_coeff_m:.4f}")
pts = sample_hull_ball(s, b, cert.radius_r, OracleConfig().rng(1), 2000)
coords, _ = s.barycentric(pts)
print("smallest coordinate over 2000 ball samples:", coords.min())

# %%
# A vertex has no such ball.
try:
    sc.relint_certificate(s, s.vertices[0])
except sc.NoCertificateError as exc:
    print("vertex:", exc)

# %%
# Distance to each facet, against a brute-force estimate.
x_lam = np.array([0.1, 0.2, 0.3, 0.4])
x = sc.evaluate(s.vertices, x_lam)
for nu in range(4):
    bound = sc.face_distance_lb(s, x_lam, nu)
    est = distance_oracle(x, sc.opposite_face(s, nu))
    print(f"facet {nu}: certified >= {bound:.6f}, sampled {est.value:.6f}")

# %%
# The ray from vertex 3 through x meets the opposite facet at b; the radius
# delta keeps that exit point within r of b for every nearby x.
proj = sc.face_projection(s, x_lam, 3)
print("exit point", np.round(proj.point, 6), "with facet weights", np.round(proj.coeffs, 6))
for r in (0.5, 0.1, 0.01):
    print(f"r = {r}: stability radius {sc.projection_stability(s, x_lam, 3, r):.3e}")
