"""
Finite nets of a simplex
========================

Every simplex is covered by finitely many eps-balls. The cone construction
builds the centres level by level; here we count them and check the cover.
"""

import simplexcert as sc
from simplexcert.oracle import OracleConfig, coverage_check

for n in (1, 2, 3):
    s = sc.standard_simplex(n)
    row = []
    for eps in (0.5, 0.25, 0.1):
        net = sc.epsilon_net(s, eps)
        ok, worst = coverage_check(net, s, OracleConfig(samples=20_000))
        row.append(f"eps={eps}: {len(net):6d} points, worst gap {worst:.3f} {'ok' if ok else 'FAIL'}")
    print(f"n={n}  " + " | ".join(row))

# %%
# Asking for too much raises with the size that would have been needed.
try:
    sc.epsilon_net(sc.standard_simplex(4), 0.01, cap=100_000)
except sc.ResourceError as exc:
    print(exc, "(required:", exc.required, ")")
