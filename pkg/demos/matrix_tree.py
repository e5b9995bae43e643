from fractions import Fraction

import numpy as np

from crnbal import build_matrices, parse_network
from crnbal.graphkit import connected_components, spanning_trees_toward
from crnbal.kirchhoff import rho_by_cofactor, rho_by_trees

# A reversible triangle. Rates are exact rationals, so every number below is exact.
net = parse_network("""
C1 <-> C2 ; kf = 1, kr = 4
C2 <-> C3 ; kf = 2, kr = 5
C3 <-> C1 ; kf = 3, kr = 6
""")
mats = build_matrices(net)
print("L =")
print(mats.L.astype(str))

# Columns of the Laplacian sum to zero
print("column sums:", mats.L.sum(axis=0).astype(str))

# rho from cofactors of L
kv = rho_by_cofactor(mats.L)
print("rho (cofactors):", *kv.rho)
print("L rho =", *mats.L.dot(np.array(kv.rho, dtype=object)))

# The same vector by listing every spanning tree directed toward each vertex
(comp,) = connected_components(mats.D)
for v in comp.vertices:
    trees = spanning_trees_toward(comp, v, net.rates)
    parts = " + ".join(str(t.weight) for t in trees)
    print(f"trees toward {net.complex_label(v)}: {parts} = {sum(t.weight for t in trees)}")
print("rho (trees):", *rho_by_trees(mats.L).rho)

# Scaling every rate by lam multiplies rho by lam^(n-1)
lam = Fraction(3, 2)
scaled = net.with_rates([k * lam for k in net.rates])
print("scaled rho / rho:", *[a / b for a, b in zip(rho_by_cofactor(build_matrices(scaled).L).rho, kv.rho)])

# Not strongly connected: rho vanishes on the vertex that cannot be reached back
edge = parse_network("A -> B ; k = 5/2")
print("A -> B:", *rho_by_cofactor(build_matrices(edge).L).rho)
