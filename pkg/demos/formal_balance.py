import numpy as np

from crnbal import (
    balanced_laplacian,
    build_matrices,
    conductance_decomposition,
    is_complex_balanced,
    is_detailed_balanced,
    is_formally_balanced,
    kirchhoff_vector,
    parse_network,
)
from crnbal.errors import NotFormallyBalancedError

TEMPLATE = """
C1 <-> C2 ; kf = {}, kr = {}
C2 <-> C3 ; kf = {}, kr = {}
C3 <-> C1 ; kf = {}, kr = {}
"""

# The cycle condition: product of forward rates equals product of reverse rates
balanced = parse_network(TEMPLATE.format(1, 6, 2, 1, 3, 1))
unbalanced = parse_network(TEMPLATE.format(1, 1, 2, 1, 3, 1))

for name, net in (("balanced", balanced), ("unbalanced", unbalanced)):
    f = is_formally_balanced(net)
    print(name, "formal:", f.holds, "complex:", is_complex_balanced(net).holds,
          "detailed:", is_detailed_balanced(net).holds)

# With rho > 0, L diag(rho) has zero row and column sums.
# It is symmetric exactly when the network is formally balanced.
for net in (balanced, unbalanced):
    B = balanced_laplacian(build_matrices(net).L, kirchhoff_vector(net).rho)
    print(B.astype(str))
    print("symmetric:", bool(np.all(B == B.T)))

# Conductances give the symmetric factorization D_bar diag(kappa) D_bar^T
dec = conductance_decomposition(balanced)
print("rho =", *dec.rho, " kappa =", *dec.kappa)

try:
    conductance_decomposition(unbalanced)
except NotFormallyBalancedError as exc:
    w = exc.witness
    print("no conductances; cycle", w.sigma, "gives", w.lhs, "vs", w.rhs)

# Formal but not detailed: complexes that share species couple the pairs
net = parse_network("A <-> B ; kf = 1, kr = 2\nA + C <-> B + C ; kf = 1, kr = 3\n")
print("shared species: formal", is_formally_balanced(net).holds, "detailed", is_detailed_balanced(net).holds)
