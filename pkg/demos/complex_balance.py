from fractions import Fraction

from crnbal import is_complex_balanced, network_deficiency, parse_network, verify_certificate

# Three complexes X1 + X2, X2 and 2 X1 + X2 on a directed cycle.
# The deficiency is one, so complex balance is a condition on the rates.
TEMPLATE = """
X1 + X2 -> X2 ; k = {}
X2 -> 2 X1 + X2 ; k = {}
2 X1 + X2 -> X1 + X2 ; k = {}
"""


def network(k1, k2, k3):
    return parse_network(TEMPLATE.format(k1, k2, k3))


print("deficiency:", network_deficiency(network(1, 1, 1)))

# On the surface k1^2 = k2 k3 the verdict holds and carries an equilibrium
v = is_complex_balanced(network(2, 4, 1))
print("k = (2, 4, 1):", v.holds, "x* =", v.certificate.x)
print("certificate verifies:", verify_certificate(network(2, 4, 1), v))

# Off the surface the verdict carries the kernel vector that fails
v = is_complex_balanced(network(2, 3, 1))
w = v.certificate
print("k = (2, 3, 1):", v.holds, "sigma =", w.sigma, "prod rho^sigma =", w.lhs)

# A sweep across the surface, all in exact arithmetic
for k1 in (Fraction(1), Fraction(3, 2), Fraction(2)):
    for k3 in (Fraction(1, 2), Fraction(1), Fraction(2)):
        k2 = k1 * k1 / k3
        print(k1, k2, k3, is_complex_balanced(network(k1, k2, k3)).holds,
              is_complex_balanced(network(k1, k2 + Fraction(1, 1000), k3)).holds)

# Zero deficiency: balanced for any rates, provided every component is strongly connected
net = parse_network("2 A <-> B ; kf = 7, kr = 1/3\nA + B <-> C ; kf = 2, kr = 9\n")
print("dimerization deficiency:", network_deficiency(net), "balanced:", is_complex_balanced(net).holds)
