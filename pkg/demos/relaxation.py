import numpy as np

from crnbal import find_compatible_equilibrium, gibbs, is_complex_balanced, parse_network, simulate

net = parse_network("""
2 A <-> B ; kf = 1, kr = 1/2
A + B <-> C ; kf = 3, kr = 1
""")
print("complex balanced:", is_complex_balanced(net).holds)

# Total A content (A + 2B + 3C) is conserved, so each initial state
# picks its own equilibrium within x0 + im S
x0 = np.array([2.0, 0.1, 0.1])
x_eq = find_compatible_equilibrium(net, x0)
print("x** =", x_eq)

traj = simulate(net, x0, 50.0, x_ref=x_eq)
print("steps:", traj.n_steps, "conservation drift:", traj.conservation_drift)
print("final:", traj.final, "error:", np.max(np.abs(traj.final - x_eq)))

# The Gibbs function decreases along the whole trajectory
print("largest increase of G:", np.max(np.diff(traj.gibbs)))
for t, g in list(zip(traj.t, traj.gibbs))[:: max(1, len(traj.t) // 8)]:
    print(f"t = {t:8.3f}   G = {g:.3e}")

# Another starting point in the same class ends at the same x**
x1 = x0 + np.array([-0.4, 0.2, 0.0])
print("same class, same limit:", simulate(net, x1, 50.0).final, gibbs(x1, x_eq))
