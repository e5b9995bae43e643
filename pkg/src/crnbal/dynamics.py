"""Mass-action simulation, the Gibbs Lyapunov function and equilibrium location.

Floating point throughout: nothing here decides a verdict, it only checks
the verdicts of :mod:`crnbal.balance` against trajectories.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from crnbal import linalg
from crnbal.balance import equilibrium_set_membership, is_complex_balanced
from crnbal.errors import BoundaryApproachError, ConvergenceError
from crnbal.model import ReactionNetwork, build_matrices

CONSERVATION_RTOL = 1e-7


def _positive(x, what="x") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError(f"{what} must be strictly positive, got {x}")
    return x


class _Kinetics:
    """Float copies of Z, D, k and the substrate exponents, built once per network."""

    def __init__(self, net: ReactionNetwork):
        mats = build_matrices(net)
        self.Z = np.asarray(mats.Z, dtype=float)
        self.S = np.asarray(mats.S, dtype=float)
        self.k = np.array([float(k) for k in net.rates])
        self.substrate_exp = np.array([net.complexes[rx.substrate] for rx in net.reactions], dtype=float)
        self.conservation = np.array(
            linalg.left_nullspace_integer_basis(mats.S), dtype=float
        ).reshape(-1, net.m)

    def rates(self, x):
        return self.k * np.exp(self.substrate_exp @ np.log(x))

    def rates_log(self, u):
        return self.k * np.exp(self.substrate_exp @ u)


def rate_vector(net: ReactionNetwork, x) -> np.ndarray:
    """``v_j = k_j * prod_i x_i ** Z[i, substrate_j]``."""
    x = _positive(x)
    kin = _Kinetics(net)
    return kin.k * np.prod(x[np.newaxis, :] ** kin.substrate_exp, axis=1)


def species_rhs(net: ReactionNetwork, x) -> np.ndarray:
    """``Z D v(x)``."""
    return _Kinetics(net).S @ rate_vector(net, x)


def gibbs(x, x_ref) -> float:
    """``x^T Ln(x / x_ref) + (x_ref - x)^T 1``."""
    x = _positive(x)
    x_ref = _positive(x_ref, "x_ref")
    return float(np.sum(x * np.log(x / x_ref) + x_ref - x))


@dataclass(frozen=True)
class State:
    t: float
    x: tuple[float, ...]


@dataclass
class Trajectory:
    """Accepted integrator steps, ``t`` strictly increasing, ``x[0]`` the initial state.

    ``gibbs`` holds ``G(x(t), x_ref)`` per step when a reference was given.
    """

    t: np.ndarray
    x: np.ndarray
    species: tuple[str, ...]
    nfev: int = 0
    n_steps: int = 0
    boundary_proximity: float = math.inf
    conservation_drift: float = 0.0
    gibbs: Optional[np.ndarray] = None
    status: str = "ok"
    message: str = ""

    @property
    def states(self) -> list[State]:
        return [State(float(t), tuple(float(v) for v in x)) for t, x in zip(self.t, self.x)]

    @property
    def final(self) -> np.ndarray:
        return self.x[-1]

    def with_reference(self, x_ref) -> "Trajectory":
        self.gibbs = np.array([gibbs(x, x_ref) for x in self.x])
        return self


def simulate(
    net: ReactionNetwork,
    x0,
    t_end: float,
    rtol: float = 1e-8,
    atol: float = 1e-12,
    method: str = "DOP853",
    log_coordinates: bool = False,
    x_ref=None,
    max_step: float = math.inf,
) -> Trajectory:
    """Integrate ``x' = Z D v(x)`` from ``x0`` to ``t_end``.

    Uses an explicit embedded Runge-Kutta pair in linear coordinates; no
    projection is applied, so any step that reaches a non-positive
    concentration aborts the run. ``log_coordinates`` integrates
    ``d(Ln x)/dt`` instead, which keeps positivity automatically.

    Raises:
        BoundaryApproachError: a concentration hit zero or the integrator
            stalled; the partial trajectory is attached.
        ArithmeticError: a conservation law drifted beyond 1e-7 relative.
    """
    x0 = _positive(x0, "x0")
    if len(x0) != net.m:
        raise ValueError(f"x0 has length {len(x0)}, network has {net.m} species")
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    kin = _Kinetics(net)

    if log_coordinates:
        def rhs(_t, u):
            return (kin.S @ kin.rates_log(u)) / np.exp(u)

        y0 = np.log(x0)
        events = None
    else:
        def rhs(_t, x):
            if np.any(x <= 0):
                # keep the stage finite; the step is rejected by the event below
                x = np.maximum(x, np.finfo(float).tiny)
            return kin.S @ kin.rates(x)

        def hit_boundary(_t, x):
            return float(np.min(x))

        hit_boundary.terminal = True
        hit_boundary.direction = -1
        y0 = x0
        events = hit_boundary

    sol = solve_ivp(rhs, (0.0, float(t_end)), y0, method=method, rtol=rtol, atol=atol, events=events, max_step=max_step)
    ys = np.exp(sol.y.T) if log_coordinates else sol.y.T
    ts = sol.t
    positive = np.all(ys > 0, axis=1)
    keep = np.argmin(positive) if not positive.all() else len(ts)
    traj = Trajectory(
        t=ts[:keep].copy(),
        x=ys[:keep].copy(),
        species=net.species_names,
        nfev=int(sol.nfev),
        n_steps=max(len(ts) - 1, 0),
        boundary_proximity=float(np.min(ys)) if len(ys) else 0.0,
    )
    if x_ref is not None and len(traj.t):
        traj.with_reference(x_ref)

    touched = sol.status == 1 or keep < len(ts)
    if sol.status == -1 or touched:
        traj.status = "boundary"
        traj.message = sol.message if sol.status == -1 else "concentration reached zero"
        raise BoundaryApproachError(traj.message, traj, traj.boundary_proximity)

    if len(kin.conservation):
        W = kin.conservation
        ref = W @ x0
        scale = np.abs(W) @ x0
        drift = np.max(np.abs(traj.x @ W.T - ref) / scale)
        traj.conservation_drift = float(drift)
        if drift > CONSERVATION_RTOL:
            raise ArithmeticError(f"conservation law drifted by {drift:.3g} relative")
    return traj


def proposition1_form(balanced_L, gamma) -> float:
    """``gamma^T B Exp(gamma)`` for a balanced Laplacian ``B``.

    Evaluated as ``sum_i gamma_i sum_{j != i} B_ij (e^gamma_j - e^gamma_i)``,
    which equals the direct form because the rows of ``B`` sum to zero, and
    is exactly zero in floating point when ``gamma`` is constant on every
    connected component.
    """
    B = np.asarray(balanced_L, dtype=object)
    Bf = np.asarray(B, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    e = np.exp(gamma)
    diff = e[np.newaxis, :] - e[:, np.newaxis]
    off = Bf.copy()
    np.fill_diagonal(off, 0.0)
    return float(gamma @ np.sum(off * diff, axis=1))


def find_compatible_equilibrium(
    net: ReactionNetwork,
    x0,
    x_star=None,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> np.ndarray:
    """The unique positive equilibrium in ``x0 + im S``.

    Minimizes ``G(x, x_star)`` over ``x = x0 + B s`` (``B`` an orthonormal
    basis of ``im S``) by damped Newton; the minimizer satisfies
    ``S^T Ln x = S^T Ln x_star``.

    Args:
        x_star: any positive equilibrium; taken from the complex-balance
            certificate when omitted.

    Raises:
        ValueError: the network is not complex-balanced.
        ConvergenceError: no convergence within ``max_iter`` iterations.
    """
    x0 = _positive(x0, "x0")
    mats = build_matrices(net)
    if x_star is None:
        verdict = is_complex_balanced(net)
        if not verdict.holds:
            raise ValueError("network is not complex-balanced; no equilibrium certificate")
        x_star = verdict.certificate.x
    x_star = _positive(x_star, "x_star")
    S = np.asarray(mats.S, dtype=float)
    cols = linalg.column_space_basis(mats.S)
    if not cols:
        return x0.copy()
    B, _ = np.linalg.qr(np.array(cols, dtype=float).T)
    log_star = np.log(x_star)

    def objective(s):
        x = x0 + B @ s
        if np.any(x <= 0):
            return math.inf
        return float(np.sum(x * (np.log(x) - log_star) - x))

    s = np.zeros(B.shape[1])
    x = x0.copy()
    gnorm = math.inf
    for _ in range(max_iter):
        grad = B.T @ (np.log(x) - log_star)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol * (1.0 + float(np.linalg.norm(log_star))):
            break
        H = B.T @ (B / x[:, np.newaxis])
        step = -np.linalg.solve(H, grad)
        f0 = objective(s)
        t = 1.0
        while t > 1e-16:
            cand = s + t * step
            if objective(cand) <= f0 + 1e-4 * t * float(grad @ step):
                break
            t *= 0.5
        else:
            break
        s = s + t * step
        x = x0 + B @ s
    else:
        raise ConvergenceError("damped Newton did not converge", x, gnorm)

    if not equilibrium_set_membership(x, x_star, S):
        raise ConvergenceError("Newton iterate is not an equilibrium", x, gnorm)
    return x


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of checking one trajectory against the predicted equilibrium.

    ``status`` is ``"converged"``, ``"not_converged"`` or ``"inconclusive"``;
    the last is used when the run came within ``1e-6 * min(x0)`` of the
    boundary, where convergence is not guaranteed without persistence.
    """

    status: str
    x_final: np.ndarray
    x_equilibrium: np.ndarray
    max_error: float
    gibbs_monotone: bool
    trajectory: Trajectory


def validate_convergence(
    net: ReactionNetwork,
    x0,
    t_end: float,
    atol: float = 1e-5,
    gibbs_slack: float = 1e-10,
    **sim_options,
) -> ConvergenceReport:
    """Simulate and compare the end state with :func:`find_compatible_equilibrium`.

    Raises:
        ValueError: the network is not complex-balanced.
    """
    x0 = _positive(x0, "x0")
    x_eq = find_compatible_equilibrium(net, x0)
    traj = simulate(net, x0, t_end, x_ref=x_eq, **sim_options)
    err = float(np.max(np.abs(traj.final - x_eq)))
    monotone = bool(np.all(np.diff(traj.gibbs) <= gibbs_slack))
    if traj.boundary_proximity <= 1e-6 * float(np.min(x0)):
        status = "inconclusive"
    else:
        status = "converged" if err <= atol else "not_converged"
    return ConvergenceReport(status, traj.final.copy(), x_eq, err, monotone, traj)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """CSV with header ``t,x_1,...,x_m,G``, every number as ``%.17g``.

    ``G`` is ``nan`` when the trajectory carries no Gibbs reference.
    """
    m = traj.x.shape[1] if traj.x.ndim == 2 else 0
    g = traj.gibbs if traj.gibbs is not None else np.full(len(traj.t), math.nan)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"x_{i + 1}" for i in range(m)] + ["G"])
        for t, x, gv in zip(traj.t, traj.x, g):
            w.writerow(["%.17g" % t] + ["%.17g" % v for v in x] + ["%.17g" % gv])


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`write_trajectory_csv`: ``(t, x, G)`` arrays."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:-1], data[:, -1]
