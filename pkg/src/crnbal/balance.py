"""Complex, formal and detailed balancing verdicts with checkable certificates.

Every membership condition is tested multiplicatively over an integer kernel
basis, so in exact mode the verdicts involve no logarithms:

* complex balance: every component strongly connected and
  ``prod(rho_i ** sigma_i) == 1`` for each ``sigma`` in ``ker Z ∩ im D``;
* formal balance: ``prod(kf ** sigma) == prod(kr ** sigma)`` over cycles
  ``sigma`` of the reversible graph (``ker D_bar``);
* detailed balance: the same identity over ``ker S_bar``.

Float-mode networks compare the two sides with relative tolerance
``linalg.FLOAT_RTOL`` instead of exact equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from crnbal import linalg
from crnbal.errors import NotFormallyBalancedError
from crnbal.graphkit import connected_components, cycle_space_basis, is_strongly_connected
from crnbal.kirchhoff import KirchhoffVector, rho_by_cofactor
from crnbal.model import MatrixBundle, ReactionNetwork, ReversibleStructure, build_matrices, reversible_structure

COMPLEX = "complex"
FORMAL = "formal"
DETAILED = "detailed"

KER_Z_IM_D = "ker Z ∩ im D"
KER_D_BAR = "ker D_bar"
KER_S_BAR = "ker S_bar"
NOT_STRONGLY_CONNECTED = "not strongly connected"

CERTIFICATE_RTOL = 1e-9
SOUNDNESS_RTOL = 1e-8


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Complex-balanced equilibrium ``x = exp(mu)``.

    ``beta[j]`` is the log-offset of component ``j``:
    ``Z_j^T mu = Ln rho^j + beta[j]`` up to ``residual`` (max-norm).
    """

    mu: tuple[float, ...]
    beta: tuple[float, ...]
    x: tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class PotentialCertificate:
    """Formal balance witnessed by ``kf * rho[tail] == kr * rho[head]`` on every reversible pair."""

    rho: tuple


@dataclass(frozen=True)
class ViolationWitness:
    """Why a balance condition fails.

    For kernel contexts, ``sigma`` lies in the named kernel and ``lhs != rhs``:
    ``lhs = prod(rho**sigma)`` and ``rhs = 1`` for complex balance, or
    ``lhs = prod(kf**sigma)`` and ``rhs = prod(kr**sigma)`` for the
    Wegscheider-type checks. For ``NOT_STRONGLY_CONNECTED`` only
    ``component`` is set.
    """

    context: str
    sigma: tuple[int, ...] = ()
    lhs: Optional[Fraction | float] = None
    rhs: Optional[Fraction | float] = None
    component: Optional[int] = None


@dataclass(frozen=True)
class BalanceVerdict:
    kind: str
    holds: bool
    certificate: EquilibriumCertificate | PotentialCertificate | ViolationWitness | None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class ConductanceDecomposition:
    """``L diag(rho) = D_bar diag(kappa) D_bar^T`` with ``kappa[a] = kf[a] * rho[tail(a)]``."""

    kappa: tuple
    rho: tuple
    D_bar: np.ndarray


def _power_product(values: Sequence, sigma: Sequence[int]):
    out = Fraction(1) if all(isinstance(v, Fraction) for v in values) else 1.0
    for v, s in zip(values, sigma):
        if s:
            out *= v**s
    return out


def _log_power_sum(values, sigma) -> tuple[float, float]:
    terms = [s * math.log(v) for v, s in zip(values, sigma) if s]
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _same(lhs_vals, rhs_vals, sigma, exact: bool) -> bool:
    """``prod(lhs_vals**sigma) == prod(rhs_vals**sigma)``, compared in log space for floats."""
    if exact:
        return _power_product(lhs_vals, sigma) == _power_product(rhs_vals, sigma)
    a, sa = _log_power_sum(lhs_vals, sigma)
    b, sb = _log_power_sum(rhs_vals, sigma)
    return abs(a - b) <= linalg.FLOAT_RTOL * (1.0 + sa + sb)


def _close(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=linalg.FLOAT_RTOL, abs_tol=0.0)


# ---------------------------------------------------------------------------
# deficiency


def deficiency_basis(Z, D) -> list[tuple[int, ...]]:
    """Integer basis of ``ker Z ∩ im D`` via ``D ker(Z D)``."""
    return linalg.intersection_basis(Z, D)


def deficiency_basis_by_components(Z, D) -> list[tuple[int, ...]]:
    """Second, independent route to ``ker Z ∩ im D``.

    ``im D`` is the set of vectors summing to zero on every connected
    component, so the intersection is the kernel of ``Z`` stacked on the
    component indicator rows.
    """
    part = connected_components(D)
    Z = np.asarray(Z, dtype=np.int64)
    ind = np.zeros((part.n_components, Z.shape[1]), dtype=np.int64)
    for v, j in enumerate(part.assignment):
        ind[j, v] = 1
    return linalg.nullspace_integer_basis(np.vstack([Z, ind]))


def deficiency(Z, D) -> int:
    basis = deficiency_basis(Z, D)
    Z = np.asarray(Z)
    D = np.asarray(D)
    n_comp = connected_components(D).n_components
    expected = D.shape[0] - n_comp - linalg.rank(Z @ D)
    assert len(basis) == expected, (len(basis), expected)
    return len(basis)


def network_deficiency(net: ReactionNetwork) -> int:
    mats = build_matrices(net)
    return deficiency(mats.Z, mats.D)


# ---------------------------------------------------------------------------
# complex balance


def equilibrium_certificate(net: ReactionNetwork, kv: KirchhoffVector, mats: MatrixBundle | None = None) -> EquilibriumCertificate:
    """Solve ``Z_j^T mu - beta_j = Ln rho^j`` jointly in least squares.

    ``rho`` is rescaled to unit max per component before taking logs; the
    reported ``beta`` refers to the unscaled ``rho``.

    Raises:
        ArithmeticError: residual above ``CERTIFICATE_RTOL`` relative, which
            means the system is inconsistent, i.e. no complex-balanced
            equilibrium for these ``rho``.
    """
    mats = mats or build_matrices(net)
    part = kv.partition
    m, c, n_comp = net.m, net.c, part.n_components
    A = np.zeros((c, m + n_comp))
    b = np.zeros(c)
    log_scale = np.zeros(n_comp)
    for comp in part:
        log_scale[comp.index] = math.log(float(max(kv.rho[v] for v in comp.vertices)))
    Zf = np.asarray(mats.Z, dtype=float)
    for i in range(c):
        j = part.assignment[i]
        A[i, :m] = Zf[:, i]
        A[i, m + j] = -1.0
        b[i] = math.log(float(kv.rho[i])) - log_scale[j]
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ sol - b))) if c else 0.0
    if residual > CERTIFICATE_RTOL * max(1.0, float(np.max(np.abs(b)))):
        raise ArithmeticError(f"no consistent log-equilibrium; residual {residual:.3g}")
    mu = sol[:m]
    beta = sol[m:] - log_scale
    return EquilibriumCertificate(
        tuple(float(x) for x in mu),
        tuple(float(x) for x in beta),
        tuple(float(x) for x in np.exp(mu)),
        residual,
    )


def is_complex_balanced(net: ReactionNetwork, basis: Sequence[Sequence[int]] | None = None) -> BalanceVerdict:
    """Decide complex balance by the Matrix-Tree criterion.

    Args:
        basis: integer basis of ``ker Z ∩ im D`` to test against; computed
            with :func:`deficiency_basis` when omitted.
    """
    mats = build_matrices(net)
    part = connected_components(mats.D)
    kv = rho_by_cofactor(mats.L, part)
    for comp in part:
        strong = is_strongly_connected(comp)
        assert strong == kv.strictly_positive[comp.index], "rho > 0 must coincide with strong connectivity"
        if not strong:
            return BalanceVerdict(
                COMPLEX, False, ViolationWitness(NOT_STRONGLY_CONNECTED, component=comp.index)
            )
    if basis is None:
        basis = deficiency_basis(mats.Z, mats.D)
    ones = [1] * net.c
    for sigma in basis:
        sigma = tuple(int(s) for s in sigma)
        if not _same(kv.rho, ones, sigma, net.exact):
            val = _power_product(kv.rho, sigma)
            return BalanceVerdict(COMPLEX, False, ViolationWitness(KER_Z_IM_D, sigma, val, Fraction(1) if net.exact else 1.0))
    return BalanceVerdict(COMPLEX, True, equilibrium_certificate(net, kv, mats))


# ---------------------------------------------------------------------------
# formal and detailed balance


def _wegscheider(rs: ReversibleStructure, basis, context: str, kind: str, exact: bool) -> BalanceVerdict | None:
    for sigma in basis:
        sigma = tuple(int(s) for s in sigma)
        if not _same(rs.k_forward, rs.k_reverse, sigma, exact):
            lhs = _power_product(rs.k_forward, sigma)
            rhs = _power_product(rs.k_reverse, sigma)
            return BalanceVerdict(kind, False, ViolationWitness(context, sigma, lhs, rhs))
    return None


def has_parallel_pairs(rs: ReversibleStructure) -> bool:
    edges = [frozenset(rs.edge(a)) for a in range(rs.r_bar)]
    return len(set(edges)) < len(edges)


def formal_balance_statements(net: ReactionNetwork) -> tuple[bool, bool, bool]:
    """The three formal-balance statements, each evaluated on its own.

    Returns ``(symmetric, per_edge, weak_wegscheider)``:
    ``L diag(rho)`` symmetric; ``kf * rho[tail] == kr * rho[head]`` on every
    pair (the multiplicative form of ``Ln K_eq = D_bar^T Ln rho``); and the
    cycle conditions over ``ker D_bar``. The first one only sees summed rates,
    so it agrees with the other two on graphs without parallel reversible
    pairs.
    """
    rs = reversible_structure(net)
    mats = build_matrices(net)
    kv = rho_by_cofactor(mats.L, connected_components(mats.D))
    Lr = laplacian_times_rho(mats.L, kv.rho)
    if net.exact:
        symmetric = bool(np.all(Lr == Lr.T))
    else:
        Lf = np.asarray(Lr, dtype=float)
        symmetric = bool(np.allclose(Lf, Lf.T, rtol=linalg.FLOAT_RTOL, atol=linalg.FLOAT_RTOL * np.max(np.abs(Lf))))
    per_edge = True
    for a in range(rs.r_bar):
        t, h = rs.edge(a)
        if not _close(rs.k_forward[a] * kv.rho[t], rs.k_reverse[a] * kv.rho[h]):
            per_edge = False
            break
    weak = _wegscheider(rs, cycle_space_basis(rs.D_bar), KER_D_BAR, FORMAL, net.exact) is None
    return symmetric, per_edge, weak


def is_formally_balanced(net: ReactionNetwork, basis: Sequence[Sequence[int]] | None = None, cross_check: bool = __debug__) -> BalanceVerdict:
    """Weak Wegscheider conditions over the cycle space of the reversible graph.

    Raises:
        NotReversibleError: some reaction has no reverse partner.
    """
    rs = reversible_structure(net)
    if basis is None:
        basis = cycle_space_basis(rs.D_bar)
    failed = _wegscheider(rs, basis, KER_D_BAR, FORMAL, net.exact)
    holds = failed is None
    if cross_check:
        symmetric, per_edge, weak = formal_balance_statements(net)
        assert per_edge == weak == holds, (per_edge, weak, holds)
        if not has_parallel_pairs(rs):
            assert symmetric == holds, (symmetric, holds)
    if failed is not None:
        return failed
    mats = build_matrices(net)
    kv = rho_by_cofactor(mats.L, connected_components(mats.D))
    return BalanceVerdict(FORMAL, True, PotentialCertificate(kv.rho))


def is_detailed_balanced(net: ReactionNetwork, basis: Sequence[Sequence[int]] | None = None, cross_check: bool = __debug__) -> BalanceVerdict:
    """Generalized Wegscheider conditions over ``ker S_bar``.

    When the verdict holds, the certificate is a complex-balanced equilibrium,
    which for a detailed-balanced network balances every reaction pair.

    Raises:
        NotReversibleError: some reaction has no reverse partner.
    """
    rs = reversible_structure(net)
    if basis is None:
        basis = linalg.nullspace_integer_basis(rs.S_bar)
    failed = _wegscheider(rs, basis, KER_S_BAR, DETAILED, net.exact)
    complex_verdict = None
    if cross_check:
        complex_verdict = is_complex_balanced(net)
        formal = is_formally_balanced(net, cross_check=False)
        assert (failed is None) == (formal.holds and complex_verdict.holds)
    if failed is not None:
        return failed
    if complex_verdict is None:
        complex_verdict = is_complex_balanced(net)
    assert complex_verdict.holds, "detailed balance implies complex balance"
    return BalanceVerdict(DETAILED, True, complex_verdict.certificate)


# ---------------------------------------------------------------------------
# balanced Laplacian and conductances


def laplacian_times_rho(L, rho) -> np.ndarray:
    L = np.asarray(L, dtype=object)
    out = L * np.asarray(rho, dtype=object)[np.newaxis, :]
    return out


def balanced_laplacian(L, rho) -> np.ndarray:
    """``L diag(rho)``; its row and column sums vanish.

    Raises:
        ValueError: some ``rho`` entry is not strictly positive.
    """
    if any(not x > 0 for x in rho):
        raise ValueError("balanced Laplacian needs a strictly positive rho")
    B = laplacian_times_rho(L, rho)
    if all(isinstance(x, Fraction) for x in B.flat):
        assert all(s == 0 for s in B.sum(axis=0)) and all(s == 0 for s in B.sum(axis=1))
    else:
        Bf = np.asarray(B, dtype=float)
        scale = float(np.max(np.abs(Bf))) if Bf.size else 0.0
        assert np.all(np.abs(Bf.sum(axis=0)) <= 1e-9 * scale)
        assert np.all(np.abs(Bf.sum(axis=1)) <= 1e-9 * scale)
    return B


def conductance_decomposition(net: ReactionNetwork, rho: Sequence | None = None) -> ConductanceDecomposition:
    """Symmetric factorization ``L diag(rho) = D_bar diag(kappa) D_bar^T``.

    Raises:
        NotReversibleError: network not reversible.
        NotFormallyBalancedError: carries the violated cycle.
    """
    verdict = is_formally_balanced(net)
    if not verdict.holds:
        raise NotFormallyBalancedError(verdict.certificate)
    rs = reversible_structure(net)
    mats = build_matrices(net)
    if rho is None:
        rho = rho_by_cofactor(mats.L, connected_components(mats.D)).rho
    kappa = []
    for a in range(rs.r_bar):
        t, h = rs.edge(a)
        k_a = rs.k_forward[a] * rho[t]
        assert _close(k_a, rs.k_reverse[a] * rho[h]), f"conductance of pair {a} is not well defined"
        kappa.append(k_a)
    Db = np.asarray(rs.D_bar, dtype=object)
    rebuilt = Db.dot(np.diag(np.array(kappa, dtype=object))).dot(Db.T)
    Lr = laplacian_times_rho(mats.L, rho)
    if net.exact:
        assert np.all(rebuilt == Lr), "L diag(rho) must equal D_bar diag(kappa) D_bar^T"
    else:
        assert np.allclose(np.asarray(rebuilt, dtype=float), np.asarray(Lr, dtype=float), rtol=1e-9)
    return ConductanceDecomposition(tuple(kappa), tuple(rho), rs.D_bar)


# ---------------------------------------------------------------------------
# equilibria


def equilibrium_set_membership(x1, x2, S, rtol: float = 1e-9) -> bool:
    """Whether ``S^T Ln x1 == S^T Ln x2`` up to ``rtol * (1 + |S^T Ln x1|_inf)``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1 <= 0) or np.any(x2 <= 0):
        raise ValueError("concentrations must be strictly positive")
    St = np.asarray(S, dtype=float).T
    lhs = St @ np.log(x1)
    diff = St @ (np.log(x1) - np.log(x2))
    scale = float(np.max(np.abs(lhs))) if lhs.size else 0.0
    return bool(np.max(np.abs(diff), initial=0.0) <= rtol * (1.0 + scale))


def certificate_residual(net: ReactionNetwork, cert: EquilibriumCertificate) -> float:
    """``|L Exp(Z^T mu)|_inf / |L|_inf`` evaluated in floating point."""
    mats = build_matrices(net)
    Lf = np.asarray(mats.L, dtype=float)
    psi = np.exp(np.asarray(mats.Z, dtype=float).T @ np.asarray(cert.mu))
    norm_L = float(np.max(np.abs(Lf).sum(axis=1)))
    return float(np.max(np.abs(Lf @ psi))) / norm_L


def verify_certificate(net: ReactionNetwork, verdict: BalanceVerdict) -> bool:
    """Re-check whatever a verdict carries, independently of how it was produced.

    Equilibrium certificates are checked in floating point against
    ``SOUNDNESS_RTOL``; potential certificates and violation witnesses are
    re-verified exactly (or at ``FLOAT_RTOL`` in float mode).
    """
    cert = verdict.certificate
    mats = build_matrices(net)
    if isinstance(cert, EquilibriumCertificate):
        return certificate_residual(net, cert) <= SOUNDNESS_RTOL
    if isinstance(cert, PotentialCertificate):
        rs = reversible_structure(net)
        rho = cert.rho
        if not all(x > 0 for x in rho):
            return False
        return all(
            _close(rs.k_forward[a] * rho[rs.edge(a)[0]], rs.k_reverse[a] * rho[rs.edge(a)[1]])
            for a in range(rs.r_bar)
        )
    if isinstance(cert, ViolationWitness):
        if cert.context == NOT_STRONGLY_CONNECTED:
            part = connected_components(mats.D)
            return not is_strongly_connected(part.components[cert.component])
        sigma = np.array(cert.sigma, dtype=object)
        if cert.context == KER_Z_IM_D:
            in_kernel = all(x == 0 for x in np.asarray(mats.Z, dtype=object).dot(sigma))
            in_image = linalg.in_column_space(mats.D, cert.sigma).holds
            kv = rho_by_cofactor(mats.L, connected_components(mats.D))
            value = _power_product(kv.rho, cert.sigma)
            return in_kernel and in_image and _close(value, cert.lhs) and not _close(cert.lhs, cert.rhs)
        rs = reversible_structure(net)
        M = rs.D_bar if cert.context == KER_D_BAR else rs.S_bar
        in_kernel = all(x == 0 for x in np.asarray(M, dtype=object).dot(sigma))
        lhs = _power_product(rs.k_forward, cert.sigma)
        rhs = _power_product(rs.k_reverse, cert.sigma)
        return in_kernel and _close(lhs, cert.lhs) and _close(rhs, cert.rhs) and not _close(lhs, rhs)
    return False
