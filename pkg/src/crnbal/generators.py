"""Random networks with controllable balancing properties.

Used by the test suite and the demo scripts. All rates are small positive
rationals so exact arithmetic stays cheap. Generators take a
``random.Random`` instance for reproducibility.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from crnbal.model import ReactionNetwork

SMALL_RATIONALS = tuple(sorted({Fraction(p, q) for p in range(1, 10) for q in range(1, 5)}))


def random_rate(rng: random.Random) -> Fraction:
    return rng.choice(SMALL_RATIONALS)


def species_names(m: int) -> list[str]:
    return [f"X{i + 1}" for i in range(m)]


def random_complexes(rng: random.Random, m: int, c: int, max_coef: int = 2, max_order: int = 3):
    """``c`` distinct nonzero composition vectors with total molecularity at most ``max_order``."""
    pool = set()
    attempts = 0
    while len(pool) < c:
        attempts += 1
        if attempts > 10000:
            raise ValueError(f"cannot draw {c} distinct complexes over {m} species")
        v = tuple(rng.randint(0, max_coef) for _ in range(m))
        if any(v) and sum(v) <= max_order:
            pool.add(v)
    out = sorted(pool)
    rng.shuffle(out)
    return out


def max_complexes(m: int, max_coef: int = 2, max_order: int = 3) -> int:
    from itertools import product

    return sum(1 for v in product(range(max_coef + 1), repeat=m) if any(v) and sum(v) <= max_order)


def random_network(
    rng: random.Random,
    m: int | None = None,
    sizes: list[int] | None = None,
    max_edges: int = 10,
    max_component: int = 6,
) -> ReactionNetwork:
    """Arbitrary (often not strongly connected) network of weakly connected components.

    Each component has at most ``max_component`` vertices and ``max_edges``
    reactions; parallel edges are allowed.
    """
    if sizes is None:
        sizes = [rng.randint(2, max_component) for _ in range(rng.randint(1, 2))]
    c = sum(sizes)
    if m is None:
        m = next(k for k in range(1, 8) if max_complexes(k) >= c)
        m = max(m, rng.randint(1, 4))
    complexes = random_complexes(rng, m, c)
    reactions = []
    offset = 0
    for n in sizes:
        verts = list(range(offset, offset + n))
        # random spanning tree with random orientations keeps the component connected
        for i in range(1, n):
            a, b = verts[i], verts[rng.randrange(i)]
            if rng.random() < 0.5:
                a, b = b, a
            reactions.append((a, b, random_rate(rng)))
        extra = rng.randint(0, max_edges - (n - 1))
        for _ in range(extra):
            a, b = rng.sample(verts, 2)
            reactions.append((a, b, random_rate(rng)))
        offset += n
    rng.shuffle(reactions)
    return ReactionNetwork.from_reactions(species_names(m), complexes, reactions)


def _undirected_graph(rng, sizes, extra_edges, allow_parallel):
    edges = []
    offset = 0
    for n in sizes:
        verts = list(range(offset, offset + n))
        present = set()
        for i in range(1, n):
            a, b = verts[i], verts[rng.randrange(i)]
            edges.append((a, b))
            present.add(frozenset((a, b)))
        for _ in range(rng.randint(0, extra_edges)):
            a, b = rng.sample(verts, 2) if n > 1 else (None, None)
            if a is None:
                break
            if not allow_parallel and frozenset((a, b)) in present:
                continue
            edges.append((a, b))
            present.add(frozenset((a, b)))
        offset += n
    return edges


def _monomial(x: list[Fraction], cx) -> Fraction:
    return math.prod((xi**a for xi, a in zip(x, cx)), start=Fraction(1))


REGIMES = ("detailed", "formal", "random")


def random_reversible_network(
    rng: random.Random,
    regime: str | None = None,
    m: int | None = None,
    sizes: list[int] | None = None,
    extra_edges: int = 3,
    allow_parallel: bool = False,
    identity_complexes: bool = False,
) -> ReactionNetwork:
    """Reversible network whose rates follow ``regime``.

    * ``"detailed"``: ``kf = kappa / x*^{y_tail}``, ``kr = kappa / x*^{y_head}`` for a
      rational point ``x*``, so the network is detailed balanced by construction;
    * ``"formal"``: the same with an arbitrary positive vertex potential instead of
      ``x*^{y}``, so formal balance holds and complex balance generally does not;
    * ``"random"``: independent rates.
    """
    regime = regime or rng.choice(REGIMES)
    if sizes is None:
        sizes = [rng.randint(2, 5) for _ in range(rng.randint(1, 2))]
    c = sum(sizes)
    if identity_complexes:
        m = c
        complexes = [tuple(int(i == j) for i in range(c)) for j in range(c)]
    else:
        if m is None:
            m = next(k for k in range(1, 8) if max_complexes(k) >= c)
            m = max(m, rng.randint(1, 4))
        complexes = random_complexes(rng, m, c)
    edges = _undirected_graph(rng, sizes, extra_edges, allow_parallel)

    if regime == "detailed":
        x_star = [rng.choice((Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3, 2), Fraction(3))) for _ in range(m)]
        potential = [_monomial(x_star, cx) for cx in complexes]
    elif regime == "formal":
        potential = [random_rate(rng) for _ in range(c)]
    elif regime == "random":
        potential = None
    else:
        raise ValueError(f"unknown regime {regime!r}")

    reactions = []
    for a, b in edges:
        if potential is None:
            kf, kr = random_rate(rng), random_rate(rng)
        else:
            kappa = random_rate(rng)
            kf, kr = kappa / potential[a], kappa / potential[b]
        reactions.append((a, b, kf))
        reactions.append((b, a, kr))
    return ReactionNetwork.from_reactions(species_names(m), complexes, reactions)


def random_complex_balanced_network(
    rng: random.Random,
    m: int | None = None,
    sizes: list[int] | None = None,
    n_cycles: int = 3,
) -> ReactionNetwork:
    """Complex-balanced (generally not reversible) network.

    Each component is a union of random directed cycles carrying positive
    fluxes ``f``, one of them Hamiltonian so the component is strongly
    connected; with a rational point ``x*`` the rates ``k_e = f_e / x*^{y_tail}``
    make ``x*`` a complex-balanced equilibrium.
    """
    if sizes is None:
        sizes = [rng.randint(2, 4) for _ in range(rng.randint(1, 2))]
    c = sum(sizes)
    if m is None:
        m = next(k for k in range(1, 8) if max_complexes(k) >= c)
        m = min(4, max(m, rng.randint(1, 4)))
    complexes = random_complexes(rng, m, c)
    x_star = [rng.choice((Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3, 2))) for _ in range(m)]
    psi = [_monomial(x_star, cx) for cx in complexes]

    flux: dict[tuple[int, int], Fraction] = {}
    offset = 0
    for n in sizes:
        verts = list(range(offset, offset + n))
        cycles = [rng.sample(verts, n)]
        for _ in range(rng.randint(0, n_cycles - 1)):
            cycles.append(rng.sample(verts, rng.randint(2, n)))
        for cyc in cycles:
            w = random_rate(rng)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                flux[(a, b)] = flux.get((a, b), Fraction(0)) + w
        offset += n
    reactions = [(a, b, f / psi[a]) for (a, b), f in flux.items()]
    rng.shuffle(reactions)
    return ReactionNetwork.from_reactions(species_names(m), complexes, reactions)


def scale_component_rates(net: ReactionNetwork, component_vertices, lam) -> ReactionNetwork:
    """Multiply the rate of every reaction inside one component by ``lam``."""
    verts = set(component_vertices)
    return net.with_rates([
        rx.rate_constant * lam if rx.substrate in verts else rx.rate_constant for rx in net.reactions
    ])
