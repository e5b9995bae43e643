"""Reaction networks and the matrices Z, D, K, S, L of their mass-action dynamics.

A network is a list of species, a list of complexes (non-negative integer
composition vectors over the species) and a list of reactions, each an edge
from a substrate complex to a product complex with a positive rate constant.
The dynamics read ``x' = Z D K Exp(Z^T Ln x)``; ``L = -D K`` is the weighted
Laplacian of the graph of complexes.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational, Real
from typing import Sequence

import numpy as np

from crnbal.errors import NotReversibleError, StructuralError

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

SPECIES_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Species:
    name: str
    index: int


@dataclass(frozen=True)
class Reaction:
    """Directed edge ``substrate -> product`` of the graph of complexes."""

    substrate: int
    product: int
    rate_constant: Fraction | float


def _coerce_rate(k, mode: str):
    if isinstance(k, bool) or not isinstance(k, (Real, np.integer, np.floating)):
        raise StructuralError(f"rate constant must be a number, got {k!r}")
    if mode == EXACT:
        if isinstance(k, np.integer):
            k = int(k)
        if not isinstance(k, Rational):
            raise StructuralError(
                f"exact mode requires rational rate constants, got {k!r}; "
                "pass a Fraction or use arithmetic_mode='float'"
            )
        k = Fraction(k)
    else:
        k = float(k)
        if not math.isfinite(k):
            raise StructuralError(f"rate constant must be finite, got {k}")
    if not k > 0:
        raise StructuralError(f"rate constant must be positive, got {k}")
    return k


@dataclass(frozen=True)
class ReactionNetwork:
    """Immutable mass-action reaction network.

    Complexes are stored as tuples of non-negative ints of length ``m``; they
    must be pairwise distinct and nonzero. Rate constants are Fractions in
    exact mode and floats in float mode (coerced on construction).
    """

    species: tuple[Species, ...]
    complexes: tuple[tuple[int, ...], ...]
    reactions: tuple[Reaction, ...]
    arithmetic_mode: str = EXACT

    def __post_init__(self):
        if self.arithmetic_mode not in MODES:
            raise StructuralError(f"unknown arithmetic mode {self.arithmetic_mode!r}")
        species = tuple(self.species)
        complexes = tuple(tuple(int(a) for a in cx) for cx in self.complexes)
        if not species:
            raise StructuralError("a network needs at least one species")
        if not complexes:
            raise StructuralError("a network needs at least one complex")
        if not self.reactions:
            raise StructuralError("a network needs at least one reaction")

        names = set()
        for i, sp in enumerate(species):
            if sp.index != i:
                raise StructuralError(f"species {sp.name!r} has index {sp.index}, expected {i}")
            if not SPECIES_NAME.match(sp.name):
                raise StructuralError(f"invalid species name {sp.name!r}")
            if sp.name in names:
                raise StructuralError(f"duplicate species name {sp.name!r}")
            names.add(sp.name)

        m = len(species)
        seen = {}
        for j, cx in enumerate(complexes):
            if len(cx) != m:
                raise StructuralError(f"complex {j} has length {len(cx)}, expected {m}")
            if any(a < 0 for a in cx):
                raise StructuralError(f"complex {j} has a negative coefficient")
            if not any(cx):
                raise StructuralError(f"complex {j} is the zero complex, which is not supported")
            if cx in seen:
                raise StructuralError(f"complexes {seen[cx]} and {j} are identical")
            seen[cx] = j

        c = len(complexes)
        reactions = []
        for j, rx in enumerate(self.reactions):
            s, p = int(rx.substrate), int(rx.product)
            if not (0 <= s < c and 0 <= p < c):
                raise StructuralError(f"reaction {j} references a complex outside 0..{c - 1}")
            if s == p:
                raise StructuralError(f"reaction {j} has identical substrate and product")
            reactions.append(Reaction(s, p, _coerce_rate(rx.rate_constant, self.arithmetic_mode)))

        object.__setattr__(self, "species", species)
        object.__setattr__(self, "complexes", complexes)
        object.__setattr__(self, "reactions", tuple(reactions))

    @classmethod
    def from_reactions(cls, species_names, complexes, reactions, arithmetic_mode=EXACT):
        """Build from species names, complex vectors and ``(substrate, product, k)`` triples."""
        return cls(
            species=tuple(Species(n, i) for i, n in enumerate(species_names)),
            complexes=tuple(tuple(cx) for cx in complexes),
            reactions=tuple(Reaction(s, p, k) for s, p, k in reactions),
            arithmetic_mode=arithmetic_mode,
        )

    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def c(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @property
    def species_names(self) -> tuple[str, ...]:
        return tuple(sp.name for sp in self.species)

    @property
    def rates(self) -> tuple:
        return tuple(rx.rate_constant for rx in self.reactions)

    @property
    def exact(self) -> bool:
        return self.arithmetic_mode == EXACT

    def complex_label(self, j: int) -> str:
        terms = []
        for sp, a in zip(self.species, self.complexes[j]):
            if a == 1:
                terms.append(sp.name)
            elif a > 1:
                terms.append(f"{a} {sp.name}")
        return " + ".join(terms)

    def with_rates(self, rates: Sequence) -> "ReactionNetwork":
        """Same graph and complexes, new rate constants (in reaction order)."""
        if len(rates) != self.r:
            raise StructuralError(f"expected {self.r} rate constants, got {len(rates)}")
        return ReactionNetwork(
            self.species,
            self.complexes,
            tuple(Reaction(rx.substrate, rx.product, k) for rx, k in zip(self.reactions, rates)),
            self.arithmetic_mode,
        )

    def as_float(self) -> "ReactionNetwork":
        return ReactionNetwork(self.species, self.complexes, self.reactions, FLOAT)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MatrixBundle:
    """Z (m x c), D (c x r), K (r x c), S = Z D (m x r) and L = -D K (c x c).

    Z, D, S are int64 arrays. K and L are object arrays of Fractions in exact
    mode and float arrays in float mode. All arrays are read-only.
    """

    Z: np.ndarray
    D: np.ndarray
    K: np.ndarray
    S: np.ndarray
    L: np.ndarray


def build_matrices(net: ReactionNetwork) -> MatrixBundle:
    m, c, r = net.m, net.c, net.r
    Z = np.array(net.complexes, dtype=np.int64).T.reshape(m, c)
    D = np.zeros((c, r), dtype=np.int64)
    if net.exact:
        K = np.full((r, c), Fraction(0), dtype=object)
    else:
        K = np.zeros((r, c), dtype=float)
    for j, rx in enumerate(net.reactions):
        D[rx.substrate, j] = -1
        D[rx.product, j] = 1
        K[j, rx.substrate] = rx.rate_constant
    S = Z @ D
    if net.exact:
        L = -(D.astype(object).dot(K))
        L = np.vectorize(Fraction, otypes=[object])(L)
    else:
        L = -(D.astype(float) @ K)
    return MatrixBundle(_frozen(Z), _frozen(D), _frozen(K), _frozen(S), _frozen(L))


@dataclass(frozen=True)
class ReversibleStructure:
    """Pairing of a reversible network into forward/reverse reactions.

    ``pairs[a] = (forward, reverse)`` reaction indices; the forward reaction of
    each pair is the one appearing first in input order, and pairs are ordered
    by their forward index. ``D_bar`` is the c x r_bar incidence matrix of the
    forward orientation, ``S_bar = Z D_bar`` and ``K_eq[a] = k_forward / k_reverse``.
    """

    pairs: tuple[tuple[int, int], ...]
    D_bar: np.ndarray
    S_bar: np.ndarray
    k_forward: tuple
    k_reverse: tuple
    K_eq: tuple = field(default=())

    @property
    def r_bar(self) -> int:
        return len(self.pairs)

    def edge(self, a: int) -> tuple[int, int]:
        """(tail, head) complexes of the a-th undirected edge in the chosen orientation."""
        tail = int(np.flatnonzero(self.D_bar[:, a] == -1)[0])
        head = int(np.flatnonzero(self.D_bar[:, a] == 1)[0])
        return tail, head

    def reordered_reactions(self, net: ReactionNetwork) -> tuple[Reaction, ...]:
        """Reactions in ``[forward..., reverse...]`` order, so that ``D = [D_bar, -D_bar]``."""
        return tuple(net.reactions[f] for f, _ in self.pairs) + tuple(
            net.reactions[b] for _, b in self.pairs
        )


def reversible_structure(net: ReactionNetwork) -> ReversibleStructure:
    """Pair every reaction with a distinct reverse partner.

    Raises:
        NotReversibleError: some reaction has no unused reverse partner.
    """
    pending: dict[tuple[int, int], deque] = defaultdict(deque)
    pairs = []
    for j, rx in enumerate(net.reactions):
        back = pending.get((rx.product, rx.substrate))
        if back:
            pairs.append((back.popleft(), j))
        else:
            pending[(rx.substrate, rx.product)].append(j)
    unpaired = sorted(j for q in pending.values() for j in q)
    if unpaired:
        raise NotReversibleError(unpaired)
    pairs.sort()

    D_bar = np.zeros((net.c, len(pairs)), dtype=np.int64)
    for a, (f, _) in enumerate(pairs):
        D_bar[net.reactions[f].substrate, a] = -1
        D_bar[net.reactions[f].product, a] = 1
    Z = np.array(net.complexes, dtype=np.int64).T.reshape(net.m, net.c)
    kf = tuple(net.reactions[f].rate_constant for f, _ in pairs)
    kr = tuple(net.reactions[b].rate_constant for _, b in pairs)
    K_eq = tuple(a / b for a, b in zip(kf, kr))
    return ReversibleStructure(
        pairs=tuple(pairs),
        D_bar=_frozen(D_bar),
        S_bar=_frozen(Z @ D_bar),
        k_forward=kf,
        k_reverse=kr,
        K_eq=K_eq,
    )


def is_reversible(net: ReactionNetwork) -> bool:
    try:
        reversible_structure(net)
    except NotReversibleError:
        return False
    return True
