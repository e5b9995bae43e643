"""Graph algorithms on the graph of complexes, driven by its incidence matrix.

Vertices are complex indices, edges are reaction (column) indices of ``D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

import numpy as np

from crnbal.errors import OracleUnavailableError, StructuralError

DEFAULT_TREE_CAP = 8


@dataclass(frozen=True)
class Component:
    """One weakly connected component: its vertices and its ``(edge, tail, head)`` triples."""

    index: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class ComponentPartition:
    n_components: int
    assignment: tuple[int, ...]
    components: tuple[Component, ...]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return self.n_components


def incidence_edges(D) -> list[tuple[int, int]]:
    """``(tail, head)`` per column of an incidence matrix; validates the column structure."""
    D = np.asarray(D)
    edges = []
    for j in range(D.shape[1]):
        col = D[:, j]
        tails = np.flatnonzero(col == -1)
        heads = np.flatnonzero(col == 1)
        if len(tails) != 1 or len(heads) != 1 or np.count_nonzero(col) != 2:
            raise StructuralError(f"column {j} is not an incidence column")
        edges.append((int(tails[0]), int(heads[0])))
    return edges


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def connected_components(D) -> ComponentPartition:
    """Weak-connectivity partition, components numbered by their smallest vertex."""
    D = np.asarray(D)
    c = D.shape[0]
    edges = incidence_edges(D)
    uf = _UnionFind(c)
    for t, h in edges:
        uf.union(t, h)
    roots = sorted({uf.find(v) for v in range(c)})
    comp_of_root = {r: i for i, r in enumerate(roots)}
    assignment = tuple(comp_of_root[uf.find(v)] for v in range(c))
    comps = []
    for i in range(len(roots)):
        verts = tuple(v for v in range(c) if assignment[v] == i)
        es = tuple((j, t, h) for j, (t, h) in enumerate(edges) if assignment[t] == i)
        comps.append(Component(i, verts, es))
    return ComponentPartition(len(roots), assignment, tuple(comps))


def strongly_connected_components(vertices: Sequence[int], edges) -> list[list[int]]:
    """Tarjan's algorithm, iterative. ``edges`` are ``(edge, tail, head)`` triples."""
    succ = {v: [] for v in vertices}
    for _, t, h in edges:
        succ[t].append(h)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = 0
    for start in vertices:
        if start in index:
            continue
        work = [(start, iter(succ[start]))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is None:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    scc = []
                    while True:
                        x = stack.pop()
                        on_stack.discard(x)
                        scc.append(x)
                        if x == v:
                            break
                    sccs.append(sorted(scc))
            elif w not in index:
                index[w] = low[w] = counter
                counter += 1
                stack.append(w)
                on_stack.add(w)
                work.append((w, iter(succ[w])))
            elif w in on_stack:
                low[v] = min(low[v], index[w])
    return sccs


def is_strongly_connected(component: Component) -> bool:
    return len(strongly_connected_components(component.vertices, component.edges)) == 1


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree directed toward ``root``: every other vertex has one outgoing tree edge."""

    edges: tuple[int, ...]
    root: int
    weight: Fraction | float


def spanning_trees_toward(
    component: Component,
    root: int,
    weights: Sequence | None = None,
    cap: int = DEFAULT_TREE_CAP,
) -> list[SpanningTree]:
    """Enumerate every spanning tree of ``component`` directed toward ``root``.

    Brute force: each non-root vertex picks one of its outgoing edges, and
    the choice is kept when following the picks from every vertex reaches
    ``root``. Test oracle only; refuses components above ``cap`` vertices.

    Args:
        weights: per-edge weight indexed by global edge index (defaults to 1).
    """
    if component.size > cap:
        raise OracleUnavailableError(
            f"component with {component.size} vertices exceeds the tree-enumeration cap {cap}"
        )
    if root not in component.vertices:
        raise ValueError(f"root {root} is not a vertex of the component")
    out = {v: [] for v in component.vertices}
    for j, t, h in component.edges:
        out[t].append((j, h))
    others = [v for v in component.vertices if v != root]
    trees = []
    for picks in cartesian(*(out[v] for v in others)):
        nxt = {v: h for v, (_, h) in zip(others, picks)}
        if all(_reaches(v, root, nxt) for v in others):
            es = tuple(sorted(j for j, _ in picks))
            w = math.prod((weights[j] for j in es), start=Fraction(1)) if weights is not None else Fraction(1)
            trees.append(SpanningTree(es, root, w))
    return trees


def _reaches(v, root, nxt) -> bool:
    seen = set()
    while v != root:
        if v in seen:
            return False
        seen.add(v)
        v = nxt[v]
    return True


def spanning_forest(D) -> tuple[list[int], dict[int, list[tuple[int, int, int]]]]:
    """BFS spanning forest of the underlying undirected graph.

    Returns the tree edge indices and an adjacency map ``v -> [(edge, neighbour, sign)]``
    restricted to tree edges, where ``sign`` is +1 when the edge points from ``v``
    to ``neighbour``.
    """
    D = np.asarray(D)
    edges = incidence_edges(D)
    c = D.shape[0]
    adj = {v: [] for v in range(c)}
    for j, (t, h) in enumerate(edges):
        adj[t].append((j, h, 1))
        adj[h].append((j, t, -1))
    seen = set()
    tree_edges = []
    tree_adj = {v: [] for v in range(c)}
    for start in range(c):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            for j, w, sign in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
                    tree_edges.append(j)
                    tree_adj[v].append((j, w, sign))
                    tree_adj[w].append((j, v, -sign))
    return tree_edges, tree_adj


def _tree_path(tree_adj, src, dst) -> list[tuple[int, int]]:
    """Signed edges along the unique forest path ``src -> dst``."""
    prev = {src: None}
    queue = [src]
    while queue:
        v = queue.pop(0)
        if v == dst:
            break
        for j, w, sign in tree_adj[v]:
            if w not in prev:
                prev[w] = (v, j, sign)
                queue.append(w)
    path = []
    v = dst
    while prev[v] is not None:
        u, j, sign = prev[v]
        path.append((j, sign))
        v = u
    return path[::-1]


def cycle_space_basis(D_bar) -> list[tuple[int, ...]]:
    """Fundamental cycles of a spanning forest, as primitive integer vectors in ``ker D_bar``.

    Each vector is +-1 on the edges of one cycle, oriented so that its first
    nonzero entry is positive. The basis has ``r - c + l`` elements.
    """
    D_bar = np.asarray(D_bar)
    edges = incidence_edges(D_bar)
    r = D_bar.shape[1]
    tree_edges, tree_adj = spanning_forest(D_bar)
    in_tree = set(tree_edges)
    basis = []
    for j, (t, h) in enumerate(edges):
        if j in in_tree:
            continue
        vec = [0] * r
        vec[j] = 1
        # close the cycle by walking the forest from the head back to the tail
        for e, sign in _tree_path(tree_adj, h, t):
            vec[e] += sign
        first = next(x for x in vec if x != 0)
        if first < 0:
            vec = [-x for x in vec]
        basis.append(tuple(vec))
    return basis
