"""Matrix-Tree vector rho of the Laplacian, one block per connected component.

``rho_i`` is the total weight of spanning trees of ``i``'s component directed
toward ``i``. The production route reads it off the cofactors of the
component's diagonal block of ``L``; :func:`rho_by_trees` enumerates the trees
directly and is only meant as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from crnbal import linalg
from crnbal.graphkit import (
    DEFAULT_TREE_CAP,
    ComponentPartition,
    connected_components,
    is_strongly_connected,
    spanning_trees_toward,
)


@dataclass(frozen=True)
class KirchhoffVector:
    """Unnormalized kernel vector of ``L``.

    ``rho`` is indexed by complex, so the block of component ``j`` is
    ``[rho[v] for v in partition.components[j].vertices]``; listing the blocks
    one after another gives the stacked form ``col(rho^1, ..., rho^l)``.
    """

    rho: tuple
    strictly_positive: tuple[bool, ...]
    partition: ComponentPartition

    def block(self, j: int) -> tuple:
        return tuple(self.rho[v] for v in self.partition.components[j].vertices)

    def stacked(self) -> tuple:
        return tuple(x for j in range(self.partition.n_components) for x in self.block(j))

    @property
    def all_positive(self) -> bool:
        return all(self.strictly_positive)


def _block(L, vertices) -> np.ndarray:
    L = np.asarray(L, dtype=object)
    idx = list(vertices)
    return L[np.ix_(idx, idx)]


def _cofactor_row(block: np.ndarray, row: int) -> list:
    n = block.shape[0]
    out = []
    for col in range(n):
        minor = np.delete(np.delete(block, row, axis=0), col, axis=1)
        sign = -1 if (row + col) % 2 else 1
        out.append(sign * linalg.determinant(minor))
    return out


def _clean(x):
    # cancellation in float determinants can leave -0.0 or tiny negatives
    if isinstance(x, float) and x < 0 and abs(x) < 1e-12:
        return 0.0
    return x


def rho_by_cofactor(L, partition: ComponentPartition | None = None, check_rows: bool = __debug__) -> KirchhoffVector:
    """Matrix-Tree vector from first-row cofactors of each component block of ``L``.

    With ``check_rows`` (on unless Python runs with ``-O``) the last-row
    cofactors are computed as well and must agree exactly; that agreement is
    what makes the choice of row irrelevant.
    """
    L = np.asarray(L, dtype=object)
    if partition is None:
        partition = connected_components(_incidence_from_laplacian(L))
    c = L.shape[0]
    rho = [None] * c
    positive = []
    for comp in partition:
        block = _block(L, comp.vertices)
        if comp.size == 1:
            vals = [Fraction(1) if linalg._is_exact(block[0, 0]) else 1.0]
        else:
            vals = _cofactor_row(block, 0)
            if check_rows and linalg._is_exact(block[0, 0]):
                last = _cofactor_row(block, comp.size - 1)
                assert last == vals, "cofactors of a Laplacian block must not depend on the row"
        vals = [_clean(v) for v in vals]
        for v, x in zip(comp.vertices, vals):
            rho[v] = x
        positive.append(all(x > 0 for x in vals))
    return KirchhoffVector(tuple(rho), tuple(positive), partition)


def rho_by_trees(L, partition: ComponentPartition | None = None, cap: int = DEFAULT_TREE_CAP) -> KirchhoffVector:
    """Matrix-Tree vector by enumerating spanning trees toward every vertex.

    Edge weights are recovered from the off-diagonal entries of ``L``
    (``-L[head, tail]`` is the total rate from tail to head; parallel edges are
    already summed there, which leaves the tree sums unchanged).
    """
    L = np.asarray(L, dtype=object)
    D, weights = _weighted_edges_from_laplacian(L)
    if partition is None:
        partition = connected_components(D)
    else:
        partition = _repartition(partition, D)
    c = L.shape[0]
    rho = [None] * c
    positive = []
    for comp in partition:
        vals = []
        for v in comp.vertices:
            trees = spanning_trees_toward(comp, v, weights, cap=cap)
            vals.append(sum((t.weight for t in trees), Fraction(0)))
        for v, x in zip(comp.vertices, vals):
            rho[v] = x
        positive.append(all(x > 0 for x in vals))
    return KirchhoffVector(tuple(rho), tuple(positive), partition)


def _weighted_edges_from_laplacian(L):
    c = L.shape[0]
    cols = []
    weights = []
    for t in range(c):
        for h in range(c):
            if h != t and L[h, t] != 0:
                col = np.zeros(c, dtype=np.int64)
                col[t], col[h] = -1, 1
                cols.append(col)
                weights.append(-L[h, t])
    D = np.array(cols, dtype=np.int64).T if cols else np.zeros((c, 0), dtype=np.int64)
    return D, weights


def _incidence_from_laplacian(L):
    return _weighted_edges_from_laplacian(L)[0]


def _repartition(partition: ComponentPartition, D) -> ComponentPartition:
    """Re-express a caller's partition over the merged-edge incidence built from ``L``."""
    merged = connected_components(D)
    if merged.assignment != partition.assignment:
        raise ValueError("partition does not match the connectivity of L")
    return merged


def kirchhoff_vector(net) -> KirchhoffVector:
    """Cofactor-route rho for a :class:`~crnbal.model.ReactionNetwork`."""
    from crnbal.model import build_matrices

    mats = build_matrices(net)
    return rho_by_cofactor(mats.L, connected_components(mats.D))


def strong_connectivity(partition: ComponentPartition) -> tuple[bool, ...]:
    return tuple(is_strongly_connected(comp) for comp in partition)
