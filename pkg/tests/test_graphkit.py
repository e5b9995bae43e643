from fractions import Fraction

import numpy as np
import pytest

from crnbal import linalg
from crnbal.errors import OracleUnavailableError, StructuralError
from crnbal.generators import random_network, random_reversible_network
from crnbal.graphkit import (
    connected_components,
    cycle_space_basis,
    incidence_edges,
    is_strongly_connected,
    spanning_trees_toward,
    strongly_connected_components,
)
from crnbal.model import build_matrices, reversible_structure
from crnbal.parser import parse_network

from .conftest import triangle, deficient_cycle
from .oracles import brute_force_trees, integer_rank


def _partition(text):
    return connected_components(build_matrices(parse_network(text)).D)


def test_triangle_single_component(triangle_net):
    D = build_matrices(triangle_net).D
    part = connected_components(D)
    assert part.n_components == 1
    assert integer_rank(D.tolist()) == 2 == 3 - part.n_components


def test_disjoint_union_has_two_components():
    text = "C1 <-> C2 ; kf = 1, kr = 1\nC2 <-> C3 ; kf = 1, kr = 1\nC3 <-> C1 ; kf = 1, kr = 1\nA <-> B ; kf = 1, kr = 2\n"
    part = _partition(text)
    assert part.n_components == 2
    assert part.assignment == (0, 0, 0, 1, 1)
    assert sum(comp.size for comp in part) == 5


def test_rank_equals_c_minus_components(rng):
    for _ in range(60):
        D = build_matrices(random_network(rng)).D
        part = connected_components(D)
        assert integer_rank(D.tolist()) == D.shape[0] - part.n_components


def test_strong_connectivity_examples():
    (cycle,) = connected_components(build_matrices(deficient_cycle((1, 1, 1))).D)
    assert is_strongly_connected(cycle)
    (edge,) = _partition("A -> B ; k = 1")
    assert not is_strongly_connected(edge)


def test_reversible_components_strongly_connected(rng):
    for _ in range(30):
        net = random_reversible_network(rng)
        assert all(is_strongly_connected(comp) for comp in connected_components(build_matrices(net).D))


def test_tarjan_on_known_graph():
    edges = [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 2, 3), (4, 3, 4), (5, 4, 3)]
    sccs = strongly_connected_components(range(5), edges)
    assert sorted(sccs) == [[0, 1, 2], [3, 4]]


def test_triangle_trees_toward_first_vertex(triangle_net):
    (comp,) = connected_components(build_matrices(triangle_net).D)
    trees = spanning_trees_toward(comp, 0, triangle_net.rates)
    # reactions: 0 C1->C2 k1+, 1 C2->C1 k1-, 2 C2->C3 k2+, 3 C3->C2 k2-, 4 C3->C1 k3+, 5 C1->C3 k3-
    k1m, k2p, k2m, k3p = 4, 2, 5, 3
    assert sorted(t.weight for t in trees) == sorted([k2p * k3p, k1m * k3p, k1m * k2m])
    assert all(len(t.edges) == 2 and t.root == 0 for t in trees)


def test_single_edge_trees():
    net = parse_network("A <-> B ; kf = 2, kr = 3")
    (comp,) = connected_components(build_matrices(net).D)
    (tree,) = spanning_trees_toward(comp, 0, net.rates)
    assert tree.weight == 3
    (edge,) = _partition("A -> B ; k = 1")
    assert spanning_trees_toward(edge, 0, [1]) == []


def test_tree_enumeration_matches_subset_oracle(rng):
    for _ in range(40):
        net = random_network(rng, max_component=5, max_edges=8)
        mats = build_matrices(net)
        edges = incidence_edges(mats.D)
        for comp in connected_components(mats.D):
            local = {v: i for i, v in enumerate(comp.vertices)}
            cedges = [(local[t], local[h]) for _, t, h in comp.edges]
            cweights = [net.rates[j] for j, _, _ in comp.edges]
            for v in comp.vertices:
                trees = spanning_trees_toward(comp, v, net.rates)
                total, count = brute_force_trees(comp.size, cedges, local[v], cweights)
                assert len(trees) == count
                assert sum((t.weight for t in trees), Fraction(0)) == total
            assert len(edges) == net.r


def test_strong_connectivity_agrees_with_tree_existence(rng):
    for _ in range(60):
        net = random_network(rng)
        for comp in connected_components(build_matrices(net).D):
            has_all = all(spanning_trees_toward(comp, v) for v in comp.vertices)
            assert has_all == is_strongly_connected(comp)


def test_tree_cap():
    text = "\n".join(f"S{i} -> S{i + 1} ; k = 1" for i in range(9)) + "\n"
    (comp,) = _partition(text)
    with pytest.raises(OracleUnavailableError):
        spanning_trees_toward(comp, 0)
    assert spanning_trees_toward(comp, 9, cap=10)


def test_triangle_cycle_basis(triangle_net):
    rs = reversible_structure(triangle_net)
    basis = cycle_space_basis(rs.D_bar)
    assert basis == [(1, 1, 1)] or basis == [(-1, -1, -1)]
    assert linalg.nullspace_integer_basis(rs.D_bar) == [(1, 1, 1)]


def test_tree_has_no_cycles():
    net = parse_network("A <-> B ; kf = 1, kr = 1\nB <-> C ; kf = 1, kr = 1\nB <-> D ; kf = 1, kr = 1\n")
    assert cycle_space_basis(reversible_structure(net).D_bar) == []


def test_parallel_edges_form_a_cycle():
    D_bar = np.array([[-1, -1], [1, 1]])
    assert cycle_space_basis(D_bar) == [(1, -1)]


def test_cycle_basis_properties(rng):
    for _ in range(60):
        net = random_reversible_network(rng, allow_parallel=True, extra_edges=4)
        rs = reversible_structure(net)
        basis = cycle_space_basis(rs.D_bar)
        n_comp = connected_components(rs.D_bar).n_components
        assert len(basis) == rs.r_bar - net.c + n_comp
        Db = np.array(rs.D_bar, dtype=object)
        for s in basis:
            assert all(x == 0 for x in Db.dot(np.array(s, dtype=object)))
            assert set(s) <= {-1, 0, 1}
        if basis:
            assert integer_rank(basis) == len(basis)


def test_bad_incidence_column():
    with pytest.raises(StructuralError):
        incidence_edges(np.array([[1], [1]]))
