from fractions import Fraction

import numpy as np
import pytest

from crnbal.errors import NotReversibleError, StructuralError
from crnbal.generators import random_network, random_reversible_network
from crnbal.model import Reaction, ReactionNetwork, build_matrices, reversible_structure

from .conftest import triangle, deficient_cycle
from .oracles import matmul


def test_single_reaction_matrices():
    net = ReactionNetwork.from_reactions(["A", "B"], [(1, 0), (0, 1)], [(0, 1, 2)])
    mats = build_matrices(net)
    assert mats.D.tolist() == [[-1], [1]]
    assert mats.K.tolist() == [[2, 0]]
    assert mats.L.tolist() == [[2, 0], [-2, 0]]
    assert list(mats.L.sum(axis=0)) == [0, 0]


def test_triangle_laplacian_entries():
    kp, km = (Fraction(1), Fraction(2), Fraction(3)), (Fraction(4), Fraction(5), Fraction(6))
    k1p, k2p, k3p = kp
    k1m, k2m, k3m = km
    expected = [
        [k1p + k3m, -k1m, -k3p],
        [-k1p, k1m + k2p, -k2m],
        [-k3m, -k2p, k3p + k2m],
    ]
    assert build_matrices(triangle(kp, km)).L.tolist() == expected


def test_deficient_cycle_stoichiometric_matrix():
    mats = build_matrices(deficient_cycle((2, 4, 1)))
    Z = [[1, 0, 2], [1, 1, 1]]
    D = [[-1, 0, 1], [1, -1, 0], [0, 1, -1]]
    assert mats.Z.tolist() == Z
    assert mats.D.tolist() == D
    assert matmul(Z, D) == [[-1, 2, -1], [0, 0, 0]]
    assert mats.S.tolist() == [[-1, 2, -1], [0, 0, 0]]


def test_bundle_invariants_on_random_networks(rng):
    for _ in range(50):
        net = random_network(rng)
        mats = build_matrices(net)
        assert all(v == 0 for v in mats.D.sum(axis=0))
        assert all(v == 0 for v in mats.L.sum(axis=0))
        for j in range(net.r):
            col = mats.D[:, j]
            assert sorted(col[col != 0].tolist()) == [-1, 1]
            row = mats.K[j]
            nz = [i for i, x in enumerate(row) if x != 0]
            assert nz == [net.reactions[j].substrate]
        assert (mats.S == mats.Z @ mats.D).all()
        assert np.array_equal(mats.L, -(mats.D.astype(object).dot(mats.K)))
        for i in range(net.c):
            for k in range(net.c):
                if i != k:
                    assert mats.L[i, k] <= 0
            assert mats.L[i, i] >= 0


def test_matrices_are_read_only(triangle_net):
    mats = build_matrices(triangle_net)
    with pytest.raises(ValueError):
        mats.L[0, 0] = 0


def test_float_mode_bundle():
    net = triangle((1, 2, 3), (4, 5, 6)).as_float()
    L = build_matrices(net).L
    assert L.dtype == float
    assert np.allclose(L.sum(axis=0), 0.0)


@pytest.mark.parametrize(
    "complexes, reactions, msg",
    [
        ([(1, 0), (1, 0)], [(0, 1, 1)], "identical"),
        ([(1, 0), (0, 1)], [(0, 2, 1)], "outside"),
        ([(1, 0), (0, 1)], [(0, 0, 1)], "identical substrate"),
        ([(1, 0), (0, 0)], [(0, 1, 1)], "zero complex"),
        ([(1, 0), (0, 1)], [(0, 1, 0)], "positive"),
        ([(1, 0), (0, 1)], [(0, 1, -1)], "positive"),
        ([(1, 0), (0, 1)], [], "at least one reaction"),
        ([(1, 0), (0, 1)], [(0, 1, 0.5)], "exact mode"),
        ([(1, -1), (0, 1)], [(0, 1, 1)], "negative"),
    ],
)
def test_structural_errors(complexes, reactions, msg):
    with pytest.raises(StructuralError, match=msg):
        ReactionNetwork.from_reactions(["A", "B"], complexes, reactions)


def test_duplicate_species_rejected():
    with pytest.raises(StructuralError, match="duplicate species"):
        ReactionNetwork.from_reactions(["A", "A"], [(1, 0), (0, 1)], [(0, 1, 1)])


def test_float_mode_accepts_floats():
    net = ReactionNetwork.from_reactions(["A", "B"], [(1, 0), (0, 1)], [(0, 1, 0.5)], "float")
    assert net.rates == (0.5,)


def test_reversible_pair():
    net = ReactionNetwork.from_reactions(["A", "B"], [(1, 0), (0, 1)], [(0, 1, 2), (1, 0, 3)])
    rs = reversible_structure(net)
    assert rs.r_bar == 1
    assert rs.D_bar.tolist() == [[-1], [1]]
    assert rs.K_eq == (Fraction(2, 3),)


def test_triangle_equilibrium_constants():
    rs = reversible_structure(triangle((1, 2, 3), (4, 5, 6)))
    assert rs.r_bar == 3
    assert rs.K_eq == (Fraction(1, 4), Fraction(2, 5), Fraction(3, 6))


def test_deficient_cycle_not_reversible():
    with pytest.raises(NotReversibleError):
        reversible_structure(deficient_cycle((2, 4, 1)))


def test_multi_edges_paired_by_multiplicity():
    cx = [(1, 0), (0, 1)]
    net = ReactionNetwork.from_reactions(["A", "B"], cx, [(0, 1, 1), (0, 1, 2), (1, 0, 3), (1, 0, 4)])
    rs = reversible_structure(net)
    assert rs.pairs == ((0, 2), (1, 3))
    unbalanced = ReactionNetwork.from_reactions(["A", "B"], cx, [(0, 1, 1), (0, 1, 2), (1, 0, 3)])
    with pytest.raises(NotReversibleError) as info:
        reversible_structure(unbalanced)
    assert info.value.unpaired == (1,)


def test_reordered_reactions_reproduce_laplacian(rng):
    for _ in range(30):
        net = random_reversible_network(rng, allow_parallel=True)
        rs = reversible_structure(net)
        reordered = ReactionNetwork(net.species, net.complexes, rs.reordered_reactions(net))
        mats = build_matrices(reordered)
        assert np.array_equal(mats.D, np.hstack([rs.D_bar, -rs.D_bar]))
        assert np.array_equal(mats.L, build_matrices(net).L)


def test_network_is_immutable(triangle_net):
    with pytest.raises(AttributeError):
        triangle_net.reactions = ()
    assert isinstance(triangle_net.reactions[0], Reaction)
