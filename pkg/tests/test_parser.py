from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crnbal.errors import ParseError, StructuralError
from crnbal.model import ReactionNetwork, build_matrices
from crnbal.parser import parse_document, parse_network, serialize_network

from .conftest import DEFICIENT_CYCLE


def test_irreversible_statement():
    net = parse_network("X1 + 2 X2 -> X3 ; k = 3/2")
    assert net.species_names == ("X1", "X2", "X3")
    assert net.r == 1
    rx = net.reactions[0]
    assert net.complexes[rx.substrate] == (1, 2, 0)
    assert net.complexes[rx.product] == (0, 0, 1)
    assert rx.rate_constant == Fraction(3, 2)


def test_reversible_statement_expands_forward_first():
    net = parse_network("C1 <-> C2 ; kf = 2, kr = 3")
    assert [(r.substrate, r.product, r.rate_constant) for r in net.reactions] == [(0, 1, 2), (1, 0, 3)]


def test_deficient_cycle_composition_matrix():
    net = parse_network(DEFICIENT_CYCLE.format(1, 1, 1))
    assert build_matrices(net).Z.tolist() == [[1, 0, 2], [1, 1, 1]]


def test_complexes_are_shared():
    net = parse_network("A -> B ; k = 1\nB -> A ; k = 2\nB + A -> 2 A ; k = 1\n")
    assert net.c == 4
    assert net.reactions[1].substrate == net.reactions[0].product


def test_decimals_are_exact():
    net = parse_network("A -> B ; k = 1.5\nB -> A ; k = 2.5e-1\n")
    assert net.rates == (Fraction(3, 2), Fraction(1, 4))


def test_float_mode():
    net = parse_network("A -> B ; k = 1/3", arithmetic_mode="float")
    assert net.rates == (1 / 3,)
    assert serialize_network(net) == "A -> B ; k = 0.3333333333333333\n"
    assert parse_network(serialize_network(net), "float") == net


def test_comments_and_blank_lines():
    doc = parse_document("# header\n\n  A -> B ; k = 1  # trailing\nB<->C;kf=1,kr=2\n")
    assert doc.network.r == 3
    assert doc.provenance == ((3, 3), (4, 1), (4, 1))


def test_exact_serialization_keeps_fractions():
    net = parse_network("A -> B ; k = 1/3")
    assert serialize_network(net) == "A -> B ; k = 1/3\n"


@pytest.mark.parametrize(
    "text",
    [
        "X1 + 2 X2 -> X3 ; k = 3/2\n",
        "C1 <-> C2 ; kf = 2, kr = 3\n",
        DEFICIENT_CYCLE.format(2, 4, 1),
    ],
)
def test_round_trip(text):
    net = parse_network(text)
    again = parse_network(serialize_network(net))
    assert again == net


def test_serialization_is_canonical():
    net = parse_network("X1+2X2->X3;k=3/2\nC1<->C2;kf=2,kr=3\n")
    assert serialize_network(net) == "X1 + 2 X2 -> X3 ; k = 3/2\nC1 <-> C2 ; kf = 2, kr = 3\n"


def test_reverse_pairs_only_fused_when_adjacent():
    text = "A -> B ; k = 1\nC -> D ; k = 1\nB -> A ; k = 2\n"
    assert serialize_network(parse_network(text)) == text


def test_empty_network_rejected():
    with pytest.raises(ParseError, match="no reactions"):
        parse_network("# nothing here\n")
    with pytest.raises(StructuralError):
        ReactionNetwork.from_reactions(["A"], [(1,)], [])


@pytest.mark.parametrize(
    "text, line, col, reason",
    [
        ("A -> B ; k = 0", 1, 14, "positive"),
        ("A -> B ; k = -1", 1, 14, "unknown token"),
        ("A -> B ; k = 1/0", 1, 14, "invalid number"),
        ("A + A -> B ; k = 1", 1, 5, "repeated"),
        ("A -> A ; k = 1", 1, 1, "identical"),
        ("A -> B ; k = 1\nA $ B", 2, 3, "unknown token"),
        ("A <-> B ; k = 1", 1, 11, "'kf'"),
        ("A -> B ; k = 1, kr = 2", 1, 15, "trailing"),
        ("0 A -> B ; k = 1", 1, 1, "positive integer"),
        ("A -> ; k = 1", 1, 6, "species name"),
        ("A B -> C ; k = 1", 1, 3, "'->'"),
    ],
)
def test_parse_errors_pinpoint_location(text, line, col, reason):
    with pytest.raises(ParseError, match=reason) as info:
        parse_network(text)
    assert (info.value.line, info.value.column) == (line, col)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="AB12 +-<>;=,/.k\n#fr_x", max_size=60))
def test_fuzz_never_crashes(text):
    try:
        parse_network(text)
    except ParseError as exc:
        assert exc.line >= 1 and exc.column >= 1


names = st.sampled_from(["A", "B", "C", "X_1", "foo"])
coef = st.integers(min_value=1, max_value=3)
complexes = st.dictionaries(names, coef, min_size=1, max_size=3)
rates = st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50)


def _render(cx):
    return " + ".join(n if a == 1 else f"{a} {n}" for n, a in cx.items())


@st.composite
def networks_text(draw):
    lines = []
    for _ in range(draw(st.integers(1, 5))):
        lhs, rhs = draw(complexes), draw(complexes)
        if lhs == rhs:
            continue
        if draw(st.booleans()):
            lines.append(f"{_render(lhs)} <-> {_render(rhs)} ; kf = {draw(rates)}, kr = {draw(rates)}")
        else:
            lines.append(f"{_render(lhs)} -> {_render(rhs)} ; k = {draw(rates)}")
    if not lines:
        lines.append("A -> B ; k = 1")
    return "\n".join(lines) + "\n"


@settings(max_examples=200, deadline=None)
@given(networks_text())
def test_parse_serialize_identity(text):
    net = parse_network(text)
    out = serialize_network(net)
    assert parse_network(out) == net
    assert serialize_network(parse_network(out)) == out
