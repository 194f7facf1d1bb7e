"""Tests for clique enumeration and the strict-EKR decision."""

import networkx as nx
import pytest

from peisert_ekr.cliques import (
    CliqueKind,
    baer_subarray_check,
    classify_clique,
    enumerate_maximal_cliques,
    intersection_profile,
    max_cliques_through_zero,
    maximal_cliques_through_zero,
    nexus_check,
    strict_ekr,
)
from peisert_ekr.constructions import extremal_construction, oval_graph_xq
from peisert_ekr.errors import BudgetExceededError, InvalidInputError
from peisert_ekr.fields import tower_for_q
from peisert_ekr.graph import PeisertGraph, build_graph
from peisert_ekr.plane import default_basis


def _nx_cliques_through_zero(g: PeisertGraph) -> set[frozenset[int]]:
    nx_graph = nx.from_numpy_array(g.adjacency.astype(int))
    return {frozenset(c) for c in nx.find_cliques(nx_graph) if 0 in c}


@pytest.mark.parametrize(
    ("q", "m_values"), [(4, [1, 2, 3]), (5, [1, 2, 3, 4]), (7, [2, 3, 4])]
)
def test_maximum_cliques_match_networkx(q: int, m_values: list[int]) -> None:
    """The function search finds exactly the q-cliques through 0."""
    basis = default_basis(tower_for_q(q))
    for m in m_values:
        g = build_graph(basis, range(m))
        expected = {c for c in _nx_cliques_through_zero(g) if len(c) == q}
        found = max_cliques_through_zero(g)
        assert {c.vertices for c in found} == expected
        assert [c.sorted_vertices for c in found] == sorted(
            c.sorted_vertices for c in found
        )


def test_maximal_cliques_match_networkx(x9: PeisertGraph) -> None:
    """Bron-Kerbosch on the neighbourhood of 0 agrees with networkx."""
    found = maximal_cliques_through_zero(x9)
    assert {c.vertices for c in found} == _nx_cliques_through_zero(x9)
    basis = default_basis(tower_for_q(5))
    g = build_graph(basis, [0, 1, 3])
    assert {c.vertices for c in maximal_cliques_through_zero(g)} == (
        _nx_cliques_through_zero(g)
    )


def test_oval_graph_cliques(x9: PeisertGraph) -> None:
    """X_9 has four canonical and four non-canonical cliques through 0."""
    cliques = max_cliques_through_zero(x9)
    kinds = [c.kind for c in cliques]
    assert len(cliques) == 8
    assert kinds.count(CliqueKind.CANONICAL) == 4
    assert kinds.count(CliqueKind.NONCANONICAL_MAXIMUM) == 4
    for c in cliques:
        assert len(c.directions) == (1 if c.canonical else 4)


def test_extremal_cube_cliques(extremal8: PeisertGraph) -> None:
    """The extremal (5, 8) graph has 5 canonical and 7 non-canonical cliques."""
    cliques = max_cliques_through_zero(extremal8)
    assert len(cliques) == 12
    assert sum(c.canonical for c in cliques) == 5


def test_lines_only_for_small_m() -> None:
    """Types 1 and 2 only have lines."""
    basis = default_basis(tower_for_q(7))
    assert len(max_cliques_through_zero(build_graph(basis, [3]))) == 1
    two = build_graph(basis, [0, 5])
    assert all(c.canonical for c in max_cliques_through_zero(two))
    assert strict_ekr(two) == (True, None)


def test_strict_ekr(x9: PeisertGraph) -> None:
    """X_9 fails strict-EKR with a non-canonical witness."""
    holds, witness = strict_ekr(x9)
    assert not holds
    assert witness is not None
    assert witness.kind is CliqueKind.NONCANONICAL_MAXIMUM
    assert witness.size == 9
    assert x9.is_clique(witness.vertices)


def test_oval_graph_x16_maximal() -> None:
    """Every maximal clique through 0 of X_16 is maximum."""
    g = oval_graph_xq(default_basis(tower_for_q(16))).graph
    maximal = maximal_cliques_through_zero(g)
    assert len(maximal) == 10
    assert all(c.size == 16 for c in maximal)


def test_classify_clique_rejects(x9: PeisertGraph) -> None:
    """Sets without 0 and non-cliques are rejected."""
    with pytest.raises(InvalidInputError):
        classify_clique(x9, [1, 2])
    non_neighbour = next(v for v in range(1, 81) if not x9.in_connection_set[v])
    with pytest.raises(InvalidInputError):
        classify_clique(x9, [0, non_neighbour])
    assert classify_clique(x9, [0, int(x9.connection_set[0])]).kind is (
        CliqueKind.MAXIMAL_SUBMAXIMUM
    )


def test_delsarte_checks(x9: PeisertGraph) -> None:
    """Nexus m - 1, intersections of size 3 and Baer subarrays."""
    cliques = max_cliques_through_zero(x9)
    canonical = [c for c in cliques if c.canonical]
    others = [c for c in cliques if not c.canonical]
    for c in cliques:
        assert nexus_check(x9, c) == 3
    for line in canonical:
        for c in others:
            assert intersection_profile(x9, line.vertices, c.vertices) == 3
    assert all(baer_subarray_check(x9, c) for c in others)
    assert not baer_subarray_check(x9, canonical[0])


def test_intersection_profile_rejects(x9: PeisertGraph) -> None:
    """The first clique must be a line and the second a non-canonical q-clique."""
    cliques = max_cliques_through_zero(x9)
    line = next(c for c in cliques if c.canonical)
    other = next(c for c in cliques if not c.canonical)
    with pytest.raises(InvalidInputError):
        intersection_profile(x9, other.vertices, line.vertices)
    with pytest.raises(InvalidInputError):
        intersection_profile(x9, line.vertices, line.vertices)
    small = [0, int(x9.connection_set[0])]
    with pytest.raises(InvalidInputError):
        intersection_profile(x9, line.vertices, small)
    with pytest.raises(InvalidInputError):
        intersection_profile(x9, [1, 2], other.vertices)


def test_enumerate_maximal_cliques() -> None:
    """A triangle with a pendant edge has two maximal cliques."""
    masks = [0b0110, 0b0101, 0b1011, 0b0100]
    assert sorted(enumerate_maximal_cliques(masks)) == [0b0111, 0b1100]


def test_budgets(x9: PeisertGraph) -> None:
    """Exhausted budgets raise with whatever was found."""
    with pytest.raises(BudgetExceededError) as info:
        max_cliques_through_zero(x9, max_nodes=3)
    assert isinstance(info.value.partial, list)
    assert info.value.exit_code == 3
    masks = [0b0110, 0b0101, 0b1011, 0b0100]
    with pytest.raises(BudgetExceededError) as info:
        enumerate_maximal_cliques(masks, max_nodes=1)
    assert info.value.partial == []


@pytest.mark.parametrize("q", [9, 16, pytest.param(25, marks=pytest.mark.slow)])
def test_extremal_square_cliques(q: int) -> None:
    """Lines and Baer-type cliques pair up in sqrt(q) points; no other maximal ones."""
    r = round(q**0.5)
    g = extremal_construction(tower_for_q(q)).graph
    maximal = maximal_cliques_through_zero(g)
    assert len(maximal) == 2 * (r + 1)
    assert all(c.size == q for c in maximal)
    cliques = max_cliques_through_zero(g)
    canonical = [c for c in cliques if c.canonical]
    others = [c for c in cliques if not c.canonical]
    assert (len(canonical), len(others)) == (r + 1, r + 1)
    for line in canonical:
        for c in others:
            assert intersection_profile(g, line.vertices, c.vertices) == r
    assert all(baer_subarray_check(g, c) for c in others)
