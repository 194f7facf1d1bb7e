"""Tests for canonical labeling."""

import networkx as nx
import numpy as np
import pytest

from peisert_ekr.classify import enumerate_types, known_automorphisms
from peisert_ekr.errors import BudgetExceededError, InvalidInputError
from peisert_ekr.fields import tower_for_q
from peisert_ekr.graph import PeisertGraph, build_graph
from peisert_ekr.labeling import canonical_labeling, is_automorphism
from peisert_ekr.plane import default_basis


def _adjacency(graph: nx.Graph) -> np.ndarray:
    return nx.to_numpy_array(graph, nodelist=sorted(graph), dtype=bool)


def _relabel(adjacency: np.ndarray, seed: int) -> np.ndarray:
    perm = np.random.default_rng(seed).permutation(len(adjacency))
    return adjacency[np.ix_(perm, perm)]


def test_relabeled_graphs_share_a_form() -> None:
    """Random relabelings of the Petersen graph have one canonical form."""
    petersen = _adjacency(nx.petersen_graph())
    expected = canonical_labeling(petersen).canonical_form
    for seed in range(3):
        assert canonical_labeling(_relabel(petersen, seed)).canonical_form == expected


def test_cubic_graphs_on_ten_vertices_differ() -> None:
    """The Petersen graph and the prism over C_5 are told apart."""
    petersen = nx.petersen_graph()
    prism = nx.circular_ladder_graph(5)
    assert not nx.is_isomorphic(petersen, prism)
    first = canonical_labeling(_adjacency(petersen)).canonical_form
    second = canonical_labeling(_adjacency(prism)).canonical_form
    assert first != second


def test_labeling_is_a_relabeling() -> None:
    """The labeling permutes the vertices onto the canonical form."""
    adjacency = _adjacency(nx.petersen_graph())
    result = canonical_labeling(adjacency)
    order = result.labeling
    assert sorted(order.tolist()) == list(range(10))
    packed = np.packbits(adjacency[np.ix_(order, order)]).tobytes()
    assert packed == result.canonical_form
    for generator in result.generators:
        assert is_automorphism(adjacency, generator)


def test_known_automorphisms(x9: PeisertGraph) -> None:
    """Translations and scaling by epsilon are automorphisms."""
    for perm in known_automorphisms(x9):
        assert is_automorphism(x9.adjacency, perm)
    assert not is_automorphism(x9.adjacency, np.roll(np.arange(81), 1))
    assert not is_automorphism(x9.adjacency, [0, 1])


def test_peisert_graphs_with_and_without_seeds() -> None:
    """Seeding automorphisms does not change the canonical form."""
    basis = default_basis(tower_for_q(7))
    first, second = (build_graph(basis, t.members) for t in enumerate_types(basis, 4))
    seeded = canonical_labeling(
        first.adjacency, automorphisms=known_automorphisms(first)
    )
    plain = canonical_labeling(_relabel(first.adjacency, 7))
    assert seeded.canonical_form == plain.canonical_form
    other = canonical_labeling(
        second.adjacency, automorphisms=known_automorphisms(second)
    )
    assert other.canonical_form != seeded.canonical_form


def test_bad_seed_and_budget() -> None:
    """Non-automorphisms are rejected and the budget is enforced."""
    petersen = _adjacency(nx.petersen_graph())
    with pytest.raises(InvalidInputError):
        canonical_labeling(petersen, automorphisms=[np.roll(np.arange(10), 1)])
    with pytest.raises(BudgetExceededError):
        canonical_labeling(petersen, max_nodes=1)


def test_coloured_labeling() -> None:
    """Colours refine the start, travel with relabelings and filter seeds."""
    petersen = _adjacency(nx.petersen_graph())
    colors = np.zeros(10, dtype=np.int64)
    colors[0] = 1
    coloured = canonical_labeling(petersen, colors=colors)
    assert coloured.canonical_form != canonical_labeling(petersen).canonical_form
    perm = np.random.default_rng(3).permutation(10)
    relabeled = canonical_labeling(petersen[np.ix_(perm, perm)], colors=colors[perm])
    assert relabeled.canonical_form == coloured.canonical_form
    other = np.zeros(10, dtype=np.int64)
    other[5] = 1
    assert canonical_labeling(petersen, colors=other).canonical_form == (
        coloured.canonical_form
    )
    doubled = canonical_labeling(petersen, colors=2 * colors)
    assert doubled.canonical_form != coloured.canonical_form
    with pytest.raises(InvalidInputError):
        canonical_labeling(petersen, colors=colors[:9])


def test_colour_breaking_seeds_are_dropped(x9: PeisertGraph) -> None:
    """Translations move vertex 0, so a colouring fixing it discards them."""
    colors = np.zeros(81, dtype=np.int64)
    colors[0] = -1
    result = canonical_labeling(
        x9.adjacency, colors=colors, automorphisms=known_automorphisms(x9)
    )
    for generator in result.generators:
        assert is_automorphism(x9.adjacency, generator)
        assert generator[0] == 0
