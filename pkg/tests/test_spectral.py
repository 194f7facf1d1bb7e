"""Tests for minimum-support eigenfunctions of the oval graphs."""

import pytest

from peisert_ekr.constructions import cq_elements, oval_graph_xq
from peisert_ekr.errors import ImprimitiveGraphError, InvalidInputError
from peisert_ekr.fields import tower_for_q
from peisert_ekr.graph import PeisertGraph
from peisert_ekr.plane import default_basis
from peisert_ekr.spectral import (
    WitnessKind,
    WitnessSubgraph,
    build_f1,
    build_f2,
    clique_cq,
    eigenvalue_of,
    verify_witness,
    wdb_bounds,
)


def _line(g: PeisertGraph, direction: int) -> list[int]:
    tower = g.tower
    first = g.basis.direction_element(direction)
    return tower.mul_array(tower.fq_elements, first).tolist()


def test_wdb_bounds() -> None:
    """Minimum supports of the two non-principal eigenvalues."""
    assert wdb_bounds(4, 9) == (12, 8)
    assert wdb_bounds(6, 25) == (40, 12)
    for m in (1, 9):
        with pytest.raises(ImprimitiveGraphError):
            wdb_bounds(m, 9)


def test_clique_cq(x9: PeisertGraph) -> None:
    """C_q is non-canonical and meets each line of the graph in sqrt(q) points."""
    clique = clique_cq(x9)
    assert not clique.canonical
    assert clique.size == 9
    tower = x9.tower
    cq = cq_elements(x9.basis)
    scaled = [
        frozenset(tower.mul_array(cq, tower.power(tower.epsilon, i)).tolist())
        for i in range(4)
    ]
    for i in range(4):
        for j in range(i + 1, 4):
            assert scaled[i] & scaled[j] == {0}


@pytest.mark.parametrize("index", [0, 1, 2, 3])
def test_build_f1(x9: PeisertGraph, index: int) -> None:
    """An isolated clique pair gives a tight eigenfunction for q - sqrt(q) - 1."""
    direction = x9.directions.sorted_members[0]
    f1 = build_f1(x9, _line(x9, direction), index)
    assert f1.eigenvalue == 5
    assert len(f1.support) == 12
    assert int(f1.values.sum()) == 0
    report = f1.report(include_values=True)
    assert report.tight
    assert report.bound == 12
    assert report.witness_kind is WitnessKind.ISOLATED_CLIQUE_PAIR
    assert report.values is not None
    assert set(report.values.values()) == {1, -1}


@pytest.mark.parametrize(
    ("q", "theta", "support"), [(9, -4, 8), (16, -5, 10), (25, -6, 12)]
)
def test_build_f2(q: int, theta: int, support: int) -> None:
    """The oval and its beta-multiple induce K_{r+1, r+1}."""
    g = oval_graph_xq(default_basis(tower_for_q(q))).graph
    f2 = build_f2(g)
    assert f2.eigenvalue == theta
    assert len(f2.support) == support
    report = f2.report()
    assert report.tight
    assert report.values is None
    assert report.witness_kind is WitnessKind.COMPLETE_BIPARTITE


def test_build_f1_rejects(x9: PeisertGraph) -> None:
    """Non-canonical cliques and indices out of range are refused."""
    with pytest.raises(InvalidInputError):
        build_f1(x9, cq_elements(x9.basis).tolist(), 0)
    with pytest.raises(InvalidInputError):
        build_f1(x9, _line(x9, x9.directions.sorted_members[0]), 4)


def test_verify_witness_rejects_parallel_lines(x9: PeisertGraph) -> None:
    """Two parallel lines are cliques joined by edges, so no witness."""
    tower = x9.tower
    line = _line(x9, x9.directions.sorted_members[0])
    shift = next(v for v in range(1, 81) if v not in line)
    parallel = tower.add_array(line, shift).tolist()
    witness = WitnessSubgraph(
        frozenset(line), frozenset(parallel), WitnessKind.ISOLATED_CLIQUE_PAIR
    )
    assert not verify_witness(witness, x9)
    with pytest.raises(InvalidInputError):
        overlapping = WitnessSubgraph(frozenset(line), frozenset(line), witness.kind)
        verify_witness(overlapping, x9)


def test_eigenvalue_of(x9: PeisertGraph) -> None:
    """Constant functions have eigenvalue k; a point mass has none."""
    assert eigenvalue_of(x9, [1] * 81) == 32
    assert eigenvalue_of(x9, [1] + [0] * 80) is None
    with pytest.raises(InvalidInputError):
        eigenvalue_of(x9, [0] * 81)


@pytest.mark.parametrize("q", [9, 16, pytest.param(25, marks=pytest.mark.slow)])
def test_build_f1_sizes(q: int) -> None:
    """Supports of 2(q - sqrt(q)) for the eigenvalue q - sqrt(q) - 1."""
    r = round(q**0.5)
    g = oval_graph_xq(default_basis(tower_for_q(q))).graph
    line = _line(g, g.directions.sorted_members[0])
    for index in (0, r):
        f1 = build_f1(g, line, index)
        assert f1.eigenvalue == q - r - 1
        assert len(f1.support) == 2 * (q - r)
        assert f1.report().tight
