"""Tests for the explicit graph families and the polar-space isomorphisms."""

import numpy as np
import pytest

from peisert_ekr.classify import (
    certificate,
    clique_coloring,
    closed_form_extremal_type,
    isomorphic,
)
from peisert_ekr.cliques import classify_clique, max_cliques_through_zero, strict_ekr
from peisert_ekr.constructions import (
    QuadraticForm,
    change_of_variables,
    cq_elements,
    decompose_cube_clique,
    determinant,
    determinant_change_of_variables,
    determinant_form,
    example_q32,
    extremal_construction,
    extremal_to_oval_map,
    extremal_vo_isomorphism,
    form_equivalence_check,
    generalized_paley_graph,
    hyperbolic_form,
    linear_hyperplane,
    matrix_a,
    ls_graph,
    norm_difference_form,
    oval,
    oval_graph_xq,
    paley_graph,
    quad_form_graph,
    span,
    vo_plus,
    xq_vo_isomorphism,
    xq_y_isomorphism,
    y_qn,
    zero_form,
)
from peisert_ekr.errors import InvalidInputError
from peisert_ekr.fields import tower_for_q
from peisert_ekr.graph import PeisertGraph, srg_verify
from peisert_ekr.labeling import canonical_labeling
from peisert_ekr.plane import default_basis


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_extremal_construction(q: int) -> None:
    """The construction has the extremal type and a non-canonical witness."""
    built = extremal_construction(tower_for_q(q))
    g = built.graph
    assert g.m == closed_form_extremal_type(q)
    assert not classify_clique(g, built.witness).canonical
    srg_verify(g)


def test_extremal_construction_needs_extension() -> None:
    """Prime q has no subfield construction."""
    with pytest.raises(InvalidInputError):
        extremal_construction(tower_for_q(7))


@pytest.mark.parametrize(("p", "m"), [(3, 3), (5, 4), (7, 5), (11, 7)])
def test_ls_graph(p: int, m: int) -> None:
    """The graph of x -> x^((p+1)/2) has (p + 3) / 2 directions."""
    built = ls_graph(p)
    assert built.graph.m == m
    assert len(built.witness) == p
    assert not classify_clique(built.graph, built.witness).canonical


def test_ls_graph_rejects() -> None:
    """p = 2 and composite p fail."""
    for p in (2, 9):
        with pytest.raises(InvalidInputError):
            ls_graph(p)


def test_y_qn() -> None:
    """Hyperplanes over F_2 and F_4 in F_16 give types 9 and 5."""
    tower = tower_for_q(16)
    basis = default_basis(tower)
    over_f2 = y_qn(basis, linear_hyperplane(tower, 1).tolist(), 1)
    assert over_f2.graph.m == 9
    over_f4 = y_qn(basis, linear_hyperplane(tower, 2).tolist(), 2)
    assert over_f4.graph.m == 5
    assert not strict_ekr(over_f4.graph)[0]
    shifted = tower.add_array(linear_hyperplane(tower, 2), tower.epsilon)
    assert y_qn(basis, shifted.tolist(), 2).graph.m == 5


def test_y_qn_rejects_non_hyperplanes() -> None:
    """A set that is not a coset of a subspace is refused."""
    tower = tower_for_q(16)
    basis = default_basis(tower)
    hyperplane = linear_hyperplane(tower, 1).tolist()
    outside = next(x for x in tower.fq_elements.tolist() if x not in hyperplane)
    broken = [*hyperplane[:-1], outside]
    with pytest.raises(InvalidInputError):
        y_qn(basis, broken, 1)
    with pytest.raises(InvalidInputError):
        y_qn(basis, hyperplane[:4], 1)


@pytest.mark.parametrize("q", [4, 9, 16, 25])
def test_oval_graph(q: int) -> None:
    """X_q has sqrt(q) + 1 directions and C_q is a non-canonical clique."""
    r = round(q**0.5)
    tower = tower_for_q(q)
    basis = default_basis(tower)
    assert len(oval(tower)) == r + 1
    built = oval_graph_xq(basis)
    assert built.graph.m == r + 1
    assert built.witness == frozenset(cq_elements(basis).tolist())
    assert not classify_clique(built.graph, built.witness).canonical


def test_oval_graph_needs_square() -> None:
    """Non-square q has no oval graph."""
    with pytest.raises(InvalidInputError):
        oval_graph_xq(default_basis(tower_for_q(8)))


def test_paley_graphs() -> None:
    """Paley graphs are Peisert-type with (q + 1) / 2 directions."""
    basis = default_basis(tower_for_q(9))
    paley = paley_graph(basis)
    assert paley.m == 5
    assert strict_ekr(paley)[0]
    quartic = generalized_paley_graph(default_basis(tower_for_q(7)), 4)
    assert quartic.m == 2
    with pytest.raises(InvalidInputError):
        generalized_paley_graph(default_basis(tower_for_q(7)), 3)


def test_span() -> None:
    """The F_2-span of three independent elements has eight points."""
    tower = tower_for_q(8)
    values = span(tower, tower.subfield_elements(1), [1, tower.epsilon, tower.beta])
    assert len(values) == 8
    assert values[0] == 0


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_form_equivalence(r: int) -> None:
    """B turns the hyperbolic form into the norm difference, in both parities."""
    tower = tower_for_q(r * r)
    s = tower.n // 2
    if tower.p == 2:
        d = tower.choose_trace_one(s)
    else:
        d = tower.least_nonsquare(s)
    matrix = change_of_variables(tower, d)
    hyperbolic = hyperbolic_form(tower, s, 2)
    norm = norm_difference_form(tower, s, d)
    assert form_equivalence_check(hyperbolic, norm, matrix)
    assert not form_equivalence_check(zero_form(tower, s, 4), norm, matrix)


def test_form_checks() -> None:
    """Singular matrices and malformed forms are rejected."""
    tower = tower_for_q(9)
    singular = ((1, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert determinant(tower, singular) == 0
    hyperbolic = hyperbolic_form(tower, 1, 2)
    with pytest.raises(InvalidInputError):
        form_equivalence_check(hyperbolic, hyperbolic, singular)
    with pytest.raises(InvalidInputError):
        QuadraticForm(tower, 1, ((1, 0), (1, 1)))
    with pytest.raises(InvalidInputError):
        QuadraticForm(tower, 1, ((tower.beta,),))


def test_vo_plus() -> None:
    """VO+(4, 2) has 16 vertices and six maximal cliques through 0, all of size 4."""
    graph = vo_plus(2, 2)
    assert graph.order == 16
    cliques = graph.maximal_cliques_through_zero()
    assert len(cliques) == 6
    assert all(len(c) == 4 for c in cliques)
    assert graph.adjacency.sum(axis=1).tolist() == [9] * 16
    three = vo_plus(2, 3)
    assert all(len(c) == 9 for c in three.maximal_cliques_through_zero())
    with pytest.raises(InvalidInputError):
        vo_plus(1, 3)
    with pytest.raises(InvalidInputError):
        quad_form_graph(hyperbolic_form(tower_for_q(9), 2, 3))


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_xq_vo_isomorphism(r: int) -> None:
    """The explicit map from X_{r^2} to VO+(4, r) preserves adjacency."""
    polar = xq_vo_isomorphism(r)
    mapping = polar.mapping
    assert sorted(mapping.tolist()) == list(range(r**4))
    target = polar.target.adjacency
    assert np.array_equal(target[np.ix_(mapping, mapping)], polar.source.adjacency)
    assert np.array_equal(polar.inverse()[mapping], np.arange(r**4))
    norm_mapping = polar.norm_mapping
    assert np.array_equal(
        target[np.ix_(norm_mapping, norm_mapping)], polar.source.adjacency
    )
    intermediate = polar.intermediate.adjacency
    collineation = polar.collineation
    assert np.array_equal(
        intermediate[np.ix_(collineation, collineation)], polar.source.adjacency
    )


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_xq_y_isomorphism(r: int) -> None:
    """Matrix A carries X_q onto Y_{q,2}(F_r) built from the hyperplane F_r."""
    tower = tower_for_q(r * r)
    s = tower.n // 2
    basis = default_basis(tower)
    (one, also_one), (gamma, gamma_r) = matrix_a(basis)
    assert (one, also_one) == (1, 1)
    assert gamma_r == tower.power(gamma, r) != gamma
    assert all(
        tower.power(x, r) == x for x in tower.fq_elements.tolist() if x < gamma
    )
    expected = y_qn(basis, linear_hyperplane(tower, s), s).graph
    target, image = xq_y_isomorphism(basis)
    assert target.directions.members == expected.directions.members
    xq = oval_graph_xq(basis).graph
    assert sorted(image.tolist()) == list(range(tower.order))
    assert set(image[xq.connection_set].tolist()) == set(
        expected.connection_set.tolist()
    )
    assert np.array_equal(expected.adjacency[np.ix_(image, image)], xq.adjacency)
    if r <= 3:
        assert isomorphic(xq, expected)
    with pytest.raises(InvalidInputError):
        xq_y_isomorphism(default_basis(tower_for_q(8)))


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_determinant_form(r: int) -> None:
    """C turns the hyperbolic form into x_1 y_2 - y_1 x_2."""
    tower = tower_for_q(r * r)
    s = tower.n // 2
    matrix = determinant_change_of_variables(tower)
    assert determinant(tower, matrix) != 0
    hyperbolic = hyperbolic_form(tower, s, 2)
    assert form_equivalence_check(hyperbolic, determinant_form(tower, s), matrix)


def test_extremal_to_oval_map(x9: PeisertGraph) -> None:
    """The extremal (4, 9) graph is the image of X_9 under an additive map."""
    g = extremal_construction(x9.tower).graph
    image = extremal_to_oval_map(g)
    assert np.array_equal(g.adjacency[np.ix_(image, image)], x9.adjacency)
    with pytest.raises(InvalidInputError):
        extremal_to_oval_map(paley_graph(x9.basis))


@pytest.mark.parametrize("q", [9, 16])
def test_extremal_vo_isomorphism(q: int) -> None:
    """Extremal graphs over square q are VO+(4, sqrt(q))."""
    g = extremal_construction(tower_for_q(q)).graph
    mapping = extremal_vo_isomorphism(g)
    target = vo_plus(2, round(q**0.5), g.tower).adjacency
    assert np.array_equal(target[np.ix_(mapping, mapping)], g.adjacency)


def test_decompose_cube_clique(extremal8: PeisertGraph) -> None:
    """Witness cliques over q = 8 are a F_2 + b F_2 + c F_2."""
    built = extremal_construction(extremal8.tower)
    a, b, c = decompose_cube_clique(built.graph, built.witness)
    tower = extremal8.tower
    assert tower.in_subfield(tower.div(b, a), 3)
    assert not tower.in_subfield(tower.div(c, a), 3)
    scalars = tower.subfield_elements(1)
    assert frozenset(span(tower, scalars, [a, b, c]).tolist()) == built.witness
    cliques = max_cliques_through_zero(extremal8)
    noncanonical = [clique for clique in cliques if not clique.canonical]
    assert len(noncanonical) == 7
    for clique in noncanonical:
        decompose_cube_clique(extremal8, clique.vertices)
    with pytest.raises(InvalidInputError):
        decompose_cube_clique(oval_graph_xq(default_basis(tower_for_q(9))).graph, [])


@pytest.mark.slow
def test_example_q32() -> None:
    """Both subspaces over F_1024 give type-(17, 32) graphs with q-cliques."""
    first, second = example_q32()
    for built in (first, second):
        assert built.graph.m == 17
        assert len(built.witness) == 32
        assert built.graph.is_clique(built.witness)
    assert first.graph.directions.members != second.graph.directions.members
    assert certificate(first.graph) != certificate(second.graph)
    assert not isomorphic(first.graph, second.graph)


def test_isomorphic_extremal_graphs_over_nine() -> None:
    """X_9 and the extremal construction agree up to isomorphism."""
    tower = tower_for_q(9)
    x9 = oval_graph_xq(default_basis(tower)).graph
    assert isomorphic(x9, extremal_construction(tower).graph)


@pytest.mark.slow
def test_cube_extremal_cliques() -> None:
    """Over q = 27 the extremal graph has 10 lines and 13 other q-cliques through 0."""
    g = extremal_construction(tower_for_q(27)).graph
    cliques = max_cliques_through_zero(g)
    noncanonical = [c for c in cliques if not c.canonical]
    assert len(cliques) - len(noncanonical) == 10
    assert len(noncanonical) == 13
    for clique in noncanonical:
        decompose_cube_clique(g, clique.vertices)


def _vo_form(r: int, tower_q: int) -> bytes:
    graph = vo_plus(2, r, tower_for_q(tower_q))
    colors = np.zeros(graph.order, dtype=np.int64)
    for clique in graph.maximal_cliques_through_zero():
        colors[sorted(clique)] += 1
    colors[0] = -1
    return canonical_labeling(graph.adjacency, colors=colors).canonical_form


@pytest.mark.parametrize(
    "q",
    [
        4,
        9,
        pytest.param(16, marks=pytest.mark.slow),
        pytest.param(25, marks=pytest.mark.slow),
    ],
)
def test_square_families_share_a_certificate(q: int) -> None:
    """X_q, Y_{q,2}(F_r) over two hyperplane cosets, the extremal graph and VO+."""
    r = round(q**0.5)
    tower = tower_for_q(q)
    basis = default_basis(tower)
    s = tower.n // 2
    xq = oval_graph_xq(basis).graph
    expected = certificate(xq)
    hyperplane = linear_hyperplane(tower, s)
    shifted = tower.add_array(hyperplane, tower.epsilon)
    others = [
        extremal_construction(tower).graph,
        y_qn(basis, hyperplane, s).graph,
        y_qn(basis, shifted, s).graph,
    ]
    for g in others:
        assert certificate(g) == expected
    cliques = max_cliques_through_zero(xq)
    xq_form = canonical_labeling(
        xq.adjacency, colors=clique_coloring(xq, cliques)
    ).canonical_form
    assert _vo_form(r, q) == xq_form
