"""Isomorphism classes of Peisert-type graphs, census tables and extremal values."""

from __future__ import annotations

import collections
import concurrent.futures
import dataclasses
import hashlib
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np
import pydantic

from . import constructions
from .cliques import DEFAULT_MAX_NODES as DEFAULT_CLIQUE_NODES
from .cliques import Clique, max_cliques_through_zero, strict_ekr
from .errors import BudgetExceededError, InvalidInputError
from .fields import (
    FieldTower,
    largest_proper_divisor,
    make_tower,
    prime_power,
    square_root,
)
from .graph import PeisertGraph, build_graph, complement
from .labeling import DEFAULT_MAX_NODES as DEFAULT_LABELING_NODES
from .labeling import canonical_labeling
from .plane import (
    DirectionSet,
    TowerBasis,
    default_basis,
    pgammal_equivalent,
    pgammal_orbit,
)

logger = logging.getLogger(__name__)

CENSUS_M_RANGES: dict[int, tuple[int, int]] = {
    4: (3, 4),
    5: (3, 5),
    7: (3, 6),
    8: (3, 6),
}
"""Inclusive m ranges of the published census tables that do not follow 3..q-2."""

DEFAULT_CENSUS_Q = 13


def census_m_range(q: int) -> range:
    """The m values a census table for q lists."""
    low, high = CENSUS_M_RANGES.get(q, (3, q - 2))
    return range(low, high + 1)


def closed_form_extremal_type(q: int) -> int:
    """Smallest m admitting a type-(m, q) graph without the strict-EKR property.

    ``(p + 3) / 2`` for an odd prime p, otherwise ``p^(n-k) + 1`` with k the largest
    proper divisor of n.
    """
    p, n = prime_power(q)
    if n == 1:
        if p == 2:
            raise InvalidInputError("q = 2 has no extremal type")
        return (p + 3) // 2
    return p ** (n - largest_proper_divisor(n)) + 1


def enumerate_types(basis: TowerBasis, m: int) -> list[DirectionSet]:
    """One direction set per PGammaL(2,q)-orbit of m-subsets of PG(1,q).

    For m >= 3 every orbit meets a set containing ``[0:1], [1:0], [1:1]``, so only
    those are generated; a whole orbit is marked seen once its first member shows
    up. Representatives are the orbit minima, in increasing order.
    """
    tower = basis.tower
    size = tower.q + 1
    if not 1 <= m <= tower.q:
        raise InvalidInputError(f"m={m} must lie in 1..{tower.q}")
    if m < 3:
        first = tuple(range(m))
        return [DirectionSet(basis, frozenset(first))]
    seen: set[tuple[int, ...]] = set()
    representatives: list[tuple[int, ...]] = []
    for rest in itertools.combinations(range(3, size), m - 3):
        key = (0, 1, 2, *rest)
        if key in seen:
            continue
        orbit = pgammal_orbit(tower, key)
        seen |= orbit
        representatives.append(min(orbit))
    logger.info("type (%d, %d): %d PGammaL orbits", m, tower.q, len(representatives))
    return [DirectionSet(basis, frozenset(r)) for r in sorted(representatives)]


CliqueInvariants = tuple[int, int, tuple[tuple[int, int], ...]]


def _invariants_of(cliques: Sequence[Clique]) -> CliqueInvariants:
    sizes = collections.Counter(
        len(a.vertices & b.vertices) for a, b in itertools.combinations(cliques, 2)
    )
    canonical = sum(c.canonical for c in cliques)
    return len(cliques), canonical, tuple(sorted(sizes.items()))


def clique_invariants(
    g: PeisertGraph, *, max_nodes: int = DEFAULT_CLIQUE_NODES
) -> CliqueInvariants:
    """Maximum cliques through 0, how many are canonical, and their meeting sizes.

    The last entry is the multiset of pairwise intersection sizes as sorted
    ``(size, count)`` pairs.
    """
    return _invariants_of(max_cliques_through_zero(g, max_nodes=max_nodes))


def clique_coloring(g: PeisertGraph, cliques: Iterable[Clique]) -> np.ndarray:
    """Vertex colours from the maximum cliques through 0.

    Vertex v gets the number of the cliques containing it and 0 gets a colour of
    its own. Peisert-type graphs are vertex-transitive, so an isomorphism can be
    taken to fix 0 and then preserves this colouring.
    """
    colors = np.zeros(g.order, dtype=np.int64)
    for clique in cliques:
        colors[list(clique.vertices)] += 1
    colors[0] = -1
    return colors


@dataclasses.dataclass(frozen=True)
class Certificate:
    """Isomorphism-class certificate of a Peisert-type graph.

    Equal certificates mean isomorphic graphs: the canonical form is the
    adjacency matrix under a canonical labeling, prefixed by cheap invariants.
    """

    q: int
    m: int
    invariants: CliqueInvariants
    canonical_form: bytes = dataclasses.field(repr=False)

    @property
    def digest(self) -> str:
        """Short hexadecimal fingerprint for reports."""
        payload = repr(self.invariants).encode() + self.canonical_form
        return hashlib.sha256(payload).hexdigest()[:16]


def known_automorphisms(g: PeisertGraph) -> list[np.ndarray]:
    """Translations by an F_p-basis of F_{q^2} and multiplication by epsilon."""
    tower = g.basis.tower
    vertices = np.arange(g.order)
    perms = [tower.add_array(vertices, tower.p**i) for i in range(tower.degree)]
    perms.append(tower.mul_array(vertices, tower.epsilon))
    return perms


def _small_side(g: PeisertGraph) -> PeisertGraph:
    return complement(g) if 2 * g.m > g.q + 1 else g


def certificate(
    g: PeisertGraph,
    *,
    max_clique_nodes: int = DEFAULT_CLIQUE_NODES,
    max_labeling_nodes: int = DEFAULT_LABELING_NODES,
) -> Certificate:
    """Canonical certificate of a graph.

    The maximum cliques through 0 come from whichever of the graph and its
    complement has fewer directions; complements determine each other, so the
    invariants and the colouring seeding the labeling stay isomorphism invariant.

    Raises:
        BudgetExceededError: If either search runs out of budget.
    """
    small = _small_side(g)
    cliques = max_cliques_through_zero(small, max_nodes=max_clique_nodes)
    labeling = canonical_labeling(
        g.adjacency,
        colors=clique_coloring(small, cliques),
        automorphisms=known_automorphisms(g),
        max_nodes=max_labeling_nodes,
    )
    return Certificate(g.q, g.m, _invariants_of(cliques), labeling.canonical_form)


def isomorphic(
    g1: PeisertGraph,
    g2: PeisertGraph,
    *,
    max_clique_nodes: int = DEFAULT_CLIQUE_NODES,
    max_labeling_nodes: int = DEFAULT_LABELING_NODES,
) -> bool:
    """Decide isomorphism of two Peisert-type graphs.

    Projectively equivalent direction sets over the same tower give isomorphic
    graphs whatever the bases; otherwise certificates decide.
    """
    if (g1.m, g1.q) != (g2.m, g2.q):
        return False
    if g1.basis.tower is g2.basis.tower and pgammal_equivalent(
        g1.basis.tower, g1.directions.members, g2.directions.members
    ):
        return True
    budgets = {
        "max_clique_nodes": max_clique_nodes,
        "max_labeling_nodes": max_labeling_nodes,
    }
    return certificate(g1, **budgets) == certificate(g2, **budgets)


def isomorphism_map(
    g1: PeisertGraph, g2: PeisertGraph, *, max_nodes: int = DEFAULT_LABELING_NODES
) -> np.ndarray | None:
    """An explicit vertex bijection from g1 onto g2, or None if not isomorphic."""
    if (g1.m, g1.q) != (g2.m, g2.q):
        return None
    first = canonical_labeling(
        g1.adjacency, automorphisms=known_automorphisms(g1), max_nodes=max_nodes
    )
    second = canonical_labeling(
        g2.adjacency, automorphisms=known_automorphisms(g2), max_nodes=max_nodes
    )
    if first.canonical_form != second.canonical_form:
        return None
    mapping = np.empty(g1.order, dtype=np.int64)
    mapping[first.labeling] = second.labeling
    return mapping


class CensusRow(pydantic.BaseModel):
    """Counts of pairwise non-isomorphic type-(m, q) graphs."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    q: int = pydantic.Field(description="Order of F_q.")
    m: int = pydantic.Field(description="Number of cosets in the connection set.")
    n_graphs: int = pydantic.Field(description="Pairwise non-isomorphic graphs.")
    n_strict_ekr: int = pydantic.Field(
        description="Graphs with the strict-EKR property."
    )
    n_without: int = pydantic.Field(
        description="Graphs without the strict-EKR property."
    )
    complete: bool = pydantic.Field(
        default=True,
        description="False when a budget ran out; counts are lower bounds.",
    )


@dataclasses.dataclass(frozen=True)
class _Analysis:
    members: tuple[int, ...]
    invariants: CliqueInvariants | None
    colors: np.ndarray | None = dataclasses.field(default=None, compare=False)


def _tower_key(tower: FieldTower) -> tuple:
    return (tower.p, tower.n, tower.modulus, tower.fq_modulus, tower.fq2_modulus)


def _rebuild(key: tuple, beta: int) -> TowerBasis:
    p, n, modulus, fq_modulus, fq2_modulus = key
    tower = make_tower(
        p, n, modulus=modulus, fq_modulus=fq_modulus, fq2_modulus=fq2_modulus
    )
    return TowerBasis(tower, beta)


def _analyse(basis: TowerBasis, members: tuple[int, ...], max_nodes: int) -> _Analysis:
    graph = build_graph(basis, members)
    try:
        cliques = max_cliques_through_zero(graph, max_nodes=max_nodes)
    except BudgetExceededError:
        return _Analysis(members, None)
    return _Analysis(members, _invariants_of(cliques), clique_coloring(graph, cliques))


def _analyse_task(task: tuple[tuple, int, tuple[int, ...], int]) -> _Analysis:
    key, beta, members, max_nodes = task
    return _analyse(_rebuild(key, beta), members, max_nodes)


def _analyse_all(
    basis: TowerBasis, sets: Sequence[tuple[int, ...]], max_nodes: int, workers: int
) -> list[_Analysis]:
    if workers <= 1 or len(sets) <= 1:
        return [_analyse(basis, members, max_nodes) for members in sets]
    key = _tower_key(basis.tower)
    tasks = [(key, basis.beta, members, max_nodes) for members in sets]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_analyse_task, tasks))


def _form(
    basis: TowerBasis,
    members: tuple[int, ...],
    colors: np.ndarray | None,
    max_nodes: int,
) -> bytes:
    graph = build_graph(basis, members)
    return canonical_labeling(
        graph.adjacency,
        colors=colors,
        automorphisms=known_automorphisms(graph),
        max_nodes=max_nodes,
    ).canonical_form


def _new_classes(
    basis: TowerBasis,
    classes: Sequence[tuple[int, ...]],
    unknown: Sequence[tuple[int, ...]],
    max_nodes: int,
) -> list[tuple[int, ...]]:
    """Representatives without clique data that none of ``classes`` matches.

    The comparison uses uncoloured forms throughout. Once a labeling runs out of
    budget no further representative is accepted, so the result only undercounts.
    """
    added: list[tuple[int, ...]] = []
    try:
        forms = {_form(basis, members, None, max_nodes) for members in classes}
        for members in unknown:
            form = _form(basis, members, None, max_nodes)
            if form not in forms:
                forms.add(form)
                added.append(members)
    except BudgetExceededError:
        logger.warning("labeling budget exhausted; %d orbits unresolved", len(unknown))
    if not classes and not added:
        added.append(unknown[0])
    return added


def census_row(
    basis: TowerBasis,
    m: int,
    *,
    max_clique_nodes: int = DEFAULT_CLIQUE_NODES,
    max_labeling_nodes: int = DEFAULT_LABELING_NODES,
    workers: int = 1,
) -> CensusRow:
    """Classify every type-(m, q) graph over a tower.

    Orbit representatives are merged when their clique invariants and then their
    certificates agree. Rows with m > (q + 1) / 2 are merged through the
    complements, which have few maximum cliques; the strict-EKR decision is always
    made on the graph itself. Representatives whose clique search runs out of
    budget are only counted when their canonical form is new, so an incomplete
    row never overcounts.
    """
    tower = basis.tower
    q = tower.q
    representatives = enumerate_types(basis, m)
    flip = 2 * m > q + 1
    sides = [
        (r.complement() if flip else r).sorted_members for r in representatives
    ]
    complete = True
    analyses = _analyse_all(basis, sides, max_clique_nodes, workers)

    groups: dict[CliqueInvariants, list[_Analysis]] = collections.defaultdict(list)
    unknown: list[tuple[int, ...]] = []
    for analysis in analyses:
        if analysis.invariants is None:
            unknown.append(analysis.members)
        else:
            groups[analysis.invariants].append(analysis)

    classes: list[tuple[int, ...]] = []
    for group in groups.values():
        if len(group) == 1:
            classes.append(group[0].members)
            continue
        seen: dict[bytes, tuple[int, ...]] = {}
        try:
            for analysis in group:
                form = _form(
                    basis, analysis.members, analysis.colors, max_labeling_nodes
                )
                seen.setdefault(form, analysis.members)
        except BudgetExceededError:
            complete = False
            seen = seen or {b"": group[0].members}
        classes.extend(seen.values())
    if unknown:
        complete = False
        classes.extend(_new_classes(basis, classes, unknown, max_labeling_nodes))

    n_strict = n_without = 0
    for members in sorted(classes):
        side = DirectionSet(basis, frozenset(members))
        graph = build_graph(basis, side.complement() if flip else side)
        try:
            holds, _ = strict_ekr(graph, max_nodes=max_clique_nodes)
        except BudgetExceededError:
            complete = False
            continue
        if holds:
            n_strict += 1
        else:
            n_without += 1
    row = CensusRow(
        q=q,
        m=m,
        n_graphs=len(classes),
        n_strict_ekr=n_strict,
        n_without=n_without,
        complete=complete,
    )
    logger.info("census row %s", row)
    return row


def census(
    q: int,
    m_values: Iterable[int] | None = None,
    *,
    tower: FieldTower | None = None,
    max_q: int = DEFAULT_CENSUS_Q,
    max_clique_nodes: int = DEFAULT_CLIQUE_NODES,
    max_labeling_nodes: int = DEFAULT_LABELING_NODES,
    workers: int = 1,
) -> list[CensusRow]:
    """Census rows for q, by default over the published m range.

    Raises:
        InvalidInputError: If q exceeds ``max_q``.
    """
    if q > max_q:
        raise InvalidInputError(
            f"census for q={q} exceeds the cap {max_q}; raise it to proceed"
        )
    if tower is None:
        p, n = prime_power(q)
        tower = make_tower(p, n)
    basis = default_basis(tower)
    values = census_m_range(q) if m_values is None else sorted(set(m_values))
    return [
        census_row(
            basis,
            m,
            max_clique_nodes=max_clique_nodes,
            max_labeling_nodes=max_labeling_nodes,
            workers=workers,
        )
        for m in values
    ]


def extremal_values_from_rows(
    rows: Iterable[CensusRow],
) -> tuple[int | None, int | None]:
    """``(e_q, E_q)`` read off census rows; m = 1, 2 always have strict-EKR."""
    rows = list(rows)
    without = [r.m for r in rows if r.n_without > 0]
    strict = [r.m for r in rows if r.n_strict_ekr > 0] + [1, 2]
    return (min(without) if without else None), max(strict)


def extremal_values(q: int, **kwargs: Any) -> tuple[int | None, int | None]:
    """``(e_q, E_q)`` from a census over every m in 3..q."""
    rows = census(q, range(3, q + 1), **kwargs)
    return extremal_values_from_rows(rows)


def verify_extremal_witness(tower: FieldTower) -> int:
    """Check the closed-form extremal type by building a witness graph.

    Returns:
        The extremal type, after confirming that the witness has that many
        directions and fails the strict-EKR property.
    """
    expected = closed_form_extremal_type(tower.q)
    if tower.n == 1:
        built = constructions.ls_graph(tower.p)
    else:
        built = constructions.extremal_construction(tower)
    if built.graph.m != expected:
        raise InvalidInputError(f"witness has type ({built.graph.m}, {tower.q})")
    if not built.graph.is_clique(built.witness) or len(built.witness) != tower.q:
        raise InvalidInputError("witness clique failed verification")
    holds, _ = strict_ekr(built.graph)
    if holds:
        raise InvalidInputError("witness graph has the strict-EKR property")
    return expected


@dataclasses.dataclass(frozen=True)
class ExtremalCount:
    """Raw enumeration of extremal connection sets.

    Attributes:
        subspaces: Subspaces found with the extremal number of directions.
        direction_sets: Distinct direction sets they determine, sorted.
    """

    subspaces: int
    direction_sets: tuple[tuple[int, ...], ...]


def _subspaces(tower: FieldTower, sub: int, dimension: int) -> Iterable[np.ndarray]:
    """Every ``dimension``-dimensional F_{p^sub}-subspace of F_{q^2}, as an array."""
    scalars = tower.subfield_elements(sub)
    ambient = tower.degree // sub
    basis = [tower.exp(i) for i in range(ambient)]
    for pivots in itertools.combinations(range(ambient), dimension):
        free = [
            (i, j)
            for i, pivot in enumerate(pivots)
            for j in range(pivot + 1, ambient)
            if j not in pivots
        ]
        for values in itertools.product(scalars.tolist(), repeat=len(free)):
            rows = [basis[pivot] for pivot in pivots]
            for (i, j), value in zip(free, values, strict=True):
                rows[i] = tower.add(rows[i], tower.mul(value, basis[j]))
            span = np.zeros(1, dtype=np.int64)
            for row in rows:
                multiples = tower.mul_array(scalars, row)
                span = tower.add_array(span[:, None], multiples[None, :]).ravel()
            yield span


def extremal_connection_sets(tower: FieldTower) -> ExtremalCount:
    """Enumerate extremal connection sets through their witness subspaces.

    Non-canonical maximum cliques of extremal graphs are F_{p^k}-subspaces with k
    the largest proper divisor of n, so the extremal graphs are exactly the
    ``(V - 0) F_q^*`` for subspaces V of the right size determining
    ``p^(n-k) + 1`` directions.

    Raises:
        InvalidInputError: For prime q.
    """
    if tower.n == 1:
        raise InvalidInputError("prime q has no subspace description of extremal sets")
    basis = default_basis(tower)
    k = largest_proper_divisor(tower.n)
    wanted = closed_form_extremal_type(tower.q)
    found = 0
    distinct: set[tuple[int, ...]] = set()
    for span in _subspaces(tower, k, tower.n // k):
        directions = np.unique(basis.direction_table[span[span != 0]])
        if len(directions) == wanted:
            found += 1
            distinct.add(tuple(directions.tolist()))
    logger.info(
        "q=%d: %d extremal subspaces, %d connection sets",
        tower.q,
        found,
        len(distinct),
    )
    return ExtremalCount(found, tuple(sorted(distinct)))


def type3_embedding_check(tower: FieldTower) -> bool:
    """True iff every 3-set of directions lies in exactly one extremal direction set.

    Only meaningful for square q, where extremal sets have sqrt(q) + 1 members.
    """
    r = square_root(tower.q)
    sets = extremal_connection_sets(tower).direction_sets
    counts = collections.Counter(
        triple for members in sets for triple in itertools.combinations(members, 3)
    )
    total = math.comb(tower.q + 1, 3)
    return (
        len(sets) * math.comb(r + 1, 3) == total
        and len(counts) == total
        and set(counts.values()) == {1}
    )


def _cell(value: int, complete: bool) -> str:
    if not complete:
        return f"≥{value}"
    return "-" if value == 0 else str(value)


def format_census_table(q: int, rows: Sequence[CensusRow]) -> str:
    """Human table laid out like the published census: ``-`` marks zero."""
    header = ["m", *(str(r.m) for r in rows)]
    lines = [
        header,
        ["#Graphs", *(_cell(r.n_graphs, r.complete) for r in rows)],
        ["strict-EKR", *(_cell(r.n_strict_ekr, r.complete) for r in rows)],
        ["without", *(_cell(r.n_without, r.complete) for r in rows)],
    ]
    widths = [max(len(line[i]) for line in lines) for i in range(1, len(header))]
    out = [f"q = {q}"]
    for label, *cells in lines:
        body = "".join(f" | {cell:>{w}}" for cell, w in zip(cells, widths, strict=True))
        out.append(f"{label:<10}{body}")
    return "\n".join(out) + "\n"


def format_census_records(rows: Iterable[CensusRow]) -> str:
    """One JSON record per row."""
    return "".join(row.model_dump_json() + "\n" for row in rows)
