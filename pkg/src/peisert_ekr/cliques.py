"""Maximum and maximal cliques through 0, strict-EKR and clique statistics."""

from __future__ import annotations

import dataclasses
import enum
import logging
from collections.abc import Iterable, Iterator, Sequence

import numpy as np
import numpy.typing as npt

from .errors import (
    BudgetExceededError,
    InconsistencyError,
    InvalidInputError,
    NotDelsarteCliqueError,
)
from .fields import Element, square_root
from .graph import PeisertGraph
from .plane import directions_of_elements

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 5_000_000


class CliqueKind(enum.StrEnum):
    """Classification of a clique through 0."""

    CANONICAL = "canonical"
    NONCANONICAL_MAXIMUM = "noncanonical_maximum"
    MAXIMAL_SUBMAXIMUM = "maximal_submaximum"


@dataclasses.dataclass(frozen=True)
class Clique:
    """A clique containing 0 with its determined directions and kind."""

    vertices: frozenset[Element]
    directions: frozenset[int]
    kind: CliqueKind

    @property
    def size(self) -> int:
        """Number of vertices."""
        return len(self.vertices)

    @property
    def sorted_vertices(self) -> tuple[Element, ...]:
        """Vertices in index order."""
        return tuple(sorted(self.vertices))

    @property
    def canonical(self) -> bool:
        """True for a line through 0."""
        return self.kind is CliqueKind.CANONICAL


def classify_clique(g: PeisertGraph, vertices: Iterable[Element]) -> Clique:
    """Verify a clique through 0 and classify it.

    Raises:
        InvalidInputError: If the set misses 0 or is not a clique.
    """
    members = frozenset(int(v) for v in vertices)
    if 0 not in members:
        raise InvalidInputError("the clique must contain 0")
    if not g.is_clique(members):
        raise InvalidInputError("the vertex set is not a clique")
    directions = directions_of_elements(g.basis, members)
    if len(members) < g.q:
        kind = CliqueKind.MAXIMAL_SUBMAXIMUM
    elif len(members) > g.q:
        raise InconsistencyError(f"clique of size {len(members)} exceeds q={g.q}")
    elif len(directions) == 1:
        kind = CliqueKind.CANONICAL
    else:
        kind = CliqueKind.NONCANONICAL_MAXIMUM
    return Clique(members, directions, kind)


def _sorted_cliques(cliques: Iterable[Clique]) -> list[Clique]:
    return sorted(cliques, key=lambda c: c.sorted_vertices)


class _FunctionSearch:
    """Maximum cliques through 0 as graphs of functions F_q -> F_q.

    A direction ``d`` missing from the graph becomes the vertical axis: with ``u`` of
    direction d and ``w`` of another direction, every q-clique through 0 is
    ``{x w + f(x) u}`` for a function f with ``f(0) = 0`` whose difference quotients
    are allowed slopes. Columns run through ``0, 1, eps, eps^2, ...`` and each
    column keeps a bitmask of values still compatible with the assigned ones.
    """

    def __init__(self, g: PeisertGraph, max_nodes: int) -> None:
        tower = g.basis.tower
        basis = g.basis
        self.graph = g
        self.max_nodes = max_nodes
        self.nodes = 0
        q = tower.q
        missing = min(set(range(q + 1)) - g.directions.members)
        self.u = basis.direction_element(missing)
        self.w = 1 if basis.direction_of(1) != missing else basis.beta

        fq = tower.fq_elements
        rank = basis.line.fq_rank
        candidates = tower.add_array(self.w, tower.mul_array(fq, self.u))
        allowed = np.isin(
            basis.direction_table[candidates], sorted(g.directions.members)
        )
        slopes = fq[allowed]

        self.columns = np.array(
            [0] + [tower.power(tower.epsilon, i) for i in range(q - 1)], dtype=np.int64
        )
        # table[dx][y]: values y + s dx over allowed slopes s, as a bitmask
        self.table: list[list[int]] = [[0] * q for _ in range(q)]
        weights = [1 << i for i in range(q)]
        for dx in fq[1:].tolist():
            shifts = tower.mul_array(slopes, dx)
            targets = rank[tower.add_array(fq[:, None], shifts[None, :])]
            self.table[int(rank[dx])] = [
                sum(weights[t] for t in set(row)) for row in targets.tolist()
            ]
        diffs = tower.sub_array(self.columns[None, :], self.columns[:, None])
        self.diff_rank: list[list[int]] = rank[diffs].tolist()
        self.fq = fq
        self.q = q

    def functions(self) -> Iterator[list[int]]:
        """Yield value ranks ``f(column)`` of every admissible function."""
        q = self.q
        zero_rank = 0
        start = [self.table[self.diff_rank[0][k]][zero_rank] for k in range(1, q)]
        values = [zero_rank] * q
        yield from self._extend(1, start, values)

    def _extend(
        self, j: int, domains: list[int], values: list[int]
    ) -> Iterator[list[int]]:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceededError("clique search budget exceeded", nodes=self.nodes)
        if j == self.q:
            yield list(values)
            return
        mask = domains[0]
        rest = range(j + 1, self.q)
        while mask:
            low = mask & -mask
            mask ^= low
            y = low.bit_length() - 1
            row = self.diff_rank[j]
            narrowed = [
                dom & self.table[row[k]][y]
                for dom, k in zip(domains[1:], rest, strict=True)
            ]
            if all(narrowed):
                values[j] = y
                yield from self._extend(j + 1, narrowed, values)

    def vertices(self, values: Sequence[int]) -> npt.NDArray[np.int64]:
        """Clique vertices ``x w + f(x) u`` of a function."""
        tower = self.graph.basis.tower
        fx = self.fq[np.asarray(values)]
        return tower.add_array(
            tower.mul_array(self.columns, self.w), tower.mul_array(fx, self.u)
        )

    def is_linear(self, values: Sequence[int]) -> bool:
        """True iff ``f(x) = s x`` for a single slope s."""
        tower = self.graph.basis.tower
        fx = self.fq[np.asarray(values[1:])]
        ratios = tower.div_array(fx, self.columns[1:])
        return len(set(ratios.tolist())) == 1


def max_cliques_through_zero(
    g: PeisertGraph, *, max_nodes: int = DEFAULT_MAX_NODES
) -> list[Clique]:
    """Every clique of size q containing 0, sorted by vertex sequence.

    Raises:
        BudgetExceededError: If the search visits more than ``max_nodes`` nodes;
            ``partial`` holds the cliques found so far.
    """
    search = _FunctionSearch(g, max_nodes)
    found: list[Clique] = []
    try:
        for values in search.functions():
            found.append(classify_clique(g, search.vertices(values).tolist()))
    except BudgetExceededError as exc:
        exc.partial = _sorted_cliques(found)
        raise
    logger.debug(
        "type (%d, %d): %d maximum cliques through 0 in %d nodes",
        g.m,
        g.q,
        len(found),
        search.nodes,
    )
    return _sorted_cliques(found)


def strict_ekr(
    g: PeisertGraph, *, max_nodes: int = DEFAULT_MAX_NODES
) -> tuple[bool, Clique | None]:
    """Decide the strict-EKR property, stopping at the first non-canonical clique.

    Returns:
        ``(True, None)`` when every maximum clique is canonical, otherwise
        ``(False, witness)``.
    """
    search = _FunctionSearch(g, max_nodes)
    for values in search.functions():
        if not search.is_linear(values):
            return False, classify_clique(g, search.vertices(values).tolist())
    return True, None


def _row_mask(row: npt.NDArray[np.bool_]) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def enumerate_maximal_cliques(
    neighbor_masks: Sequence[int], *, max_nodes: int = DEFAULT_MAX_NODES
) -> list[int]:
    """Maximal cliques of a graph given as neighbourhood bitmasks.

    Bron-Kerbosch with a pivot maximizing the candidates it covers.

    Returns:
        The cliques as bitmasks over local vertex indices.

    Raises:
        BudgetExceededError: After ``max_nodes`` recursive calls; ``partial``
            holds the cliques emitted so far.
    """
    found: list[int] = []
    nodes = 0

    def expand(clique: int, candidates: int, excluded: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceededError(
                "maximal clique budget exceeded", partial=list(found), nodes=nodes
            )
        if not candidates and not excluded:
            found.append(clique)
            return
        pool = candidates | excluded
        pivot, best = -1, -1
        while pool:
            low = pool & -pool
            pool ^= low
            v = low.bit_length() - 1
            cover = (candidates & neighbor_masks[v]).bit_count()
            if cover > best:
                pivot, best = v, cover
        branch = candidates & ~neighbor_masks[pivot]
        while branch:
            low = branch & -branch
            branch ^= low
            v = low.bit_length() - 1
            neighbors = neighbor_masks[v]
            expand(clique | low, candidates & neighbors, excluded & neighbors)
            candidates &= ~low
            excluded |= low

    expand(0, (1 << len(neighbor_masks)) - 1, 0)
    return found


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        mask ^= low
        yield low.bit_length() - 1


def maximal_cliques_through_zero(
    g: PeisertGraph, *, max_nodes: int = DEFAULT_MAX_NODES
) -> list[Clique]:
    """Every maximal clique containing 0, sorted by vertex sequence.

    The enumeration runs on the subgraph induced by the neighbourhood S of 0.

    Raises:
        BudgetExceededError: With ``partial`` holding the classified cliques
            found before the budget ran out.
    """
    tower = g.basis.tower
    s = g.connection_set
    local = g.in_connection_set[tower.sub_array(s[:, None], s[None, :])]
    masks = [_row_mask(row) for row in local]
    try:
        found = enumerate_maximal_cliques(masks, max_nodes=max_nodes)
    except BudgetExceededError as exc:
        exc.partial = _sorted_cliques(
            classify_clique(g, [0, *s[list(_bits(mask))].tolist()])
            for mask in exc.partial
        )
        raise
    return _sorted_cliques(
        classify_clique(g, [0, *s[list(_bits(mask))].tolist()]) for mask in found
    )


def nexus_check(g: PeisertGraph, c: Clique) -> int:
    """Constant number of neighbours an outside vertex has in a q-clique.

    Raises:
        InvalidInputError: If the clique does not have q vertices.
        NotDelsarteCliqueError: If the count varies or is zero.
    """
    if c.size != g.q:
        raise InvalidInputError(f"nexus needs a clique of size q={g.q}")
    tower = g.basis.tower
    inside = np.array(c.sorted_vertices, dtype=np.int64)
    outside = np.setdiff1d(np.arange(g.order), inside)
    differences = tower.sub_array(outside[:, None], inside[None, :])
    counts = g.in_connection_set[differences].sum(axis=1)
    values = sorted(set(counts.tolist()))
    if len(values) != 1:
        raise NotDelsarteCliqueError(f"outside vertices see {values} clique vertices")
    if values[0] == 0:
        raise NotDelsarteCliqueError("outside vertices have no neighbour in the clique")
    return values[0]


def intersection_profile(
    g: PeisertGraph, c1: Iterable[Element], c2: Iterable[Element]
) -> int:
    """Size of the intersection of a canonical and a non-canonical maximum clique.

    Both cliques must contain 0.

    Raises:
        InvalidInputError: If c1 is not canonical or c2 is not a non-canonical
            maximum clique.
        InconsistencyError: If a nonempty intersection does not have sqrt(q)
            vertices.
    """
    r = square_root(g.q)
    first, second = classify_clique(g, c1), classify_clique(g, c2)
    if not first.canonical:
        raise InvalidInputError(f"c1 is {first.kind}, expected a canonical clique")
    if second.kind is not CliqueKind.NONCANONICAL_MAXIMUM:
        raise InvalidInputError(
            f"c2 is {second.kind}, expected a non-canonical maximum clique"
        )
    common = len(first.vertices & second.vertices)
    if common and common != r:
        raise InconsistencyError(f"cliques meet in {common} vertices, expected {r}")
    return common


def baer_subarray_check(g: PeisertGraph, c: Clique) -> bool:
    """True iff every parallel class of the graph's lines meets c like a Baer subplane.

    For each direction of the graph, exactly sqrt(q) of its parallel lines must meet
    the clique, each in exactly sqrt(q) points.
    """
    r = square_root(g.q)
    tower = g.basis.tower
    first, second = g.basis.coordinates
    vertices = np.array(c.sorted_vertices, dtype=np.int64)
    a, b = first[vertices], second[vertices]
    for d in g.directions.sorted_members:
        da, db = g.basis.line.points[d]
        keys = tower.sub_array(tower.mul_array(a, db), tower.mul_array(b, da))
        _, counts = np.unique(keys, return_counts=True)
        if len(counts) != r or set(counts.tolist()) != {r}:
            return False
    return True
