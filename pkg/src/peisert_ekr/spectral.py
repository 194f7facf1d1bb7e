"""Eigenfunctions of minimum support on the oval graphs X_q."""

from __future__ import annotations

import dataclasses
import enum
import functools
import logging
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt
import pydantic

from .cliques import Clique, CliqueKind, classify_clique
from .constructions import cq_elements, oval
from .errors import ImprimitiveGraphError, InconsistencyError, InvalidInputError
from .fields import Element, square_root
from .graph import PeisertGraph

logger = logging.getLogger(__name__)


class WitnessKind(enum.StrEnum):
    """Shape of an induced subgraph giving rise to an eigenfunction."""

    ISOLATED_CLIQUE_PAIR = "isolated_clique_pair"
    COMPLETE_BIPARTITE = "complete_bipartite"


class EigenfunctionReport(pydantic.BaseModel):
    """Summary of a verified eigenfunction."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    eigenvalue: int = pydantic.Field(description="Eigenvalue found by substitution.")
    support_size: int = pydantic.Field(
        description="Number of vertices with a nonzero value."
    )
    bound: int = pydantic.Field(
        description="Weight-distribution bound for the eigenvalue."
    )
    tight: bool = pydantic.Field(
        description="Whether the support size meets the bound."
    )
    witness_kind: WitnessKind = pydantic.Field(
        description="Induced shape of the support."
    )
    values: dict[int, int] | None = pydantic.Field(
        default=None, description="Nonzero values by vertex index, when requested."
    )


@dataclasses.dataclass(frozen=True, eq=False)
class WitnessSubgraph:
    """Two disjoint vertex sets whose signed indicator may be an eigenfunction."""

    t0: frozenset[Element]
    t1: frozenset[Element]
    kind: WitnessKind

    def indicator(self, order: int) -> npt.NDArray[np.int64]:
        """+1 on T_0, -1 on T_1, 0 elsewhere."""
        values = np.zeros(order, dtype=np.int64)
        values[sorted(self.t0)] = 1
        values[sorted(self.t1)] = -1
        return values


@dataclasses.dataclass(frozen=True, eq=False)
class Eigenfunction:
    """A {-1, 0, 1}-valued eigenfunction verified at every vertex.

    Attributes:
        graph: The graph.
        eigenvalue: The eigenvalue observed by substitution.
        values: Vertex-indexed values.
        witness: The induced subgraph the function comes from.
    """

    graph: PeisertGraph
    eigenvalue: int
    values: npt.NDArray[np.int64]
    witness: WitnessSubgraph

    @functools.cached_property
    def support(self) -> frozenset[Element]:
        """Vertices with a nonzero value."""
        return frozenset(np.flatnonzero(self.values).tolist())

    def report(self, *, include_values: bool = False) -> EigenfunctionReport:
        """Report against the weight-distribution bound."""
        positive, negative = wdb_bounds(self.graph.m, self.graph.q)
        bound = positive if self.eigenvalue > 0 else negative
        values = None
        if include_values:
            values = {v: int(self.values[v]) for v in sorted(self.support)}
        return EigenfunctionReport(
            eigenvalue=self.eigenvalue,
            support_size=len(self.support),
            bound=bound,
            tight=len(self.support) == bound,
            witness_kind=self.witness.kind,
            values=values,
        )


def wdb_bounds(m: int, q: int) -> tuple[int, int]:
    """Minimum supports ``(2 (q - m + 1), 2 m)`` for the two non-principal eigenvalues.

    Raises:
        ImprimitiveGraphError: Unless ``2 <= m <= q - 1``.
    """
    if not 2 <= m <= q - 1:
        raise ImprimitiveGraphError(f"type ({m}, {q}) is imprimitive")
    return 2 * (q - m + 1), 2 * m


def eigenvalue_of(g: PeisertGraph, values: npt.ArrayLike) -> int | None:
    """The theta with ``theta f(v) = sum_{u ~ v} f(u)`` at every vertex, if any."""
    f = np.asarray(values, dtype=np.int64)
    if not f.any():
        raise InvalidInputError("the zero function is not an eigenfunction")
    sums = g.adjacency.astype(np.int64) @ f
    anchor = int(np.flatnonzero(f)[0])
    theta, remainder = divmod(int(sums[anchor]), int(f[anchor]))
    if remainder or not np.array_equal(sums, theta * f):
        return None
    return theta


def clique_cq(g: PeisertGraph) -> Clique:
    """``C_q = {gamma^sqrt(q) + gamma beta}``, checked against every canonical clique.

    Raises:
        InvalidInputError: For non-square q.
        InconsistencyError: If C_q is not a non-canonical clique or meets a canonical
            clique through 0 in other than sqrt(q) points.
    """
    r = square_root(g.q)
    members = cq_elements(g.basis).tolist()
    if not g.is_clique(members):
        raise InconsistencyError("C_q is not a clique")
    clique = classify_clique(g, members)
    if clique.kind is CliqueKind.CANONICAL:
        raise InconsistencyError("C_q is canonical")
    tower = g.basis.tower
    in_cq = np.zeros(g.order, dtype=bool)
    in_cq[members] = True
    for d in g.directions.sorted_members:
        line = tower.mul_array(tower.fq_units, g.basis.direction_element(d))
        if int(in_cq[line].sum()) != r - 1:
            raise InconsistencyError(f"C_q meets the line of direction {d} badly")
    return clique


def _canonical_through_zero(
    g: PeisertGraph, vertices: Iterable[Element]
) -> frozenset[int]:
    members = frozenset(int(v) for v in vertices)
    if 0 not in members or len(members) != g.q:
        raise InvalidInputError("C must be a q-clique through 0")
    if not classify_clique(g, members).canonical:
        raise InvalidInputError("C must be canonical")
    return members


def _checked_eigenfunction(
    g: PeisertGraph, witness: WitnessSubgraph, expected: int
) -> Eigenfunction:
    values = witness.indicator(g.order)
    theta = eigenvalue_of(g, values)
    if theta is None:
        raise InconsistencyError(f"{witness.kind} indicator is not an eigenfunction")
    if theta != expected:
        logger.warning("observed eigenvalue %d differs from %d", theta, expected)
    if int(values.sum()) != 0:
        raise InconsistencyError("eigenfunction is not orthogonal to the constants")
    return Eigenfunction(g, theta, values, witness)


def build_f1(g: PeisertGraph, clique: Iterable[Element], index: int) -> Eigenfunction:
    """+1 on ``C - D``, -1 on ``eps^i C_q - D`` with ``D = C n eps^i C_q``.

    Args:
        g: An oval graph X_q.
        clique: A canonical clique through 0.
        index: The power i, ``0 <= i <= sqrt(q)``.

    Raises:
        InvalidInputError: For bad arguments.
        InconsistencyError: If ``|D| != sqrt(q)`` or the function fails
            substitution.
    """
    r = square_root(g.q)
    if not 0 <= index <= r:
        raise InvalidInputError(f"index must lie in 0..{r}")
    tower = g.basis.tower
    c = _canonical_through_zero(g, clique)
    shift = tower.power(tower.epsilon, index)
    scaled = frozenset(tower.mul_array(cq_elements(g.basis), shift).tolist())
    common = c & scaled
    if len(common) != r:
        raise InconsistencyError(f"|C n eps^i C_q| = {len(common)}, expected {r}")
    witness = WitnessSubgraph(
        c - common, scaled - common, WitnessKind.ISOLATED_CLIQUE_PAIR
    )
    if not verify_witness(witness, g):
        raise InconsistencyError(
            "C - D and eps^i C_q - D are not an isolated clique pair"
        )
    return _checked_eigenfunction(g, witness, g.q - r - 1)


def build_f2(g: PeisertGraph) -> Eigenfunction:
    """+1 on the oval Q and -1 on ``Q beta``.

    Raises:
        InvalidInputError: For non-square q.
        InconsistencyError: If the parts do not induce ``K_{r+1, r+1}``.
    """
    r = square_root(g.q)
    tower = g.basis.tower
    q_oval = oval(tower)
    t0 = frozenset(q_oval.tolist())
    t1 = frozenset(tower.mul_array(q_oval, g.basis.beta).tolist())
    witness = WitnessSubgraph(t0, t1, WitnessKind.COMPLETE_BIPARTITE)
    if not verify_witness(witness, g):
        raise InconsistencyError(
            "Q and Q beta do not induce a complete bipartite graph"
        )
    return _checked_eigenfunction(g, witness, -(r + 1))


def verify_witness(w: WitnessSubgraph, g: PeisertGraph) -> bool:
    """Check the induced shape, the balance outside and the eigen-equation.

    Raises:
        InvalidInputError: If the parts overlap or are empty.
    """
    if not w.t0 or not w.t1 or w.t0 & w.t1:
        raise InvalidInputError("witness parts must be nonempty and disjoint")
    t0, t1 = sorted(w.t0), sorted(w.t1)
    adjacency = g.adjacency
    within0 = adjacency[np.ix_(t0, t0)]
    within1 = adjacency[np.ix_(t1, t1)]
    cross = adjacency[np.ix_(t0, t1)]
    off0 = ~np.eye(len(t0), dtype=bool)
    off1 = ~np.eye(len(t1), dtype=bool)
    if w.kind is WitnessKind.ISOLATED_CLIQUE_PAIR:
        shaped = within0[off0].all() and within1[off1].all() and not cross.any()
    else:
        shaped = not within0.any() and not within1.any() and cross.all()
    if not shaped or len(t0) != len(t1):
        return False
    outside = np.ones(g.order, dtype=bool)
    outside[t0] = outside[t1] = False
    counts0 = adjacency[np.ix_(outside, t0)].sum(axis=1)
    counts1 = adjacency[np.ix_(outside, t1)].sum(axis=1)
    if not np.array_equal(counts0, counts1):
        return False
    return eigenvalue_of(g, w.indicator(g.order)) is not None
