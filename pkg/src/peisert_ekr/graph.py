"""Peisert-type graphs, their strongly regular parameters and spectra."""

from __future__ import annotations

import collections
import dataclasses
import functools
import logging
import random
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt
import pydantic

from .errors import InconsistencyError, InvalidInputError
from .fields import Element, FieldTower, IntArray
from .plane import DirectionSet, TowerBasis, directions_of_elements

logger = logging.getLogger(__name__)

MAX_DENSE_Q = 32


class SrgParams(pydantic.BaseModel):
    """Parameters of a strongly regular graph of type (m, q)."""

    model_config = pydantic.ConfigDict(
        populate_by_name=True, extra="forbid", frozen=True
    )

    v: int = pydantic.Field(description="Number of vertices.")
    k: int = pydantic.Field(description="Valency.")
    lambda_: int = pydantic.Field(
        alias="lambda", description="Common neighbours of adjacent vertices."
    )
    mu: int = pydantic.Field(description="Common neighbours of non-adjacent vertices.")
    primitive: bool = pydantic.Field(
        description="Whether the graph and its complement are connected."
    )


class Spectrum(pydantic.BaseModel):
    """Eigenvalues of a type-(m, q) graph with multiplicities."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    k: int = pydantic.Field(description="Principal eigenvalue (multiplicity 1).")
    r1: int = pydantic.Field(description="Positive non-principal eigenvalue q - m.")
    r1_multiplicity: int = pydantic.Field(description="Multiplicity of r1.")
    r2: int = pydantic.Field(description="Negative eigenvalue -m.")
    r2_multiplicity: int = pydantic.Field(description="Multiplicity of r2.")


def srg_parameters(m: int, q: int) -> SrgParams:
    """Closed-form strongly regular parameters of a type-(m, q) graph."""
    if not 1 <= m <= q:
        raise InvalidInputError(f"type ({m}, {q}) needs 1 <= m <= q")
    return SrgParams(
        v=q * q,
        k=m * (q - 1),
        lambda_=(m - 1) * (m - 2) + q - 2,
        mu=m * (m - 1),
        primitive=2 <= m <= q - 1,
    )


def eigenvalues_of_type(m: int, q: int) -> Spectrum:
    """Eigenvalues of a type-(m, q) graph."""
    if not 1 <= m <= q:
        raise InvalidInputError(f"type ({m}, {q}) needs 1 <= m <= q")
    k = m * (q - 1)
    return Spectrum(
        k=k, r1=q - m, r1_multiplicity=k, r2=-m, r2_multiplicity=q * q - 1 - k
    )


@dataclasses.dataclass(frozen=True, eq=False)
class PeisertGraph:
    """The Cayley graph on F_{q^2} whose connection set is a union of F_q^*-cosets.

    Attributes:
        basis: The basis ``{1, beta}`` the directions refer to.
        directions: One direction per coset in the connection set.
        label: Free-form name used in reports.
    """

    basis: TowerBasis
    directions: DirectionSet
    label: str = ""

    @property
    def tower(self) -> FieldTower:
        """The field tower."""
        return self.basis.tower

    @property
    def q(self) -> int:
        """Order of F_q."""
        return self.basis.tower.q

    @property
    def m(self) -> int:
        """Number of cosets in the connection set."""
        return self.directions.m

    @property
    def order(self) -> int:
        """Number of vertices, q^2."""
        return self.basis.tower.order

    @functools.cached_property
    def connection_set(self) -> IntArray:
        """The connection set S, sorted by index."""
        tower = self.basis.tower
        cosets = [
            tower.mul_array(tower.fq_units, self.basis.direction_element(d))
            for d in self.directions.sorted_members
        ]
        values = np.concatenate(cosets)
        unique = np.unique(values)
        if len(unique) != self.m * (self.q - 1):
            raise InconsistencyError("cosets of the connection set are not disjoint")
        return unique

    @functools.cached_property
    def in_connection_set(self) -> npt.NDArray[np.bool_]:
        """Membership mask of S over all elements."""
        mask = np.zeros(self.order, dtype=bool)
        mask[self.connection_set] = True
        return mask

    @functools.cached_property
    def adjacency(self) -> npt.NDArray[np.bool_]:
        """Dense adjacency matrix indexed by element.

        Raises:
            InvalidInputError: For q above the dense materialization cap.
        """
        if self.q > MAX_DENSE_Q:
            raise InvalidInputError(
                f"dense adjacency is only built for q <= {MAX_DENSE_Q}"
            )
        vertices = np.arange(self.order)
        diffs = self.basis.tower.sub_array(vertices[:, None], vertices[None, :])
        return self.in_connection_set[diffs]

    def adjacent(self, u: Element, v: Element) -> bool:
        """True iff ``u - v`` lies in S."""
        return bool(self.in_connection_set[self.basis.tower.sub(u, v)])

    def neighbors(self, v: Element) -> IntArray:
        """Neighbours ``v + S`` of a vertex, sorted."""
        return np.sort(self.basis.tower.add_array(self.connection_set, v))

    def is_clique(self, vertices: Iterable[Element]) -> bool:
        """True iff every pairwise difference lies in S."""
        values = np.array(sorted(set(vertices)), dtype=np.int64)
        diffs = self.basis.tower.sub_array(values[:, None], values[None, :])
        off_diagonal = ~np.eye(len(values), dtype=bool)
        return bool(self.in_connection_set[diffs][off_diagonal].all())


def build_graph(
    basis: TowerBasis, directions: DirectionSet | Iterable[int], label: str = ""
) -> PeisertGraph:
    """Build the Peisert-type graph of a direction set.

    Raises:
        InvalidInputError: For duplicate directions or m outside 1..q.
    """
    if not isinstance(directions, DirectionSet):
        members = list(directions)
        if len(set(members)) != len(members):
            raise InvalidInputError("duplicate directions")
        directions = DirectionSet(basis, frozenset(members))
    if directions.basis is not basis:
        directions = DirectionSet(basis, directions.members)
    if directions.m > basis.tower.q:
        raise InvalidInputError(f"m={directions.m} exceeds q={basis.tower.q}")
    return PeisertGraph(basis, directions, label)


def graph_from_connection_set(
    basis: TowerBasis, elements: Iterable[Element], label: str = ""
) -> PeisertGraph:
    """Build a graph from an explicit connection set.

    Raises:
        InvalidInputError: If the set is not a union of F_q^*-cosets.
    """
    values = set(elements)
    if 0 in values:
        raise InvalidInputError("the connection set must not contain 0")
    members = frozenset(int(basis.direction_table[z]) for z in values)
    graph = build_graph(basis, DirectionSet(basis, members), label)
    if set(graph.connection_set.tolist()) != values:
        raise InvalidInputError("the set is not a union of cosets of F_q^*")
    return graph


def complement(g: PeisertGraph) -> PeisertGraph:
    """The type-(q + 1 - m, q) graph on the complementary direction set."""
    label = f"complement of {g.label}" if g.label else ""
    return build_graph(g.basis, g.directions.complement(), label)


def srg_verify(g: PeisertGraph, *, seed: int = 0) -> SrgParams:
    """Count common neighbours and compare them with the closed form.

    Vertex-transitivity lets the count fix vertex 0: for each v the common
    neighbours of 0 and v are ``|S n (v + S)|``. Translation invariance is
    spot-checked on random triples.

    Raises:
        InconsistencyError: If any count differs from the closed form.
    """
    tower = g.basis.tower
    expected = srg_parameters(g.m, g.q)
    s = g.connection_set
    mask = g.in_connection_set
    symmetric = np.array_equal(np.sort(tower.neg_array(s)), s)
    if len(s) != expected.k or mask[0] or not symmetric:
        raise InconsistencyError("connection set is not symmetric of size m(q-1)")

    vertices = np.arange(g.order)
    common = mask[tower.sub_array(s[None, :], vertices[:, None])].sum(axis=1)
    adjacent = mask.copy()
    non_adjacent = ~mask
    non_adjacent[0] = False
    lambdas = set(common[adjacent].tolist())
    mus = set(common[non_adjacent].tolist())
    if lambdas != {expected.lambda_} or mus != {expected.mu}:
        raise InconsistencyError(
            f"type ({g.m}, {g.q}): lambda values {sorted(lambdas)},"
            f" mu values {sorted(mus)}"
        )
    k, lam, mu, v = expected.k, expected.lambda_, expected.mu, expected.v
    if k * (k - lam - 1) != (v - k - 1) * mu:
        raise InconsistencyError(
            "parameters violate k(k - lambda - 1) = (v - k - 1) mu"
        )

    rng = random.Random(seed)
    for _ in range(100):
        t, u, w = (rng.randrange(g.order) for _ in range(3))
        if g.adjacent(u, w) != g.adjacent(tower.add(u, t), tower.add(w, t)):
            raise InconsistencyError("adjacency is not translation invariant")
    logger.debug("verified srg parameters %s for type (%d, %d)", expected, g.m, g.q)
    return expected


@functools.lru_cache(maxsize=None)
def _absolute_trace(tower: FieldTower) -> IntArray:
    return tower.trace_array(np.arange(tower.order), 1)


def spectrum_verify(g: PeisertGraph) -> Spectrum:
    """Compute the spectrum exactly from additive characters.

    The eigenvalue for the character ``x -> zeta^Tr(a x)`` is
    ``sum_t c_t zeta^t`` where ``c_t`` counts ``s`` in S with ``Tr(a s) = t``.
    It is rational exactly when ``c_1 = ... = c_{p-1}``, and then equals
    ``c_0 - c_1``.

    Raises:
        InconsistencyError: If a character sum is irrational or the spectrum
            differs from :func:`eigenvalues_of_type`.
    """
    tower = g.basis.tower
    p = tower.p
    trace = _absolute_trace(tower)
    s = g.connection_set
    values = trace[tower.mul_array(np.arange(g.order)[:, None], s[None, :])]
    offsets = np.arange(g.order)[:, None] * p
    counts = np.bincount((values + offsets).ravel(), minlength=g.order * p)
    counts = counts.reshape(g.order, p)
    if p > 2 and not (counts[:, 1:] == counts[:, 1:2]).all():
        raise InconsistencyError("character sum is not rational")
    eigenvalues = counts[:, 0] - counts[:, 1]
    tally = collections.Counter(eigenvalues[1:].tolist())
    expected = eigenvalues_of_type(g.m, g.q)
    wanted = {
        expected.r1: expected.r1_multiplicity,
        expected.r2: expected.r2_multiplicity,
    }
    if int(eigenvalues[0]) != expected.k or dict(tally) != wanted:
        raise InconsistencyError(f"spectrum {dict(tally)} differs from {expected}")
    return expected
