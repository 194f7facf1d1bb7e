"""Reports emitted by the command-line interface."""

from __future__ import annotations

from typing import Optional

import pydantic

from ..cliques import Clique, CliqueKind
from ..graph import SrgParams, Spectrum
from ..spectral import EigenfunctionReport
from . import ElementIndex
from .graph import GraphDescriptor


class CliqueRecord(pydantic.BaseModel):
    """One clique through 0."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    vertices: list[ElementIndex] = pydantic.Field(description="Sorted vertex indices.")
    kind: CliqueKind = pydantic.Field(description="Canonical or not, maximum or not.")
    directions_determined: list[int] = pydantic.Field(
        description="Sorted indices of the directions the clique determines."
    )
    nexus: Optional[int] = pydantic.Field(
        default=None,
        description="Neighbours in the clique of each outside vertex, when checked.",
    )

    @classmethod
    def from_clique(cls, clique: Clique, nexus: int | None = None) -> CliqueRecord:
        """Record a clique."""
        return cls(
            vertices=list(clique.sorted_vertices),
            kind=clique.kind,
            directions_determined=sorted(clique.directions),
            nexus=nexus,
        )


class CliqueSummary(pydantic.BaseModel):
    """Counts of cliques through 0 by kind."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    n_canonical: int = pydantic.Field(description="Canonical cliques.")
    n_noncanonical: int = pydantic.Field(description="Non-canonical maximum cliques.")
    n_maximal_submaximum: int = pydantic.Field(
        default=0, description="Maximal cliques smaller than q."
    )

    @classmethod
    def tally(cls, cliques: list[Clique]) -> CliqueSummary:
        """Count cliques by kind."""
        kinds = [c.kind for c in cliques]
        return cls(
            n_canonical=kinds.count(CliqueKind.CANONICAL),
            n_noncanonical=kinds.count(CliqueKind.NONCANONICAL_MAXIMUM),
            n_maximal_submaximum=kinds.count(CliqueKind.MAXIMAL_SUBMAXIMUM),
        )


class AnalysisReport(pydantic.BaseModel):
    """Results of the analyses requested for one graph; skipped ones stay null."""

    model_config = pydantic.ConfigDict(extra="forbid")

    label: str = pydantic.Field(description="Graph label.")
    q: int = pydantic.Field(description="Order of F_q.")
    m: int = pydantic.Field(description="Number of directions.")
    srg: Optional[SrgParams] = pydantic.Field(default=None)
    spectrum: Optional[Spectrum] = pydantic.Field(default=None)
    cliques: Optional[list[CliqueRecord]] = pydantic.Field(
        default=None, description="Every q-clique through 0."
    )
    clique_summary: Optional[CliqueSummary] = pydantic.Field(default=None)
    strict_ekr: Optional[bool] = pydantic.Field(
        default=None, description="Whether every maximum clique is canonical."
    )
    ekr_witness: Optional[CliqueRecord] = pydantic.Field(
        default=None, description="A non-canonical maximum clique, if any."
    )
    maximal: Optional[list[CliqueRecord]] = pydantic.Field(
        default=None, description="Every maximal clique through 0."
    )
    eigenfunctions: Optional[list[EigenfunctionReport]] = pydantic.Field(default=None)
    baer: Optional[list[bool]] = pydantic.Field(
        default=None,
        description="Baer subarray check of each non-canonical clique through 0.",
    )


class ConstructionReport(pydantic.BaseModel):
    """A constructed graph with the outcome of its verification."""

    model_config = pydantic.ConfigDict(extra="forbid")

    kind: str = pydantic.Field(description="Constructor name.")
    descriptor: Optional[GraphDescriptor] = pydantic.Field(
        default=None, description="The graph, for Peisert-type constructions."
    )
    vertices: int = pydantic.Field(description="Number of vertices.")
    m: Optional[int] = pydantic.Field(default=None, description="Number of directions.")
    srg: Optional[SrgParams] = pydantic.Field(default=None)
    extremal: Optional[bool] = pydantic.Field(
        default=None,
        description="m equals the least type without the strict-EKR property and "
        "the witness is a non-canonical clique.",
    )
    witness: Optional[list[ElementIndex]] = pydantic.Field(
        default=None, description="Vertices of the witness clique through 0."
    )
    maximal_cliques_through_zero: Optional[int] = pydantic.Field(default=None)
    checks: dict[str, bool] = pydantic.Field(
        default_factory=dict, description="Named verifications and their outcome."
    )


class IsoReport(pydantic.BaseModel):
    """Isomorphism test of two graph descriptors."""

    model_config = pydantic.ConfigDict(extra="forbid")

    isomorphic: bool = pydantic.Field(description="Whether the graphs are isomorphic.")
    mapping: Optional[list[ElementIndex]] = pydantic.Field(
        default=None, description="``mapping[v]`` is the image of v, when requested."
    )


class ExtremalValuesReport(pydantic.BaseModel):
    """Least m without and greatest m with a strict-EKR graph of type (m, q)."""

    model_config = pydantic.ConfigDict(populate_by_name=True, extra="forbid")

    q: int = pydantic.Field(description="Order of F_q.")
    e_q: Optional[int] = pydantic.Field(
        default=None,
        description="Least m with a graph lacking the strict-EKR property.",
    )
    e_q_max: Optional[int] = pydantic.Field(
        default=None,
        alias="E_q",
        description="Greatest m with a graph having the strict-EKR property.",
    )
    complete: bool = pydantic.Field(
        default=True, description="False when a budget cut the census short."
    )
