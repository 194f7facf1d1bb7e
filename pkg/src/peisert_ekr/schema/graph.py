"""Serialized form of a Peisert-type graph."""

from __future__ import annotations

import pydantic

from ..fields import parse_element, render_element
from ..graph import PeisertGraph, build_graph
from ..plane import TowerBasis
from . import ElementIndex, ElementString, LabelString
from .tower import TowerDescriptor


class GraphDescriptor(pydantic.BaseModel):
    """A tower, the basis element beta and the directions of the connection set."""

    model_config = pydantic.ConfigDict(
        populate_by_name=True, extra="forbid", frozen=True
    )

    tower: TowerDescriptor = pydantic.Field(description="The field tower.")
    beta_index: ElementIndex = pydantic.Field(
        alias="beta-index",
        description="Table index of beta, so that F_{q^2} = F_q + beta F_q.",
    )
    directions: list[tuple[ElementString, ElementString]] = pydantic.Field(
        description='Normalized directions [a:b], elements rendered as "0" or '
        '"g^k".',
        min_length=1,
    )
    label: LabelString = pydantic.Field(default="", description="Free-form name.")

    @classmethod
    def from_graph(cls, g: PeisertGraph) -> GraphDescriptor:
        """Describe a graph."""
        tower = g.basis.tower
        return cls(
            tower=TowerDescriptor.from_tower(tower),
            beta_index=g.basis.beta,
            directions=[
                (render_element(tower, a), render_element(tower, b))
                for a, b in g.directions.points()
            ],
            label=g.label,
        )

    def to_graph(self) -> PeisertGraph:
        """Rebuild the graph.

        Raises:
            InvalidInputError: If beta lies in F_q, a direction is not a point of
                PG(1,q) or a direction repeats.
        """
        tower = self.tower.to_tower()
        basis = TowerBasis(tower, self.beta_index)
        members = [
            basis.line.index(parse_element(tower, a), parse_element(tower, b))
            for a, b in self.directions
        ]
        return build_graph(basis, members, self.label)
