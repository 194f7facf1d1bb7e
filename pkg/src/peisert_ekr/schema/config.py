"""Run configuration shared by the command-line subcommands."""

from __future__ import annotations

import pathlib
from typing import Literal, Optional

import pydantic

from ..classify import DEFAULT_CENSUS_Q, DEFAULT_CLIQUE_NODES, DEFAULT_LABELING_NODES
from ..errors import InvalidInputError
from ..fields import FieldTower, make_tower, prime_power
from . import ElementIndex, PositiveInt

OutputFormat = Literal["human", "machine"]


class Budget(pydantic.BaseModel):
    """Search limits; exceeding one stops the run with exit code 3."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    max_clique_nodes: PositiveInt = pydantic.Field(
        default=DEFAULT_CLIQUE_NODES, description="Nodes per clique search."
    )
    max_labeling_nodes: PositiveInt = pydantic.Field(
        default=DEFAULT_LABELING_NODES, description="Nodes per canonical labeling."
    )
    max_census_q: PositiveInt = pydantic.Field(
        default=DEFAULT_CENSUS_Q, description="Largest q a census runs for."
    )


class RunConfig(pydantic.BaseModel):
    """Everything a subcommand needs besides its own arguments."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    command: str = pydantic.Field(description="Subcommand name.")
    q: Optional[PositiveInt] = pydantic.Field(
        default=None, description="Order of F_q."
    )
    p: Optional[PositiveInt] = pydantic.Field(
        default=None, description="Characteristic."
    )
    n: Optional[PositiveInt] = pydantic.Field(
        default=None, description="Degree of F_q over F_p."
    )
    m: Optional[PositiveInt] = pydantic.Field(default=None, description="Type m.")
    budget: Budget = pydantic.Field(default_factory=Budget)
    output_format: OutputFormat = pydantic.Field(
        default="human", description="Aligned tables or line-delimited JSON records."
    )
    output: Optional[pathlib.Path] = pydantic.Field(
        default=None, description="Output file; stdout when unset."
    )
    workers: PositiveInt = pydantic.Field(default=1, description="Worker processes.")
    modulus: Optional[list[ElementIndex]] = pydantic.Field(default=None)
    fq_modulus: Optional[list[ElementIndex]] = pydantic.Field(default=None)
    fq2_modulus: Optional[list[ElementIndex]] = pydantic.Field(default=None)

    @pydantic.model_validator(mode="after")
    def _consistent_field_order(self) -> RunConfig:
        if self.q is not None:
            p, n = prime_power(self.q)
            if (self.p, self.n) not in {(p, n), (None, n), (p, None), (None, None)}:
                raise ValueError(f"p={self.p}, n={self.n} do not give q={self.q}")
        return self

    def field_order(self) -> tuple[int, int]:
        """``(p, n)`` from q or from p and n.

        Raises:
            InvalidInputError: If neither is given.
        """
        if self.q is not None:
            return prime_power(self.q)
        if self.p is None or self.n is None:
            raise InvalidInputError("give --q, or --p and --n")
        return self.p, self.n

    @property
    def order(self) -> int:
        """The order q of F_q."""
        p, n = self.field_order()
        return p**n

    def tower(self) -> FieldTower:
        """The tower with any modulus overrides applied."""
        p, n = self.field_order()
        return make_tower(
            p,
            n,
            modulus=self.modulus,
            fq_modulus=self.fq_modulus,
            fq2_modulus=self.fq2_modulus,
        )
