"""Serialized form of a field tower."""

from __future__ import annotations

import pydantic

from ..errors import InvalidInputError
from ..fields import FieldTower, make_tower
from . import ElementIndex, PositiveInt


class TowerDescriptor(pydantic.BaseModel):
    """Every choice needed to rebuild a tower F_p < F_q < F_{q^2} exactly.

    Polynomials list their coefficients constant term first.
    """

    model_config = pydantic.ConfigDict(
        populate_by_name=True, extra="forbid", frozen=True
    )

    p: PositiveInt = pydantic.Field(description="Characteristic.")
    n: PositiveInt = pydantic.Field(description="Degree of F_q over F_p.")
    modulus: list[ElementIndex] = pydantic.Field(
        description="Irreducible polynomial over F_p defining F_{q^2}.", min_length=3
    )
    fq_modulus: list[ElementIndex] = pydantic.Field(
        alias="fq-modulus",
        description="Minimal polynomial of epsilon over F_p.",
        min_length=2,
    )
    fq2_modulus: list[ElementIndex] = pydantic.Field(
        alias="fq2-modulus",
        description="Minimal polynomial of beta over F_q, coefficients as element "
        "indices.",
        min_length=3,
        max_length=3,
    )
    generator_index: ElementIndex = pydantic.Field(
        alias="generator-index",
        description="Table index of the primitive element g of F_{q^2}.",
    )

    @classmethod
    def from_tower(cls, tower: FieldTower) -> TowerDescriptor:
        """Describe a tower."""
        return cls(
            p=tower.p,
            n=tower.n,
            modulus=list(tower.modulus),
            fq_modulus=list(tower.fq_modulus),
            fq2_modulus=list(tower.fq2_modulus),
            generator_index=tower.generator,
        )

    def to_tower(self) -> FieldTower:
        """Rebuild the tower; a descriptor of the default tower returns the default.

        Raises:
            InvalidInputError: If a modulus is invalid or the rebuilt generator
                differs from ``generator_index``.
        """
        default = make_tower(self.p, self.n)
        if (
            list(default.modulus) == self.modulus
            and list(default.fq_modulus) == self.fq_modulus
            and list(default.fq2_modulus) == self.fq2_modulus
        ):
            tower = default
        else:
            tower = make_tower(
                self.p,
                self.n,
                modulus=self.modulus,
                fq_modulus=self.fq_modulus,
                fq2_modulus=self.fq2_modulus,
            )
        if tower.generator != self.generator_index:
            raise InvalidInputError(
                f"generator-index {self.generator_index} does not match the "
                f"rebuilt generator {tower.generator}"
            )
        return tower
