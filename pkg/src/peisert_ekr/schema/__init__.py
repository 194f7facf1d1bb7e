"""Pydantic models for every record peisert-ekr reads or writes."""

from typing import Annotated

import pydantic
from pydantic import StringConstraints

ElementString = Annotated[
    str,
    StringConstraints(pattern=r"^(0|g\^[0-9]+)$"),
]
"""Field element rendered as ``"0"`` or ``"g^k"`` (a discrete-log index)."""

ElementIndex = Annotated[int, pydantic.Field(ge=0)]
"""Field element as its table index; also the vertex index."""

PositiveInt = Annotated[int, pydantic.Field(gt=0)]
"""Strictly positive integer, used for budgets and sizes."""

LabelString = Annotated[str, StringConstraints(max_length=200)]

__all__ = ["ElementIndex", "ElementString", "LabelString", "PositiveInt"]
