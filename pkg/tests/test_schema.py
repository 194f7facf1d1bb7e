"""Tests for the serialized records."""

import pydantic
import pytest

from peisert_ekr.errors import InvalidInputError
from peisert_ekr.fields import make_tower, tower_for_q
from peisert_ekr.graph import PeisertGraph
from peisert_ekr.schema.config import Budget, RunConfig
from peisert_ekr.schema.graph import GraphDescriptor
from peisert_ekr.schema.reports import ExtremalValuesReport
from peisert_ekr.schema.tower import TowerDescriptor


def test_tower_descriptor_returns_default() -> None:
    """Describing the default tower and rebuilding it gives the cached object."""
    tower = tower_for_q(9)
    descriptor = TowerDescriptor.from_tower(tower)
    dumped = descriptor.model_dump(by_alias=True)
    assert {"fq-modulus", "fq2-modulus", "generator-index"} <= set(dumped)
    assert TowerDescriptor.model_validate(dumped).to_tower() is tower


def test_tower_descriptor_overrides() -> None:
    """An explicit F_q modulus survives the trip through JSON."""
    tower = make_tower(2, 3, fq_modulus=(1, 0, 1, 1))
    text = TowerDescriptor.from_tower(tower).model_dump_json(by_alias=True)
    rebuilt = TowerDescriptor.model_validate_json(text).to_tower()
    assert rebuilt.fq_modulus == tower.fq_modulus == (1, 0, 1, 1)
    assert rebuilt.epsilon == tower.epsilon


def test_tower_descriptor_generator_mismatch() -> None:
    """A wrong generator index is reported."""
    descriptor = TowerDescriptor.from_tower(tower_for_q(9))
    wrong = descriptor.model_copy(
        update={"generator_index": descriptor.generator_index + 1}
    )
    with pytest.raises(InvalidInputError):
        wrong.to_tower()


def test_graph_descriptor(x9: PeisertGraph) -> None:
    """Graph descriptors render elements as powers of g."""
    descriptor = GraphDescriptor.from_graph(x9)
    dumped = descriptor.model_dump(by_alias=True)
    assert dumped["beta-index"] == x9.basis.beta
    assert all(a == "0" or a.startswith("g^") for a, _ in dumped["directions"])
    rebuilt = GraphDescriptor.model_validate_json(
        descriptor.model_dump_json(by_alias=True)
    )
    g = rebuilt.to_graph()
    assert g.tower is x9.tower
    assert g.directions.members == x9.directions.members


def test_graph_descriptor_validation(x9: PeisertGraph) -> None:
    """Malformed elements, extra keys and duplicate directions are rejected."""
    dumped = GraphDescriptor.from_graph(x9).model_dump(by_alias=True)
    with pytest.raises(pydantic.ValidationError):
        GraphDescriptor.model_validate({**dumped, "directions": [["1", "beta"]]})
    with pytest.raises(pydantic.ValidationError):
        GraphDescriptor.model_validate({**dumped, "colour": "red"})
    with pytest.raises(pydantic.ValidationError):
        GraphDescriptor.model_validate(
            {k: v for k, v in dumped.items() if k != "tower"}
        )
    duplicated = {**dumped, "directions": dumped["directions"] * 2}
    with pytest.raises(InvalidInputError):
        GraphDescriptor.model_validate(duplicated).to_graph()


def test_run_config() -> None:
    """q and (p, n) must agree; budgets must be positive."""
    assert RunConfig(command="census", q=9).field_order() == (3, 2)
    assert RunConfig(command="census", p=2, n=3).order == 8
    with pytest.raises(pydantic.ValidationError):
        RunConfig(command="census", q=9, p=2)
    with pytest.raises(InvalidInputError):
        RunConfig(command="census").tower()
    with pytest.raises(pydantic.ValidationError):
        Budget(max_clique_nodes=0)


def test_extremal_values_alias() -> None:
    """E_q is serialized under its own key."""
    report = ExtremalValuesReport(q=5, e_q=4, E_q=3)
    assert report.model_dump(by_alias=True)["E_q"] == 3
    assert report.e_q_max == 3
