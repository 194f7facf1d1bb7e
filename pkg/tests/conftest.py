"""Shared fixtures and the ``--runslow`` switch."""

import pathlib

import pytest

from peisert_ekr.constructions import extremal_construction, oval_graph_xq
from peisert_ekr.fields import FieldTower, tower_for_q
from peisert_ekr.graph import PeisertGraph
from peisert_ekr.plane import default_basis

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def pytest_addoption(parser: pytest.Parser) -> None:
    """Add ``--runslow``."""
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_collection_modifyitems(
    config: pytest.Config, items: list[pytest.Item]
) -> None:
    """Skip slow tests unless ``--runslow`` is given."""
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def golden_dir() -> pathlib.Path:
    """Directory of the census golden tables."""
    return GOLDEN_DIR


@pytest.fixture
def tower9() -> FieldTower:
    """Default tower with q = 9."""
    return tower_for_q(9)


@pytest.fixture
def x9(tower9: FieldTower) -> PeisertGraph:
    """The oval graph X_9 of type (4, 9)."""
    return oval_graph_xq(default_basis(tower9)).graph


@pytest.fixture
def extremal8() -> PeisertGraph:
    """The extremal graph of type (5, 8)."""
    return extremal_construction(tower_for_q(8)).graph
