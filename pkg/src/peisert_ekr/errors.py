"""Exceptions raised by the library and their command-line exit codes."""

from typing import Any

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


class PeisertError(Exception):
    """Base class of every error raised by peisert-ekr."""

    exit_code: int = EXIT_ASSERTION
    code: str = "error"


class InvalidInputError(PeisertError, ValueError):
    """Parameters, polynomials, matrices or descriptors that cannot be used."""

    exit_code = EXIT_BAD_INPUT
    code = "bad-input"


class ImprimitiveGraphError(InvalidInputError):
    """The operation needs a primitive strongly regular graph (2 <= m <= q-1)."""

    code = "imprimitive"


class InconsistencyError(PeisertError, AssertionError):
    """A verified identity failed; this always points at a construction bug."""

    exit_code = EXIT_ASSERTION
    code = "assertion"


class NotDelsarteCliqueError(InconsistencyError):
    """A clique whose outside vertices do not see a constant positive count."""

    code = "not-delsarte"


class BudgetExceededError(PeisertError):
    """A search ran out of its node budget.

    Attributes:
        partial: Whatever the search had produced before stopping.
        nodes: Number of search nodes visited.
    """

    exit_code = EXIT_BUDGET
    code = "budget"

    def __init__(self, message: str, *, partial: Any = None, nodes: int = 0) -> None:
        """Initialize with the partial result of the interrupted search."""
        super().__init__(message)
        self.partial = partial
        self.nodes = nodes
