"""Canonical labeling of dense graphs by individualization and refinement.

Partitions are arrays of cell ranks. Refinement splits every cell by a hash of the
ranks of each vertex's neighbours until the number of cells is stable; the hash
only depends on ranks, so refinement commutes with isomorphisms. Leaves of the
search tree are compared by the packed adjacency matrix under their labeling and the
least one wins. Automorphisms found at equal leaves prune the tree.
"""

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from .errors import BudgetExceededError, InvalidInputError

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 200_000
_HASH_SEED = 0x5EED

Permutation = npt.NDArray[np.int64]


@dataclasses.dataclass(frozen=True)
class CanonicalLabeling:
    """Result of a canonical labeling search.

    Attributes:
        labeling: ``labeling[i]`` is the vertex placed at position i.
        canonical_form: Packed adjacency matrix under the labeling, followed by the
            sorted start colours when a colouring was given.
        generators: Automorphisms found or supplied during the search.
        nodes: Number of refinements performed.
    """

    labeling: Permutation
    canonical_form: bytes
    generators: tuple[Permutation, ...]
    nodes: int


@dataclasses.dataclass(frozen=True)
class _Leaf:
    labeling: Permutation
    form: bytes
    path: tuple[int, ...]
    positions: tuple[int, ...]


def is_automorphism(adjacency: npt.NDArray[np.bool_], perm: Sequence[int]) -> bool:
    """True iff ``perm`` maps the graph onto itself."""
    perm = np.asarray(perm, dtype=np.int64)
    n = len(adjacency)
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        return False
    return bool(np.array_equal(adjacency[np.ix_(perm, perm)], adjacency))


class _Search:
    def __init__(
        self,
        adjacency: npt.NDArray[np.bool_],
        generators: Sequence[Permutation],
        max_nodes: int,
    ) -> None:
        self.adjacency = adjacency
        self.weights = adjacency.astype(np.uint64)
        self.n = len(adjacency)
        rng = np.random.default_rng(_HASH_SEED)
        self.cell_hash = rng.integers(1, 2**63, size=self.n, dtype=np.uint64)
        self.generators = list(generators)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None

    def refine(self, colors: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
        cells = int(colors.max()) + 1
        while cells < self.n:
            signature = self.weights @ self.cell_hash[colors]
            order = np.lexsort((signature, colors))
            c, s = colors[order], signature[order]
            starts = np.ones(self.n, dtype=bool)
            starts[1:] = (c[1:] != c[:-1]) | (s[1:] != s[:-1])
            ranks = np.cumsum(starts) - 1
            refined = np.empty(self.n, dtype=np.int64)
            refined[order] = ranks
            new_cells = int(ranks[-1]) + 1
            colors = refined
            if new_cells == cells:
                break
            cells = new_cells
        return colors

    @staticmethod
    def individualize(
        colors: npt.NDArray[np.int64], vertex: int
    ) -> npt.NDArray[np.int64]:
        doubled = 2 * colors + 1
        doubled[vertex] -= 1
        _, ranks = np.unique(doubled, return_inverse=True)
        return ranks.astype(np.int64)

    def orbit_labels(self, path: tuple[int, ...]) -> npt.NDArray[np.int64]:
        labels = np.arange(self.n)
        fixing = [g for g in self.generators if all(g[v] == v for v in path)]
        if not fixing:
            return labels
        inverses = [np.argsort(g) for g in fixing]
        while True:
            updated = labels.copy()
            for g, g_inv in zip(fixing, inverses, strict=True):
                updated = np.minimum(updated, updated[g])
                updated = np.minimum(updated, updated[g_inv])
            if np.array_equal(updated, labels):
                return labels
            labels = updated

    def leaf(self, colors: npt.NDArray[np.int64], path: tuple[int, ...]) -> int | None:
        labeling = np.argsort(colors)
        form = np.packbits(self.adjacency[np.ix_(labeling, labeling)]).tobytes()
        positions = tuple(int(colors[v]) for v in path)
        current = _Leaf(labeling, form, path, positions)
        if self.first is None or self.best is None:
            self.first = self.best = current
            return None
        for reference in (self.first, self.best):
            if form == reference.form:
                automorphism = np.empty(self.n, dtype=np.int64)
                automorphism[reference.labeling] = labeling
                self.generators.append(automorphism)
                if positions == reference.positions:
                    common = 0
                    while common < len(path) and path[common] == reference.path[common]:
                        common += 1
                    return common
                return None
        if form < self.best.form:
            self.best = current
        return None

    def explore(
        self, colors: npt.NDArray[np.int64], path: tuple[int, ...]
    ) -> int | None:
        """Search below a node; returns a depth to jump back to, if any."""
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceededError(
                f"canonical labeling exceeded {self.max_nodes} nodes", nodes=self.nodes
            )
        colors = self.refine(colors)
        sizes = np.bincount(colors)
        if len(sizes) == self.n:
            return self.leaf(colors, path)
        target = int(np.flatnonzero(sizes > 1)[0])
        cell = np.flatnonzero(colors == target).tolist()
        explored: list[int] = []
        known = -1
        labels = np.arange(self.n)
        depth = len(path)
        for v in cell:
            if len(self.generators) != known:
                known = len(self.generators)
                labels = self.orbit_labels(path)
            if any(labels[v] == labels[u] for u in explored):
                continue
            explored.append(v)
            jump = self.explore(self.individualize(colors, v), (*path, v))
            if jump is not None and jump < depth:
                return jump
        return None


def canonical_labeling(
    adjacency: npt.NDArray[np.bool_],
    *,
    colors: Sequence[int] | None = None,
    automorphisms: Sequence[Sequence[int]] = (),
    max_nodes: int = DEFAULT_MAX_NODES,
) -> CanonicalLabeling:
    """Canonical labeling of a symmetric adjacency matrix.

    Args:
        adjacency: Square boolean matrix.
        colors: Optional isomorphism-invariant vertex colouring to start from.
        automorphisms: Known automorphisms; each is verified, and those that do
            not preserve ``colors`` are dropped.
        max_nodes: Refinement budget.

    Returns:
        The labeling, the canonical form and the automorphisms seen.

    Raises:
        InvalidInputError: If a supplied automorphism is not one or the colouring
            has the wrong length.
        BudgetExceededError: If the search needs more than ``max_nodes`` nodes.
    """
    adjacency = np.asarray(adjacency, dtype=bool)
    n = len(adjacency)
    raw = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors)
    if raw.shape != (n,):
        raise InvalidInputError(f"expected {n} colours, got {raw.shape}")
    seeds = []
    for perm in automorphisms:
        if not is_automorphism(adjacency, perm):
            raise InvalidInputError("a supplied permutation is not an automorphism")
        candidate = np.asarray(perm, dtype=np.int64)
        if np.array_equal(raw[candidate], raw):
            seeds.append(candidate)
    _, start = np.unique(raw, return_inverse=True)
    search = _Search(adjacency, seeds, max_nodes)
    search.explore(start.astype(np.int64), ())
    assert search.best is not None
    form = search.best.form
    if colors is not None:
        form += np.sort(raw).astype(np.int64).tobytes()
    logger.debug("canonical labeling of %d vertices took %d nodes", n, search.nodes)
    return CanonicalLabeling(
        labeling=search.best.labeling,
        canonical_form=form,
        generators=tuple(search.generators),
        nodes=search.nodes,
    )
