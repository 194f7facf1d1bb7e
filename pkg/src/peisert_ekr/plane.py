"""The affine plane AG(2,q) on F_{q^2}, its directions and the PGammaL(2,q) action.

Points of the projective line PG(1,q) are encoded by an index in ``0..q``: index 0 is
``[0:1]`` and index ``1 + i`` is ``[1:t]`` where ``t`` is the i-th element of F_q in
index order. Sorting indices therefore sorts normalized pairs lexicographically.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError
from .fields import Element, FieldTower, IntArray, divisors

logger = logging.getLogger(__name__)

AffinePoint = tuple[Element, Element]
ProjectivePoint = tuple[Element, Element]
Matrix2 = tuple[Element, Element, Element, Element]
"""A 2x2 matrix ``(a, b, c, d)`` acting as ``[u:v] -> [a u + b v : c u + d v]``."""


@dataclasses.dataclass(frozen=True, eq=False)
class ProjectiveLine:
    """Index bookkeeping for PG(1,q) over the middle field of a tower."""

    tower: FieldTower

    @property
    def size(self) -> int:
        """Number of points, q + 1."""
        return self.tower.q + 1

    @functools.cached_property
    def fq_rank(self) -> IntArray:
        """Position of each F_q element in index order, -1 outside F_q."""
        rank = np.full(self.tower.order, -1, dtype=np.int64)
        rank[self.tower.fq_elements] = np.arange(self.tower.q)
        return rank

    @functools.cached_property
    def points(self) -> list[ProjectivePoint]:
        """Normalized pairs in index order."""
        return [(0, 1)] + [(1, t) for t in self.tower.fq_elements.tolist()]

    @functools.cached_property
    def coordinates(self) -> tuple[IntArray, IntArray]:
        """First and second coordinates of every point, as arrays."""
        first = np.array([u for u, _ in self.points], dtype=np.int64)
        second = np.array([v for _, v in self.points], dtype=np.int64)
        return first, second

    def index(self, a: Element, b: Element) -> int:
        """Index of ``[a:b]`` after normalization.

        Raises:
            InvalidInputError: If both coordinates are zero or lie outside F_q.
        """
        tower = self.tower
        if not (tower.in_subfield(a, tower.n) and tower.in_subfield(b, tower.n)):
            raise InvalidInputError(f"[{a}:{b}] has coordinates outside F_q")
        if a == 0:
            if b == 0:
                raise InvalidInputError("[0:0] is not a projective point")
            return 0
        return 1 + int(self.fq_rank[tower.div(b, a)])

    def index_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> IntArray:
        """Vectorized :meth:`index`; pairs ``(0, 0)`` map to -1."""
        tower = self.tower
        a, b = np.broadcast_arrays(
            np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        )
        safe_a = np.where(a == 0, 1, a)
        slope = 1 + self.fq_rank[tower.div_array(b, safe_a)]
        return np.where(a == 0, np.where(b == 0, -1, 0), slope)

    def label(self, index: int) -> str:
        """Human-readable ``[a:b]`` with elements as table indices."""
        a, b = self.points[index]
        return f"[{a}:{b}]"


@functools.lru_cache(maxsize=None)
def projective_line(tower: FieldTower) -> ProjectiveLine:
    """The cached PG(1,q) helper of a tower."""
    return ProjectiveLine(tower)


@dataclasses.dataclass(frozen=True, eq=False)
class TowerBasis:
    """The F_q-basis ``{1, beta}`` identifying F_{q^2} with AG(2,q)."""

    tower: FieldTower
    beta: Element

    def __post_init__(self) -> None:
        """Reject a ``beta`` inside F_q."""
        tower = self.tower
        if not 0 <= self.beta < tower.order or tower.in_subfield(self.beta, tower.n):
            raise InvalidInputError(f"beta={self.beta} must lie in F_q^2 outside F_q")

    @property
    def line(self) -> ProjectiveLine:
        """PG(1,q) of the tower."""
        return projective_line(self.tower)

    @functools.cached_property
    def coordinates(self) -> tuple[IntArray, IntArray]:
        """``(a, b)`` arrays with ``z = a + b beta`` for every element z."""
        tower = self.tower
        fq = tower.fq_elements
        a_grid, b_grid = np.meshgrid(fq, fq, indexing="ij")
        z = tower.add_array(a_grid, tower.mul_array(b_grid, self.beta)).ravel()
        first = np.empty(tower.order, dtype=np.int64)
        second = np.empty(tower.order, dtype=np.int64)
        first[z] = a_grid.ravel()
        second[z] = b_grid.ravel()
        return first, second

    @functools.cached_property
    def direction_table(self) -> IntArray:
        """Direction index of every nonzero element, -1 for zero."""
        first, second = self.coordinates
        return self.line.index_array(first, second)

    def element(self, a: Element, b: Element) -> Element:
        """``a + b beta``."""
        return self.tower.add(a, self.tower.mul(b, self.beta))

    def point(self, z: Element) -> AffinePoint:
        """pi(z) = (a, b) with z = a + b beta."""
        first, second = self.coordinates
        return int(first[z]), int(second[z])

    def direction_element(self, index: int) -> Element:
        """The representative ``a + b beta`` of a normalized direction ``[a:b]``."""
        a, b = self.line.points[index]
        return self.element(a, b)

    def direction_of(self, z: Element) -> int:
        """Direction index of a nonzero element."""
        if z == 0:
            raise InvalidInputError("zero has no direction")
        return int(self.direction_table[z])


def default_basis(tower: FieldTower) -> TowerBasis:
    """The basis ``{1, beta}`` with the tower's default beta."""
    return TowerBasis(tower, tower.beta)


@dataclasses.dataclass(frozen=True, eq=False)
class DirectionSet:
    """A set of directions of AG(2,q) with respect to a basis."""

    basis: TowerBasis
    members: frozenset[int]

    def __post_init__(self) -> None:
        """Check that every member is a point of PG(1,q)."""
        size = self.basis.line.size
        if not self.members or any(not 0 <= d < size for d in self.members):
            raise InvalidInputError(
                f"direction set must be a nonempty subset of 0..{size - 1}"
            )

    @property
    def m(self) -> int:
        """Number of directions."""
        return len(self.members)

    @property
    def sorted_members(self) -> tuple[int, ...]:
        """Members in index order."""
        return tuple(sorted(self.members))

    def points(self) -> list[ProjectivePoint]:
        """Normalized pairs of the members in index order."""
        return [self.basis.line.points[d] for d in self.sorted_members]

    def complement(self) -> DirectionSet:
        """The complementary direction set in PG(1,q)."""
        rest = frozenset(range(self.basis.line.size)) - self.members
        return DirectionSet(self.basis, rest)


def directions_of_elements(
    basis: TowerBasis, elements: Iterable[Element]
) -> frozenset[int]:
    """Directions determined by pairs of distinct elements of F_{q^2}."""
    values = np.array(sorted(set(elements)), dtype=np.int64)
    if len(values) < 2:
        return frozenset()
    diffs = basis.tower.sub_array(values[:, None], values[None, :])
    upper = np.triu_indices(len(values), k=1)
    return frozenset(np.unique(basis.direction_table[diffs[upper]]).tolist())


def directions_of(basis: TowerBasis, points: Iterable[AffinePoint]) -> frozenset[int]:
    """Directions determined by a set of points of AG(2,q)."""
    return directions_of_elements(basis, (basis.element(a, b) for a, b in points))


def k_linearity(basis: TowerBasis, points: Iterable[AffinePoint]) -> int | None:
    """Largest subfield K = F_{p^j} over which a q-point set through 0 is linear.

    The preimage W of the points in F_{q^2} is tested directly for closure under
    addition and K-scaling, from the largest divisor j of n down to 1.

    Returns:
        The degree j of K over F_p, or None when W is not even additively closed.

    Raises:
        InvalidInputError: If the set does not have q points or misses the origin.
    """
    tower = basis.tower
    elements = {basis.element(a, b) for a, b in points}
    if len(elements) != tower.q:
        raise InvalidInputError(f"expected {tower.q} points, got {len(elements)}")
    if 0 not in elements:
        raise InvalidInputError("the point set must contain the origin")
    values = np.array(sorted(elements), dtype=np.int64)
    member = np.zeros(tower.order, dtype=bool)
    member[values] = True
    if not member[tower.add_array(values[:, None], values[None, :])].all():
        return None
    for j in reversed(divisors(tower.n)):
        scalars = tower.subfield_elements(j)
        if member[tower.mul_array(scalars[:, None], values[None, :])].all():
            return j
    return None


def determinant(tower: FieldTower, matrix: Matrix2) -> Element:
    """Determinant of a 2x2 matrix over F_q."""
    a, b, c, d = matrix
    return tower.sub(tower.mul(a, d), tower.mul(b, c))


def pgl_image(tower: FieldTower, matrix: Matrix2, point: int) -> int:
    """Image of a point of PG(1,q) under an invertible matrix.

    Raises:
        InvalidInputError: If the matrix is singular or has entries outside F_q.
    """
    if any(not tower.in_subfield(x, tower.n) for x in matrix):
        raise InvalidInputError("matrix entries must lie in F_q")
    if determinant(tower, matrix) == 0:
        raise InvalidInputError("singular matrix")
    line = projective_line(tower)
    u, v = line.points[point]
    a, b, c, d = matrix
    return line.index(
        tower.add(tower.mul(a, u), tower.mul(b, v)),
        tower.add(tower.mul(c, u), tower.mul(d, v)),
    )


@functools.lru_cache(maxsize=None)
def pgammal_permutations(tower: FieldTower) -> npt.NDArray[np.int16]:
    """Every element of PGammaL(2,q) as a permutation of the q + 1 point indices.

    Row ``g`` maps point ``x`` to ``perms[g, x]``. Projective matrices are
    normalized with their first nonzero entry of the top row equal to one, and each
    is composed with each power of the coordinate-wise Frobenius.
    """
    line = projective_line(tower)
    fq = tower.fq_elements
    q = tower.q
    b, c, d = (g.ravel() for g in np.meshgrid(fq, fq, fq, indexing="ij"))
    keep = tower.sub_array(d, tower.mul_array(b, c)) != 0
    top = (np.ones(int(keep.sum()), dtype=np.int64), b[keep], c[keep], d[keep])
    c2, d2 = (g.ravel() for g in np.meshgrid(fq[1:], fq, indexing="ij"))
    bottom = (
        np.zeros(len(c2), dtype=np.int64),
        np.ones(len(c2), dtype=np.int64),
        c2,
        d2,
    )
    a_all, b_all, c_all, d_all = (
        np.concatenate(pair) for pair in zip(top, bottom, strict=True)
    )

    u, v = line.coordinates
    mul = tower.mul_array
    x = tower.add_array(mul(a_all[:, None], u), mul(b_all[:, None], v))
    y = tower.add_array(mul(c_all[:, None], u), mul(d_all[:, None], v))
    projective = line.index_array(x, y)
    rows = []
    for k in range(tower.n):
        frob = line.index_array(
            tower.frobenius_array(u, k), tower.frobenius_array(v, k)
        )
        rows.append(projective[:, frob])
    perms = np.concatenate(rows).astype(np.int16)
    logger.debug("PGammaL(2,%d) has %d elements", q, len(perms))
    return perms


def _images(tower: FieldTower, members: Iterable[int]) -> npt.NDArray[np.int16]:
    perms = pgammal_permutations(tower)
    images = perms[:, sorted(members)]
    images.sort(axis=1)
    return images


def pgammal_canonical(tower: FieldTower, members: Iterable[int]) -> tuple[int, ...]:
    """Lexicographically least PGammaL(2,q)-image of a set of directions."""
    images = _images(tower, members)
    if images.shape[1] == 0:
        return ()
    best = np.lexsort(images.T[::-1])[0]
    return tuple(int(x) for x in images[best])


def pgammal_orbit(tower: FieldTower, members: Iterable[int]) -> set[tuple[int, ...]]:
    """All PGammaL(2,q)-images of a set of directions, as sorted tuples."""
    images = np.unique(_images(tower, members), axis=0)
    return {tuple(int(x) for x in row) for row in images}


def pgammal_equivalent(
    tower: FieldTower, first: Iterable[int], second: Iterable[int]
) -> bool:
    """True iff two direction sets lie in one PGammaL(2,q)-orbit."""
    return pgammal_canonical(tower, first) == pgammal_canonical(tower, second)
