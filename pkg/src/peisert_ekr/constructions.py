"""Named families of Peisert-type graphs, quadratic-form graphs and explicit maps."""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
from collections.abc import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from .cliques import enumerate_maximal_cliques, strict_ekr
from .errors import InconsistencyError, InvalidInputError
from .fields import (
    Element,
    FieldTower,
    IntArray,
    largest_proper_divisor,
    make_tower,
    prime_power,
    square_root,
    tower_for_q,
)
from .graph import PeisertGraph, build_graph, graph_from_connection_set
from .plane import TowerBasis, default_basis, directions_of_elements, k_linearity

logger = logging.getLogger(__name__)

MAX_FORM_VERTICES = 4096
EXAMPLE_Q32_FQ_MODULUS = (1, 0, 1, 0, 0, 1)
"""t^5 + t^2 + 1, constant term first."""
EXAMPLE_Q32_FQ2_MODULUS = (1, 1, 1)
"""t^2 + t + 1, constant term first."""


@dataclasses.dataclass(frozen=True)
class Construction:
    """A constructed graph together with a clique certifying it.

    Attributes:
        graph: The Peisert-type graph.
        witness: A maximum clique through 0; non-canonical for the families
            without the strict-EKR property, empty when none is known.
    """

    graph: PeisertGraph
    witness: frozenset[Element]


def span(
    tower: FieldTower, scalars: IntArray, generators: Iterable[Element]
) -> IntArray:
    """All linear combinations of ``generators`` with coefficients in ``scalars``."""
    values = np.zeros(1, dtype=np.int64)
    for g in generators:
        multiples = tower.mul_array(scalars, g)
        values = tower.add_array(values[:, None], multiples[None, :]).ravel()
    return np.unique(values)


def _from_cosets(
    basis: TowerBasis, representatives: Sequence[Element], label: str
) -> PeisertGraph:
    """Graph on the union of the cosets ``c F_q^*``, which must be disjoint."""
    directions = [basis.direction_of(c) for c in representatives]
    if len(set(directions)) != len(directions):
        raise InconsistencyError(f"{label}: cosets of the connection set overlap")
    return build_graph(basis, directions, label)


def _checked(graph: PeisertGraph, witness: Iterable[Element]) -> Construction:
    members = frozenset(int(x) for x in witness)
    if len(members) != graph.q or 0 not in members or not graph.is_clique(members):
        raise InconsistencyError(f"{graph.label}: witness is not a q-clique through 0")
    return Construction(graph, members)


def extremal_construction(
    tower: FieldTower, basis: TowerBasis | None = None
) -> Construction:
    """Type-(p^(n-k) + 1, q) graph without the strict-EKR property, for n > 1.

    With k the largest proper divisor of n, d = n / k and K = F_{p^k}, U is the
    K-span of ``1, eps, ..., eps^(d-2)`` and
    ``S = F_q^* + sum_{u in U} (u + beta) F_q^*``.
    The clique witness is ``U + beta K``.

    Raises:
        InvalidInputError: For prime q.
    """
    if tower.n == 1:
        raise InvalidInputError("prime q: use ls_graph")
    basis = basis or default_basis(tower)
    k = largest_proper_divisor(tower.n)
    d = tower.n // k
    scalars = tower.subfield_elements(k)
    u = span(tower, scalars, [tower.power(tower.epsilon, i) for i in range(d - 1)])
    representatives = [1] + [tower.add(x, basis.beta) for x in u.tolist()]
    graph = _from_cosets(basis, representatives, f"extremal q={tower.q}")
    if graph.m != tower.p ** (tower.n - k) + 1:
        raise InconsistencyError(f"extremal construction has m={graph.m}")
    return _checked(graph, span(tower, scalars, [*u.tolist(), basis.beta]).tolist())


def ls_graph(p: int) -> Construction:
    """Type-((p + 3) / 2, p) graph of the points ``(x, x^((p+1)/2))`` over F_p.

    Raises:
        InvalidInputError: For p = 2 or a non-prime p.
    """
    if p == 2:
        raise InvalidInputError("ls_graph needs an odd prime")
    tower = make_tower(p, 1)
    basis = default_basis(tower)
    points = [
        basis.element(x, tower.power(x, (p + 1) // 2))
        for x in tower.fq_elements.tolist()
    ]
    directions = directions_of_elements(basis, points)
    if len(directions) != (p + 3) // 2:
        raise InconsistencyError(f"U_0 determines {len(directions)} directions")
    return _checked(build_graph(basis, directions, f"ls p={p}"), points)


def linear_hyperplane(tower: FieldTower, sub: int) -> IntArray:
    """The F_r-span of ``1, eps, ..., eps^(n/sub - 2)`` inside F_q, r = p^sub."""
    dimension = tower.n // sub
    gens = [tower.power(tower.epsilon, i) for i in range(dimension - 1)]
    return span(tower, tower.subfield_elements(sub), gens)


def _require_hyperplane(tower: FieldTower, elements: set[Element], sub: int) -> Element:
    """Return the least element of a hyperplane coset, or raise."""
    if tower.n % sub or sub == tower.n:
        raise InvalidInputError(f"F_{tower.p}^{sub} is not a proper subfield of F_q")
    dimension = tower.n // sub
    r = tower.p**sub
    if len(elements) != r ** (dimension - 1):
        raise InvalidInputError(
            f"a hyperplane of F_q over F_{r} has {r ** (dimension - 1)} points"
        )
    if any(not tower.in_subfield(x, tower.n) for x in elements):
        raise InvalidInputError("hyperplane points must lie in F_q")
    origin = min(elements)
    linear = np.array([tower.sub(x, origin) for x in elements], dtype=np.int64)
    member = np.zeros(tower.order, dtype=bool)
    member[linear] = True
    scalars = tower.subfield_elements(sub)
    closed = member[tower.add_array(linear[:, None], linear[None, :])].all()
    scaled = member[tower.mul_array(scalars[:, None], linear[None, :])].all()
    if not (closed and scaled):
        raise InvalidInputError("the set is not a coset of an F_r-subspace")
    return origin


def y_qn(basis: TowerBasis, hyperplane: Iterable[Element], sub: int) -> Construction:
    """``S(U) = F_q^* + sum_{u in U} (u + beta) F_q^*`` for a hyperplane coset U.

    Args:
        basis: Basis supplying beta.
        hyperplane: A coset of an (n/sub - 1)-dimensional F_r-subspace of F_q.
        sub: Degree of F_r over F_p.

    Raises:
        InvalidInputError: If U is not a hyperplane coset.
    """
    tower = basis.tower
    elements = {int(x) for x in hyperplane}
    origin = _require_hyperplane(tower, elements, sub)
    representatives = [1] + [tower.add(u, basis.beta) for u in sorted(elements)]
    graph = _from_cosets(basis, representatives, f"Y q={tower.q} r={tower.p**sub}")
    linear = [tower.sub(x, origin) for x in elements]
    witness = [
        tower.add(x, tower.mul(c, tower.add(basis.beta, origin)))
        for x in linear
        for c in tower.subfield_elements(sub).tolist()
    ]
    return _checked(graph, witness)


def oval(tower: FieldTower) -> IntArray:
    """``Q = {gamma in F_q^* : gamma^(r+1) = 1}`` for q = r^2, sorted."""
    r = square_root(tower.q)
    units = tower.fq_units
    return units[tower.power_array(units, r + 1) == 1]


def cq_elements(basis: TowerBasis) -> IntArray:
    """``{gamma^sqrt(q) + gamma beta : gamma in F_q}``, sorted."""
    tower = basis.tower
    r = square_root(tower.q)
    fq = tower.fq_elements
    points = tower.add_array(tower.power_array(fq, r), tower.mul_array(fq, basis.beta))
    return np.sort(points)


def oval_graph_xq(basis: TowerBasis) -> Construction:
    """The oval graph X_q with ``S = sum_{delta in Q} (delta + beta) F_q^*``.

    Raises:
        InvalidInputError: If q is not a square at least 4.
    """
    tower = basis.tower
    r = square_root(tower.q)
    q_oval = oval(tower)
    if len(q_oval) != r + 1:
        raise InconsistencyError(f"the oval has {len(q_oval)} points, expected {r + 1}")
    representatives = [tower.add(delta, basis.beta) for delta in q_oval.tolist()]
    graph = _from_cosets(basis, representatives, f"X q={tower.q}")
    return _checked(graph, cq_elements(basis).tolist())


def paley_graph(basis: TowerBasis) -> PeisertGraph:
    """The Paley graph on F_{q^2}: squares form (q + 1) / 2 cosets of F_q^*."""
    return generalized_paley_graph(basis, 2)


def generalized_paley_graph(basis: TowerBasis, d: int) -> PeisertGraph:
    """Cayley graph of the d-th powers of F_{q^2}^* for d dividing q + 1.

    Raises:
        InvalidInputError: If d < 2, d does not divide q + 1, or d = 2 with q even.
    """
    tower = basis.tower
    q = tower.q
    if d < 2 or (q + 1) % d:
        raise InvalidInputError(f"d={d} must be at least 2 and divide q+1={q + 1}")
    powers = tower.antilog_table[::d]
    return graph_from_connection_set(basis, powers.tolist(), f"GP(q^2={q * q}, d={d})")


# -- quadratic forms ------------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False)
class QuadraticForm:
    """A quadratic form ``sum_{i <= j} c_ij x_i x_j`` over F_r inside a tower.

    Attributes:
        tower: Tower containing F_r as the subfield of degree ``sub``.
        sub: Degree of F_r over F_p.
        coefficients: Upper-triangular square matrix; entries below the diagonal
            must be zero.
    """

    tower: FieldTower
    sub: int
    coefficients: tuple[tuple[Element, ...], ...]

    def __post_init__(self) -> None:
        """Check shape and that every coefficient lies in F_r."""
        size = len(self.coefficients)
        if any(len(row) != size for row in self.coefficients):
            raise InvalidInputError("coefficient matrix must be square")
        for i, row in enumerate(self.coefficients):
            for j, c in enumerate(row):
                if not self.tower.in_subfield(c, self.sub):
                    raise InvalidInputError(f"coefficient ({i}, {j}) is outside F_r")
                if j < i and c != 0:
                    raise InvalidInputError(
                        "coefficient matrix must be upper triangular"
                    )

    @property
    def dimension(self) -> int:
        """Number of variables."""
        return len(self.coefficients)

    @property
    def r(self) -> int:
        """Order of the base field."""
        return self.tower.p**self.sub

    def evaluate(self, vectors: npt.ArrayLike) -> IntArray:
        """Values on the rows of an array of coordinate vectors."""
        tower = self.tower
        x = np.asarray(vectors, dtype=np.int64)
        total = np.zeros(x.shape[:-1], dtype=np.int64)
        for i, j in itertools.combinations_with_replacement(range(self.dimension), 2):
            c = self.coefficients[i][j]
            if c:
                term = tower.mul_array(c, tower.mul_array(x[..., i], x[..., j]))
                total = tower.add_array(total, term)
        return total


def _form(
    tower: FieldTower, sub: int, entries: dict[tuple[int, int], Element], size: int
) -> QuadraticForm:
    rows = [[0] * size for _ in range(size)]
    for (i, j), c in entries.items():
        rows[i][j] = c
    return QuadraticForm(tower, sub, tuple(tuple(row) for row in rows))


def hyperbolic_form(tower: FieldTower, sub: int, e: int) -> QuadraticForm:
    """``x_1 x_2 + x_3 x_4 + ... + x_{2e-1} x_{2e}``."""
    return _form(tower, sub, {(2 * i, 2 * i + 1): 1 for i in range(e)}, 2 * e)


def zero_form(tower: FieldTower, sub: int, size: int) -> QuadraticForm:
    """The identically zero form."""
    return _form(tower, sub, {}, size)


def norm_difference_form(tower: FieldTower, sub: int, d: Element) -> QuadraticForm:
    """``N(x_1 + y_1 alpha) - N(x_2 + y_2 alpha)`` in ``(x_1, y_1, x_2, y_2)``.

    For odd r, ``alpha^2 = d`` with d a non-square and the form is
    ``x_1^2 - d y_1^2 - x_2^2 + d y_2^2``. For even r, ``alpha^2 = alpha + d``
    with trace-one d and the form is
    ``x_1^2 + x_1 y_1 + d y_1^2 + x_2^2 + x_2 y_2 + d y_2^2``.
    """
    neg = tower.neg
    if tower.p == 2:
        entries = {(0, 0): 1, (0, 1): 1, (1, 1): d, (2, 2): 1, (2, 3): 1, (3, 3): d}
    else:
        entries = {(0, 0): 1, (1, 1): neg(d), (2, 2): neg(1), (3, 3): d}
    return _form(tower, sub, entries, 4)


def change_of_variables(
    tower: FieldTower, d: Element
) -> tuple[tuple[Element, ...], ...]:
    """Matrix B with ``hyperbolic(B x) = norm_difference(x)`` on four variables."""
    minus = tower.neg
    if tower.p == 2:
        return ((1, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1), (0, d, 1, d))
    return ((1, 0, 1, 0), (1, 0, minus(1), 0), (0, d, 0, d), (0, minus(1), 0, 1))


def determinant(tower: FieldTower, matrix: Sequence[Sequence[Element]]) -> Element:
    """Determinant by Gaussian elimination over the field."""
    rows = [list(row) for row in matrix]
    size = len(rows)
    det = 1
    for col in range(size):
        pivot = next((i for i in range(col, size) if rows[i][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = tower.neg(det)
        det = tower.mul(det, rows[col][col])
        inverse = tower.inv(rows[col][col])
        for i in range(col + 1, size):
            factor = tower.mul(rows[i][col], inverse)
            if factor:
                rows[i] = [
                    tower.sub(a, tower.mul(factor, b))
                    for a, b in zip(rows[i], rows[col], strict=True)
                ]
    return det


def all_vectors(tower: FieldTower, sub: int, size: int) -> IntArray:
    """Every vector of F_r^size, lexicographic in the index order of F_r."""
    scalars = tower.subfield_elements(sub)
    grids = np.meshgrid(*([scalars] * size), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _apply(
    tower: FieldTower, matrix: Sequence[Sequence[Element]], vectors: IntArray
) -> IntArray:
    out = np.zeros_like(vectors)
    for i, row in enumerate(matrix):
        for j, c in enumerate(row):
            if c:
                term = tower.mul_array(c, vectors[:, j])
                out[:, i] = tower.add_array(out[:, i], term)
    return out


def form_equivalence_check(
    f1: QuadraticForm, f2: QuadraticForm, matrix: Sequence[Sequence[Element]]
) -> bool:
    """True iff ``f1(B x) = f2(x)`` for every vector x.

    Raises:
        InvalidInputError: For mismatched dimensions or a singular B.
    """
    if f1.dimension != f2.dimension or len(matrix) != f1.dimension:
        raise InvalidInputError("dimensions of the forms and the matrix differ")
    tower = f1.tower
    if determinant(tower, matrix) == 0:
        raise InvalidInputError("singular change of variables")
    vectors = all_vectors(tower, f1.sub, f1.dimension)
    transformed = f1.evaluate(_apply(tower, matrix, vectors))
    return bool(np.array_equal(transformed, f2.evaluate(vectors)))


@dataclasses.dataclass(frozen=True, eq=False)
class FormGraph:
    """Cayley graph on F_r^N with ``u ~ v`` iff ``f(u - v) = 0`` and ``u != v``."""

    form: QuadraticForm

    @property
    def order(self) -> int:
        """Number of vertices."""
        return self.form.r**self.form.dimension

    @functools.cached_property
    def vertices(self) -> IntArray:
        """Coordinate vectors in vertex order."""
        return all_vectors(self.form.tower, self.form.sub, self.form.dimension)

    @functools.cached_property
    def _ranks(self) -> IntArray:
        tower = self.form.tower
        rank = np.full(tower.order, -1, dtype=np.int64)
        rank[tower.subfield_elements(self.form.sub)] = np.arange(self.form.r)
        return rank

    def index_of(self, vectors: npt.ArrayLike) -> IntArray:
        """Vertex indices of coordinate vectors."""
        digits = self._ranks[np.asarray(vectors, dtype=np.int64)]
        weights = self.form.r ** np.arange(self.form.dimension - 1, -1, -1)
        return digits @ weights

    @functools.cached_property
    def zero_mask(self) -> npt.NDArray[np.bool_]:
        """Vertices (as vectors) on which the form vanishes."""
        return self.form.evaluate(self.vertices) == 0

    @functools.cached_property
    def adjacency(self) -> npt.NDArray[np.bool_]:
        """Dense adjacency matrix."""
        tower = self.form.tower
        r = self.form.r
        scalars = tower.subfield_elements(self.form.sub)
        difference = self._ranks[tower.sub_array(scalars[:, None], scalars[None, :])]
        digits = self._ranks[self.vertices]
        index = np.zeros((self.order, self.order), dtype=np.int32)
        for col in range(self.form.dimension):
            index *= r
            column = digits[:, col]
            index += difference[column[:, None], column[None, :]].astype(np.int32)
        adjacency = self.zero_mask[index]
        np.fill_diagonal(adjacency, False)
        return adjacency

    def maximal_cliques_through_zero(self) -> list[frozenset[int]]:
        """Maximal cliques containing the zero vector, as vertex-index sets."""
        neighbours = np.flatnonzero(self.adjacency[0])
        local = self.adjacency[np.ix_(neighbours, neighbours)]
        masks = [
            int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
            for row in local
        ]
        cliques = []
        for mask in enumerate_maximal_cliques(masks):
            members = [
                int(neighbours[i]) for i in range(len(neighbours)) if mask >> i & 1
            ]
            cliques.append(frozenset([0, *members]))
        return sorted(cliques, key=sorted)


def quad_form_graph(form: QuadraticForm) -> FormGraph:
    """The graph Y_f of a quadratic form.

    Raises:
        InvalidInputError: Above the vertex cap.
    """
    if form.r**form.dimension > MAX_FORM_VERTICES:
        raise InvalidInputError(
            f"form graphs are capped at {MAX_FORM_VERTICES} vertices"
        )
    return FormGraph(form)


def vo_plus(e: int, r: int, tower: FieldTower | None = None) -> FormGraph:
    """The affine polar graph VO+(2e, r).

    Args:
        e: Half the dimension, at least 2.
        r: Order of the base field.
        tower: Tower containing F_r; defaults to the tower with q = r.

    Raises:
        InvalidInputError: For e < 2, a bad r or above the vertex cap.
    """
    if e < 2:
        raise InvalidInputError("VO+(2e, r) needs e >= 2")
    p, s = prime_power(r)
    if r ** (2 * e) > MAX_FORM_VERTICES:
        raise InvalidInputError(
            f"form graphs are capped at {MAX_FORM_VERTICES} vertices"
        )
    tower = tower or make_tower(p, s)
    if tower.p != p or tower.degree % s:
        raise InvalidInputError(f"tower does not contain F_{r}")
    return quad_form_graph(hyperbolic_form(tower, s, e))


# -- explicit isomorphisms ------------------------------------------------------


@dataclasses.dataclass(frozen=True, eq=False)
class PolarIsomorphism:
    """A verified isomorphism from X_q onto VO+(4, r), passing through Y_{q,2}(F_r).

    Attributes:
        source: The oval graph X_q.
        intermediate: Y_{q,2}(F_r) over the same basis.
        target: The affine polar graph.
        collineation: ``collineation[z]`` is the Y_{q,2}(F_r) vertex of element z.
        mapping: ``mapping[z]`` is the VO+ vertex of element z.
        norm_mapping: The direct map through the norm-difference form and B.
    """

    source: PeisertGraph
    intermediate: PeisertGraph
    target: FormGraph
    collineation: IntArray
    mapping: IntArray
    norm_mapping: IntArray

    def inverse(self) -> IntArray:
        """The inverse vertex map."""
        inverse = np.empty_like(self.mapping)
        inverse[self.mapping] = np.arange(len(self.mapping))
        return inverse


def _verify_isomorphism(
    source: npt.NDArray[np.bool_], target: npt.NDArray[np.bool_], mapping: IntArray
) -> None:
    n = len(source)
    if not np.array_equal(np.sort(mapping), np.arange(n)):
        raise InconsistencyError("vertex map is not a bijection")
    if not np.array_equal(target[np.ix_(mapping, mapping)], source):
        raise InconsistencyError("vertex map does not preserve adjacency")


def _alpha(tower: FieldTower, s: int) -> tuple[Element, Element]:
    """``(d, alpha)`` with ``F_q = F_r(alpha)`` for q = r^2, r = p^s."""
    if tower.p == 2:
        d = tower.choose_trace_one(s)
        roots = tower.roots((d, 1, 1))
    else:
        d = tower.least_nonsquare(s)
        roots = tower.roots((tower.neg(d), 0, 1))
    return d, min(roots)


def _split(tower: FieldTower, s: int, alpha: Element) -> tuple[IntArray, IntArray]:
    """Tables x, y with ``z = x[z] + y[z] alpha`` for z in F_q, x and y in F_r."""
    scalars = tower.subfield_elements(s)
    x_grid, y_grid = (g.ravel() for g in np.meshgrid(scalars, scalars, indexing="ij"))
    gamma = tower.add_array(x_grid, tower.mul_array(y_grid, alpha))
    split_x = np.empty(tower.order, dtype=np.int64)
    split_y = np.empty(tower.order, dtype=np.int64)
    split_x[gamma] = x_grid
    split_y[gamma] = y_grid
    return split_x, split_y


def matrix_a(basis: TowerBasis) -> tuple[tuple[Element, Element], ...]:
    """Matrix A ``[[1, 1], [gamma, gamma^r]]`` for q = r^2.

    gamma is the least element of F_q with ``gamma^r != gamma``.

    Raises:
        InvalidInputError: If q is not a square.
    """
    tower = basis.tower
    r = square_root(tower.q)
    gamma = min(x for x in tower.fq_elements.tolist() if tower.power(x, r) != x)
    return (1, 1), (gamma, tower.power(gamma, r))


def _collineation(
    basis: TowerBasis, matrix: Sequence[Sequence[Element]]
) -> tuple[IntArray, IntArray]:
    """New ``(x, y)`` of every vertex ``x + y beta``, M acting on ``(y, x)``."""
    tower = basis.tower
    (a, b), (c, d) = matrix
    x, y = basis.coordinates
    new_y = tower.add_array(tower.mul_array(a, y), tower.mul_array(b, x))
    new_x = tower.add_array(tower.mul_array(c, y), tower.mul_array(d, x))
    return new_x, new_y


def xq_y_isomorphism(basis: TowerBasis) -> tuple[PeisertGraph, IntArray]:
    """The collineation with matrix A from X_q onto Y_{q,2}(F_r), verified.

    Y_{q,2}(F_r) is :func:`y_qn` with U = F_r, the hyperplane of F_q over F_r.

    Returns:
        Y_{q,2}(F_r) and ``image[z]``, the vertex z of X_q is sent to.

    Raises:
        InvalidInputError: If q is not a square.
    """
    tower = basis.tower
    s = tower.n // 2
    matrix = matrix_a(basis)
    if determinant(tower, matrix) == 0:
        raise InconsistencyError("matrix A is singular")
    source = oval_graph_xq(basis).graph
    target = y_qn(basis, linear_hyperplane(tower, s), s).graph
    new_x, new_y = _collineation(basis, matrix)
    image = tower.add_array(new_x, tower.mul_array(new_y, basis.beta))
    _verify_isomorphism(source.adjacency, target.adjacency, image)
    return target, image


def determinant_form(tower: FieldTower, sub: int) -> QuadraticForm:
    """``x_1 y_2 - y_1 x_2`` in ``(x_1, y_1, x_2, y_2)``.

    Splitting both coordinates of ``x + y beta`` over ``F_r(alpha)``,
    ``x y^r - x^r y = (alpha^r - alpha)(x_1 y_2 - y_1 x_2)``, so this form vanishes
    exactly on the connection set of Y_{q,2}(F_r) and on 0.
    """
    return _form(tower, sub, {(0, 3): 1, (1, 2): tower.neg(1)}, 4)


def determinant_change_of_variables(
    tower: FieldTower,
) -> tuple[tuple[Element, ...], ...]:
    """Matrix C with ``hyperbolic(C x) = determinant_form(x)`` on four variables."""
    return ((1, 0, 0, 0), (0, 0, 0, 1), (0, tower.neg(1), 0, 0), (0, 0, 1, 0))


def xq_vo_isomorphism(r: int) -> PolarIsomorphism:
    """Explicit isomorphism X_{r^2} -> VO+(4, r), verified on every pair.

    X_q is first carried onto Y_{q,2}(F_r) by the collineation with matrix A. Each
    vertex ``x + y beta`` of Y is written with ``x = x_1 + y_1 alpha`` and
    ``y = x_2 + y_2 alpha`` over F_r, and the vector ``(x_1, y_1, x_2, y_2)`` is sent
    through C, which turns the determinant form into the hyperbolic form.

    The direct route is checked as well: a vertex ``gamma_2 + gamma_1 beta`` of X_q
    gives the vector of ``(gamma_1, gamma_2)``, and B turns the norm difference into
    the hyperbolic form.

    Raises:
        InvalidInputError: For r outside 2..5.
    """
    if not 2 <= r <= 5:
        raise InvalidInputError("the polar isomorphism is built for 2 <= r <= 5")
    tower = tower_for_q(r * r)
    s = tower.n // 2
    basis = default_basis(tower)
    source = oval_graph_xq(basis).graph
    intermediate, collineation = xq_y_isomorphism(basis)
    d, alpha = _alpha(tower, s)
    split_x, split_y = _split(tower, s, alpha)
    target = vo_plus(2, r, tower)
    first, second = basis.coordinates

    matrix_c = determinant_change_of_variables(tower)
    if not form_equivalence_check(target.form, determinant_form(tower, s), matrix_c):
        raise InconsistencyError("C does not match the forms")
    y_vectors = np.stack(
        [split_x[first], split_y[first], split_x[second], split_y[second]], axis=1
    )
    from_y = target.index_of(_apply(tower, matrix_c, y_vectors))
    _verify_isomorphism(intermediate.adjacency, target.adjacency, from_y)
    mapping = from_y[collineation]
    _verify_isomorphism(source.adjacency, target.adjacency, mapping)

    matrix_b = change_of_variables(tower, d)
    if not form_equivalence_check(
        target.form, norm_difference_form(tower, s, d), matrix_b
    ):
        raise InconsistencyError("B does not match the forms")
    x_vectors = np.stack(
        [split_x[second], split_y[second], split_x[first], split_y[first]], axis=1
    )
    norm_mapping = target.index_of(_apply(tower, matrix_b, x_vectors))
    _verify_isomorphism(source.adjacency, target.adjacency, norm_mapping)
    logger.debug("X_%d -> Y -> VO+(4, %d) verified on %d vertices", r * r, r, r**4)
    return PolarIsomorphism(
        source, intermediate, target, collineation, mapping, norm_mapping
    )


def extremal_to_oval_map(g: PeisertGraph) -> IntArray:
    """Additive isomorphism from X_q onto an extremal graph over square q.

    The witness clique V of g is ``a F_r + b F_r``; with ``beta' = a / b`` the map is
    the collineation with :func:`matrix_a` on ``(y, x)`` coordinates, which lands on
    Y_{q,2}(F_r), then ``x + y beta -> b (x + y beta')``.

    Returns:
        ``mapping[z]`` is the image in g of the X_q vertex z, where X_q is built
        on g's basis.

    Raises:
        InvalidInputError: If g has the strict-EKR property or q is not a square.
        InconsistencyError: If the composed map is not an isomorphism.
    """
    tower = g.basis.tower
    r = square_root(tower.q)
    if g.m != r + 1:
        raise InvalidInputError(f"an extremal graph over q={tower.q} has m={r + 1}")
    holds, witness = strict_ekr(g)
    if holds or witness is None:
        raise InvalidInputError("the graph has the strict-EKR property")
    s = tower.n // 2
    if k_linearity(g.basis, (g.basis.point(v) for v in witness.vertices)) is None:
        raise InconsistencyError("the witness clique is not a subspace")
    nonzero = sorted(witness.vertices - {0})
    b = nonzero[0]
    a = next(v for v in nonzero if g.basis.direction_of(v) != g.basis.direction_of(b))
    beta_prime = tower.div(a, b)

    oval_graph = oval_graph_xq(g.basis).graph
    new_x, new_y = _collineation(g.basis, matrix_a(g.basis))
    rebased = tower.add_array(new_x, tower.mul_array(new_y, beta_prime))
    image = tower.mul_array(b, rebased)
    if set(image[oval_graph.connection_set].tolist()) != set(g.connection_set.tolist()):
        raise InconsistencyError("the collineation does not carry X_q onto the graph")
    _verify_isomorphism(oval_graph.adjacency, g.adjacency, image)
    logger.debug(
        "mapped X_%d onto %s with F_%d-basis (%d, %d)",
        tower.q,
        g.label,
        tower.p**s,
        a,
        b,
    )
    return image


def extremal_vo_isomorphism(g: PeisertGraph) -> IntArray:
    """Isomorphism from an extremal graph over q = r^2 <= 25 onto VO+(4, r).

    The graph must use the default tower and beta for its q, the setting the
    X_q to VO+ map is built in.
    """
    polar = xq_vo_isomorphism(square_root(g.q))
    source = polar.source.basis
    if source.tower is not g.basis.tower or source.beta != g.basis.beta:
        raise InvalidInputError(
            "the graph must use the default tower and beta for its q"
        )
    to_graph = extremal_to_oval_map(g)
    from_graph = np.empty_like(to_graph)
    from_graph[to_graph] = np.arange(len(to_graph))
    mapping = polar.mapping[from_graph]
    _verify_isomorphism(g.adjacency, polar.target.adjacency, mapping)
    return mapping


def decompose_cube_clique(
    g: PeisertGraph, witness: Iterable[Element]
) -> tuple[Element, Element, Element]:
    """Split a witness clique over q = r^3 as ``a F_r + b F_r + c F_r``.

    a and b span the r^2 points the clique shares with one line through 0, so
    they are F_q-dependent; c lies off that line.

    Raises:
        InvalidInputError: If q is not a cube or the set is not such a clique.
    """
    tower = g.basis.tower
    p, n = prime_power(tower.q)
    if n % 3:
        raise InvalidInputError(f"q={tower.q} is not a cube")
    sub = n // 3
    r = p**sub
    members = sorted({int(v) for v in witness})
    nonzero = [v for v in members if v]
    by_direction: dict[int, list[int]] = {}
    for v in nonzero:
        by_direction.setdefault(g.basis.direction_of(v), []).append(v)
    heavy = [vs for vs in by_direction.values() if len(vs) == r * r - 1]
    if len(heavy) != 1:
        raise InvalidInputError("no line meets the clique in r^2 points")
    plane = heavy[0]
    a = plane[0]
    b = next(v for v in plane if not tower.in_subfield(tower.div(v, a), sub))
    c = next(v for v in nonzero if v not in plane)
    scalars = tower.subfield_elements(sub)
    if sorted(span(tower, scalars, [a, b, c]).tolist()) != members:
        raise InvalidInputError("the clique is not a F_r + b F_r + c F_r")
    if tower.in_subfield(tower.div(c, a), tower.n):
        raise InconsistencyError("c / a lies in F_q")
    return a, b, c


def example_q32() -> tuple[Construction, Construction]:
    """The two non-isomorphic type-(17, 32) extremal graphs over F_1024.

    epsilon is a root of ``t^5 + t^2 + 1`` and beta a root of ``t^2 + t + 1``; the
    witness subspaces over F_2 are spanned by
    ``1, eps, beta, eps^16 beta, eps^21 + eps^9 beta`` and by
    ``1, eps, eps^2, eps^3, beta``.
    """
    tower = make_tower(
        2, 5, fq_modulus=EXAMPLE_Q32_FQ_MODULUS, fq2_modulus=EXAMPLE_Q32_FQ2_MODULUS
    )
    basis = default_basis(tower)
    eps, beta = tower.epsilon, basis.beta
    power = functools.partial(tower.power, eps)
    generators = (
        [
            1,
            eps,
            beta,
            tower.mul(power(16), beta),
            tower.add(power(21), tower.mul(power(9), beta)),
        ],
        [1, eps, power(2), power(3), beta],
    )
    built = []
    for index, gens in enumerate(generators, start=1):
        subspace = span(tower, tower.subfield_elements(1), gens)
        if len(subspace) != 32:
            raise InconsistencyError(f"generators of V_{index} are dependent")
        connection = np.unique(
            tower.mul_array(subspace[1:, None], tower.fq_units[None, :])
        )
        graph = graph_from_connection_set(
            basis, connection.tolist(), f"X_{index} q=32"
        )
        if graph.m != 17:
            raise InconsistencyError(f"X_{index} has type ({graph.m}, 32)")
        built.append(_checked(graph, subspace.tolist()))
    return built[0], built[1]
