"""Field towers F_p < F_q < F_{q^2} backed by discrete-log and Zech tables.

The whole tower lives in a single table-driven field of order p^{2n}. Elements are
plain integers in polynomial encoding: the base-p digits of an element are the
coefficients of its representative modulo the defining polynomial, so the prime
field is ``0..p-1`` and, for p = 2, addition is XOR. Subfields are the fixed sets of
Frobenius powers and are read off the discrete-log table.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from typing import TypeAlias

import galois
import numpy as np
import numpy.typing as npt

from .errors import InvalidInputError

logger = logging.getLogger(__name__)

Element: TypeAlias = int
"""An element of F_{q^2} in polynomial encoding."""

Polynomial: TypeAlias = tuple[int, ...]
"""Polynomial coefficients ordered from the constant term upwards."""

IntArray: TypeAlias = npt.NDArray[np.int64]

MAX_FIELD_ORDER = 2**20


def divisors(value: int) -> list[int]:
    """Positive divisors of ``value`` in increasing order."""
    return [d for d in range(1, value + 1) if value % d == 0]


def largest_proper_divisor(value: int) -> int:
    """Largest divisor of ``value`` that is smaller than ``value`` (1 for primes)."""
    return max(d for d in divisors(value) if d < value) if value > 1 else 1


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power ``q`` into ``(p, n)``.

    Raises:
        InvalidInputError: If ``q`` is not a prime power.
    """
    if q < 2:
        raise InvalidInputError(f"q={q} is not a prime power")
    p = min(d for d in divisors(q) if d > 1)
    n = round(math.log(q, p))
    if p**n != q:
        raise InvalidInputError(f"q={q} is not a prime power")
    return p, n


def square_root(q: int) -> int:
    """Integer square root of a perfect square.

    Raises:
        InvalidInputError: If ``q`` is not a square.
    """
    r = math.isqrt(q)
    if r * r != q:
        raise InvalidInputError(f"q={q} is not a square")
    return r


def _as_galois_poly(
    coeffs: Sequence[int], field: type[galois.FieldArray]
) -> galois.Poly:
    return galois.Poly(list(reversed(list(coeffs))), field=field)


def least_irreducible(p: int, degree: int) -> Polynomial:
    """Lexicographically least monic irreducible polynomial over F_p.

    Coefficients are compared from the constant term, so the search runs through
    ``(c_0, c_1, ..., c_{degree-1})`` in lexicographic order.
    """
    prime_field = galois.GF(p)
    for lower in itertools.product(range(p), repeat=degree):
        if lower[0] == 0:
            continue
        coeffs = (*lower, 1)
        if _as_galois_poly(coeffs, prime_field).is_irreducible():
            return coeffs
    raise InvalidInputError(f"no irreducible polynomial of degree {degree} over F_{p}")


def _broadcast(a: npt.ArrayLike, b: npt.ArrayLike) -> tuple[IntArray, IntArray]:
    left, right = np.broadcast_arrays(
        np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    )
    return left, right


@dataclasses.dataclass(frozen=True, eq=False)
class FieldTower:
    """Arithmetic context for F_p < F_q = F_{p^n} < F_{q^2}.

    Attributes:
        p: Characteristic.
        n: Degree of F_q over F_p.
        modulus: Degree-2n irreducible polynomial over F_p defining F_{q^2}.
        fq_modulus: Minimal polynomial of ``epsilon`` over F_p (degree n).
        fq2_modulus: Minimal polynomial of ``beta`` over F_q (degree 2, with
            coefficients in F_q).
        generator: Least-index primitive element of F_{q^2}.
        epsilon: Primitive element of F_q.
        beta: Default element outside F_q, a root of ``fq2_modulus``.
        log_table: ``log_table[x]`` is the discrete log of x, -1 for zero.
        antilog_table: ``antilog_table[k]`` is ``generator**k``.
        zech_table: ``zech_table[k]`` is ``log(1 + generator**k)``, -1 when zero.
    """

    p: int
    n: int
    modulus: Polynomial
    fq_modulus: Polynomial
    fq2_modulus: Polynomial
    generator: Element
    epsilon: Element
    beta: Element
    log_table: IntArray = dataclasses.field(repr=False)
    antilog_table: IntArray = dataclasses.field(repr=False)
    zech_table: IntArray = dataclasses.field(repr=False)

    def __post_init__(self) -> None:
        """Keep list copies of the tables for fast scalar lookups."""
        object.__setattr__(self, "_log", self.log_table.tolist())
        object.__setattr__(self, "_antilog", self.antilog_table.tolist())
        object.__setattr__(self, "_zech", self.zech_table.tolist())

    @property
    def q(self) -> int:
        """Order of the middle field F_q."""
        return self.p**self.n

    @property
    def order(self) -> int:
        """Order of the top field F_{q^2}."""
        return self.q * self.q

    @property
    def unit_order(self) -> int:
        """Order of the multiplicative group of F_{q^2}."""
        return self.order - 1

    @property
    def degree(self) -> int:
        """Degree of F_{q^2} over F_p."""
        return 2 * self.n

    @functools.cached_property
    def minus_one(self) -> Element:
        """The element -1."""
        return 1 if self.p == 2 else self._antilog[self.unit_order // 2]

    # -- scalar arithmetic -------------------------------------------------

    def log(self, x: Element) -> int:
        """Discrete log of a nonzero element."""
        if x == 0:
            raise ZeroDivisionError("log of zero")
        return self._log[x]

    def exp(self, k: int) -> Element:
        """``generator**k``."""
        return self._antilog[k % self.unit_order]

    def add(self, a: Element, b: Element) -> Element:
        """Field addition."""
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.unit_order]
        return 0 if z < 0 else self._antilog[(la + z) % self.unit_order]

    def neg(self, a: Element) -> Element:
        """Additive inverse."""
        return a if self.p == 2 else self.mul(a, self.minus_one)

    def sub(self, a: Element, b: Element) -> Element:
        """Field subtraction."""
        return self.add(a, self.neg(b))

    def mul(self, a: Element, b: Element) -> Element:
        """Field multiplication."""
        if a == 0 or b == 0:
            return 0
        return self._antilog[(self._log[a] + self._log[b]) % self.unit_order]

    def inv(self, a: Element) -> Element:
        """Multiplicative inverse."""
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._antilog[(-self._log[a]) % self.unit_order]

    def div(self, a: Element, b: Element) -> Element:
        """Field division."""
        return self.mul(a, self.inv(b))

    def power(self, a: Element, e: int) -> Element:
        """``a**e``; negative exponents are allowed for nonzero ``a``."""
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._antilog[(self._log[a] * e) % self.unit_order]

    def frobenius(self, x: Element, k: int = 1) -> Element:
        """``x**(p**k)``."""
        return self.power(x, pow(self.p, k % self.degree))

    def multiplicative_order(self, x: Element) -> int:
        """Order of a nonzero element in the multiplicative group."""
        return self.unit_order // math.gcd(self.log(x), self.unit_order)

    def sum(self, values: Iterable[Element]) -> Element:
        """Sum of field elements."""
        return functools.reduce(self.add, values, 0)

    # -- vectorized arithmetic -------------------------------------------

    def mul_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> IntArray:
        """Elementwise product of broadcastable arrays of elements."""
        a, b = _broadcast(a, b)
        logs = (self.log_table[a] + self.log_table[b]) % self.unit_order
        out = self.antilog_table[logs]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> IntArray:
        """Elementwise sum of broadcastable arrays of elements."""
        a, b = _broadcast(a, b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        la = self.log_table[a]
        z = self.zech_table[(self.log_table[b] - la) % self.unit_order]
        out = np.where(z < 0, 0, self.antilog_table[(la + z) % self.unit_order])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def neg_array(self, a: npt.ArrayLike) -> IntArray:
        """Elementwise additive inverse."""
        a = np.asarray(a, dtype=np.int64)
        return a.copy() if self.p == 2 else self.mul_array(a, self.minus_one)

    def sub_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> IntArray:
        """Elementwise difference of broadcastable arrays of elements."""
        return self.add_array(a, self.neg_array(b))

    def div_array(self, a: npt.ArrayLike, b: npt.ArrayLike) -> IntArray:
        """Elementwise quotient; ``b`` must not contain zero."""
        b = np.asarray(b, dtype=np.int64)
        if np.any(b == 0):
            raise ZeroDivisionError("division by zero")
        inverse = self.antilog_table[(-self.log_table[b]) % self.unit_order]
        return self.mul_array(a, inverse)

    def power_array(self, a: npt.ArrayLike, e: int) -> IntArray:
        """Elementwise ``a**e`` for a non-negative integer ``e``."""
        a = np.asarray(a, dtype=np.int64)
        out = self.antilog_table[(self.log_table[a] * e) % self.unit_order]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def frobenius_array(self, a: npt.ArrayLike, k: int = 1) -> IntArray:
        """Elementwise ``a**(p**k)``."""
        return self.power_array(a, pow(self.p, k % self.degree))

    def evaluate(self, coeffs: Sequence[Element], x: npt.ArrayLike) -> IntArray:
        """Evaluate a polynomial (constant term first) at every entry of ``x``."""
        x = np.asarray(x, dtype=np.int64)
        value = np.zeros_like(x)
        for c in reversed(list(coeffs)):
            value = self.add_array(self.mul_array(value, x), c)
        return value

    def roots(self, coeffs: Sequence[Element]) -> list[Element]:
        """All roots in F_{q^2} of a polynomial given constant term first."""
        values = self.evaluate(coeffs, np.arange(self.order))
        return np.flatnonzero(values == 0).tolist()

    # -- subfields ---------------------------------------------------------

    def _check_subdegree(self, sub: int, degree: int | None = None) -> int:
        degree = self.degree if degree is None else degree
        if degree < 1 or self.degree % degree:
            raise InvalidInputError(
                f"F_{self.p}^{degree} is not a subfield of F_{self.order}"
            )
        if sub < 1 or degree % sub:
            raise InvalidInputError(
                f"degree {sub} does not divide extension degree {degree}"
            )
        return degree

    def subfield_step(self, sub: int) -> int:
        """Log step between consecutive nonzero elements of F_{p^sub}."""
        self._check_subdegree(sub)
        return self.unit_order // (self.p**sub - 1)

    def in_subfield(self, x: Element, sub: int) -> bool:
        """True iff ``x`` lies in F_{p^sub}, i.e. ``x**(p**sub) == x``."""
        step = self.subfield_step(sub)
        return x == 0 or self._log[x] % step == 0

    def in_subfield_array(self, x: npt.ArrayLike, sub: int) -> npt.NDArray[np.bool_]:
        """Vectorized :meth:`in_subfield`."""
        x = np.asarray(x, dtype=np.int64)
        step = self.subfield_step(sub)
        return (x == 0) | (self.log_table[x] % step == 0)

    def subfield_elements(self, sub: int) -> IntArray:
        """Elements of F_{p^sub}, sorted by index."""
        step = self.subfield_step(sub)
        return np.sort(np.concatenate(([0], self.antilog_table[::step])))

    @functools.cached_property
    def fq_elements(self) -> IntArray:
        """Elements of F_q, sorted by index."""
        return self.subfield_elements(self.n)

    @functools.cached_property
    def fq_units(self) -> IntArray:
        """Nonzero elements of F_q, sorted by index."""
        return self.fq_elements[1:]

    def trace_to(self, x: Element, sub: int, degree: int | None = None) -> Element:
        """Trace of ``x`` from F_{p^degree} down to F_{p^sub}.

        ``degree`` defaults to the top field. The result is
        ``x + x**(p**sub) + x**(p**(2 sub)) + ...`` with ``degree // sub`` terms.

        Raises:
            InvalidInputError: If the fields are not nested or ``x`` is outside
                F_{p^degree}.
        """
        degree = self._check_subdegree(sub, degree)
        if not self.in_subfield(x, degree):
            raise InvalidInputError(f"element {x} is not in F_{self.p}^{degree}")
        return self.sum(self.frobenius(x, sub * i) for i in range(degree // sub))

    def norm_to(self, x: Element, sub: int, degree: int | None = None) -> Element:
        """Norm of ``x`` from F_{p^degree} down to F_{p^sub}."""
        degree = self._check_subdegree(sub, degree)
        if not self.in_subfield(x, degree):
            raise InvalidInputError(f"element {x} is not in F_{self.p}^{degree}")
        return self.power(x, (self.p**degree - 1) // (self.p**sub - 1))

    def trace_array(self, x: npt.ArrayLike, sub: int = 1) -> IntArray:
        """Vectorized trace from the top field down to F_{p^sub}."""
        self._check_subdegree(sub)
        x = np.asarray(x, dtype=np.int64)
        total = np.zeros_like(x)
        for i in range(self.degree // sub):
            total = self.add_array(total, self.frobenius_array(x, sub * i))
        return total

    def choose_trace_one(self, degree: int) -> Element:
        """Least-index d in F_{p^degree} whose absolute trace is 1."""
        for x in self.subfield_elements(degree).tolist():
            if self.trace_to(x, 1, degree) == 1:
                return x
        raise InvalidInputError(f"no trace-one element in F_{self.p}^{degree}")

    def least_nonsquare(self, degree: int) -> Element:
        """Least-index non-square of F_{p^degree} (odd characteristic)."""
        if self.p == 2:
            raise InvalidInputError("every element is a square in characteristic 2")
        half = (self.p**degree - 1) // 2
        for x in self.subfield_elements(degree)[1:].tolist():
            if self.power(x, half) == self.minus_one:
                return x
        raise InvalidInputError(f"no non-square in F_{self.p}^{degree}")

    def minimal_polynomial(self, x: Element, sub: int = 1) -> tuple[Element, ...]:
        """Minimal polynomial of ``x`` over F_{p^sub}, constant term first."""
        self._check_subdegree(sub)
        conjugates = [x]
        while (nxt := self.frobenius(conjugates[-1], sub)) != x:
            conjugates.append(nxt)
        poly: list[Element] = [1]
        for c in conjugates:
            shifted = [0, *poly]
            scaled = [self.mul(self.neg(c), a) for a in poly] + [0]
            poly = [self.add(a, b) for a, b in zip(shifted, scaled, strict=True)]
        return tuple(poly)


def make_tower(
    p: int,
    n: int,
    *,
    modulus: Sequence[int] | None = None,
    fq_modulus: Sequence[int] | None = None,
    fq2_modulus: Sequence[int] | None = None,
) -> FieldTower:
    """Build the tower F_p < F_{p^n} < F_{p^{2n}}.

    Without overrides every choice is deterministic: the lexicographically least
    irreducible polynomial of degree 2n, the least-index primitive element as
    generator, the least-index element of order q-1 as epsilon and the least-index
    element outside F_q as beta. Towers are cached, so equal arguments return the
    same object.

    Args:
        p: Characteristic.
        n: Degree of F_q over F_p.
        modulus: Degree-2n irreducible polynomial over F_p for the top field.
        fq_modulus: Degree-n primitive polynomial over F_p; epsilon becomes its
            least-index root.
        fq2_modulus: Degree-2 irreducible polynomial over F_q (coefficients given
            as top-field elements); beta becomes its least-index root.

    Returns:
        The tower.

    Raises:
        InvalidInputError: For a non-prime p, a reducible override or a field
            above the size cap.
    """
    return _make_tower(
        p,
        n,
        None if modulus is None else tuple(modulus),
        None if fq_modulus is None else tuple(fq_modulus),
        None if fq2_modulus is None else tuple(fq2_modulus),
    )


@functools.lru_cache(maxsize=None)
def _make_tower(
    p: int,
    n: int,
    modulus: Polynomial | None,
    fq_modulus: Polynomial | None,
    fq2_modulus: Polynomial | None,
) -> FieldTower:
    if not galois.is_prime(p):
        raise InvalidInputError(f"p={p} is not prime")
    if n < 1:
        raise InvalidInputError(f"n={n} must be positive")
    order = p ** (2 * n)
    if order > MAX_FIELD_ORDER:
        raise InvalidInputError(
            f"field of order {order} exceeds the cap {MAX_FIELD_ORDER}"
        )
    prime_field = galois.GF(p)

    if modulus is None:
        modulus = least_irreducible(p, 2 * n)
    elif (
        len(modulus) != 2 * n + 1
        or modulus[-1] != 1
        or any(not 0 <= c < p for c in modulus)
        or not _as_galois_poly(modulus, prime_field).is_irreducible()
    ):
        raise InvalidInputError(
            f"modulus {list(modulus)} is not a monic irreducible of degree {2 * n}"
        )

    big = galois.GF(order, irreducible_poly=_as_galois_poly(modulus, prime_field))
    unit_order = order - 1
    alpha = big.primitive_element
    powers = (alpha ** np.arange(unit_order)).view(np.ndarray).astype(np.int64)
    log_alpha = np.full(order, -1, dtype=np.int64)
    log_alpha[powers] = np.arange(unit_order)

    generator = int(np.flatnonzero(np.gcd(log_alpha[1:], unit_order) == 1)[0]) + 1
    antilog = powers[(np.arange(unit_order) * log_alpha[generator]) % unit_order]
    log = np.full(order, -1, dtype=np.int64)
    log[antilog] = np.arange(unit_order)
    one_plus = (big(antilog) + big(1)).view(np.ndarray).astype(np.int64)
    zech = np.where(one_plus == 0, -1, log[one_plus])

    tower = FieldTower(
        p=p,
        n=n,
        modulus=tuple(modulus),
        fq_modulus=(),
        fq2_modulus=(),
        generator=generator,
        epsilon=0,
        beta=0,
        log_table=log,
        antilog_table=antilog,
        zech_table=zech,
    )
    q = tower.q

    if fq_modulus is None:
        fq_units = tower.fq_units.tolist()
        epsilon = next(x for x in fq_units if tower.multiplicative_order(x) == q - 1)
    else:
        if (
            len(fq_modulus) != n + 1
            or fq_modulus[-1] != 1
            or any(not 0 <= c < p for c in fq_modulus)
            or not _as_galois_poly(fq_modulus, prime_field).is_irreducible()
        ):
            raise InvalidInputError(
                f"fq_modulus {list(fq_modulus)} is not a monic irreducible"
                f" of degree {n}"
            )
        primitive_roots = [
            x
            for x in tower.roots(fq_modulus)
            if tower.multiplicative_order(x) == q - 1
        ]
        if not primitive_roots:
            raise InvalidInputError(f"fq_modulus {list(fq_modulus)} is not primitive")
        epsilon = primitive_roots[0]

    if fq2_modulus is None:
        beta = next(x for x in range(order) if not tower.in_subfield(x, n))
        beta_q = tower.frobenius(beta, n)
        fq2_modulus = (tower.mul(beta, beta_q), tower.neg(tower.add(beta, beta_q)), 1)
    else:
        if len(fq2_modulus) != 3 or fq2_modulus[-1] == 0:
            raise InvalidInputError("fq2_modulus must have degree exactly 2")
        if any(not 0 <= c < order or not tower.in_subfield(c, n) for c in fq2_modulus):
            raise InvalidInputError("fq2_modulus coefficients must lie in F_q")
        found = tower.roots(fq2_modulus)
        if not found or any(tower.in_subfield(x, n) for x in found):
            raise InvalidInputError(
                f"fq2_modulus {list(fq2_modulus)} is reducible over F_q"
            )
        beta = found[0]

    tower = dataclasses.replace(
        tower,
        fq_modulus=tower.minimal_polynomial(epsilon),
        fq2_modulus=tuple(fq2_modulus),
        epsilon=epsilon,
        beta=beta,
    )
    logger.debug(
        "built tower p=%d n=%d modulus=%s generator=%d epsilon=%d beta=%d",
        p,
        n,
        tower.modulus,
        generator,
        epsilon,
        beta,
    )
    return tower


def tower_for_q(q: int, **overrides: Sequence[int] | None) -> FieldTower:
    """Tower whose middle field has ``q`` elements."""
    p, n = prime_power(q)
    return make_tower(p, n, **overrides)


def render_element(tower: FieldTower, x: Element) -> str:
    """Render an element as ``"0"`` or ``"g^k"``."""
    return "0" if x == 0 else f"g^{tower.log(x)}"


def parse_element(tower: FieldTower, text: str) -> Element:
    """Inverse of :func:`render_element`."""
    text = text.strip()
    if text == "0":
        return 0
    if not text.startswith("g^") or not text[2:].isdigit():
        raise InvalidInputError(f"cannot parse element {text!r}")
    return tower.exp(int(text[2:]))
