"""Tests for the field tower."""

import galois
import numpy as np
import pytest

from peisert_ekr.errors import InvalidInputError
from peisert_ekr.fields import (
    divisors,
    largest_proper_divisor,
    make_tower,
    parse_element,
    prime_power,
    render_element,
    square_root,
    tower_for_q,
)


def test_prime_power() -> None:
    """Prime powers split into characteristic and degree."""
    assert prime_power(9) == (3, 2)
    assert prime_power(32) == (2, 5)
    assert prime_power(13) == (13, 1)
    for bad in (1, 6, 12):
        with pytest.raises(InvalidInputError):
            prime_power(bad)


def test_divisor_helpers() -> None:
    """Divisors and the largest proper divisor."""
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert largest_proper_divisor(6) == 3
    assert largest_proper_divisor(4) == 2
    assert largest_proper_divisor(7) == 1
    assert square_root(25) == 5
    with pytest.raises(InvalidInputError):
        square_root(8)


def test_towers_are_cached() -> None:
    """Equal arguments give the same tower object."""
    assert make_tower(3, 2) is tower_for_q(9)
    tower = tower_for_q(9)
    assert (tower.q, tower.order, tower.degree) == (9, 81, 4)


def test_arithmetic_matches_galois() -> None:
    """Zech-table arithmetic agrees with galois on every pair of F_81."""
    tower = tower_for_q(9)
    gf = galois.GF(
        tower.order,
        irreducible_poly=galois.Poly(tower.modulus[::-1], field=galois.GF(tower.p)),
    )
    a, b = np.meshgrid(np.arange(tower.order), np.arange(tower.order), indexing="ij")
    expected_sum = (gf(a) + gf(b)).view(np.ndarray)
    expected_product = (gf(a) * gf(b)).view(np.ndarray)
    assert np.array_equal(tower.add_array(a, b), expected_sum)
    assert np.array_equal(tower.mul_array(a, b), expected_product)
    assert tower.mul(7, tower.inv(7)) == 1
    assert tower.sub(tower.add(5, 11), 11) == 5


def test_distinguished_elements() -> None:
    """epsilon generates F_q^* and beta is a root of the quadratic over F_q."""
    for q in (4, 8, 9, 25):
        tower = tower_for_q(q)
        assert tower.multiplicative_order(tower.epsilon) == q - 1
        assert tower.in_subfield(tower.epsilon, tower.n)
        assert not tower.in_subfield(tower.beta, tower.n)
        assert tower.evaluate(tower.fq2_modulus, [tower.beta]).tolist() == [0]
        assert tower.minimal_polynomial(tower.beta, tower.n) == tower.fq2_modulus
        assert len(tower.fq_elements) == q


def test_subfields_trace_and_norm() -> None:
    """Prime field elements are 0..p-1; trace and norm land in the subfield."""
    tower = tower_for_q(9)
    assert tower.subfield_elements(1).tolist() == [0, 1, 2]
    assert tower.trace_to(1, 1) == 1
    for x in range(1, tower.order, 7):
        assert tower.in_subfield(tower.trace_to(x, 2), 2)
        assert tower.in_subfield(tower.norm_to(x, 2), 2)
        assert tower.frobenius(tower.frobenius(x, 2), 2) == x
    assert tower.least_nonsquare(1) == 2
    assert tower_for_q(4).choose_trace_one(1) == 1


def test_roots() -> None:
    """x^2 - 1 has the roots 1 and -1."""
    tower = tower_for_q(5)
    assert tower.roots((tower.minus_one, 0, 1)) == sorted([1, tower.minus_one])


def test_render_and_parse() -> None:
    """Elements render as powers of the generator."""
    tower = tower_for_q(9)
    assert render_element(tower, 0) == "0"
    assert render_element(tower, tower.generator) == "g^1"
    assert parse_element(tower, "g^80") == 1
    assert parse_element(tower, render_element(tower, tower.beta)) == tower.beta
    with pytest.raises(InvalidInputError):
        parse_element(tower, "beta")


def test_bad_towers() -> None:
    """Non-prime characteristics, reducible moduli and oversized fields fail."""
    with pytest.raises(InvalidInputError):
        make_tower(4, 1)
    with pytest.raises(InvalidInputError):
        make_tower(2, 1, modulus=(1, 0, 1))
    with pytest.raises(InvalidInputError):
        make_tower(2, 11)
