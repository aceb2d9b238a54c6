"""Exploded/tropical semiring arithmetic, orders, and homomorphisms."""

import random
from fractions import Fraction

import pytest

from exploded_kernel.errors import DomainError, UsageError
from exploded_kernel.rational import GaussianRational, parse_gaussian
from exploded_kernel.semiring import (
    ExplodedNumber,
    PositiveRealExploded,
    TropicalNumber,
    compare_positive,
    expl_add,
    expl_mul,
    iota,
    parse_expression,
    smooth_part,
    tropical_part,
)


def exact(c, e) -> ExplodedNumber:
    return ExplodedNumber(GaussianRational.of(c), Fraction(e))


def random_exact(rng: random.Random) -> ExplodedNumber:
    coeff = GaussianRational(
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
    )
    return ExplodedNumber(coeff, Fraction(rng.randint(-8, 8), rng.randint(1, 5)))


def test_mul_examples():
    assert expl_mul(exact(3, 1), exact(2, 2)) == exact(6, 3)
    value = exact("2-3i", Fraction(5, 7))
    assert expl_mul(value, iota(1)) == value
    lhs = expl_mul(exact("1+i", Fraction(1, 2)), exact("1-i", Fraction(1, 2)))
    # oracle: (1+i)(1-i) = 2 directly
    assert lhs == exact(2, 1)


def test_add_examples():
    assert expl_add(exact(3, 1), exact(5, 2)) == exact(3, 1)
    assert expl_add(exact(3, 1), exact(5, 1)) == exact(8, 1)
    cancelled = expl_add(exact(3, 1), exact(-3, 1))
    assert cancelled.coeff == GaussianRational()
    assert cancelled.exp == 1
    assert not cancelled.is_function_value()


def test_backend_mismatch_rejected():
    with pytest.raises(UsageError):
        expl_mul(exact(1, 0), ExplodedNumber(1.0 + 0j, Fraction(0)))
    with pytest.raises(UsageError):
        expl_add(exact(1, 0), ExplodedNumber(1.0 + 0j, Fraction(0)))


def test_tropical_part_examples():
    assert tropical_part(exact(3, 2)) == TropicalNumber(Fraction(2))
    rng = random.Random(7)
    for _ in range(50):
        a, b = random_exact(rng), random_exact(rng)
        assert tropical_part(a * b) == tropical_part(a) * tropical_part(b)
    lhs = tropical_part(expl_add(exact(3, 1), exact(5, 1)))
    assert lhs == TropicalNumber(Fraction(1))


def test_smooth_part_examples():
    assert smooth_part(exact(3, 0)) == GaussianRational.of(3)
    assert smooth_part(exact(3, 2)) == GaussianRational()
    with pytest.raises(DomainError):
        smooth_part(exact(5, -1))


def test_smooth_part_is_homomorphism_on_positive_subsemiring():
    rng = random.Random(11)
    for _ in range(200):
        a = random_exact(rng)
        b = random_exact(rng)
        a = ExplodedNumber(a.coeff, abs(a.exp))
        b = ExplodedNumber(b.coeff, abs(b.exp))
        assert smooth_part(a * b) == smooth_part(a) * smooth_part(b)
        assert smooth_part(a + b) == smooth_part(a) + smooth_part(b)


def test_iota_is_homomorphism():
    rng = random.Random(3)
    for _ in range(100):
        c1 = GaussianRational(Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5)))
        c2 = GaussianRational(Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5)))
        assert iota(c1) * iota(c2) == iota(c1 * c2)
        assert iota(c1) + iota(c2) == iota(c1 + c2)


def test_semiring_laws_random():
    rng = random.Random(2026)
    for _ in range(500):
        a, b, c = (random_exact(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_tropical_order_and_idempotence():
    assert TropicalNumber(Fraction(1)) > TropicalNumber(Fraction(2))
    t = TropicalNumber(Fraction(3, 2))
    assert t + t == t
    assert t * TropicalNumber(Fraction(0)) == t


def test_compare_positive_examples():
    a = PositiveRealExploded(Fraction(5), Fraction(2))
    b = PositiveRealExploded(Fraction(1), Fraction(1))
    assert compare_positive(a, b) < 0
    c = PositiveRealExploded(Fraction(2), Fraction(1))
    d = PositiveRealExploded(Fraction(3), Fraction(1))
    assert compare_positive(c, d) < 0
    assert compare_positive(a, a) == 0


def test_compare_positive_total_order_and_scaling_invariance():
    rng = random.Random(5)
    values = [
        PositiveRealExploded(Fraction(rng.randint(1, 9), rng.randint(1, 4)),
                             Fraction(rng.randint(-5, 5)))
        for _ in range(40)
    ]
    ordered = sorted(values)
    for u, v in zip(ordered, ordered[1:]):
        assert compare_positive(u, v) <= 0
    scale = PositiveRealExploded(Fraction(7, 3), Fraction(-2))
    rescaled = sorted(v * scale for v in values)
    assert rescaled == [v * scale for v in ordered]


def test_zero_coefficient_rejected_as_function_value():
    zero = exact(0, 2)
    with pytest.raises(DomainError):
        zero.require_function_value()


def test_expression_parser():
    assert str(parse_expression("3t^1 + 5t^1")) == "8t^1"
    assert str(parse_expression("3t^1 + 5t^2")) == "3t^1"
    assert parse_expression("(1+i)t^1/2 * (1-i)t^1/2") == exact(2, 1)
    assert parse_expression("2t^-3/2") == exact(2, Fraction(-3, 2))
    assert parse_expression("t") == exact(1, 1)
    with pytest.raises(UsageError):
        parse_expression("3t^1 +")
    with pytest.raises(UsageError):
        parse_expression("what")


def test_gaussian_string_roundtrip():
    for text in ("0", "5", "-3/2", "i", "-i", "2i", "1/2+3i", "1-2/3i"):
        assert str(parse_gaussian(text)) == text
