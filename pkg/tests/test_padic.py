from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from padic_hardy import (PadicContext, PadicScalar, PadicVector, PrecisionExhausted,
                         UnitSampler, ZeroVectorError, ball_measure, norm_scalar, norm_vector,
                         sample_unit, shell_of, sphere_measure, valuation)
from padic_hardy.padic import is_prime


def S(value, p, precision=64):
    return PadicScalar.from_rational(Fraction(value), p, precision)


def test_context_validation():
    PadicContext(7, 3)
    for bad in (1, 4, 9, 2.0, -3):
        with pytest.raises(ValueError):
            PadicContext(bad, 1)
    with pytest.raises(ValueError):
        PadicContext(2, 0)


def test_is_prime_small_and_large():
    primes = [k for k in range(2, 200) if is_prime(k)]
    assert primes[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes) == 46
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(3215031751)   # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("value,p,expected", [(9, 3, 2), (Fraction(1, 2), 2, -1), (12, 2, 2),
                                              (Fraction(5, 9), 3, -2)])
def test_valuation(value, p, expected):
    assert valuation(S(value, p)) == expected


def test_zero_marker():
    z = S(0, 5)
    assert z.is_zero
    assert valuation(z) == math.inf
    assert norm_scalar(z) == 0.0


@pytest.mark.parametrize("value,p,expected", [(9, 3, 1 / 9), (Fraction(1, 2), 2, 2.0), (0, 7, 0.0)])
def test_norm(value, p, expected):
    assert norm_scalar(S(value, p)) == expected


def test_digit_invariants():
    with pytest.raises(ValueError):
        PadicScalar(3, 0, (0, 1))
    with pytest.raises(ValueError):
        PadicScalar(3, 0, (1, 3))
    with pytest.raises(ValueError):
        PadicScalar(3, 0, ())
    with pytest.raises(ValueError):
        PadicScalar(3, None, (1,))


def test_from_rational_round_trip():
    for p in (2, 3, 5, 7, 4099):
        for value in (Fraction(1), Fraction(-1), Fraction(7, 3), Fraction(-22, 25), Fraction(48)):
            x = S(value, p, 40)
            # the stored digits agree with value modulo p^(v + precision)
            diff = x.to_fraction() - value
            if diff:
                top = (x.valuation or 0) + x.precision
                num_v = 0
                n = diff.numerator
                while n % p == 0:
                    n //= p
                    num_v += 1
                d = diff.denominator
                den_v = 0
                while d % p == 0:
                    d //= p
                    den_v += 1
                assert num_v - den_v >= top


def test_add_examples():
    s = S(1, 5) + S(5, 5)
    assert s.to_fraction() % 5 ** 64 == 6
    assert s.norm() == 1.0 == max(S(1, 5).norm(), S(5, 5).norm())
    t = S(3, 3) + S(6, 3)
    assert t.norm() == pytest.approx(1 / 9) and t.norm() <= 1 / 3
    with pytest.raises(PrecisionExhausted):
        S(1, 7, 20) + S(-1, 7, 20)


def test_add_with_zero_and_mismatch():
    x = S(4, 3)
    assert (x + S(0, 3)) is x
    assert (S(0, 3) + x) is x
    with pytest.raises(ValueError):
        x + S(4, 5)


def test_sub_and_neg():
    x, y = S(Fraction(5, 2), 3), S(Fraction(1, 2), 3)
    assert (x - y).to_fraction() % 3 ** 63 == 2
    assert (-x).norm() == x.norm()
    with pytest.raises(PrecisionExhausted):
        -x + x


def test_mul_examples():
    assert (S(3, 3) * S(3, 3)).norm() == pytest.approx(1 / 9)
    assert (S(11, 3) * S(0, 3)).is_zero
    assert (S(Fraction(1, 2), 2) * S(2, 2)).norm() == 1.0


def test_precision_tracking():
    x = PadicScalar(2, 0, (1,) * 10)
    y = PadicScalar(2, 3, (1,) * 30)
    s = x + y
    assert s.valuation + s.precision <= 10
    assert (x * y).precision == 10


def test_vector_norm_and_shell():
    ctx = PadicContext(3, 2)
    v = PadicVector.from_rationals(ctx, [9, Fraction(1, 3)])
    assert norm_vector(v) == 3.0
    assert norm_vector(PadicVector.from_rationals(ctx, [0, 0])) == 0.0
    assert norm_vector(PadicVector.from_rationals(ctx, [1, 1])) == 1.0
    assert shell_of(PadicVector.from_rationals(ctx, [9, 1])) == 0
    assert shell_of(PadicVector.from_rationals(PadicContext(2), [Fraction(1, 2)])) == 1
    with pytest.raises(ZeroVectorError):
        shell_of(PadicVector.from_rationals(ctx, [0, 0]))
    with pytest.raises(ValueError):
        PadicVector.from_rationals(ctx, [1])


def test_measures():
    ctx = PadicContext(3, 2)
    assert ball_measure(ctx, 1) == 9.0
    assert sphere_measure(ctx, 1) == 8.0
    assert ball_measure(PadicContext(5, 3), 0) == 1.0
    assert sphere_measure(PadicContext(2, 1), -3) == 0.0625
    with pytest.raises(OverflowError):
        ball_measure(PadicContext(2, 1), 2000)


def test_sampler_frequencies():
    for ctx, j, prob in ((PadicContext(2, 1), 0, 0.5), (PadicContext(3, 2), 1, 8 / 81)):
        shells = UnitSampler(ctx, seed=3).shells(40_000)
        freq = np.mean(shells == -j)
        assert abs(freq - prob) <= 4 * math.sqrt(prob * (1 - prob) / 40_000)


def test_sampler_determinism():
    ctx = PadicContext(5, 2)
    a = sample_unit(ctx, 50, seed=11)
    b = sample_unit(ctx, 50, seed=11)
    c = sample_unit(ctx, 50, seed=12)
    assert a == b
    assert a != c
    with pytest.raises(ValueError):
        sample_unit(ctx, 0, seed=1)


def test_draw_units_scale():
    ctx = PadicContext(3, 2)
    pts = UnitSampler(ctx, seed=5, depth=12).draw_units(200, scale=4)
    assert {shell_of(v) for v in pts} == {-4}


def test_spawned_streams_independent():
    ctx = PadicContext(2, 1)
    a, b = UnitSampler(ctx, seed=1).spawn(2)
    assert not np.array_equal(a.digits(10), b.digits(10))
