from __future__ import annotations

import math

import pytest

from padic_hardy import (DivergenceError, OverlapError, PadicContext, RadialFunction, Segment,
                         Term, from_table, indicator, power_law, radial_power, restrict_norm,
                         shift)
from padic_hardy.radial import composite, integrate_zp_star

CTX = PadicContext(2, 1)


def test_evaluate_examples():
    f = power_law(CTX, 1.0, -1.0, lo=0)
    assert f.evaluate(3) == 0.125
    assert f.evaluate(0) == 1.0
    assert f.evaluate(-1) == 0.0
    assert indicator(CTX, 0).evaluate(5) == 0.0
    assert indicator(CTX, 0).evaluate(0) == 1.0
    assert from_table(CTX, {2: 7}).evaluate(2) == 7.0
    assert radial_power(CTX, 1.0, lo=0)(3) == 2.0 ** -3   # |x|^{-1} with |x| = 2^3


def test_overlap_rejected():
    with pytest.raises(OverlapError):
        RadialFunction(CTX, {}, (Segment(0, 5, (Term(1.0, 0.0),)),
                                 Segment(5, None, (Term(1.0, 0.0),))))
    with pytest.raises(OverlapError):
        composite(CTX, {3: 1.0}, [Segment(None, 4, (Term(1.0, 0.0),))])
    with pytest.raises(ValueError):
        Segment(4, 3, (Term(1.0, 0.0),))


def test_composite_and_features():
    f = composite(CTX, {5: 2.0}, [Segment(None, 0, (Term(1.0, 1.0),)),
                                  Segment(1, 4, (Term(3.0, 0.0),))])
    assert f(-2) == 0.25 and f(2) == 3.0 and f(5) == 2.0 and f(6) == 0.0
    assert f.features() == [0, 1, 4, 5]
    assert f.lower_tail() == (0, (Term(1.0, 1.0),))
    assert f.upper_tail() == (None, ())
    assert not f.is_finitely_supported


def test_restrict_norm():
    f = power_law(CTX, 1.0, -1.0, lo=0)   # the eps = 0.5, alpha = 0, q = 2 extremal
    assert restrict_norm(f, 3, 2.0) == pytest.approx(0.25, rel=1e-15)
    assert restrict_norm(f, 3, 2.0) == pytest.approx(0.5 ** 0.5 * 2 ** -1.5, rel=1e-15)
    assert restrict_norm(indicator(CTX, 0), 0, 1.0) == 0.5
    assert restrict_norm(f, -3, 2.0) == 0.0


def test_integrate_zp_star():
    assert integrate_zp_star(CTX, power_law(CTX, 1.0, 0.0)) == pytest.approx(1.0, rel=1e-15)
    g = power_law(CTX, 1.0, 0.5)
    assert integrate_zp_star(CTX, g) == pytest.approx(0.5 / (1 - 2 ** -0.5), abs=1e-9)
    with pytest.raises(DivergenceError):
        integrate_zp_star(CTX, power_law(CTX, 1.0, 1.0))
    ctx = PadicContext(3, 2)
    assert integrate_zp_star(ctx, power_law(ctx, 1.0, 0.0)) == pytest.approx(1.0, rel=1e-15)


def test_shift():
    assert shift(indicator(CTX, 0), 2).evaluate(-2) == 1.0
    assert shift(power_law(CTX, 1.0, -1.0, lo=0), 1).evaluate(0) == 0.5
    f = composite(CTX, {7: -1.0}, [Segment(None, 3, (Term(2.0, 0.3),))])
    g = shift(f, 0)
    assert all(g(k) == f(k) for k in range(-10, 10))
    h = shift(f, -4)
    assert all(h(k) == pytest.approx(f(k - 4), rel=1e-14) for k in range(-10, 12))


def test_arithmetic():
    f = power_law(CTX, 2.0, -1.0, lo=0)
    g = indicator(CTX, -1) + power_law(CTX, 1.0, -1.0, lo=2)
    s = f + g
    for k in range(-3, 8):
        assert s(k) == pytest.approx(f(k) + g(k), rel=1e-15)
    d = f - f
    assert all(d(k) == 0.0 for k in range(-3, 8))
    assert (3 * f)(2) == pytest.approx(1.5) and (-f)(0) == -2.0
    prod = f.multiply(g)
    for k in range(-3, 8):
        assert prod(k) == pytest.approx(f(k) * g(k), rel=1e-15)


def test_serialization_round_trip():
    f = composite(CTX, {5: 2.0}, [Segment(None, 0, (Term(1.0, 1.0),)),
                                  Segment(1, 4, (Term(3.0, -0.5, 1),))])
    g = RadialFunction.from_dict(f.to_dict())
    assert g == f
    assert math.isclose(g(3), f(3))
