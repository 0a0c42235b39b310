import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from cesaro_ri.fncore import Divergent, Finite, Step, distribution
from cesaro_ri.rispaces import LogPhi, Lorentz, Lp, Marcinkiewicz, PowerPhi
from cesaro_ri.vmeasure import (FULL, IntervalSet, density, density_norm, density_norms,
                                density_rearranged, finite_variation, lorentz_total_variation,
                                measure_of, variation, weighted_l1_norm)

XS = np.array([0.05, 0.2, 0.35, 0.5, 0.8, 1.0])


def test_interval_set_parse_and_measure():
    A = IntervalSet.parse("0.1,0.2; 0.5,0.9")
    assert A.intervals == ((0.1, 0.2), (0.5, 0.9))
    assert A.measure == pytest.approx(0.5)
    with pytest.raises(ValueError):
        IntervalSet.parse("0.5,0.4")
    with pytest.raises(ValueError):
        IntervalSet(((0.2, 0.6), (0.5, 0.9)))


def test_measure_of_interval():
    m = measure_of(IntervalSet(((0.2, 0.5),)))
    expect = np.where(XS < 0.2, 0.0, np.minimum(XS, 0.5) - 0.2) / XS
    assert np.allclose(m(XS), expect, atol=1e-15)


def test_measure_of_is_additive():
    A, B = IntervalSet(((0.1, 0.3),)), IntervalSet(((0.6, 0.7),))
    AB = IntervalSet(((0.1, 0.3), (0.6, 0.7)))
    assert np.allclose(measure_of(AB)(XS), measure_of(A)(XS) + measure_of(B)(XS), atol=1e-15)


def test_density_values():
    F = density(0.5)
    assert F(0.25) == 0.0
    assert F(0.5) == pytest.approx(2.0)
    assert F(0.8) == pytest.approx(1.25)
    assert density_rearranged(0.5)(0.3) == pytest.approx(1 / 0.8)
    assert density(1.0)(0.3) == 0.0
    with pytest.raises(ValueError):
        density(0.0)


@pytest.mark.parametrize("tau", [1.2, 1.5, 1.9])
def test_density_equimeasurable(tau):
    lam = 1 / tau - 0.5
    assert distribution(density(0.5), tau) == pytest.approx(lam, abs=1e-14)
    assert distribution(density_rearranged(0.5), tau) == pytest.approx(lam, abs=1e-14)


def _lorentz_power_oracle(a, y):
    # int_0^{1-y} a t^{a-1}/(t+y) dt = a y^{a-1} B(1-y; a, 1-a)
    return a * y ** (a - 1) * special.betainc(a, 1 - a, 1 - y) * special.beta(a, 1 - a)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("y", [1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999])
def test_density_norm_lorentz_betainc(a, y):
    r = density_norm(Lorentz(PowerPhi(a)), y, 1e-10)
    assert r.value == pytest.approx(_lorentz_power_oracle(a, y), rel=1e-8)


def test_density_norm_examples():
    assert density_norm(Lorentz(PowerPhi(0.5)), 0.5).value == pytest.approx(math.sqrt(2) * math.pi / 4, rel=1e-9)
    assert density_norm(Lp(1), 0.5).value == pytest.approx(math.log(2), rel=1e-12)
    assert density_norm(Lp(2), 0.25).value == pytest.approx(math.sqrt(3), rel=1e-12)
    assert density_norm(Lp(math.inf), 0.25).value == pytest.approx(4.0)
    assert density_norm(Lp(2), 1.0) == Finite(0.0, 0.0)


@pytest.mark.parametrize("p", [1.5, 3.0])
@pytest.mark.parametrize("y", [1e-4, 0.3])
def test_density_norm_lp_closed_form(p, y):
    expect = ((y ** (1 - p) - 1) / (p - 1)) ** (1 / p)
    assert density_norm(Lp(p), y).value == pytest.approx(expect, rel=1e-10)


def _marcinkiewicz_brute(a, y, equiv):
    t = np.concatenate([np.geomspace(1e-14, 1 - y, 400001), [1 - y]])
    if equiv:
        return float(np.max(t ** a / (t + y)))
    inside = t ** (a - 1) * np.log1p(t / y)
    beyond = np.geomspace(1 - y, 1.0, 2001) ** (a - 1) * math.log(1 / y)
    return float(max(inside.max(), beyond.max()))


@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("y", [1e-5, 0.1, 0.5, 0.9])
@pytest.mark.parametrize("equiv", [False, True])
def test_density_norm_marcinkiewicz_brute_force(a, y, equiv):
    r = density_norm(Marcinkiewicz(PowerPhi(a), use_equiv_norm=equiv), y, 1e-8)
    assert r.value == pytest.approx(_marcinkiewicz_brute(a, y, equiv), rel=1e-7)


def test_density_norm_extreme_y():
    v = density_norm(Lorentz(PowerPhi(0.5)), 1e-200)
    # a y^{a-1} B(a, 1-a) with a = 1/2
    assert v.value == pytest.approx(0.5 * math.pi * 1e100, rel=1e-6)


def test_density_norms_vectorised_match_scalar():
    ys = np.array([1e-3, 0.2, 0.7])
    X = Marcinkiewicz(PowerPhi(0.5))
    assert np.allclose(density_norms(X, ys), [density_norm(X, y).value for y in ys], rtol=1e-9)


def test_density_norm_rejects_bad_y():
    with pytest.raises(ValueError):
        density_norm(Lp(1), 1.5)


def test_variation_examples():
    assert variation(Lp(1), FULL).value == pytest.approx(1.0, rel=1e-8)
    assert variation(Lorentz(PowerPhi(0.5)), FULL).value == pytest.approx(2.0, rel=1e-8)
    assert isinstance(variation(Lorentz(LogPhi(2.0)), FULL), Divergent)


def test_variation_of_subinterval_lp1():
    a, b = 0.2, 0.6
    exact = (b - b * math.log(b)) - (a - a * math.log(a))
    assert variation(Lp(1), IntervalSet(((a, b),))).value == pytest.approx(exact, rel=1e-9)


def test_variation_is_additive_over_sets():
    X = Lorentz(PowerPhi(0.3))
    A, B = IntervalSet(((0.0, 0.4),)), IntervalSet(((0.4, 1.0),))
    assert (variation(X, A).value + variation(X, B).value) == pytest.approx(variation(X, FULL).value, rel=1e-8)


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
def test_lorentz_total_variation_log(p):
    assert lorentz_total_variation(LogPhi(p), 1e-10).value == pytest.approx(p / (1 - p), rel=1e-8)


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_lorentz_total_variation_log_diverges(p):
    assert isinstance(lorentz_total_variation(LogPhi(p)), Divergent)


@pytest.mark.parametrize("X, want", [
    (Lp(1), True), (Lp(2), True), (Lp(math.inf), False),
    (Lorentz(PowerPhi(0.5)), True), (Marcinkiewicz(PowerPhi(0.5)), True),
    (Lorentz(LogPhi(0.5)), True), (Lorentz(LogPhi(1.0)), False), (Lorentz(LogPhi(2.0)), False),
])
def test_finite_variation(X, want):
    v = finite_variation(X)
    assert v.verdict is want, v.route
    assert v.label == str(want).lower()


def test_weighted_l1_norm_lp1():
    # int_{1/2}^1 log(1/y) dy = (1 - log 2)/2
    f = Step((0.0, 0.5, 1.0), (0.0, 1.0))
    r = weighted_l1_norm(Lp(1), f)
    assert r.value == pytest.approx((1 - math.log(2)) / 2, rel=1e-9)


def test_weighted_l1_norm_divergent_by_class():
    from cesaro_ri.fncore import Power
    assert isinstance(weighted_l1_norm(Lp(1), Power(1.0, -1.0)), Divergent)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-8, 0.99), st.floats(0.05, 0.95))
def test_density_norm_lorentz_property(y, a):
    # Lorentz dominates Marcinkiewicz for the same phi
    lor = density_norm(Lorentz(PowerPhi(a)), y).value
    mar = density_norm(Marcinkiewicz(PowerPhi(a)), y).value
    assert mar <= lor * (1 + 1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-6, 0.5), st.sampled_from([Lp(1), Lp(2), Lorentz(PowerPhi(0.5)),
                                               Marcinkiewicz(PowerPhi(0.5))]))
def test_density_norm_decreases_in_y(y, X):
    assert density_norm(X, y).value >= density_norm(X, min(1.0, 1.5 * y)).value * (1 - 1e-9)
