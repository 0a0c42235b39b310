import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sci

from cesaro_ri.cesaro import cesaro, cesaro_space_norm, copson, in_cesaro_space, is_divergent
from cesaro_ri.certificates import witness
from cesaro_ri.fncore import (CopsonImage, Divergent, LogRecip, Power, Points, Step, integrate,
                              mirrored_power)
from cesaro_ri.rispaces import Lorentz, Lp, PowerPhi

XS = np.array([1e-6, 0.01, 0.2, 0.5, 0.77, 1.0])


def test_cesaro_of_identity():
    g = cesaro(Power(1.0, 1.0))
    assert np.allclose(g(XS), XS / 2, rtol=1e-15)


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_cesaro_of_initial_indicator(a):
    g = cesaro(Step((0.0, a, 1.0), (1.0, 0.0)))
    expect = np.where(XS <= a, 1.0, a / XS)
    assert np.allclose(g(XS), expect, rtol=1e-14)


def test_cesaro_of_nonintegrable_is_marker():
    g = cesaro(Power(1.0, -1.25))
    assert is_divergent(g)
    assert isinstance(cesaro_space_norm(Lp(1), Power(1.0, -1.25)), Divergent)
    assert in_cesaro_space(Lp(1), Power(1.0, -1.25)) is False


def test_cesaro_of_log():
    # (1/x) int_0^x log(1/t) dt = 1 + log(1/x)
    g = cesaro(LogRecip(1.0))
    assert np.allclose(g(XS), 1 + np.log(1 / XS), rtol=1e-12)


def test_copson_examples():
    assert np.allclose(copson(Step.const(1.0))(XS), np.log(1 / XS), atol=1e-15)
    assert np.allclose(copson(Power(1.0, 1.0))(XS), 1 - XS, atol=1e-14)


@pytest.mark.parametrize("a", [0.2, 0.6])
def test_copson_of_final_indicator(a):
    g = copson(Step((0.0, a, 1.0), (0.0, 1.0)))
    assert isinstance(g, CopsonImage)
    assert np.allclose(g(XS), np.log(1 / np.maximum(XS, a)), atol=1e-13)


def test_copson_diverges_for_singularity_at_one():
    assert is_divergent(copson(mirrored_power(1.0, -1.0)))


def test_cesaro_space_norm_examples():
    assert cesaro_space_norm(Lp(2), Power(1.0, 1.0)).value == pytest.approx(1 / (2 * math.sqrt(3)), rel=1e-10)
    assert cesaro_space_norm(Lp(1), Step.const(1.0)).value == pytest.approx(1.0, rel=1e-12)
    assert in_cesaro_space(Lp(1), Step.const(1.0)) is True


def test_witness_norm_at_a_one_matches_scipy():
    # f(t) = (1-t)^{-3/2}; C f(x) = 2((1-x)^{-1/2} - 1)/x and ||C f||_1 = 4 log 2
    f = witness(PowerPhi(1.0))
    ref, _ = sci.quad(lambda x: 2 * ((1 - x) ** -0.5 - 1) / x, 0, 1, limit=200)
    assert ref == pytest.approx(4 * math.log(2), rel=1e-9)
    r = cesaro_space_norm(Lorentz(PowerPhi(1.0)), f, 1e-10)
    assert r.value == pytest.approx(ref, rel=1e-7)


@pytest.mark.parametrize("a", [0.5, 0.75])
def test_witness_norm_against_scipy(a):
    c = -1 - a / 2

    def cf(x):
        return a * (1 - (1 - x) ** (c + 1)) / ((c + 1) * x)

    xs = np.linspace(0, 1, 20001)[1:-1]
    assert np.all(np.diff(cf(xs)) > 0)  # C f increases, so (C f)*(t) = C f(1 - t)
    ref, _ = sci.quad(lambda t: cf(1 - t) * a * t ** (a - 1), 0, 1, limit=400)
    r = cesaro_space_norm(Lorentz(PowerPhi(a)), witness(PowerPhi(a)), 1e-10)
    assert r.value == pytest.approx(ref, rel=1e-6)


steps = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.integers(1, 999), min_size=n - 1, max_size=n - 1, unique=True),
    st.lists(st.floats(0, 5, allow_nan=False), min_size=n, max_size=n)))


def _step(data):
    cuts, vals = data
    return Step(tuple([0.0] + sorted(c / 1000 for c in cuts) + [1.0]), tuple(vals))


@settings(max_examples=50, deadline=None)
@given(steps, st.floats(0.001, 1.0))
def test_cesaro_is_running_mean(data, x):
    f = _step(data)
    assert cesaro(f)(x) * x == pytest.approx(integrate(f, 0.0, x).value, rel=1e-12, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(steps, steps)
def test_cesaro_copson_duality(d1, d2):
    # int (C f) g = int f (C* g)
    f, g = _step(d1), _step(d2)
    lhs = integrate(_product(cesaro(f), g), 0, 1, 1e-11).value
    rhs = integrate(_product(f, copson(g)), 0, 1, 1e-11).value
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-10)


def _product(u, v):
    from cesaro_ri.fncore.expr import FunctionExpr

    class _Prod(FunctionExpr):
        def eval(self, pts):
            return u.eval(pts) * v.eval(pts)

        def breaks(self):
            return tuple(sorted(set(u.breaks()) | set(v.breaks())))

        def blowup0(self):
            return u.blowup0() * v.blowup0()

        def blowup1(self):
            return u.blowup1() * v.blowup1()

    return _Prod()


def test_cesaro_image_points_agree_with_eval():
    g = cesaro(Power(2.0, 0.5))
    pts = Points.at(XS)
    assert np.allclose(g.eval(pts), 2 / 1.5 * np.sqrt(XS))
