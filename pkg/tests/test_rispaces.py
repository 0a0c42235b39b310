import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sci

from cesaro_ri.fncore import (Divergent, Finite, LogRecip, Power, Sampled, Scale, ShiftedRecip,
                              Step, Unknown, rearrange)
from cesaro_ri.rispaces import (LogPhi, Lorentz, Lp, Marcinkiewicz, PowerPhi, RatioPsi, TablePhi,
                                associate, boyd_upper, check_concave, dilation_indices,
                                fundamental, norm, ratio_psi, validate_phi)
from cesaro_ri.rispaces.dilation import _log_sup_ratio

GRID = np.geomspace(1e-6, 1.0, 50)


def test_validate_examples():
    assert validate_phi(PowerPhi(0.5)).ok
    assert validate_phi(LogPhi(1.0)).ok


def test_validate_catches_dip():
    bad = TablePhi((0.1, 0.2, 0.3, 0.6, 1.0), (0.2, 0.4, 0.3, 0.7, 1.0))
    v = validate_phi(bad)
    assert not v.ok
    assert "0.2" in v.violations[0] or "0.3" in v.violations[0]


def test_logphi_is_not_quasiconcave_near_one_for_small_p():
    # phi/t increases on (e^{1-1/p}, 1]
    assert not validate_phi(LogPhi(0.5)).ok
    assert validate_phi(LogPhi(2.0)).ok


def test_concavity_probe():
    assert check_concave(PowerPhi(0.3)).ok
    # 1/(1 + log(1/t)) has phi'' > 0 on (1/e, 1): quasi-concave only
    v = check_concave(LogPhi(1.0))
    assert not v.ok
    assert float(v.violations[0].split("=")[1]) > 1 / math.e


def test_phi_derivatives_closed_form():
    t = np.array([1e-5, 0.01, 0.3, 0.9])
    p = 0.7
    expect = (1 / p) * np.log(math.e / t) ** (-1 / p - 1) / t
    assert np.allclose(LogPhi(p).deriv(t), expect, rtol=1e-13)
    assert np.allclose(PowerPhi(0.25).deriv(t), 0.25 * t ** -0.75, rtol=1e-13)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("y", [0.05, 0.5, 0.9])
def test_lorentz_shifted_recip_against_scipy(a, y):
    ref, _ = sci.quad(lambda t: a * t ** (a - 1) / (t + y), 0, 1 - y, limit=200)
    r = norm(Lorentz(PowerPhi(a)), ShiftedRecip(y), 1e-10)
    assert r.value == pytest.approx(ref, rel=1e-8)


def test_lorentz_shifted_recip_example():
    r = norm(Lorentz(PowerPhi(0.5)), ShiftedRecip(0.5), 1e-8)
    assert r.value == pytest.approx(math.sqrt(2) * math.pi / 4, rel=1e-9)


def test_marcinkiewicz_equiv_example():
    r = norm(Marcinkiewicz(PowerPhi(0.5), use_equiv_norm=True), Power(1, -0.5), 1e-6)
    assert r.value == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
def test_marcinkiewicz_of_reciprocal_phi(a):
    # (phi(t)/t) int_0^t s^-a ds = 1/(1-a) for every t
    r = norm(Marcinkiewicz(PowerPhi(a)), Power(1, -a), 1e-8)
    assert r.value == pytest.approx(1 / (1 - a), rel=1e-6)


def test_lp_examples():
    assert norm(Lp(2), Step.const(1.0)) == Finite(1.0, 0.0)
    assert norm(Lp(3), Power(1, 1)).value == pytest.approx(0.25 ** (1 / 3), rel=1e-9)
    assert norm(Lp(2), Power(1, -0.25)).value == pytest.approx(math.sqrt(2), rel=1e-9)
    assert isinstance(norm(Lp(2), Power(1, -0.5)), Divergent)


def test_lp_infinity():
    assert norm(Lp(math.inf), Step((0.0, 0.5, 1.0), (2.0, 5.0))).value == 5.0
    assert norm(Lp(math.inf), Power(1.0, 2.0)).value == pytest.approx(1.0)
    assert isinstance(norm(Lp(math.inf), LogRecip(1.0)), Divergent)


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
def test_lorentz_log_norm_finite_for_small_p(p):
    r = norm(Lorentz(LogPhi(p)), LogRecip(1.0), 1e-10)
    assert r.value == pytest.approx(p / (1 - p), rel=1e-8)


@pytest.mark.parametrize("p", [1.0, 2.0])
def test_lorentz_log_norm_diverges_for_large_p(p):
    assert isinstance(norm(Lorentz(LogPhi(p)), LogRecip(1.0)), Divergent)


def test_lorentz_of_step_is_exact():
    f = Step((0.0, 0.25, 1.0), (1.0, 3.0))
    r = norm(Lorentz(PowerPhi(0.5)), f)
    # f* = 3 on [0, 3/4), 1 after
    assert r.value == pytest.approx(3 * math.sqrt(0.75) + (1 - math.sqrt(0.75)), rel=1e-15)
    assert r.err == 0.0


def test_norm_of_sampled_is_approximate():
    s = Sampled((0.0, 0.5, 1.0), (2.0, 1.0), (0.01, 0.01))
    r = norm(Lorentz(PowerPhi(0.5)), s)
    assert r.approximate
    assert r.value == pytest.approx(2 * math.sqrt(0.5) + (1 - math.sqrt(0.5)))


def test_norm_rejects_bad_tol():
    with pytest.raises(ValueError):
        norm(Lp(1), Step.const(1.0), 0.0)


def test_fundamental_examples():
    assert fundamental(Lorentz(PowerPhi(0.5)), 0.25) == pytest.approx(0.5)
    assert fundamental(Lp(2), 0.25) == pytest.approx(0.5)
    assert fundamental(Marcinkiewicz(PowerPhi(0.5)), 0.25) == pytest.approx(0.5)


@pytest.mark.parametrize("t", [1e-4, 0.25, 0.7])
def test_fundamental_matches_norm_of_indicator(t):
    chi = Step((0.0, t, 1.0), (1.0, 0.0))
    for X in (Lorentz(PowerPhi(0.5)), Marcinkiewicz(PowerPhi(0.5)), Lp(2)):
        assert norm(X, chi, 1e-10).value == pytest.approx(fundamental(X, t), rel=1e-6)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
def test_dilation_power(a):
    d = dilation_indices(PowerPhi(a))
    assert d.stable
    assert d.gamma == pytest.approx(a, abs=0.02) and d.delta == pytest.approx(a, abs=0.02)


def test_dilation_log_and_ratio():
    d = dilation_indices(LogPhi(1.0))
    assert abs(d.gamma) <= 0.02 and abs(d.delta) <= 0.02
    r = dilation_indices(RatioPsi(PowerPhi(0.5)))
    assert r.delta == pytest.approx(0.5, abs=0.02)


@pytest.mark.parametrize("k", [4, 10, 20, 30])
def test_log_sup_ratio_matches_closed_form(k):
    # for phi = 1/log(e/t) and T = 2^k: sup_s phi(sT)/phi(s) = 1 + log T, attained at s = 1/T
    ell = k * math.log(2)
    assert _log_sup_ratio(LogPhi(1.0), ell) == pytest.approx(math.log1p(ell), abs=1e-9)


def test_dilation_bounds_ordered():
    for phi in (PowerPhi(0.3), LogPhi(2.0), RatioPsi(PowerPhi(0.8))):
        d = dilation_indices(phi)
        assert 0.0 <= d.gamma <= d.delta + 1e-12 <= 1.0 + 1e-12


def test_associate_pairs():
    A = associate(Lorentz(PowerPhi(0.5)))
    assert isinstance(A, Marcinkiewicz)
    assert np.allclose(A.phi.eval(GRID), np.sqrt(GRID))
    B = associate(Marcinkiewicz(PowerPhi(0.5)))
    assert isinstance(B, Lorentz)
    for X in (Lorentz(LogPhi(1.0)), Marcinkiewicz(PowerPhi(0.3))):
        back = associate(associate(X))
        assert np.allclose(back.phi.eval(GRID), X.phi.eval(GRID), rtol=1e-13)
    assert associate(Lp(4)).p == pytest.approx(4 / 3)
    assert associate(Lp(4)).dual_shortcut


def test_ratio_psi_collapses():
    assert ratio_psi(ratio_psi(PowerPhi(0.4))) == PowerPhi(0.4)


def test_boyd_upper():
    assert boyd_upper(Lp(2)).value == 0.5
    assert boyd_upper(Lorentz(PowerPhi(0.5))).value == pytest.approx(0.5, abs=0.02)
    assert boyd_upper(Lorentz(LogPhi(1.0))).value == pytest.approx(0.0, abs=0.02)


def test_equiv_norm_requires_delta_below_one():
    with pytest.raises(ValueError):
        Marcinkiewicz(PowerPhi(1.0), use_equiv_norm=True)


def test_marcinkiewicz_unbounded_sup_is_divergent():
    # t^{-3/4} against phi = t^{1/2}: phi(t) f*(t) = t^{-1/4} is unbounded
    assert isinstance(norm(Marcinkiewicz(PowerPhi(0.5)), Power(1, -0.75)), Divergent)


steps = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.integers(1, 999), min_size=n - 1, max_size=n - 1, unique=True),
    st.lists(st.floats(0, 5, allow_nan=False), min_size=n, max_size=n)))


def _step(data):
    cuts, vals = data
    return Step(tuple([0.0] + sorted(c / 1000 for c in cuts) + [1.0]), tuple(vals))


SPACES = (Lp(1.5), Lorentz(PowerPhi(0.5)), Marcinkiewicz(PowerPhi(0.5)), Lorentz(LogPhi(1.0)))


@settings(max_examples=40, deadline=None)
@given(steps, st.sampled_from([0.0, 0.5, 3.0]))
def test_positive_homogeneity(data, k):
    f = _step(data)
    for X in SPACES:
        a = norm(X, Scale(k, f)).value
        b = k * norm(X, f).value
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(steps, st.floats(0.0, 2.0))
def test_lattice_property(data, bump):
    f = _step(data)
    g = Step(f.breaks_, tuple(v + bump for v in f.values))
    for X in SPACES:
        assert norm(X, f).value <= norm(X, g).value * (1 + 1e-12) + 1e-12


@settings(max_examples=40, deadline=None)
@given(steps, st.floats(0.05, 1.0))
def test_lorentz_embeds_in_marcinkiewicz(data, a):
    f = _step(data)
    assert norm(Marcinkiewicz(PowerPhi(a)), f).value <= norm(Lorentz(PowerPhi(a)), f).value * (1 + 1e-12) + 1e-12


@settings(max_examples=40, deadline=None)
@given(steps, st.floats(0.05, 0.9))
def test_equivalent_marcinkiewicz_norms_within_factor(data, a):
    f = _step(data)
    if max(f.values) == 0:
        return
    full = norm(Marcinkiewicz(PowerPhi(a)), f).value
    eq = norm(Marcinkiewicz(PowerPhi(a), use_equiv_norm=True), f).value
    assert 1 / 8 <= full / eq <= 8


@settings(max_examples=30, deadline=None)
@given(steps)
def test_norms_are_rearrangement_invariant(data):
    f = _step(data)
    fs = rearrange(f)
    for X in SPACES:
        assert norm(X, f).value == pytest.approx(norm(X, fs).value, rel=1e-12, abs=1e-14)
