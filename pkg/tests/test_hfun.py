import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homsys import (
    F_HIP_MINUS,
    F_HIP_PLUS,
    F_MAX,
    F_MIN,
    F_PARALLEL,
    F_SUM,
    DomainError,
    InvalidProfileError,
    asym_tent,
    from_g,
    g_of,
    invert,
    power_mean,
    r_of,
    star,
    swap,
    t_of,
    validate,
)
from homsys.hfun import g_hip, g_table, g_tent, g_zero, t_support_end

LOG2 = math.log(2.0)


class TestEval:
    def test_sum(self):
        assert F_SUM(2.0, 3.0) == pytest.approx(5.0, rel=1e-14)

    def test_min(self):
        assert F_MIN(2.0, 3.0) == pytest.approx(2.0, rel=1e-14)

    def test_parallel_halves(self):
        assert F_PARALLEL(2.0, 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_hip_peak(self):
        # log F(e^0, e^0) = max + G_hip(0) = 1
        assert F_HIP_PLUS(1.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            F_SUM(-1.0, 2.0)
        with pytest.raises(DomainError):
            F_SUM(1.0, 0.0)


class TestCorrespondence:
    def test_zero_profile_is_max(self):
        f = from_g(g_zero(), +1)
        for x, y in [(0.5, 2.0), (3.0, 3.0), (1e-3, 10.0)]:
            assert f(x, y) == pytest.approx(max(x, y), rel=1e-14)

    def test_hip_minus_from_profile(self):
        f = from_g(g_hip(), -1)
        for x, y in [(1.0, 1.0), (2.0, 5.0), (0.1, 0.1)]:
            assert f(x, y) == pytest.approx(F_HIP_MINUS(x, y), rel=1e-14)

    def test_round_trip_on_grid(self):
        g = g_tent(1.0, 0.5)
        f = from_g(g, +1)
        z = np.linspace(-4, 4, 201)
        assert np.max(np.abs(g_of(f)(z) - g(z))) < 1e-12

    def test_g_of_values(self):
        assert g_of(F_SUM)(0.0) == pytest.approx(LOG2, abs=1e-15)
        assert np.all(g_of(F_MIN)(np.linspace(-5, 5, 11)) == 0.0)
        assert g_of(F_HIP_PLUS)(0.25) == pytest.approx(0.75, abs=1e-15)

    def test_table_lipschitz_rejected(self):
        z = np.linspace(-2, 2, 5)
        v = np.array([0.0, 1.5, 2.0, 1.5, 0.0])  # slope 1.5 > 1
        with pytest.raises(InvalidProfileError):
            g_table(z, v)

    def test_table_monotone_wings_rejected(self):
        z = np.linspace(-3, 3, 7)
        v = np.array([0.0, 0.5, 0.2, 0.9, 0.2, 0.5, 0.0])
        with pytest.raises(InvalidProfileError):
            g_table(z, v)


class TestDualities:
    def test_invert_sum_is_parallel(self):
        fi = invert(F_SUM)
        for x, y in [(2.0, 3.0), (1.0, 1.0), (0.2, 5.0)]:
            assert fi(x, y) == pytest.approx(F_PARALLEL(x, y), rel=1e-14)

    def test_star_hip_minus(self):
        fs = star(F_HIP_MINUS)
        for x, y in [(1.0, 2.0), (3.0, 0.5)]:
            assert fs(x, y) == pytest.approx(F_HIP_PLUS(x, y), rel=1e-14)

    def test_star_fixes_plus_side(self):
        assert star(F_SUM) is F_SUM

    def test_swap_is_argument_swap(self):
        f = asym_tent(1.0, 0.5)
        fs = swap(f)
        for x, y in [(2.0, 3.0), (0.3, 7.0), (1.0, 1.0)]:
            assert fs(x, y) == pytest.approx(f(y, x), rel=1e-14)

    def test_swap_symmetric_fixed(self):
        fs = swap(F_SUM)
        for x, y in [(2.0, 3.0), (0.3, 7.0)]:
            assert fs(x, y) == pytest.approx(F_SUM(x, y), rel=1e-14)

    def test_invert_is_reciprocal_of_reciprocal_args(self):
        # the defining identity, on an asymmetric profile where the profile
        # reflection is visible
        f = asym_tent(0.8, 0.3)
        fi = invert(f)
        for x, y in [(2.0, 3.0), (0.5, 4.0), (1.0, 1.0), (7.0, 0.2)]:
            assert fi(x, y) == pytest.approx(1.0 / f(1.0 / x, 1.0 / y), rel=1e-13)

    def test_invert_involution(self):
        f = asym_tent(0.8, 0.3)
        fii = invert(invert(f))
        for x, y in [(2.0, 3.0), (0.5, 4.0)]:
            assert fii(x, y) == pytest.approx(f(x, y), rel=1e-14)


class TestCrossing:
    def test_hip_indicator(self):
        assert t_of(F_HIP_PLUS, 0.5) == 1.0
        assert t_of(F_HIP_PLUS, 1.5) == 0.0
        assert t_of(F_HIP_MINUS, 0.5) == 1.0

    def test_max_vanishes(self):
        for t in (0.1, 1.0, 10.0):
            assert t_of(F_MAX, t) == 0.0

    def test_sum_closed_form(self):
        # solve e^-t + e^-z = 1
        assert t_of(F_SUM, LOG2) == pytest.approx(LOG2, abs=1e-12)
        for t in (0.25, 1.0, 3.0):
            assert t_of(F_SUM, t) == pytest.approx(-math.log1p(-math.exp(-t)), abs=1e-12)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(DomainError):
            t_of(F_SUM, 0.0)

    def test_table_bisection_matches_closed_form(self):
        z = np.linspace(-1.5, 1.5, 3001)
        f_tab = from_g(g_table(z, np.maximum(0.0, 1.0 - np.abs(z))), +1)
        for t in (0.3, 0.8, 0.999, 1.2, 2.0):
            assert t_of(f_tab, t, 1e-12) == pytest.approx(t_of(F_HIP_PLUS, t), abs=1e-9)

    def test_tent_closed_form_vs_bisection(self):
        sp, sm = 0.7, 0.4
        f = asym_tent(sp, sm)
        half = max(1.0 / sm, 1.0 / sp) + 0.5
        z = np.linspace(-half, half, 12001)
        prof = np.where(z >= 0, np.maximum(0.0, 1 - sp * z), np.maximum(0.0, 1 + sm * z))
        f_tab = from_g(g_table(z, prof), +1)
        for t in (0.1, 0.5, 0.9, 1.3, 2.0, 1.0 / sm - 0.05):
            assert t_of(f, t) == pytest.approx(t_of(f_tab, t, 1e-12), abs=1e-8)

    def test_support_end(self):
        assert t_support_end(F_HIP_PLUS) == 1.0
        assert t_support_end(asym_tent(1.0, 0.5)) == 2.0
        assert t_support_end(F_SUM) is None
        assert t_support_end(F_MAX) == 0.0


class TestRValue:
    def test_examples(self):
        assert r_of(F_MIN) == 0.0
        assert r_of(F_MAX) == 0.0
        assert r_of(F_SUM) == pytest.approx(LOG2, abs=1e-15)
        assert r_of(F_HIP_PLUS) == 1.0

    def test_zero_iff_max_min(self):
        assert r_of(power_mean(0.5)) > 0
        assert r_of(asym_tent(0.9, 0.9)) > 0


ALL_FUNCS = [F_SUM, F_PARALLEL, F_MAX, F_MIN, F_HIP_PLUS, F_HIP_MINUS, power_mean(1.7), power_mean(-0.6), asym_tent(1.0, 0.5)]


@pytest.mark.parametrize("f", ALL_FUNCS, ids=lambda f: f.label)
class TestClassAxioms:
    def test_validate_passes(self, f):
        report = validate(f)
        assert report.passed, report.violations

    @settings(max_examples=25, deadline=None)
    @given(
        x=st.floats(1e-6, 1e6),
        y=st.floats(1e-6, 1e6),
        a=st.floats(1e-6, 1e6),
    )
    def test_homogeneity(self, f, x, y, a):
        lhs = f(a * x, a * y)
        rhs = a * f(x, y)
        assert abs(lhs - rhs) <= 1e-12 * rhs

    @settings(max_examples=25, deadline=None)
    @given(x=st.floats(0.01, 100.0), y=st.floats(0.01, 100.0), bump=st.floats(1.0, 10.0))
    def test_monotone_and_side_bound(self, f, x, y, bump):
        v = f(x, y)
        assert f(x * bump, y) >= v * (1 - 1e-12)
        if f.eps == +1:
            assert v >= max(x, y) * (1 - 1e-12)
        else:
            assert v <= min(x, y) * (1 + 1e-12)


@pytest.mark.parametrize("f", ALL_FUNCS, ids=lambda f: f.label)
def test_crossing_dualities(f):
    for t in (0.2, 0.7, 1.1, 2.5):
        base = t_of(f, t)
        assert t_of(star(f), t) == pytest.approx(base, abs=1e-9)
        assert t_of(invert(f), t) == pytest.approx(base, abs=1e-9)


@pytest.mark.parametrize("f", ALL_FUNCS, ids=lambda f: f.label)
def test_crossing_swap_duality(f):
    # T_F(t) < u iff T_F#(u) < t, probed off the crossing set
    for t, u in [(0.3, 0.9), (1.2, 0.4), (2.0, 2.0), (0.6, 0.61)]:
        lhs = t_of(f, t) < u - 1e-9
        rhs = t_of(swap(f), u) < t - 1e-9
        mid = abs(t_of(f, t) - u) < 1e-8 or abs(t_of(swap(f), u) - t) < 1e-8
        if not mid:
            assert lhs == rhs


@pytest.mark.parametrize("f", ALL_FUNCS, ids=lambda f: f.label)
def test_crossing_ordering(f):
    r = r_of(f)
    ts = [r + 0.1, r + 1.0, r + 5.0]
    vals = [t_of(f, t) for t in ts]
    for v in vals:
        assert v <= r + 1e-9
    # nonincreasing overall
    probe = [0.05, 0.3, 1.0, 2.0, 5.0]
    tv = [t_of(f, t) for t in probe]
    assert all(a >= b - 1e-9 for a, b in zip(tv, tv[1:]))
