import math

import numpy as np
import pytest

from homsys import (
    F_HIP_MINUS,
    F_HIP_PLUS,
    F_MAX,
    F_MIN,
    F_PARALLEL,
    F_SUM,
    DegenerateModelError,
    ModelSpec,
    asym_tent,
    alpha,
    c_star,
    check_ipp,
    gamma,
    invert,
    m_eta,
    moment_table,
    power_mean,
    r_of,
    swap,
    t_of,
)
from homsys.models import builtin, invert_model

# frozen oracle values (series / high-precision quadrature)
ZETA2 = 1.6449340668482264365  # sum 1/k^2
ZETA3 = 1.2020569031595942854  # sum 1/k^3
TWO_ZETA4 = 2.1646464674222764  # 2 sum 1/k^4
G03_SUM = 6.4939394022668291  # integral of (-log(1-e^-t))^3 = pi^4/15
ALPHA_SUM = 0.8224670334241132  # sum (-1)^(k+1)/k^2 = pi^2/12


class TestGamma:
    def test_hip_values(self):
        for f in (F_HIP_PLUS, F_HIP_MINUS):
            assert gamma(f, 0, 2, 1e-11) == pytest.approx(1.0, abs=1e-9)
            assert gamma(f, 1, 1, 1e-11) == pytest.approx(0.5, abs=1e-9)

    def test_max_min_vanish(self):
        assert gamma(F_MAX, 0, 1) == 0.0
        assert gamma(F_MIN, 2, 3) == 0.0

    def test_sum_series_oracles(self):
        assert gamma(F_SUM, 0, 1, 1e-10) == pytest.approx(ZETA2, abs=1e-8)
        assert gamma(F_SUM, 1, 1, 1e-10) == pytest.approx(ZETA3, abs=1e-8)
        assert gamma(F_SUM, 2, 1, 1e-10) == pytest.approx(TWO_ZETA4, abs=1e-8)
        assert gamma(F_SUM, 0, 2, 1e-10) == pytest.approx(2 * ZETA3, abs=1e-8)

    def test_tent_elementary_oracles(self):
        # T = 1 on (0,1], 2-t on (1,2] for slopes (1, 1/2); swap has T = (2-t) on (0,1]
        f = asym_tent(1.0, 0.5)
        assert gamma(f, 0, 1, 1e-10) == pytest.approx(1.5, abs=1e-9)
        assert gamma(f, 1, 1, 1e-10) == pytest.approx(7.0 / 6.0, abs=1e-9)
        assert gamma(f, 0, 2, 1e-10) == pytest.approx(4.0 / 3.0, abs=1e-9)
        assert gamma(swap(f), 1, 1, 1e-10) == pytest.approx(2.0 / 3.0, abs=1e-9)
        assert gamma(swap(f), 0, 2, 1e-10) == pytest.approx(7.0 / 3.0, abs=1e-9)

    def test_power_mean_scaling(self):
        # T_alpha(t) = alpha T_1(t/alpha) so gamma scales by alpha^(a+b+1)
        a = 1.7
        assert gamma(power_mean(a), 1, 1, 1e-9) == pytest.approx(a**3 * ZETA3, abs=1e-7)
        assert gamma(power_mean(-a), 1, 1, 1e-9) == pytest.approx(a**3 * ZETA3, abs=1e-7)

    def test_invariance_under_invert_and_star(self):
        for f in (F_SUM, F_HIP_PLUS, asym_tent(0.9, 0.4)):
            base = gamma(f, 1, 1, 1e-9)
            assert gamma(invert(f), 1, 1, 1e-9) == pytest.approx(base, abs=1e-8)

    def test_pointwise_bound(self):
        # sup t^(a+1) T(t)^b <= (a+1) gamma(a,b)
        for f in (F_SUM, F_HIP_PLUS, asym_tent(1.0, 0.5)):
            for a, b in [(0.0, 1.0), (1.0, 1.0), (0.0, 2.0)]:
                g = gamma(f, a, b, 1e-9)
                for t in np.linspace(0.05, 6.0, 40):
                    assert t ** (a + 1) * t_of(f, t) ** b <= (a + 1) * g + 1e-8


class TestMEta:
    def test_hip(self):
        assert m_eta(F_HIP_PLUS, 1.0, 1e-10) == pytest.approx(1.0, abs=1e-9)

    def test_min_zero(self):
        assert m_eta(F_MIN, 1.0) == 0.0

    def test_sum(self):
        assert m_eta(F_SUM, 1.0, 1e-10) == pytest.approx(G03_SUM, abs=1e-7)

    def test_eta_range(self):
        with pytest.raises(Exception):
            m_eta(F_SUM, 1.5)

    def test_interpolation_bound(self):
        # gamma(a,b) <= 2 m_eta / r^(2+eta-a-b) for a in [0,1+eta], b in [1,2+eta]
        eta = 1.0
        for f in (F_SUM, F_HIP_PLUS, asym_tent(1.0, 0.5)):
            m = m_eta(f, eta, 1e-10)
            r = r_of(f)
            for a, b in [(0.0, 1.0), (1.0, 1.0), (0.5, 2.0), (2.0, 1.0), (0.0, 3.0)]:
                assert gamma(f, a, b, 1e-9) <= 2.0 * m / r ** (2.0 + eta - a - b) + 1e-8


class TestAlpha:
    def test_hip_triangle(self):
        assert alpha(F_HIP_PLUS.g) == pytest.approx(0.5, abs=1e-10)

    def test_zero(self):
        assert alpha(F_MAX.g) == 0.0

    def test_sum(self):
        assert alpha(F_SUM.g, 1e-11) == pytest.approx(ALPHA_SUM, abs=1e-9)


class TestCStar:
    def test_hipster(self):
        assert c_star(builtin("hipster"), 1e-10) == pytest.approx(4.5, abs=1e-8)

    def test_resistance(self):
        assert c_star(builtin("resistance", p=0.5), 1e-9) == pytest.approx(9 * ZETA3, abs=1e-6)

    def test_power_mean_matches_resistance(self):
        a = c_star(builtin("power_mean", atoms=((0.5, 1.0), (0.5, -1.0))), 1e-9)
        b = c_star(builtin("resistance", p=0.5), 1e-9)
        assert a == pytest.approx(b, abs=1e-6)

    def test_degenerate_rejected(self):
        trivial = ModelSpec(((0.5, F_MAX), (0.5, F_MIN)))
        with pytest.raises(DegenerateModelError):
            c_star(trivial)

    def test_invariant_under_model_inversion(self):
        m = builtin("lazy_hipster")
        assert c_star(invert_model(m), 1e-9) == pytest.approx(c_star(m, 1e-9), abs=1e-7)


class TestIPP:
    def test_hip_both_sides_one(self):
        assert check_ipp(F_HIP_PLUS, 1, 2, 1e-10) == pytest.approx(0.0, abs=1e-8)

    def test_max_trivial(self):
        assert check_ipp(F_MAX, 2, 2) == 0.0

    def test_asymmetric_tent(self):
        assert abs(check_ipp(asym_tent(1.0, 0.5), 2, 1, 1e-9)) < 1e-8

    def test_symmetric_relation(self):
        # swap(f) = f implies gamma(0,2) = 2 gamma(1,1)
        for f in (F_SUM, F_HIP_PLUS, power_mean(1.7)):
            assert gamma(f, 0, 2, 1e-9) == pytest.approx(2 * gamma(f, 1, 1, 1e-9), abs=1e-7)


class TestMomentTable:
    def test_fields_and_invariants(self):
        t = moment_table(F_HIP_PLUS, eta=1.0, tol=1e-10)
        assert t.gamma01 == pytest.approx(1.0, abs=1e-9)
        assert t.m_eta == max(t.gamma_1eta_1, t.gamma_0_2eta)
        assert t.r ** (3.0 + t.eta) <= t.m_eta * (1 + 1e-9) + 1e-12

    def test_all_zero_only_for_max_min(self):
        t = moment_table(F_MIN)
        assert t.gamma01 == t.gamma02 == t.gamma11 == 0.0
        t2 = moment_table(asym_tent(0.5, 0.5))
        assert t2.gamma01 > 0
