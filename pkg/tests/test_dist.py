import numpy as np
import pytest

from homsys import DomainError, GridCDF, from_samples, ks, limit_cdf, limit_density, rescale
from homsys.dist import reflect


def cubic_grid(m=4096, lo=-1.5, hi=1.5) -> GridCDF:
    x = np.linspace(lo, hi, m + 1)
    return GridCDF(lo, hi, limit_cdf("cubic", x))


class TestLimitLaws:
    def test_cubic_values(self):
        assert limit_cdf("cubic", 0.0) == 0.5
        assert limit_cdf("cubic", 1.0) == 1.0
        assert limit_cdf("cubic", -1.0) == 0.0
        assert limit_cdf("cubic", 5.0) == 1.0
        assert limit_cdf("cubic", 0.5) == pytest.approx(0.84375, abs=1e-15)

    def test_linear_half_values(self):
        assert limit_cdf("linear_half", 0.5) == pytest.approx(0.25, abs=1e-15)
        assert limit_cdf("linear_half", -0.2) == 0.0
        assert limit_cdf("linear_half", 2.0) == 1.0

    def test_densities(self):
        assert limit_density("cubic", 0.0) == 0.75
        assert limit_density("cubic", 2.0) == 0.0
        assert limit_density("linear_half", 0.5) == 1.0

    def test_unknown_law(self):
        with pytest.raises(DomainError):
            limit_cdf("gaussian", 0.0)


class TestKS:
    def test_self_distance_zero(self):
        g = cubic_grid()
        assert ks(g, "cubic") < 1e-12

    def test_point_mass_vs_cubic(self):
        d = from_samples([0.0], m=64, pad=1.0)
        assert ks(d, "cubic") == pytest.approx(0.5, abs=1e-12)

    def test_dkw_direct_samples(self):
        # inverse-transform 1e6 cubic samples; DKW: P(D > 0.002) <= 2 exp(-8)
        rng = np.random.default_rng(20240809)
        y = np.linspace(-1, 1, 200_001)
        samples = np.interp(rng.random(1_000_000), limit_cdf("cubic", y), y)
        assert ks(samples, "cubic") < 0.002

    def test_two_sample_symmetry(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=1000), rng.normal(size=1200)
        assert ks(a, b) == ks(b, a)

    def test_empty_sample_rejected(self):
        with pytest.raises(DomainError):
            ks(np.array([]), "cubic")


class TestGridCDF:
    def test_monotone_enforced(self):
        with pytest.raises(DomainError):
            GridCDF(0.0, 1.0, np.array([0.0, 0.6, 0.4, 1.0]))

    def test_end_values_enforced(self):
        with pytest.raises(DomainError):
            GridCDF(0.0, 1.0, np.array([0.0, 0.5, 0.9]))
        with pytest.raises(DomainError):
            GridCDF(0.0, 1.0, np.array([0.1, 0.5, 1.0]))  # atom mismatch

    def test_from_samples_step(self):
        d = from_samples([0.0], m=16, pad=0.5)
        assert d.degenerate
        assert d(-0.25) == 0.0
        assert d(0.25) == 1.0

    def test_quantile_symmetry(self):
        g = cubic_grid()
        assert g.quantile(0.5) == pytest.approx(0.0, abs=g.h)
        assert g.quantile(0.0) == g.lo

    def test_quantile_rescale_identity(self):
        g = cubic_grid()
        r = rescale(g, 2.0)
        for q in (0.1, 0.5, 0.9):
            assert r.quantile(q) == pytest.approx(g.quantile(q) / 2.0, abs=g.h)

    def test_rescale_requires_positive(self):
        with pytest.raises(DomainError):
            rescale(cubic_grid(), -1.0)

    def test_rescale_preserves_ks(self):
        g = cubic_grid()
        other = from_samples(np.linspace(-1, 1, 1001), m=512, pad=0.1)
        base = ks(g, other)
        h_bound = 2.0 * (g.h + other.h)
        assert abs(ks(rescale(g, 3.0), rescale(other, 3.0)) - base) <= h_bound

    def test_reflect(self):
        rng = np.random.default_rng(3)
        d = from_samples(rng.normal(0.3, 1.0, 5000), m=256, pad=0.5)
        r = reflect(d)
        for v in (-1.0, 0.0, 0.7):
            assert r(v) == pytest.approx(1.0 - d(-v), abs=1e-9)

    def test_density_integrates_to_one(self):
        g = cubic_grid()
        total = np.trapezoid(g.density(), g.grid())
        assert total == pytest.approx(1.0, abs=1e-3)
