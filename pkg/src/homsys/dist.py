"""Grid-backed distribution functions, the two limit laws, and sup-distance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["GridCDF", "LIMIT_LAWS", "limit_cdf", "limit_density", "ks", "from_samples", "rescale", "reflect"]

_MONO_TOL = 1e-12


@dataclass(frozen=True)
class GridCDF:
    """CDF of log X on a uniform grid.

    ``cdf`` holds m+1 nondecreasing values; ``cdf[0]`` equals the mass placed
    at -infinity (zero except in proof-machinery mixtures) and ``cdf[m]`` is 1.
    """

    lo: float
    hi: float
    cdf: np.ndarray
    atom_neg_inf: float = 0.0
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cdf", np.asarray(self.cdf, dtype=float))
        if not self.lo < self.hi:
            raise DomainError("need lo < hi")
        c = self.cdf
        if c.ndim != 1 or len(c) < 2:
            raise DomainError("cdf needs at least two nodes")
        if np.any(np.diff(c) < -_MONO_TOL):
            raise DomainError("cdf must be nondecreasing")
        if abs(c[0] - self.atom_neg_inf) > _MONO_TOL:
            raise DomainError("cdf[0] must equal the atom at -infinity")
        if abs(c[-1] - 1.0) > _MONO_TOL:
            raise DomainError("cdf must reach 1")

    @property
    def m(self) -> int:
        return len(self.cdf) - 1

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / self.m

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.m + 1)

    def __call__(self, v):
        """Piecewise-linear CDF value(s); atom mass below lo, 1 above hi."""
        v = np.asarray(v, dtype=float)
        out = np.interp(v, self.grid(), self.cdf, left=self.atom_neg_inf, right=1.0)
        return float(out) if out.ndim == 0 else out

    def density(self) -> np.ndarray:
        """Central-difference density at the nodes (one-sided at the ends)."""
        c, h = self.cdf, self.h
        psi = np.empty_like(c)
        psi[1:-1] = (c[2:] - c[:-2]) / (2.0 * h)
        psi[0] = (c[1] - c[0]) / h
        psi[-1] = (c[-1] - c[-2]) / h
        return psi

    def quantile(self, q: float) -> float:
        if not 0.0 <= q <= 1.0:
            raise DomainError("quantile level must lie in [0, 1]")
        c = self.cdf
        x = self.grid()
        i = int(np.searchsorted(c, q, side="left"))
        if i == 0:
            return float(x[0])
        if i > self.m:
            return float(x[-1])
        c0, c1 = c[i - 1], c[i]
        if c1 == c0:
            return float(x[i])
        w = (q - c0) / (c1 - c0)
        return float(x[i - 1] + w * self.h)


def rescale(d: GridCDF, s: float) -> GridCDF:
    """Distribution of (log X)/s: support mapped x -> x/s, values unchanged."""
    if not s > 0:
        raise DomainError("scale must be positive")
    return GridCDF(d.lo / s, d.hi / s, d.cdf.copy(), d.atom_neg_inf, d.degenerate)


def reflect(d: GridCDF) -> GridCDF:
    """Law of -log X for an atomless law: cdf(v) = 1 - cdf(-v)."""
    if d.atom_neg_inf != 0.0:
        raise DomainError("cannot reflect a law with mass at -infinity")
    return GridCDF(-d.hi, -d.lo, 1.0 - d.cdf[::-1], 0.0)


def from_samples(samples, m: int, pad: float = 0.5) -> GridCDF:
    """Empirical CDF of a sample on a padded uniform grid.

    All-equal samples produce a step at the common value with a warning flag.
    """
    s = np.sort(np.asarray(samples, dtype=float))
    if s.size == 0:
        raise DomainError("empty sample")
    if not pad > 0:
        raise DomainError("pad must be positive")
    lo, hi = float(s[0]), float(s[-1])
    degenerate = lo == hi
    lo, hi = lo - pad, hi + pad
    x = np.linspace(lo, hi, m + 1)
    cdf = np.searchsorted(s, x, side="right") / s.size
    cdf[-1] = 1.0
    return GridCDF(lo, hi, cdf, 0.0, degenerate)


# -- limit laws ---------------------------------------------------------------

LIMIT_LAWS = ("cubic", "linear_half")


def limit_cdf(law: str, y):
    """CDF of the limit law: 'cubic' has density (3/4)(1-y^2) on (-1, 1) and
    CDF (2+3y-y^3)/4; 'linear_half' has density 2y on (0, 1) and CDF y^2."""
    y = np.asarray(y, dtype=float)
    if law == "cubic":
        yc = np.clip(y, -1.0, 1.0)
        out = (2.0 + 3.0 * yc - yc**3) / 4.0
    elif law == "linear_half":
        yc = np.clip(y, 0.0, 1.0)
        out = yc**2
    else:
        raise DomainError(f"unknown limit law {law!r}")
    return float(out) if out.ndim == 0 else out


def limit_density(law: str, y):
    y = np.asarray(y, dtype=float)
    if law == "cubic":
        out = 0.75 * (1.0 - y**2) * (np.abs(y) < 1.0)
    elif law == "linear_half":
        out = 2.0 * y * ((y > 0.0) & (y < 1.0))
    else:
        raise DomainError(f"unknown limit law {law!r}")
    return float(out) if out.ndim == 0 else out


def ks(a, b) -> float:
    """Sup-norm distance between two distribution representations.

    Accepts GridCDF, a sorted (or unsorted) sample array, or a limit-law tag
    on either side; the comparison runs over the grid or sample points.
    """
    if isinstance(a, str) and not isinstance(b, str):
        return ks(b, a)
    if isinstance(a, GridCDF):
        x = a.grid()
        fa = a.cdf
        if isinstance(b, str):
            return float(np.max(np.abs(fa - limit_cdf(b, x))))
        if isinstance(b, GridCDF):
            xs = np.union1d(x, b.grid())
            return float(np.max(np.abs(a(xs) - b(xs))))
        return _ks_sample_vs(np.asarray(b, dtype=float), a)
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise DomainError("empty sample")
    if isinstance(b, str):
        return _ks_sample_vs(a, lambda x: limit_cdf(b, x))
    if isinstance(b, GridCDF):
        return _ks_sample_vs(a, b)
    return _ks_two_sample(a, np.asarray(b, dtype=float))


def _ks_sample_vs(sample: np.ndarray, cdf) -> float:
    s = np.sort(sample)
    n = s.size
    ref = cdf(s) if callable(cdf) else cdf
    upper = np.arange(1, n + 1) / n - ref
    lower = ref - np.arange(0, n) / n
    return float(max(upper.max(), lower.max(), 0.0))


def _ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    sa, sb = np.sort(a), np.sort(b)
    allv = np.concatenate([sa, sb])
    ca = np.searchsorted(sa, allv, side="right") / sa.size
    cb = np.searchsorted(sb, allv, side="right") / sb.size
    return float(np.max(np.abs(ca - cb)))
