"""Algebra of 1-homogeneous two-argument functions.

A function F in the class handled here is determined by a sign ``eps`` and a
log-scale profile ``g``:

    log F(e^x, e^y) = max(x, y) + g(x - y)      if eps = +1
    log F(e^x, e^y) = min(x, y) - g(x - y)      if eps = -1

where g >= 0 is 1-Lipschitz, nonincreasing on [0, inf), nondecreasing on
(-inf, 0] and vanishes at +-inf.  The pair (eps, g) is the canonical storage;
every evaluation goes through the correspondence above, which makes
homogeneity and the boundary limits automatic.

The module also provides the dualities (reflection, inversion, the positive
representative ``star``), the crossing function ``t_of`` and the corner value
``r_of`` that drive all moment integrals downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidProfileError

__all__ = [
    "GFunction",
    "HFunction",
    "ValidationReport",
    "g_zero",
    "g_softplus",
    "g_hip",
    "g_tent",
    "g_table",
    "from_g",
    "g_of",
    "eval_f",
    "star",
    "invert",
    "swap",
    "t_of",
    "r_of",
    "validate",
    "F_SUM",
    "F_PARALLEL",
    "F_MAX",
    "F_MIN",
    "F_HIP_PLUS",
    "F_HIP_MINUS",
    "power_mean",
    "asym_tent",
]

_LIP_TOL = 1e-12
MIN_POWER_MEAN_SCALE = 1e-3


@dataclass(frozen=True)
class GFunction:
    """Log-scale profile: a nonnegative even-peaked bump over the max/min skeleton.

    ``family`` is one of ``zero``, ``softplus`` (scale a: a*log(1+e^{-|z|/a})),
    ``tent`` (slopes s_plus on z>=0 and s_minus on z<0) or ``table``
    (piecewise-linear values on a symmetric uniform grid, vanishing outside).
    """

    family: str
    params: tuple = ()
    grid: np.ndarray | None = field(default=None, repr=False, compare=False)
    values: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in ("zero", "softplus", "tent", "table"):
            raise InvalidProfileError(f"unknown profile family {self.family!r}")
        if self.family == "softplus":
            (a,) = self.params
            if not a > 0:
                raise InvalidProfileError("softplus scale must be positive")
        elif self.family == "tent":
            sp, sm = self.params
            if not (0 < sp <= 1 and 0 < sm <= 1):
                raise InvalidProfileError("tent slopes must lie in (0, 1]")
        elif self.family == "table":
            self._check_table()

    def _check_table(self):
        z, v = self.grid, self.values
        if z is None or v is None or len(z) != len(v) or len(z) < 3:
            raise InvalidProfileError("table profile needs matching grid/values of length >= 3")
        dz = np.diff(z)
        if not np.allclose(dz, dz[0], rtol=0, atol=1e-9 * abs(dz[0])):
            raise InvalidProfileError("table grid must be uniform")
        if abs(z[0] + z[-1]) > 1e-9 * (z[-1] - z[0]):
            raise InvalidProfileError("table grid must be symmetric about 0")
        if np.any(v < 0):
            raise InvalidProfileError("profile values must be nonnegative")
        if abs(v[0]) > _LIP_TOL or abs(v[-1]) > _LIP_TOL:
            raise InvalidProfileError("table profile must vanish at the grid ends")
        dv = np.diff(v)
        if np.any(np.abs(dv) > dz + _LIP_TOL):
            raise InvalidProfileError("profile violates the 1-Lipschitz bound")
        pos = z[:-1] >= 0  # cells fully in [0, inf)
        if np.any(dv[pos] > _LIP_TOL):
            raise InvalidProfileError("profile must be nonincreasing on [0, inf)")
        neg = z[1:] <= 0  # cells fully in (-inf, 0]
        if np.any(dv[neg] < -_LIP_TOL):
            raise InvalidProfileError("profile must be nondecreasing on (-inf, 0]")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        az = np.abs(z)
        if self.family == "zero":
            out = np.zeros_like(z)
        elif self.family == "softplus":
            (a,) = self.params
            out = a * np.log1p(np.exp(-az / a))
        elif self.family == "tent":
            sp, sm = self.params
            out = np.where(z >= 0, np.maximum(0.0, 1.0 - sp * z), np.maximum(0.0, 1.0 + sm * z))
        else:
            out = np.interp(z, self.grid, self.values, left=0.0, right=0.0)
        out = np.where(np.isfinite(z), out, 0.0)
        return float(out[0]) if scalar else out

    def _eval_finite(self, z: np.ndarray) -> np.ndarray:
        """Vectorized evaluation for finite float arrays (hot path, no checks)."""
        if self.family == "zero":
            return np.zeros_like(z)
        if self.family == "softplus":
            (a,) = self.params
            return a * np.log1p(np.exp(-np.abs(z) / a))
        if self.family == "tent":
            sp, sm = self.params
            if sp == sm:
                return np.maximum(0.0, 1.0 - sp * np.abs(z))
            return np.where(z >= 0, np.maximum(0.0, 1.0 - sp * z), np.maximum(0.0, 1.0 + sm * z))
        return np.interp(z, self.grid, self.values, left=0.0, right=0.0)

    @property
    def peak(self) -> float:
        """g(0), the maximum of the profile."""
        if self.family == "zero":
            return 0.0
        if self.family == "softplus":
            return self.params[0] * math.log(2.0)
        if self.family == "tent":
            return 1.0
        return float(self(0.0))

    @property
    def is_zero(self) -> bool:
        return self.peak == 0.0

    def reflected(self) -> "GFunction":
        """The profile z -> g(-z)."""
        if self.family in ("zero", "softplus"):
            return self
        if self.family == "tent":
            sp, sm = self.params
            return GFunction("tent", (sm, sp))
        return GFunction("table", (), grid=self.grid, values=self.values[::-1].copy())


def g_zero() -> GFunction:
    return GFunction("zero")


def g_softplus(scale: float = 1.0) -> GFunction:
    return GFunction("softplus", (float(scale),))


def g_hip() -> GFunction:
    return GFunction("tent", (1.0, 1.0))


def g_tent(s_plus: float, s_minus: float) -> GFunction:
    return GFunction("tent", (float(s_plus), float(s_minus)))


def g_table(grid, values) -> GFunction:
    return GFunction("table", (), grid=np.asarray(grid, dtype=float), values=np.asarray(values, dtype=float))


@dataclass(frozen=True)
class HFunction:
    """A member of the function class: orientation sign plus profile."""

    eps: int
    g: GFunction
    label: str = ""

    def __post_init__(self):
        if self.eps not in (+1, -1):
            raise DomainError("eps must be +1 or -1")

    # -- evaluation ---------------------------------------------------------

    def log_eval(self, lx, ly):
        """log F(e^lx, e^ly), vectorized; exact in the log domain."""
        lx = np.asarray(lx, dtype=float)
        ly = np.asarray(ly, dtype=float)
        if self.eps == +1:
            base = np.maximum(lx, ly)
        else:
            base = np.minimum(lx, ly)
        diff = np.where(np.isfinite(lx) & np.isfinite(ly), lx - ly, np.inf)
        return base + self.eps * self.g(diff)

    def log_eval_finite(self, lx: np.ndarray, ly: np.ndarray) -> np.ndarray:
        """log F(e^lx, e^ly) for finite float arrays (hot path)."""
        base = np.maximum(lx, ly) if self.eps == +1 else np.minimum(lx, ly)
        return base + self.eps * self.g._eval_finite(lx - ly)

    def __call__(self, x: float, y: float) -> float:
        if not (x > 0 and y > 0):
            raise DomainError("arguments must be positive")
        return float(np.exp(self.log_eval(math.log(x), math.log(y))))

    # -- dualities ----------------------------------------------------------

    def swap(self) -> "HFunction":
        """F#(x, y) = F(y, x): same sign, reflected profile."""
        return HFunction(self.eps, self.g.reflected(), _dual_label(self.label, "#"))

    def invert(self) -> "HFunction":
        """F_inv(x, y) = 1/F(1/x, 1/y): flipped sign, reflected profile."""
        return HFunction(-self.eps, self.g.reflected(), _dual_label(self.label, "inv"))

    def star(self) -> "HFunction":
        """The positive representative: F itself if eps=+1, else its inversion."""
        return self if self.eps == +1 else self.invert()

    @property
    def g_star(self) -> GFunction:
        """Profile of star(F); used by the crossing function."""
        return self.g if self.eps == +1 else self.g.reflected()

    @property
    def r(self) -> float:
        """log F*(1, 1); zero exactly for max and min."""
        return self.g.peak

    def __repr__(self):
        return f"HFunction(eps={self.eps:+d}, {self.label or self.g.family})"


def _dual_label(label: str, op: str) -> str:
    return f"{label}^{op}" if label else ""


# -- functional-style wrappers (the operation surface) -----------------------


def eval_f(f: HFunction, x: float, y: float) -> float:
    return f(x, y)


def from_g(g: GFunction, eps: int, label: str = "") -> HFunction:
    """Construct the unique F with the given (eps, g) pair.

    For table profiles the class axioms are re-checked on the representation
    grid; violations raise InvalidProfileError.
    """
    if g.family == "table":
        g._check_table()
    return HFunction(eps, g, label)


def g_of(f: HFunction) -> GFunction:
    return f.g


def star(f: HFunction) -> HFunction:
    return f.star()


def invert(f: HFunction) -> HFunction:
    return f.invert()


def swap(f: HFunction) -> HFunction:
    return f.swap()


def r_of(f: HFunction) -> float:
    return f.r


def _crossing_closed_form(g: GFunction, t: float) -> float | None:
    """T(t) for profile families with an elementary crossing; None otherwise."""
    if g.family == "zero":
        return 0.0
    if g.family == "softplus":
        (a,) = g.params
        s = t / a
        # two algebraically equal forms of -a log(1 - e^-s), stable at each end
        if s >= 1.0:
            return -a * math.log1p(-math.exp(-s))
        return -a * math.log(-math.expm1(-s))
    if g.family == "tent":
        sp, sm = g.params
        if t < 1.0:
            return t + (1.0 - t) / sp
        if sm == 1.0:
            # flat crossing exactly at t = 1; return the sup there
            return 1.0 if t == 1.0 else 0.0
        return max(0.0, (1.0 - sm * t) / (1.0 - sm))
    return None


def t_of(f: HFunction, t: float, tol: float = 1e-12) -> float:
    """Crossing function T_F(t) = sup{z : F*(e^-t, e^-z) >= 1}.

    The map z -> log F*(e^-t, e^-z) = -min(t, z) + g*(z - t) is nonincreasing,
    so the crossing is found by bracketed bisection; profile families with an
    elementary crossing short-circuit it.  At a flat crossing the bisection
    point (any point of the flat set) is returned.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if not tol > 0:
        raise DomainError("tol must be positive")
    gs = f.g_star
    closed = _crossing_closed_form(gs, t)
    if closed is not None:
        return closed

    def s(z: float) -> float:
        return gs(z - t) - min(t, z)

    if gs(-t) <= 0.0:
        return 0.0
    z_hi = max(1.0, f.r + 1.0)
    while s(z_hi) >= 0.0:
        z_hi *= 2.0
        if z_hi > 1e12:
            raise DomainError("crossing bracket exceeded 1e12")
    z_lo = 0.0
    while z_hi - z_lo > tol:
        mid = 0.5 * (z_lo + z_hi)
        if s(mid) >= 0.0:
            z_lo = mid
        else:
            z_hi = mid
    return 0.5 * (z_lo + z_hi)


def t_support_end(f: HFunction, tol: float = 1e-12) -> float | None:
    """Smallest t beyond which T_F vanishes identically, or None if T > 0 everywhere.

    T is nonincreasing, and T(t) = 0 exactly when g*(-t) = 0, so the support
    end is the point where the left wing of g* hits zero.
    """
    gs = f.g_star
    if gs.family == "zero":
        return 0.0
    if gs.family == "softplus":
        return None
    if gs.family == "tent":
        _, sm = gs.params
        return 1.0 / sm
    z, v = gs.grid, gs.values
    neg = z <= 0
    nz = v[neg] > 0
    if not nz.any():
        return 0.0
    first = int(np.argmax(nz))
    # support of the left wing starts at the node before the first positive value
    return float(-z[neg][max(first - 1, 0)])


@dataclass
class ValidationReport:
    passed: bool
    violations: list[str]


def validate(f: HFunction, probes: np.ndarray | None = None, rng_seed: int = 0) -> ValidationReport:
    """Check the class axioms on a probe grid: homogeneity, coordinatewise
    monotonicity, the eps-side bound, and the boundary limits."""
    rng = np.random.default_rng(rng_seed)
    if probes is None:
        probes = np.exp(rng.uniform(-6, 6, size=(64, 2)))
    violations: list[str] = []
    scales = np.exp(rng.uniform(-3, 3, size=len(probes)))
    for (x, y), a in zip(probes, scales):
        fxy = f(x, y)
        if abs(f(a * x, a * y) - a * fxy) > 1e-10 * a * fxy:
            violations.append(f"homogeneity fails at (x={x:.3g}, y={y:.3g}, a={a:.3g})")
        for xp in (x * 1.01, x * 2.0):
            if f(xp, y) < fxy - 1e-12 * fxy:
                violations.append(f"monotonicity in x fails at (x={x:.3g}, y={y:.3g})")
        if f.eps == +1 and fxy < max(x, y) * (1 - 1e-12):
            violations.append(f"eps=+1 side bound fails at (x={x:.3g}, y={y:.3g})")
        if f.eps == -1 and fxy > min(x, y) * (1 + 1e-12):
            violations.append(f"eps=-1 side bound fails at (x={x:.3g}, y={y:.3g})")
    # boundary limits: F(x, y) -> y as x -> 0 (eps=+1) or x -> inf (eps=-1)
    for y in (0.5, 1.0, 3.0):
        if f.eps == +1:
            lim = f(1e-14, y)
        else:
            lim = f(1e14, y)
        if abs(lim - y) > 1e-6 * y:
            violations.append(f"boundary limit fails at y={y}")
    return ValidationReport(passed=not violations, violations=violations)


# -- built-in instances -------------------------------------------------------

F_SUM = HFunction(+1, g_softplus(1.0), "sum")
F_PARALLEL = HFunction(-1, g_softplus(1.0), "parallel")
F_MAX = HFunction(+1, g_zero(), "max")
F_MIN = HFunction(-1, g_zero(), "min")
F_HIP_PLUS = HFunction(+1, g_hip(), "hipster+")
F_HIP_MINUS = HFunction(-1, g_hip(), "hipster-")


def power_mean(alpha: float) -> HFunction:
    """F(x, y) = (x^{1/alpha} + y^{1/alpha})^alpha, orientation sign(alpha)."""
    if abs(alpha) < MIN_POWER_MEAN_SCALE:
        raise DomainError(f"|alpha| must be >= {MIN_POWER_MEAN_SCALE}")
    return HFunction(+1 if alpha > 0 else -1, g_softplus(abs(alpha)), f"power_mean({alpha:g})")


def asym_tent(s_plus: float, s_minus: float, eps: int = +1) -> HFunction:
    """Asymmetric tent profile with slopes s_plus (right) and s_minus (left)."""
    return HFunction(eps, g_tent(s_plus, s_minus), f"tent({s_plus:g},{s_minus:g})")
