"""Moment integrals of the crossing function and the cube-root constant.

gamma(f, a, b) integrates t^a T(t)^b over (0, inf).  T is nonincreasing, may
diverge logarithmically at 0 and either hits zero at a finite point (compact
profiles) or decays exponentially (softplus profiles), so the integral is
assembled from a geometrically graded head, kink-aware middle panels, and a
doubling tail with a convergence guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateModelError, DomainError
from .hfun import GFunction, HFunction, t_of, t_support_end
from .models import ModelSpec
from .quadrature import adaptive_simpson, integrate_graded_left, integrate_panels, integrate_tail

__all__ = ["gamma", "m_eta", "alpha", "c_star", "check_ipp", "MomentTable", "moment_table", "model_moments"]


def gamma(f: HFunction, a: float, b: float, tol: float = 1e-10) -> float:
    """Moment integral of the crossing function, to absolute tolerance tol."""
    if a < 0:
        raise DomainError("a must be nonnegative")
    if not b > 0:
        raise DomainError("b must be positive")
    if not tol > 0:
        raise DomainError("tol must be positive")
    r = f.r
    if r == 0.0:
        return 0.0
    root_tol = min(1e-12, tol / 100.0)

    def h(t: float) -> float:
        tv = t_of(f, t, root_tol)
        return 0.0 if tv <= 0.0 else t**a * tv**b

    t_end = t_support_end(f)
    anchor = min(1.0, r, t_end if t_end is not None else math.inf)
    total = integrate_graded_left(h, anchor, tol / 4.0)
    if t_end is not None:
        edges = sorted({anchor, r, 1.0, t_end})
        edges = [e for e in edges if anchor <= e <= t_end]
        total += integrate_panels(h, edges, tol / 4.0)
    else:
        hi = max(2.0 * r, 2.0 * anchor, 2.0)
        edges = sorted({anchor, min(r, hi), hi})
        total += integrate_panels(h, edges, tol / 4.0)
        total += integrate_tail(h, hi, tol / 4.0)
    return total


def m_eta(f: HFunction, eta: float = 1.0, tol: float = 1e-10) -> float:
    """max of the two minimal-integrability moments."""
    if not 0.0 < eta <= 1.0:
        raise DomainError("eta must lie in (0, 1]")
    return max(gamma(f, 1.0 + eta, 1.0, tol), gamma(f, 0.0, 2.0 + eta, tol))


def alpha(g: GFunction, tol: float = 1e-10) -> float:
    """One-sided area of a profile: integral of g over [0, inf)."""
    if g.is_zero:
        return 0.0
    if g.family == "tent":
        s_plus = g.params[0]
        end = 1.0 / s_plus
        return adaptive_simpson(lambda z: float(g(z)), 0.0, end, tol)
    if g.family == "table":
        end = float(g.grid[-1])
        return adaptive_simpson(lambda z: float(g(z)), 0.0, end, tol)
    hi = 4.0 * g.params[0]
    head = adaptive_simpson(lambda z: float(g(z)), 0.0, hi, tol / 2.0)
    return head + integrate_tail(lambda z: float(g(z)), hi, tol / 2.0)


def c_star(model: ModelSpec, tol: float = 1e-10) -> float:
    """(9/4) E[Gamma^(0,2) + 2 Gamma^(1,1)] over the mixture; positive by nontriviality."""
    if not model.is_nontrivial():
        raise DegenerateModelError("every atom is max or min; the scaling constant would vanish")
    acc = 0.0
    for w, f in model.atoms:
        acc += w * (gamma(f, 0.0, 2.0, tol) + 2.0 * gamma(f, 1.0, 1.0, tol))
    return 2.25 * acc


def check_ipp(f: HFunction, a: float, b: float, tol: float = 1e-9) -> float:
    """Residual of the integration-by-parts identity a*G_swap(a-1,b) = b*G(b-1,a)."""
    if a < 1 or b < 1:
        raise DomainError("the identity needs a >= 1 and b >= 1")
    return a * gamma(f.swap(), a - 1.0, b, tol) - b * gamma(f, b - 1.0, a, tol)


@dataclass
class MomentTable:
    """Moment summary for one function of the mixture."""

    gamma01: float
    gamma02: float
    gamma11: float
    gamma_1eta_1: float
    gamma_0_2eta: float
    r: float
    m_eta: float
    eta: float

    def __post_init__(self):
        entries = (self.gamma01, self.gamma02, self.gamma11, self.gamma_1eta_1, self.gamma_0_2eta)
        if any(v < 0 for v in entries):
            raise DomainError("moment entries must be nonnegative")
        if abs(self.m_eta - max(self.gamma_1eta_1, self.gamma_0_2eta)) > 1e-9 * max(self.m_eta, 1.0):
            raise DomainError("m_eta must be the max of the two eta-moments")
        if self.r ** (3.0 + self.eta) > self.m_eta * (1 + 1e-9) + 1e-12:
            raise DomainError("corner bound r^(3+eta) <= m_eta violated")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def moment_table(f: HFunction, eta: float = 1.0, tol: float = 1e-10) -> MomentTable:
    g11 = gamma(f, 1.0, 1.0, tol)
    g1e = gamma(f, 1.0 + eta, 1.0, tol)
    g2e = gamma(f, 0.0, 2.0 + eta, tol)
    return MomentTable(
        gamma01=gamma(f, 0.0, 1.0, tol),
        gamma02=gamma(f, 0.0, 2.0, tol),
        gamma11=g11,
        gamma_1eta_1=g1e,
        gamma_0_2eta=g2e,
        r=f.r,
        m_eta=max(g1e, g2e),
        eta=eta,
    )


def model_moments(model: ModelSpec, eta: float = 1.0, tol: float = 1e-10) -> dict:
    """Per-atom moment tables plus the aggregated scaling constant."""
    tables = [moment_table(f, eta, tol) for f in model.functions]
    return {
        "atoms": [
            {"weight": float(w), "label": f.label or f.g.family, "eps": f.eps, **t.to_dict()}
            for (w, f), t in zip(model.atoms, tables)
        ],
        "c_star": c_star(model, tol) if model.is_nontrivial() else 0.0,
        "eta": eta,
        "tol": tol,
    }
