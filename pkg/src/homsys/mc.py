"""Pool Monte Carlo for the distributional recursion, plus the literal
integer-lattice walks used for cross-validation.

Reproducibility contract: every random draw comes from a Philox generator
keyed by (seed, stream, step), and each step's draws are made in one fixed
vectorized sequence.  Thread counts therefore cannot change any stream, and
identical (seed, model, n, N) produce bit-identical pools.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist import GridCDF, ks
from .errors import DomainError
from .models import ModelSpec, resolve_scaling
from .hfun import HFunction

__all__ = ["SamplePool", "new_pool", "pool_step", "simulate", "hipster_direct", "CheckpointSummary"]

_STREAM_INIT = 0
_STREAM_STEP = 1
_STREAM_WALK = 2


def _gen(seed: int, stream: int, step: int) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64((stream << 48) + step)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class SamplePool:
    """Population of log-scale samples standing in for the law at step n."""

    values: np.ndarray
    n: int
    seed: int
    model: ModelSpec

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size < 2:
            raise DomainError("pool needs at least two samples")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("pool values must be finite")


def new_pool(model: ModelSpec, init, N: int, seed: int) -> SamplePool:
    """Initial pool from a point value (log scale) or a GridCDF (inverse sampling)."""
    if isinstance(init, GridCDF):
        if init.atom_neg_inf != 0.0:
            raise DomainError("cannot sample a pool from a law with mass at -infinity")
        u = _gen(seed, _STREAM_INIT, 0).random(N)
        vals = np.interp(u, init.cdf, init.grid())
    else:
        vals = np.full(N, float(init))
    return SamplePool(vals, 0, seed, model)


def _apply_atoms(values: np.ndarray, model: ModelSpec, rng: np.random.Generator) -> np.ndarray:
    N = values.size
    idx = rng.integers(0, N, 2 * N)
    u = rng.random(N)
    a = values[idx[:N]]
    b = values[idx[N:]]
    cum = np.cumsum(model.weights)
    cum[-1] = 1.0
    which = np.searchsorted(cum, u, side="right")
    out = np.empty(N)
    for k, (_, f) in enumerate(model.atoms):
        mask = which == k
        if mask.any():
            out[mask] = f.log_eval_finite(a[mask], b[mask])
    return out


def pool_step(pool: SamplePool) -> SamplePool:
    """One resampling step: each slot is log F applied to two uniform picks."""
    rng = _gen(pool.seed, _STREAM_STEP, pool.n + 1)
    vals = _apply_atoms(pool.values, pool.model, rng)
    return SamplePool(vals, pool.n + 1, pool.seed, pool.model)


@dataclass
class CheckpointSummary:
    n: int
    scale: float
    ks: float
    rescaled: np.ndarray
    law: str


def simulate(
    model: ModelSpec,
    init,
    n: int,
    N: int,
    seed: int,
    checkpoints: tuple[int, ...],
    law: str | None = None,
    scale_constant: float | None = None,
    exponent: float | None = None,
) -> list[CheckpointSummary]:
    """Pool simulation with rescaled-KS summaries at the checkpoints.

    The limit law and scale default to the classification of the model:
    cubic with (c* n)^(1/3) in the cube-root regime, y^2 with the proved
    constants for the known square-root models.
    """
    if n < 1 or N < 2:
        raise DomainError("need n >= 1 and N >= 2")
    if law is None or scale_constant is None or exponent is None:
        scaling = resolve_scaling(model)
        if scaling is None:
            raise DomainError("no limit law known for this model; pass law/scale_constant/exponent")
        law = law or scaling[0]
        scale_constant = scale_constant if scale_constant is not None else scaling[1]
        exponent = exponent if exponent is not None else scaling[2]
    checkpoints = tuple(sorted(set(checkpoints)))
    if checkpoints and checkpoints[-1] > n:
        raise DomainError("checkpoints must not exceed n")
    pool = new_pool(model, init, N, seed)
    out = []
    cps = set(checkpoints)
    for _ in range(n):
        pool = pool_step(pool)
        if pool.n in cps:
            scale = (scale_constant * pool.n) ** exponent
            resc = pool.values / scale
            out.append(CheckpointSummary(pool.n, scale, ks(resc, law), resc, law))
    return out


def hipster_direct(kind: str, n: int, N: int, seed: int, init: int = 0) -> np.ndarray:
    """Literal integer walk by the pool method.

    kind='symmetric': pick one of two independent copies uniformly and add
    +-1 (fair) on ties.  kind='lazy': add +1 with probability 1/2 on ties.
    """
    if kind not in ("symmetric", "lazy"):
        raise DomainError("kind must be 'symmetric' or 'lazy'")
    vals = np.full(N, int(init), dtype=np.int64)
    for step in range(1, n + 1):
        rng = _gen(seed, _STREAM_WALK, step)
        idx = rng.integers(0, N, 2 * N)
        bits = rng.integers(0, 4, N)
        a = vals[idx[:N]]
        b = vals[idx[N:]]
        chosen = np.where(bits & 1, a, b)
        bump = bits >> 1
        d = 2 * bump - 1 if kind == "symmetric" else bump
        vals = chosen + d * (a == b)
    return vals
