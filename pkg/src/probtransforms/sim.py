"""Samplers for the constructive procedures: Bernoulli thinning, the
M-transform, Poisson processes with independent thinning, and the record
sampler for roots of survival functions.

Every sampler takes an explicit ``numpy.random.Generator``; there is no
global random state. ``RngState`` turns a (seed, stream) pair into a
generator reproducibly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .discrete import (
    Binomial,
    Cox,
    Dirac,
    DiscreteDist,
    ExplicitPmf,
    FiniteMixture,
    GammaMix,
    Geometric,
    NegBinomial,
    Poisson,
    TwoPoint,
)
from .laplace import (
    ContDist,
    Convolution,
    Erlang,
    Exponential,
    Mixture,
    PointMassZero,
    UnsupportedShape,
    survival,
)
from .transforms import PositivityRequired

DEFAULT_MAX_DRAWS = 10**6
BISECTION_TOL = 1e-10


class SamplerExhausted(RuntimeError):
    """The record sampler used up its draw budget before reaching the target record."""


class Mode(str, enum.Enum):
    MAX_OF_UNIFORMS = "max"
    POWER_OF_UNIFORM = "pow"


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not (0 <= v < 2**64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(self.stream,))))


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    return RngState(seed, stream).generator()


@dataclass(frozen=True)
class PointSequence:
    points: Tuple[float, ...]
    window_end: float

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        object.__setattr__(self, "points", pts)
        if self.window_end <= 0:
            raise ValueError("window_end must be positive")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly increasing")
        if pts and (pts[0] <= 0 or pts[-1] > self.window_end):
            raise ValueError("points must lie in (0, window_end]")

    def __len__(self):
        return len(self.points)


# --------------------------------------------------------------------------
# Integer-valued laws


def sample_discrete_n(d: DiscreteDist, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent draws from ``d`` as an int64 array."""
    if isinstance(d, Dirac):
        return np.full(size, d.m, dtype=np.int64)
    if isinstance(d, TwoPoint):
        return np.where(rng.random(size) < d.r, d.n, d.m).astype(np.int64)
    if isinstance(d, Poisson):
        return rng.poisson(d.lam, size).astype(np.int64)
    if isinstance(d, Binomial):
        return rng.binomial(d.n, d.r, size).astype(np.int64)
    if isinstance(d, Geometric):
        # inversion on (0, 1]
        u = 1.0 - rng.random(size)
        return np.floor(np.log(u) / math.log1p(-d.r)).astype(np.int64)
    if isinstance(d, NegBinomial):
        return rng.negative_binomial(d.n, d.r, size).astype(np.int64)
    if isinstance(d, Cox):
        mix = d.mixing
        if isinstance(mix, GammaMix):
            t = rng.gamma(mix.shape, 1.0 / mix.rate, size)
        else:
            locs = np.array([t for t, _ in mix.points])
            probs = np.array([q for _, q in mix.points])
            t = locs[rng.choice(len(locs), size=size, p=probs / probs.sum())]
        return rng.poisson(t).astype(np.int64)
    if isinstance(d, FiniteMixture):
        w = np.asarray(d.weights)
        idx = rng.choice(len(w), size=size, p=w / w.sum())
        out = np.empty(size, dtype=np.int64)
        for i, comp in enumerate(d.components):
            sel = idx == i
            out[sel] = sample_discrete_n(comp, int(sel.sum()), rng)
        return out
    if isinstance(d, ExplicitPmf):
        if d.tail > 0:
            raise UnsupportedShape("cannot sample an explicit pmf with unlocated tail mass")
        cum = np.cumsum(d.coeffs(d.K))
        u = rng.random(size) * cum[-1]
        return np.minimum(np.searchsorted(cum, u, side="right"), d.K).astype(np.int64)
    raise TypeError(f"unsupported distribution {type(d).__name__}")


def sample_discrete(d: DiscreteDist, rng: np.random.Generator) -> int:
    return int(sample_discrete_n(d, 1, rng)[0])


def _group_index(counts: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(counts.size), counts)


def sample_thinned_n(d: DiscreteDist, p: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``zeta ~ d`` then sum ``zeta`` independent Bernoulli(p) marks, ``size`` times."""
    if not (0 < p < 1):
        raise ValueError("p must lie in (0,1)")
    zeta = sample_discrete_n(d, size, rng)
    marks = rng.random(int(zeta.sum())) < p
    return np.bincount(_group_index(zeta), weights=marks, minlength=size).astype(np.int64)


def sample_thinned(d: DiscreteDist, p: float, rng: np.random.Generator) -> int:
    return int(sample_thinned_n(d, p, 1, rng)[0])


def sample_m_transform_n(d: DiscreteDist, size: int, rng: np.random.Generator, mode=Mode.MAX_OF_UNIFORMS) -> np.ndarray:
    """M-transform draws: max of ``zeta`` uniforms, or ``eta ** (1/zeta)``."""
    mode = Mode(mode)
    if d.pmf(0) > 0:
        raise PositivityRequired("the M-transform needs P(zeta = 0) = 0")
    zeta = sample_discrete_n(d, size, rng)
    if mode is Mode.POWER_OF_UNIFORM:
        return rng.random(size) ** (1.0 / zeta)
    u = rng.random(int(zeta.sum()))
    starts = np.concatenate(([0], np.cumsum(zeta)[:-1]))
    return np.maximum.reduceat(u, starts)


def sample_m_transform(d: DiscreteDist, rng: np.random.Generator, mode=Mode.MAX_OF_UNIFORMS) -> float:
    return float(sample_m_transform_n(d, 1, rng, mode)[0])


# --------------------------------------------------------------------------
# Point processes on (0, inf)


def sample_poisson_process(lam: float, window_end: float, rng: np.random.Generator) -> PointSequence:
    """Homogeneous Poisson process on ``(0, window_end]`` from exponential gaps."""
    if lam <= 0 or window_end <= 0:
        raise ValueError("lambda and window_end must be positive")
    mean = lam * window_end
    chunk = int(mean + 5 * math.sqrt(mean) + 16)
    pts = []
    last = 0.0
    while True:
        gaps = rng.exponential(1.0 / lam, chunk)
        pos = last + np.cumsum(gaps)
        inside = pos[pos <= window_end]
        pts.extend(inside.tolist())
        if inside.size < chunk:
            break
        last = float(pos[-1])
    return PointSequence(tuple(pts), window_end)


def thin_process(ps: PointSequence, p: float, rng: np.random.Generator) -> PointSequence:
    """Keep each point independently with probability ``p``."""
    if not (0 < p <= 1):
        raise ValueError("p must lie in (0,1]")
    if p == 1:
        return ps
    keep = rng.random(len(ps.points)) < p
    return PointSequence(tuple(x for x, k in zip(ps.points, keep) if k), ps.window_end)


def first_thinned_point(lam: float, p: float, rng: np.random.Generator) -> Tuple[float, int]:
    """Walk a rate-``lam`` Poisson process until a point survives thinning.

    Returns the survivor's coordinate and its 1-based index in the
    unthinned process.
    """
    pos, index = 0.0, 0
    while True:
        pos += rng.exponential(1.0 / lam)
        index += 1
        if rng.random() < p:
            return pos, index


# --------------------------------------------------------------------------
# Continuous laws and the survival-root samplers


def sample_cont_n(c: ContDist, size: int, rng: np.random.Generator) -> np.ndarray:
    if c.signed:
        raise UnsupportedShape("signed mixtures cannot be sampled")
    if isinstance(c, Exponential):
        return rng.exponential(1.0 / c.lam, size)
    if isinstance(c, Erlang):
        return rng.gamma(c.k, 1.0 / c.lam, size)
    if isinstance(c, PointMassZero):
        return np.zeros(size)
    if isinstance(c, Convolution):
        out = np.zeros(size)
        for child in c.children:
            out += sample_cont_n(child, size, rng)
        return out
    if isinstance(c, Mixture):
        if c.tail > 0:
            raise UnsupportedShape("cannot sample a truncated mixture")
        w = np.asarray(c.weights)
        idx = rng.choice(len(w), size=size, p=w / w.sum())
        out = np.empty(size)
        for i, child in enumerate(c.children):
            sel = idx == i
            out[sel] = sample_cont_n(child, int(sel.sum()), rng)
        return out
    raise TypeError(f"unsupported law {type(c).__name__}")


def sample_survival_root(c: ContDist, n: int, rng: np.random.Generator, max_draws: int = DEFAULT_MAX_DRAWS) -> float:
    """Value of the ``alpha``-th record of an i.i.d. stream from ``c``.

    ``alpha`` is geometric on {1, 2, ...} with success probability ``1/n``.
    A draw equal to the current record counts as a new record. The result
    has survival function ``survival(c, .) ** (1/n)``. Draws are generated
    in blocks but consumed in stream order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if c.signed:
        raise UnsupportedShape("signed mixtures cannot be sampled")
    alpha = int(rng.geometric(1.0 / n))
    record = None
    count = 0
    used = 0
    block = 64
    while used < max_draws:
        size = min(block, max_draws - used)
        x = sample_cont_n(c, size, rng)
        used += size
        i = 0
        if record is None:
            record, count, i = x[0], 1, 1
            if count == alpha:
                return float(record)
        while i < size:
            hits = np.flatnonzero(x[i:] >= record)
            if hits.size == 0:
                break
            j = i + int(hits[0])
            record = x[j]
            count += 1
            if count == alpha:
                return float(record)
            i = j + 1
        block = min(2 * block, 1 << 16)
    raise SamplerExhausted(f"record {alpha} not reached within {max_draws} draws")


def survival_root_oracle_n(c: ContDist, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-c.d.f. draws with survival ``survival(c, .) ** (1/n)``.

    Solves ``survival(c, x) = u ** n`` by bisection to absolute tolerance
    ``BISECTION_TOL`` in ``x``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    target = (1.0 - rng.random(size)) ** n
    lo = np.zeros(size)
    hi = np.ones(size)
    while True:
        above = np.asarray(survival(c, hi)) > target
        if not above.any():
            break
        hi = np.where(above, 2 * hi, hi)
    while np.max(hi - lo) > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        above = np.asarray(survival(c, mid)) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def survival_root_oracle(c: ContDist, n: int, rng: np.random.Generator) -> float:
    return float(survival_root_oracle_n(c, n, 1, rng)[0])
