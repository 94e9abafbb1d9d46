"""Goodness-of-fit statistics with fixed large-sample 95% critical values."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .discrete import DiscreteDist

KS_C95 = 1.36
TV_THRESHOLD = 0.01


@dataclass
class GofReport:
    test: str
    statistic: float
    threshold: float
    n: Union[int, tuple]

    @property
    def passed(self) -> bool:
        return self.statistic <= self.threshold

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def ks_one_sample(samples, cdf: Callable) -> GofReport:
    """Kolmogorov-Smirnov distance between the empirical c.d.f. and ``cdf``.

    ``cdf`` must accept a numpy array.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_one_sample needs at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return GofReport("ks1", float(max(d_plus, d_minus)), KS_C95 / math.sqrt(n), n)


def ks_two_sample(a, b) -> GofReport:
    """Sup distance between two empirical c.d.f.s."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    na, nb = a.size, b.size
    if na == 0 or nb == 0:
        raise ValueError("ks_two_sample needs non-empty samples")
    pts = np.concatenate((a, b))
    fa = np.searchsorted(a, pts, side="right") / na
    fb = np.searchsorted(b, pts, side="right") / nb
    stat = float(np.max(np.abs(fa - fb)))
    return GofReport("ks2", stat, KS_C95 * math.sqrt((na + nb) / (na * nb)), (na, nb))


def histogram(samples) -> np.ndarray:
    return np.bincount(np.asarray(samples, dtype=np.int64))


def tv_discrete(
    emp_counts: Union[Sequence[int], Mapping[int, int]],
    exact: DiscreteDist,
    K: int,
    threshold: float = TV_THRESHOLD,
) -> GofReport:
    """Total-variation distance between a histogram and ``exact`` on ``{0..K}`` plus tail."""
    if isinstance(emp_counts, Mapping):
        size = max(max(emp_counts) + 1, K + 1)
        counts = np.zeros(size)
        for k, c in emp_counts.items():
            counts[k] = c
    else:
        counts = np.asarray(emp_counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("histogram must contain at least one observation")
    emp = np.zeros(K + 1)
    m = min(K + 1, counts.size)
    emp[:m] = counts[:m] / total
    tail_emp = counts[K + 1:].sum() / total
    ref = exact.coeffs(K)
    tail_exact = max(0.0, 1.0 - ref.sum())
    stat = 0.5 * np.abs(emp - ref).sum() + 0.5 * abs(tail_emp - tail_exact)
    return GofReport("tv", float(stat), threshold, int(total))
