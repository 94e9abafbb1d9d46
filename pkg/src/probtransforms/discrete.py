"""Nonnegative integer-valued distributions and their generating functions.

Every distribution is an immutable value. Closed forms are used wherever the
family has one; explicit pmfs carry an honest ``tail`` mass instead of being
renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

TAU_SUM = 1e-12
DEFAULT_TRUNCATION = 200

Number = Union[float, Fraction]


class InvalidDistribution(ValueError):
    """A distribution parameter violates its stated invariant."""


def _check_prob_open(name: str, r: float) -> None:
    if not (0.0 < r < 1.0):
        raise InvalidDistribution(f"{name} must lie in the open interval (0,1), got {r!r}")


def _check_nonneg_int(name: str, m) -> None:
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise InvalidDistribution(f"{name} must be a nonnegative integer, got {m!r}")


def _check_positive(name: str, x: float) -> None:
    if not (x > 0.0 and math.isfinite(x)):
        raise InvalidDistribution(f"{name} must be a positive finite real, got {x!r}")


def _poisson_coeffs(lam: float, K: int) -> np.ndarray:
    return stats.poisson.pmf(np.arange(K + 1), lam)


def _negbin_coeffs(n: float, r: float, K: int) -> np.ndarray:
    return stats.nbinom.pmf(np.arange(K + 1), n, r)


# --------------------------------------------------------------------------
# Mixing measures for Cox distributions


@dataclass(frozen=True)
class Atoms:
    """Finitely supported mixing measure: ``points`` is a tuple of (t_i, q_i)."""

    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(t), float(q)) for t, q in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise InvalidDistribution("atoms: at least one atom is required")
        ts = [t for t, _ in pts]
        if any(t < 0 or not math.isfinite(t) for t in ts):
            raise InvalidDistribution("atoms: every location t_i must be >= 0")
        if len(set(ts)) != len(ts):
            raise InvalidDistribution("atoms: locations t_i must be distinct")
        if any(q < 0 for _, q in pts):
            raise InvalidDistribution("atoms: weights q_i must be nonnegative")
        if abs(sum(q for _, q in pts) - 1.0) > TAU_SUM:
            raise InvalidDistribution("atoms: weights q_i must sum to 1")

    def scaled(self, c: float) -> "Atoms":
        return Atoms(tuple((t * c, q) for t, q in self.points))

    def mean(self) -> float:
        return sum(t * q for t, q in self.points)


@dataclass(frozen=True)
class GammaMix:
    """Gamma mixing measure with density rate^shape t^(shape-1) e^(-rate t) / Gamma(shape)."""

    shape: float
    rate: float

    def __post_init__(self):
        _check_positive("gamma shape", self.shape)
        _check_positive("gamma rate", self.rate)

    def scaled(self, c: float) -> "GammaMix":
        # law of c*T for T ~ Gamma(shape, rate)
        return GammaMix(self.shape, self.rate / c)

    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def negbin_r(self) -> float:
        """Success parameter r of the negative binomial this mixing law induces."""
        return self.rate / (1.0 + self.rate)


MixingMeasure = Union[Atoms, GammaMix]


# --------------------------------------------------------------------------
# Distributions


class DiscreteDist:
    """Base class of all nonnegative integer-valued distributions."""

    #: True when the support is a finite set.
    finite_support = False

    def pmf(self, k: int) -> float:
        if k < 0:
            return 0.0
        return float(self.coeffs(k)[k])

    def coeffs(self, K: int) -> np.ndarray:
        """Return ``(a_0, ..., a_K)`` as a float array."""
        raise NotImplementedError

    def pgf(self, x: float) -> float:
        """Generating function on [0, 1]."""
        if not (0.0 <= x <= 1.0):
            raise ValueError(f"pgf argument must lie in [0,1], got {x!r}")
        value = self.pgf_extended(x)
        assert value is not None
        return value

    def pgf_extended(self, x: float) -> Optional[float]:
        """Generating function at any real ``x``; ``None`` where the series diverges."""
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Dirac(DiscreteDist):
    m: int
    finite_support = True

    def __post_init__(self):
        _check_nonneg_int("dirac m", self.m)

    def coeffs(self, K):
        a = np.zeros(K + 1)
        if self.m <= K:
            a[self.m] = 1.0
        return a

    def pgf_extended(self, x):
        return float(x) ** self.m

    def mean(self):
        return float(self.m)


@dataclass(frozen=True)
class TwoPoint(DiscreteDist):
    """Mass ``1-r`` at ``m`` and ``r`` at ``n``."""

    m: int
    n: int
    r: float
    finite_support = True

    def __post_init__(self):
        _check_nonneg_int("twopoint m", self.m)
        _check_nonneg_int("twopoint n", self.n)
        _check_prob_open("twopoint r", self.r)

    def coeffs(self, K):
        a = np.zeros(K + 1)
        if self.m <= K:
            a[self.m] += 1.0 - self.r
        if self.n <= K:
            a[self.n] += self.r
        return a

    def pgf_extended(self, x):
        return (1.0 - self.r) * float(x) ** self.m + self.r * float(x) ** self.n

    def mean(self):
        return (1.0 - self.r) * self.m + self.r * self.n


@dataclass(frozen=True)
class Poisson(DiscreteDist):
    lam: float

    def __post_init__(self):
        _check_positive("poisson lambda", self.lam)

    def coeffs(self, K):
        return _poisson_coeffs(self.lam, K)

    def pgf_extended(self, x):
        return math.exp(self.lam * (x - 1.0))

    def mean(self):
        return self.lam


@dataclass(frozen=True)
class Binomial(DiscreteDist):
    n: int
    r: float
    finite_support = True

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InvalidDistribution(f"binomial n must be a positive integer, got {self.n!r}")
        _check_prob_open("binomial r", self.r)

    def coeffs(self, K):
        return stats.binom.pmf(np.arange(K + 1), self.n, self.r)

    def pgf_extended(self, x):
        return (1.0 - self.r + self.r * x) ** self.n

    def mean(self):
        return self.n * self.r


@dataclass(frozen=True)
class Geometric(DiscreteDist):
    """pmf ``(1-r)^k r`` for k >= 0."""

    r: float

    def __post_init__(self):
        _check_prob_open("geometric r", self.r)

    def coeffs(self, K):
        k = np.arange(K + 1)
        return self.r * (1.0 - self.r) ** k

    def pgf_extended(self, x):
        if abs(x * (1.0 - self.r)) >= 1.0:
            return None
        return self.r / (1.0 - x * (1.0 - self.r))

    def mean(self):
        return (1.0 - self.r) / self.r


@dataclass(frozen=True)
class NegBinomial(DiscreteDist):
    """Negative binomial with real ``n > 0``; the ``n``-th power of a geometric pgf."""

    n: float
    r: float

    def __post_init__(self):
        _check_positive("negbinomial n", self.n)
        _check_prob_open("negbinomial r", self.r)

    def coeffs(self, K):
        return _negbin_coeffs(self.n, self.r, K)

    def pgf_extended(self, x):
        if abs(x * (1.0 - self.r)) >= 1.0:
            return None
        return (self.r / (1.0 - x * (1.0 - self.r))) ** self.n

    def mean(self):
        return self.n * (1.0 - self.r) / self.r


@dataclass(frozen=True)
class Cox(DiscreteDist):
    """Mixed Poisson law with intensity drawn from ``mixing``."""

    mixing: MixingMeasure

    def __post_init__(self):
        if not isinstance(self.mixing, (Atoms, GammaMix)):
            raise InvalidDistribution("cox mixing must be Atoms or GammaMix")

    @property
    def finite_support(self):
        return isinstance(self.mixing, Atoms) and all(t == 0 for t, _ in self.mixing.points)

    def coeffs(self, K):
        mix = self.mixing
        if isinstance(mix, GammaMix):
            return _negbin_coeffs(mix.shape, mix.negbin_r, K)
        a = np.zeros(K + 1)
        for t, q in mix.points:
            a += q * _poisson_coeffs(t, K)
        return a

    def pgf_extended(self, x):
        mix = self.mixing
        if isinstance(mix, GammaMix):
            # series radius of convergence is 1 + rate
            if abs(x) >= 1.0 + mix.rate:
                return None
            return (mix.rate / (mix.rate + 1.0 - x)) ** mix.shape
        return sum(q * math.exp(t * (x - 1.0)) for t, q in mix.points)

    def mean(self):
        return self.mixing.mean()


@dataclass(frozen=True)
class FiniteMixture(DiscreteDist):
    weights: Tuple[float, ...]
    components: Tuple[DiscreteDist, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        comps = tuple(self.components)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)
        if len(w) != len(comps) or not w:
            raise InvalidDistribution("mixture: weights and components must be non-empty and of equal length")
        if any(x < 0 for x in w):
            raise InvalidDistribution("mixture: weights must be nonnegative")
        if abs(sum(w) - 1.0) > TAU_SUM:
            raise InvalidDistribution("mixture: weights must sum to 1")
        if not all(isinstance(c, DiscreteDist) for c in comps):
            raise InvalidDistribution("mixture: components must be discrete distributions")

    @property
    def finite_support(self):
        return all(c.finite_support for c in self.components)

    def coeffs(self, K):
        a = np.zeros(K + 1)
        for w, c in zip(self.weights, self.components):
            a += w * c.coeffs(K)
        return a

    def pgf_extended(self, x):
        total = 0.0
        for w, c in zip(self.weights, self.components):
            v = c.pgf_extended(x)
            if v is None:
                return None
            total += w * v
        return total

    def mean(self):
        return sum(w * c.mean() for w, c in zip(self.weights, self.components))


@dataclass(frozen=True)
class ExplicitPmf(DiscreteDist):
    """Explicit coefficients ``a_0..a_K`` plus unlocated mass ``tail``.

    Coefficients may be floats or exact ``Fraction`` values; thinning and
    thickening produce exact coefficients. ``tail`` is mass not covered by
    ``coeffs`` and is never silently renormalized away.
    """

    masses: Tuple[Number, ...]
    tail: Number = 0.0

    def __post_init__(self):
        a = tuple(x if isinstance(x, Rational) and not isinstance(x, int) else float(x) for x in self.masses)
        object.__setattr__(self, "masses", a)
        if not isinstance(self.tail, Fraction):
            object.__setattr__(self, "tail", float(self.tail))
        if not a:
            raise InvalidDistribution("pmf: coeffs must be non-empty")
        if any(x < 0 for x in a):
            raise InvalidDistribution("pmf: every coefficient a_k must be >= 0")
        if self.tail < 0:
            raise InvalidDistribution("pmf: tail must be >= 0")
        if abs(float(sum(a) + self.tail) - 1.0) > TAU_SUM:
            raise InvalidDistribution("pmf: coefficients plus tail must sum to 1")

    @property
    def K(self) -> int:
        return len(self.masses) - 1

    @property
    def finite_support(self):
        return self.tail == 0

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.masses)

    @cached_property
    def _float_coeffs(self) -> np.ndarray:
        return np.array([float(x) for x in self.masses])

    def coeffs(self, K):
        a = np.zeros(K + 1)
        n = min(K, self.K) + 1
        a[:n] = self._float_coeffs[:n]
        return a

    def pgf_extended(self, x):
        if self.tail > 0:
            if abs(x) > 1.0:
                return None
            # unlocated mass is counted exactly only where x^k == 1
            extra = float(self.tail) if x == 1.0 else 0.0
            return float(np.polynomial.polynomial.polyval(x, self._float_coeffs)) + extra
        return float(np.polynomial.polynomial.polyval(x, self._float_coeffs))

    def mean(self):
        if self.tail > 0:
            return math.inf
        return float(np.dot(np.arange(self.K + 1), self._float_coeffs))


# --------------------------------------------------------------------------
# Functional API


def pmf(d: DiscreteDist, k: int) -> float:
    return d.pmf(k)


def pgf_eval(d: DiscreteDist, x: float) -> float:
    return d.pgf(x)


def pgf_extended_eval(d: DiscreteDist, x: float) -> Optional[float]:
    return d.pgf_extended(x)


def pgf_coeffs(d: DiscreteDist, K: int) -> np.ndarray:
    if K < 0:
        raise ValueError("K must be >= 0")
    return d.coeffs(K)


def mean(d: DiscreteDist) -> float:
    return d.mean()


def pgf_series(d: DiscreteDist, x: float, K: int = DEFAULT_TRUNCATION) -> Tuple[float, float]:
    """Truncated power series at ``x`` in [-1, 1] and its error bound.

    The bound is the mass beyond index ``K``, which dominates the omitted
    terms since ``|x^k| <= 1``.
    """
    if abs(x) > 1.0:
        raise ValueError("pgf_series needs |x| <= 1")
    a = d.coeffs(K)
    value = float(np.polynomial.polynomial.polyval(x, a))
    return value, max(0.0, 1.0 - float(a.sum()))


def exact_coeffs(d: DiscreteDist) -> Optional[list]:
    """Exact rational coefficients for finitely supported laws, else ``None``.

    Float parameters are converted to the rationals they represent exactly.
    """
    if not d.finite_support:
        return None
    if isinstance(d, Dirac):
        a = [Fraction(0)] * (d.m + 1)
        a[d.m] = Fraction(1)
        return a
    if isinstance(d, TwoPoint):
        r = Fraction(d.r)
        a = [Fraction(0)] * (max(d.m, d.n) + 1)
        a[d.m] += 1 - r
        a[d.n] += r
        return a
    if isinstance(d, Binomial):
        r = Fraction(d.r)
        return [math.comb(d.n, k) * r**k * (1 - r) ** (d.n - k) for k in range(d.n + 1)]
    if isinstance(d, Cox):
        return [Fraction(1)]
    if isinstance(d, ExplicitPmf):
        return [Fraction(x) for x in d.masses]
    if isinstance(d, FiniteMixture):
        parts = [exact_coeffs(c) for c in d.components]
        out = [Fraction(0)] * max(len(p) for p in parts)
        for w, part in zip(d.weights, parts):
            fw = Fraction(w)
            for k, v in enumerate(part):
                out[k] += fw * v
        return out
    return None
