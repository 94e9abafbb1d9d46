"""Laplace-transform algebra for nonnegative continuous laws.

Laws are small expression trees: exponentials, Erlangs, the point mass at
zero, convolutions and (possibly signed) finite mixtures. Transforms compose
exactly: convolution multiplies, mixture averages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

from .discrete import Dirac, DiscreteDist, FiniteMixture, Geometric, InvalidDistribution, NegBinomial

TAU_WEIGHTS = 1e-12


class UnsupportedShape(ValueError):
    """Operation has no closed form for this expression tree."""


class ContDist:
    """Base class of nonnegative continuous (or atom-at-zero) laws."""

    @property
    def signed(self) -> bool:
        return False


@dataclass(frozen=True)
class Exponential(ContDist):
    lam: float

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidDistribution(f"exponential lambda must be positive, got {self.lam!r}")


@dataclass(frozen=True)
class Erlang(ContDist):
    """``k``-fold convolution of ``Exponential(lam)``."""

    k: int
    lam: float

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise InvalidDistribution(f"erlang k must be a positive integer, got {self.k!r}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidDistribution(f"erlang lambda must be positive, got {self.lam!r}")


@dataclass(frozen=True)
class PointMassZero(ContDist):
    pass


@dataclass(frozen=True)
class Convolution(ContDist):
    children: Tuple[ContDist, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise InvalidDistribution("convolution: children must be non-empty")

    @property
    def signed(self):
        return any(c.signed for c in self.children)


@dataclass(frozen=True)
class Mixture(ContDist):
    """Finite mixture ``sum w_i children_i``.

    Unsigned mixtures may be truncated series: ``tail`` is the omitted mass
    and ``sum(weights) + tail == 1``. Signed mixtures are transform identities
    only (weights sum to 1, some negative) and cannot be sampled.
    """

    weights: Tuple[float, ...]
    children: Tuple[ContDist, ...]
    is_signed: bool = False
    tail: float = 0.0

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "children", tuple(self.children))
        if not w or len(w) != len(self.children):
            raise InvalidDistribution("mixture: weights and children must be non-empty and of equal length")
        if self.tail < 0:
            raise InvalidDistribution("mixture: tail must be >= 0")
        if self.is_signed:
            if self.tail != 0:
                raise InvalidDistribution("mixture: a signed mixture cannot carry a tail")
        elif any(x < 0 for x in w):
            raise InvalidDistribution("mixture: negative weights require signed = true")
        if abs(sum(w) + self.tail - 1.0) > TAU_WEIGHTS:
            raise InvalidDistribution("mixture: weights plus tail must sum to 1")

    @property
    def signed(self):
        return self.is_signed or any(c.signed for c in self.children)


# --------------------------------------------------------------------------


def laplace_eval(c: ContDist, s):
    """``E exp(-s X)``; ``s`` may be a scalar or an array."""
    s = np.asarray(s, dtype=float)
    if isinstance(c, Exponential):
        out = c.lam / (c.lam + s)
    elif isinstance(c, Erlang):
        out = (c.lam / (c.lam + s)) ** c.k
    elif isinstance(c, PointMassZero):
        out = np.ones_like(s)
    elif isinstance(c, Convolution):
        out = np.ones_like(s)
        for child in c.children:
            out = out * laplace_eval(child, s)
    elif isinstance(c, Mixture):
        out = np.zeros_like(s)
        for w, child in zip(c.weights, c.children):
            out = out + w * laplace_eval(child, s)
    else:
        raise TypeError(f"unsupported law {type(c).__name__}")
    return float(out) if out.ndim == 0 else out


def _flatten_conv(c: Convolution) -> list:
    out = []
    for child in c.children:
        if isinstance(child, Convolution):
            out.extend(_flatten_conv(child))
        elif not isinstance(child, PointMassZero):
            out.append(child)
    return out


def _as_erlang(c: ContDist):
    if isinstance(c, Exponential):
        return 1, c.lam
    if isinstance(c, Erlang):
        return c.k, c.lam
    return None


def survival(c: ContDist, x):
    """``P(X > x)`` for ``x >= 0``; scalar or array."""
    x = np.asarray(x, dtype=float)
    if isinstance(c, Exponential):
        out = np.exp(-c.lam * x)
    elif isinstance(c, Erlang):
        out = special.gammaincc(c.k, c.lam * x)
    elif isinstance(c, PointMassZero):
        out = np.zeros_like(x)
    elif isinstance(c, Mixture):
        if c.is_signed:
            raise UnsupportedShape("signed mixtures have no survival function")
        if c.tail > 0:
            raise UnsupportedShape("truncated mixture: survival undetermined on the tail mass")
        out = np.zeros_like(x)
        for w, child in zip(c.weights, c.children):
            out = out + w * survival(child, x)
    elif isinstance(c, Convolution):
        parts = _flatten_conv(c)
        if not parts:
            out = np.zeros_like(x)
        elif len(parts) == 1:
            out = np.asarray(survival(parts[0], x))
        else:
            shapes = [_as_erlang(p) for p in parts]
            if any(sh is None for sh in shapes):
                raise UnsupportedShape("convolution survival needs exponential/erlang children")
            rates = {lam for _, lam in shapes}
            if len(rates) == 1:
                out = np.asarray(survival(Erlang(sum(k for k, _ in shapes), rates.pop()), x))
            elif len(parts) == 2 and all(k == 1 for k, _ in shapes):
                l1, l2 = shapes[0][1], shapes[1][1]
                out = (l2 * np.exp(-l1 * x) - l1 * np.exp(-l2 * x)) / (l2 - l1)
            else:
                raise UnsupportedShape("only pairs of exponentials or equal-rate convolutions are supported")
    else:
        raise TypeError(f"unsupported law {type(c).__name__}")
    return float(out) if np.ndim(out) == 0 else out


def cdf(c: ContDist, x):
    out = 1.0 - np.asarray(survival(c, x))
    return float(out) if out.ndim == 0 else out


def survival_as_cdf(c: ContDist, x):
    """``1 - L(x)``: the c.d.f. of the law whose survival function is ``L``."""
    out = 1.0 - np.asarray(laplace_eval(c, x))
    return float(out) if out.ndim == 0 else out


def failure_measure(c: ContDist, x: float) -> float:
    """``mu([0, x))`` with ``exp(-mu([0,x))) = P(X > x)``; infinite once survival hits 0."""
    if x <= 0:
        raise ValueError("failure measure needs x > 0")
    if c.signed:
        raise UnsupportedShape("signed mixtures have no failure measure")
    sv = survival(c, x)
    return math.inf if sv <= 0 else -math.log(sv)


def discretize(c: ContDist, t: float) -> DiscreteDist:
    """Integer law with pgf ``L(t(1 - x))``: Poisson counts mixed by ``t * X``."""
    if t <= 0:
        raise ValueError("t must be positive")
    if c.signed:
        raise UnsupportedShape("cannot discretize a signed mixture")
    if isinstance(c, Exponential):
        return Geometric(c.lam / (c.lam + t))
    if isinstance(c, Erlang):
        r = c.lam / (c.lam + t)
        return Geometric(r) if c.k == 1 else NegBinomial(float(c.k), r)
    if isinstance(c, PointMassZero):
        return Dirac(0)
    if isinstance(c, Mixture) and c.tail == 0:
        return FiniteMixture(c.weights, tuple(discretize(ch, t) for ch in c.children))
    raise UnsupportedShape(f"discretize does not support {type(c).__name__}")


def pgf_to_laplace(d: DiscreteDist, s: float) -> float:
    """Laplace transform of an integer law: ``G(exp(-s))``."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return d.pgf(math.exp(-s))


def discretization_cdf_gap(c: ContDist, t: float, x_max: float = 10.0) -> float:
    """Sup over ``[0, x_max]`` of ``|P(kappa_t / t <= x) - P(X <= x)|``.

    ``kappa_t = discretize(c, t)``. The discrete c.d.f. is a step function and
    the continuous one is monotone, so the sup is attained at a jump point,
    from the left or the right, or at ``x_max``.
    """
    kappa = discretize(c, t)
    jmax = int(math.floor(t * x_max))
    disc_cdf = np.cumsum(kappa.coeffs(jmax))
    jumps = np.arange(jmax + 1) / t
    cont = cdf(c, jumps)
    right = np.abs(disc_cdf - cont)
    left_vals = np.concatenate(([0.0], disc_cdf[:-1]))
    left = np.abs(left_vals - cont)
    end = abs(disc_cdf[-1] - cdf(c, x_max))
    return float(max(right.max(), left.max(), end))
