"""Thinning, thickening and related transforms of integer-valued laws.

Thinning with retention ``p`` maps the pgf ``G(x)`` to ``G(1-p+px)``;
thickening is the formal inverse ``G(1-1/p+x/p)``, which is a pgf only for
some laws. For finitely supported laws the decision is made on exact rational
coefficients, because the inverse map amplifies rounding error like
``(2/p - 1)^k``.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .discrete import (
    Atoms,
    Binomial,
    Cox,
    DiscreteDist,
    Dirac,
    ExplicitPmf,
    FiniteMixture,
    GammaMix,
    Geometric,
    MixingMeasure,
    NegBinomial,
    Poisson,
    TwoPoint,
    exact_coeffs,
)

TAU_NEG = 1e-12
TAU_MASS = 1e-9
TAU_CM = 1e-6


class Verdict(str, enum.Enum):
    THICKABLE = "Thickable"
    NOT_THICKABLE = "NotThickable"
    INCONCLUSIVE = "Inconclusive"


class Method(str, enum.Enum):
    FAMILY_RULE = "FamilyRule"
    COEFFICIENT_CHECK = "CoefficientCheck"


@dataclass(frozen=True)
class ThickabilityCertificate:
    verdict: Verdict
    p: float
    method: Method
    witness_index: Optional[int] = None
    witness_value: Optional[float] = None
    checked_mass: Optional[float] = None
    reason: str = ""

    @property
    def thickable(self) -> bool:
        return self.verdict is Verdict.THICKABLE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "p": self.p,
            "method": self.method.value,
            "witness_index": self.witness_index,
            "witness_value": self.witness_value,
            "checked_mass": self.checked_mass,
            "reason": self.reason,
        }


class ThickeningError(ValueError):
    def __init__(self, certificate: ThickabilityCertificate):
        self.certificate = certificate
        super().__init__(f"{certificate.verdict.value}: {certificate.reason}")


class NotThickable(ThickeningError):
    """No random variable has the thickened generating function."""


class ThickeningInconclusive(ThickeningError):
    """The available representation cannot decide thickability."""


class PositivityRequired(ValueError):
    """The M-transform needs a law without mass at zero."""


def _check_p(p: float) -> None:
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie in (0,1), got {p!r}")


def compose_affine(a: Sequence[Fraction], c: Fraction) -> List[Fraction]:
    """Coefficients of ``G(1 - c + c x)`` given those of ``G``, exactly.

    ``b_m = sum_{k>=m} a_k C(k,m) c^m (1-c)^(k-m)``.
    """
    K = len(a) - 1
    one_minus = 1 - c
    cpow = [Fraction(1)]
    dpow = [Fraction(1)]
    for _ in range(K):
        cpow.append(cpow[-1] * c)
        dpow.append(dpow[-1] * one_minus)
    b = []
    for m in range(K + 1):
        acc = Fraction(0)
        for k in range(m, K + 1):
            if a[k]:
                acc += a[k] * math.comb(k, m) * dpow[k - m]
        b.append(acc * cpow[m])
    return b


def _is_cox_class(d: DiscreteDist) -> bool:
    if isinstance(d, (Poisson, Geometric, NegBinomial, Cox)):
        return True
    if isinstance(d, Dirac):
        return d.m == 0
    if isinstance(d, FiniteMixture):
        return all(_is_cox_class(c) for c in d.components)
    return False


# --------------------------------------------------------------------------
# Thinning


def thin(d: DiscreteDist, p: float) -> DiscreteDist:
    """Law of the number of survivors when each of ``d`` points survives w.p. ``p``."""
    _check_p(p)
    if isinstance(d, Dirac):
        return Binomial(d.m, p) if d.m >= 1 else Dirac(0)
    if isinstance(d, TwoPoint):
        return FiniteMixture((1.0 - d.r, d.r), (thin(Dirac(d.m), p), thin(Dirac(d.n), p)))
    if isinstance(d, Poisson):
        return Poisson(p * d.lam)
    if isinstance(d, Binomial):
        return Binomial(d.n, p * d.r)
    if isinstance(d, Geometric):
        return Geometric(d.r / (d.r + p * (1.0 - d.r)))
    if isinstance(d, NegBinomial):
        return NegBinomial(d.n, d.r / (d.r + p * (1.0 - d.r)))
    if isinstance(d, Cox):
        return Cox(d.mixing.scaled(p))
    if isinstance(d, FiniteMixture):
        return FiniteMixture(d.weights, tuple(thin(c, p) for c in d.components))
    if isinstance(d, ExplicitPmf):
        b = compose_affine([Fraction(x) for x in d.masses], Fraction(p))
        return ExplicitPmf(tuple(b), d.tail)
    raise TypeError(f"unsupported distribution {type(d).__name__}")


# --------------------------------------------------------------------------
# Thickening


def _coefficient_certificate(a: Sequence[Fraction], p: float, tau_neg: float, tau_mass: float):
    b = compose_affine(a, 1 / Fraction(p))
    for m, v in enumerate(b):
        if float(v) < -tau_neg:
            cert = ThickabilityCertificate(
                Verdict.NOT_THICKABLE, p, Method.COEFFICIENT_CHECK, m, float(v),
                reason=f"coefficient b_{m} of G(1-1/p+x/p) is negative",
            )
            return cert, b
    mass = float(sum(b))
    if abs(mass - 1.0) > tau_mass:
        cert = ThickabilityCertificate(
            Verdict.INCONCLUSIVE, p, Method.COEFFICIENT_CHECK, checked_mass=mass,
            reason="candidate coefficients do not carry unit mass",
        )
        return cert, b
    cert = ThickabilityCertificate(
        Verdict.THICKABLE, p, Method.COEFFICIENT_CHECK, checked_mass=mass,
        reason="all coefficients of G(1-1/p+x/p) are nonnegative",
    )
    return cert, b


def _most_negative(a: Sequence[Fraction], p: float):
    b = compose_affine(a, 1 / Fraction(p))
    m = min(range(len(b)), key=lambda i: b[i])
    return m, float(b[m])


def is_p_thickable(
    d: DiscreteDist,
    p: float,
    tau_neg: float = TAU_NEG,
    tau_mass: float = TAU_MASS,
) -> ThickabilityCertificate:
    """Decide whether ``G(1-1/p+x/p)`` is again a generating function."""
    _check_p(p)
    family = Method.FAMILY_RULE
    if _is_cox_class(d):
        return ThickabilityCertificate(Verdict.THICKABLE, p, family, reason="mixed Poisson law")
    if isinstance(d, Dirac):
        m, v = _most_negative(exact_coeffs(d), p)
        return ThickabilityCertificate(
            Verdict.NOT_THICKABLE, p, family, m, v, reason="point mass at a positive integer"
        )
    if isinstance(d, Binomial):
        if d.r <= p:
            return ThickabilityCertificate(Verdict.THICKABLE, p, family, reason="binomial with r <= p")
        m, v = _most_negative(exact_coeffs(d), p)
        return ThickabilityCertificate(
            Verdict.NOT_THICKABLE, p, family, m, v, reason="binomial with r > p"
        )
    if isinstance(d, FiniteMixture) and all(is_p_thickable(c, p).thickable for c in d.components):
        return ThickabilityCertificate(
            Verdict.THICKABLE, p, family, reason="every mixture component is p-thickable"
        )
    a = exact_coeffs(d)
    if a is None:
        return ThickabilityCertificate(
            Verdict.INCONCLUSIVE, p, Method.COEFFICIENT_CHECK,
            reason="infinite or unlocated support; no exact criterion available",
        )
    cert, _ = _coefficient_certificate(a, p, tau_neg, tau_mass)
    return cert


def thicken(d: DiscreteDist, p: float) -> DiscreteDist:
    """The law whose ``p``-thinning is ``d``.

    Raises ``NotThickable`` or ``ThickeningInconclusive`` carrying the
    certificate when no such law is established.
    """
    cert = is_p_thickable(d, p)
    if cert.verdict is Verdict.NOT_THICKABLE:
        raise NotThickable(cert)
    if cert.verdict is Verdict.INCONCLUSIVE:
        raise ThickeningInconclusive(cert)

    if isinstance(d, Dirac):
        return d
    if isinstance(d, Poisson):
        return Poisson(d.lam / p)
    if isinstance(d, Binomial):
        r = d.r / p
        # r == p thickens to the constant n
        return Dirac(d.n) if r >= 1.0 else Binomial(d.n, r)
    if isinstance(d, Geometric):
        return Geometric(d.r / (d.r + (1.0 - d.r) / p))
    if isinstance(d, NegBinomial):
        return NegBinomial(d.n, d.r / (d.r + (1.0 - d.r) / p))
    if isinstance(d, Cox):
        return Cox(d.mixing.scaled(1.0 / p))
    if isinstance(d, FiniteMixture) and cert.method is Method.FAMILY_RULE:
        return FiniteMixture(d.weights, tuple(thicken(c, p) for c in d.components))

    b = compose_affine(exact_coeffs(d), 1 / Fraction(p))
    # entries in [-tau_neg, 0) passed the check; they are rounding-level
    b = [max(v, Fraction(0)) for v in b]
    return ExplicitPmf(tuple(b), 0.0)


# --------------------------------------------------------------------------
# Cox construction


def cox(q: MixingMeasure) -> DiscreteDist:
    """Mixed Poisson law with mixing measure ``q``, in canonical family form."""
    if isinstance(q, Atoms) and len(q.points) == 1:
        t = q.points[0][0]
        return Dirac(0) if t == 0.0 else Poisson(t)
    if isinstance(q, GammaMix):
        r = q.negbin_r
        return Geometric(r) if q.shape == 1.0 else NegBinomial(q.shape, r)
    return Cox(q)


# --------------------------------------------------------------------------
# Complete monotonicity falsification check


@dataclass
class CMViolation:
    s: float
    order: int
    value: float


@dataclass
class CMReport:
    grid: List[float]
    order: int
    violations: List[CMViolation] = field(default_factory=list)
    undefined: List[float] = field(default_factory=list)
    estimates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.undefined

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "order": self.order,
            "passed": self.passed,
            "violations": [vars(v) for v in self.violations],
            "undefined": self.undefined,
        }


def _fd_step(s: float, order: int) -> float:
    eps = sys.float_info.epsilon
    return s * max(1e-3, eps ** (1.0 / (order + 2)))


def complete_monotone_check(
    d: DiscreteDist, grid: Sequence[float], order: int, tau_cm: float = TAU_CM
) -> CMReport:
    """Look for sign violations of ``(-1)^l L^(l)(s)`` where ``L(s) = G(1-s)``.

    Derivatives are central finite differences of the extended pgf. A sign
    violation disproves complete monotonicity; absence of one proves nothing.
    """
    if order < 0 or order > 8:
        raise ValueError("order must lie in 0..8")
    if any(s <= 0 for s in grid):
        raise ValueError("grid points must be positive")
    eps = sys.float_info.epsilon
    report = CMReport(list(grid), order)

    def L(s):
        return d.pgf_extended(1.0 - s)

    for s in grid:
        if L(s) is None:
            report.undefined.append(s)
            continue
        for ell in range(order + 1):
            if ell == 0:
                est, noise = L(s), 0.0
            else:
                h = _fd_step(s, ell)
                vals = [L(s + (ell / 2 - j) * h) for j in range(ell + 1)]
                if any(v is None for v in vals):
                    report.undefined.append(s)
                    break
                est = sum((-1) ** j * math.comb(ell, j) * v for j, v in enumerate(vals)) / h**ell
                noise = 4 * eps * 2**ell * max(abs(v) for v in vals) / h**ell
            signed = (-1) ** ell * est
            report.estimates[(s, ell)] = signed
            if signed < -(tau_cm + noise):
                report.violations.append(CMViolation(s, ell, signed))
    return report


# --------------------------------------------------------------------------
# M-transform


def m_transform_cdf(d: DiscreteDist, x):
    """c.d.f. at ``x`` of the maximum of ``zeta`` i.i.d. uniforms, ``zeta ~ d``.

    Accepts a scalar or an array of points in [0, 1].
    """
    if d.pmf(0) > 0:
        raise PositivityRequired("the M-transform needs P(zeta = 0) = 0")
    if np.ndim(x) == 0:
        return d.pgf(float(x))
    return np.array([d.pgf(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
