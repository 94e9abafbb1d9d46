"""Identities between exponential laws, checked through Laplace transforms.

Each identity is built as two ``ContDist`` trees and compared on a grid of
``s`` values. Truncated series keep their omitted mass, which bounds the
transform gap because every omitted term has transform in ``[0, 1]``.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from .laplace import ContDist, Convolution, Erlang, Exponential, Mixture, PointMassZero, laplace_eval

DEFAULT_S_GRID = (0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
DEFAULT_K = 60
DEFAULT_TOL = 1e-10


class IdentityId(str, enum.Enum):
    CONV_SUM = "convsum"
    COROLLARY_MIX = "corollarymix"
    COROLLARY_FALTUNG = "corollaryfaltung"
    CONVOL_SER = "convolser"
    CONV_EXPO = "convexpo"


class OrderViolation(ValueError):
    """The identity requires ``lambda1 < lambda2``."""


@dataclass
class IdentityReport:
    identity_id: str
    params: dict
    s_grid: List[float]
    max_abs_gap: float
    truncation_K: int
    tail_bound: float
    tol: float
    gaps: List[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_abs_gap <= self.tol + self.tail_bound

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _check_pair(lambda1: float, lambda2: float) -> None:
    if not (0 < lambda1 < lambda2):
        raise OrderViolation(f"need 0 < lambda1 < lambda2, got {lambda1!r}, {lambda2!r}")


def _check_p(p: float) -> None:
    if not (0 < p < 1):
        raise ValueError(f"p must lie in (0,1), got {p!r}")


def convolser_p(lambda1: float, lambda2: float) -> float:
    """Geometric weight ``((l2 - l1) / (l2 + l1))^2`` of the Erlang-mixture form."""
    return ((lambda2 - lambda1) / (lambda2 + lambda1)) ** 2


def build_convsum_rhs(lam: float, p: float, K: int) -> Mixture:
    """``p * sum_{k<=K} (1-p)^k Erlang(k+1, lam)`` with tail ``(1-p)^(K+1)``."""
    _check_p(p)
    if K < 0:
        raise ValueError("K must be >= 0")
    weights = [p * (1 - p) ** k for k in range(K + 1)]
    children = [Erlang(k + 1, lam) for k in range(K + 1)]
    return Mixture(tuple(weights), tuple(children), tail=(1 - p) ** (K + 1))


def build_convolser_rhs(lambda1: float, lambda2: float, K: int) -> Mixture:
    """``(1-p) sum_{k<=K} p^k Erlang(2(k+1), (l1+l2)/2)`` with tail ``p^(K+1)``."""
    _check_pair(lambda1, lambda2)
    if K < 0:
        raise ValueError("K must be >= 0")
    p = convolser_p(lambda1, lambda2)
    half = 0.5 * (lambda1 + lambda2)
    weights = [(1 - p) * p**k for k in range(K + 1)]
    children = [Erlang(2 * (k + 1), half) for k in range(K + 1)]
    return Mixture(tuple(weights), tuple(children), tail=p ** (K + 1))


def hypoexp_pair(lambda1: float, lambda2: float) -> Convolution:
    return Convolution((Exponential(lambda1), Exponential(lambda2)))


def build_sides(identity: IdentityId, params: Mapping[str, float], K: int) -> Tuple[ContDist, ContDist]:
    """Left- and right-hand side of ``identity`` as laws."""
    identity = IdentityId(identity)
    if identity in (IdentityId.CONV_SUM, IdentityId.COROLLARY_MIX):
        lam, p = params["lambda"], params["p"]
        _check_p(p)
        if identity is IdentityId.CONV_SUM:
            return Exponential(p * lam), build_convsum_rhs(lam, p, K)
        lhs = Mixture(
            (p, 1 - p),
            (Exponential(lam), Convolution((Exponential(lam), Exponential(p * lam)))),
        )
        return lhs, Exponential(p * lam)

    l1, l2 = params["lambda1"], params["lambda2"]
    _check_pair(l1, l2)
    lhs = hypoexp_pair(l1, l2)
    if identity is IdentityId.COROLLARY_FALTUNG:
        rhs = Mixture(
            (l2 / (l2 - l1), -l1 / (l2 - l1)),
            (Exponential(l1), Exponential(l2)),
            is_signed=True,
        )
    elif identity is IdentityId.CONVOL_SER:
        rhs = build_convolser_rhs(l1, l2, K)
    else:
        p = convolser_p(l1, l2)
        rhs = Convolution(
            (Erlang(2, 0.5 * (l1 + l2)), Mixture((1 - p, p), (PointMassZero(), hypoexp_pair(l1, l2))))
        )
    return lhs, rhs


def verify_identity(
    identity,
    params: Mapping[str, float],
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    K: int = DEFAULT_K,
    tol: float = DEFAULT_TOL,
) -> IdentityReport:
    """Compare both sides of ``identity`` on ``s_grid``."""
    identity = IdentityId(identity)
    if any(s < 0 for s in s_grid):
        raise ValueError("s_grid must be nonnegative")
    lhs, rhs = build_sides(identity, params, K)
    s = np.asarray(s_grid, dtype=float)
    gaps = np.abs(np.atleast_1d(laplace_eval(lhs, s)) - np.atleast_1d(laplace_eval(rhs, s)))
    tail = rhs.tail if isinstance(rhs, Mixture) else 0.0
    return IdentityReport(
        identity_id=identity.value,
        params=dict(params),
        s_grid=[float(x) for x in s],
        max_abs_gap=float(gaps.max()),
        truncation_K=K,
        tail_bound=float(tail),
        tol=tol,
        gaps=[float(g) for g in gaps],
    )


def default_sweep() -> List[Tuple[IdentityId, dict]]:
    """Parameter tuples every identity must pass."""
    cases = []
    for ident in (IdentityId.CONV_SUM, IdentityId.COROLLARY_MIX):
        for lam in (0.5, 1.0, 2.0):
            for p in (0.1, 0.5, 0.9):
                cases.append((ident, {"lambda": lam, "p": p}))
    for ident in (IdentityId.COROLLARY_FALTUNG, IdentityId.CONVOL_SER, IdentityId.CONV_EXPO):
        for l1, l2 in ((1.0, 2.0), (1.0, 3.0), (0.5, 4.0)):
            cases.append((ident, {"lambda1": l1, "lambda2": l2}))
    return cases
