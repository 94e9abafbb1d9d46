"""JSON specs for discrete and continuous laws.

Examples::

    {"type": "poisson", "lambda": 3.0}
    {"type": "cox", "atoms": [[1.0, 0.5], [2.0, 0.5]]}
    {"type": "cox", "gamma": {"shape": 2.0, "rate": 1.0}}
    {"type": "mixture", "weights": [0.5, 0.5], "components": [...]}
    {"type": "pmf", "coeffs": [0.2, 0.8], "tail": 0.0}
    {"type": "conv", "children": [{"type": "exp", "lambda": 1.0}, {"type": "exp", "lambda": 3.0}]}

Exact rational pmf coefficients are written as ``"p/q"`` strings so that
serialized values re-parse to identical objects.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

from .discrete import (
    Atoms,
    Binomial,
    Cox,
    Dirac,
    DiscreteDist,
    ExplicitPmf,
    FiniteMixture,
    GammaMix,
    Geometric,
    InvalidDistribution,
    NegBinomial,
    Poisson,
    TwoPoint,
)
from .laplace import ContDist, Convolution, Erlang, Exponential, Mixture, PointMassZero


class SpecError(ValueError):
    """A JSON distribution description is malformed; the message names the offending field."""


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise SpecError(f"{path}.{key}: missing required field")
    return obj[key]


def _num(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _int(value, path: str) -> int:
    if isinstance(value, bool):
        raise SpecError(f"{path}: expected an integer, got {value!r}")
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if not isinstance(value, int):
        raise SpecError(f"{path}: expected an integer, got {value!r}")
    return value


def _exact(value, path: str):
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise SpecError(f"{path}: cannot parse rational {value!r}") from exc
    return _num(value, path)


def _load(spec: Union[str, dict], path: str) -> dict:
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(spec, dict):
        raise SpecError(f"{path}: expected a JSON object")
    return spec


def _build(path: str, ctor, *args, **kwargs):
    try:
        return ctor(*args, **kwargs)
    except InvalidDistribution as exc:
        raise SpecError(f"{path}: {exc}") from exc


def parse_discrete(spec: Union[str, dict], path: str = "dist") -> DiscreteDist:
    obj = _load(spec, path)
    kind = _field(obj, "type", path)
    if kind == "dirac":
        return _build(path, Dirac, _int(_field(obj, "m", path), f"{path}.m"))
    if kind == "twopoint":
        return _build(
            path, TwoPoint,
            _int(_field(obj, "m", path), f"{path}.m"),
            _int(_field(obj, "n", path), f"{path}.n"),
            _num(_field(obj, "r", path), f"{path}.r"),
        )
    if kind == "poisson":
        return _build(path, Poisson, _num(_field(obj, "lambda", path), f"{path}.lambda"))
    if kind == "binomial":
        return _build(
            path, Binomial,
            _int(_field(obj, "n", path), f"{path}.n"),
            _num(_field(obj, "r", path), f"{path}.r"),
        )
    if kind == "geometric":
        return _build(path, Geometric, _num(_field(obj, "r", path), f"{path}.r"))
    if kind == "negbinomial":
        return _build(
            path, NegBinomial,
            _num(_field(obj, "n", path), f"{path}.n"),
            _num(_field(obj, "r", path), f"{path}.r"),
        )
    if kind == "cox":
        if "atoms" in obj:
            raw = obj["atoms"]
            if not isinstance(raw, list) or not all(isinstance(a, list) and len(a) == 2 for a in raw):
                raise SpecError(f"{path}.atoms: expected a list of [t, q] pairs")
            pts = tuple(
                (_num(t, f"{path}.atoms[{i}][0]"), _num(q, f"{path}.atoms[{i}][1]")) for i, (t, q) in enumerate(raw)
            )
            mixing = _build(f"{path}.atoms", Atoms, pts)
        elif "gamma" in obj:
            g = _load(obj["gamma"], f"{path}.gamma")
            mixing = _build(
                f"{path}.gamma", GammaMix,
                _num(_field(g, "shape", f"{path}.gamma"), f"{path}.gamma.shape"),
                _num(_field(g, "rate", f"{path}.gamma"), f"{path}.gamma.rate"),
            )
        else:
            raise SpecError(f"{path}: cox needs 'atoms' or 'gamma'")
        return Cox(mixing)
    if kind == "mixture":
        weights = _field(obj, "weights", path)
        comps = _field(obj, "components", path)
        if not isinstance(weights, list) or not isinstance(comps, list):
            raise SpecError(f"{path}: weights and components must be lists")
        w = tuple(_num(x, f"{path}.weights[{i}]") for i, x in enumerate(weights))
        cs = tuple(parse_discrete(c, f"{path}.components[{i}]") for i, c in enumerate(comps))
        return _build(path, FiniteMixture, w, cs)
    if kind == "pmf":
        coeffs = _field(obj, "coeffs", path)
        if not isinstance(coeffs, list):
            raise SpecError(f"{path}.coeffs: expected a list")
        a = tuple(_exact(x, f"{path}.coeffs[{i}]") for i, x in enumerate(coeffs))
        tail = _exact(obj.get("tail", 0.0), f"{path}.tail")
        return _build(path, ExplicitPmf, a, tail)
    raise SpecError(f"{path}.type: unknown discrete distribution type {kind!r}")


def _exact_out(x):
    return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else x


def discrete_to_dict(d: DiscreteDist) -> dict:
    if isinstance(d, Dirac):
        return {"type": "dirac", "m": d.m}
    if isinstance(d, TwoPoint):
        return {"type": "twopoint", "m": d.m, "n": d.n, "r": d.r}
    if isinstance(d, Poisson):
        return {"type": "poisson", "lambda": d.lam}
    if isinstance(d, Binomial):
        return {"type": "binomial", "n": d.n, "r": d.r}
    if isinstance(d, Geometric):
        return {"type": "geometric", "r": d.r}
    if isinstance(d, NegBinomial):
        return {"type": "negbinomial", "n": d.n, "r": d.r}
    if isinstance(d, Cox):
        if isinstance(d.mixing, GammaMix):
            return {"type": "cox", "gamma": {"shape": d.mixing.shape, "rate": d.mixing.rate}}
        return {"type": "cox", "atoms": [[t, q] for t, q in d.mixing.points]}
    if isinstance(d, FiniteMixture):
        return {
            "type": "mixture",
            "weights": list(d.weights),
            "components": [discrete_to_dict(c) for c in d.components],
        }
    if isinstance(d, ExplicitPmf):
        return {"type": "pmf", "coeffs": [_exact_out(x) for x in d.masses], "tail": _exact_out(d.tail)}
    raise TypeError(f"cannot serialize {type(d).__name__}")


def parse_continuous(spec: Union[str, dict], path: str = "dist") -> ContDist:
    obj = _load(spec, path)
    kind = _field(obj, "type", path)
    if kind == "exp":
        return _build(path, Exponential, _num(_field(obj, "lambda", path), f"{path}.lambda"))
    if kind == "erlang":
        return _build(
            path, Erlang,
            _int(_field(obj, "k", path), f"{path}.k"),
            _num(_field(obj, "lambda", path), f"{path}.lambda"),
        )
    if kind == "delta0":
        return PointMassZero()
    if kind in ("conv", "mix"):
        children = _field(obj, "children", path)
        if not isinstance(children, list):
            raise SpecError(f"{path}.children: expected a list")
        cs = tuple(parse_continuous(c, f"{path}.children[{i}]") for i, c in enumerate(children))
        if kind == "conv":
            return _build(path, Convolution, cs)
        weights = _field(obj, "weights", path)
        if not isinstance(weights, list):
            raise SpecError(f"{path}.weights: expected a list")
        w = tuple(_num(x, f"{path}.weights[{i}]") for i, x in enumerate(weights))
        signed = obj.get("signed", False)
        if not isinstance(signed, bool):
            raise SpecError(f"{path}.signed: expected a boolean")
        tail = _num(obj.get("tail", 0.0), f"{path}.tail")
        return _build(path, Mixture, w, cs, signed, tail)
    raise SpecError(f"{path}.type: unknown continuous distribution type {kind!r}")


def continuous_to_dict(c: ContDist) -> dict:
    if isinstance(c, Exponential):
        return {"type": "exp", "lambda": c.lam}
    if isinstance(c, Erlang):
        return {"type": "erlang", "k": c.k, "lambda": c.lam}
    if isinstance(c, PointMassZero):
        return {"type": "delta0"}
    if isinstance(c, Convolution):
        return {"type": "conv", "children": [continuous_to_dict(x) for x in c.children]}
    if isinstance(c, Mixture):
        return {
            "type": "mix",
            "weights": list(c.weights),
            "children": [continuous_to_dict(x) for x in c.children],
            "signed": c.is_signed,
            "tail": c.tail,
        }
    raise TypeError(f"cannot serialize {type(c).__name__}")


def to_dict(value: Any) -> dict:
    if isinstance(value, DiscreteDist):
        return discrete_to_dict(value)
    return continuous_to_dict(value)
