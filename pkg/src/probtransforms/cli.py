"""Command-line front end.

Every report is a JSON object embedding the resolved configuration. Exit
status: 0 success/pass, 1 verification failure or NotThickable, 2 usage or
parse error, 3 thickability undecided (Inconclusive).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import identities, laplace, sim, stattest, transforms
from .discrete import DEFAULT_TRUNCATION, pgf_series
from .serialize import SpecError, continuous_to_dict, discrete_to_dict, parse_continuous, parse_discrete

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _jsonable(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (np.floating,)):
        return _jsonable(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    return x


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "handler"}
    for key in ("dist", "dist2"):
        if isinstance(cfg.get(key), str):
            try:
                cfg[key] = json.loads(cfg[key])
            except json.JSONDecodeError:
                pass
    return cfg


def _report(args, result: dict) -> dict:
    return {"command": args.command, "config": _config(args), "result": result}


# --------------------------------------------------------------------------
# Handlers: each returns (exit status, report dict, optional raw rows)


def cmd_eval_pgf(args):
    d = parse_discrete(args.dist)
    rows = []
    for x in args.x:
        if args.extended:
            rows.append({"x": x, "value": d.pgf_extended(x)})
        else:
            if not 0 <= x <= 1:
                raise UsageError(f"--x {x}: pgf needs 0 <= x <= 1 (use --extended)")
            series, bound = pgf_series(d, x, args.trunc)
            rows.append({"x": x, "value": d.pgf(x), "series": series, "series_bound": bound})
    return EXIT_OK, {"values": rows}


def cmd_pmf(args):
    d = parse_discrete(args.dist)
    K = args.k if args.k is not None else args.trunc
    a = d.coeffs(K)
    return EXIT_OK, {"coeffs": a.tolist(), "K": K, "tail_bound": max(0.0, 1.0 - float(a.sum())), "mean": d.mean()}


def cmd_thin(args):
    d = parse_discrete(args.dist)
    return EXIT_OK, {"dist": discrete_to_dict(transforms.thin(d, args.p))}


def _verdict_status(cert) -> int:
    return {
        transforms.Verdict.THICKABLE: EXIT_OK,
        transforms.Verdict.NOT_THICKABLE: EXIT_FAIL,
        transforms.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[cert.verdict]


def cmd_thicken(args):
    d = parse_discrete(args.dist)
    try:
        out = transforms.thicken(d, args.p)
    except transforms.ThickeningError as exc:
        return _verdict_status(exc.certificate), {"certificate": exc.certificate.to_dict()}
    return EXIT_OK, {"dist": discrete_to_dict(out)}


def cmd_check_thickable(args):
    cert = transforms.is_p_thickable(parse_discrete(args.dist), args.p)
    return _verdict_status(cert), {"certificate": cert.to_dict()}


def cmd_cm_check(args):
    rep = transforms.complete_monotone_check(parse_discrete(args.dist), args.grid, args.order)
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_dict()


def cmd_laplace(args):
    c = parse_continuous(args.dist)
    fn = {
        "laplace": laplace.laplace_eval,
        "survival": laplace.survival,
        "dual-cdf": laplace.survival_as_cdf,
        "failure": laplace.failure_measure,
    }[args.kind]
    return EXIT_OK, {"kind": args.kind, "values": [{"s": s, "value": float(fn(c, s))} for s in args.s]}


def cmd_discretize(args):
    return EXIT_OK, {"dist": discrete_to_dict(laplace.discretize(parse_continuous(args.dist), args.t))}


def cmd_verify_identity(args):
    ident = identities.IdentityId(args.id)
    if ident in (identities.IdentityId.CONV_SUM, identities.IdentityId.COROLLARY_MIX):
        if args.lam is None or args.p is None:
            raise UsageError(f"{args.id} needs --lambda and --p")
        params = {"lambda": args.lam, "p": args.p}
    else:
        if args.lambda1 is None or args.lambda2 is None:
            raise UsageError(f"{args.id} needs --lambda1 and --lambda2")
        params = {"lambda1": args.lambda1, "lambda2": args.lambda2}
    rep = identities.verify_identity(ident, params, args.grid, args.k, args.tol)
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_dict()


def cmd_sample(args):
    d = parse_discrete(args.dist)
    rng = sim.make_rng(args.seed, args.stream)
    if args.mode is not None:
        values = sim.sample_m_transform_n(d, args.n, rng, args.mode)
    elif args.thin is not None:
        values = sim.sample_thinned_n(d, args.thin, args.n, rng)
    else:
        values = sim.sample_discrete_n(d, args.n, rng)
    summary = {"count": int(values.size), "mean": float(values.mean())}
    if args.mode is not None:
        summary["ks"] = stattest.ks_one_sample(
            values, lambda x: transforms.m_transform_cdf(d, x)
        ).to_dict()
    else:
        target = transforms.thin(d, args.thin) if args.thin is not None else d
        K = int(values.max()) if values.size else 0
        summary["tv"] = stattest.tv_discrete(np.bincount(values), target, K).to_dict()
    return EXIT_OK, {"summary": summary}, values.tolist()


def cmd_simulate_pp(args):
    rng = sim.make_rng(args.seed, args.stream)
    p = args.thin
    counts, first = [], []
    for _ in range(args.runs):
        ps = sim.sample_poisson_process(args.lam, args.window, rng)
        kept = sim.thin_process(ps, p, rng)
        counts.append(len(kept))
        if kept.points:
            first.append(kept.points[0])
    rate = p * args.lam
    result = {
        "runs": args.runs,
        "mean_count": float(np.mean(counts)),
        "expected_count": rate * args.window,
        "runs_with_points": len(first),
    }
    if first:
        # first point conditioned on landing inside the window
        norm = 1.0 - math.exp(-rate * args.window)
        result["first_point_ks"] = stattest.ks_one_sample(first, lambda x: (1.0 - np.exp(-rate * x)) / norm).to_dict()
    return EXIT_OK, result, counts


def _read_samples(path: str) -> np.ndarray:
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        lines = [line for line in stream if line.strip() and not line.startswith("#")]
        if lines and lines[0].strip() == "value":
            lines = lines[1:]
        vals = [float(line.split(",")[0]) for line in lines]
    except ValueError as exc:
        raise UsageError(f"{path}: non-numeric sample line") from exc
    finally:
        if stream is not sys.stdin:
            stream.close()
    if not vals:
        raise UsageError(f"{path}: no samples")
    return np.asarray(vals)


def cmd_gof(args):
    x = _read_samples(args.samples)
    if args.samples2:
        rep = stattest.ks_two_sample(x, _read_samples(args.samples2))
    elif args.cdist:
        c = parse_continuous(args.cdist)
        rep = stattest.ks_one_sample(x, lambda v: laplace.cdf(c, v))
    elif args.dist:
        d = parse_discrete(args.dist)
        ints = x.astype(np.int64)
        if np.any(ints != x) or np.any(ints < 0):
            raise UsageError("discrete goodness of fit needs nonnegative integer samples")
        rep = stattest.tv_discrete(np.bincount(ints), d, args.k if args.k is not None else int(ints.max()))
    else:
        raise UsageError("gof needs one of --samples2, --cdist, --dist")
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_dict()


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=_u64, default=0, help="RNG seed (unsigned 64-bit)")
    g.add_argument("--stream", type=_u64, default=0, help="RNG stream id")
    g.add_argument("--trunc", type=int, default=DEFAULT_TRUNCATION, help="series truncation index K")
    g.add_argument("--tol", type=float, default=identities.DEFAULT_TOL, help="verification tolerance")
    g.add_argument("--out", choices=("json", "ndjson", "csv"), default="json", help="output format")

    parser = _Parser(prog="probtransforms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("eval-pgf", cmd_eval_pgf, "evaluate the generating function")
    p.add_argument("--dist", required=True, help="discrete distribution JSON")
    p.add_argument("--x", type=_floats, required=True, help="comma-separated arguments")
    p.add_argument("--extended", action="store_true", help="allow x outside [0,1]")

    p = add("pmf", cmd_pmf, "probability mass coefficients a_0..a_K")
    p.add_argument("--dist", required=True)
    p.add_argument("--k", type=int, default=None, help="largest index (default --trunc)")

    p = add("thin", cmd_thin, "thin with retention probability p")
    p.add_argument("--dist", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("thicken", cmd_thicken, "inverse thinning; exit 1 NotThickable, 3 Inconclusive")
    p.add_argument("--dist", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("check-thickable", cmd_check_thickable, "thickability certificate")
    p.add_argument("--dist", required=True)
    p.add_argument("--p", type=float, required=True)

    p = add("cm-check", cmd_cm_check, "finite-difference complete-monotonicity check of G(1-s)")
    p.add_argument("--dist", required=True)
    p.add_argument("--grid", type=_floats, default=[0.5, 1.0, 2.0])
    p.add_argument("--order", type=int, default=4)

    p = add("laplace", cmd_laplace, "Laplace transform and related functions of a continuous law")
    p.add_argument("--dist", required=True, help="continuous distribution JSON")
    p.add_argument("--s", type=_floats, required=True)
    p.add_argument("--kind", choices=("laplace", "survival", "dual-cdf", "failure"), default="laplace")

    p = add("discretize", cmd_discretize, "integer law with pgf L(t(1-x))")
    p.add_argument("--dist", required=True)
    p.add_argument("--t", type=float, required=True)

    p = add("verify-identity", cmd_verify_identity, "check an exponential-law identity on a Laplace grid")
    p.add_argument("--id", required=True, choices=[i.value for i in identities.IdentityId])
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--k", type=int, default=identities.DEFAULT_K)
    p.add_argument("--grid", type=_floats, default=list(identities.DEFAULT_S_GRID))

    p = add("sample", cmd_sample, "draw samples from a discrete law, its thinning, or its M-transform")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--thin", type=float, default=None)
    p.add_argument("--mode", choices=("max", "pow"), default=None, help="M-transform sampler")

    p = add("simulate-pp", cmd_simulate_pp, "thinned Poisson point processes on (0, window]")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--thin", type=float, default=1.0)
    p.add_argument("--runs", type=int, default=1000)

    p = add("gof", cmd_gof, "goodness of fit of samples (one per line, '-' for stdin)")
    p.add_argument("--samples", required=True)
    p.add_argument("--samples2", default=None)
    p.add_argument("--cdist", default=None, help="continuous target law JSON (KS)")
    p.add_argument("--dist", default=None, help="discrete target law JSON (total variation)")
    p.add_argument("--k", type=int, default=None)
    return parser


def _render(args, status: int, report: dict, rows: Optional[list]) -> str:
    report = _jsonable(report)
    if args.out == "json":
        if rows is not None:
            report["result"]["samples"] = _jsonable(rows)
        return json.dumps(report, indent=2)
    if args.out == "ndjson":
        lines = [json.dumps(report)]
        if rows is not None:
            lines.extend(json.dumps(_jsonable(v)) for v in rows)
        return "\n".join(lines)
    if rows is None:
        raise UsageError("--out csv is only available for sample and simulate-pp")
    lines = ["# " + json.dumps(report), "value"]
    lines.extend(repr(v) for v in rows)
    return "\n".join(lines)


def run(argv: Sequence[str]) -> Tuple[int, str]:
    """Execute one command; return the exit status and the serialized report."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        outcome = args.handler(args)
        status, report = outcome[0], _report(args, outcome[1])
        rows = outcome[2] if len(outcome) > 2 else None
        return status, _render(args, status, report, rows)
    except (UsageError, SpecError) as exc:
        return EXIT_USAGE, json.dumps({"error": str(exc)})
    except (ValueError, TypeError) as exc:
        # precondition violations from the library (e.g. p outside (0,1))
        return EXIT_USAGE, json.dumps({"error": f"{type(exc).__name__}: {exc}"})


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if status == EXIT_USAGE else sys.stdout
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
