import json
from fractions import Fraction

import pytest

from probtransforms.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main, run
from probtransforms.discrete import (
    Atoms,
    Binomial,
    Cox,
    Dirac,
    ExplicitPmf,
    FiniteMixture,
    GammaMix,
    Geometric,
    NegBinomial,
    Poisson,
    TwoPoint,
)
from probtransforms.laplace import Convolution, Erlang, Exponential, Mixture, PointMassZero
from probtransforms.serialize import (
    SpecError,
    continuous_to_dict,
    discrete_to_dict,
    parse_continuous,
    parse_discrete,
)

DISCRETE = [
    Dirac(3),
    TwoPoint(1, 4, 0.25),
    Poisson(2.5),
    Binomial(6, 0.3),
    Geometric(0.4),
    NegBinomial(2.5, 0.6),
    Cox(Atoms(((0.5, 0.25), (2.0, 0.75)))),
    Cox(GammaMix(2.0, 3.0)),
    FiniteMixture((0.5, 0.5), (Poisson(1.0), Dirac(2))),
    ExplicitPmf((0.25, 0.5, 0.25)),
    ExplicitPmf((Fraction(1, 3), Fraction(1, 3)), tail=Fraction(1, 3)),
]

CONTINUOUS = [
    Exponential(2.0),
    Erlang(3, 1.5),
    PointMassZero(),
    Convolution((Exponential(1.0), Exponential(2.0))),
    Mixture((0.5, 0.25), (Exponential(1.0), PointMassZero()), tail=0.25),
    Mixture((2.0, -1.0), (Exponential(1.0), Exponential(2.0)), is_signed=True),
]


@pytest.mark.parametrize("d", DISCRETE, ids=lambda d: type(d).__name__)
def test_discrete_round_trip(d):
    text = json.dumps(discrete_to_dict(d))
    assert parse_discrete(text) == d


@pytest.mark.parametrize("c", CONTINUOUS, ids=lambda c: type(c).__name__)
def test_continuous_round_trip(c):
    assert parse_continuous(json.dumps(continuous_to_dict(c))) == c


def test_exact_pmf_strings():
    d = parse_discrete({"type": "pmf", "coeffs": ["1/3", "2/3"]})
    assert d.is_exact and d.masses == (Fraction(1, 3), Fraction(2, 3))


@pytest.mark.parametrize(
    "spec, field",
    [
        ({"type": "binomial", "n": 5}, "dist.r"),
        ({"type": "poisson", "lambda": -1}, "dist"),
        ({"type": "mixture", "weights": [0.5, 0.5], "components": [{"type": "dirac", "m": 1}, {"type": "geometric"}]},
         "dist.components[1].r"),
        ({"type": "nope"}, "dist.type"),
    ],
)
def test_parse_errors_name_field(spec, field):
    with pytest.raises(SpecError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_discrete(spec)


def _json(argv):
    status, text = run(argv)
    return status, json.loads(text)


def test_thicken_binomial():
    status, rep = _json(["thicken", "--dist", '{"type":"binomial","n":5,"r":0.2}', "--p", "0.5"])
    assert status == EXIT_OK
    assert rep["result"]["dist"] == {"type": "binomial", "n": 5, "r": 0.4}


def test_thicken_dirac_fails_with_certificate():
    status, rep = _json(["thicken", "--dist", '{"type":"dirac","m":2}', "--p", "0.5"])
    assert status == EXIT_FAIL
    cert = rep["result"]["certificate"]
    assert cert["verdict"] == "NotThickable"
    assert cert["witness_value"] < 0


def test_thicken_inconclusive_exit_code():
    status, _ = run(["thicken", "--dist", '{"type":"pmf","coeffs":[0.5],"tail":0.5}', "--p", "0.5"])
    assert status == EXIT_INCONCLUSIVE


def test_verify_identity_convolser():
    status, rep = _json(["verify-identity", "--id", "convolser", "--lambda1", "1", "--lambda2", "3", "--k", "40"])
    assert status == EXIT_OK
    assert rep["result"]["passed"] is True


def test_eval_pgf_and_laplace():
    _, rep = _json(["eval-pgf", "--dist", '{"type":"poisson","lambda":2}', "--x", "0.5"])
    assert rep["result"]["values"][0]["value"] == pytest.approx(0.3678794411714424, abs=1e-15)
    _, rep = _json(["laplace", "--dist", '{"type":"conv","children":[{"type":"exp","lambda":1},{"type":"exp","lambda":2}]}',
                    "--s", "1", "--kind", "survival"])
    assert rep["result"]["values"][0]["value"] == pytest.approx(0.600423599106272, abs=1e-12)


def test_usage_errors():
    assert run(["pmf", "--dist", "{not json"])[0] == EXIT_USAGE
    assert run(["pmf", "--dist", '{"type":"poisson"}', "--bogus"])[0] == EXIT_USAGE
    assert run(["frobnicate"])[0] == EXIT_USAGE
    assert run(["thin", "--dist", '{"type":"poisson","lambda":1}', "--p", "1.5"])[0] == EXIT_USAGE
    status, text = run(["pmf", "--dist", '{"type":"binomial","n":3}'])
    assert status == EXIT_USAGE and "dist.r" in text


def test_main_prints_to_streams(capsys):
    assert main(["pmf", "--dist", '{"type":"dirac","m":1}', "--k", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["result"]["coeffs"] == [0.0, 1.0, 0.0]
    assert main(["pmf"]) == EXIT_USAGE
    assert capsys.readouterr().err


SAMPLE = ["sample", "--dist", '{"type":"poisson","lambda":3}', "--n", "200", "--seed", "42"]


def test_sample_is_deterministic():
    assert run(SAMPLE) == run(SAMPLE)
    assert run(SAMPLE)[1] != run(SAMPLE[:-1] + ["43"])[1]


def test_sample_output_formats():
    status, text = run(SAMPLE + ["--out", "ndjson"])
    lines = text.strip().splitlines()
    assert status == EXIT_OK
    assert json.loads(lines[0])["command"] == "sample"
    assert len(lines) == 201
    status, text = run(SAMPLE + ["--out", "csv"])
    lines = text.strip().splitlines()
    assert lines[0].startswith("# ") and lines[1] == "value"
    assert len(lines) == 202
    assert all(float(v).is_integer() for v in lines[2:])


def test_sample_modes_and_thin():
    status, rep = _json(["sample", "--dist", '{"type":"dirac","m":2}', "--n", "2000", "--mode", "pow"])
    assert status == EXIT_OK and "ks" in rep["result"]["summary"]
    status, rep = _json(["sample", "--dist", '{"type":"poisson","lambda":3}', "--n", "2000", "--thin", "0.4"])
    assert rep["result"]["summary"]["mean"] == pytest.approx(1.2, abs=0.15)


def test_simulate_pp_and_gof(tmp_path):
    status, rep = _json(["simulate-pp", "--lambda", "2", "--window", "5", "--thin", "0.5", "--runs", "500"])
    assert status == EXIT_OK
    assert rep["result"]["mean_count"] == pytest.approx(5.0, abs=0.5)
    _, text = run(["sample", "--dist", '{"type":"poisson","lambda":2}', "--n", "100000", "--out", "csv"])
    path = tmp_path / "s.csv"
    path.write_text(text)
    status, rep = _json(["gof", "--samples", str(path), "--dist", '{"type":"poisson","lambda":2}'])
    assert status == EXIT_OK and rep["result"]["test"] == "tv"


def test_check_thickable_and_cm():
    status, rep = _json(["check-thickable", "--dist", '{"type":"binomial","n":5,"r":0.6}', "--p", "0.5"])
    assert status == EXIT_FAIL and rep["result"]["certificate"]["verdict"] == "NotThickable"
    status, rep = _json(["cm-check", "--dist", '{"type":"poisson","lambda":1}', "--order", "3"])
    assert status == EXIT_OK
