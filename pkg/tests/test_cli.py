"""Command-line layer: grammar round-trips, config precedence, manifests,
exit codes, and the JSON/CSV payload shapes of every subcommand."""

import json
import math
from fractions import Fraction

import pytest

import dseries as ds
from dseries.cli import (
    Config,
    console_main,
    format_alpha,
    parse_alpha,
    parse_cert,
    parse_f,
)
from conftest import pi_fraction


GRAMMAR_CORPUS = [
    "rat:355/113",
    "rat:-3/7",
    "surd:(0+1*sqrt(2))/1",
    "surd:(1-2*sqrt(5))/3",
    "surd:(1+1*sqrt(5))/2",
    "const:pi",
    "const:invpi",
    "const:e",
    "liouville:factorial",
    "liouville:tower100,digits=13,start=2",
    "liouville:factorial,base=1/7,digits=31",
    "cf:[3;7,15,1]",
    "cf:[0;2,4]",
    "cf:[5]",
    "cf:[1;...]",
    "cf:[0;2,1,...]",
]


def run(argv, tmp_path, name="run"):
    """console_main against throwaway manifest/json paths; returns
    (exit_code, payload dict or None, manifest dict)."""
    manifest = tmp_path / f"{name}_manifest.json"
    out = tmp_path / f"{name}_out.json"
    code = console_main(list(argv) + ["--manifest", str(manifest), "--json", str(out)])
    payload = json.loads(out.read_text()) if out.exists() else None
    mani = json.loads(manifest.read_text()) if manifest.exists() else None
    return code, payload, mani


# -- alpha grammar -------------------------------------------------------------


def test_alpha_roundtrip_is_identity_on_corpus():
    from dseries.realsource import Kind

    for text in GRAMMAR_CORPUS:
        first = parse_alpha(text)
        canon = format_alpha(first)
        second = parse_alpha(canon)
        assert format_alpha(second) == canon, text
        assert second.kind is first.kind, text
        if first.kind is Kind.PQ_STREAM:
            # a finite prefix is its quotient list; deep enclosures are capped
            assert second.pqs == first.pqs, text
        else:
            # same number: high-precision enclosures must overlap
            a, b = first.approximate(96), second.approximate(96)
            assert a.lo <= b.hi and b.lo <= a.hi, text


def test_alpha_canonicalization_reduces_rationals():
    assert format_alpha(parse_alpha("rat:2/4")) == "rat:1/2"
    assert format_alpha(parse_alpha("rat:-10/4")) == "rat:-5/2"


def test_alpha_tail_stream_means_golden_ratio():
    phi = parse_alpha("cf:[1;...]")
    iv = phi.approximate(80)
    assert float(iv.lo) <= (1 + math.sqrt(5)) / 2 <= float(iv.hi)
    assert format_alpha(phi) == "cf:[1;...]"


@pytest.mark.parametrize(
    "bad",
    [
        "garbage",
        "rat:1",
        "rat:1/0",
        "surd:(1+2*sqrt(4))/3",
        "surd:(1+0*sqrt(2))/3",
        "const:sqrt2",
        "liouville:primorial",
        "liouville:factorial,foo=1",
        "liouville:factorial,digits=2",
        "liouville:factorial,base=3",
        "cf:[1;0]",
        "cf:[1;]",
        "cf:[1;2,,3]",
        "cf:[1;2,-3]",
    ],
)
def test_alpha_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_alpha(bad)


# -- f and certificate specs ---------------------------------------------------


def test_parse_f_accepts_fractions_and_decimals():
    assert parse_f("pow:1").power_exponent == 1
    assert parse_f("pow:1/2").power_exponent == Fraction(1, 2)
    assert parse_f("pow:0.75").power_exponent == Fraction(3, 4)


@pytest.mark.parametrize("bad", ["pow:0", "pow:3/2", "pow:x", "lin:1", "pow:"])
def test_parse_f_rejects(bad):
    with pytest.raises(ValueError):
        parse_f(bad)


def test_parse_cert_forms():
    assert parse_cert("roth").label == "roth"
    m = parse_cert("mahler")
    assert m.label == "mahler"
    m40 = parse_cert("mahler:40")
    assert m40.C == 40.0
    u = parse_cert("measure:2.5,1")
    assert (u.mu, u.C, u.label) == (2.5, 1.0, "user")
    for bad in ("measure:2.5", "measure:a,b", "junk"):
        with pytest.raises(ValueError):
            parse_cert(bad)


# -- config layering -----------------------------------------------------------


def test_config_file_then_flag_precedence(tmp_path):
    cfgfile = tmp_path / "ds.cfg"
    cfgfile.write_text("# comment\nmax_bits = 512\nworkers = 2\n")
    argv = ["classify", "rat:1/3", "--f", "pow:1", "--config", str(cfgfile)]
    code, payload, mani = run(argv, tmp_path, "file_only")
    assert code == 0
    assert mani["caps"] == {"max_bits": 512, "max_terms": Config().max_terms, "workers": 2}
    code, payload, mani = run(argv + ["--max-bits", "256"], tmp_path, "flag_wins")
    assert code == 0
    assert mani["caps"]["max_bits"] == 256
    assert mani["caps"]["workers"] == 2


def test_config_env_and_flag_override(tmp_path, monkeypatch):
    envfile = tmp_path / "env.cfg"
    envfile.write_text("max_bits=1024\n")
    monkeypatch.setenv("DSERIES_CONFIG", str(envfile))
    code, _, mani = run(["classify", "rat:1/3", "--f", "pow:1"], tmp_path, "env")
    assert code == 0 and mani["caps"]["max_bits"] == 1024
    flagfile = tmp_path / "flag.cfg"
    flagfile.write_text("max_bits=2048\n")
    code, _, mani = run(
        ["classify", "rat:1/3", "--f", "pow:1", "--config", str(flagfile)],
        tmp_path,
        "cfg_flag",
    )
    assert code == 0 and mani["caps"]["max_bits"] == 2048


@pytest.mark.parametrize(
    "content", ["max_bits=fast\n", "colors=3\n", "max_bits\n"]
)
def test_config_bad_file_rejected(tmp_path, content):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text(content)
    code, payload, mani = run(
        ["classify", "rat:1/3", "--f", "pow:1", "--config", str(cfgfile)],
        tmp_path,
        "badcfg",
    )
    assert code == 1 and payload is None
    assert "config" in mani["error"]


def test_config_out_of_range_flag(tmp_path):
    code, _, mani = run(
        ["classify", "rat:1/3", "--f", "pow:1", "--max-bits", "32"],
        tmp_path,
        "lowbits",
    )
    assert code == 1 and "max_bits" in mani["error"]


# -- manifests and exit codes --------------------------------------------------


def test_manifest_written_on_success(tmp_path):
    code, payload, mani = run(
        ["classify", "rat:1/3", "--f", "pow:1"], tmp_path, "ok"
    )
    assert code == 0
    assert mani["schema"] == 1
    assert mani["command"] == "classify"
    assert mani["error"] is None
    assert mani["duration_s"] > 0
    assert mani["version"] == ds.__version__
    assert mani["parameters"]["alpha"] == "rat:1/3"
    # every referenced output exists
    import pathlib

    for out in mani["outputs"]:
        assert pathlib.Path(out).exists()


def test_manifest_written_on_handler_failure(tmp_path):
    code, payload, mani = run(
        ["classify", "rat:1/0", "--f", "pow:1"], tmp_path, "bad"
    )
    assert code == 1 and payload is None
    assert mani["error"]


def test_manifest_written_on_usage_failure(tmp_path):
    manifest = tmp_path / "usage_manifest.json"
    code = console_main(["classify", "--manifest", str(manifest)])
    assert code == 1
    mani = json.loads(manifest.read_text())
    assert mani["error"] == "argument parsing failed"
    assert mani["command"] is None


def test_help_and_version_exit_zero(tmp_path, capsys):
    manifest = tmp_path / "help_manifest.json"
    assert console_main(["cf", "--help", "--manifest", str(manifest)]) == 0
    assert not manifest.exists()
    assert console_main(["--version"]) == 0
    assert ds.__version__ in capsys.readouterr().out


def test_exit_code_contract(tmp_path):
    # 0 decisive
    code, payload, _ = run(["classify", "rat:1/2", "--f", "pow:1"], tmp_path, "c0")
    assert code == 0 and payload["outcome"] == "Diverges"
    assert payload["certificate"] == "RationalEvenQ"
    # 1 usage error
    code, _, _ = run(["cf", "nonsense"], tmp_path, "c1")
    assert code == 1
    # 1 invalid certificate pairing
    code, _, _ = run(
        ["classify", "const:e", "--f", "pow:1", "--cert", "mahler"], tmp_path, "c1b"
    )
    assert code == 1
    # 2 precision cap: a three-quotient prefix cannot certify ten convergents
    code, payload, _ = run(["cf", "cf:[0;2,4]", "--terms", "10"], tmp_path, "c2")
    assert code == 2 and payload["capped"]
    # 3 inconclusive
    code, payload, _ = run(["classify", "const:e", "--f", "pow:1"], tmp_path, "c3")
    assert code == 3 and payload["outcome"] == "Inconclusive"


# -- cf ------------------------------------------------------------------------


def test_cf_pi_first_six_denominators(tmp_path):
    code, payload, _ = run(["cf", "const:pi", "--terms", "6"], tmp_path, "cfpi")
    assert code == 0
    assert payload["schema"] == 1
    assert not payload["capped"] and not payload["exact"]
    qs = [c["q"] for c in payload["convergents"]]
    assert qs == ["1", "7", "106", "113", "33102", "33215"]
    assert payload["partial_quotients"] == ["3", "7", "15", "1", "292", "1"]
    # dist enclosures must bracket the true distance |q*pi - a|
    pi200 = pi_fraction(120)
    for c in payload["convergents"][:4]:
        d = abs(int(c["q"]) * pi200 - int(c["a"]))
        assert Fraction(c["dist_lo"]) <= d <= Fraction(c["dist_hi"]), c


def test_cf_exact_rational(tmp_path):
    code, payload, _ = run(["cf", "rat:355/113", "--terms", "10"], tmp_path, "cfrat")
    assert code == 0
    assert payload["exact"] and not payload["capped"]
    assert payload["partial_quotients"] == ["3", "7", "16"]
    assert payload["convergents"][-1]["dist_lo"] == 0.0
    assert payload["convergents"][-1]["q"] == "113"


def test_cf_sqrt2_partial_quotients(tmp_path):
    code, payload, _ = run(
        ["cf", "surd:(0+1*sqrt(2))/1", "--terms", "5"], tmp_path, "cfsurd"
    )
    assert code == 0
    assert payload["partial_quotients"] == ["1", "2", "2", "2", "2"]


# -- sum -----------------------------------------------------------------------


def test_sum_trivial_alternating_value(tmp_path):
    code, payload, _ = run(
        ["sum", "rat:1/2", "--f", "pow:1", "--N", "0", "--M", "4"], tmp_path, "s0"
    )
    assert code == 0
    assert payload["results"]["direct"]["value"] == pytest.approx(-4.0 / 3.0, abs=1e-14)


def test_sum_both_modes_agree_closely(tmp_path):
    code, payload, _ = run(
        [
            "sum", "rat:1/4", "--f", "pow:1", "--N", "10000", "--M", "990000",
            "--mode", "both",
        ],
        tmp_path,
        "sboth",
    )
    assert code == 0
    assert payload["agree"]
    assert payload["difference"] <= 1e-10
    assert payload["difference"] <= payload["combined_bound"]


def test_sum_workers_do_not_change_the_value(tmp_path):
    argv = ["sum", "const:pi", "--f", "pow:1", "--N", "0", "--M", "50000"]
    _, one, _ = run(argv + ["--workers", "1"], tmp_path, "w1")
    _, four, _ = run(argv + ["--workers", "4"], tmp_path, "w4")
    assert one["results"]["direct"]["value"] == four["results"]["direct"]["value"]


def test_sum_trace_csv_shape(tmp_path):
    trace = tmp_path / "trace.csv"
    code, payload, mani = run(
        [
            "sum", "const:invpi", "--f", "pow:1", "--M", "4096",
            "--trace", str(trace),
        ],
        tmp_path,
        "strace",
    )
    assert code == 0
    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "M,S,rounding_bound"
    ms = [int(row.split(",")[0]) for row in lines[1:]]
    assert ms == sorted(ms) and ms[-1] == 4096
    final_s = float(lines[-1].split(",")[1])
    assert final_s == payload["results"]["direct"]["value"]
    assert str(trace) in mani["outputs"]
    assert payload["trace"] == str(trace)


def test_sum_periodic_needs_rational(tmp_path):
    code, payload, mani = run(
        ["sum", "const:pi", "--f", "pow:1", "--M", "100", "--mode", "periodic"],
        tmp_path,
        "sbadmode",
    )
    assert code == 1 and payload is None
    assert "rational" in mani["error"]


# -- drift ---------------------------------------------------------------------


def test_drift_q2_magnitude_and_sign(tmp_path):
    code, payload, _ = run(
        ["drift", "1", "2", "--f", "pow:1", "--N", "10000", "--M", "990000"],
        tmp_path,
        "d2",
    )
    assert code == 0
    assert payload["predicted"]["magnitude"] == pytest.approx(2.302585, abs=5e-6)
    assert payload["predicted"]["sign"] == -1
    assert payload["within_allowance"]
    assert payload["relative_magnitude_gap"] < 0.01


def test_drift_q4_against_quoted_target(tmp_path):
    code, payload, _ = run(
        ["drift", "1", "4", "--f", "pow:1", "--N", "10000", "--M", "990000"],
        tmp_path,
        "d4",
    )
    assert code == 0
    assert payload["predicted"]["magnitude"] == pytest.approx(0.476862, rel=0.01)
    assert payload["relative_magnitude_gap"] < 0.01


def test_drift_rejects_odd_q(tmp_path):
    code, payload, mani = run(
        ["drift", "1", "3", "--f", "pow:1", "--N", "10000", "--M", "1000"],
        tmp_path,
        "dodd",
    )
    assert code == 1 and payload is None and mani["error"]


# -- liouville -----------------------------------------------------------------


def test_liouville_factorial_levels(tmp_path):
    code, payload, _ = run(
        ["liouville", "--schedule", "factorial", "--terms", "4"], tmp_path, "lf"
    )
    assert code == 0
    assert payload["schedule"] == "factorial"
    levels = payload["levels"]
    assert [e["level"] for e in levels] == [1, 2, 3, 4]
    lam3 = levels[2]
    assert (lam3["lambda_num"], lam3["lambda_den"]) == ("110001", "1000000")
    assert lam3["q_even"] and lam3["verified_convergent"]
    assert lam3["verification"] == "expansion"
    # 1/10 is genuinely not a convergent of the full number
    assert not levels[0]["verified_convergent"]
    assert payload["qalpha"]
    assert payload["classify"] == {
        "outcome": "Diverges",
        "certificate": "LiouvilleFamily",
    }
    assert payload["error"] is None


def test_liouville_tower_structured_error(tmp_path):
    code, payload, mani = run(
        ["liouville", "--schedule", "tower100", "--terms", "3"], tmp_path, "lt"
    )
    assert code == 2
    assert payload["error"] and "e_3" in payload["error"]
    assert mani["error"] == payload["error"]
    levels = payload["levels"]
    assert [e["level"] for e in levels] == [1, 2]
    assert levels[1]["verification"] == "gap_bound"
    assert levels[1]["q_even"]
    # the next denominator dwarfs everything: 10^200-scale exponent
    assert levels[1]["q_next_log10_lower"] > 1e199


# -- reproducibility -----------------------------------------------------------


def test_payload_bytes_reproducible(tmp_path):
    out = tmp_path / "repro.json"
    argv = [
        "classify", "const:invpi", "--f", "pow:1", "--cert", "mahler",
        "--manifest", str(tmp_path / "m1.json"), "--json", str(out),
    ]
    assert console_main(argv) == 0
    first = out.read_bytes()
    assert console_main(argv) == 0
    assert out.read_bytes() == first


def _strip_durations(obj):
    if isinstance(obj, dict):
        return {
            k: _strip_durations(v) for k, v in obj.items() if "duration" not in k
        }
    if isinstance(obj, list):
        return [_strip_durations(v) for v in obj]
    return obj


def test_manifest_reproducible_up_to_duration(tmp_path):
    mani_path = tmp_path / "m.json"
    argv = [
        "sum", "rat:1/3", "--f", "pow:1", "--M", "1000",
        "--manifest", str(mani_path), "--json", str(tmp_path / "o.json"),
    ]
    assert console_main(argv) == 0
    first = _strip_durations(json.loads(mani_path.read_text()))
    assert console_main(argv) == 0
    second = _strip_durations(json.loads(mani_path.read_text()))
    assert first == second


def test_payload_goes_to_stdout_without_json_flag(tmp_path, capsys):
    code = console_main(
        ["cf", "rat:22/7", "--terms", "4", "--manifest", str(tmp_path / "m.json")]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema"] == 1 and payload["exact"]
