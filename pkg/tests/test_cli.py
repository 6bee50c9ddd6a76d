"""Command-line interface: exit codes, determinism, config handling.

The CLI is driven in-process through main(argv); stdout is captured by
pytest.  Oracles are the library calls the commands wrap.
"""

import json

import pytest

from cyclemeter.cli import (EXIT_MATH, EXIT_OK, EXIT_TREND, EXIT_USAGE, main)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_hn_exact_json(capsys):
    code, out, _ = run_cli(capsys, "hn", "--family", "ewens", "--theta", "2",
                           "--n-grid", "3,10")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["backend"] == "exact"
    assert [row["h"] for row in doc["rows"]] == ["4", "11"]
    assert doc["rows"][1]["ratio"] == pytest.approx(1.1, rel=1e-12)


def test_hn_csv_format(capsys):
    code, out, _ = run_cli(capsys, "hn", "--family", "ewens", "--theta", "1",
                           "--n", "5", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "n,h,asymptotic,ratio"
    assert lines[1].startswith("5,1,")


def test_dist_oracle_match(capsys):
    code, out, _ = run_cli(capsys, "dist", "--family", "ewens", "--theta", "1",
                           "--target", "k", "--n", "4", "--oracle")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["oracle"] == "match"
    assert doc["support"] == [1, 2, 3, 4]
    assert doc["mass"][0] == "1/4"


def test_dist_cycles_target(capsys):
    code, out, _ = run_cli(capsys, "dist", "--family", "ewens", "--theta", "2",
                           "--target", "cycles", "--n", "5", "--b", "2",
                           "--oracle")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["b"] == 2
    assert all(len(key) == 2 for key in doc["support"])


def test_sample_deterministic_bytes(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        code = main(["sample", "--family", "ewens", "--theta", "2", "--n", "12",
                     "--count", "4", "--seed", "9", "--output", str(path)])
        assert code == EXIT_OK
    capsys.readouterr()
    assert paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    assert len(doc["samples"]) == 4
    for img in doc["samples"]:
        assert sorted(img) == list(range(1, 13))


def test_report_csv_deterministic(capsys):
    args = ("report", "--family", "ewens", "--theta", "2", "--kind",
            "poisson-vector", "--b", "2", "--n-grid", "25,50", "--format", "csv")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
    assert out1.startswith("n,metric,value,reference_rate_value\n")


def test_config_file_family(tmp_path, capsys):
    cfg = tmp_path / "families.ini"
    cfg.write_text("""
[bent]
kind = theta-shift
theta = 1
amp = 1
power = 2

[grid2]
kind = spatial
decays = 1,1/2
""")
    code, out, _ = run_cli(capsys, "hn", "--family", "bent", "--config",
                           str(cfg), "--n", "6")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["backend"] == "exact"
    code, out, _ = run_cli(capsys, "dist", "--family", "grid2", "--config",
                           str(cfg), "--target", "k", "--n", "6", "--oracle")
    assert code == EXIT_OK
    assert json.loads(out)["oracle"] == "match"


def test_unknown_family_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "hn", "--family", "nope", "--n", "4")
    assert code == EXIT_USAGE
    assert "error" in err


def test_sample_generalized_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "sample", "--family", "exp-poly",
                           "--theta", "1", "--n", "5")
    assert code == EXIT_USAGE


def test_report_without_class_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "report", "--family", "polylog",
                           "--delta=-1/2", "--kind", "clt",
                           "--n-grid", "20,40")
    assert code == EXIT_USAGE


def test_trend_assertion_failure(capsys):
    # Deliberately descending grid: the distances then rise along it.
    code, _, err = run_cli(capsys, "report", "--family", "ewens", "--theta",
                           "2", "--kind", "poisson-vector", "--b", "2",
                           "--n-grid", "100,25", "--assert-trends")
    assert code == EXIT_TREND
    assert "trend" in err


def test_trend_assertion_passes_on_ascending_grid(capsys):
    code, _, _ = run_cli(capsys, "report", "--family", "ewens", "--theta",
                         "2", "--kind", "poisson-vector", "--b", "2",
                         "--n-grid", "25,100", "--assert-trends")
    assert code == EXIT_OK


def test_large_dev_report(capsys):
    code, out, _ = run_cli(capsys, "report", "--family", "ewens", "--theta",
                           "1", "--kind", "large-dev", "--n", "500",
                           "--assert-trends")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["table"]["rel_error"] <= 0.25


def test_oracle_mismatch_is_math_error(monkeypatch, capsys):
    # The --oracle tripwire: a disagreeing reference must exit 3.
    from fractions import Fraction

    from cyclemeter.pmf import Pmf
    import cyclemeter.cli as cli_mod

    def wrong_oracle(theta, n, backend="exact"):
        return Pmf({1: Fraction(1)})

    monkeypatch.setattr(cli_mod, "brute_force_k_pmf", wrong_oracle)
    code, _, err = run_cli(capsys, "dist", "--family", "ewens", "--theta", "1",
                           "--target", "k", "--n", "4", "--oracle")
    assert code == EXIT_MATH
    assert "mismatch" in err


def test_sample_single_point_identity(capsys):
    code, out, _ = run_cli(capsys, "sample", "--family", "ewens", "--theta",
                           "1", "--n", "1", "--count", "3")
    assert code == EXIT_OK
    assert json.loads(out)["samples"] == [[1], [1], [1]]


def test_large_dev_k_spec_forms(capsys):
    base = ("report", "--family", "ewens", "--theta", "1", "--kind",
            "large-dev", "--n", "300")
    code, out, _ = run_cli(capsys, *base, "--k", "auto+2sigma")
    assert code == EXIT_OK
    auto_k = json.loads(out)["table"]["k"]
    code, out, _ = run_cli(capsys, *base, "--k", str(auto_k))
    assert code == EXIT_OK
    assert json.loads(out)["table"]["k"] == auto_k
    code, _, _ = run_cli(capsys, *base, "--k", "about-three")
    assert code == EXIT_USAGE


def test_missing_n_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "hn", "--family", "ewens", "--theta", "1")
    assert code == EXIT_USAGE


def test_exp_poly_dist(capsys):
    code, out, _ = run_cli(capsys, "dist", "--family", "exp-poly", "--theta",
                           "1", "--n", "4", "--oracle")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["mass"] == ["1/4", "11/24", "1/4", "1/24"]
