import json
import os
import re

import jsonschema
import numpy as np
import pytest

from hlmlab import cli, linsys
from importlib import resources

SCHEMA = json.loads(
    resources.files("hlmlab").joinpath("schemas/report.schema.json").read_text()
)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    return report


def test_singular_subcommand(capsys):
    report = run_json(capsys, "singular", "--system", "1,-2,1", "--p-max", "2000")
    assert report["results"]["product"] == pytest.approx(
        4 * linsys.closed_form_S3(2000), rel=1e-9
    )
    assert report["results"]["factors"][0] == [2, 2, 1]


def test_count_subcommand_small(capsys):
    report = run_json(capsys, "count", "--k", "3", "--n", "20")
    assert report["results"]["observed"] == 5.0
    assert report["N"] == 20


def test_degenerate_system_exit_code(capsys):
    code, _, err = run_cli(capsys, "singular", "--system", "1,-2,1;2,-4,2")
    assert code == 2
    assert "rank deficient" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["not-a-command"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "--n", "100", "--mode", "bogus"])
    assert exc.value.code == 1


def test_sieve_expsum_arcs(capsys, tmp_path):
    report = run_json(capsys, "sieve", "--n", "1000")
    assert report["results"]["pi"] == 168
    report = run_json(
        capsys, "expsum", "--n", "10000", "--theta", "0", "--weights", "mobius"
    )
    assert abs(report["results"]["values"][0]["re"]) < 0.01  # Mertens(1e4)/1e4
    report = run_json(
        capsys, "arcs", "--n", "1000000", "--thetas", "0.3333333333,0.41421356"
    )
    assert [r["verdict"] for r in report["results"]] == ["major", "minor"]


def test_typesums_subcommand(capsys):
    report = run_json(
        capsys, "typesums", "--n", "10000", "--d", "10", "--phase", "1.41421356237"
    )
    assert report["results"]["type1"] <= 0.05 * 10000
    report = run_json(
        capsys, "typesums", "--n", "4096", "--d", "32", "--w", "32", "--weights", "mobius"
    )
    assert report["results"]["type2"] > 0


def test_gowers_and_nilseq_subcommands(capsys, tmp_path):
    report = run_json(capsys, "gowers", "--m", "32", "--k", "3", "--seed", "9")
    assert 0 < report["results"]["value"] < 1
    path = tmp_path / "f.csv"
    np.savetxt(path, np.ones(16))
    report = run_json(capsys, "gowers", "--k", "2", "--input", str(path))
    assert report["results"]["value"] == pytest.approx(1.0)

    report = run_json(
        capsys, "nilseq", "--alpha-g", "1.41421356", "--gamma-g", "1.7320508",
        "--n", "100", "--character", "vertical:1",
    )
    assert len(report["results"]["head"]) == 10
    assert report["results"]["lipschitz_estimate"] > 0


def test_count_sweep_csv_mode(capsys):
    code, out, _ = run_cli(
        capsys, "count", "--k", "3", "--sweep", "500,1000", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,descriptor,observed,predicted,ratio,method"
    assert len(lines) == 3
    assert lines[2].startswith("1000,3-AP,1500.0,")


def test_gowers_table_weights(capsys):
    report = run_json(capsys, "gowers", "--m", "101", "--k", "2", "--weights", "mobius")
    assert 0 < report["results"]["value"] < 1


def test_mobius_corr_subcommand(capsys):
    report = run_json(capsys, "mobius-corr", "--n", "10000")
    assert len(report["results"]) == 5
    assert all(v < 0.1 for v in report["results"].values())


def test_obstruction_subcommand(capsys, tmp_path):
    bits = tmp_path / "a1.bits"
    report = run_json(
        capsys, "obstruction", "--kind", "A1", "--n", "5000", "--alpha", "0.1",
        "--bitset", str(bits),
    )
    assert report["results"]["density"] == pytest.approx(0.1, abs=0.02)
    assert bits.stat().st_size == 625


def test_csv_format(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "--n", "1000", "--theta", "0.5", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,re,im,abs"
    assert len(lines) == 2


def test_report_determinism(capsys, tmp_path):
    args = ["count", "--k", "3", "--n", "500", "--seed", "42"]
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    assert cli.main(args + ["--out", str(out_a)]) == 0
    assert cli.main(args + ["--out", str(out_b)]) == 0
    capsys.readouterr()
    strip = lambda text: re.sub(r'"timestamp": "[^"]*"', '"timestamp": null', text)
    assert strip(out_a.read_text()) == strip(out_b.read_text())


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=1000\nk=3\n")
    report = run_json(capsys, "count", "--config", str(cfg))
    assert report["N"] == 1000
    report = run_json(capsys, "count", "--config", str(cfg), "--n", "20")
    assert report["N"] == 20 and report["results"]["observed"] == 5.0


def test_data_dir_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HLM_DATA_DIR", str(tmp_path))
    report_first = run_json(capsys, "sieve", "--n", "2000")
    cache = tmp_path / "table_2000.bin"
    assert cache.exists()
    report_second = run_json(capsys, "sieve", "--n", "2000")
    assert report_first["results"] == report_second["results"]


def test_acceptance_filter_and_exit(capsys, tmp_path):
    report_path = tmp_path / "acc.json"
    code, out, _ = run_cli(
        capsys, "acceptance", "--only", "A1", "--out", str(report_path)
    )
    assert code == 0
    assert "PASS A1" in out
    report = json.loads(report_path.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["results"][0]["passed"] is True
    code, _, err = run_cli(capsys, "acceptance", "--only", "nope")
    assert code == 1


def test_acceptance_mutation_fails(capsys, monkeypatch):
    from hlmlab import acceptance as acc

    monkeypatch.setattr(acc.linsys, "closed_form_S3", lambda P0: -1.0)
    code, out, _ = run_cli(capsys, "acceptance", "--only", "A1")
    assert code == 3
    assert "FAIL A1" in out
