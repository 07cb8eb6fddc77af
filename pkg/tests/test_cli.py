"""Command-line interface: output shapes, config merge, exit codes."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from patred.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def test_metrics_single_json(runner, wedge_csv, tmp_path, walk_csv):
    cand = tmp_path / "cand.csv"
    lines = walk_csv.read_text().splitlines()
    cand.write_text("\n".join([lines[0]] + lines[31:43]) + "\n")
    res = invoke(runner, "metrics", "--pattern", wedge_csv, "--candidate", cand,
                 "--metric", "nmi", "--redundancy", "arealine", "--n", "10")
    assert res.exit_code == 0, res.output
    body = json.loads(res.output)
    assert body["metric"] == "nmi"
    assert body["mode"] == "raster"
    assert 0.0 <= body["value"] <= 1.0


def test_metrics_all_reports_incompatible_combos(runner, wedge_csv, tmp_path, walk_csv):
    cand = tmp_path / "cand.csv"
    lines = walk_csv.read_text().splitlines()
    cand.write_text("\n".join([lines[0]] + lines[20:32]) + "\n")
    res = invoke(runner, "metrics", "--pattern", wedge_csv, "--candidate", cand,
                 "--metric", "all", "--redundancy", "cloud", "--n", "3")
    assert res.exit_code == 0, res.output
    body = json.loads(res.output)
    assert len(body) == 9
    errors = {e["metric"] for e in body if "error" in e}
    assert errors == {"manhattan", "euclidean", "pearson"}


def test_search_writes_matches_file(runner, wedge_csv, walk_csv, tmp_path):
    out = tmp_path / "matches.json"
    res = invoke(runner, "search", "--pattern", wedge_csv, "--data", walk_csv,
                 "--window-length", "12", "--metric", "nmi",
                 "--redundancy", "arealine", "--n", "10", "--top-k", "3",
                 "--out", out)
    assert res.exit_code == 0, res.output
    body = json.loads(out.read_text())
    assert [m["rank"] for m in body["matches"]] == [1, 2, 3]
    assert body["request"]["metric"] == "nmi"


def test_mid_consumes_matches(runner, wedge_csv, walk_csv, tmp_path):
    matches = tmp_path / "matches.json"
    invoke(runner, "search", "--pattern", wedge_csv, "--data", walk_csv,
           "--window-length", "12", "--top-k", "3", "--out", matches)
    res = invoke(runner, "mid", "--matches", matches)
    assert res.exit_code == 0, res.output
    points = json.loads(res.output)["points"]
    assert points[0]["label"] == "P_o"
    assert points[0]["angle"] == 0.0
    assert len(points) == 4


def test_perturb_emits_plain_csv(runner, walk_csv):
    res = invoke(runner, "perturb", "--data", walk_csv, "--which", "shift2",
                 "--seed", "7")
    assert res.exit_code == 0, res.output
    lines = res.output.strip().splitlines()
    assert lines[0] == "value"
    values = [float(x) for x in lines[1:]]  # every cell must parse
    assert len(values) == 120
    assert "np.float64" not in res.output


def test_perturb_unknown_kind_is_usage_error(runner, walk_csv):
    res = invoke(runner, "perturb", "--data", walk_csv, "--which", "wat")
    assert res.exit_code == 2
    assert "unknown perturbation" in res.output


def test_search_pattern_longer_than_data_exits_2(runner, wedge_csv, tmp_path):
    short = tmp_path / "short.csv"
    short.write_text("value\n" + "".join(f"{v}\n" for v in range(8)))
    res = invoke(runner, "search", "--pattern", wedge_csv, "--data", short,
                 "--window-length", "40")
    assert res.exit_code == 2
    assert "exceeds series length" in res.output


def test_search_capability_clash_exits_2(runner, wedge_csv, walk_csv):
    res = invoke(runner, "search", "--pattern", wedge_csv, "--data", walk_csv,
                 "--metric", "pearson", "--redundancy", "cloud", "--n", "2")
    assert res.exit_code == 2
    assert "same number of data points" in res.output


def test_missing_input_file_exits_2(runner, wedge_csv):
    res = invoke(runner, "search", "--pattern", wedge_csv, "--data",
                 "/definitely/not/here.csv")
    assert res.exit_code == 2
    assert "no such file" in res.output


def test_config_file_supplies_defaults_flags_win(runner, wedge_csv, tmp_path, walk_csv):
    cand = tmp_path / "cand.csv"
    lines = walk_csv.read_text().splitlines()
    cand.write_text("\n".join([lines[0]] + lines[5:17]) + "\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"metric": "jaccard", "redundancy": "equidistant",
                               "n": 4}))
    res = invoke(runner, "metrics", "--pattern", wedge_csv, "--candidate", cand,
                 "--config", cfg)
    assert json.loads(res.output)["metric"] == "jaccard"
    res = invoke(runner, "metrics", "--pattern", wedge_csv, "--candidate", cand,
                 "--config", cfg, "--metric", "dice")
    assert json.loads(res.output)["metric"] == "dice"


def test_config_rejects_unknown_keys(runner, wedge_csv, tmp_path, walk_csv):
    cand = tmp_path / "cand.csv"
    lines = walk_csv.read_text().splitlines()
    cand.write_text("\n".join([lines[0]] + lines[5:17]) + "\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"wat": 1}))
    res = invoke(runner, "metrics", "--pattern", wedge_csv, "--candidate", cand,
                 "--config", cfg)
    assert res.exit_code == 2
    assert "unknown config key" in res.output


def test_eval_without_truth_leaves_agreement_empty(runner, walk_csv, tmp_path):
    out = tmp_path / "sweep.csv"
    res = invoke(runner, "eval", "--data", walk_csv, "--metrics", "nmi",
                 "--kinds", "equidistant", "--n-values", "0,1", "--seed", "7",
                 "--out", out)
    assert res.exit_code == 0, res.output
    lines = out.read_text().splitlines()
    assert lines[0].endswith("r2,f1,seq_nmi")
    assert len(lines) == 1 + 2 * 108
    assert all(line.endswith(",,,") for line in lines[1:])


def test_eval_same_seed_byte_identical(runner, walk_csv, tmp_path):
    args = ("eval", "--data", walk_csv, "--metrics", "nmi,manhattan",
            "--kinds", "equidistant", "--n-values", "0,2", "--seed", "9")
    a = invoke(runner, *args, "--out", tmp_path / "a.csv")
    b = invoke(runner, *args, "--out", tmp_path / "b.csv")
    assert a.exit_code == 0 and b.exit_code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_eval_magnitude_study_table(runner, walk_csv, tmp_path):
    res = invoke(runner, "eval", "--data", walk_csv, "--study", "magnitude",
                 "--metrics", "nmi,manhattan", "--seed", "7")
    assert res.exit_code == 0, res.output
    lines = res.output.strip().splitlines()
    assert lines[0] == "metric,n0,n1,min,max"
    assert {line.split(",")[0] for line in lines[1:]} == {"manhattan", "nmi"}


def test_search_figures_svg(runner, wedge_csv, walk_csv, tmp_path):
    figures = tmp_path / "figs"
    res = invoke(runner, "search", "--pattern", wedge_csv, "--data", walk_csv,
                 "--window-length", "12", "--top-k", "3",
                 "--figures", figures, "--out", tmp_path / "m.json")
    assert res.exit_code == 0, res.output
    svg = (figures / "matches.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_serve_openapi_only(runner, tmp_path):
    out = tmp_path / "openapi.json"
    res = invoke(runner, "serve", "--openapi-only", "--out", out)
    assert res.exit_code == 0, res.output
    schema = json.loads(out.read_text())
    assert "/search" in schema["paths"]
