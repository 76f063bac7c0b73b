import json
import math
import os

import numpy as np
import pytest

from umaxpro import fileio
from umaxpro.cli import main
from umaxpro.criteria import CriterionSpec
from umaxpro.design import Design
from umaxpro.fileio import (
    DesignFileError,
    design_to_text,
    parse_design_text,
    read_design,
    read_metadata,
    read_table,
    write_design,
)


def gen(tmp_path, *extra, name="out"):
    out = tmp_path / name
    argv = ["generate", "--nsim", "8", "--nvar", "3", "--runs", "2", "--seed", "7",
            "--out", str(out), *extra]
    assert main(argv) == 0
    return out


# -- file format ----------------------------------------------------------------


def test_design_text_round_trip_bitwise():
    pts = np.random.default_rng(0).random((20, 4))
    pts[0, 0] = 0.1
    pts[1, 1] = 5e-324
    back = parse_design_text(design_to_text(pts))
    assert np.array_equal(back.points, pts)


def test_parse_errors_name_line():
    with pytest.raises(DesignFileError, match=":2:"):
        parse_design_text("0.1,0.2\n0.3,abc\n", "f.csv")
    with pytest.raises(DesignFileError, match=":3:"):
        parse_design_text("0.1,0.2\n0.3,0.4\n0.5\n", "f.csv")
    with pytest.raises(DesignFileError, match="empty"):
        parse_design_text("\n\n", "f.csv")
    with pytest.raises(DesignFileError):
        parse_design_text("0.1\n1.5\n", "f.csv")


def test_sidecar(tmp_path):
    D = Design(np.array([[0.25], [0.75]]))
    write_design(tmp_path / "d.csv", D, {"seed": 3})
    assert read_design(tmp_path / "d.csv") == D
    assert read_metadata(tmp_path / "d.csv") == {"seed": 3}


# -- generate --------------------------------------------------------------------


def test_generate_files_and_determinism(tmp_path):
    out = tmp_path / "a"
    argv = ["generate", "--criterion", "umaxpro", "--nsim", "16", "--nvar", "3",
            "--runs", "4", "--seed", "7", "--out", str(out)]
    assert main(argv) == 0
    csvs = sorted(out.glob("*.csv"))
    assert len(csvs) == 4 and len(list(out.glob("*.json"))) == 4
    assert csvs[0].name == "umaxpro_n16_d3_r0000.csv"
    first = {p.name: p.read_bytes() for p in csvs}
    argv[-1] = str(tmp_path / "b")
    assert main(argv) == 0
    second = {p.name: p.read_bytes() for p in (tmp_path / "b").glob("*.csv")}
    assert first == second


def test_generate_metadata(tmp_path):
    out = gen(tmp_path, "--criterion", "maxpro")
    meta = read_metadata(next(out.glob("*.csv")))
    assert meta["metric"] == "intersite"
    for key in ("n_sim", "n_var", "criterion", "schedule", "seed", "run", "objective", "wd2", "version"):
        assert key in meta
    assert meta["schedule"]["alpha"] == 0.95
    assert meta["schedule"]["moves_per_temperature"] == 20 * 8 * 3


def test_metadata_regenerates_design(tmp_path):
    from umaxpro.annealer import Schedule, optimize_run
    from umaxpro.design import realize

    out = gen(tmp_path)
    path = sorted(out.glob("*.csv"))[1]
    meta = read_metadata(path)
    s = meta["schedule"]
    res = optimize_run(meta["n_sim"], meta["n_var"], CriterionSpec(meta["criterion"]),
                       Schedule(alpha=s["alpha"], moves_per_temperature=s["moves_per_temperature"],
                                stall_limit=s["stall_limit"]),
                       meta["seed"], meta["run"])
    assert realize(res.best) == read_design(path)
    assert np.array_equal(res.best.levels, np.array(meta["levels"]))


@pytest.mark.parametrize("crit", ["maximin", "pmaximin", "mm"])
def test_generate_other_criteria(tmp_path, crit):
    out = gen(tmp_path, "--criterion", crit)
    meta = read_metadata(next(out.glob("*.csv")))
    assert meta["criterion"] in ("maximin", "periodic_maximin", "morris_mitchell")


def test_generate_usage_errors(tmp_path):
    assert main(["generate", "--nsim", "1", "--nvar", "2", "--out", str(tmp_path)]) == 2
    assert main(["generate", "--nsim", "4", "--nvar", "2", "--alpha", "1.5", "--out", str(tmp_path)]) == 2
    assert main(["generate", "--nsim", "4", "--nvar", "2", "--criterion", "maxpro",
                 "--metric", "periodic", "--out", str(tmp_path)]) == 2
    assert main(["generate", "--nsim", "4"]) == 2


def test_unwritable_output_exit_1(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["generate", "--nsim", "4", "--nvar", "2", "--out", str(blocker / "sub")]) == 1


def test_config_overrides_and_rejects_unknown(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"runs": 3, "seed": 11}))
    out = tmp_path / "o"
    assert main(["generate", "--nsim", "6", "--nvar", "2", "--out", str(out), "--config", str(cfg)]) == 0
    assert len(list(out.glob("*.csv"))) == 3
    assert read_metadata(next(out.glob("*.csv")))["seed"] == 11
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["generate", "--nsim", "6", "--nvar", "2", "--out", str(out), "--config", str(cfg)]) == 2


# -- evaluate ---------------------------------------------------------------------


def test_evaluate_reproduces_objective(tmp_path):
    out = gen(tmp_path)
    files = sorted(str(p) for p in out.glob("*.csv"))
    report = tmp_path / "eval.csv"
    assert main(["evaluate", *files, "--out", str(report)]) == 0
    rows = read_table(report)
    assert len(rows) == 2
    for row, f in zip(rows, files):
        meta = read_metadata(f)
        assert float(row["umaxpro"]) == pytest.approx(meta["objective"], rel=1e-9)
        assert float(row["wd2_squared"]) == pytest.approx(meta["wd2_squared"], rel=1e-12)


def test_evaluate_subspaces(tmp_path):
    out = tmp_path / "d"
    assert main(["generate", "--nsim", "6", "--nvar", "5", "--out", str(out)]) == 0
    report = tmp_path / "eval.csv"
    assert main(["evaluate", str(next(out.glob("*.csv"))), "--subspaces", "2", "--out", str(report)]) == 0
    rows = read_table(report)
    assert len(rows) == 11 and sum(r["subspace"] != "all" for r in rows) == 10


def test_evaluate_errors(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["evaluate", str(empty)]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("0.1,0.2\n0.2,zz\n")
    assert main(["evaluate", str(bad)]) == 2
    assert "bad.csv:2" in capsys.readouterr().err
    assert main(["evaluate", str(tmp_path / "missing.csv")]) == 1


def test_evaluate_stdout(tmp_path, capsys):
    out = gen(tmp_path)
    assert main(["evaluate", str(next(out.glob("*.csv")))]) == 0
    assert capsys.readouterr().out.startswith("file,subspace")


# -- histogram --------------------------------------------------------------------


def test_histogram_directory_equals_regeneration(tmp_path):
    designs = tmp_path / "designs"
    assert main(["generate", "--nsim", "6", "--nvar", "2", "--runs", "5", "--seed", "3",
                 "--out", str(designs)]) == 0
    a, b = tmp_path / "ha", tmp_path / "hb"
    assert main(["histogram", "--from", str(designs), "--out", str(a)]) == 0
    assert main(["histogram", "--nsim", "6", "--nvar", "2", "--runs", "5", "--seed", "3",
                 "--out", str(b)]) == 0
    assert (a / "bins.csv").read_bytes() == (b / "bins.csv").read_bytes()
    assert (a / "radial.csv").read_bytes() == (b / "radial.csv").read_bytes()
    rep = json.loads((b / "report.json").read_text())
    assert rep["n_run"] == 5 and "delta" in rep and len(rep["histograms"]) == 1
    assert len(read_table(b / "bins.csv")) == 36


def test_histogram_subspaces(tmp_path):
    out = tmp_path / "h"
    assert main(["histogram", "--nsim", "5", "--nvar", "3", "--runs", "2", "--subspaces", "2",
                 "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert [h["dims"] for h in rep["histograms"]] == ["0-1", "0-2", "1-2"]


def test_histogram_needs_sizes(tmp_path):
    assert main(["histogram", "--out", str(tmp_path)]) == 2
    assert main(["histogram", "--from", str(tmp_path), "--out", str(tmp_path)]) == 2


# -- benchmark --------------------------------------------------------------------


def test_benchmark_tables(tmp_path):
    out = tmp_path / "b"
    assert main(["benchmark", "--function", "product_exp", "--nvar", "2", "--methods", "srs,lhs,umaxpro",
                 "--nsim", "4,8", "--runs", "6", "--out", str(out)]) == 0
    runs = read_table(out / "runs.csv")
    summary = read_table(out / "summary.csv")
    assert len(runs) == 3 * 2 * 6 and len(summary) == 6
    for row in summary:
        assert float(row["exact"]) == pytest.approx(1 / 3, rel=1e-15)
        est = [float(r["estimate"]) for r in runs
               if r["method"] == row["method"] and r["n_sim"] == row["n_sim"]]
        assert float(row["rmse"]) == pytest.approx(math.sqrt(np.mean((np.array(est) - 1 / 3) ** 2)), rel=1e-12)
        assert float(row["mean"]) == pytest.approx(np.mean(est), rel=1e-12)


def test_benchmark_engineering_redundant_dimension(tmp_path):
    out = tmp_path / "b"
    assert main(["benchmark", "--function", "short_column", "--sampler", "lhs", "--nsim", "8",
                 "--runs", "3", "--export-samples", "--out", str(out)]) == 0
    runs = read_table(out / "runs.csv")
    assert {r["subspace"] for r in runs} == {"0-1-2"}
    assert read_table(out / "summary.csv")[0]["exact"] == ""
    samples = sorted((out / "samples").glob("*.csv"))
    assert len(samples) == 3
    assert list(read_table(samples[0])[0]) == ["u0", "u1", "u2", "x0", "x1", "x2", "y"]
    out2 = tmp_path / "c"
    assert main(["benchmark", "--function", "cantilever_displacement", "--sampler", "srs",
                 "--nsim", "8", "--runs", "2", "--drop-dim", "0", "--out", str(out2)]) == 0
    assert {r["subspace"] for r in read_table(out2 / "runs.csv")} == {"1-2-3-4"}


def test_benchmark_subspaces(tmp_path):
    out = tmp_path / "b"
    assert main(["benchmark", "--nvar", "4", "--subspaces", "2", "--methods", "halton",
                 "--nsim", "8", "--runs", "3", "--out", str(out)]) == 0
    summary = read_table(out / "summary.csv")
    assert len(summary) == 7 and summary[-1]["subspace"] == "pooled"
    assert float(summary[0]["exact"]) == pytest.approx(1 / 3)


def test_benchmark_errors(tmp_path):
    assert main(["benchmark", "--methods", "sobol", "--out", str(tmp_path)]) == 2
    assert main(["benchmark", "--function", "short_column", "--nvar", "2", "--out", str(tmp_path)]) == 2


def test_interrupted_write_leaves_no_summary(tmp_path, monkeypatch):
    out = tmp_path / "b"

    def boom(src, dst):
        raise OSError("disk went away")

    monkeypatch.setattr(fileio.os, "replace", boom)
    assert main(["benchmark", "--methods", "srs", "--nsim", "4", "--runs", "2", "--out", str(out)]) == 1
    assert not (out / "summary.csv").exists()
    assert os.listdir(out) == []
