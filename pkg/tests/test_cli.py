import csv
import json
import subprocess
import sys

import pytest

from helpers import M1_X, M1_Y, M2_X, M2_Y
from mlndecouple import LayerGraph, save_edge_list
from mlndecouple.bench import CSV_FIELDS, read_rows
from mlndecouple.cli import main


def dataset(root, name, n, ex, ey):
    d = root / name
    d.mkdir(parents=True)
    save_edge_list(LayerGraph.from_edges(n, ex), d / "L1.edges")
    save_edge_list(LayerGraph.from_edges(n, ey), d / "L2.edges")
    (d / "meta.json").write_text(json.dumps({"id": name, "n": n}))
    return d


@pytest.fixture
def g1(tmp_path):
    return dataset(tmp_path, "g1", 4, M1_X, M1_Y)


@pytest.fixture
def g2(tmp_path):
    return dataset(tmp_path, "g2", 4, M2_X, M2_Y)


def rows_of(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_run_degree_m1(g1, tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", str(g1), "--methods", "naive,dc-a1,dc-a2", "--kind", "degree", "--out", str(out)]) == 0
    rows = {r["method"]: r for r in rows_of(out)}
    assert list(rows) == ["dc-a1", "dc-a2", "naive-or"]
    assert float(rows["naive-or"]["jaccard"]) == 1.0
    assert float(rows["dc-a1"]["jaccard"]) == pytest.approx(2 / 3)
    assert float(rows["dc-a2"]["precision"]) == 1.0
    for r in rows.values():
        assert int(r["edges_agg"]) == 4
        decoupled = float(r["psi_time_max"]) + float(r["theta_time"])
        assert float(r["speedup"]) == pytest.approx(float(r["gt_time"]) / decoupled, rel=0.05, abs=1e-3)
    summary = json.loads((tmp_path / "r.json").read_text())
    assert summary["summaries"]["dc-a1"]["gain"] == pytest.approx(-1 / 3)


def test_run_precision_methods(g1, tmp_path):
    out = tmp_path / "p.csv"
    assert main(["run", str(g1), "--methods", "dc-p1,dc-p2", "--out", str(out)]) == 0
    for r in rows_of(out):
        assert float(r["precision"]) == 1.0
        assert float(r["recall"]) == pytest.approx(2 / 3)


def test_run_closeness_m2(g2, tmp_path):
    out = tmp_path / "c.csv"
    assert main(["--threads", "2", "run", str(g2), "--methods", "naive,cc1,cc2", "--kind", "closeness", "--out", str(out)]) == 0
    rows = {r["method"]: r for r in rows_of(out)}
    assert float(rows["cc2"]["jaccard"]) == pytest.approx(2 / 3)
    assert float(rows["cc1"]["jaccard"]) == pytest.approx(1 / 3)
    assert float(rows["naive-and"]["jaccard"]) == pytest.approx(1 / 3)


def test_run_kind_mismatch(g1, capsys):
    assert main(["run", str(g1), "--methods", "cc2", "--kind", "degree"]) == 1
    assert "closeness" in capsys.readouterr().err
    assert main(["run", str(g1), "--methods", "nope"]) == 1


def test_run_unreadable_dataset(tmp_path):
    assert main(["run", str(tmp_path / "missing"), "--methods", "naive"]) == 2
    bad = dataset(tmp_path, "bad", 4, M1_X, M1_Y)
    (bad / "L2.edges").write_text("0 1\nzero two\n")
    assert main(["run", str(bad), "--methods", "naive"]) == 2


def test_run_info_sweep(g1, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["run", str(g1), "--methods", "dc-a2-info", "--info-fraction", "0,0.25,0.5,0.75,1", "--out", str(out)]) == 0
    rows = rows_of(out)
    assert [r["params"] for r in rows] == ["f=0", "f=0.25", "f=0.5", "f=0.75", "f=1"]
    js = [float(r["jaccard"]) for r in rows]
    assert all(b >= a for a, b in zip(js, js[1:]))
    assert js[-1] == 1.0


def test_run_threads_do_not_change_metrics(g1, g2, tmp_path):
    cols = ["dataset_id", "method", "params", "jaccard", "precision", "recall", "tp", "fp", "fn"]
    res = []
    for t in ("1", "4"):
        out = tmp_path / f"t{t}.csv"
        assert main(["run", str(g1), str(g2), "--methods", "naive,dc-a1,dc-a2,dc-p1", "--threads", t, "--out", str(out)]) == 0
        res.append([[r[c] for c in cols] for r in rows_of(out)])
    assert res[0] == res[1]


def test_run_stdout_formats(g1, capsys):
    assert main(["run", str(g1), "--methods", "naive", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rows"][0]["method"] == "naive-or"
    assert main(["run", str(g1), "--methods", "naive"]) == 0
    assert capsys.readouterr().out.splitlines()[0].split(",") == CSV_FIELDS


def test_gt_cap(g1, tmp_path):
    out = tmp_path / "cap.csv"
    assert main(["run", str(g1), "--methods", "naive", "--gt-cap", "2", "--out", str(out)]) == 0
    (r,) = rows_of(out)
    assert r["jaccard"] == "" and r["gt_time"] == ""


def test_analyze_and_compose(tmp_path, capsys):
    x, y = tmp_path / "x.edges", tmp_path / "y.edges"
    save_edge_list(LayerGraph.from_edges(4, M1_X), x)
    save_edge_list(LayerGraph.from_edges(4, M1_Y), y)
    ax, ay = tmp_path / "x.npz", tmp_path / "y.npz"
    assert main(["analyze", str(x), "--retain", "hubs", "--n", "4", "--out", str(ax)]) == 0
    assert main(["analyze", str(y), "--retain", "hubs", "--n", "4", "--out", str(ay)]) == 0
    out = tmp_path / "hubs.txt"
    assert main(["compose", str(ax), str(ay), "--method", "dc-p1", "--out", str(out)]) == 0
    assert out.read_text() == "0\n1\n"
    rec = json.loads((tmp_path / "hubs.txt.json").read_text())
    assert rec["method"] == "dc-p1" and "theta_time" in rec and "params" in rec
    capsys.readouterr()
    assert main(["compose", str(ax), str(ay), "--method", "naive"]) == 0
    assert capsys.readouterr().out == "0\n1\n2\n"
    # closeness method on degree artifacts
    assert main(["compose", str(ax), str(ay), "--method", "cc2"]) == 1
    assert main(["compose", str(ax), str(ay), "--method", "dc-a1", "--param", "bogus=1"]) == 1


def test_compose_closeness_params(tmp_path, capsys):
    paths = []
    for name, e in (("x", M2_X), ("y", M2_Y)):
        p = tmp_path / f"{name}.edges"
        save_edge_list(LayerGraph.from_edges(4, e), p)
        a = tmp_path / f"{name}.npz"
        assert main(["analyze", str(p), "--kind", "closeness", "--out", str(a)]) == 0
        paths.append(str(a))
    capsys.readouterr()
    assert main(["compose", *paths, "--method", "cc2", "--param", "selection=top-k", "--param", "k=1"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_ground_truth(tmp_path):
    x, y = tmp_path / "x.edges", tmp_path / "y.edges"
    save_edge_list(LayerGraph.from_edges(4, M2_X), x)
    save_edge_list(LayerGraph.from_edges(4, M2_Y), y)
    out = tmp_path / "gt"
    assert main(["ground-truth", str(x), str(y), "--kind", "closeness", "--out", str(out)]) == 0
    assert (out / "aggregated.edges").read_text() == "0 1\n1 2\n"
    assert (out / "nodes.txt").read_text() == "0\n1\n2\n"
    t = json.loads((out / "timing.json").read_text())
    assert t["kind"] == "closeness" and t["gt_time"] >= 0
    out = tmp_path / "gtd"
    assert main(["ground-truth", str(x), str(y), "--out", str(out)]) == 0
    assert json.loads((out / "timing.json").read_text())["avg_deg"] == 2.0


def test_generate(tmp_path, capsys):
    man = tmp_path / "m.json"
    man.write_text(json.dumps([{"id": "a", "n": 128, "m": 300}, {"id": "b", "n": 128, "m": 300, "kinds": ["rmat", "normal"]}]))
    assert main(["generate", "--manifest", str(man), "--out", str(tmp_path / "d1")]) == 0
    assert main(["generate", "--manifest", str(man), "--out", str(tmp_path / "d2"), "--threads", "2"]) == 0
    for ds in ("a", "b"):
        for f in ("L1.edges", "L2.edges", "meta.json"):
            assert (tmp_path / "d1" / ds / f).read_bytes() == (tmp_path / "d2" / ds / f).read_bytes()
    man.write_text("[]")
    capsys.readouterr()
    assert main(["generate", "--manifest", str(man), "--out", str(tmp_path / "d3")]) == 2
    assert "no datasets" in capsys.readouterr().err


def test_report(g1, g2, tmp_path, capsys):
    csv_path = tmp_path / "suite.csv"
    assert main(["run", str(g1), str(g2), "--methods", "naive,dc-a1,dc-a2", "--out", str(csv_path)]) == 0
    copy = tmp_path / "copy.csv"
    copy.write_bytes(csv_path.read_bytes())
    capsys.readouterr()
    assert main(["report", str(csv_path), str(copy), "--format", "json", "--plot-data", str(tmp_path / "plot")]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["suites"]["suite"] == data["suites"]["copy"]
    assert set(data["suites"]["suite"]) == {"naive-or", "dc-a1", "dc-a2"}
    assert (tmp_path / "plot" / "accuracy_series.csv").exists()
    assert (tmp_path / "plot" / "timing_series.csv").exists()
    assert main(["report", str(csv_path)]) == 0
    table = capsys.readouterr().out
    assert "dc-a1 vs. naive" in table and "dc-a2 vs. naive" in table


def test_report_errors(g1, tmp_path):
    csv_path = tmp_path / "only.csv"
    assert main(["run", str(g1), "--methods", "dc-a1", "--out", str(csv_path)]) == 0
    assert main(["report", str(csv_path), "--baseline", "naive"]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert main(["report", str(bad), "--baseline", "dc-a1"]) == 2
    assert read_rows(csv_path)[0]["method"] == "dc-a1"


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["run"])
    assert e.value.code == 1


def test_module_entry_point(g1):
    proc = subprocess.run(
        [sys.executable, "-m", "mlndecouple", "run", str(g1), "--methods", "naive", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["rows"][0]["jaccard"] == 1.0
