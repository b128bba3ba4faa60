import json

import numpy as np
import pytest

from conftest import random_labeled_graph, random_walk_panel_csv
from sgentropy import GraphDataset, parse_libsvm_gram, write_tudataset
from sgentropy.cli import main


@pytest.fixture(scope="module")
def toy_dir(tmp_path_factory):
    rng = np.random.default_rng(77)
    graphs = tuple(
        random_labeled_graph(rng, 8 + i, 0.5, 2, gid="TOY_%d" % i) for i in range(6)
    )
    ds = GraphDataset(graphs, (1, 1, 1, -1, -1, -1), (0, 1))
    d = tmp_path_factory.mktemp("toy") / "TOY"
    write_tudataset(ds, str(d), "TOY")
    return str(d)


@pytest.fixture()
def panel_csv(tmp_path):
    path = tmp_path / "prices.csv"
    path.write_text(random_walk_panel_csv(n_days=120, n_tickers=4))
    return str(path)


def run_json(out):
    with open(out + ".run.json") as fh:
        return json.load(fh)


def test_catalog_prints_reference_card(capsys):
    assert main(["catalog"]) == 0
    card = json.loads(capsys.readouterr().out)
    assert len(card) == 12


def test_catalog_out_writes_run_echo(tmp_path):
    out = str(tmp_path / "cat.json")
    assert main(["catalog", "--out", out]) == 0
    assert json.load(open(out))
    cfg = run_json(out)
    assert cfg["subcommand"] == "catalog"


def test_census_csv_and_run_echo(toy_dir, tmp_path):
    out = str(tmp_path / "census.csv")
    assert main(["census", toy_dir, "--out", out]) == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "graph_id,type_id,label,count"
    assert len(lines) == 1 + 6 * 12 * 2
    cfg = run_json(out)
    assert cfg["topologies"] == list(range(1, 13))
    assert cfg["dataset"] == toy_dir
    assert not any("time" in k or "date" in k for k in cfg)


def test_census_json_format(toy_dir, tmp_path):
    out = str(tmp_path / "census.json")
    assert main(["census", toy_dir, "--out", out, "--format", "json"]) == 0
    data = json.load(open(out))
    assert len(data) == 6
    assert data[0]["graph_id"] == "TOY_0"


def test_embed_echoes_resolved_constants(toy_dir, tmp_path, capsys):
    out = str(tmp_path / "emb.csv")
    assert main(["embed", toy_dir, "--out", out]) == 0
    err = capsys.readouterr().err
    assert "resolved epsilon=" in err
    assert "mode=closed" in err
    lines = open(out).read().strip().splitlines()
    assert len(lines) == 7
    assert lines[0].startswith("graph_id,S_v1_l0")


def test_flag_beats_config_beats_default(toy_dir, tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"beta": 2.0}))
    out1 = str(tmp_path / "a.csv")
    out2 = str(tmp_path / "b.csv")
    out3 = str(tmp_path / "c.csv")
    assert main(["embed", toy_dir, "--out", out1]) == 0
    assert main(["embed", toy_dir, "--out", out2, "--config", str(cfg_path)]) == 0
    assert (
        main(["embed", toy_dir, "--out", out3, "--config", str(cfg_path), "--beta", "3"])
        == 0
    )
    assert run_json(out1)["beta"] == 1.0
    assert run_json(out2)["beta"] == 2.0
    assert run_json(out3)["beta"] == 3.0


def test_config_must_be_json_object(toy_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    out = str(tmp_path / "x.csv")
    assert main(["embed", toy_dir, "--out", out, "--config", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["embed", toy_dir, "--out", out, "--config", str(bad)]) == 2


def test_topology_mask_forms(toy_dir, tmp_path):
    out = str(tmp_path / "m.csv")
    assert main(["census", toy_dir, "--out", out, "--topologies", "include=1,2"]) == 0
    assert run_json(out)["topologies"] == [1, 2]
    assert main(["census", toy_dir, "--out", out, "--topologies", "exclude=9"]) == 0
    assert run_json(out)["topologies"] == [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12]
    assert main(["census", toy_dir, "--out", out, "--topologies", "3,1"]) == 0
    assert run_json(out)["topologies"] == [1, 3]
    with pytest.raises(SystemExit) as exc:
        main(["census", toy_dir, "--out", out, "--topologies", "include=99"])
    assert exc.value.code == 2


def test_bad_topology_in_config_is_usage_error(toy_dir, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"topologies": "include=40"}))
    out = str(tmp_path / "m.csv")
    assert main(["census", toy_dir, "--out", out, "--config", str(cfg)]) == 2


def test_gram_formats(toy_dir, tmp_path):
    out_csv = str(tmp_path / "g.csv")
    out_json = str(tmp_path / "g.json")
    out_svm = str(tmp_path / "g.svm")
    assert main(["gram", toy_dir, "--out", out_csv]) == 0
    assert len(open(out_csv).read().strip().splitlines()) == 7
    assert main(["gram", toy_dir, "--out", out_json, "--format", "json", "--kernel", "rbf"]) == 0
    blob = json.load(open(out_json))
    assert blob["kernel"]["kind"] == "rbf"
    assert blob["kernel"]["gamma"] is not None
    assert main(["gram", toy_dir, "--out", out_svm, "--format", "libsvm"]) == 0
    labels, K = parse_libsvm_gram(open(out_svm).read())
    assert labels.tolist() == [1, 1, 1, -1, -1, -1]
    assert K.shape == (6, 6)
    assert run_json(out_svm)["kernel_resolved"] == {"kind": "linear"}


def test_kpca_writes_coordinates_and_eigenvalues(toy_dir, tmp_path):
    out = str(tmp_path / "k.csv")
    assert main(["kpca", toy_dir, "--out", out, "--components", "3", "--standardize"]) == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "graph_id,pc1,pc2,pc3"
    eig = run_json(out)["eigenvalues"]
    assert len(eig) == 3 and eig == sorted(eig, reverse=True)
    assert main(["kpca", toy_dir, "--out", out, "--components", "99"]) == 1


def test_classify_requires_seed(toy_dir, tmp_path, capsys):
    out = str(tmp_path / "r.json")
    assert main(["classify", toy_dir, "--out", out, "--folds", "2"]) == 2
    assert "--seed" in capsys.readouterr().err


def test_classify_report(toy_dir, tmp_path, capsys):
    out = str(tmp_path / "r.json")
    code = main(
        ["classify", toy_dir, "--out", out, "--folds", "2", "--seed", "7", "--standardize"]
    )
    assert code == 0
    table = capsys.readouterr().out
    assert table.splitlines()[0].startswith("fold")
    report = json.load(open(out))
    assert 0.0 <= report["mean"] <= 1.0
    assert len(report["fold_accuracies"]) == 2
    cfg = run_json(out)
    assert cfg["seed"] == 7 and cfg["standardize"] is True


def test_classify_repetitions(toy_dir, tmp_path):
    out = str(tmp_path / "rr.json")
    code = main(
        [
            "classify", toy_dir, "--out", out, "--folds", "2", "--seed", "7",
            "--repetitions", "2", "--standardize",
        ]
    )
    assert code == 0
    blob = json.load(open(out))
    assert len(blob["repetitions"]) == 2
    means = [r["mean"] for r in blob["repetitions"]]
    assert blob["mean_of_means"] == pytest.approx(np.mean(means))


def test_finnet_end_to_end(panel_csv, tmp_path):
    out = str(tmp_path / "series.csv")
    assert main(["finnet", panel_csv, "--out", out]) == 0
    lines = open(out).read().strip().splitlines()
    assert len(lines) == 1 + (120 - 28 + 1)
    cfg = run_json(out)
    assert cfg["window"] == 28
    assert cfg["quantile"] == 0.05
    assert cfg["topology"] == "1,2,3,4,5,6,7,8"
    assert cfg["z_threshold"] == 3.0
    assert cfg["baseline_window"] == 30


def test_finnet_input_errors(tmp_path):
    out = str(tmp_path / "s.csv")
    assert main(["finnet", str(tmp_path / "absent.csv"), "--out", out]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("date,A\nd1,-3\n")
    assert main(["finnet", str(bad), "--out", out]) == 2


def test_physically_invalid_params_exit_one(toy_dir, tmp_path):
    out = str(tmp_path / "e.csv")
    assert main(["embed", toy_dir, "--out", out, "--p", "1.0"]) == 1


def test_missing_dataset_exits_two(tmp_path):
    out = str(tmp_path / "c.csv")
    assert main(["census", str(tmp_path / "nope"), "--out", out]) == 2


def test_repeat_runs_are_byte_identical(toy_dir, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        assert main(["embed", toy_dir, "--out", str(out), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    ra = json.loads((tmp_path / "a.csv.run.json").read_text())
    rb = json.loads((tmp_path / "b.csv.run.json").read_text())
    ra.pop("out"), rb.pop("out")
    assert ra == rb


def test_jobs_setting_does_not_change_output(toy_dir, tmp_path):
    one = tmp_path / "j1.csv"
    many = tmp_path / "j4.csv"
    assert main(["census", toy_dir, "--out", str(one), "--jobs", "1"]) == 0
    assert main(["census", toy_dir, "--out", str(many), "--jobs", "4"]) == 0
    assert one.read_bytes() == many.read_bytes()
