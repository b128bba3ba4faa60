"""End-to-end acceptance checks, one per shipped guarantee.

Each test wraps its assertions in the `criterion` recorder so the terminal
summary ends with one PASS/FAIL line per criterion.
"""

import json
import math
import pathlib
import time
from itertools import product

import numpy as np
import pytest

from conftest import (
    complete_graph,
    criterion,
    cycle_graph,
    path_graph,
    random_walk_panel_csv,
    switch_panel_csv,
)
from sgentropy import (
    BaseKernelSpec,
    ThermoParams,
    beta_mean_energy,
    build_windows,
    count_labeled,
    count_oracle,
    cross_validate,
    edge_integral_closed,
    embed,
    entropy_series,
    flag_changes,
    gram,
    graphlet_entropy,
    ingest_prices,
    kpca,
    ln_config_integral,
    von_neumann_entropy,
)
from sgentropy.cli import main


@pytest.fixture(scope="module")
def corpus_embeddings(corpus):
    params = ThermoParams()
    embs = []
    for g in corpus.graphs:
        table = count_labeled(g, n_labels=corpus.n_labels)
        embs.append(embed(g, table, params))
    return embs


def test_c1_census_equals_oracle_on_random_suite(random_suite):
    with criterion(1, "census == oracle") as note:
        t0 = time.monotonic()
        for g, n_labels in random_suite:
            fast = count_labeled(g, n_labels=n_labels).counts
            slow = count_oracle(g, n_labels=n_labels)
            assert np.array_equal(fast, slow), g.graph_id
        elapsed = time.monotonic() - t0
        assert elapsed < 60.0
        note.detail = "%d graphs in %.1fs" % (len(random_suite), elapsed)


def _expected(n_labels, cells):
    want = np.zeros((12, n_labels), dtype=np.int64)
    for (tid, lab), c in cells.items():
        want[tid - 1, lab] = c
    return want


HAND_FIXTURES = (
    (complete_graph(3, [0, 0, 1], gid="k3"), 2, {(1, 0): 2, (1, 1): 1}),
    (complete_graph(4, gid="k4"), 1, {(8, 0): 4, (1, 0): 12}),
    (cycle_graph(4, gid="c4"), 1, {(5, 0): 4, (2, 0): 8}),
    (cycle_graph(5, gid="c5"), 1, {(11, 0): 5, (2, 0): 10, (3, 0): 10}),
    (path_graph(6, gid="p6"), 1, {(2, 0): 8, (3, 0): 6, (9, 0): 4, (12, 0): 2}),
)


def test_c2_hand_counted_fixtures():
    with criterion(2, "hand fixtures exact") as note:
        for g, n_labels, cells in HAND_FIXTURES:
            want = _expected(n_labels, cells)
            assert np.array_equal(count_labeled(g, n_labels=n_labels).counts, want), g.graph_id
            assert np.array_equal(count_oracle(g, n_labels=n_labels), want), g.graph_id
        note.detail = "%d fixtures, fast + oracle" % len(HAND_FIXTURES)


def _closed_eps(beta):
    return edge_integral_closed(ThermoParams(beta=beta))


def test_c3_entropy_identity_and_gradient():
    with criterion(3, "entropy identity + gradient") as note:
        pts = list(product((1, 2, 3, 5, 8), (1, 2, 3, 4), (1, 3, 5, 7, 9)))
        assert len(pts) == 100
        R = ThermoParams().R
        worst = 0.0
        for i, (n, l, d) in enumerate(pts):
            beta = 0.25 + 0.03 * i
            eps = _closed_eps(beta)
            s = graphlet_entropy(n, l, d, eps, beta, R)
            two_part = ln_config_integral(n, l, d, eps) + beta_mean_energy(
                n, d, eps, beta, R
            )
            worst = max(worst, abs(s - two_part))
        assert worst <= 1e-12
        h = 1e-6
        worst_rel = 0.0
        for i, (n, l, d) in enumerate(pts[::5]):
            beta = 0.4 + 0.15 * i
            fd = (
                ln_config_integral(n, l, d, _closed_eps(beta + h))
                - ln_config_integral(n, l, d, _closed_eps(beta - h))
            ) / (2.0 * h)
            eps = _closed_eps(beta)
            minus_mean_u = -beta_mean_energy(n, d, eps, beta, R) / beta
            worst_rel = max(worst_rel, abs(fd - minus_mean_u) / abs(minus_mean_u))
        assert worst_rel <= 1e-5
        note.detail = "identity %.1e, gradient rel %.1e" % (worst, worst_rel)


def test_c4_spectral_entropy_analytic_cases(random_suite):
    with criterion(4, "von Neumann analytic cases") as note:
        worst = 0.0
        for n in range(2, 11):
            s = von_neumann_entropy(complete_graph(n, gid="k%d" % n))
            worst = max(worst, abs(s - math.log(n - 1)))
        assert worst <= 1e-9
        for g, _ in random_suite:
            s = von_neumann_entropy(g)
            assert 0.0 <= s <= math.log(g.node_count), g.graph_id
        note.detail = "K_n err %.1e; bounds on %d graphs" % (worst, len(random_suite))


def test_c5_gram_matrices_are_psd(corpus_embeddings):
    with criterion(5, "PSD linear + rbf Grams") as note:
        assert len(corpus_embeddings) == 188
        details = []
        for spec in (BaseKernelSpec(kind="linear"), BaseKernelSpec(kind="rbf")):
            w = np.linalg.eigvalsh(gram(corpus_embeddings, spec).values)
            assert w.min() >= -1e-8 * w.max()
            details.append("%s min eig %.1e" % (spec.kind, w.min()))
        note.detail = "; ".join(details)


def test_c6_full_rank_kpca_preserves_kernel_distances(corpus_embeddings):
    with criterion(6, "KPCA distance isometry") as note:
        sub = corpus_embeddings[:30]
        gm = gram(sub, BaseKernelSpec(kind="linear"))
        res = kpca(gm, 30)
        K = gm.values
        d2 = np.add.outer(np.diag(K), np.diag(K)) - 2.0 * K
        d_kernel = np.sqrt(np.clip(d2, 0.0, None))
        diff = res.coordinates[:, None, :] - res.coordinates[None, :, :]
        d_coords = np.sqrt((diff**2).sum(axis=-1))
        err = float(np.max(np.abs(d_kernel - d_coords)))
        assert err <= 1e-8
        note.detail = "max distance error %.1e" % err


def test_c7_tenfold_accuracy_band(corpus, corpus_embeddings):
    with criterion(7, "10-fold CV accuracy") as note:
        t0 = time.monotonic()
        gm = gram(corpus_embeddings, BaseKernelSpec(kind="linear"), standardize=True)
        report = cross_validate(
            gm,
            np.asarray(corpus.class_labels),
            k=10,
            C_grid=(0.01, 0.1, 1.0, 10.0, 100.0),
            seed=42,
        )
        elapsed = time.monotonic() - t0
        assert report.mean >= 0.80
        assert elapsed < 300.0
        note.detail = "mean %.4f (modal C=%g) in %.1fs" % (report.mean, report.C, elapsed)


def test_c8_regime_switch_detection(tmp_path):
    with criterion(8, "regime-switch detection") as note:
        panel = tmp_path / "panel.csv"
        panel.write_text(switch_panel_csv())
        prices = ingest_prices(str(panel))
        series = build_windows(prices, 28, 0.05, use_returns=True)
        es = entropy_series(series, ThermoParams(), topology=(1, 2, 3, 4, 5, 6, 7, 8))
        flags = flag_changes(es.subgraph, z_threshold=3.0, baseline_window=30)
        assert flags.size > 0
        # flag index w covers day rows [w, w + 27], center w + 13.5; rows
        # >= 200 carry the correlated block, so the switch sits at day 200
        centers = flags + 13.5
        target = 200.0
        hits = np.abs(centers - target) <= 3.0
        assert hits.any()
        all_centers = np.arange(len(series)) + 13.5
        near_total = int(np.count_nonzero(np.abs(all_centers - target) <= 3.0))
        false_rate = np.count_nonzero(~hits) / float(len(series) - near_total)
        assert false_rate <= 0.02

        # window-count bookkeeping: a 6004-day panel admits 5977 windows of
        # length 28; discarding the first leaves 5976, i.e. sliding starts
        # once the 28-day offset is available on the 29th trading day
        long_panel = tmp_path / "long.csv"
        long_panel.write_text(random_walk_panel_csv(seed=11, n_tickers=4, n_days=6004))
        long_prices = ingest_prices(str(long_panel))
        long_series = build_windows(long_prices, 28, 0.05)
        assert len(long_series) == 6004 - 28 + 1 == 5977
        assert long_series.window_end_dates[0] == long_prices.dates[27]
        assert len(long_series.window_end_dates[1:]) == 6004 - 28 == 5976
        note.detail = "hit center %.1f; false rate %.2f%%" % (
            float(centers[hits][0]),
            100.0 * false_rate,
        )


def test_c9_topology_ablation_runs(corpus_dir, tmp_path):
    with criterion(9, "24 ablation classify runs") as note:
        t0 = time.monotonic()
        means = []
        for form in ("exclude", "include"):
            for v in range(1, 13):
                out = str(tmp_path / ("%s_%d.json" % (form, v)))
                code = main(
                    [
                        "classify", corpus_dir, "--out", out,
                        "--topologies", "%s=%d" % (form, v),
                        "--standardize", "--seed", "42", "--folds", "10",
                    ]
                )
                assert code == 0, (form, v)
                blob = json.loads(open(out).read())
                assert 0.0 <= blob["mean"] <= 1.0
                means.append(blob["mean"])
        elapsed = time.monotonic() - t0
        assert len(means) == 24
        assert elapsed < 900.0
        note.detail = "24 reports in %.1fs" % elapsed


def test_c10_byte_identical_reruns(corpus_dir, tmp_path):
    with criterion(10, "byte-identical reruns") as note:
        panel = tmp_path / "panel.csv"
        panel.write_text(random_walk_panel_csv())
        jobs = (
            ["gram", corpus_dir, "--out", str(tmp_path / "gram.csv"), "--standardize"],
            [
                "classify", corpus_dir, "--out", str(tmp_path / "cv.json"),
                "--seed", "3", "--folds", "5", "--standardize",
            ],
            ["finnet", str(panel), "--out", str(tmp_path / "series.csv")],
        )

        def snapshot(out):
            return (
                pathlib.Path(out).read_bytes(),
                pathlib.Path(out + ".run.json").read_bytes(),
            )

        for argv in jobs:
            out = argv[argv.index("--out") + 1]
            assert main(list(argv)) == 0
            first = snapshot(out)
            assert main(list(argv)) == 0
            assert snapshot(out) == first
        note.detail = "%d subcommands replayed" % len(jobs)
