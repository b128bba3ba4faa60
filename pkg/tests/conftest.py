"""Shared fixtures: deterministic graph builders, a synthetic 188-graph
benchmark corpus in the TUDataset text layout, and a synthetic price panel
with one planted correlation-regime switch.

Set SGENTROPY_DATA to a directory containing a real MUTAG/ folder to run the
corpus-based tests against the real benchmark instead of the stand-in.
"""

import os
from contextlib import contextmanager

import numpy as np
import pytest

from sgentropy import GraphDataset, LabeledGraph, ThermoParams, write_tudataset
from sgentropy.graphs import parse_tudataset

CORPUS_SEED = 20260815
PANEL_SEED = 42

ACCEPTANCE_LINES = []


# ---------------------------------------------------------------- builders

def path_graph(n, labels=None, gid="path"):
    labels = [0] * n if labels is None else labels
    return LabeledGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)), labels, gid)


def cycle_graph(n, labels=None, gid="cycle"):
    labels = [0] * n if labels is None else labels
    edges = [(i, (i + 1) % n) for i in range(n)]
    return LabeledGraph.from_edges(n, edges, labels, gid)


def complete_graph(n, labels=None, gid="complete"):
    labels = [0] * n if labels is None else labels
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return LabeledGraph.from_edges(n, edges, labels, gid)


def star_graph(n, labels=None, gid="star"):
    labels = [0] * n if labels is None else labels
    return LabeledGraph.from_edges(n, ((0, i) for i in range(1, n)), labels, gid)


def random_labeled_graph(rng, n, density, n_labels, gid="rand"):
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    labels = rng.integers(0, n_labels, size=n).tolist()
    return LabeledGraph.from_edges(n, edges, labels, gid)


def random_suite_graphs(count=200, seed=1234):
    """Seeded randomized census suite: n in 5..12, densities 0.2/0.4/0.6,
    1-4 labels, cycling deterministically."""
    densities = (0.2, 0.4, 0.6)
    out = []
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence((seed, i)))
        n = 5 + i % 8
        density = densities[(i // 8) % 3]
        n_labels = 1 + i % 4
        g = random_labeled_graph(rng, n, density, n_labels, gid="r%03d" % i)
        out.append((g, n_labels))
    return out


# ------------------------------------------------------- benchmark corpus

def mutag_like_dataset(seed=CORPUS_SEED):
    """Synthetic stand-in with the benchmark's vital statistics: 188 graphs,
    125/63 class split, 7 node labels, molecule-like sizes. Class signal
    comes from chord density/span and label frequencies."""
    rng = np.random.default_rng(seed)
    classes = np.array([1] * 125 + [-1] * 63)
    rng.shuffle(classes)
    p1 = np.array([0.42, 0.16, 0.18, 0.10, 0.07, 0.05, 0.02])
    p0 = np.array([0.52, 0.24, 0.05, 0.09, 0.05, 0.03, 0.02])
    graphs = []
    for i, cls in enumerate(classes):
        n = int(rng.integers(12, 26))
        edges = [(int(rng.integers(max(0, v - 4), v)), v) for v in range(1, n)]
        p = p1 if cls == 1 else p0
        labels = rng.choice(7, size=n, p=p).astype(int).tolist()
        ch_n, ch_p, span = (7, 0.65, (2, 3)) if cls == 1 else (3, 0.25, (4, 5))
        for _ in range(int(rng.binomial(ch_n, ch_p))):
            u = int(rng.integers(0, n - 2))
            v = min(n - 1, u + int(rng.integers(span[0], span[1] + 1)))
            if u != v:
                edges.append((u, v))
        graphs.append(LabeledGraph.from_edges(n, edges, labels, graph_id="m_%d" % i))
    return GraphDataset(tuple(graphs), tuple(int(c) for c in classes), tuple(range(7)))


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Directory holding the benchmark corpus in TUDataset layout."""
    root = os.environ.get("SGENTROPY_DATA")
    if root:
        candidate = os.path.join(root, "MUTAG")
        if os.path.isfile(os.path.join(candidate, "MUTAG_A.txt")):
            return candidate
    d = tmp_path_factory.mktemp("corpus") / "MUTAG"
    write_tudataset(mutag_like_dataset(), str(d), "MUTAG")
    return str(d)


@pytest.fixture(scope="session")
def corpus(corpus_dir):
    return parse_tudataset(corpus_dir)


@pytest.fixture(scope="session")
def random_suite():
    return random_suite_graphs()


@pytest.fixture(scope="session")
def thermo_defaults():
    return ThermoParams()


# ----------------------------------------------------------- price panels

def switch_panel_csv(
    seed=PANEL_SEED,
    n_tickers=40,
    n_days=400,
    switch_day=200,
    block=20,
    rho=0.8,
):
    """Closing-price CSV with i.i.d. Gaussian log-returns everywhere except
    a block of tickers whose returns share a common factor (pairwise
    correlation rho) from switch_day onward."""
    rng = np.random.default_rng(seed)
    rets = 0.01 * rng.standard_normal((n_days, n_tickers))
    factor = rng.standard_normal(n_days - switch_day)
    noise = rng.standard_normal((n_days - switch_day, block))
    rets[switch_day:, :block] = 0.01 * (
        np.sqrt(rho) * factor[:, None] + np.sqrt(1.0 - rho) * noise
    )
    prices = 100.0 * np.exp(np.cumsum(rets, axis=0))
    lines = ["date," + ",".join("T%02d" % j for j in range(n_tickers))]
    for t in range(n_days):
        lines.append("d%04d," % (t + 1) + ",".join("%.10f" % p for p in prices[t]))
    return "\n".join(lines) + "\n"


def random_walk_panel_csv(seed=7, n_tickers=4, n_days=120):
    rng = np.random.default_rng(seed)
    rets = 0.01 * rng.standard_normal((n_days, n_tickers))
    prices = 100.0 * np.exp(np.cumsum(rets, axis=0))
    lines = ["date," + ",".join("S%d" % j for j in range(n_tickers))]
    for t in range(n_days):
        lines.append("d%03d," % (t + 1) + ",".join("%.10f" % p for p in prices[t]))
    return "\n".join(lines) + "\n"


# ------------------------------------------------- acceptance line report

@contextmanager
def criterion(num, title):
    """Record one PASS/FAIL summary line per acceptance check."""
    note = type("Note", (), {"detail": ""})()
    try:
        yield note
    except BaseException:
        ACCEPTANCE_LINES.append("criterion %2d %-28s FAIL" % (num, title))
        raise
    ACCEPTANCE_LINES.append(
        "criterion %2d %-28s PASS  %s" % (num, title, note.detail)
    )


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
