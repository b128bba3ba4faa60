#!/usr/bin/env python3
"""Times the labeled-graphlet census under the jit backend and under the
pure-numpy fallback. Each backend runs in its own subprocess so the import-time
backend choice is honest; jit compilation happens in a warmup pass that is
excluded from the timing."""

import argparse
import json
import os
import subprocess
import sys
import time


def build_graphs(seed, count, max_nodes):
    import numpy as np

    from sgentropy import LabeledGraph

    rng = np.random.default_rng(seed)
    graphs = []
    for i in range(count):
        n = int(rng.integers(10, max_nodes + 1))
        density = float(rng.choice((0.2, 0.4, 0.6)))
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < density
        ]
        labels = rng.integers(0, 4, size=n).tolist()
        graphs.append(LabeledGraph.from_edges(n, edges, labels, "bench_%d" % i))
    return graphs


def _one_pass(graphs, count_labeled):
    t0 = time.perf_counter()
    for g in graphs:
        count_labeled(g, n_labels=4)
    return time.perf_counter() - t0


def run_child(args) -> int:
    from sgentropy import backend_name, count_labeled

    graphs = build_graphs(args.seed, args.graphs, args.max_nodes)
    for g in graphs[: min(5, len(graphs))]:
        count_labeled(g, n_labels=4)
    best = min(_one_pass(graphs, count_labeled) for _ in range(args.repeats))
    print(json.dumps({"backend": backend_name(), "seconds": best}))
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", type=int, default=60, help="suite size")
    ap.add_argument("--max-nodes", type=int, default=40, dest="max_nodes")
    ap.add_argument("--repeats", type=int, default=3, help="passes; best kept")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.child:
        return run_child(args)

    rows = []
    for backend in ("numba", "numpy"):
        cmd = [
            sys.executable, os.path.abspath(__file__), "--child",
            "--graphs", str(args.graphs), "--max-nodes", str(args.max_nodes),
            "--repeats", str(args.repeats), "--seed", str(args.seed),
        ]
        env = dict(os.environ, SGENTROPY_BACKEND=backend)
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            sys.stderr.write("backend %s failed:\n%s" % (backend, proc.stderr))
            continue
        rows.append(json.loads(proc.stdout.strip().splitlines()[-1]))

    if not rows:
        return 1
    print("%-8s %12s" % ("backend", "seconds"))
    for row in rows:
        print("%-8s %12.3f" % (row["backend"], row["seconds"]))
    if len(rows) == 2 and rows[0]["seconds"] > 0:
        print("speedup: %.1fx" % (rows[1]["seconds"] / rows[0]["seconds"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
