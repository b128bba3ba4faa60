"""Command-line pipeline: census, embed, gram, kpca, classify, finnet.

Every file-writing run also writes `<out>.run.json`, a fully resolved
configuration echo sufficient to reproduce the run; outputs carry no
timestamps, so identical invocations produce identical bytes. Flags beat
config-file values beat built-in defaults. Exit codes: 0 success, 1
computation error, 2 usage or input error.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .catalog import ALL_TYPE_IDS, catalog, normalize_mask
from .census import count_labeled, tables_to_csv_text
from .errors import DatasetFormatError, SgentropyError
from .finnet import (
    FILL_POLICIES,
    LABELINGS,
    build_windows,
    entropy_series,
    flag_changes,
    ingest_prices,
    series_to_csv_text,
)
from .graphs import parse_tudataset
from .kernels import KERNEL_KINDS, BaseKernelSpec, gram, kpca
from .svm import DEFAULT_C_GRID, cross_validate
from .thermo import (
    ENTROPY_MODES,
    ThermoParams,
    embed,
    embeddings_to_csv_text,
    resolve_edge_integral,
)

_THERMO_DEFAULTS = {
    "beta": 1.0,
    "p": 10.0,
    "r_min": 1.0,
    "r_max": 2.0,
    "delta_r": 0.1,
    "sigma": 1.0,
    "epsilon_well": 1.0,
}


def _parse_ids(text: str):
    ids = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            ids.append(int(tok))
    return tuple(ids)


def _parse_mask(text: str):
    """Topology mask grammar: include=<ids>, exclude=<ids>, or bare <ids>."""
    text = text.strip()
    if text == "all":
        return tuple(ALL_TYPE_IDS)
    if text.startswith("include="):
        return normalize_mask(_parse_ids(text[len("include="):]))
    if text.startswith("exclude="):
        dropped = set(normalize_mask(_parse_ids(text[len("exclude="):])))
        return normalize_mask(tuple(i for i in ALL_TYPE_IDS if i not in dropped))
    return normalize_mask(_parse_ids(text))


def _mask_flag(text: str):
    try:
        return _parse_mask(text)
    except (ValueError, SgentropyError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _grid_flag(text: str):
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("C grid must be comma-separated numbers")
    if not vals:
        raise argparse.ArgumentTypeError("C grid must be nonempty")
    return vals


class _Resolver:
    """Flag > config-file > built-in default, with everything recorded."""

    def __init__(self, args, config):
        self.args = args
        self.config = config
        self.resolved = {}

    def get(self, key, default):
        value = getattr(self.args, key, None)
        if value is None:
            value = self.config.get(key, default)
        self.resolved[key] = value
        return value

    def mask(self):
        value = getattr(self.args, "topologies", None)
        if value is None:
            raw = self.config.get("topologies")
            value = tuple(ALL_TYPE_IDS) if raw is None else _parse_mask(str(raw))
        self.resolved["topologies"] = list(value)
        return value

    def thermo(self):
        params = ThermoParams(
            **{k: float(self.get(k, d)) for k, d in _THERMO_DEFAULTS.items()}
        )
        self.resolved["R"] = params.R
        return params

    def kernel_spec(self):
        gamma = self.get("gamma", None)
        return BaseKernelSpec(
            kind=str(self.get("kernel", "linear")),
            gamma=None if gamma is None else float(gamma),
            degree=int(self.get("degree", 3)),
            coef0=float(self.get("coef0", 1.0)),
            alpha=float(self.get("alpha", 1.0)),
        )


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError("config file %s is not valid JSON: %s" % (path, exc))
    if not isinstance(data, dict):
        raise DatasetFormatError("config file %s must hold a JSON object" % path)
    return data


def _pmap(fn, items, jobs):
    if jobs is None:
        jobs = os.cpu_count() or 1
    jobs = max(1, int(jobs))
    if jobs == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _write_text(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _emit(out_path, text, run_config):
    _write_text(out_path, text)
    _write_text(
        out_path + ".run.json",
        json.dumps(run_config, indent=2, sort_keys=True) + "\n",
    )


def _echo_thermo(params, mode):
    eps = resolve_edge_integral(params, mode)
    print(
        "resolved epsilon=%.17g R=%.17g beta=%.17g mode=%s"
        % (eps, params.R, params.beta, mode),
        file=sys.stderr,
    )


def _embeddings_for(dataset, mask, params, mode, improved, jobs):
    def one(graph):
        table = count_labeled(graph, mask=mask, n_labels=dataset.n_labels)
        return embed(graph, table, params, mode=mode, improved_stirling=improved)

    return _pmap(one, dataset.graphs, jobs)


def _cmd_census(args, res):
    dataset = parse_tudataset(args.dataset)
    mask = res.mask()
    jobs = res.get("jobs", None)
    fmt = res.get("format", "csv")
    tables = _pmap(
        lambda g: count_labeled(g, mask=mask, n_labels=dataset.n_labels),
        dataset.graphs,
        jobs,
    )
    if fmt == "json":
        text = json.dumps([t.to_json_dict() for t in tables], indent=2, sort_keys=True) + "\n"
    else:
        text = tables_to_csv_text(tables)
    _emit(args.out, text, _run_config("census", args, res))
    return 0


def _cmd_embed(args, res):
    dataset = parse_tudataset(args.dataset)
    mask = res.mask()
    params = res.thermo()
    mode = res.get("mode", "closed")
    improved = bool(res.get("improved_stirling", False))
    _echo_thermo(params, mode)
    embs = _embeddings_for(dataset, mask, params, mode, improved, res.get("jobs", None))
    _emit(args.out, embeddings_to_csv_text(embs), _run_config("embed", args, res))
    return 0


def _gram_for(args, res):
    dataset = parse_tudataset(args.dataset)
    mask = res.mask()
    params = res.thermo()
    mode = res.get("mode", "closed")
    improved = bool(res.get("improved_stirling", False))
    spec = res.kernel_spec()
    standardize = bool(res.get("standardize", False))
    _echo_thermo(params, mode)
    embs = _embeddings_for(dataset, mask, params, mode, improved, res.get("jobs", None))
    gm = gram(embs, spec, standardize=standardize)
    res.resolved["kernel_resolved"] = gm.kernel_spec.to_json_dict()
    return dataset, gm


def _cmd_gram(args, res):
    dataset, gm = _gram_for(args, res)
    fmt = res.get("format", "csv")
    if fmt == "json":
        text = json.dumps(gm.to_json_dict(), indent=2, sort_keys=True) + "\n"
    elif fmt == "libsvm":
        text = gm.to_libsvm_text(dataset.class_labels)
    else:
        text = gm.to_csv_text()
    _emit(args.out, text, _run_config("gram", args, res))
    return 0


def _cmd_kpca(args, res):
    _, gm = _gram_for(args, res)
    k = int(res.get("components", 3))
    result = kpca(gm, k)
    res.resolved["eigenvalues"] = [float(v) for v in result.eigenvalues]
    _emit(args.out, result.to_csv_text(), _run_config("kpca", args, res))
    return 0


def _cmd_classify(args, res):
    dataset, gm = _gram_for(args, res)
    folds = int(res.get("folds", 10))
    grid = res.get("C_grid", tuple(DEFAULT_C_GRID))
    if isinstance(grid, str):
        grid = _grid_flag(grid)
    seed = res.get("seed", None)
    if seed is None:
        print("classify requires --seed (or a config-file seed)", file=sys.stderr)
        return 2
    seed = int(seed)
    reps = int(res.get("repetitions", 1))
    labels = np.asarray(dataset.class_labels)
    reports = [
        cross_validate(gm, labels, k=folds, C_grid=grid, seed=seed + rep)
        for rep in range(reps)
    ]
    for report in reports:
        sys.stdout.write(report.to_table_text())
    if reps == 1:
        payload = reports[0].to_json_dict()
    else:
        payload = {
            "repetitions": [r.to_json_dict() for r in reports],
            "mean_of_means": float(np.mean([r.mean for r in reports])),
        }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _emit(args.out, text, _run_config("classify", args, res))
    return 0


def _cmd_finnet(args, res):
    params = res.thermo()
    mode = res.get("mode", "closed")
    fill = str(res.get("fill_policy", "reject"))
    window = int(res.get("window", 28))
    quantile = float(res.get("quantile", 0.05))
    labeling = str(res.get("labeling", "none"))
    use_returns = bool(res.get("returns", False))
    topology = str(res.get("topology", "1,2,3,4,5,6,7,8"))
    z = float(res.get("z_threshold", 3.0))
    baseline = int(res.get("baseline_window", 30))
    _echo_thermo(params, mode)
    prices = ingest_prices(args.prices, fill_policy=fill)
    series = build_windows(
        prices, window, quantile, labeling=labeling, use_returns=use_returns
    )
    sel = "all" if topology == "all" else _parse_ids(topology)
    es = entropy_series(series, params, topology=sel, mode=mode)
    flags = flag_changes(es.subgraph, z_threshold=z, baseline_window=baseline)
    _emit(args.out, series_to_csv_text(es, flags), _run_config("finnet", args, res))
    return 0


def _cmd_catalog(args, res):
    text = catalog().to_json() + "\n"
    if args.out:
        _emit(args.out, text, _run_config("catalog", args, res))
    else:
        sys.stdout.write(text)
    return 0


def _run_config(subcommand, args, res):
    cfg = {"subcommand": subcommand}
    for key in ("dataset", "prices", "out"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key, value in sorted(res.resolved.items()):
        if isinstance(value, tuple):
            value = list(value)
        cfg[key] = value
    return cfg


def _add_common(p):
    p.add_argument("--config", help="JSON config file; explicit flags win")
    p.add_argument("--jobs", type=int, help="worker thread cap (default: cores)")


def _add_mask(p):
    p.add_argument(
        "--topologies",
        type=_mask_flag,
        metavar="include=IDS|exclude=IDS",
        help="topology mask, e.g. include=1,2,3 or exclude=9",
    )


def _add_thermo(p):
    for key in _THERMO_DEFAULTS:
        p.add_argument("--" + key.replace("_", "-"), type=float, dest=key)
    p.add_argument("--mode", choices=ENTROPY_MODES)
    p.add_argument(
        "--improved-stirling", action="store_true", default=None, dest="improved_stirling"
    )


def _add_kernel(p):
    p.add_argument("--kernel", choices=KERNEL_KINDS)
    p.add_argument("--gamma", type=float)
    p.add_argument("--degree", type=int)
    p.add_argument("--coef0", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--standardize", action="store_true", default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sgentropy",
        description="Labeled graphlet census, entropy embeddings, graph kernels, "
        "SVM classification, and correlation-network entropy series.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("census", help="per-graph labeled graphlet counts")
    p.add_argument("dataset", help="dataset directory (multi-file text layout)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"))
    _add_mask(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("embed", help="entropy embeddings, one row per graph")
    p.add_argument("dataset")
    p.add_argument("--out", required=True)
    _add_mask(p)
    _add_thermo(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_embed)

    p = sub.add_parser("gram", help="kernel matrix over a dataset")
    p.add_argument("dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json", "libsvm"))
    _add_mask(p)
    _add_thermo(p)
    _add_kernel(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_gram)

    p = sub.add_parser("kpca", help="kernel PCA coordinates")
    p.add_argument("dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--components", type=int)
    _add_mask(p)
    _add_thermo(p)
    _add_kernel(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_kpca)

    p = sub.add_parser("classify", help="stratified cross-validated SVM accuracy")
    p.add_argument("dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--folds", type=int)
    p.add_argument("--C-grid", type=_grid_flag, dest="C_grid")
    p.add_argument("--seed", type=int)
    p.add_argument("--repetitions", type=int)
    _add_mask(p)
    _add_thermo(p)
    _add_kernel(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("finnet", help="sliding-window correlation-network entropy")
    p.add_argument("prices", help="date-by-ticker closing-price CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--quantile", type=float)
    p.add_argument("--fill-policy", choices=FILL_POLICIES, dest="fill_policy")
    p.add_argument("--returns", action="store_true", default=None)
    p.add_argument("--labeling", choices=LABELINGS)
    p.add_argument("--topology", help="comma-separated type ids or 'all'")
    p.add_argument("--z-threshold", type=float, dest="z_threshold")
    p.add_argument("--baseline-window", type=int, dest="baseline_window")
    _add_thermo(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_finnet)

    p = sub.add_parser("catalog", help="topology reference card (JSON)")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(handler=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(getattr(args, "config", None))
        res = _Resolver(args, config)
        return args.handler(args, res)
    except (
        DatasetFormatError,
        FileNotFoundError,
        IsADirectoryError,
        NotADirectoryError,
        ValueError,
    ) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except SgentropyError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
