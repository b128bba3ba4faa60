"""Time-varying correlation networks from price panels.

A sliding window over daily closing prices yields one graph per window
position: tickers are nodes, and a pair is connected when the absolute
Pearson correlation of its within-window series reaches the top `quantile`
fraction of all pair values for that window. Per-window entropy series and
a trailing z-score change detector sit on top.
"""

import csv
import logging
import math
from dataclasses import dataclass
from io import StringIO
from typing import Optional, Union

import numpy as np

from .census import count_labeled
from .errors import ContractError, DatasetFormatError
from .graphs import LabeledGraph
from .thermo import (
    ThermoParams,
    embed,
    von_neumann_entropy,
)
from .catalog import ALL_TYPE_IDS, normalize_mask

logger = logging.getLogger(__name__)

_GAP_TOKENS = {"", "na", "nan", "null", "none"}

FILL_POLICIES = ("reject", "forward_fill")
LABELINGS = ("none", "degree_band")


@dataclass(frozen=True)
class PriceMatrix:
    tickers: tuple
    prices: np.ndarray  # (days, n_tickers) float64, strictly positive
    dates: tuple

    @property
    def n_days(self) -> int:
        return self.prices.shape[0]

    @property
    def n_tickers(self) -> int:
        return self.prices.shape[1]


def ingest_prices(path: str, fill_policy: str = "reject") -> PriceMatrix:
    """Load a date-by-ticker closing-price CSV.

    Header row: date column first, one column per ticker. Blank or NA cells
    are gaps: rejected outright under `reject`, replaced by the previous
    day's price under `forward_fill`. A gap before any observed price is
    rejected under both policies. Prices must be strictly positive.
    """
    if fill_policy not in FILL_POLICIES:
        raise ContractError(
            "fill policy must be one of %s, got %r" % (FILL_POLICIES, fill_policy)
        )
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError("price file %s is empty" % path)
        tickers = [t.strip() for t in header[1:]]
        if not tickers or any(not t for t in tickers):
            raise DatasetFormatError("price file %s has a malformed ticker header" % path)
        if len(set(tickers)) != len(tickers):
            raise DatasetFormatError("price file %s has duplicate tickers" % path)
        dates = []
        seen_dates = set()
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(tickers) + 1:
                raise DatasetFormatError(
                    "line %d has %d cells, expected %d" % (lineno, len(row), len(tickers) + 1)
                )
            date = row[0].strip()
            if date in seen_dates:
                raise DatasetFormatError("duplicate date %r at line %d" % (date, lineno))
            seen_dates.add(date)
            dates.append(date)
            parsed = []
            for ticker, cell in zip(tickers, row[1:]):
                cell = cell.strip()
                if cell.lower() in _GAP_TOKENS:
                    if fill_policy == "reject":
                        raise DatasetFormatError(
                            "missing price for %s on %s under reject policy" % (ticker, date)
                        )
                    parsed.append(math.nan)
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetFormatError(
                        "non-numeric price %r for %s on %s" % (cell, ticker, date)
                    )
                if not value > 0 or not math.isfinite(value):
                    raise DatasetFormatError(
                        "nonpositive price %r for %s on %s" % (cell, ticker, date)
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise DatasetFormatError("price file %s has no data rows" % path)
    prices = np.asarray(rows, dtype=np.float64)
    for j, ticker in enumerate(tickers):
        col = prices[:, j]
        gaps = np.isnan(col)
        if not gaps.any():
            continue
        if gaps[0]:
            raise DatasetFormatError(
                "ticker %s has a gap on the first day %s; nothing to fill from"
                % (ticker, dates[0])
            )
        for t in range(1, col.shape[0]):
            if gaps[t]:
                col[t] = col[t - 1]
    return PriceMatrix(tickers=tuple(tickers), prices=prices, dates=tuple(dates))


@dataclass(frozen=True)
class WindowNetworkSeries:
    window_size: int
    graphs: tuple
    window_end_dates: tuple
    threshold_quantile: float
    labeling: str = "none"
    use_returns: bool = False

    def __len__(self) -> int:
        return len(self.graphs)


def _window_correlations(data: np.ndarray):
    """Pearson matrix with zero-variance columns mapped to all-zero rows."""
    centered = data - data.mean(axis=0)
    sd = centered.std(axis=0)
    live = sd > 0
    safe = np.where(live, sd, 1.0)
    z = centered / safe
    corr = (z.T @ z) / data.shape[0]
    corr[~live, :] = 0.0
    corr[:, ~live] = 0.0
    np.clip(corr, -1.0, 1.0, out=corr)
    return corr, int((~live).sum())


def network_for_window(
    data: np.ndarray,
    quantile: float,
    labeling: str,
    graph_id: str,
    end_date: str,
) -> LabeledGraph:
    """Threshold one window's |correlation| values into an unweighted graph."""
    corr, dead = _window_correlations(data)
    if dead:
        logger.warning(
            "window ending %s: %d zero-variance tickers, correlations set to 0",
            end_date,
            dead,
        )
    n = corr.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    absvals = np.abs(corr[iu, ju])
    tau = float(np.quantile(absvals, 1.0 - quantile))
    keep = absvals >= tau
    edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    if labeling == "degree_band":
        deg = np.zeros(n, dtype=np.int64)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        q1, q2 = np.quantile(deg, [1.0 / 3.0, 2.0 / 3.0])
        labels = ((deg > q1).astype(int) + (deg > q2).astype(int)).tolist()
    else:
        labels = [0] * n
    return LabeledGraph.from_edges(n, edges, labels, graph_id=graph_id)


def build_windows(
    prices: PriceMatrix,
    window: int,
    quantile: float,
    labeling: str = "none",
    use_returns: bool = False,
) -> WindowNetworkSeries:
    """One thresholded correlation network per window position (slide = 1 day).

    use_returns correlates within-window daily log returns instead of raw
    prices; series length stays n_days - window + 1 in both modes.
    """
    if window < 3:
        raise ContractError("window must be >= 3 days, got %d" % window)
    if not 0.0 < quantile < 1.0:
        raise ContractError("quantile must lie in (0, 1), got %r" % (quantile,))
    if labeling not in LABELINGS:
        raise ContractError("labeling must be one of %s, got %r" % (LABELINGS, labeling))
    days = prices.n_days
    if days < window:
        raise ContractError(
            "%d price rows cannot fill a %d-day window" % (days, window)
        )
    graphs = []
    end_dates = []
    for start in range(days - window + 1):
        seg = prices.prices[start : start + window]
        data = np.diff(np.log(seg), axis=0) if use_returns else seg
        end_date = prices.dates[start + window - 1]
        graphs.append(
            network_for_window(
                data, quantile, labeling, graph_id="win_%s" % end_date, end_date=end_date
            )
        )
        end_dates.append(end_date)
    return WindowNetworkSeries(
        window_size=window,
        graphs=tuple(graphs),
        window_end_dates=tuple(end_dates),
        threshold_quantile=quantile,
        labeling=labeling,
        use_returns=use_returns,
    )


@dataclass(frozen=True)
class EntropySeries:
    window_end_dates: tuple
    topology: str  # "all" or comma-joined type ids
    subgraph: np.ndarray  # summed entropy per window
    von_neumann: np.ndarray
    params: ThermoParams
    mode: str


def _topology_selection(topology) -> tuple:
    if topology == "all" or topology is None:
        return tuple(ALL_TYPE_IDS)
    if isinstance(topology, int):
        return normalize_mask((topology,))
    return normalize_mask(tuple(topology))


def entropy_series(
    series: WindowNetworkSeries,
    params: ThermoParams,
    topology: Union[str, int, tuple] = "all",
    mode: str = "closed",
    improved_stirling: bool = False,
) -> EntropySeries:
    """Per-window entropy, censused on the selected topologies and summed
    over all (topology, label) cells, alongside the spectral comparator."""
    ids = _topology_selection(topology)
    n_labels = 3 if series.labeling == "degree_band" else 1
    sub = np.empty(len(series.graphs))
    von = np.empty(len(series.graphs))
    for i, graph in enumerate(series.graphs):
        table = count_labeled(graph, mask=ids, n_labels=n_labels)
        emb = embed(
            graph, table, params, mode=mode, improved_stirling=improved_stirling
        )
        sub[i] = float(emb.values.sum())
        von[i] = von_neumann_entropy(graph)
    label = "all" if len(ids) == len(ALL_TYPE_IDS) else ",".join(map(str, ids))
    return EntropySeries(
        window_end_dates=series.window_end_dates,
        topology=label,
        subgraph=sub,
        von_neumann=von,
        params=params,
        mode=mode,
    )


def flag_changes(
    values: np.ndarray,
    z_threshold: float = 3.0,
    baseline_window: int = 30,
) -> np.ndarray:
    """Indices whose value sits more than z_threshold trailing standard
    deviations from the trailing mean.

    The baseline is the `baseline_window` values strictly before each index,
    so the first baseline_window indices are never flagged. Sample standard
    deviation (ddof=1); a zero-deviation baseline cannot flag and is logged.
    """
    if baseline_window < 5:
        raise ContractError("baseline window must be >= 5, got %d" % baseline_window)
    x = np.asarray(values, dtype=np.float64)
    flags = []
    skipped = 0
    for t in range(baseline_window, x.shape[0]):
        base = x[t - baseline_window : t]
        sd = float(base.std(ddof=1))
        if sd == 0.0:
            skipped += 1
            continue
        if abs(x[t] - float(base.mean())) > z_threshold * sd:
            flags.append(t)
    if skipped:
        logger.warning(
            "%d indices skipped by the change detector: zero baseline deviation",
            skipped,
        )
    return np.asarray(flags, dtype=np.int64)


def series_to_csv_text(es: EntropySeries, flags: Optional[np.ndarray] = None) -> str:
    flagged = set() if flags is None else set(int(f) for f in flags)
    # comma-joined topology selections need quoting to stay one CSV field
    topo = '"%s"' % es.topology if "," in es.topology else es.topology
    out = StringIO()
    out.write("window_end_date,topology,subgraph_entropy,von_neumann_entropy,flagged\n")
    for i, date in enumerate(es.window_end_dates):
        out.write(
            "%s,%s,%.17g,%.17g,%d\n"
            % (date, topo, es.subgraph[i], es.von_neumann[i], 1 if i in flagged else 0)
        )
    return out.getvalue()
