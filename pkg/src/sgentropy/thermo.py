"""Thermodynamic entropy of labeled graphlet populations.

Each (topology, label) cell of a census is treated as a population of n
identical clusters with l nodes and d internal edges. Its entropy

    S = n * ( d*[ln(eps) - beta*(eps - R)/eps] - l*ln(l) - ln(n) )

decomposes as ln z + beta*<U> with ln z = n*(d*ln(eps) - l*ln(l)) - n*ln(n)
and beta*<U> = -n*d*beta*(eps - R)/eps. The edge integral eps comes either
from the closed form p*e^beta + R (default) or from a discretized
Lennard-Jones pair-potential sum (mayer mode). R = -(r_max - r_min)/delta_r.

The log-factorial terms use the bare Stirling approximation ln m! ~ m*ln(m);
the variant with the -m correction sits behind improved_stirling.

Also hosts the spectral comparator: von Neumann entropy of the normalized
Laplacian scaled by node count.
"""

import hashlib
import math
from dataclasses import dataclass
from io import StringIO
from typing import Optional

import numpy as np

from .catalog import N_TOPOLOGIES, TopologyCatalog, catalog
from .census import CensusTable
from .errors import ContractError, DomainError
from .graphs import LabeledGraph

# exp overflow guard for the mayer outer exponential
_MAX_EXPONENT = 700.0

ENTROPY_MODES = ("closed", "mayer")


@dataclass(frozen=True)
class ThermoParams:
    """Inverse temperature and pair-potential parameters.

    p scales the closed-form edge integral; sigma and epsilon_well
    parameterize the Lennard-Jones potential used in mayer mode; the radial
    grid runs r_min..r_max in steps of delta_r.
    """

    beta: float = 1.0
    p: float = 10.0
    r_min: float = 1.0
    r_max: float = 2.0
    delta_r: float = 0.1
    sigma: float = 1.0
    epsilon_well: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ContractError("beta must be positive, got %r" % (self.beta,))
        if not self.r_min > 0:
            raise ContractError("r_min must be positive, got %r" % (self.r_min,))
        if not self.r_min < self.r_max:
            raise ContractError(
                "require r_min < r_max, got %r >= %r" % (self.r_min, self.r_max)
            )
        if not self.delta_r > 0:
            raise ContractError("delta_r must be positive, got %r" % (self.delta_r,))
        if not self.sigma > 0:
            raise ContractError("sigma must be positive, got %r" % (self.sigma,))

    @property
    def R(self) -> float:
        return -(self.r_max - self.r_min) / self.delta_r

    def fingerprint(self) -> str:
        key = repr(
            (
                self.beta,
                self.p,
                self.r_min,
                self.r_max,
                self.delta_r,
                self.sigma,
                self.epsilon_well,
            )
        )
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def to_json_dict(self) -> dict:
        return {
            "beta": self.beta,
            "p": self.p,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "delta_r": self.delta_r,
            "sigma": self.sigma,
            "epsilon_well": self.epsilon_well,
            "R": self.R,
        }


def edge_integral_closed(params: ThermoParams) -> float:
    """Closed-form edge integral p*e^beta + R."""
    eps = params.p * math.exp(params.beta) + params.R
    if eps <= 0:
        raise DomainError(
            "edge integral nonpositive; ln eps undefined (eps=%g, p=%g, beta=%g, R=%g)"
            % (eps, params.p, params.beta, params.R)
        )
    return eps


def radial_grid(params: ThermoParams) -> np.ndarray:
    """Grid r_min, r_min+delta_r, ..., last point <= r_max (epsilon-padded)."""
    m = int(math.floor((params.r_max - params.r_min) / params.delta_r + 1e-9)) + 1
    return params.r_min + params.delta_r * np.arange(m)


def edge_integral_mayer(params: ThermoParams) -> float:
    """Edge integral from the discretized pair-potential sum.

    exp(beta * sum_r exp(-4*eps_well*((sigma/r)^12 - (sigma/r)^6))) + R,
    summed literally over the radial grid with no step weight.
    """
    r = radial_grid(params)
    s = np.power(params.sigma / r, 6.0)
    inner = np.exp(-4.0 * params.epsilon_well * (s * s - s))
    exponent = params.beta * float(inner.sum())
    if exponent > _MAX_EXPONENT:
        raise DomainError(
            "edge integral overflow: outer exponent %g exceeds %g"
            % (exponent, _MAX_EXPONENT)
        )
    return math.exp(exponent) + params.R


def resolve_edge_integral(params: ThermoParams, mode: str = "closed") -> float:
    if mode == "closed":
        return edge_integral_closed(params)
    if mode == "mayer":
        return edge_integral_mayer(params)
    raise ContractError("unknown entropy mode %r (expected closed or mayer)" % (mode,))


def ln_config_integral(n, l, d, eps, improved_stirling: bool = False) -> float:
    """ln z for a population of n clusters (0 when n = 0)."""
    if n == 0:
        return 0.0
    if eps <= 0:
        raise DomainError("edge integral nonpositive; ln eps undefined (eps=%g)" % eps)
    if improved_stirling:
        return n * (d * math.log(eps) - (l * math.log(l) - l)) - (n * math.log(n) - n)
    return n * (d * math.log(eps) - l * math.log(l)) - n * math.log(n)


def beta_mean_energy(n, d, eps, beta, R) -> float:
    """beta*<U> term: -n*d*beta*(eps - R)/eps (0 when n = 0)."""
    if n == 0:
        return 0.0
    if eps <= 0:
        raise DomainError("edge integral nonpositive (eps=%g)" % eps)
    return -n * d * beta * (eps - R) / eps


def graphlet_entropy(n, l, d, eps, beta, R, improved_stirling: bool = False) -> float:
    """Entropy of a population of n clusters; 0 when the population is empty."""
    if n < 0:
        raise ContractError("population count must be nonnegative, got %r" % (n,))
    if n == 0:
        return 0.0
    if eps <= 0:
        raise DomainError("edge integral nonpositive; ln eps undefined (eps=%g)" % eps)
    energy = math.log(eps) - beta * (eps - R) / eps
    if improved_stirling:
        return n * (d * energy - (l * math.log(l) - l) - (math.log(n) - 1.0))
    return n * (d * energy - l * math.log(l) - math.log(n))


@dataclass(frozen=True)
class EntropyEmbedding:
    """Flat per-(topology, label) entropy vector for one graph.

    Coordinate order is catalog-major: all labels of type 1, then type 2,
    and so on. Dimension is always 12 * n_labels.
    """

    values: np.ndarray
    params: ThermoParams
    mode: str
    graph_id: str

    @property
    def n_labels(self) -> int:
        return self.values.shape[0] // N_TOPOLOGIES

    def fingerprint(self) -> str:
        return "%s:%s" % (self.params.fingerprint(), self.mode)


def embedding_header(n_labels: int):
    return [
        "S_v%d_l%d" % (t, l)
        for t in range(1, N_TOPOLOGIES + 1)
        for l in range(n_labels)
    ]


def embed(
    graph: LabeledGraph,
    census: CensusTable,
    params: ThermoParams,
    mode: str = "closed",
    cat: Optional[TopologyCatalog] = None,
    improved_stirling: bool = False,
) -> EntropyEmbedding:
    """Entropy embedding of one graph from its census table."""
    if census.graph_id != graph.graph_id:
        raise ContractError(
            "census for graph %r paired with graph %r"
            % (census.graph_id, graph.graph_id)
        )
    if cat is None:
        cat = catalog()
    eps = resolve_edge_integral(params, mode)
    L = census.n_labels
    values = np.zeros(N_TOPOLOGIES * L, dtype=np.float64)
    for entry in cat.entries:
        v = entry.type_id - 1
        for l in range(L):
            n = int(census.counts[v, l])
            values[v * L + l] = graphlet_entropy(
                n, entry.l_v, entry.d_v, eps, params.beta, params.R,
                improved_stirling=improved_stirling,
            )
    return EntropyEmbedding(values=values, params=params, mode=mode, graph_id=graph.graph_id)


def embeddings_to_csv_text(embeddings) -> str:
    """One row per graph, catalog-major columns, graph_id first."""
    if not embeddings:
        raise ContractError("no embeddings to serialize")
    L = embeddings[0].n_labels
    fp = embeddings[0].fingerprint()
    out = StringIO()
    out.write("graph_id," + ",".join(embedding_header(L)) + "\n")
    for emb in embeddings:
        if emb.n_labels != L or emb.fingerprint() != fp:
            raise ContractError(
                "embedding %r disagrees in dimension or parameters" % (emb.graph_id,)
            )
        out.write(emb.graph_id + "," + ",".join("%.17g" % x for x in emb.values) + "\n")
    return out.getvalue()


def von_neumann_entropy(graph: LabeledGraph) -> float:
    """Shannon entropy of the spectrum of the scaled normalized Laplacian.

    L = D^{-1/2} (D - A) D^{-1/2} with isolated nodes contributing zero
    rows; eigenvalues of L/|V| feed -sum(lam * ln(lam)) with 0*ln(0) = 0.
    """
    n = graph.node_count
    if n == 0:
        return 0.0
    A = graph.adjacency_matrix().astype(np.float64)
    deg = A.sum(axis=1)
    dinv = np.zeros(n)
    nz = deg > 0
    dinv[nz] = 1.0 / np.sqrt(deg[nz])
    lap = -(A * dinv[:, None]) * dinv[None, :]
    lap[np.diag_indices(n)] = np.where(nz, 1.0, 0.0)
    lam = np.linalg.eigvalsh(lap / n)
    lam = np.clip(lam, 0.0, None)
    pos = lam[lam > 0]
    return float(-(pos * np.log(pos)).sum())
