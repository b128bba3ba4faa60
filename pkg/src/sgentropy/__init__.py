"""Labeled subgraph entropy toolkit.

Census of 12 rooted graphlet topologies, cluster-expansion entropy
embeddings, graph kernels with KPCA, SMO-trained C-SVM with stratified
cross-validation, and sliding-window correlation-network analysis.
"""

from ._accel import NUMBA_ENABLED, backend_name
from .catalog import (
    ALL_TYPE_IDS,
    N_TOPOLOGIES,
    TopologyCatalog,
    TopologyEntry,
    catalog,
    normalize_mask,
)
from .census import CensusTable, compose_path_sets, count_labeled, tables_to_csv_text
from .errors import (
    ContractError,
    ConvergenceError,
    DatasetFormatError,
    DomainError,
    OracleSizeError,
    SgentropyError,
)
from .finnet import (
    EntropySeries,
    PriceMatrix,
    WindowNetworkSeries,
    build_windows,
    entropy_series,
    flag_changes,
    ingest_prices,
    series_to_csv_text,
)
from .graphs import (
    GraphDataset,
    LabeledGraph,
    neighbor_sets,
    parse_tudataset,
    validate,
    write_tudataset,
)
from .kernels import (
    BaseKernelSpec,
    GramMatrix,
    KpcaResult,
    center,
    gram,
    kpca,
    parse_libsvm_gram,
)
from .oracle import ORACLE_MAX_NODES, count_oracle
from .svm import (
    DEFAULT_C_GRID,
    CvReport,
    SvmModel,
    cross_validate,
    predict,
    stratified_folds,
    train,
)
from .thermo import (
    EntropyEmbedding,
    ThermoParams,
    beta_mean_energy,
    edge_integral_closed,
    edge_integral_mayer,
    embed,
    embedding_header,
    embeddings_to_csv_text,
    graphlet_entropy,
    ln_config_integral,
    resolve_edge_integral,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_TYPE_IDS",
    "BaseKernelSpec",
    "CensusTable",
    "ContractError",
    "ConvergenceError",
    "CvReport",
    "DEFAULT_C_GRID",
    "DatasetFormatError",
    "DomainError",
    "EntropyEmbedding",
    "EntropySeries",
    "GramMatrix",
    "GraphDataset",
    "KpcaResult",
    "LabeledGraph",
    "N_TOPOLOGIES",
    "NUMBA_ENABLED",
    "ORACLE_MAX_NODES",
    "OracleSizeError",
    "PriceMatrix",
    "SgentropyError",
    "SvmModel",
    "ThermoParams",
    "TopologyCatalog",
    "TopologyEntry",
    "WindowNetworkSeries",
    "backend_name",
    "beta_mean_energy",
    "build_windows",
    "catalog",
    "center",
    "compose_path_sets",
    "count_labeled",
    "count_oracle",
    "cross_validate",
    "edge_integral_closed",
    "edge_integral_mayer",
    "embed",
    "embedding_header",
    "embeddings_to_csv_text",
    "entropy_series",
    "flag_changes",
    "gram",
    "graphlet_entropy",
    "ingest_prices",
    "kpca",
    "ln_config_integral",
    "neighbor_sets",
    "normalize_mask",
    "parse_libsvm_gram",
    "parse_tudataset",
    "predict",
    "resolve_edge_integral",
    "series_to_csv_text",
    "stratified_folds",
    "tables_to_csv_text",
    "train",
    "validate",
    "von_neumann_entropy",
    "write_tudataset",
]
