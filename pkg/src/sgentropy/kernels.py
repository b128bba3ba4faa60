"""Base kernels over entropy embeddings, Gram assembly, centering, KPCA.

Gram matrices are computed on the upper triangle and mirrored, so symmetry
is exact rather than floating-point approximate. Linear, RBF, and
polynomial (coef0 >= 0) kernels are positive semidefinite; sigmoid is
shipped for completeness but is indefinite in general and excluded from
PSD guarantees.
"""

from dataclasses import dataclass, replace
from io import StringIO
from typing import Optional

import numpy as np

from .errors import ContractError
from .thermo import EntropyEmbedding

KERNEL_KINDS = ("linear", "rbf", "polynomial", "sigmoid")


@dataclass(frozen=True)
class BaseKernelSpec:
    """Base kernel selector with its scalar parameters.

    gamma=None (rbf) resolves to 1/dimension at Gram time. degree and coef0
    apply to polynomial, alpha and coef0 to sigmoid.
    """

    kind: str = "linear"
    gamma: Optional[float] = None
    degree: int = 3
    coef0: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ContractError(
                "unknown kernel kind %r (expected one of %s)"
                % (self.kind, ", ".join(KERNEL_KINDS))
            )
        if self.gamma is not None and not self.gamma > 0:
            raise ContractError("gamma must be positive, got %r" % (self.gamma,))
        if self.kind == "polynomial" and self.degree < 1:
            raise ContractError("polynomial degree must be >= 1, got %r" % (self.degree,))

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "rbf":
            d["gamma"] = self.gamma
        elif self.kind == "polynomial":
            d["degree"] = self.degree
            d["coef0"] = self.coef0
        elif self.kind == "sigmoid":
            d["alpha"] = self.alpha
            d["coef0"] = self.coef0
        return d


@dataclass(frozen=True)
class GramMatrix:
    values: np.ndarray  # (n, n) float64, exactly symmetric
    graph_ids: tuple
    kernel_spec: BaseKernelSpec
    params_hash: str

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ContractError("gram matrix must be square, got shape %r" % (v.shape,))
        if len(self.graph_ids) != v.shape[0]:
            raise ContractError(
                "%d graph ids for a %d-row gram matrix"
                % (len(self.graph_ids), v.shape[0])
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def to_csv_text(self) -> str:
        out = StringIO()
        out.write("graph_id," + ",".join(str(g) for g in self.graph_ids) + "\n")
        for i in range(self.n):
            out.write(
                str(self.graph_ids[i])
                + ","
                + ",".join("%.17g" % x for x in self.values[i])
                + "\n"
            )
        return out.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "graph_ids": list(map(str, self.graph_ids)),
            "kernel": self.kernel_spec.to_json_dict(),
            "params_hash": self.params_hash,
            "values": self.values.tolist(),
        }

    def to_libsvm_text(self, labels=None) -> str:
        """Precomputed-kernel rows: <label> 0:<row index> <col>:<value>..."""
        if labels is None:
            labels = [0] * self.n
        if len(labels) != self.n:
            raise ContractError(
                "%d labels for a %d-row gram matrix" % (len(labels), self.n)
            )
        out = StringIO()
        for i in range(self.n):
            parts = ["%d 0:%d" % (int(labels[i]), i + 1)]
            parts.extend(
                "%d:%.17g" % (j + 1, self.values[i, j]) for j in range(self.n)
            )
            out.write(" ".join(parts) + "\n")
        return out.getvalue()


def parse_libsvm_gram(text: str):
    """Inverse of to_libsvm_text: returns (class labels int array, matrix)."""
    labels = []
    rows = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        toks = line.split()
        try:
            labels.append(int(toks[0]))
            pairs = [t.split(":", 1) for t in toks[1:]]
            row = {int(k): float(v) for k, v in pairs}
        except (ValueError, IndexError):
            raise ContractError("malformed precomputed-kernel line %d" % ln)
        if 0 not in row:
            raise ContractError("line %d lacks the 0:<index> row prefix" % ln)
        del row[0]
        rows.append(row)
    n = len(rows)
    K = np.zeros((n, n))
    for i, row in enumerate(rows):
        for j, v in row.items():
            if not 1 <= j <= n:
                raise ContractError(
                    "column index %d out of range on row %d of %d" % (j, i + 1, n)
                )
            K[i, j - 1] = v
    return np.asarray(labels, dtype=np.int64), K


def _mirror_upper(K: np.ndarray) -> np.ndarray:
    upper = np.triu(K)
    return upper + np.triu(K, 1).T


def embedding_matrix(embeddings, standardize: bool = False):
    """Stack embeddings into an (n, dim) array after consistency checks."""
    if not embeddings:
        raise ContractError("empty embedding list")
    dim = embeddings[0].values.shape[0]
    fp = embeddings[0].fingerprint()
    for emb in embeddings:
        if emb.values.shape[0] != dim:
            raise ContractError(
                "embedding dimension mismatch: %r has %d, expected %d"
                % (emb.graph_id, emb.values.shape[0], dim)
            )
        if emb.fingerprint() != fp:
            raise ContractError(
                "embedding %r was computed under different parameters" % (emb.graph_id,)
            )
    X = np.stack([emb.values for emb in embeddings]).astype(np.float64)
    if standardize:
        mu = X.mean(axis=0)
        sd = X.std(axis=0, ddof=0)
        sd[sd == 0.0] = 1.0
        X = (X - mu) / sd
    return X, fp


def gram(
    embeddings,
    spec: Optional[BaseKernelSpec] = None,
    standardize: bool = False,
) -> GramMatrix:
    """Kernel matrix K[i,j] = k(S(G_i), S(G_j)) under the base kernel spec."""
    if spec is None:
        spec = BaseKernelSpec()
    X, fp = embedding_matrix(embeddings, standardize=standardize)
    inner = X @ X.T
    if spec.kind == "linear":
        K = inner
    elif spec.kind == "rbf":
        g = spec.gamma if spec.gamma is not None else 1.0 / X.shape[1]
        spec = replace(spec, gamma=g)
        sq = np.einsum("ij,ij->i", X, X)
        d2 = np.clip(sq[:, None] + sq[None, :] - 2.0 * inner, 0.0, None)
        K = np.exp(-g * d2)
        np.fill_diagonal(K, 1.0)
    elif spec.kind == "polynomial":
        K = (inner + spec.coef0) ** spec.degree
    else:
        K = np.tanh(spec.alpha * inner + spec.coef0)
    return GramMatrix(
        values=_mirror_upper(K),
        graph_ids=tuple(emb.graph_id for emb in embeddings),
        kernel_spec=spec,
        params_hash=fp,
    )


def center(g: GramMatrix) -> GramMatrix:
    """Double centering: K - 1K/n - K1/n + 1K1/n^2."""
    K = g.values
    col = K.mean(axis=0)
    row = K.mean(axis=1)
    grand = K.mean()
    Kc = K - col[None, :] - row[:, None] + grand
    return GramMatrix(
        values=_mirror_upper(Kc),
        graph_ids=g.graph_ids,
        kernel_spec=g.kernel_spec,
        params_hash=g.params_hash,
    )


@dataclass(frozen=True)
class KpcaResult:
    coordinates: np.ndarray  # (n, k)
    eigenvalues: np.ndarray  # (k,) descending, clamped at 0
    graph_ids: tuple

    def to_csv_text(self) -> str:
        k = self.coordinates.shape[1]
        out = StringIO()
        out.write("graph_id," + ",".join("pc%d" % (i + 1) for i in range(k)) + "\n")
        for gid, coords in zip(self.graph_ids, self.coordinates):
            out.write(str(gid) + "," + ",".join("%.17g" % c for c in coords) + "\n")
        return out.getvalue()


def kpca(g: GramMatrix, k: int) -> KpcaResult:
    """Kernel PCA coordinates: center, eigendecompose, scale by sqrt(lambda).

    Eigenpairs sort descending with ties kept in eigensolver output order;
    negative eigenvalues clamp to 0; each eigenvector is oriented so its
    largest-magnitude entry is positive.
    """
    n = g.n
    if k > n:
        raise ContractError("requested %d components from a %d-row gram" % (k, n))
    if k < 1:
        raise ContractError("component count must be >= 1, got %d" % k)
    Kc = center(g).values
    lam, vec = np.linalg.eigh(Kc)
    order = np.argsort(-lam, kind="stable")
    lam = np.clip(lam[order[:k]], 0.0, None)
    vec = vec[:, order[:k]]
    for col in range(k):
        pivot = int(np.argmax(np.abs(vec[:, col])))
        if vec[pivot, col] < 0:
            vec[:, col] = -vec[:, col]
    coords = vec * np.sqrt(lam)[None, :]
    return KpcaResult(coordinates=coords, eigenvalues=lam, graph_ids=g.graph_ids)
