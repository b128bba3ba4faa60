"""C-SVM on precomputed kernels, trained by SMO, with stratified k-fold CV.

train() solves the standard box-constrained dual on a training Gram block.
cross_validate() runs seeded stratified outer folds; the regularization
constant is chosen per outer fold by nested inner cross-validation on the
training rows only (ties go to the earliest grid entry). Multiclass uses
one-vs-rest with argmax over decision values.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import smo_kernel
from .errors import ContractError, ConvergenceError
from .kernels import GramMatrix

DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0, 100.0)
MAX_PAIR_UPDATES = 1_000_000
_SUPPORT_EPS = 1e-12


@dataclass(frozen=True)
class SvmModel:
    support_indices: np.ndarray  # training-row indices with alpha > 0
    dual_coefs: np.ndarray  # alpha_i * y_i at the support rows
    bias: float
    C: float
    n_train: int

    def decision_value(self, kernel_row: np.ndarray) -> float:
        if kernel_row.shape[0] != self.n_train:
            raise ContractError(
                "kernel row has %d entries, training size is %d"
                % (kernel_row.shape[0], self.n_train)
            )
        return float(self.dual_coefs @ kernel_row[self.support_indices] + self.bias)


def train(
    gram_sub: np.ndarray,
    labels: np.ndarray,
    C: float = 1.0,
    tol: float = 1e-3,
    max_updates: int = MAX_PAIR_UPDATES,
) -> SvmModel:
    """Fit a C-SVM on a precomputed training-rows kernel block."""
    K = np.ascontiguousarray(gram_sub, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ContractError("training kernel must be square, got shape %r" % (K.shape,))
    if y.shape[0] != K.shape[0]:
        raise ContractError(
            "%d labels for a %d-row kernel" % (y.shape[0], K.shape[0])
        )
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ContractError("training labels must contain both classes")
    if not C > 0:
        raise ContractError("C must be positive, got %r" % (C,))
    alpha, bias, updates, residual = smo_kernel(K, y, float(C), float(tol), max_updates)
    if residual > tol:
        raise ConvergenceError(
            "SMO stopped after %d pair updates with KKT residual %g (tol %g)"
            % (updates, residual, tol)
        )
    support = np.flatnonzero(alpha > _SUPPORT_EPS)
    return SvmModel(
        support_indices=support,
        dual_coefs=alpha[support] * y[support],
        bias=float(bias),
        C=float(C),
        n_train=K.shape[0],
    )


def predict(model: SvmModel, kernel_row: np.ndarray) -> int:
    """Classify one test point from its kernel values against training rows.

    Tie rule: a decision value of exactly 0 maps to +1.
    """
    row = np.asarray(kernel_row, dtype=np.float64)
    if row.ndim != 1:
        raise ContractError("kernel row must be 1-dimensional")
    return 1 if model.decision_value(row) >= 0.0 else -1


def stratified_folds(labels: np.ndarray, k: int, seed: int):
    """Seeded stratified partition: list of k disjoint test-index arrays.

    Each class is shuffled independently and dealt round-robin, so every
    fold carries every class as evenly as the counts allow.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ContractError("fold count must be >= 2, got %d" % k)
    classes, counts = np.unique(labels, return_counts=True)
    short = classes[counts < k]
    if short.size:
        raise ContractError(
            "class %r has %d members, fewer than %d folds"
            % (short[0], int(counts[classes == short[0]][0]), k)
        )
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    for c in classes:
        idx = np.flatnonzero(labels == c)
        rng.shuffle(idx)
        for t, i in enumerate(idx):
            folds[t % k].append(int(i))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def _machines_for(K, y, C, tol):
    """One trained machine per class (one-vs-rest); binary uses a single
    machine on the sorted-second class."""
    classes = np.unique(y)
    if classes.size < 2:
        raise ContractError("training labels must contain at least two classes")
    if classes.size == 2:
        ybin = np.where(y == classes[1], 1.0, -1.0)
        return classes, [train(K, ybin, C=C, tol=tol)]
    machines = []
    for c in classes:
        ybin = np.where(y == c, 1.0, -1.0)
        machines.append(train(K, ybin, C=C, tol=tol))
    return classes, machines


def _predict_block(classes, machines, rows):
    """Predicted class per row of a (test x train) kernel block."""
    if classes.size == 2:
        model = machines[0]
        dec = rows[:, model.support_indices] @ model.dual_coefs + model.bias
        return np.where(dec >= 0.0, classes[1], classes[0])
    decs = np.empty((rows.shape[0], classes.size))
    for ci, model in enumerate(machines):
        decs[:, ci] = rows[:, model.support_indices] @ model.dual_coefs + model.bias
    return classes[np.argmax(decs, axis=1)]


def _fold_accuracy(K, y, train_idx, test_idx, C, tol):
    K_tr = np.ascontiguousarray(K[np.ix_(train_idx, train_idx)])
    classes, machines = _machines_for(K_tr, y[train_idx], C, tol)
    rows = K[np.ix_(test_idx, train_idx)]
    pred = _predict_block(classes, machines, rows)
    return float(np.mean(pred == y[test_idx]))


def _select_C(K, y, train_idx, C_grid, seed, fold_no, tol):
    """Inner cross-validated C choice on the training rows only."""
    y_tr = y[train_idx]
    _, counts = np.unique(y_tr, return_counts=True)
    inner_k = min(3, int(counts.min()))
    if inner_k < 2:
        # too few members for any inner split; fall back to the grid head
        return float(C_grid[0])
    inner_seed = (seed * 1_000_003 + fold_no * 7_919 + 17) % (2**32)
    inner = stratified_folds(y_tr, inner_k, inner_seed)
    best_C, best_acc = None, -1.0
    for C in C_grid:
        accs = []
        for f in range(inner_k):
            te = train_idx[inner[f]]
            tr = train_idx[np.concatenate([inner[g] for g in range(inner_k) if g != f])]
            accs.append(_fold_accuracy(K, y, np.sort(tr), te, C, tol))
        acc = float(np.mean(accs))
        if acc > best_acc:
            best_acc, best_C = acc, float(C)
    return best_C


@dataclass(frozen=True)
class CvReport:
    fold_accuracies: tuple
    mean: float
    std_error: float
    C: float
    seed: int
    per_fold_C: tuple = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "fold_accuracies": list(self.fold_accuracies),
            "mean": self.mean,
            "std_error": self.std_error,
            "C": self.C,
            "per_fold_C": list(self.per_fold_C),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def to_table_text(self) -> str:
        lines = ["fold  accuracy  C"]
        for i, (a, c) in enumerate(zip(self.fold_accuracies, self.per_fold_C), start=1):
            lines.append("%4d  %8.4f  %g" % (i, a, c))
        lines.append("mean  %8.4f  +/- %.4f (std error), modal C=%g, seed=%d"
                      % (self.mean, self.std_error, self.C, self.seed))
        return "\n".join(lines) + "\n"


def cross_validate(
    gram,
    labels,
    k: int = 10,
    C_grid: Sequence[float] = DEFAULT_C_GRID,
    seed: int = 0,
    tol: float = 1e-3,
) -> CvReport:
    """Stratified k-fold accuracy with nested per-fold C selection."""
    K = gram.values if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=np.float64)
    y = np.asarray(labels)
    if y.shape[0] != K.shape[0]:
        raise ContractError("%d labels for a %d-row gram" % (y.shape[0], K.shape[0]))
    if not C_grid:
        raise ContractError("C grid must be nonempty")
    folds = stratified_folds(y, k, seed)
    all_idx = np.arange(K.shape[0])
    accs, fold_Cs = [], []
    for f in range(k):
        test_idx = folds[f]
        train_idx = np.setdiff1d(all_idx, test_idx)
        C = _select_C(K, y, train_idx, C_grid, seed, f, tol)
        fold_Cs.append(C)
        accs.append(_fold_accuracy(K, y, train_idx, test_idx, C, tol))
    # modal C; ties resolve to earliest grid position
    uniq = list(dict.fromkeys(fold_Cs))
    uniq.sort(key=lambda c: list(C_grid).index(c))
    modal = max(uniq, key=lambda c: fold_Cs.count(c))
    mean = float(np.mean(accs))
    std_error = float(np.std(accs, ddof=1) / math.sqrt(k))
    return CvReport(
        fold_accuracies=tuple(accs),
        mean=mean,
        std_error=std_error,
        C=float(modal),
        seed=int(seed),
        per_fold_C=tuple(fold_Cs),
    )
