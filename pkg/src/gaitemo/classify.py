"""Gaussian naive Bayes, SMO-trained linear SVM, and stratified k-fold evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (DegenerateClass, GaitError, NotBinary, SingleClass, TooFewPerClass,
                     WidthMismatch)
from .skeleton import EmotionLabel

VARIANCE_FLOOR = 1e-9

CLASSIFIER_NAMES = {"gnb": "NaiveBayes", "svm": "SMO"}


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    walk_ids: tuple[str, ...]
    labels: tuple[EmotionLabel, ...]
    X: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2:
            raise WidthMismatch("feature matrix must be 2-D")
        object.__setattr__(self, "walk_ids", tuple(self.walk_ids))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not (len(self.walk_ids) == len(self.labels) == X.shape[0]):
            raise ValueError("walk_ids, labels and rows must have equal length")
        if not np.all(np.isfinite(X)):
            raise GaitError("feature values must be finite")
        X.flags.writeable = False
        object.__setattr__(self, "X", X)

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[str, EmotionLabel, Sequence[float]]]) -> "LabeledDataset":
        if not rows:
            return cls((), (), np.zeros((0, 0)))
        widths = {len(r[2]) for r in rows}
        if len(widths) > 1:
            raise WidthMismatch(f"feature vectors have mixed widths {sorted(widths)}")
        return cls([r[0] for r in rows], [r[1] for r in rows],
                   np.array([np.asarray(r[2], dtype=float) for r in rows]))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def width(self) -> int:
        return self.X.shape[1]

    @property
    def classes(self) -> tuple[EmotionLabel, ...]:
        """Distinct labels in EmotionLabel declaration order."""
        present = set(self.labels)
        return tuple(c for c in EmotionLabel if c in present)

    @property
    def y(self) -> np.ndarray:
        """Integer label codes (index into :attr:`classes`)."""
        index = {c: i for i, c in enumerate(self.classes)}
        return np.array([index[c] for c in self.labels], dtype=np.int64)

    def subset(self, idx) -> "LabeledDataset":
        idx = np.asarray(idx, dtype=np.int64)
        return LabeledDataset([self.walk_ids[i] for i in idx],
                              [self.labels[i] for i in idx], self.X[idx])


# Gaussian naive Bayes -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class GaussianNBModel:
    classes: tuple[EmotionLabel, ...]
    priors: np.ndarray
    means: np.ndarray      # (n_classes, width)
    variances: np.ndarray  # (n_classes, width), floored
    variance_floor: float = VARIANCE_FLOOR

    kind = "gnb"

    @property
    def width(self) -> int:
        return self.means.shape[1]


def train_gnb(d: LabeledDataset, variance_floor: float = VARIANCE_FLOOR) -> GaussianNBModel:
    """Per-class sample means and population variances (floored), count-based priors."""
    classes = d.classes
    if len(classes) < 2:
        raise SingleClass("naive Bayes needs at least two classes")
    y = d.y
    means, variances, priors = [], [], []
    for c in range(len(classes)):
        rows = d.X[y == c]
        if len(rows) < 2:
            raise DegenerateClass(f"class {classes[c]} has {len(rows)} row(s), needs 2")
        means.append(rows.mean(axis=0))
        variances.append(np.maximum(rows.var(axis=0), variance_floor))
        priors.append(len(rows) / len(d))
    return GaussianNBModel(classes, np.array(priors), np.array(means), np.array(variances),
                           variance_floor)


def gnb_log_posteriors(m: GaussianNBModel, X: np.ndarray) -> np.ndarray:
    """Unnormalized log posteriors, shape ``(n, n_classes)``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != m.width:
        raise WidthMismatch(f"model expects width {m.width}, got {X.shape[1]}")
    diff = X[:, None, :] - m.means[None, :, :]
    ll = -0.5 * (np.log(2 * np.pi * m.variances)[None] + diff ** 2 / m.variances[None])
    return np.log(m.priors)[None, :] + ll.sum(axis=2)


def predict_gnb(m: GaussianNBModel, x) -> tuple[EmotionLabel, np.ndarray]:
    post = gnb_log_posteriors(m, np.asarray(x, dtype=float)[None, :])[0]
    return m.classes[int(np.argmax(post))], post


# Linear SVM trained by simplified SMO --------------------------------------

@dataclass(frozen=True, eq=False)
class LinearSVMModel:
    """``sign(w . (x - shift) / scale + b)``; classes[1] is the positive side."""

    classes: tuple[EmotionLabel, EmotionLabel]
    weights: np.ndarray
    bias: float
    C: float
    shift: np.ndarray | None = None
    scale: np.ndarray | None = None
    iterations: int = 0
    kkt_violations_remaining: int = 0
    converged: bool = True

    kind = "svm"

    @property
    def width(self) -> int:
        return len(self.weights)

    @property
    def degenerate(self) -> bool:
        return not np.any(self.weights)


@dataclass
class SMOResult:
    model: LinearSVMModel
    alphas: np.ndarray
    y: np.ndarray


def _kkt_violations(alphas, y, margins, C, tol) -> int:
    r = y * margins - 1.0
    return int(np.sum(((r < -tol) & (alphas < C)) | ((r > tol) & (alphas > 0))))


def smo_fit(d: LabeledDataset, C: float = 1.0, tol: float = 1e-3, max_passes: int = 10,
            max_iter: int = 100_000, seed: int = 0, standardize: bool = False) -> SMOResult:
    """Simplified SMO for the linear kernel, returning the dual variables too.

    ``max_iter`` caps the number of examined (i, j) pair candidates.
    """
    classes = d.classes
    if len(classes) != 2:
        raise NotBinary(f"SVM needs exactly 2 classes, got {len(classes)}")
    if not C > 0 or not tol > 0:
        raise ValueError("C and tol must be positive")
    X = np.array(d.X, dtype=float)
    shift = scale = None
    if standardize:
        shift = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        X = (X - shift) / scale
    y = np.where(d.y == 1, 1.0, -1.0)
    n = len(y)
    K = X @ X.T
    rng = np.random.default_rng(seed)
    alphas = np.zeros(n)
    b = 0.0
    # f(x_i) - b cached as K @ (alpha * y)
    f = np.zeros(n)
    passes = 0
    iters = 0
    while passes < max_passes and iters < max_iter:
        changed = 0
        for i in range(n):
            if iters >= max_iter:
                break
            iters += 1
            Ei = f[i] + b - y[i]
            if not ((y[i] * Ei < -tol and alphas[i] < C) or (y[i] * Ei > tol and alphas[i] > 0)):
                continue
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            Ej = f[j] + b - y[j]
            ai_old, aj_old = alphas[i], alphas[j]
            if y[i] != y[j]:
                L, H = max(0.0, aj_old - ai_old), min(C, C + aj_old - ai_old)
            else:
                L, H = max(0.0, ai_old + aj_old - C), min(C, ai_old + aj_old)
            if L == H:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0:
                continue
            aj = min(H, max(L, aj_old - y[j] * (Ei - Ej) / eta))
            if abs(aj - aj_old) < 1e-5:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            # keep the box exactly; the pair update preserves sum(alpha * y)
            ai = min(C, max(0.0, ai))
            di, dj = ai - ai_old, aj - aj_old
            b1 = b - Ei - y[i] * di * K[i, i] - y[j] * dj * K[i, j]
            b2 = b - Ej - y[i] * di * K[i, j] - y[j] * dj * K[j, j]
            if 0 < ai < C:
                b = b1
            elif 0 < aj < C:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            alphas[i], alphas[j] = ai, aj
            f += y[i] * di * K[:, i] + y[j] * dj * K[:, j]
            changed += 1
        passes = passes + 1 if changed == 0 else 0

    w = (alphas * y) @ X
    free = (alphas > 1e-8) & (alphas < C - 1e-8)
    if np.any(free):
        b = float(np.mean(y[free] - X[free] @ w))
    violations = _kkt_violations(alphas, y, X @ w + b, C, tol)
    model = LinearSVMModel(classes, w, float(b), float(C), shift, scale, iters, violations,
                           converged=passes >= max_passes)
    return SMOResult(model, alphas, y)


def train_svm_smo(d: LabeledDataset, C: float = 1.0, tol: float = 1e-3, max_passes: int = 10,
                  max_iter: int = 100_000, seed: int = 0,
                  standardize: bool = False) -> LinearSVMModel:
    return smo_fit(d, C, tol, max_passes, max_iter, seed, standardize).model


def svm_decision(m: LinearSVMModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != m.width:
        raise WidthMismatch(f"model expects width {m.width}, got {X.shape[1]}")
    if m.shift is not None:
        X = (X - m.shift) / m.scale
    return X @ m.weights + m.bias


def predict_svm(m: LinearSVMModel, x) -> tuple[EmotionLabel, float]:
    """A zero decision value goes to the positive class ``m.classes[1]``."""
    value = float(svm_decision(m, np.asarray(x, dtype=float)[None, :])[0])
    return m.classes[1] if value >= 0 else m.classes[0], value


# Shared front end -----------------------------------------------------------

ClassifierModel = Union[GaussianNBModel, LinearSVMModel]


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "gnb"
    C: float = 1.0
    tol: float = 1e-3
    max_passes: int = 10
    max_iter: int = 100_000
    seed: int = 0
    standardize: bool = True  # svm only
    variance_floor: float = VARIANCE_FLOOR

    def __post_init__(self):
        if self.kind not in CLASSIFIER_NAMES:
            raise ValueError(f"unknown classifier {self.kind!r}; choose from {sorted(CLASSIFIER_NAMES)}")

    @property
    def display_name(self) -> str:
        return CLASSIFIER_NAMES[self.kind]


def train(spec: ClassifierSpec, d: LabeledDataset) -> ClassifierModel:
    if spec.kind == "gnb":
        return train_gnb(d, spec.variance_floor)
    return train_svm_smo(d, spec.C, spec.tol, spec.max_passes, spec.max_iter, spec.seed,
                         spec.standardize)


def predict(m: ClassifierModel, X) -> list[EmotionLabel]:
    """Vectorized prediction over the rows of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(m, GaussianNBModel):
        return [m.classes[i] for i in np.argmax(gnb_log_posteriors(m, X), axis=1)]
    values = svm_decision(m, X)
    return [m.classes[1] if v >= 0 else m.classes[0] for v in values]


# Evaluation -------------------------------------------------------------------

def stratified_kfold(d: LabeledDataset, k: int, seed: int = 0) -> list[np.ndarray]:
    """Seeded per-class shuffle, then round-robin fold assignment.

    The round-robin position carries over from one class to the next, so fold
    sizes stay balanced overall as well as per class.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    y = d.y
    counts = np.bincount(y, minlength=len(d.classes))
    if len(d) == 0 or np.any(counts < k):
        raise TooFewPerClass(f"every class needs at least {k} rows, got "
                             f"{dict(zip(map(str, d.classes), counts.tolist()))}")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for c in range(len(d.classes)):
        members = rng.permutation(np.flatnonzero(y == c))
        for pos, idx in enumerate(members):
            folds[(offset + pos) % k].append(int(idx))
        offset = (offset + len(members)) % k
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass
class EvalReport:
    classifier: str
    classes: tuple[EmotionLabel, ...]
    confusion: np.ndarray  # rows = true class, cols = predicted class
    fold_accuracies: list[float]
    seed: int
    k: int
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        """Percentage of correctly classified walks."""
        return 100.0 * float(np.trace(self.confusion)) / self.total if self.total else math.nan

    @property
    def display_name(self) -> str:
        return CLASSIFIER_NAMES.get(self.classifier, self.classifier)


def _folds_for(d: LabeledDataset, k: int, seed: int) -> list[np.ndarray]:
    if k == len(d):
        # leave-one-out: stratification is meaningless with one row per fold
        return [np.array([i]) for i in range(len(d))]
    return stratified_kfold(d, k, seed)


def cross_validate(d: LabeledDataset, spec: ClassifierSpec = ClassifierSpec(), k: int = 10,
                   seed: int = 0) -> EvalReport:
    """Train on k-1 folds, predict the held-out fold, accumulate one confusion matrix."""
    classes = d.classes
    if len(classes) < 2:
        raise SingleClass("cross-validation needs at least two classes")
    folds = _folds_for(d, k, seed)
    index = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)
    fold_acc = []
    notes = []
    all_idx = np.arange(len(d))
    for fi, test in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test)
        model = train(spec, d.subset(train_idx))
        if isinstance(model, LinearSVMModel) and not model.converged:
            notes.append(f"fold {fi}: SMO hit the iteration cap "
                         f"({model.kkt_violations_remaining} KKT violations left)")
        pred = predict(model, d.X[test])
        correct = 0
        for i, p in zip(test, pred):
            confusion[index[d.labels[i]], index[p]] += 1
            correct += d.labels[i] == p
        fold_acc.append(100.0 * correct / len(test))
    return EvalReport(spec.kind, classes, confusion, fold_acc, seed, k, notes)


def format_table(reports: Sequence[EvalReport | str], names: Sequence[str] | None = None,
                 header: str = "Classifier") -> str:
    """Accuracy table with one column per run, laid out like a results table.

    A ``str`` entry stands for a run that failed and is shown as an error cell.
    """
    if names is None:
        names = [r.display_name if isinstance(r, EvalReport) else "?" for r in reports]
    heads = [header] + list(names)
    cells = ["Accuracy(%)"] + [f"{r.accuracy:.4f}" if isinstance(r, EvalReport) else f"error: {r}"
                               for r in reports]
    widths = [max(len(a), len(b)) for a, b in zip(heads, cells)]
    rule = "-" * (sum(widths) + 3 * (len(widths) - 1))

    def line(xs):
        return " | ".join(x.ljust(w) for x, w in zip(xs, widths)).rstrip()

    return "\n".join([rule, line(heads), rule, line(cells), rule])
