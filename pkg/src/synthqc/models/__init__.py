"""Supervised learners used across the package: propensity scoring,
synthetic-vs-real performance evaluation, and CART for imputation and
sequential generation.

All fits are deterministic functions of (X, y, config). Default
hyperparameters (fixed, recorded in reports):

    max_depth      None (cap 64)   tree depth, CART and forest trees
    min_leaf       1               minimum rows per leaf
    n_trees        50              random forest size
    n_rounds       100             boosting rounds
    gbt_depth      3               boosted tree depth
    learning_rate  0.1             boosting shrinkage and SGD/GD step
    l2_penalty     1e-4            logistic / SVM regularization
    n_epochs       300             logistic GD and SVM SGD epochs
    rf_feature_fraction "sqrt"     per-tree feature subsample
    rf_bootstrap   True            per-tree row bagging
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .cart import CartTree
from .forest import RandomForestModel
from .gbt import GbtModel
from .linear import LinearSvmModel, LogisticModel, logistic_loss_grad


class DegenerateLabelError(ValueError):
    pass


class InputError(ValueError):
    pass


class UnsupportedOperationError(TypeError):
    pass


class ClassifierKind(enum.Enum):
    LOGISTIC = "lr"
    CART_TREE = "dt"
    LINEAR_SVM = "svm"
    RANDOM_FOREST = "rf"
    GRADIENT_BOOSTED_TREES = "gbt"


#: canonical ordering for reports and winner tie-breaks
CLASSIFIER_ORDER = (
    ClassifierKind.LOGISTIC,
    ClassifierKind.CART_TREE,
    ClassifierKind.LINEAR_SVM,
    ClassifierKind.RANDOM_FOREST,
)


@dataclass(frozen=True)
class FitConfig:
    kind: ClassifierKind = ClassifierKind.GRADIENT_BOOSTED_TREES
    seed: int = 0
    max_depth: int | None = None
    min_leaf: int = 1
    n_trees: int = 50
    n_rounds: int = 100
    gbt_depth: int = 3
    learning_rate: float = 0.1
    l2_penalty: float = 1e-4
    n_epochs: int = 300
    rf_feature_fraction: float | str = "sqrt"
    rf_bootstrap: bool = True

    def with_seed(self, seed: int) -> "FitConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items()}
        d["kind"] = self.kind.value
        return d


@dataclass(frozen=True)
class TrainedModel:
    kind: ClassifierKind
    classes: np.ndarray  # sorted label values; prediction ties pick the lowest index
    n_features: int
    inner: object

    def supports_proba(self) -> bool:
        return self.kind is not ClassifierKind.LINEAR_SVM


def _encode_labels(y) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=object)
    classes = np.array(sorted(set(y.tolist())), dtype=object)
    index = {v: i for i, v in enumerate(classes)}
    codes = np.array([index[v] for v in y], dtype=np.int64)
    return classes, codes


def train_classifier(X, y, cfg: FitConfig) -> TrainedModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=object)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise InputError(f"X has {X.shape[0]} rows but y has {len(y)} labels")
    if not np.all(np.isfinite(X)):
        raise InputError("feature matrix contains non-finite values")
    classes, codes = _encode_labels(y)
    k = len(classes)
    if k < 2:
        raise DegenerateLabelError("need at least 2 distinct labels")

    if cfg.kind is ClassifierKind.LOGISTIC:
        inner = LogisticModel(k, cfg.learning_rate, cfg.l2_penalty, cfg.n_epochs).fit(X, codes)
    elif cfg.kind is ClassifierKind.CART_TREE:
        inner = CartTree("classification", cfg.max_depth, cfg.min_leaf, n_classes=k).fit(X, codes)
    elif cfg.kind is ClassifierKind.LINEAR_SVM:
        inner = LinearSvmModel(k, cfg.learning_rate, cfg.l2_penalty, cfg.n_epochs,
                               cfg.seed).fit(X, codes)
    elif cfg.kind is ClassifierKind.RANDOM_FOREST:
        inner = RandomForestModel(k, cfg.n_trees, cfg.max_depth, cfg.min_leaf,
                                  cfg.rf_feature_fraction, cfg.rf_bootstrap,
                                  cfg.seed).fit(X, codes)
    elif cfg.kind is ClassifierKind.GRADIENT_BOOSTED_TREES:
        inner = GbtModel(k, cfg.n_rounds, cfg.gbt_depth, cfg.min_leaf,
                         cfg.learning_rate).fit(X, codes)
    else:
        raise InputError(f"unknown classifier kind {cfg.kind}")
    return TrainedModel(kind=cfg.kind, classes=classes, n_features=X.shape[1], inner=inner)


def _check_schema(m: TrainedModel, X: np.ndarray):
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise InputError(
            f"model was trained on {m.n_features} features, got matrix with shape {X.shape}"
        )


def predict_labels(m: TrainedModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        return np.array([], dtype=object)
    _check_schema(m, X)
    codes = m.inner.predict_codes(X)
    return m.classes[codes]


def predict_proba(m: TrainedModel, X) -> np.ndarray:
    if not m.supports_proba():
        raise UnsupportedOperationError("linear SVM does not produce probabilities")
    X = np.asarray(X, dtype=np.float64)
    _check_schema(m, X)
    return m.inner.predict_proba(X)


def accuracy(m: TrainedModel, X, y) -> float:
    y = np.asarray(y, dtype=object)
    if len(y) == 0:
        raise InputError("accuracy on empty input")
    pred = predict_labels(m, X)
    return float(np.mean([p == t for p, t in zip(pred, y)]))


__all__ = [
    "CartTree", "ClassifierKind", "CLASSIFIER_ORDER", "DegenerateLabelError",
    "FitConfig", "GbtModel", "InputError", "LinearSvmModel", "LogisticModel",
    "RandomForestModel", "TrainedModel", "UnsupportedOperationError", "accuracy",
    "logistic_loss_grad", "predict_labels", "predict_proba", "train_classifier",
]
