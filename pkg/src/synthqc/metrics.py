"""The four broad utility metrics computed on an (imputed real, imputed
synthetic) table pair.

Attribute fidelity: mean per-column Hellinger distance (H), categorical
directly, numeric via shared-range equal-width histograms. Bivariate
fidelity: Frobenius norm of the difference between the two Pearson
correlation matrices (PCD). Population fidelity: the log-cluster score
(LC) from k-prototypes clustering of the merged rows, and the propensity
score (p), the mean squared deviation from 1/2 of a classifier's
probability that each merged record is real. Lower is better for all
four.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ._seeding import derive_seed, make_rng
from .kernels import assign_clusters
from .models import (
    ClassifierKind,
    FitConfig,
    UnsupportedOperationError,
    predict_proba,
    train_classifier,
)
from .tabular import (
    Column,
    ColumnKind,
    SchemaError,
    Table,
    encode_numeric,
    standardize_columns,
)

DEFAULT_BINS = 20
LC_FLOOR = 1e-12
MAX_CLUSTER_ITERATIONS = 100
DEFAULT_CLUSTER_RESTARTS = 10

#: canonical metric order used for vectors, PCA fitting and serialization
METRIC_NAMES = ("hellinger", "pcd", "log_cluster", "propensity")


@dataclass(frozen=True)
class MetricVector:
    hellinger: float
    pcd: float
    log_cluster: float
    propensity: float

    def as_array(self) -> np.ndarray:
        return np.array([self.hellinger, self.pcd, self.log_cluster, self.propensity])

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    @classmethod
    def from_dict(cls, d: dict) -> "MetricVector":
        return cls(**{name: float(d[name]) for name in METRIC_NAMES})

    @classmethod
    def mean(cls, vectors: list["MetricVector"]) -> "MetricVector":
        stacked = np.array([v.as_array() for v in vectors])
        return cls(*stacked.mean(axis=0))


@dataclass(frozen=True)
class MetricConfig:
    bins: int = DEFAULT_BINS
    seed: int = 0
    propensity_model: FitConfig = field(default_factory=FitConfig)
    gamma: float | None = None  # None: 0.5 * mean stddev of raw numeric columns
    cluster_restarts: int = DEFAULT_CLUSTER_RESTARTS

    def with_seed(self, seed: int) -> "MetricConfig":
        return replace(self, seed=seed)


def _check_pair(real: Table, synth: Table):
    if not real.same_schema(synth):
        raise SchemaError("real and synthetic tables have different schemas")
    if real.has_missing() or synth.has_missing():
        raise ValueError("metrics require complete tables; impute both first")


def hellinger_column(real_col: Column, synth_col: Column, bins: int = DEFAULT_BINS) -> float:
    """Hellinger distance between two columns of the same name and kind.

    Categorical: (1/sqrt 2) * sqrt(sum_i (sqrt p_i - sqrt q_i)^2) over the
    union of categories. Numeric: both columns are massed onto `bins`
    equal-width bins spanning the union range, then the same formula runs
    on the bin masses.
    """
    if real_col.name != synth_col.name or real_col.kind is not synth_col.kind:
        raise SchemaError(
            f"column mismatch: {real_col.name!r}/{real_col.kind.value} vs "
            f"{synth_col.name!r}/{synth_col.kind.value}"
        )
    if len(real_col.values) == 0 or len(synth_col.values) == 0:
        raise ValueError("hellinger of an empty column")
    if real_col.kind is ColumnKind.CATEGORICAL:
        cats = sorted(set(real_col.values.tolist()) | set(synth_col.values.tolist()))
        p = _cat_masses(real_col.values, cats)
        q = _cat_masses(synth_col.values, cats)
    else:
        lo = min(real_col.values.min(), synth_col.values.min())
        hi = max(real_col.values.max(), synth_col.values.max())
        if lo == hi:
            return 0.0
        p = np.histogram(real_col.values, bins=bins, range=(lo, hi))[0] / len(real_col.values)
        q = np.histogram(synth_col.values, bins=bins, range=(lo, hi))[0] / len(synth_col.values)
    return float(np.sqrt(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2)) / np.sqrt(2.0))


def _cat_masses(values, cats) -> np.ndarray:
    index = {c: i for i, c in enumerate(cats)}
    counts = np.zeros(len(cats))
    for v in values:
        counts[index[v]] += 1.0
    return counts / len(values)


def hellinger_overall(real: Table, synth: Table, bins: int = DEFAULT_BINS) -> float:
    """Mean Hellinger distance across all columns."""
    _check_pair(real, synth)
    per_column = [
        hellinger_column(rc, sc, bins) for rc, sc in zip(real.columns, synth.columns)
    ]
    return float(np.mean(per_column))


def _canonical_order(table: Table) -> np.ndarray:
    """Row permutation sorting the table lexicographically by its columns.

    The metrics are row-order-free on paper; processing rows in canonical
    order makes that exact in floating point too (reductions and seeded
    prototype picks see the same sequence whatever order the caller used).
    """
    keys = []
    for col in reversed(table.columns):  # np.lexsort treats the LAST key as primary
        if col.kind is ColumnKind.NUMERIC:
            keys.append(col.values)
        else:
            cats = sorted(set(col.values.tolist()))
            index = {c: i for i, c in enumerate(cats)}
            keys.append(np.array([index[v] for v in col.values], dtype=np.int64))
    return np.lexsort(tuple(keys))


def correlation_matrix(table: Table) -> np.ndarray:
    """Pearson correlations on the frequency-encoded table; any pair that
    involves a single-valued column is 0, the diagonal is always 1."""
    if table.has_missing():
        raise ValueError("correlation_matrix requires a complete table")
    table = table.take(_canonical_order(table))
    z, _ = standardize_columns(encode_numeric(table))
    n = table.n_rows
    corr = z.T @ z / n  # constant columns are all-zero in z, so their pairs land at 0
    corr = np.clip(corr, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def pcd(real: Table, synth: Table) -> float:
    """Frobenius norm of Corr(real) - Corr(synth)."""
    _check_pair(real, synth)
    return float(np.linalg.norm(correlation_matrix(real) - correlation_matrix(synth), "fro"))


@dataclass(frozen=True)
class ClusterStats:
    k: int
    sizes: np.ndarray       # n_i, total members per cluster
    real_counts: np.ndarray  # real members per cluster

    def __post_init__(self):
        if np.any(self.sizes < 1):
            raise ValueError("empty cluster in ClusterStats")


@dataclass(frozen=True)
class MixedMatrix:
    """Merged rows ready for k-prototypes: standardized numeric block,
    categorical code block, the mixing weight and row provenance."""

    numeric: np.ndarray        # (n, p) float64, standardized
    categorical: np.ndarray    # (n, q) int64 codes
    cat_cards: tuple[int, ...]
    gamma: float
    is_real: np.ndarray        # (n,) bool

    @property
    def n_rows(self) -> int:
        return self.numeric.shape[0]


def mixed_from_tables(real: Table, synth: Table, gamma: float | None = None) -> MixedMatrix:
    _check_pair(real, synth)
    n = real.n_rows + synth.n_rows
    num_cols, cat_cols, cards = [], [], []
    for rc, sc in zip(real.columns, synth.columns):
        merged = np.concatenate([rc.values, sc.values])
        if rc.kind is ColumnKind.NUMERIC:
            num_cols.append(merged.astype(np.float64))
        else:
            cats = sorted(set(merged.tolist()))
            index = {c: i for i, c in enumerate(cats)}
            cat_cols.append(np.array([index[v] for v in merged], dtype=np.int64))
            cards.append(len(cats))
    # canonical row order: mixed metrics must not depend on input row order
    order = np.lexsort(tuple(reversed([c.astype(np.float64) for c in num_cols]
                                      + [c for c in cat_cols])))
    if num_cols:
        raw = np.column_stack(num_cols)[order]
        numeric, stats = standardize_columns(raw)
        default_gamma = 0.5 * float(stats.stddevs.mean())
    else:
        numeric = np.empty((n, 0), dtype=np.float64)
        default_gamma = 1.0
    categorical = (np.column_stack(cat_cols).astype(np.int64)[order]
                   if cat_cols else np.empty((n, 0), dtype=np.int64))
    is_real = np.zeros(n, dtype=bool)
    is_real[: real.n_rows] = True
    is_real = is_real[order]
    return MixedMatrix(
        numeric=np.ascontiguousarray(numeric),
        categorical=np.ascontiguousarray(categorical),
        cat_cards=tuple(cards),
        gamma=gamma if gamma is not None else default_gamma,
        is_real=is_real,
    )


def _distinct_row_starts(mixed: MixedMatrix) -> np.ndarray:
    """Indices of the first occurrence of each distinct row. Rows are already
    in canonical sorted order, so duplicates are adjacent."""
    n = mixed.n_rows
    if n == 0:
        return np.array([], dtype=np.int64)
    same = np.ones(n, dtype=bool)
    same[0] = False
    if mixed.numeric.shape[1]:
        same[1:] &= (mixed.numeric[1:] == mixed.numeric[:-1]).all(axis=1)
    if mixed.categorical.shape[1]:
        same[1:] &= (mixed.categorical[1:] == mixed.categorical[:-1]).all(axis=1)
    return np.flatnonzero(~same)


def _update_prototypes(mixed: MixedMatrix, labels: np.ndarray, k: int):
    counts = np.bincount(labels, minlength=k).astype(np.float64)
    proto_num = np.empty((k, mixed.numeric.shape[1]), dtype=np.float64)
    for j in range(mixed.numeric.shape[1]):
        sums = np.bincount(labels, weights=mixed.numeric[:, j], minlength=k)
        proto_num[:, j] = sums / counts
    proto_cat = np.empty((k, mixed.categorical.shape[1]), dtype=np.int64)
    for j in range(mixed.categorical.shape[1]):
        table = np.zeros((k, mixed.cat_cards[j]), dtype=np.int64)
        np.add.at(table, (labels, mixed.categorical[:, j]), 1)
        proto_cat[:, j] = table.argmax(axis=1)  # ties: lowest category code
    return np.ascontiguousarray(proto_num), np.ascontiguousarray(proto_cat)


def _lloyd(mixed: MixedMatrix, k: int, seed: int) -> tuple[np.ndarray, float]:
    """One seeded Lloyd run: assignment labels and the final clustering cost
    (sum of dissimilarities to the assigned prototypes). Stops on an
    assignment fixpoint or MAX_CLUSTER_ITERATIONS; empty clusters are
    reseeded with the point farthest from its own prototype."""
    n = mixed.n_rows
    rng = make_rng(seed, "kprototypes-init")
    # prototypes start on distinct rows where possible: coincident starts
    # would immediately empty clusters and push them onto outliers
    distinct = _distinct_row_starts(mixed)
    if len(distinct) >= k:
        start = distinct[rng.choice(len(distinct), size=k, replace=False)]
    else:
        start = rng.choice(n, size=k, replace=False)
    proto_num = np.ascontiguousarray(mixed.numeric[start])
    proto_cat = np.ascontiguousarray(mixed.categorical[start])
    labels = np.full(n, -1, dtype=np.int64)
    for _ in range(MAX_CLUSTER_ITERATIONS):
        new_labels, dists = assign_clusters(mixed.numeric, mixed.categorical,
                                            proto_num, proto_cat, mixed.gamma)
        counts = np.bincount(new_labels, minlength=k)
        for c in np.flatnonzero(counts == 0):
            far = int(np.argmax(dists))
            new_labels[far] = c
            dists[far] = -1.0
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        proto_num, proto_cat = _update_prototypes(mixed, labels, k)
    _, final_dists = assign_clusters(mixed.numeric, mixed.categorical,
                                     proto_num, proto_cat, mixed.gamma)
    return labels, float(final_dists.sum())


def cluster_mixed(mixed: MixedMatrix, k: int, seed: int,
                  restarts: int = DEFAULT_CLUSTER_RESTARTS) -> ClusterStats:
    """Cluster the merged rows and tally real membership per cluster.

    Runs `restarts` seeded Lloyd inits and keeps the lowest-cost clustering
    (ties to the earliest run), mirroring the n_init convention of the
    k-prototypes implementations this follows."""
    n = mixed.n_rows
    if k < 2 or k > n // 2:
        raise ValueError(f"k={k} out of range for {n} rows (need 2 <= k <= n/2)")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best_labels, best_cost = None, np.inf
    for r in range(restarts):
        labels, cost = _lloyd(mixed, k, derive_seed(seed, "restart", r))
        if cost < best_cost:
            best_labels, best_cost = labels, cost
    sizes = np.bincount(best_labels, minlength=k)
    real_counts = np.bincount(best_labels[mixed.is_real], minlength=k)
    return ClusterStats(k=k, sizes=sizes, real_counts=real_counts)


def lc_cluster_count(n_merged: int) -> int:
    """Cluster count for the log-cluster metric: floor(N/10), at least 2."""
    return max(2, n_merged // 10)


def log_cluster(real: Table, synth: Table, seed: int, gamma: float | None = None,
                restarts: int = DEFAULT_CLUSTER_RESTARTS) -> float:
    """log of the mean squared deviation of per-cluster real proportions
    from 1/2, with k = max(2, floor(N/10)) clusters on the merged rows.
    The log argument is floored at 1e-12 (perfect mixing is -inf)."""
    mixed = mixed_from_tables(real, synth, gamma)
    stats = cluster_mixed(mixed, lc_cluster_count(mixed.n_rows), seed, restarts)
    deviations = stats.real_counts / stats.sizes - 0.5
    return float(np.log(max(float(np.mean(deviations**2)), LC_FLOOR)))


def propensity(real: Table, synth: Table, cfg: FitConfig | None = None, seed: int = 0) -> float:
    """Mean of (p_hat - 0.5)^2 where p_hat is the in-sample probability that
    a merged record is real, from a classifier trained on the merged rows."""
    _check_pair(real, synth)
    cfg = cfg or FitConfig()
    if cfg.kind is ClassifierKind.LINEAR_SVM:
        raise UnsupportedOperationError("propensity needs probability output; "
                                        "linear SVM cannot provide it")
    merged = concat_rows(real, synth)
    y = np.array([1] * real.n_rows + [0] * synth.n_rows, dtype=object)
    order = _canonical_order(merged)
    merged, y = merged.take(order), y[order]
    X, _ = standardize_columns(encode_numeric(merged))
    model = train_classifier(X, y, cfg.with_seed(derive_seed(seed, "propensity-fit")))
    real_idx = int(np.flatnonzero(model.classes == 1)[0])
    p_hat = predict_proba(model, X)[:, real_idx]
    return propensity_from_scores(p_hat)


def propensity_from_scores(p_hat) -> float:
    """The propensity formula itself: mean of (p_hat_i - 0.5)^2."""
    p_hat = np.asarray(p_hat, dtype=np.float64)
    return float(np.mean((p_hat - 0.5) ** 2))


def concat_rows(a: Table, b: Table) -> Table:
    if not a.same_schema(b):
        raise SchemaError("cannot concatenate tables with different schemas")
    return Table([
        Column(ca.name, ca.kind, np.concatenate([ca.values, cb.values]))
        for ca, cb in zip(a.columns, b.columns)
    ])


def metric_vector(real: Table, synth: Table, config: MetricConfig | None = None) -> MetricVector:
    """All four metrics for one real/synthetic pair. Each stochastic metric
    derives its own sub-seed from config.seed, so results do not depend on
    evaluation order."""
    config = config or MetricConfig()
    _check_pair(real, synth)
    return MetricVector(
        hellinger=hellinger_overall(real, synth, config.bins),
        pcd=pcd(real, synth),
        log_cluster=log_cluster(real, synth, derive_seed(config.seed, "log-cluster"),
                                config.gamma, config.cluster_restarts),
        propensity=propensity(real, synth, config.propensity_model,
                              derive_seed(config.seed, "propensity")),
    )
