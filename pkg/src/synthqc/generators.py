"""Baseline synthetic-data generators.

All three resample observed values, so output schemas equal the input
schema and every generated value comes from the training data:

- bootstrap: whole rows with replacement (joint preserved up to noise);
- independent: each column resampled on its own (marginals preserved,
  joint destroyed);
- sequential CART: columns synthesized one at a time in ascending
  distinct-count order, each conditioned on the previously generated
  columns through a tree fit on the real data, drawing from leaf values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._seeding import derive_seed, make_rng
from .imputation import impute_substitution
from .models.cart import CartTree
from .tabular import Column, ColumnKind, Table, category_frequencies


def gen_bootstrap(train: Table, n_rows: int, seed: int) -> Table:
    if train.n_rows == 0:
        raise ValueError("cannot generate from an empty table")
    rng = make_rng(seed, "bootstrap")
    return train.take(rng.integers(0, train.n_rows, size=n_rows))


def gen_independent(train: Table, n_rows: int, seed: int) -> Table:
    """Resample every column independently (missing cells resample too,
    preserving each column's missingness rate)."""
    if train.n_rows == 0:
        raise ValueError("cannot generate from an empty table")
    columns = []
    for j, col in enumerate(train.columns):
        rng = make_rng(seed, "independent-column", j)
        rows = rng.integers(0, train.n_rows, size=n_rows)
        columns.append(Column(col.name, col.kind, col.values[rows]))
    return Table(columns)


@dataclass(frozen=True)
class SeqCartConfig:
    """Tree controls for the conditional fits; the defaults follow the
    rpart conventions of the scheme this reimplements (leaves of at least
    5 rows, nodes under 20 rows never split)."""

    min_leaf: int = 5
    min_split: int = 20
    max_depth: int | None = None


def _distinct_count(col: Column) -> int:
    return len(set(col.non_missing().tolist()))


def _encoder(col: Column):
    """Fixed value -> float mapping from the training column, reused for
    routing synthetic prefixes through trees fit on real data."""
    if col.kind is ColumnKind.NUMERIC:
        return lambda values: np.asarray(values, dtype=np.float64)
    freqs = category_frequencies(col)
    return lambda values: np.array([freqs[v] for v in values], dtype=np.float64)


def gen_sequential_cart(train: Table, n_rows: int, seed: int,
                        cfg: SeqCartConfig | None = None) -> Table:
    """Synthpop-style sequential synthesis with CART conditionals.

    Column order: ascending distinct-value count, ties keeping original
    column order. The first column is sampled from its empirical marginal;
    each later column is drawn from the leaf its synthetic prefix reaches
    in a tree fit on the real prefix columns. Rows whose target value is
    missing are left out of that column's fit, so the output is complete
    even when the input is not.
    """
    if train.n_cols < 1:
        raise ValueError("need at least one column")
    if train.n_rows < 10:
        raise ValueError(f"need at least 10 training rows, got {train.n_rows}")
    cfg = cfg or SeqCartConfig()
    order = sorted(range(train.n_cols), key=lambda j: (_distinct_count(train.columns[j]), j))
    filled = impute_substitution(train)  # predictor gaps only; targets keep their own mask
    encoders = [_encoder(filled.columns[j]) for j in range(train.n_cols)]

    out_values: dict[int, np.ndarray] = {}
    prefix_cols: list[np.ndarray] = []  # encoded synthetic prefixes, synthesis order
    for pos, j in enumerate(order):
        col = train.columns[j]
        rng = make_rng(seed, "seqcart-column", pos)
        observed_rows = np.flatnonzero(~col.missing_mask())
        target = col.values[observed_rows]
        if pos == 0:
            picks = rng.integers(0, len(target), size=n_rows)
            values = target[picks]
        else:
            x_fit = np.column_stack([
                encoders[prev](filled.columns[prev].values[observed_rows])
                for prev in order[:pos]
            ])
            x_route = np.column_stack(prefix_cols)
            if col.kind is ColumnKind.NUMERIC:
                tree = CartTree("regression", cfg.max_depth, cfg.min_leaf,
                                min_split=cfg.min_split)
                tree.fit(x_fit, target.astype(np.float64))
            else:
                cats = sorted(set(target.tolist()))
                index = {v: i for i, v in enumerate(cats)}
                codes = np.array([index[v] for v in target], dtype=np.int64)
                tree = CartTree("classification", cfg.max_depth, cfg.min_leaf,
                                n_classes=len(cats), min_split=cfg.min_split)
                tree.fit(x_fit, codes)
            values = np.empty(n_rows, dtype=col.values.dtype)
            for i, leaf in enumerate(tree.leaf_training_rows(x_route)):
                values[i] = target[leaf[rng.integers(len(leaf))]]
        out_values[j] = values
        prefix_cols.append(encoders[j](values))
    return Table([Column(c.name, c.kind, out_values[j])
                  for j, c in enumerate(train.columns)])


def gen_ensemble(generator, train: Table, m: int, seed: int) -> list[Table]:
    """m datapoints of |train| rows each, with per-datapoint derived seeds."""
    if m < 1:
        raise ValueError("ensemble size must be >= 1")
    return [generator(train, train.n_rows, derive_seed(seed, "datapoint", i))
            for i in range(m)]


GENERATORS = {
    "bootstrap": gen_bootstrap,
    "independent": gen_independent,
    "seqcart": gen_sequential_cart,
}
