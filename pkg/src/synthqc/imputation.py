"""Single imputation: substitution (mean/mode), regression with noise, and
CART leaf sampling. Real and synthetic tables are always imputed
independently of each other.

Regression imputation deliberately does NOT clamp numeric predictions to
the observed range; producing out-of-range values is the behaviour the
out-of-range diagnostic exists to detect. The CART imputer draws from
observed leaf values, so it can never leave the observed range.
"""

from __future__ import annotations

import enum

import numpy as np

from ._seeding import make_rng
from .models import LogisticModel
from .models.cart import CartTree
from .tabular import Column, ColumnKind, SchemaError, Table, encode_numeric

CART_IMPUTE_MIN_LEAF = 5
CART_IMPUTE_MIN_SPLIT = 20


class UnimputableError(ValueError):
    pass


class ImputerKind(enum.Enum):
    SUBSTITUTION = "si"
    REGRESSION = "ri"
    CART = "cart"


def _column_mean(col: Column) -> float:
    present = col.non_missing()
    if present.size == 0:
        raise UnimputableError(f"column {col.name!r} has no observed values")
    return float(present.mean())


def _column_mode(col: Column) -> str:
    present = col.non_missing()
    if len(present) == 0:
        raise UnimputableError(f"column {col.name!r} has no observed values")
    counts: dict[str, int] = {}
    for v in present:
        counts[v] = counts.get(v, 0) + 1
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)  # lexicographic tie-break


def _substitute_column(col: Column) -> Column:
    mask = col.missing_mask()
    if not mask.any():
        return col
    values = col.values.copy()
    if col.kind is ColumnKind.NUMERIC:
        values[mask] = _column_mean(col)
    else:
        values[mask] = _column_mode(col)
    return Column(col.name, col.kind, values)


def impute_substitution(table: Table) -> Table:
    """Fill numeric gaps with the column mean, categorical with the mode."""
    return Table([_substitute_column(c) for c in table.columns])


def _predictor_matrix(table: Table, target: str) -> np.ndarray:
    """Other columns, substitution-filled and frequency-encoded."""
    others = impute_substitution(table.drop(target))
    return encode_numeric(others)


def _impute_one_regression(table, col, col_idx, seed, warnings_out):
    mask = col.missing_mask()
    X = _predictor_matrix(table, col.name)
    fit_rows = ~mask
    rng = make_rng(seed, "ri-column", col_idx)
    try:
        if col.kind is ColumnKind.NUMERIC:
            design = np.hstack([X[fit_rows], np.ones((int(fit_rows.sum()), 1))])
            y = col.values[fit_rows]
            beta, *_ = np.linalg.lstsq(design, y, rcond=None)
            resid_std = float((y - design @ beta).std())
            design_miss = np.hstack([X[mask], np.ones((int(mask.sum()), 1))])
            pred = design_miss @ beta
            filled = pred + rng.normal(0.0, 1.0, size=pred.shape) * resid_std
            values = col.values.copy()
            values[mask] = filled
            return Column(col.name, col.kind, values)
        observed = [v for v in col.values[fit_rows]]
        classes = sorted(set(observed))
        if len(classes) < 2:
            raise UnimputableError("single observed class")
        # one-vs-rest logistic machines, probabilities normalized per row
        scores = np.zeros((int(mask.sum()), len(classes)))
        for k, cls in enumerate(classes):
            codes = np.array([1 if v == cls else 0 for v in observed], dtype=np.int64)
            if codes.min() == codes.max():
                scores[:, k] = float(codes[0])
                continue
            machine = LogisticModel(2, learning_rate=0.1, l2=1e-4, n_epochs=300)
            machine.fit(X[fit_rows], codes)
            scores[:, k] = machine.predict_proba(X[mask])[:, 1]
        probs = scores / scores.sum(axis=1, keepdims=True)
        draws = [classes[rng.choice(len(classes), p=p)] for p in probs]
        values = col.values.copy()
        values[mask] = draws
        return Column(col.name, col.kind, values)
    except (np.linalg.LinAlgError, UnimputableError, ValueError) as exc:
        if warnings_out is not None:
            warnings_out.append(f"column {col.name!r}: regression fit failed ({exc}); "
                                "substituted mean/mode instead")
        return _substitute_column(col)


def impute_regression(table: Table, seed: int, warnings_out: list[str] | None = None) -> Table:
    """Least-squares (numeric) / one-vs-rest logistic (categorical) imputation.

    Numeric predictions get Gaussian noise with the fit's residual stddev;
    categorical cells are sampled from the predicted class distribution.
    Columns whose fit degenerates fall back to substitution and are noted
    in ``warnings_out``.
    """
    _check_imputable(table)
    out = []
    for j, col in enumerate(table.columns):
        if not col.missing_mask().any():
            out.append(col)
            continue
        out.append(_impute_one_regression(table, col, j, seed, warnings_out))
    return Table(out)


def impute_cart(table: Table, seed: int, warnings_out: list[str] | None = None) -> Table:
    """Tree imputation: route each missing row to a leaf of a CART fit on the
    observed rows, then draw uniformly from the observed target values held
    by that leaf. Values therefore stay inside the observed range."""
    _check_imputable(table)
    out = []
    for j, col in enumerate(table.columns):
        mask = col.missing_mask()
        if not mask.any():
            out.append(col)
            continue
        rng = make_rng(seed, "cart-column", j)
        X = _predictor_matrix(table, col.name)
        fit_rows = np.flatnonzero(~mask)
        try:
            if col.kind is ColumnKind.NUMERIC:
                y = col.values[fit_rows]
                tree = CartTree("regression", max_depth=None, min_leaf=CART_IMPUTE_MIN_LEAF,
                                min_split=CART_IMPUTE_MIN_SPLIT)
            else:
                observed = col.values[fit_rows]
                classes = sorted(set(observed.tolist()))
                index = {v: i for i, v in enumerate(classes)}
                y = np.array([index[v] for v in observed], dtype=np.int64)
                tree = CartTree("classification", max_depth=None,
                                min_leaf=CART_IMPUTE_MIN_LEAF, n_classes=len(classes),
                                min_split=CART_IMPUTE_MIN_SPLIT)
            tree.fit(X[fit_rows], y)
        except ValueError as exc:
            if warnings_out is not None:
                warnings_out.append(f"column {col.name!r}: CART fit failed ({exc}); "
                                    "substituted mean/mode instead")
            out.append(_substitute_column(col))
            continue
        values = col.values.copy()
        donors = tree.leaf_training_rows(X[mask])
        target_rows = np.flatnonzero(mask)
        for row, leaf in zip(target_rows, donors):
            pick = fit_rows[leaf[rng.integers(len(leaf))]]
            values[row] = col.values[pick]
        out.append(Column(col.name, col.kind, values))
    return Table(out)


def _check_imputable(table: Table):
    for col in table.columns:
        if col.missing_mask().all():
            raise UnimputableError(f"column {col.name!r} has no observed values")


def impute(table: Table, kind: ImputerKind, seed: int = 0,
           warnings_out: list[str] | None = None) -> Table:
    if kind is ImputerKind.SUBSTITUTION:
        return impute_substitution(table)
    if kind is ImputerKind.REGRESSION:
        return impute_regression(table, seed, warnings_out)
    return impute_cart(table, seed, warnings_out)


def count_out_of_range(real: Table, synthetic: Table) -> int:
    """Number of synthetic columns holding at least one value outside the
    real column's observed numeric range or category set."""
    if not real.same_schema(synthetic):
        raise SchemaError("tables have different schemas")
    count = 0
    for rc, sc in zip(real.columns, synthetic.columns):
        s_present = sc.non_missing()
        if len(s_present) == 0:
            continue
        r_present = rc.non_missing()
        if len(r_present) == 0:
            count += 1
            continue
        if rc.kind is ColumnKind.NUMERIC:
            lo, hi = r_present.min(), r_present.max()
            if np.any(s_present < lo) or np.any(s_present > hi):
                count += 1
        else:
            seen = set(r_present.tolist())
            if any(v not in seen for v in s_present):
                count += 1
    return count
