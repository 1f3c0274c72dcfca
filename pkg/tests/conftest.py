import os

import numpy as np
import pytest

from synthqc.tabular import Column, ColumnKind, Table, load_csv

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


@pytest.fixture(scope="session")
def diabetes_table() -> Table:
    return load_csv(os.path.join(DATA_DIR, "diabetes.csv"))


@pytest.fixture(scope="session")
def titanic_table() -> Table:
    return load_csv(os.path.join(DATA_DIR, "titanic.csv"))


def numeric_column(name, values) -> Column:
    return Column(name, ColumnKind.NUMERIC, np.asarray(values, dtype=np.float64))


def cat_column(name, values) -> Column:
    return Column(name, ColumnKind.CATEGORICAL, np.array(values, dtype=object))


def correlated_table(n: int, seed: int, noise: float = 0.1, with_flag: bool = True) -> Table:
    """y = x + noise fixture, optionally with a binary categorical flag."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    cols = [numeric_column("x", x), numeric_column("y", x + noise * rng.normal(size=n))]
    if with_flag:
        cols.append(cat_column("flag", np.where(x > 0, "hi", "lo")))
    return Table(cols)


def random_mixed_table(n: int, seed: int, n_numeric: int = 2, n_categorical: int = 1) -> Table:
    rng = np.random.default_rng(seed)
    cols = []
    for j in range(n_numeric):
        cols.append(numeric_column(f"n{j}", rng.normal(loc=j, scale=1 + j, size=n)))
    for j in range(n_categorical):
        levels = np.array(["a", "b", "c"], dtype=object)
        cols.append(cat_column(f"c{j}", levels[rng.integers(0, 3, size=n)]))
    return Table(cols)


def mask_cells(table: Table, fraction: float, seed: int) -> Table:
    """Blank out a random fraction of cells (at least one per column touched)."""
    rng = np.random.default_rng(seed)
    cols = []
    for col in table.columns:
        values = col.values.copy()
        mask = rng.random(len(values)) < fraction
        if col.kind is ColumnKind.NUMERIC:
            values[mask] = np.nan
        else:
            values[mask] = None
        cols.append(Column(col.name, col.kind, values))
    return Table(cols)
