"""Columnar tabular data: CSV ingestion, schema inference, encoding, splits.

A Table is an ordered list of typed columns. Numeric columns are float64
arrays with NaN marking missing cells; categorical columns are object
arrays of strings with None marking missing cells. Tables are treated as
immutable after construction: every operation returns a new Table.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field

import numpy as np

from ._seeding import make_rng

DEFAULT_MISSING_MARKERS = ("", "NA")
DEFAULT_DISTINCT_THRESHOLD = 10


class SchemaError(ValueError):
    pass


class ParseError(ValueError):
    pass


class TooSmallError(ValueError):
    pass


class ColumnKind(enum.Enum):
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class Column:
    """One named, typed column. ``values`` length equals the table row count."""

    name: str
    kind: ColumnKind
    values: np.ndarray

    def __post_init__(self):
        if self.kind is ColumnKind.NUMERIC:
            object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        else:
            vals = np.empty(len(self.values), dtype=object)
            for i, v in enumerate(self.values):
                vals[i] = None if v is None else str(v)
            object.__setattr__(self, "values", vals)

    def missing_mask(self) -> np.ndarray:
        if self.kind is ColumnKind.NUMERIC:
            return np.isnan(self.values)
        return np.array([v is None for v in self.values], dtype=bool)

    def non_missing(self) -> np.ndarray:
        return self.values[~self.missing_mask()]

    def take(self, idx) -> "Column":
        return Column(self.name, self.kind, self.values[idx])

    def equals(self, other: "Column") -> bool:
        if self.name != other.name or self.kind is not other.kind:
            return False
        if len(self.values) != len(other.values):
            return False
        if self.kind is ColumnKind.NUMERIC:
            a, b = self.values, other.values
            return bool(np.all((a == b) | (np.isnan(a) & np.isnan(b))))
        return all(x == y for x, y in zip(self.values, other.values))


@dataclass(frozen=True)
class Table:
    columns: list[Column] = field(default_factory=list)

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column names")
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise SchemaError(f"columns have differing lengths: {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise SchemaError(f"no column named {name!r}")

    def drop(self, name: str) -> "Table":
        self.column(name)
        return Table([c for c in self.columns if c.name != name])

    def take(self, idx) -> "Table":
        return Table([c.take(idx) for c in self.columns])

    def has_missing(self) -> bool:
        return any(c.missing_mask().any() for c in self.columns)

    def equals(self, other: "Table") -> bool:
        return self.n_cols == other.n_cols and all(
            a.equals(b) for a, b in zip(self.columns, other.columns)
        )

    def same_schema(self, other: "Table") -> bool:
        return self.names == other.names and all(
            a.kind is b.kind for a, b in zip(self.columns, other.columns)
        )


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic train/test split request (r-th of the run's splits)."""

    train_fraction: float = 0.7
    seed: int = 0
    split_index: int = 1

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0,1)")


@dataclass(frozen=True)
class Manifest:
    """Optional sidecar schema: explicit column kinds plus parser options."""

    kinds: dict[str, ColumnKind] = field(default_factory=dict)
    missing_markers: tuple[str, ...] = DEFAULT_MISSING_MARKERS
    distinct_threshold: int = DEFAULT_DISTINCT_THRESHOLD


def load_manifest(path) -> Manifest:
    """Parse an INI manifest: a ``[columns]`` section mapping name -> kind,
    and an optional ``[options]`` section (``missing_markers`` pipe-separated,
    ``distinct_threshold`` int). The empty string is always a missing marker.
    """
    import configparser

    parser = configparser.ConfigParser()
    parser.optionxform = str  # column names are case sensitive
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    kinds = {}
    if parser.has_section("columns"):
        for name, value in parser.items("columns"):
            value = value.strip().lower()
            if value not in ("numeric", "categorical"):
                raise SchemaError(f"manifest kind for {name!r} must be numeric or categorical")
            kinds[name] = ColumnKind(value)
    markers = list(DEFAULT_MISSING_MARKERS)
    threshold = DEFAULT_DISTINCT_THRESHOLD
    if parser.has_section("options"):
        if parser.has_option("options", "missing_markers"):
            markers = parser.get("options", "missing_markers").split("|")
            if "" not in markers:
                markers.append("")
        if parser.has_option("options", "distinct_threshold"):
            threshold = parser.getint("options", "distinct_threshold")
    return Manifest(kinds=kinds, missing_markers=tuple(markers), distinct_threshold=threshold)


def _parse_number(cell: str):
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if np.isfinite(value) else None


def _infer_kind(cells: list[str | None], threshold: int) -> ColumnKind:
    # Numeric iff every non-missing cell parses as a finite number AND the
    # column has more than `threshold` distinct values; integer-coded flags
    # with few levels stay categorical.
    present = [c for c in cells if c is not None]
    if not present:
        return ColumnKind.CATEGORICAL
    parsed = [_parse_number(c) for c in present]
    if any(v is None for v in parsed):
        return ColumnKind.CATEGORICAL
    if len(set(parsed)) > threshold:
        return ColumnKind.NUMERIC
    return ColumnKind.CATEGORICAL


def _build_column(name: str, cells: list[str | None], kind: ColumnKind) -> Column:
    if kind is ColumnKind.NUMERIC:
        values = np.empty(len(cells), dtype=np.float64)
        for i, c in enumerate(cells):
            if c is None:
                values[i] = np.nan
            else:
                parsed = _parse_number(c)
                if parsed is None:
                    raise ParseError(f"column {name!r}: cell {c!r} is not a finite number")
                values[i] = parsed
        return Column(name, kind, values)
    return Column(name, kind, np.array(cells, dtype=object))


def load_csv(path, manifest: Manifest | None = None) -> Table:
    """Read an RFC-4180 CSV with a header row into a Table.

    Without a manifest, kinds are inferred per column; empty cells and the
    literal "NA" (case-insensitive) are missing. A manifest must name every
    column in the header.
    """
    manifest = manifest or Manifest()
    markers = {m.upper() for m in manifest.missing_markers}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if len(set(header)) != len(header):
            raise SchemaError(f"{path}: duplicate column names in header")
        raw: list[list[str | None]] = [[] for _ in header]
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {row_no} has {len(row)} fields, expected {len(header)}"
                )
            for j, cell in enumerate(row):
                raw[j].append(None if cell.upper() in markers else cell)
    if manifest.kinds:
        missing_names = [n for n in header if n not in manifest.kinds]
        if missing_names:
            raise SchemaError(f"{path}: manifest does not cover columns {missing_names}")
        kinds = [manifest.kinds[n] for n in header]
    else:
        kinds = [_infer_kind(cells, manifest.distinct_threshold) for cells in raw]
    return Table([_build_column(n, cells, k) for n, cells, k in zip(header, raw, kinds)])


def _format_number(x: float) -> str:
    if np.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def write_csv(table: Table, path) -> None:
    """Write a Table back to CSV; missing cells become empty strings."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.names)
        cols = []
        for c in table.columns:
            if c.kind is ColumnKind.NUMERIC:
                cols.append(["" if np.isnan(v) else _format_number(v) for v in c.values])
            else:
                cols.append(["" if v is None else v for v in c.values])
        for row in zip(*cols) if cols else []:
            writer.writerow(row)


def split_train_test(table: Table, spec: SplitSpec) -> tuple[Table, Table]:
    """Seeded random partition into (train, test); deterministic per
    (seed, split_index). |train| = round(train_fraction * n_rows)."""
    n = table.n_rows
    if n < 10:
        raise TooSmallError(f"need at least 10 rows to split, got {n}")
    rng = make_rng(spec.seed, "split", spec.split_index)
    perm = rng.permutation(n)
    n_train = int(round(spec.train_fraction * n))
    return table.take(perm[:n_train]), table.take(perm[n_train:])


def category_frequencies(col: Column) -> dict[str, float]:
    values = [v for v in col.values if v is not None]
    if not values:
        return {}
    n = len(values)
    freqs: dict[str, float] = {}
    for v in values:
        freqs[v] = freqs.get(v, 0.0) + 1.0
    return {k: v / n for k, v in freqs.items()}


def encode_numeric(table: Table) -> np.ndarray:
    """Encode a complete table as an n x d float matrix.

    Numeric columns pass through; each categorical cell becomes the relative
    frequency of its category within that column (so values lie in (0, 1]).
    """
    if table.has_missing():
        raise ValueError("encode_numeric requires a complete table; impute first")
    out = np.empty((table.n_rows, table.n_cols), dtype=np.float64)
    for j, col in enumerate(table.columns):
        if col.kind is ColumnKind.NUMERIC:
            out[:, j] = col.values
        else:
            freqs = category_frequencies(col)
            out[:, j] = [freqs[v] for v in col.values]
    return out


@dataclass(frozen=True)
class ColumnStats:
    means: np.ndarray
    stddevs: np.ndarray
    constant_mask: np.ndarray  # True where the column had zero variance


def standardize_columns(matrix: np.ndarray) -> tuple[np.ndarray, ColumnStats]:
    """Center each column and scale to unit population variance.

    Zero-variance columns are mapped to all-zeros and flagged; their recorded
    stddev is the raw 0.0.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.size == 0:
        raise ValueError("cannot standardize an empty matrix")
    means = m.mean(axis=0)
    stds = m.std(axis=0)  # population (1/n) divisor
    constant = stds == 0.0
    safe = np.where(constant, 1.0, stds)
    out = (m - means) / safe
    out[:, constant] = 0.0
    return out, ColumnStats(means=means, stddevs=stds, constant_mask=constant)
