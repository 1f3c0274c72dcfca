import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthqc.tabular import (
    ColumnKind,
    Manifest,
    ParseError,
    SchemaError,
    SplitSpec,
    TooSmallError,
    encode_numeric,
    load_csv,
    load_manifest,
    split_train_test,
    standardize_columns,
    write_csv,
)

from conftest import cat_column, numeric_column
from synthqc.tabular import Table


def write(tmp_path, text, name="t.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_numeric_inference_low_threshold(self, tmp_path):
        path = write(tmp_path, "age\n31\n45\n28\n")
        t = load_csv(path, Manifest(distinct_threshold=2))
        assert t.column("age").kind is ColumnKind.NUMERIC
        assert t.n_rows == 3

    def test_strings_are_categorical(self, tmp_path):
        t = load_csv(write(tmp_path, "sex\nm\nf\nf\n"))
        assert t.column("sex").kind is ColumnKind.CATEGORICAL

    def test_few_distinct_numbers_are_categorical(self, tmp_path):
        t = load_csv(write(tmp_path, "flag\n0\n1\n1\n0\n"))
        assert t.column("flag").kind is ColumnKind.CATEGORICAL
        assert t.column("flag").values.tolist() == ["0", "1", "1", "0"]

    def test_missing_markers(self, tmp_path):
        t = load_csv(write(tmp_path, "a,b\n1,x\n,na\n3,y\n"),
                     Manifest(kinds={"a": ColumnKind.NUMERIC, "b": ColumnKind.CATEGORICAL}))
        assert np.isnan(t.column("a").values[1])
        assert t.column("b").values[1] is None

    def test_ragged_row_reports_line(self, tmp_path):
        with pytest.raises(ParseError, match="row 3"):
            load_csv(write(tmp_path, "a,b\n1,2\n3\n"))

    def test_manifest_must_cover_all_columns(self, tmp_path):
        with pytest.raises(SchemaError, match="manifest"):
            load_csv(write(tmp_path, "a,b\n1,2\n"), Manifest(kinds={"a": ColumnKind.NUMERIC}))

    def test_duplicate_header_rejected(self, tmp_path):
        with pytest.raises(SchemaError):
            load_csv(write(tmp_path, "a,a\n1,2\n"))

    def test_manifest_file_roundtrip(self, tmp_path):
        mpath = tmp_path / "m.ini"
        mpath.write_text(
            "[columns]\nage = numeric\nsex = categorical\n"
            "[options]\nmissing_markers = NA|?\ndistinct_threshold = 3\n")
        m = load_manifest(mpath)
        assert m.kinds == {"age": ColumnKind.NUMERIC, "sex": ColumnKind.CATEGORICAL}
        assert "?" in m.missing_markers and "" in m.missing_markers
        assert m.distinct_threshold == 3

    def test_roundtrip(self, tmp_path, titanic_table):
        out = tmp_path / "round.csv"
        write_csv(titanic_table, out)
        again = load_csv(out)
        assert titanic_table.equals(again)


class TestSplit:
    def test_sizes(self):
        t = Table([numeric_column("x", range(10))])
        train, test = split_train_test(t, SplitSpec(0.7, seed=1, split_index=1))
        assert (train.n_rows, test.n_rows) == (7, 3)

    def test_deterministic(self):
        t = Table([numeric_column("x", range(50))])
        a = split_train_test(t, SplitSpec(0.7, seed=9, split_index=2))
        b = split_train_test(t, SplitSpec(0.7, seed=9, split_index=2))
        assert a[0].equals(b[0]) and a[1].equals(b[1])

    def test_different_split_index_differs(self):
        t = Table([numeric_column("x", range(50))])
        a, _ = split_train_test(t, SplitSpec(0.7, seed=9, split_index=1))
        b, _ = split_train_test(t, SplitSpec(0.7, seed=9, split_index=2))
        assert not a.equals(b)

    def test_partition(self):
        t = Table([numeric_column("x", range(37))])
        train, test = split_train_test(t, SplitSpec(0.7, seed=3, split_index=1))
        seen = sorted(train.column("x").values.tolist() + test.column("x").values.tolist())
        assert seen == list(map(float, range(37)))

    def test_diabetes_sized_split(self, diabetes_table):
        train, test = split_train_test(diabetes_table, SplitSpec(0.7, seed=0, split_index=1))
        assert train.n_rows == 538
        assert test.n_rows == 230

    def test_too_small(self):
        t = Table([numeric_column("x", range(9))])
        with pytest.raises(TooSmallError):
            split_train_test(t, SplitSpec(0.7, seed=0, split_index=1))


class TestEncode:
    def test_frequency_encoding(self):
        t = Table([cat_column("c", ["a", "a", "b", "c"])])
        assert encode_numeric(t)[:, 0].tolist() == [0.5, 0.5, 0.25, 0.25]

    def test_numeric_passthrough(self):
        t = Table([numeric_column("x", [1.5, -2.0, 7.25])])
        assert encode_numeric(t)[:, 0].tolist() == [1.5, -2.0, 7.25]

    def test_single_category(self):
        t = Table([cat_column("c", ["x", "x"])])
        assert encode_numeric(t)[:, 0].tolist() == [1.0, 1.0]

    def test_missing_rejected(self):
        t = Table([cat_column("c", ["x", None])])
        with pytest.raises(ValueError, match="impute"):
            encode_numeric(t)

    @given(st.lists(st.sampled_from("abcd"), min_size=1, max_size=60))
    def test_frequencies_in_unit_interval(self, letters):
        t = Table([cat_column("c", letters)])
        vals = encode_numeric(t)[:, 0]
        assert np.all(vals > 0.0) and np.all(vals <= 1.0)


class TestStandardize:
    def test_two_point_column(self):
        out, stats = standardize_columns(np.array([[1.0], [3.0]]))
        assert out[:, 0].tolist() == [-1.0, 1.0]
        assert stats.means[0] == 2.0 and stats.stddevs[0] == 1.0

    def test_constant_column_flagged(self):
        out, stats = standardize_columns(np.array([[5.0], [5.0], [5.0]]))
        assert out[:, 0].tolist() == [0.0, 0.0, 0.0]
        assert bool(stats.constant_mask[0])

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        m = rng.normal(size=(100, 3))
        once, _ = standardize_columns(m)
        twice, _ = standardize_columns(once)
        assert np.allclose(once, twice, atol=1e-12)

    @settings(deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.integers(1, 4))
    def test_zero_mean_unit_variance(self, seed, n, d):
        m = np.random.default_rng(seed).normal(size=(n, d)) * 37.0 + 5.0
        out, stats = standardize_columns(m)
        live = ~stats.constant_mask
        assert np.all(np.abs(out.mean(axis=0)) < 1e-10)
        assert np.all(np.abs(out[:, live].std(axis=0) - 1.0) < 1e-10)
