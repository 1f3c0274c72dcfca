import numpy as np
import pytest

from synthqc.generators import (
    GENERATORS,
    SeqCartConfig,
    gen_bootstrap,
    gen_ensemble,
    gen_independent,
    gen_sequential_cart,
)
from synthqc.metrics import MetricConfig, hellinger_overall, metric_vector, pcd
from synthqc.models import ClassifierKind, FitConfig
from synthqc.tabular import ColumnKind, Table

from conftest import cat_column, correlated_table, numeric_column, random_mixed_table


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_schema_and_value_provenance(name):
    train = random_mixed_table(60, seed=1)
    synth = GENERATORS[name](train, 45, seed=9)
    assert synth.same_schema(train)
    assert synth.n_rows == 45
    for tc, sc in zip(train.columns, synth.columns):
        observed = set(tc.non_missing().tolist())
        assert set(sc.non_missing().tolist()) <= observed


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_deterministic(name):
    train = random_mixed_table(40, seed=2)
    a = GENERATORS[name](train, 40, seed=5)
    b = GENERATORS[name](train, 40, seed=5)
    assert a.equals(b)
    c = GENERATORS[name](train, 40, seed=6)
    assert not a.equals(c)


def test_bootstrap_rows_exist_in_train():
    train = random_mixed_table(30, seed=3)
    synth = gen_bootstrap(train, 30, seed=1)
    train_rows = {tuple(col.values[i] for col in train.columns) for i in range(30)}
    synth_rows = [tuple(col.values[i] for col in synth.columns) for i in range(30)]
    assert all(row in train_rows for row in synth_rows)


def test_bootstrap_marginals_close():
    train = correlated_table(600, seed=4, with_flag=False)
    values = [hellinger_overall(train, gen_bootstrap(train, 600, seed=s)) for s in range(5)]
    assert max(values) < 0.1


def test_independent_destroys_correlation():
    train = correlated_table(500, seed=5, with_flag=False)
    values = [pcd(train, gen_independent(train, 500, seed=s)) for s in range(5)]
    assert min(values) > 1.0


def test_independent_single_column_is_marginal_resample():
    train = Table([cat_column("c", ["a"] * 30 + ["b"] * 10)])
    synth = gen_independent(train, 400, seed=7)
    freq = np.mean([v == "a" for v in synth.column("c").values])
    assert 0.6 < freq < 0.9


def test_independent_preserves_missing_rate():
    values = np.array(["u"] * 50 + [None] * 50, dtype=object)
    train = Table([cat_column("c", values)])
    synth = gen_independent(train, 1000, seed=8)
    rate = synth.column("c").missing_mask().mean()
    assert 0.4 < rate < 0.6


class TestSequentialCart:
    def test_single_column_is_marginal_resample(self):
        train = Table([numeric_column("x", np.arange(20.0))])
        synth = gen_sequential_cart(train, 50, seed=1)
        assert set(synth.column("x").values.tolist()) <= set(range(20))

    def test_two_few_rows_rejected(self):
        train = Table([numeric_column("x", np.arange(5.0))])
        with pytest.raises(ValueError):
            gen_sequential_cart(train, 5, seed=0)

    def test_output_complete_even_with_missing_input(self, titanic_table):
        synth = gen_sequential_cart(titanic_table, 100, seed=3)
        assert not synth.has_missing()

    def test_fewer_distinct_first_ordering(self):
        # flag has 2 distinct values and must be synthesized first: in a
        # table where y is a deterministic function of flag, the conditional
        # fit can only be exact if flag precedes y
        rng = np.random.default_rng(6)
        flag = np.where(rng.random(200) < 0.5, "a", "b").astype(object)
        y = np.where(flag == "a", 10.0, -10.0) + 0.01 * rng.normal(size=200)
        train = Table([numeric_column("y", y), cat_column("flag", flag)])
        synth = gen_sequential_cart(train, 200, seed=4)
        pairs_ok = [(f == "a") == (v > 0)
                    for f, v in zip(synth.column("flag").values, synth.column("y").values)]
        assert np.mean(pairs_ok) > 0.95

    def test_preserves_correlation_better_than_independent(self):
        wins = 0
        for s in range(10):
            train = correlated_table(400, seed=100 + s, with_flag=False)
            seq = gen_sequential_cart(train, 400, seed=s)
            ind = gen_independent(train, 400, seed=s)
            wins += pcd(train, seq) < pcd(train, ind)
        assert wins >= 9

    def test_min_split_config_respected(self):
        train = correlated_table(100, seed=7, with_flag=False)
        coarse = gen_sequential_cart(train, 100, seed=2, cfg=SeqCartConfig(min_split=100))
        fine = gen_sequential_cart(train, 100, seed=2)
        assert not coarse.equals(fine)


class TestEnsemble:
    def test_size_five(self):
        train = random_mixed_table(30, seed=8)
        tables = gen_ensemble(gen_bootstrap, train, 5, seed=1)
        assert len(tables) == 5
        assert all(t.n_rows == train.n_rows for t in tables)

    def test_datapoints_differ(self):
        train = random_mixed_table(30, seed=9)
        tables = gen_ensemble(gen_bootstrap, train, 5, seed=2)
        assert not tables[0].equals(tables[1])

    def test_singleton_ensemble_metrics_match_datapoint(self):
        train = correlated_table(120, seed=10)
        [only] = gen_ensemble(gen_bootstrap, train, 1, seed=3)
        cfg = MetricConfig(seed=4, propensity_model=FitConfig(kind=ClassifierKind.LOGISTIC))
        direct = metric_vector(train, only, cfg)
        from synthqc.metrics import MetricVector

        assert MetricVector.mean([direct]) == direct

    def test_invalid_size(self):
        train = random_mixed_table(30, seed=11)
        with pytest.raises(ValueError):
            gen_ensemble(gen_bootstrap, train, 0, seed=0)


def test_quality_ordering_oracle():
    """bootstrap <= seqcart <= independent on PCD and LC: strict vs the
    independent generator per seed; bootstrap vs sequential CART separate
    only in the mean (leaf pooling makes the two nearly tie per trial)."""
    from synthqc._seeding import derive_seed
    from synthqc.metrics import log_cluster

    n, trials = 500, 10
    rows = {"bootstrap": [], "seqcart": [], "independent": []}
    for s in range(trials):
        train = correlated_table(n, seed=200 + s, with_flag=False)
        for name in rows:
            synth = GENERATORS[name](train, n, derive_seed(31, name, s))
            rows[name].append((pcd(train, synth),
                               log_cluster(train, synth, derive_seed(32, name, s))))
    arr = {k: np.array(v) for k, v in rows.items()}
    for col in (0, 1):  # PCD, LC
        seq_vs_ind = np.mean(arr["seqcart"][:, col] <= arr["independent"][:, col])
        boot_vs_ind = np.mean(arr["bootstrap"][:, col] <= arr["independent"][:, col])
        assert seq_vs_ind >= 0.9
        assert boot_vs_ind >= 0.9
        assert arr["bootstrap"][:, col].mean() <= arr["seqcart"][:, col].mean()
