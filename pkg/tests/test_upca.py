import numpy as np
import pytest

from synthqc.metrics import MetricVector
from synthqc.upca import (
    CorpusTooSmallError,
    DegenerateCorpusError,
    UpcaModel,
    fit_upca,
    project,
)

from oracles import jacobi_top_eigenvector


def corpus_from_matrix(m) -> list[MetricVector]:
    return [MetricVector(*row) for row in np.asarray(m, dtype=np.float64)]


def random_corpus(seed, size=None):
    rng = np.random.default_rng(seed)
    n = size or int(rng.integers(8, 120))
    base = rng.normal(size=(n, 4)) @ rng.normal(size=(4, 4))
    return corpus_from_matrix(base + rng.normal(size=(n, 4)) * 0.3)


def standardized(corpus):
    m = np.array([v.as_array() for v in corpus])
    return (m - m.mean(axis=0)) / m.std(axis=0)


class TestFit:
    def test_rank_one_corpus(self):
        rng = np.random.default_rng(0)
        c = rng.normal(size=20)
        corpus = corpus_from_matrix(np.outer(c, np.ones(4)) + [1.0, 2.0, 3.0, 4.0])
        model = fit_upca(corpus)
        assert np.allclose(model.loadings, 0.5, atol=1e-9)
        assert model.explained_variance_ratio == pytest.approx(1.0, abs=1e-9)

    def test_loadings_unit_norm_and_orientation(self):
        for seed in range(20):
            model = fit_upca(random_corpus(seed))
            assert np.linalg.norm(model.loadings) == pytest.approx(1.0, abs=1e-10)
            assert model.loadings.sum() >= 0.0

    def test_matches_jacobi_oracle(self):
        for seed in range(30):
            corpus = random_corpus(seed)
            model = fit_upca(corpus)
            z = standardized(corpus)
            top_val, top_vec = jacobi_top_eigenvector(z.T @ z / len(corpus))
            agreement = abs(float(top_vec @ model.loadings))
            assert agreement == pytest.approx(1.0, abs=1e-8)

    def test_projection_variance_is_top_eigenvalue(self):
        for seed in range(10):
            corpus = random_corpus(seed + 100)
            model = fit_upca(corpus)
            z = standardized(corpus)
            top_val, _ = jacobi_top_eigenvector(z.T @ z / len(corpus))
            proj = np.array([project(model, v) for v in corpus])
            assert proj.var() == pytest.approx(top_val, abs=1e-8)

    def test_variance_maximality(self):
        corpus = random_corpus(7, size=200)
        model = fit_upca(corpus)
        z = standardized(corpus)
        best = (z @ model.loadings).var()
        rng = np.random.default_rng(1)
        for _ in range(1000):
            w = rng.normal(size=4)
            w /= np.linalg.norm(w)
            assert (z @ w).var() <= best + 1e-10

    def test_too_small_corpus(self):
        with pytest.raises(CorpusTooSmallError):
            fit_upca(random_corpus(1, size=20)[:7])

    def test_degenerate_dimension(self):
        m = np.random.default_rng(2).normal(size=(12, 4))
        m[:, 2] = 3.0
        with pytest.raises(DegenerateCorpusError, match="log_cluster"):
            fit_upca(corpus_from_matrix(m))


class TestProject:
    def test_corpus_mean_projects_to_zero(self):
        corpus = random_corpus(3)
        model = fit_upca(corpus)
        mean_vec = MetricVector(*np.array([v.as_array() for v in corpus]).mean(axis=0))
        assert project(model, mean_vec) == pytest.approx(0.0, abs=1e-10)

    def test_hand_projection(self):
        model = UpcaModel(means=np.zeros(4), stddevs=np.ones(4),
                          loadings=np.full(4, 0.5), explained_variance_ratio=1.0,
                          orientation_flipped=False, corpus_size=8)
        assert project(model, MetricVector(1.0, 1.0, 1.0, 1.0)) == 2.0

    def test_mean_of_projections_zero(self):
        corpus = random_corpus(4)
        model = fit_upca(corpus)
        proj = [project(model, v) for v in corpus]
        assert np.mean(proj) == pytest.approx(0.0, abs=1e-10)

    def test_orientation_flip_reverses_ranking(self):
        corpus = random_corpus(5)
        model = fit_upca(corpus)
        flipped = UpcaModel(means=model.means, stddevs=model.stddevs,
                            loadings=-model.loadings,
                            explained_variance_ratio=model.explained_variance_ratio,
                            orientation_flipped=not model.orientation_flipped,
                            corpus_size=model.corpus_size)
        scores = np.array([project(model, v) for v in corpus])
        reversed_scores = np.array([project(flipped, v) for v in corpus])
        assert np.argmin(scores) == np.argmax(reversed_scores)
        assert np.array_equal(np.argsort(scores), np.argsort(-reversed_scores))

    def test_affine_stability(self):
        corpus = random_corpus(6)
        shifted = [MetricVector(v.hellinger + 5.0, v.pcd, v.log_cluster, v.propensity)
                   for v in corpus]
        a, b = fit_upca(corpus), fit_upca(shifted)
        assert np.allclose(a.loadings, b.loadings, atol=1e-9)
        for va, vb in zip(corpus, shifted):
            assert project(a, va) == pytest.approx(project(b, vb), abs=1e-9)

    def test_non_finite_rejected(self):
        model = fit_upca(random_corpus(8))
        with pytest.raises(ValueError):
            project(model, MetricVector(np.nan, 0.0, 0.0, 0.0))


def test_serialization_roundtrip(tmp_path):
    corpus = random_corpus(9)
    model = fit_upca(corpus)
    path = tmp_path / "model.json"
    model.save(path)
    loaded = UpcaModel.load(path)
    for v in corpus:
        assert project(loaded, v) == project(model, v)
    assert loaded.corpus_size == model.corpus_size
    assert loaded.orientation_flipped == model.orientation_flipped
