"""Aggregate the four utility metrics into one score.

A corpus of metric vectors is standardized per dimension; the unit
eigenvector of the largest covariance eigenvalue becomes the loading
vector, sign-fixed so the loadings sum to a nonnegative value. Since all
four raw metrics are lower-is-better, the projected score is
lower-is-better too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .metrics import METRIC_NAMES, MetricVector

MIN_CORPUS = 8


class CorpusTooSmallError(ValueError):
    pass


class DegenerateCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class UpcaModel:
    means: np.ndarray
    stddevs: np.ndarray
    loadings: np.ndarray
    explained_variance_ratio: float
    orientation_flipped: bool
    corpus_size: int

    def to_dict(self) -> dict:
        return {
            "metric_order": list(METRIC_NAMES),
            "means": self.means.tolist(),
            "stddevs": self.stddevs.tolist(),
            "loadings": self.loadings.tolist(),
            "explained_variance_ratio": self.explained_variance_ratio,
            "orientation_flipped": self.orientation_flipped,
            "corpus_size": self.corpus_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UpcaModel":
        return cls(
            means=np.asarray(d["means"], dtype=np.float64),
            stddevs=np.asarray(d["stddevs"], dtype=np.float64),
            loadings=np.asarray(d["loadings"], dtype=np.float64),
            explained_variance_ratio=float(d["explained_variance_ratio"]),
            orientation_flipped=bool(d["orientation_flipped"]),
            corpus_size=int(d["corpus_size"]),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "UpcaModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def fit_upca(corpus: list[MetricVector]) -> UpcaModel:
    """Standardize the corpus (population variance), take the first
    principal component of the 4x4 covariance, orient it."""
    if len(corpus) < MIN_CORPUS:
        raise CorpusTooSmallError(f"need at least {MIN_CORPUS} vectors, got {len(corpus)}")
    m = np.array([v.as_array() for v in corpus])
    if not np.all(np.isfinite(m)):
        raise DegenerateCorpusError("corpus contains non-finite metric values")
    means = m.mean(axis=0)
    stds = m.std(axis=0)
    dead = np.flatnonzero(stds == 0.0)
    if dead.size:
        names = [METRIC_NAMES[i] for i in dead]
        raise DegenerateCorpusError(f"zero variance in dimension(s) {names}")
    z = (m - means) / stds
    cov = z.T @ z / len(corpus)
    eigvals, eigvecs = np.linalg.eigh(cov)
    loadings = eigvecs[:, -1]
    flipped = bool(loadings.sum() < 0.0)
    if flipped:
        loadings = -loadings
    return UpcaModel(
        means=means,
        stddevs=stds,
        loadings=loadings,
        explained_variance_ratio=float(eigvals[-1] / eigvals.sum()),
        orientation_flipped=flipped,
        corpus_size=len(corpus),
    )


def project(model: UpcaModel, v: MetricVector) -> float:
    """Scalar utility score: loadings . (v - means) / stddevs. Lower is
    better under the orientation convention."""
    raw = v.as_array()
    if not np.all(np.isfinite(raw)):
        raise ValueError("cannot project a non-finite metric vector")
    return float(model.loadings @ ((raw - model.means) / model.stddevs))
