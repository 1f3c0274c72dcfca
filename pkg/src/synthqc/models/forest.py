"""Random forest: bagged CART trees with per-tree feature subsampling,
majority vote. Vote fractions double as class probabilities."""

from __future__ import annotations

import numpy as np

from .._seeding import make_rng
from .cart import CartTree


class RandomForestModel:
    def __init__(self, n_classes: int, n_trees: int, max_depth: int | None,
                 min_leaf: int, feature_fraction, bootstrap: bool, seed: int):
        self.n_classes = n_classes
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.feature_fraction = feature_fraction
        self.bootstrap = bootstrap
        self.seed = seed
        self.trees: list[CartTree] = []
        self.tree_features: list[np.ndarray] = []

    def _n_features_per_tree(self, d: int) -> int:
        if self.feature_fraction == "sqrt":
            return max(1, int(round(np.sqrt(d))))
        return max(1, int(round(float(self.feature_fraction) * d)))

    def fit(self, X, codes) -> "RandomForestModel":
        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        m = self._n_features_per_tree(d)
        for t in range(self.n_trees):
            rng = make_rng(self.seed, "rf-tree", t)
            rows = rng.choice(n, size=n, replace=True) if self.bootstrap else np.arange(n)
            feats = np.sort(rng.choice(d, size=m, replace=False)) if m < d else np.arange(d)
            tree = CartTree("classification", self.max_depth, self.min_leaf,
                            n_classes=self.n_classes)
            tree.fit(X[np.ix_(rows, feats)], codes[rows])
            self.trees.append(tree)
            self.tree_features.append(feats)
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((X.shape[0], self.n_classes))
        for tree, feats in zip(self.trees, self.tree_features):
            votes[np.arange(X.shape[0]), tree.predict_codes(X[:, feats])] += 1.0
        return votes / len(self.trees)

    def predict_codes(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)
