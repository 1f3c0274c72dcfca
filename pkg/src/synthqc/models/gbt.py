"""Gradient boosted trees with binary logistic loss.

Each round fits a shallow regression tree to the residuals y - sigmoid(F)
and replaces leaf values with a damped Newton step. Multiclass goes
one-vs-rest with normalized sigmoid scores.
"""

from __future__ import annotations

import numpy as np

from .cart import CartTree

_LEAF_CLIP = 10.0  # caps Newton steps in near-pure leaves (hessian -> 0)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


class _BinaryGbt:
    def __init__(self, n_rounds: int, depth: int, min_leaf: int, learning_rate: float):
        self.n_rounds = n_rounds
        self.depth = depth
        self.min_leaf = min_leaf
        self.learning_rate = learning_rate
        self.base_score = 0.0
        self.trees: list[tuple[CartTree, np.ndarray]] = []

    def fit(self, X, y01, track_loss: bool = False):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y01, dtype=np.float64)
        p_bar = min(max(y.mean(), 1e-12), 1.0 - 1e-12)
        self.base_score = float(np.log(p_bar / (1.0 - p_bar)))
        F = np.full(X.shape[0], self.base_score)
        losses = []
        if track_loss:
            losses.append(self._logloss(y, F))
        for _ in range(self.n_rounds):
            p = _sigmoid(F)
            residual = y - p
            tree = CartTree("regression", self.depth, self.min_leaf)
            tree.fit(X, residual)
            hessian = p * (1.0 - p)
            values = np.zeros(len(tree.leaf_rows))
            for node, rows in enumerate(tree.leaf_rows):
                if rows is None:
                    continue
                step = residual[rows].sum() / (hessian[rows].sum() + 1e-12)
                values[node] = np.clip(step, -_LEAF_CLIP, _LEAF_CLIP)
            self.trees.append((tree, values))
            F = F + self.learning_rate * values[tree.apply(X)]
            if track_loss:
                losses.append(self._logloss(y, F))
        self.train_losses = losses if track_loss else None
        return self

    @staticmethod
    def _logloss(y, F):
        p = np.clip(_sigmoid(F), 1e-15, 1.0 - 1e-15)
        return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())

    def raw_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        F = np.full(X.shape[0], self.base_score)
        for tree, values in self.trees:
            F = F + self.learning_rate * values[tree.apply(X)]
        return F


class GbtModel:
    def __init__(self, n_classes: int, n_rounds: int, depth: int, min_leaf: int,
                 learning_rate: float):
        self.n_classes = n_classes
        self.n_rounds = n_rounds
        self.depth = depth
        self.min_leaf = min_leaf
        self.learning_rate = learning_rate
        self.machines: list[_BinaryGbt] = []

    def fit(self, X, codes, track_loss: bool = False) -> "GbtModel":
        targets = [codes == k for k in range(self.n_classes)] if self.n_classes > 2 \
            else [codes == 1]
        for y01 in targets:
            machine = _BinaryGbt(self.n_rounds, self.depth, self.min_leaf,
                                 self.learning_rate)
            machine.fit(X, y01.astype(np.float64), track_loss=track_loss)
            self.machines.append(machine)
        return self

    def predict_proba(self, X) -> np.ndarray:
        if self.n_classes == 2:
            p1 = _sigmoid(self.machines[0].raw_scores(X))
            return np.column_stack([1.0 - p1, p1])
        scores = np.column_stack([_sigmoid(m.raw_scores(X)) for m in self.machines])
        return scores / scores.sum(axis=1, keepdims=True)

    def predict_codes(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)
