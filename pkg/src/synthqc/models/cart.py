"""Greedy binary CART for classification (Gini) and regression (variance).

The tree keeps the training-row indices of every leaf, which is what the
imputer and the sequential generator sample from; classifiers only need
the per-leaf class counts / means derived from the same structure.
"""

from __future__ import annotations

import numpy as np

from ..kernels import scan_split_gini, scan_split_variance

_DEPTH_CAP = 64


class CartTree:
    """Fitted by `fit(X, y)`; X float64 (n, d).

    task "classification": y is an int64 code vector, codes in [0, n_classes).
    task "regression": y is float64.
    Split ties go to the lowest feature index; rows with value <= threshold
    go left.
    """

    def __init__(self, task: str, max_depth: int | None = None, min_leaf: int = 1,
                 n_classes: int | None = None, min_split: int = 2):
        if task not in ("classification", "regression"):
            raise ValueError(f"unknown task {task!r}")
        if task == "classification" and not n_classes:
            raise ValueError("classification requires n_classes")
        self.task = task
        self.max_depth = _DEPTH_CAP if max_depth is None else int(max_depth)
        self.min_leaf = int(min_leaf)
        self.min_split = max(int(min_split), 2 * int(min_leaf))
        self.n_classes = n_classes
        # parallel node arrays, filled by fit()
        self.feature: np.ndarray | None = None
        self.threshold: np.ndarray | None = None
        self.left: np.ndarray | None = None
        self.right: np.ndarray | None = None
        self.leaf_rows: list[np.ndarray | None] = []

    def fit(self, X, y) -> "CartTree":
        X = np.ascontiguousarray(X, dtype=np.float64)
        if self.task == "classification":
            y = np.ascontiguousarray(y, dtype=np.int64)
        else:
            y = np.ascontiguousarray(y, dtype=np.float64)
        n, d = X.shape
        if n == 0:
            raise ValueError("cannot fit a tree on an empty matrix")
        feature, threshold, left, right = [], [], [], []
        leaf_rows: list[np.ndarray | None] = []

        def new_node():
            feature.append(-1)
            threshold.append(np.nan)
            left.append(-1)
            right.append(-1)
            leaf_rows.append(None)
            return len(feature) - 1

        stack = [(new_node(), np.arange(n), 0)]
        while stack:
            node, rows, depth = stack.pop()
            best_gain, best_feat, best_thr = -np.inf, -1, np.nan
            if depth < self.max_depth and len(rows) >= self.min_split and not self._pure(y, rows):
                for j in range(d):
                    order = np.argsort(X[rows, j], kind="stable")
                    xs = np.ascontiguousarray(X[rows[order], j])
                    if self.task == "classification":
                        gain, thr = scan_split_gini(xs, y[rows[order]], self.n_classes,
                                                    self.min_leaf)
                    else:
                        gain, thr = scan_split_variance(xs, y[rows[order]], self.min_leaf)
                    if gain > best_gain:
                        best_gain, best_feat, best_thr = gain, j, thr
            # impure nodes split on the best valid candidate even at zero
            # gain (an XOR-style node improves only one level deeper)
            if best_feat < 0:
                leaf_rows[node] = rows
                continue
            go_left = X[rows, best_feat] <= best_thr
            feature[node] = best_feat
            threshold[node] = best_thr
            left_id, right_id = new_node(), new_node()
            left[node], right[node] = left_id, right_id
            # push right first so the left branch is processed first
            stack.append((right_id, rows[~go_left], depth + 1))
            stack.append((left_id, rows[go_left], depth + 1))

        self.feature = np.array(feature, dtype=np.int64)
        self.threshold = np.array(threshold, dtype=np.float64)
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.leaf_rows = leaf_rows
        self._finalize(X, y)
        return self

    def _pure(self, y, rows) -> bool:
        first = y[rows[0]]
        return bool(np.all(y[rows] == first))

    def _finalize(self, X, y):
        n_nodes = len(self.feature)
        if self.task == "classification":
            self.leaf_counts = np.zeros((n_nodes, self.n_classes), dtype=np.float64)
            for node, rows in enumerate(self.leaf_rows):
                if rows is not None:
                    self.leaf_counts[node] = np.bincount(y[rows], minlength=self.n_classes)
        else:
            self.leaf_means = np.zeros(n_nodes, dtype=np.float64)
            for node, rows in enumerate(self.leaf_rows):
                if rows is not None:
                    self.leaf_means[node] = y[rows].mean()

    def apply(self, X) -> np.ndarray:
        """Leaf node id for each row of X."""
        X = np.asarray(X, dtype=np.float64)
        idx = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            active = np.flatnonzero(self.left[idx] >= 0)
            if active.size == 0:
                return idx
            nodes = idx[active]
            go_left = X[active, self.feature[nodes]] <= self.threshold[nodes]
            idx[active] = np.where(go_left, self.left[nodes], self.right[nodes])

    def predict_proba(self, X) -> np.ndarray:
        counts = self.leaf_counts[self.apply(X)]
        return counts / counts.sum(axis=1, keepdims=True)

    def predict_codes(self, X) -> np.ndarray:
        if self.task == "classification":
            return self.leaf_counts[self.apply(X)].argmax(axis=1)
        raise ValueError("predict_codes is for classification trees")

    def predict_value(self, X) -> np.ndarray:
        if self.task == "regression":
            return self.leaf_means[self.apply(X)]
        raise ValueError("predict_value is for regression trees")

    def leaf_training_rows(self, X) -> list[np.ndarray]:
        """For each row of X, the training-row indices of the leaf it lands in."""
        return [self.leaf_rows[node] for node in self.apply(X)]
