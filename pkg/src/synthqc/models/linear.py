"""Linear classifiers: multinomial logistic regression and a hinge-loss SVM.

Logistic is fit with full-batch gradient descent for a fixed epoch count
(so it is deterministic with no seed); the SVM uses seeded per-epoch
shuffled SGD, one binary machine per class.
"""

from __future__ import annotations

import numpy as np

from .._seeding import make_rng


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def logistic_loss_grad(W: np.ndarray, X: np.ndarray, codes: np.ndarray,
                       n_classes: int, l2: float) -> tuple[float, np.ndarray]:
    """Mean cross-entropy of softmax(X_aug @ W) plus 0.5*l2*||weights||^2.

    W has shape (d+1, K); the last row is the unpenalized bias. Returns
    (loss, gradient) with the gradient exact, so it can be checked against
    finite differences.
    """
    n = X.shape[0]
    Xa = np.hstack([X, np.ones((n, 1))])
    P = _softmax(Xa @ W)
    eps = 1e-15
    loss = -np.log(np.clip(P[np.arange(n), codes], eps, None)).mean()
    loss += 0.5 * l2 * float((W[:-1] ** 2).sum())
    Y = np.zeros_like(P)
    Y[np.arange(n), codes] = 1.0
    grad = Xa.T @ (P - Y) / n
    grad[:-1] += l2 * W[:-1]
    return float(loss), grad


class LogisticModel:
    def __init__(self, n_classes: int, learning_rate: float, l2: float, n_epochs: int):
        self.n_classes = n_classes
        self.learning_rate = learning_rate
        self.l2 = l2
        self.n_epochs = n_epochs
        self.W: np.ndarray | None = None

    def fit(self, X, codes) -> "LogisticModel":
        X = np.asarray(X, dtype=np.float64)
        W = np.zeros((X.shape[1] + 1, self.n_classes))
        for _ in range(self.n_epochs):
            _, grad = logistic_loss_grad(W, X, codes, self.n_classes, self.l2)
            W -= self.learning_rate * grad
        self.W = W
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        Xa = np.hstack([X, np.ones((X.shape[0], 1))])
        return _softmax(Xa @ self.W)

    def predict_codes(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)


class LinearSvmModel:
    """One-vs-rest linear SVM, hinge loss with L2 penalty, constant-step SGD."""

    def __init__(self, n_classes: int, learning_rate: float, l2: float,
                 n_epochs: int, seed: int):
        self.n_classes = n_classes
        self.learning_rate = learning_rate
        self.l2 = l2
        self.n_epochs = n_epochs
        self.seed = seed
        self.W: np.ndarray | None = None  # (d, K)
        self.b: np.ndarray | None = None  # (K,)

    def fit(self, X, codes) -> "LinearSvmModel":
        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        self.W = np.zeros((d, self.n_classes))
        self.b = np.zeros(self.n_classes)
        for k in range(self.n_classes):
            rng = make_rng(self.seed, "svm-class", k)
            sign = np.where(codes == k, 1.0, -1.0)
            w = np.zeros(d)
            b = 0.0
            lr = self.learning_rate
            for _ in range(self.n_epochs):
                for i in rng.permutation(n):
                    margin = sign[i] * (X[i] @ w + b)
                    w *= 1.0 - lr * self.l2
                    if margin < 1.0:
                        w += lr * sign[i] * X[i]
                        b += lr * sign[i]
            self.W[:, k] = w
            self.b[k] = b
        return self

    def decision_scores(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.W + self.b

    def predict_codes(self, X) -> np.ndarray:
        return self.decision_scores(X).argmax(axis=1)
