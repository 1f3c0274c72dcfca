"""Pure numpy kernels; the reference semantics for the compiled twins.

The compiled module mirrors these bit for bit: Gini statistics are kept as
exact int64 counts, running sums accumulate in index order (np.cumsum is
sequential), and every float expression has the same shape, so the two
paths agree to the last ulp and ties resolve identically (first maximum /
first minimum wins).
"""

import numpy as np

IS_COMPILED = False


def scan_split_gini(xs, codes, n_classes, min_leaf):
    """Best binary split of a presorted feature for a classification target.

    xs: float64[n] ascending; codes: int64[n] class codes aligned with xs.
    Returns (gain, threshold) where gain is the decrease in Gini impurity
    and rows with value <= threshold go left; (-inf, nan) if no valid split.
    """
    n = xs.shape[0]
    if n < 2 * min_leaf:
        return -np.inf, np.nan
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), codes] = 1
    left = np.cumsum(onehot, axis=0)[:-1]
    total = onehot.sum(axis=0)
    right = total - left
    sumsq_l = (left * left).sum(axis=1).astype(np.float64)
    sumsq_r = (right * right).sum(axis=1).astype(np.float64)
    sumsq_t = float((total * total).sum())
    nl = np.arange(1, n, dtype=np.float64)
    nr = np.float64(n) - nl
    fn = np.float64(n)
    gain = (sumsq_l / nl + sumsq_r / nr) / fn - (sumsq_t / fn) / fn
    valid = (xs[:-1] != xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
    gain = np.where(valid, gain, -np.inf)
    i = int(np.argmax(gain))
    if gain[i] == -np.inf:
        return -np.inf, np.nan
    return float(gain[i]), float(xs[i])


def scan_split_variance(xs, ys, min_leaf):
    """Best binary split of a presorted feature for a regression target.

    Gain is the decrease in the sum of squared deviations; same return
    conventions as scan_split_gini.
    """
    n = xs.shape[0]
    if n < 2 * min_leaf:
        return -np.inf, np.nan
    cs = np.cumsum(ys)
    total = cs[-1]
    sl = cs[:-1]
    sr = total - sl
    nl = np.arange(1, n, dtype=np.float64)
    nr = np.float64(n) - nl
    gain = (sl * sl) / nl + (sr * sr) / nr - (total * total) / np.float64(n)
    valid = (xs[:-1] != xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
    gain = np.where(valid, gain, -np.inf)
    i = int(np.argmax(gain))
    if gain[i] == -np.inf:
        return -np.inf, np.nan
    return float(gain[i]), float(xs[i])


def assign_clusters(num, cat, proto_num, proto_cat, gamma):
    """Nearest-prototype assignment under the mixed dissimilarity
    (squared Euclidean on numeric parts + gamma * categorical mismatches).

    Returns (labels int64[n], dist float64[n] to the chosen prototype).
    """
    n = num.shape[0]
    k = proto_num.shape[0]
    dist = np.zeros((n, k), dtype=np.float64)
    for j in range(num.shape[1]):
        diff = num[:, j, None] - proto_num[None, :, j]
        dist += diff * diff
    if cat.shape[1]:
        mism = np.zeros((n, k), dtype=np.float64)
        for j in range(cat.shape[1]):
            mism += (cat[:, j, None] != proto_cat[None, :, j]).astype(np.float64)
        dist += gamma * mism
    labels = dist.argmin(axis=1)
    return labels.astype(np.int64), dist[np.arange(n), labels]
