"""The two kernel implementations must agree bit for bit, and both must
match independent brute-force oracles."""

import numpy as np
import pytest

from synthqc.kernels import _fallback as fb
from oracles import (
    assign_clusters_oracle,
    best_split_gini_oracle,
    best_split_variance_oracle,
)

try:
    from synthqc.kernels import _speedups as ext
except ImportError:
    ext = None

needs_ext = pytest.mark.skipif(ext is None, reason="compiled extension not built")


def random_split_case(rng):
    n = int(rng.integers(4, 80))
    xs = np.sort(rng.choice(np.linspace(0.0, 1.0, 9), size=n)).astype(np.float64)
    codes = rng.integers(0, 4, size=n).astype(np.int64)
    ys = rng.normal(size=n)
    min_leaf = int(rng.integers(1, 5))
    return xs, codes, ys, min_leaf


@needs_ext
def test_compiled_matches_fallback_bitwise():
    rng = np.random.default_rng(123)
    for _ in range(300):
        xs, codes, ys, min_leaf = random_split_case(rng)
        a = ext.scan_split_gini(xs, codes, 4, min_leaf)
        b = fb.scan_split_gini(xs, codes, 4, min_leaf)
        assert _same_result(a, b)
        a = ext.scan_split_variance(xs, ys, min_leaf)
        b = fb.scan_split_variance(xs, ys, min_leaf)
        assert _same_result(a, b)


def _same_result(a, b):
    gains_equal = a[0] == b[0]
    thresholds_equal = a[1] == b[1] or (np.isnan(a[1]) and np.isnan(b[1]))
    return gains_equal and thresholds_equal


@pytest.mark.parametrize("impl_name", ["fallback", "compiled"])
def test_gini_split_against_oracle(impl_name):
    impl = fb if impl_name == "fallback" else ext
    if impl is None:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(7)
    for _ in range(150):
        xs, codes, _, min_leaf = random_split_case(rng)
        gain, thr = impl.scan_split_gini(xs, codes, 4, min_leaf)
        ogain, othr = best_split_gini_oracle(xs.tolist(), codes.tolist(), 4, min_leaf)
        if np.isinf(ogain):
            assert np.isinf(gain)
        else:
            assert gain == pytest.approx(ogain, abs=1e-12)
            assert thr == othr


@pytest.mark.parametrize("impl_name", ["fallback", "compiled"])
def test_variance_split_against_oracle(impl_name):
    impl = fb if impl_name == "fallback" else ext
    if impl is None:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(8)
    for _ in range(150):
        xs, _, ys, min_leaf = random_split_case(rng)
        gain, thr = impl.scan_split_variance(xs, ys, min_leaf)
        ogain, othr = best_split_variance_oracle(xs.tolist(), ys.tolist(), min_leaf)
        if np.isinf(ogain):
            assert np.isinf(gain)
        else:
            assert gain == pytest.approx(ogain, abs=1e-9)
            assert thr == othr


def test_assignment_against_oracle():
    rng = np.random.default_rng(9)
    for _ in range(40):
        n, k = 30, 4
        p, q = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        if p == 0 and q == 0:
            continue
        num = np.ascontiguousarray(rng.normal(size=(n, p)))
        cat = np.ascontiguousarray(rng.integers(0, 3, size=(n, q)).astype(np.int64))
        pn = np.ascontiguousarray(num[:k])
        pc = np.ascontiguousarray(cat[:k])
        gamma = float(rng.uniform(0.1, 2.0))
        labels, dists = fb.assign_clusters(num, cat, pn, pc, gamma)
        olabels, odists = assign_clusters_oracle(num, cat, pn, pc, gamma)
        assert np.array_equal(labels, olabels)
        assert np.allclose(dists, odists, atol=1e-12)
        if ext is not None:
            clabels, cdists = ext.assign_clusters(num, cat, pn, pc, gamma)
            assert np.array_equal(clabels, labels)
            assert np.array_equal(cdists, dists)
