# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled twins of the _fallback kernels. Arithmetic mirrors the numpy
# versions expression-for-expression so both paths are bit-identical.

import numpy as np

cimport numpy as cnp

cnp.import_array()

IS_COMPILED = True

cdef double NEG_INF = -np.inf


def scan_split_gini(cnp.float64_t[::1] xs, cnp.int64_t[::1] codes,
                    Py_ssize_t n_classes, Py_ssize_t min_leaf):
    cdef Py_ssize_t n = xs.shape[0]
    if n < 2 * min_leaf:
        return NEG_INF, float("nan")
    cdef cnp.int64_t[::1] left = np.zeros(n_classes, dtype=np.int64)
    cdef cnp.int64_t[::1] total = np.zeros(n_classes, dtype=np.int64)
    cdef Py_ssize_t i, c
    cdef cnp.int64_t sumsq_li = 0, sumsq_ri, sumsq_ti = 0
    for i in range(n):
        total[codes[i]] += 1
    for c in range(n_classes):
        sumsq_ti += total[c] * total[c]
    cdef double fn = <double> n
    cdef double base = ((<double> sumsq_ti) / fn) / fn
    cdef double best_gain = NEG_INF
    cdef double best_thr = float("nan")
    cdef double gain, nl, nr, sumsq_l, sumsq_r
    for i in range(n - 1):
        c = codes[i]
        # moving row i to the left side: count goes c_old -> c_old+1
        sumsq_li += 2 * left[c] + 1
        left[c] += 1
        if xs[i] == xs[i + 1]:
            continue
        nl = <double> (i + 1)
        nr = fn - nl
        if nl < min_leaf or nr < min_leaf:
            continue
        sumsq_ri = 0
        for c in range(n_classes):
            sumsq_ri += (total[c] - left[c]) * (total[c] - left[c])
        sumsq_l = <double> sumsq_li
        sumsq_r = <double> sumsq_ri
        gain = (sumsq_l / nl + sumsq_r / nr) / fn - base
        if gain > best_gain:
            best_gain = gain
            best_thr = xs[i]
    return best_gain, best_thr


def scan_split_variance(cnp.float64_t[::1] xs, cnp.float64_t[::1] ys,
                        Py_ssize_t min_leaf):
    cdef Py_ssize_t n = xs.shape[0]
    if n < 2 * min_leaf:
        return NEG_INF, float("nan")
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        total += ys[i]
    cdef double fn = <double> n
    cdef double base = (total * total) / fn
    cdef double best_gain = NEG_INF
    cdef double best_thr = float("nan")
    cdef double sl = 0.0, sr, nl, nr, gain
    for i in range(n - 1):
        sl += ys[i]
        if xs[i] == xs[i + 1]:
            continue
        nl = <double> (i + 1)
        nr = fn - nl
        if nl < min_leaf or nr < min_leaf:
            continue
        sr = total - sl
        gain = (sl * sl) / nl + (sr * sr) / nr - base
        if gain > best_gain:
            best_gain = gain
            best_thr = xs[i]
    return best_gain, best_thr


def assign_clusters(cnp.float64_t[:, ::1] num, cnp.int64_t[:, ::1] cat,
                    cnp.float64_t[:, ::1] proto_num, cnp.int64_t[:, ::1] proto_cat,
                    double gamma):
    # num/cat are always (n, p) and (n, q) with p or q possibly 0
    cdef Py_ssize_t n = num.shape[0]
    cdef Py_ssize_t k = proto_num.shape[0]
    cdef Py_ssize_t p = num.shape[1]
    cdef Py_ssize_t q = cat.shape[1]
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef cnp.float64_t[::1] dists = dists_arr
    cdef Py_ssize_t i, c, j, best_c
    cdef double d, diff, best_d
    cdef cnp.int64_t m
    for i in range(n):
        best_c = 0
        best_d = 0.0
        for c in range(k):
            d = 0.0
            for j in range(p):
                diff = num[i, j] - proto_num[c, j]
                d += diff * diff
            if q:
                m = 0
                for j in range(q):
                    if cat[i, j] != proto_cat[c, j]:
                        m += 1
                d += gamma * (<double> m)
            if c == 0 or d < best_d:
                best_d = d
                best_c = c
        labels[i] = best_c
        dists[i] = best_d
    return labels_arr, dists_arr
