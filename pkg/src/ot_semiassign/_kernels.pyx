# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free

from .errors import Stalled

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int64_t i64


def greedy_match(w, row_labels, col_labels, caps, double eps, row_to_col, col_usage):
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] rl = row_labels
    cdef double[::1] cl = col_labels
    cdef const i64[::1] cap = np.ascontiguousarray(caps, dtype=np.int64)
    cdef i64[::1] r2c = row_to_col
    cdef i64[::1] usage = col_usage
    cdef Py_ssize_t m = wv.shape[0], n = wv.shape[1], i, j
    cdef i64 ops = 0
    with nogil:
        for i in range(m):
            if r2c[i] >= 0:
                continue
            for j in range(n):
                if usage[j] >= cap[j]:
                    continue
                ops += 1
                if rl[i] + cl[j] - wv[i, j] <= eps:
                    r2c[i] = j
                    usage[j] += 1
                    break
    return ops


cdef int _modified_step(
    const double[:, ::1] wt, const i64[::1] caps, double[::1] rl, double[::1] cl,
    i64[::1] r2c, i64[::1] usage, double eps,
    char* in_T, double* slack, i64* slack_arg, i64* prev_col, i64* prev_row,
    i64* S, i64* T, i64* ops_out, i64* alpha_out,
) noexcept nogil:
    # returns 0 on augment, 1 if already perfect, 2 if stalled
    cdef Py_ssize_t m = wt.shape[1], n = wt.shape[0]
    cdef Py_ssize_t i, j, root = -1, v1, z, c, ns = 0, nt = 0
    cdef i64 ops = 0, n_alpha = 0
    cdef double alpha, s, lz, lroot

    for j in range(n):
        if usage[j] < caps[j]:
            root = j
            break
    if root < 0:
        return 1
    S[ns] = root
    ns += 1
    for i in range(m):
        prev_col[i] = -1
        if r2c[i] == root:
            in_T[i] = 1
            T[nt] = i
            nt += 1
        else:
            in_T[i] = 0
    for j in range(n):
        prev_row[j] = -1
    lroot = cl[root]
    for i in range(m):
        if not in_T[i]:
            slack[i] = rl[i] + lroot - wt[root, i]
            slack_arg[i] = root
            ops += 2

    while True:
        v1 = -1
        for i in range(m):
            if in_T[i]:
                continue
            ops += 1
            if slack[i] <= eps:
                v1 = i
                break
        if v1 < 0:
            alpha = INFINITY
            for i in range(m):
                if not in_T[i]:
                    ops += 1
                    if slack[i] < alpha:
                        alpha = slack[i]
            if alpha == INFINITY:
                ops_out[0] += ops
                alpha_out[0] += n_alpha
                return 2
            for j in range(ns):
                cl[S[j]] -= alpha
            for i in range(nt):
                rl[T[i]] += alpha
            ops += ns + nt
            for i in range(m):
                if not in_T[i]:
                    slack[i] -= alpha
                    ops += 1
            n_alpha += 1
            continue

        prev_col[v1] = slack_arg[v1]
        z = r2c[v1]
        if z < 0:
            i = v1
            while True:
                c = prev_col[i]
                r2c[i] = c
                if c == root:
                    break
                i = prev_row[c]
            usage[root] += 1
            ops_out[0] += ops
            alpha_out[0] += n_alpha
            return 0

        prev_row[z] = v1
        S[ns] = z
        ns += 1
        for i in range(m):
            if not in_T[i] and r2c[i] == z:
                in_T[i] = 1
                T[nt] = i
                nt += 1
        lz = cl[z]
        for i in range(m):
            if not in_T[i]:
                s = rl[i] + lz - wt[z, i]
                ops += 2
                if s < slack[i] or (s == slack[i] and z < slack_arg[i]):
                    slack[i] = s
                    slack_arg[i] = z


def modified_augment_all(w, caps, row_labels, col_labels, row_to_col, col_usage, double eps):
    cdef const double[:, ::1] wt = np.ascontiguousarray(np.asarray(w, dtype=np.float64).T)
    cdef const i64[::1] capv = np.ascontiguousarray(caps, dtype=np.int64)
    cdef double[::1] rl = row_labels
    cdef double[::1] cl = col_labels
    cdef i64[::1] r2c = row_to_col
    cdef i64[::1] usage = col_usage
    cdef Py_ssize_t m = wt.shape[1], n = wt.shape[0]
    cdef i64 ops = 0, n_alpha = 0, n_aug = 0
    cdef int status = 0
    cdef char* in_T = <char*> malloc(m * sizeof(char))
    cdef double* slack = <double*> malloc(m * sizeof(double))
    cdef i64* slack_arg = <i64*> malloc(m * sizeof(i64))
    cdef i64* prev_col = <i64*> malloc(m * sizeof(i64))
    cdef i64* prev_row = <i64*> malloc(n * sizeof(i64))
    cdef i64* S = <i64*> malloc(n * sizeof(i64))
    cdef i64* T = <i64*> malloc(m * sizeof(i64))
    if not (in_T and slack and slack_arg and prev_col and prev_row and S and T):
        free(in_T); free(slack); free(slack_arg); free(prev_col)
        free(prev_row); free(S); free(T)
        raise MemoryError()
    try:
        with nogil:
            while True:
                status = _modified_step(
                    wt, capv, rl, cl, r2c, usage, eps, in_T, slack, slack_arg,
                    prev_col, prev_row, S, T, &ops, &n_alpha,
                )
                if status != 0:
                    break
                n_aug += 1
    finally:
        free(in_T); free(slack); free(slack_arg); free(prev_col)
        free(prev_row); free(S); free(T)
    if status == 2:
        raise Stalled("dual update has no finite step")
    return ops, n_aug, n_alpha


def hungarian_augment_all(w, row_labels, col_labels, row_to_col, col_to_row, double eps):
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] rl = row_labels
    cdef double[::1] cl = col_labels
    cdef i64[::1] r2c = row_to_col
    cdef i64[::1] c2r = col_to_row
    cdef Py_ssize_t k = wv.shape[0]
    cdef Py_ssize_t i, j, t, root, c, r, nxt, ns, nt
    cdef i64 ops = 0, n_aug = 0, n_alpha = 0
    cdef double alpha, s, lroot
    cdef bint stalled = False
    cdef char* in_T = <char*> malloc(k * sizeof(char))
    cdef double* slack = <double*> malloc(k * sizeof(double))
    cdef i64* slack_arg = <i64*> malloc(k * sizeof(i64))
    cdef i64* prev_row = <i64*> malloc(k * sizeof(i64))
    cdef i64* S = <i64*> malloc(k * sizeof(i64))
    cdef i64* T = <i64*> malloc(k * sizeof(i64))
    if not (in_T and slack and slack_arg and prev_row and S and T):
        free(in_T); free(slack); free(slack_arg); free(prev_row); free(S); free(T)
        raise MemoryError()
    try:
        with nogil:
            while not stalled:
                root = -1
                for i in range(k):
                    if r2c[i] < 0:
                        root = i
                        break
                if root < 0:
                    break
                for t in range(k):
                    in_T[t] = 0
                    prev_row[t] = -1
                ns = 0
                nt = 0
                S[ns] = root
                ns += 1
                lroot = rl[root]
                for j in range(k):
                    slack[j] = lroot + cl[j] - wv[root, j]
                    slack_arg[j] = root
                    ops += 2
                while True:
                    c = -1
                    for j in range(k):
                        if in_T[j]:
                            continue
                        ops += 1
                        if slack[j] <= eps:
                            c = j
                            break
                    if c < 0:
                        alpha = INFINITY
                        for j in range(k):
                            if not in_T[j]:
                                ops += 1
                                if slack[j] < alpha:
                                    alpha = slack[j]
                        if alpha == INFINITY:
                            stalled = True
                            break
                        for i in range(ns):
                            rl[S[i]] -= alpha
                        for j in range(nt):
                            cl[T[j]] += alpha
                        ops += ns + nt
                        for j in range(k):
                            if not in_T[j]:
                                slack[j] -= alpha
                                ops += 1
                        n_alpha += 1
                        continue
                    prev_row[c] = slack_arg[c]
                    r = c2r[c]
                    if r < 0:
                        j = c
                        while True:
                            i = prev_row[j]
                            nxt = r2c[i]
                            r2c[i] = j
                            c2r[j] = i
                            if i == root:
                                break
                            j = nxt
                        n_aug += 1
                        break
                    in_T[c] = 1
                    T[nt] = c
                    nt += 1
                    S[ns] = r
                    ns += 1
                    lroot = rl[r]
                    for j in range(k):
                        if not in_T[j]:
                            s = lroot + cl[j] - wv[r, j]
                            ops += 2
                            if s < slack[j] or (s == slack[j] and r < slack_arg[j]):
                                slack[j] = s
                                slack_arg[j] = r
    finally:
        free(in_T); free(slack); free(slack_arg); free(prev_row); free(S); free(T)
    if stalled:
        raise Stalled("dual update has no finite step")
    return ops, n_aug, n_alpha
