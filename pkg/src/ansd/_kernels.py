"""Compiled inner loops. Arrays in, arrays out; 0-based throughout."""

import numba
import numpy as np

ABSOLUTE = 0
SQUARED = 1


@numba.njit(cache=True)
def _local(x, y, cost):
    d = x - y
    if cost == SQUARED:
        return d * d
    return abs(d)


@numba.njit(cache=True)
def accumulated_cost(a, b, cost):
    n = a.shape[0]
    m = b.shape[0]
    D = np.full((n + 1, m + 1), np.inf)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = D[i - 1, j - 1]
            if D[i - 1, j] < best:
                best = D[i - 1, j]
            if D[i, j - 1] < best:
                best = D[i, j - 1]
            D[i, j] = _local(ai, b[j - 1], cost) + best
    return D


@numba.njit(cache=True)
def backtrack(D):
    # tie order: diagonal, then vertical (step back in a), then horizontal
    i = D.shape[0] - 1
    j = D.shape[1] - 1
    ia = np.empty(i + j, np.int64)
    jb = np.empty(i + j, np.int64)
    k = 0
    ia[k] = i - 1
    jb[k] = j - 1
    while i > 1 or j > 1:
        diag = D[i - 1, j - 1]
        vert = D[i - 1, j]
        horiz = D[i, j - 1]
        best = min(diag, vert, horiz)
        if diag == best:
            i -= 1
            j -= 1
        elif vert == best:
            i -= 1
        else:
            j -= 1
        k += 1
        ia[k] = i - 1
        jb[k] = j - 1
    return ia[: k + 1][::-1].copy(), jb[: k + 1][::-1].copy()


@numba.njit(cache=True)
def dtw_value(a, b, cost):
    # two-row variant, no path
    m = b.shape[0]
    prev = np.full(m + 1, np.inf)
    prev[0] = 0.0
    cur = np.empty(m + 1)
    for i in range(a.shape[0]):
        cur[0] = np.inf
        ai = a[i]
        for j in range(1, m + 1):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = _local(ai, b[j - 1], cost) + best
        prev, cur = cur, prev
    return prev[m]


@numba.njit(cache=True)
def nearest_nonself(t, p, m, cost):
    # u outer, q inner: each window sum still runs left to right, so scores
    # match a plain double loop bit for bit, while the q loop vectorises
    k = t.shape[0] - m + 1
    c = t[p : p + m]
    acc = np.zeros(k)
    for u in range(m):
        cu = c[u]
        w = t[u : u + k]
        if cost == SQUARED:
            for q in range(k):
                d = cu - w[q]
                acc[q] += d * d
        else:
            for q in range(k):
                acc[q] += abs(cu - w[q])
    best = np.inf
    arg = -1
    for q in range(k):
        if abs(p - q) >= m and acc[q] < best:
            best = acc[q]
            arg = q
    return best, arg


@numba.njit(cache=True)
def nearest_nonself_profile(t, m, cost):
    k = t.shape[0] - m + 1
    scores = np.empty(k)
    args = np.empty(k, np.int64)
    for p in range(k):
        scores[p], args[p] = nearest_nonself(t, p, m, cost)
    return scores, args
