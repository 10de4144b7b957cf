# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled explicit-state kernels (see _pykernels for the reference versions)."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def successors(words, table, accepting, long initial):
    cdef const unsigned char[:, :] W = np.ascontiguousarray(words, dtype=np.uint8)
    cdef const int[:, :, :] T = np.ascontiguousarray(table, dtype=np.int32)
    cdef const unsigned char[:] acc = np.ascontiguousarray(accepting, dtype=np.uint8)
    cdef Py_ssize_t N = W.shape[0]
    cdef Py_ssize_t n = W.shape[1]
    cdef Py_ssize_t Q = T.shape[0]
    cdef Py_ssize_t K = T.shape[1]
    cdef Py_ssize_t i, q, b, s, top, cap, count
    cdef int r, a
    cdef long long code
    cdef unsigned char[:, :] alive = np.zeros((n + 1, Q), dtype=np.uint8)
    # explicit DFS stack: state, position, code
    cdef Py_ssize_t stack_cap = (n + 1) * K + 1
    cdef long long[:] st_code = np.zeros(stack_cap, dtype=np.int64)
    cdef int[:] st_q = np.zeros(stack_cap, dtype=np.int32)
    cdef int[:] st_i = np.zeros(stack_cap, dtype=np.int32)
    cdef cnp.int64_t[:] indptr = np.zeros(N + 1, dtype=np.int64)
    cap = max(16, 2 * N)
    out = np.zeros(cap, dtype=np.int64)
    cdef cnp.int64_t[:] outv = out
    count = 0
    for s in range(N):
        for q in range(Q):
            alive[n, q] = acc[q]
        for i in range(n - 1, -1, -1):
            a = W[s, i]
            for q in range(Q):
                alive[i, q] = 0
                for b in range(K):
                    r = T[q, a, b]
                    if r >= 0 and alive[i + 1, r]:
                        alive[i, q] = 1
                        break
        if alive[0, initial]:
            top = 0
            st_q[0] = initial
            st_i[0] = 0
            st_code[0] = 0
            top = 1
            start = count
            while top > 0:
                top -= 1
                q = st_q[top]
                i = st_i[top]
                code = st_code[top]
                if i == n:
                    if count >= cap:
                        cap *= 2
                        out = np.resize(out, cap)
                        outv = out
                    outv[count] = code
                    count += 1
                    continue
                a = W[s, i]
                for b in range(K - 1, -1, -1):
                    r = T[q, a, b]
                    if r >= 0 and alive[i + 1, r]:
                        st_q[top] = r
                        st_i[top] = i + 1
                        st_code[top] = code * K + b
                        top += 1
            if count - start > 1:
                out[start:count] = np.sort(out[start:count])
        indptr[s + 1] = count
    return np.asarray(indptr), out[:count].copy()


def attractor(indptr, idx, pred_ptr, pred_idx, owner, final):
    cdef const cnp.int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[:] pp = np.ascontiguousarray(pred_ptr, dtype=np.int64)
    cdef const cnp.int64_t[:] pi = np.ascontiguousarray(pred_idx, dtype=np.int64)
    cdef const unsigned char[:] own = np.ascontiguousarray(owner, dtype=np.uint8)
    cdef const unsigned char[:] fin = np.ascontiguousarray(final, dtype=np.uint8)
    cdef Py_ssize_t N = own.shape[0]
    res = np.zeros(N, dtype=np.uint8)
    cdef unsigned char[:] win = res
    cdef cnp.int64_t[:] count = np.zeros(N, dtype=np.int64)
    cdef cnp.int64_t[:] queue = np.zeros(N + 1, dtype=np.int64)
    cdef Py_ssize_t s, t, k, head = 0, tail = 0
    for s in range(N):
        count[s] = ip[s + 1] - ip[s]
        if fin[s] or (own[s] == 1 and count[s] == 0):
            win[s] = 1
            queue[tail] = s
            tail += 1
    while head < tail:
        t = queue[head]
        head += 1
        for k in range(pp[t], pp[t + 1]):
            s = pi[k]
            if win[s]:
                continue
            if own[s] == 2:
                win[s] = 1
                queue[tail] = s
                tail += 1
            else:
                count[s] -= 1
                if count[s] == 0:
                    win[s] = 1
                    queue[tail] = s
                    tail += 1
    return res


def trap(indptr, idx, pred_ptr, pred_idx, owner, final):
    cdef const cnp.int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[:] ix = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const cnp.int64_t[:] pp = np.ascontiguousarray(pred_ptr, dtype=np.int64)
    cdef const cnp.int64_t[:] pi = np.ascontiguousarray(pred_idx, dtype=np.int64)
    cdef const unsigned char[:] own = np.ascontiguousarray(owner, dtype=np.uint8)
    cdef const unsigned char[:] fin = np.ascontiguousarray(final, dtype=np.uint8)
    cdef Py_ssize_t N = own.shape[0]
    res = np.zeros(N, dtype=np.uint8)
    cdef unsigned char[:] inside = res
    cdef cnp.int64_t[:] count = np.zeros(N, dtype=np.int64)
    cdef cnp.int64_t[:] queue = np.zeros(N + 1, dtype=np.int64)
    cdef Py_ssize_t s, t, k, head = 0, tail = 0
    for s in range(N):
        inside[s] = 0 if fin[s] else 1
    for s in range(N):
        for k in range(ip[s], ip[s + 1]):
            if inside[ix[k]]:
                count[s] += 1
    for s in range(N):
        if not inside[s]:
            continue
        if (own[s] == 1 and count[s] == 0) or (own[s] == 2 and count[s] < ip[s + 1] - ip[s]):
            inside[s] = 0
            queue[tail] = s
            tail += 1
    while head < tail:
        t = queue[head]
        head += 1
        for k in range(pp[t], pp[t + 1]):
            s = pi[k]
            if not inside[s]:
                continue
            if own[s] == 2:
                inside[s] = 0
                queue[tail] = s
                tail += 1
            else:
                count[s] -= 1
                if count[s] == 0:
                    inside[s] = 0
                    queue[tail] = s
                    tail += 1
    return res


def bfs(indptr, idx, sources, allowed):
    cdef const cnp.int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[:] ix = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const unsigned char[:] src = np.ascontiguousarray(sources, dtype=np.uint8)
    cdef const unsigned char[:] ok = np.ascontiguousarray(allowed, dtype=np.uint8)
    cdef Py_ssize_t N = src.shape[0]
    res = np.zeros(N, dtype=np.uint8)
    cdef unsigned char[:] seen = res
    cdef cnp.int64_t[:] queue = np.zeros(N + 1, dtype=np.int64)
    cdef Py_ssize_t s, t, k, head = 0, tail = 0
    for s in range(N):
        if src[s]:
            seen[s] = 1
            queue[tail] = s
            tail += 1
    while head < tail:
        t = queue[head]
        head += 1
        for k in range(ip[t], ip[t + 1]):
            s = ix[k]
            if not seen[s] and ok[s]:
                seen[s] = 1
                queue[tail] = s
                tail += 1
    return res


def value_iteration(indptr, idx, owner, final, double p, double tol, long max_iter):
    cdef const cnp.int64_t[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[:] ix = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const unsigned char[:] own = np.ascontiguousarray(owner, dtype=np.uint8)
    cdef const unsigned char[:] fin = np.ascontiguousarray(final, dtype=np.uint8)
    cdef Py_ssize_t N = own.shape[0]
    res = np.zeros(N, dtype=np.float64)
    cdef double[:] v = res
    cdef Py_ssize_t s, k, lo, hi, m = 0
    cdef long sweep
    cdef double x, d, delta
    active_arr = np.zeros(N, dtype=np.int64)
    cdef cnp.int64_t[:] active = active_arr
    for s in range(N):
        if fin[s]:
            v[s] = 1.0
        elif ip[s] == ip[s + 1]:
            v[s] = 1.0 if own[s] == 1 else 0.0
        else:
            active[m] = s
            m += 1
    for sweep in range(1, max_iter + 1):
        delta = 0.0
        for k in range(m):
            s = active[k]
            lo = ip[s]
            hi = ip[s + 1]
            if own[s] == 1:
                x = v[ix[lo]]
                for lo in range(lo + 1, hi):
                    if v[ix[lo]] < x:
                        x = v[ix[lo]]
            elif hi - lo == 2:
                x = p * v[ix[lo]] + (1.0 - p) * v[ix[lo + 1]]
            else:
                x = 0.0
                for lo in range(ip[s], hi):
                    x += v[ix[lo]]
                x /= (hi - ip[s])
            d = x - v[s]
            if d < 0:
                d = -d
            if d > delta:
                delta = d
            v[s] = x
        if delta <= tol:
            return res, sweep, True
    return res, max_iter, False
