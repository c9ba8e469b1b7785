# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Exhaustive minimum-weight search over GF(2) fault patterns (compiled)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint8_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()


cdef struct Ctx:
    int n
    int W
    const uint64_t* cols
    const uint64_t* tails
    uint64_t* res
    uint8_t* cur
    uint8_t* best_e
    int best


cdef void _search(Ctx* c, int d, int w) noexcept nogil:
    cdef int W = c.W
    cdef uint64_t* r = c.res + d * W
    cdef uint64_t* nxt
    cdef const uint64_t* col
    cdef const uint64_t* tail
    cdef int k
    cdef bint nonzero = 0
    if w >= c.best:
        return
    for k in range(W):
        if r[k]:
            nonzero = 1
            break
    if not nonzero:
        # zero residual: the all-zero completion is both lightest and lex-first
        c.best = w
        memcpy(c.best_e, c.cur, d)
        memset(c.best_e + d, 0, c.n - d)
        return
    if d == c.n or w + 1 >= c.best:
        return
    tail = c.tails + d * W
    for k in range(W):
        if r[k] & ~tail[k]:
            return
    nxt = r + W
    memcpy(nxt, r, W * sizeof(uint64_t))
    c.cur[d] = 0
    _search(c, d + 1, w)
    col = c.cols + d * W
    for k in range(W):
        nxt[k] = r[k] ^ col[k]
    c.cur[d] = 1
    _search(c, d + 1, w + 1)
    c.cur[d] = 0


def ml_search_batch(cnp.ndarray cols_in, cnp.ndarray syndromes_in):
    """Minimum-weight, lexicographically first solutions of ``H e = s``.

    ``cols_in`` is ``(n, W)`` uint64 packed columns of ``H``; ``syndromes_in``
    is ``(B, W)`` packed syndromes. Returns ``(corrections, weights)`` with
    ``corrections`` of shape ``(B, n)`` uint8 and weight -1 where no solution
    exists. Lexicographic order treats fault 0 as the most significant bit.
    """
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] cols = np.ascontiguousarray(cols_in, dtype=np.uint64)
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] syn = np.ascontiguousarray(syndromes_in, dtype=np.uint64)
    cdef int n = cols.shape[0]
    cdef int W = cols.shape[1] if n > 0 else syn.shape[1]
    cdef Py_ssize_t B = syn.shape[0]
    if n > 0 and syn.shape[1] != W:
        raise ValueError("syndrome word count does not match the columns")
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] tails = np.zeros((n + 1, W), dtype=np.uint64)
    cdef int i, k
    for i in range(n - 1, -1, -1):
        for k in range(W):
            tails[i, k] = tails[i + 1, k] | cols[i, k]
    cdef cnp.ndarray[uint8_t, ndim=2, mode="c"] out = np.zeros((B, n), dtype=np.uint8)
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] weights = np.full(B, -1, dtype=np.int64)
    cdef Ctx c
    cdef Py_ssize_t b
    c.n = n
    c.W = W
    c.cols = &cols[0, 0] if n > 0 else NULL
    c.tails = &tails[0, 0]
    c.res = <uint64_t*> malloc((n + 1) * W * sizeof(uint64_t))
    c.cur = <uint8_t*> malloc(n + 1)
    c.best_e = <uint8_t*> malloc(n + 1)
    if c.res == NULL or c.cur == NULL or c.best_e == NULL:
        free(c.res); free(c.cur); free(c.best_e)
        raise MemoryError()
    try:
        with nogil:
            for b in range(B):
                memcpy(c.res, &syn[b, 0], W * sizeof(uint64_t))
                memset(c.cur, 0, n + 1)
                c.best = n + 1
                _search(&c, 0, 0)
                if c.best <= n:
                    weights[b] = c.best
                    if n > 0:
                        memcpy(&out[b, 0], c.best_e, n)
    finally:
        free(c.res); free(c.cur); free(c.best_e)
    return out, weights
