"""Pure-Python twin of the compiled ``_search`` kernel, same signature and output."""

from __future__ import annotations

import numpy as np


def _as_ints(words: np.ndarray) -> list[int]:
    out = []
    for row in np.asarray(words, dtype=np.uint64):
        v = 0
        for k, wd in enumerate(row.tolist()):
            v |= int(wd) << (64 * k)
        out.append(v)
    return out


def ml_search_batch(cols_in: np.ndarray, syndromes_in: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-weight, lexicographically first solutions of ``H e = s``.

    Depth-first over faults 0..n-1, trying 0 before 1, so complete patterns
    are met in lexicographic order; a solution is kept only if strictly
    lighter than the incumbent. Subtrees are cut when the residual touches a
    detector no remaining fault can reach, or when they cannot beat the
    incumbent weight.
    """
    cols = _as_ints(cols_in)
    syndromes = _as_ints(syndromes_in)
    n = len(cols)
    tails = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tails[i] = tails[i + 1] | cols[i]
    out = np.zeros((len(syndromes), n), dtype=np.uint8)
    weights = np.full(len(syndromes), -1, dtype=np.int64)

    for b, s in enumerate(syndromes):
        best_w = n + 1
        best: list[int] = []
        cur: list[int] = []
        # explicit stack of (depth, residual, weight, chosen bit)
        stack = [(0, s, 0, -1)]
        while stack:
            d, r, w, bit = stack.pop()
            del cur[max(d - 1, 0) :]
            if bit >= 0:
                cur.append(bit)
            if w >= best_w:
                continue
            if r == 0:
                best_w = w
                best = cur + [0] * (n - d)
                continue
            if d == n or w + 1 >= best_w or r & ~tails[d]:
                continue
            stack.append((d + 1, r ^ cols[d], w + 1, 1))
            stack.append((d + 1, r, w, 0))
        if best_w <= n:
            weights[b] = best_w
            out[b, :] = best
    return out, weights
