"""Compiled inner loops for summary propagation.

The round kernel mirrors :func:`cologne.summaries.merge_many` exactly:
contributions are accumulated per key in the same order and surviving
entries keep first-seen order, so both paths produce identical floats.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def weighted_round(indptr, indices, scale, prev_keys, prev_w, prev_len,
                   seed_w, carry_prev, capacity, out_keys, out_w, out_len, pos):
    n = indptr.shape[0] - 1
    buf_k = np.empty(n, dtype=np.int64)
    buf_v = np.empty(n, dtype=np.float64)
    top = np.empty(capacity + 1, dtype=np.float64)
    for u in range(n):
        cnt = 0
        if carry_prev:
            for j in range(prev_len[u]):
                key = prev_keys[u, j]
                val = prev_w[u, j]
                p = pos[key]
                if p < 0:
                    pos[key] = cnt
                    buf_k[cnt] = key
                    buf_v[cnt] = 0.0 + val
                    cnt += 1
                else:
                    buf_v[p] += val
        else:
            pos[u] = 0
            buf_k[0] = u
            buf_v[0] = 0.0 + seed_w[u]
            cnt = 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            s = scale[e]
            for j in range(prev_len[v]):
                key = prev_keys[v, j]
                val = s * prev_w[v, j]
                p = pos[key]
                if p < 0:
                    pos[key] = cnt
                    buf_k[cnt] = key
                    buf_v[cnt] = 0.0 + val
                    cnt += 1
                else:
                    buf_v[p] += val
        for j in range(cnt):
            pos[buf_k[j]] = -1
        # drop non-positive entries, keeping order
        live = 0
        for j in range(cnt):
            if buf_v[j] > 0:
                buf_k[live] = buf_k[j]
                buf_v[live] = buf_v[j]
                live += 1
        delta = 0.0
        if live > capacity:
            # top[0..capacity] holds the capacity+1 largest weights, descending
            filled = 0
            for j in range(live):
                x = buf_v[j]
                if filled == capacity + 1:
                    if x <= top[capacity]:
                        continue
                    i = capacity
                else:
                    i = filled
                    filled += 1
                while i > 0 and top[i - 1] < x:
                    top[i] = top[i - 1]
                    i -= 1
                top[i] = x
            delta = top[capacity]
        out = 0
        for j in range(live):
            val = buf_v[j] - delta
            if val > 0:
                out_keys[u, out] = buf_k[j]
                out_w[u, out] = val
                out += 1
        out_len[u] = out


@njit(cache=True, nogil=True)
def heaviest_rows(keys, w, lens):
    n = keys.shape[0]
    best = np.full(n, -1, dtype=np.int64)
    best_w = np.zeros(n, dtype=np.float64)
    for u in range(n):
        for j in range(lens[u]):
            k = keys[u, j]
            x = w[u, j]
            if best[u] < 0 or x > best_w[u] or (x == best_w[u] and k < best[u]):
                best[u] = k
                best_w[u] = x
    return best, best_w


@njit(cache=True, nogil=True)
def threshold_rows(keys, w, lens, thresholds):
    """Unique entry with weight >= threshold per row, else -1."""
    n = keys.shape[0]
    best = np.full(n, -1, dtype=np.int64)
    best_w = np.zeros(n, dtype=np.float64)
    for u in range(n):
        hits = 0
        for j in range(lens[u]):
            if w[u, j] >= thresholds[u]:
                hits += 1
                best[u] = keys[u, j]
                best_w[u] = w[u, j]
        if hits != 1:
            best[u] = -1
            best_w[u] = 0.0
    return best, best_w
