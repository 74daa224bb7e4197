"""Compiled inner loops shared by the graph, analysis and oracle modules.

All kernels take plain CSR arrays and release the GIL so callers can fan
them out over a thread pool.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def csr_from_sorted_keys(keys, n):
    """Build a symmetric CSR from strictly increasing keys ``u * n + v`` (u < v).

    Row w lists its lower neighbours (u < w) first, then its upper ones,
    so every row comes out sorted without a second pass.
    """
    m = keys.shape[0]
    lower = np.zeros(n, dtype=np.int64)
    upper = np.zeros(n, dtype=np.int64)
    for i in range(m):
        u = keys[i] // n
        v = keys[i] - u * n
        upper[u] += 1
        lower[v] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for w in range(n):
        indptr[w + 1] = indptr[w] + lower[w] + upper[w]
    indices = np.empty(2 * m, dtype=np.int64)
    lo_pos = indptr[:-1].copy()
    hi_pos = np.empty(n, dtype=np.int64)
    for w in range(n):
        hi_pos[w] = indptr[w] + lower[w]
    for i in range(m):
        u = keys[i] // n
        v = keys[i] - u * n
        indices[lo_pos[v]] = u
        lo_pos[v] += 1
        indices[hi_pos[u]] = v
        hi_pos[u] += 1
    return indptr, indices


@njit(cache=True, nogil=True)
def merge_union(a, b):
    """Union of two strictly increasing int64 arrays by linear merge."""
    out = np.empty(a.shape[0] + b.shape[0], dtype=np.int64)
    i = 0
    j = 0
    k = 0
    while i < a.shape[0] and j < b.shape[0]:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
        elif a[i] > b[j]:
            out[k] = b[j]
            j += 1
        else:
            out[k] = a[i]
            i += 1
            j += 1
        k += 1
    while i < a.shape[0]:
        out[k] = a[i]
        i += 1
        k += 1
    while j < b.shape[0]:
        out[k] = b[j]
        j += 1
        k += 1
    return out[:k]


@njit(cache=True, nogil=True)
def merge_intersection(a, b):
    """Intersection of two strictly increasing int64 arrays by linear merge."""
    out = np.empty(min(a.shape[0], b.shape[0]), dtype=np.int64)
    i = 0
    j = 0
    k = 0
    while i < a.shape[0] and j < b.shape[0]:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out[k] = a[i]
            k += 1
            i += 1
            j += 1
    return out[:k]


@njit(cache=True, nogil=True)
def bfs_distance_sums(indptr, indices, sources):
    """Run one BFS per source.

    Returns, per source, the sum of finite hop distances and the number of
    vertices reached (the source included, so this is its component size).
    """
    n = indptr.shape[0] - 1
    k = sources.shape[0]
    sums = np.zeros(k, dtype=np.int64)
    reached = np.zeros(k, dtype=np.int64)
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(k):
        src = sources[s]
        dist[src] = 0
        queue[0] = src
        head = 0
        tail = 1
        total = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du
                    total += du
                    queue[tail] = v
                    tail += 1
        sums[s] = total
        reached[s] = tail
        for q in range(tail):
            dist[queue[q]] = -1
    return sums, reached


@njit(cache=True, nogil=True)
def neighborhood_union_sizes(vx, px, ix, vy, py, iy, n):
    """Sizes of N_x(u) | N_y(u) for every u keyed in either neighbourhood table.

    ``vx``/``vy`` are the sorted key vertices, ``px``/``ix`` and ``py``/``iy``
    their CSR rows (sorted). A vertex missing from one table contributes an
    empty set on that side. Returns (vertices, sizes) over the key union.
    """
    keys = merge_union(vx, vy)
    sizes = np.zeros(keys.shape[0], dtype=np.int64)
    i = 0
    j = 0
    for t in range(keys.shape[0]):
        u = keys[t]
        a0 = 0
        a1 = 0
        b0 = 0
        b1 = 0
        if i < vx.shape[0] and vx[i] == u:
            a0 = px[i]
            a1 = px[i + 1]
            i += 1
        if j < vy.shape[0] and vy[j] == u:
            b0 = py[j]
            b1 = py[j + 1]
            j += 1
        # sorted-row merge count
        c = 0
        while a0 < a1 and b0 < b1:
            if ix[a0] < iy[b0]:
                a0 += 1
            elif ix[a0] > iy[b0]:
                b0 += 1
            else:
                a0 += 1
                b0 += 1
            c += 1
        c += (a1 - a0) + (b1 - b0)
        sizes[t] = c
    return keys, sizes
