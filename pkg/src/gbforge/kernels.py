"""Hot inner loops.

Each kernel is written once in a numba-compatible subset of Python. With the
numba backend they are compiled; with ``GBFORGE_BACKEND=numpy`` they run as
ordinary Python over numpy arrays, except Gaussian elimination, which has a
vectorised numpy twin because it is the one kernel numpy expresses well.

Bit vectors are packed little-endian into ``uint64`` words: bit ``j`` lives in
word ``j >> 6`` at position ``j & 63``.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, jit

WORD = 64


def n_words(nbits: int) -> int:
    return max(1, (nbits + WORD - 1) // WORD)


# ---------------------------------------------------------------------------
# GF(2) elimination


@jit
def _rref_loops(rows, ncols):
    m = rows.copy()
    r = m.shape[0]
    nw = m.shape[1]
    pivots = np.empty(min(r, ncols), np.int64)
    rank = 0
    for col in range(ncols):
        if rank == r:
            break
        wi = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for i in range(rank, r):
            if m[i, wi] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(nw):
                tmp = m[piv, k]
                m[piv, k] = m[rank, k]
                m[rank, k] = tmp
        for i in range(r):
            if i != rank and (m[i, wi] & bit):
                for k in range(nw):
                    m[i, k] ^= m[rank, k]
        pivots[rank] = col
        rank += 1
    return m[:rank].copy(), pivots[:rank].copy()


def _rref_numpy(rows, ncols):
    m = rows.copy()
    r = m.shape[0]
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == r:
            break
        wi, shift = col >> 6, np.uint64(col & 63)
        hits = np.flatnonzero((m[rank:, wi] >> shift) & np.uint64(1))
        if hits.size == 0:
            continue
        piv = rank + int(hits[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        mask = ((m[:, wi] >> shift) & np.uint64(1)).astype(bool)
        mask[rank] = False
        m[mask] ^= m[rank]
        pivots.append(col)
        rank += 1
    return m[:rank].copy(), np.asarray(pivots, dtype=np.int64)


rref = _rref_loops if USE_NUMBA else _rref_numpy


@jit
def reduce_vector(basis, pivots, vec):
    """Reduce ``vec`` against reduced row-echelon ``basis``; returns the residue."""
    out = vec.copy()
    for i in range(pivots.shape[0]):
        col = pivots[i]
        if (out[col >> 6] >> np.uint64(col & 63)) & np.uint64(1):
            for k in range(out.shape[0]):
                out[k] ^= basis[i, k]
    return out


# ---------------------------------------------------------------------------
# graph traversal


@jit
def bfs_distances(nbr, src):
    nv = nbr.shape[0]
    dist = np.full(nv, -1, np.int64)
    queue = np.empty(nv, np.int64)
    dist[src] = 0
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        for s in range(nbr.shape[1]):
            w = nbr[v, s]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue[tail] = w
                tail += 1
    return dist


@jit
def connected_without(nbr, r1, r2):
    """True iff the graph minus vertices ``r1`` and ``r2`` is connected (-1 = none)."""
    nv = nbr.shape[0]
    seen = np.zeros(nv, np.bool_)
    removed = 0
    if r1 >= 0:
        seen[r1] = True
        removed += 1
    if r2 >= 0 and r2 != r1:
        seen[r2] = True
        removed += 1
    start = -1
    for v in range(nv):
        if not seen[v]:
            start = v
            break
    if start < 0:
        return True
    queue = np.empty(nv, np.int64)
    queue[0] = start
    seen[start] = True
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        for s in range(nbr.shape[1]):
            w = nbr[v, s]
            if not seen[w]:
                seen[w] = True
                queue[tail] = w
                tail += 1
    return tail == nv - removed


@jit
def pair_deletions_connected(nbr, first):
    """Check every deletion pair ``(first, w)``; returns the first failing ``w`` or -1."""
    for w in range(nbr.shape[0]):
        if w != first and not connected_without(nbr, first, w):
            return w
    return -1


# ---------------------------------------------------------------------------
# cycle search


@jit
def cycle_search(nbr, eid, emask, dist0, length, budget, first_slot, out_edges):
    """Depth-first search for a simple cycle of exactly ``length`` edges through 0
    whose logical-parity mask (XOR of ``emask`` rows) is nonzero.

    ``nbr[v, s]``/``eid[v, s]`` list the neighbour and edge index in slot ``s``
    of vertex ``v``; parallel edges occupy distinct slots. ``dist0`` holds BFS
    distances to vertex 0 and prunes branches that cannot close in time. Each
    cycle is accepted in a single orientation (first edge index < closing edge
    index). ``first_slot >= 0`` restricts the root to one slot.

    Returns ``(status, nodes)`` with status 1 = found (edges written to
    ``out_edges[:length]``), 0 = exhausted, -1 = node budget exceeded.
    """
    nv = nbr.shape[0]
    deg = nbr.shape[1]
    nw = emask.shape[1]
    on_path = np.zeros(nv, np.bool_)
    vs = np.zeros(length + 1, np.int64)
    ss = np.zeros(length + 1, np.int64)
    es = np.zeros(length + 1, np.int64)
    par = np.zeros((length + 1, nw), np.uint64)
    on_path[0] = True
    depth = 0
    lo = 0
    hi = deg
    if first_slot >= 0:
        lo = first_slot
        hi = first_slot + 1
    ss[0] = lo
    nodes = 0
    while True:
        s = ss[depth]
        if s >= (hi if depth == 0 else deg):
            if depth == 0:
                break
            on_path[vs[depth]] = False
            depth -= 1
            ss[depth] += 1
            continue
        v = vs[depth]
        w = nbr[v, s]
        e = eid[v, s]
        nodes += 1
        if nodes > budget:
            return -1, nodes
        step = depth + 1
        if w == 0:
            if step == length and depth >= 1 and e > es[0]:
                nonzero = False
                for k in range(nw):
                    if par[depth, k] ^ emask[e, k]:
                        nonzero = True
                        break
                if nonzero:
                    for i in range(depth):
                        out_edges[i] = es[i]
                    out_edges[depth] = e
                    return 1, nodes
            ss[depth] += 1
            continue
        if on_path[w] or step >= length or dist0[w] > length - step:
            ss[depth] += 1
            continue
        es[depth] = e
        for k in range(nw):
            par[step, k] = par[depth, k] ^ emask[e, k]
        depth = step
        vs[depth] = w
        ss[depth] = 0
        on_path[w] = True
    return 0, nodes
