"""Sequential array kernels compiled with numba.

These loops carry data dependencies (union-find, parent-chain traversals)
that numpy cannot vectorize; JIT compiling them keeps a full optimizer
iteration on desk-scale images in the low milliseconds.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def build_pixel_parents(order, neigh, degree, values):
    """Union-find construction of the canonical pixel-parent forest.

    ``order`` lists pixels by decreasing value (ascending index on ties).
    Returns ``parent`` over pixels such that each pixel with
    ``parent[p] == p`` or ``values[parent[p]] != values[p]`` is the canonical
    representative of one tree node, and every other pixel points directly
    at its node's representative.
    """
    n = order.shape[0]
    parent = np.full(n, -1, dtype=np.int64)
    zpar = np.full(n, -1, dtype=np.int64)
    for k in range(n):
        p = order[k]
        parent[p] = p
        zpar[p] = p
        for t in range(degree[p]):
            q = neigh[p, t]
            if zpar[q] != -1:
                # find root of q's partial component, with path compression
                r = q
                while zpar[r] != r:
                    r = zpar[r]
                s = q
                while zpar[s] != r:
                    tmp = zpar[s]
                    zpar[s] = r
                    s = tmp
                if r != p:
                    parent[r] = p
                    zpar[r] = p
    # canonicalization: root-first sweep redirects every pixel to the
    # representative of its plateau component
    for k in range(n - 1, -1, -1):
        p = order[k]
        q = parent[p]
        if values[parent[q]] == values[q]:
            parent[p] = parent[q]
    return parent


@numba.njit(cache=True)
def accumulate_attributes(parent, proper_count, altitude):
    """Bottom-up pass: area, per-node pixel value sum, subtree max altitude.

    Requires the topological node order (parent index < child index).
    """
    m = parent.shape[0]
    area = proper_count.copy()
    sumf = proper_count * altitude
    maxalt = altitude.copy()
    for c in range(m - 1, 0, -1):
        q = parent[c]
        area[q] += area[c]
        sumf[q] += sumf[c]
        if maxalt[c] > maxalt[q]:
            maxalt[q] = maxalt[c]
    return area, sumf, maxalt


@numba.njit(cache=True)
def fold_max_up(parent, values):
    """In place: values[parent[c]] = max(values[parent[c]], values[c])."""
    for c in range(parent.shape[0] - 1, 0, -1):
        q = parent[c]
        if values[c] > values[q]:
            values[q] = values[c]


@numba.njit(cache=True)
def propagate_down_add(parent, s):
    """In place: add each node's value into all of its descendants."""
    for c in range(1, parent.shape[0]):
        s[c] += s[parent[c]]


@numba.njit(cache=True)
def saddle_walk(parent, best, leaves, ranking, root):
    """Per-leaf climb to the first ancestor holding a strictly better leaf.

    ``best[q]`` is the max ranking over leaves in the subtree of ``q``.
    Returns (saddle, branch_top); the top-ranked leaf stops at the root with
    branch_top = the root's child on its path (the root itself for a
    single-node tree).
    """
    k = leaves.shape[0]
    saddle = np.empty(k, dtype=np.int64)
    btop = np.empty(k, dtype=np.int64)
    for i in range(k):
        x = leaves[i]
        r = ranking[i]
        if x == root:
            saddle[i] = root
            btop[i] = root
            continue
        while True:
            q = parent[x]
            if q == root or best[q] > r:
                saddle[i] = q
                btop[i] = x
                break
            x = q
    return saddle, btop


@numba.njit(cache=True)
def volume_walk(parent, childmax, vol, leaves, root):
    """Volume-extinction climb: ride while this branch's surface is maximal.

    ``vol[c]`` is the branch surface of ``c`` above its parent's level and
    ``childmax[q]`` the largest such surface among children of ``q``.  A leaf
    whose branch is never strictly beaten (including ties all the way up)
    gets saddle = branch_top = root, i.e. the whole-image surface.
    """
    k = leaves.shape[0]
    saddle = np.empty(k, dtype=np.int64)
    btop = np.empty(k, dtype=np.int64)
    for i in range(k):
        x = leaves[i]
        if x == root:
            saddle[i] = root
            btop[i] = root
            continue
        while True:
            q = parent[x]
            if childmax[q] > vol[x]:
                saddle[i] = q
                btop[i] = x
                break
            if q == root:
                saddle[i] = root
                btop[i] = root
                break
            x = q
    return saddle, btop
