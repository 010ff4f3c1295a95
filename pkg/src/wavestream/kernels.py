"""Hot streaming-pyramid loops, numba-compiled with a pure-Python fallback.

Both kernels advance a ring-buffered transform state over a block of input
samples and write one output row per sample.  They are called with a block of
size 1 for single pushes and with whole series for batch feature building;
the per-sample arithmetic is identical either way, which is what makes
streaming output exactly equal to from-scratch recomputation.

Ring addressing: a node that has emitted values 1..t keeps value tau at slot
``(tau - 1) % cap``; capacities are sized so every tap the next level needs
is still resident.  Indices tau <= 0 resolve to the node's first emitted
value (constant-end extension).
"""

import math

from ._accel import njit

SQRT2 = math.sqrt(2.0)


@njit(cache=True)
def ndwt_block(y, h, g, levels, buf, off, cap, first, t0, out):
    """Advance an NDWT state by len(y) samples.

    buf/off/cap/first describe the smooth-chain ring buffers for levels
    0..levels-1 (level 0 is the raw input).  out[i] receives, for sample i,
    the interleaved [detail_1, smooth_1, ..., detail_L, smooth_L] row.
    t0 is the number of samples pushed before this block.
    """
    W = h.size
    n = y.size
    for i in range(n):
        t = t0 + i + 1
        v = y[i]
        if t == 1:
            first[0] = v
        buf[off[0] + (t - 1) % cap[0]] = v
        for lev in range(1, levels + 1):
            spacing = 1 << (lev - 1)
            node = lev - 1
            acc_h = 0.0
            acc_g = 0.0
            for k in range(W):
                tau = t - spacing * (W - 1 - k)
                if tau <= 0:
                    vv = first[node]
                else:
                    vv = buf[off[node] + (tau - 1) % cap[node]]
                acc_h += h[k] * vv
                acc_g += g[k] * vv
            out[i, 2 * (lev - 1)] = acc_g
            out[i, 2 * (lev - 1) + 1] = acc_h
            if lev < levels:
                if t == 1:
                    first[lev] = acc_h
                buf[off[lev] + (t - 1) % cap[lev]] = acc_h


@njit(cache=True)
def nwpt_block(y, h, g, levels, buf, off, cap, first, t0, out):
    """Advance an NWPT state by len(y) samples.

    Buffered nodes are packets (lev, p) for lev = 0..levels-1 in heap order
    (node index 2**lev - 1 + p).  out[i] holds packets for levels 1..L in
    (level, packet) order: column index 2**lev - 2 + p.  Both children carry
    the sqrt(2) prefactor of the packet recurrences.
    """
    W = h.size
    n = y.size
    for i in range(n):
        t = t0 + i + 1
        v = y[i]
        if t == 1:
            first[0] = v
        buf[off[0] + (t - 1) % cap[0]] = v
        for lev in range(1, levels + 1):
            spacing = 1 << (lev - 1)
            n_parents = 1 << (lev - 1)
            parent_base = n_parents - 1          # heap start of level lev-1
            child_col_base = (1 << lev) - 2      # output start of level lev
            for p in range(n_parents):
                node = parent_base + p
                acc_h = 0.0
                acc_g = 0.0
                for k in range(W):
                    tau = t - spacing * (W - 1 - k)
                    if tau <= 0:
                        vv = first[node]
                    else:
                        vv = buf[off[node] + (tau - 1) % cap[node]]
                    acc_h += h[k] * vv
                    acc_g += g[k] * vv
                even = SQRT2 * acc_h
                odd = SQRT2 * acc_g
                out[i, child_col_base + 2 * p] = even
                out[i, child_col_base + 2 * p + 1] = odd
                if lev < levels:
                    child_base = (1 << lev) - 1
                    ceven = child_base + 2 * p
                    codd = child_base + 2 * p + 1
                    if t == 1:
                        first[ceven] = even
                        first[codd] = odd
                    buf[off[ceven] + (t - 1) % cap[ceven]] = even
                    buf[off[codd] + (t - 1) % cap[codd]] = odd
