"""Independent reference implementations used as test oracles.

Deliberately naive: full-history lists, explicit index arithmetic, no ring
buffers, no numba, no shared code with the package's streaming kernels.
"""

import numpy as np


def mirror_oracle(h):
    W = len(h)
    return [(-1.0) ** n * h[W - 1 - n] for n in range(W)]


def causal_ndwt_oracle(y, h, g, levels):
    """Per-level detail/smooth sequences by direct causal convolution.

    Level lev reads the level lev-1 smooth sequence at taps
    t - 2**(lev-1) * (W-1-n); indices before the start are replaced by the
    first element of that sequence.
    """
    W = len(h)
    chains = {0: [float(v) for v in y]}
    details, smooths = {}, {}
    for lev in range(1, levels + 1):
        spacing = 2 ** (lev - 1)
        prev = chains[lev - 1]
        d, c = [], []
        for t in range(1, len(y) + 1):
            acc_h = 0.0
            acc_g = 0.0
            for n in range(W):
                tau = t - spacing * (W - 1 - n)
                v = prev[0] if tau <= 0 else prev[tau - 1]
                acc_h += h[n] * v
                acc_g += g[n] * v
            d.append(acc_g)
            c.append(acc_h)
        details[lev] = d
        smooths[lev] = c
        chains[lev] = c
    return details, smooths


def causal_nwpt_oracle(y, h, g, levels):
    """Packet sequences keyed by (level, packet), with the sqrt(2) prefactor."""
    W = len(h)
    sqrt2 = np.sqrt(2.0)
    packets = {(0, 0): [float(v) for v in y]}
    for lev in range(1, levels + 1):
        spacing = 2 ** (lev - 1)
        for parent in range(2 ** (lev - 1)):
            prev = packets[(lev - 1, parent)]
            even, odd = [], []
            for t in range(1, len(y) + 1):
                acc_h = 0.0
                acc_g = 0.0
                for n in range(W):
                    tau = t - spacing * (W - 1 - n)
                    v = prev[0] if tau <= 0 else prev[tau - 1]
                    acc_h += h[n] * v
                    acc_g += g[n] * v
                even.append(sqrt2 * acc_h)
                odd.append(sqrt2 * acc_g)
            packets[(lev, 2 * parent)] = even
            packets[(lev, 2 * parent + 1)] = odd
    return packets


def ridge_oracle(X, y, alpha):
    """Normal equations by explicit matrix inversion."""
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    ybar = y.mean()
    A = X.T @ X + alpha * np.eye(X.shape[1])
    coef = np.linalg.inv(A) @ (X.T @ (y - ybar))
    return coef, ybar
