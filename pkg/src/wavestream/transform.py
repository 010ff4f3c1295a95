"""One-pass causal NDWT / NWPT engine plus batch-DWT oracle and Haar tools.

The streaming engine computes, at every time index t, one coefficient per
configured tree node using only samples 1..t ("shifted" pyramid: the newest
tap of every filter window lands on time t).  Missing pre-series inputs are
imputed with the node's first emitted value (constant-end extension), so
coefficients are final the moment they are emitted and are never revised.

Level indexing is 1..L with level 1 the finest; the tap spacing at level
``lev`` is ``2**(lev-1)``.  Detail signs follow the re-indexed mirror filter
(see filters module): they may be globally flipped versus the textbook
differencing convention, which no consumer here depends on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .filters import FilterPair, daubechies_filter
from .kernels import SQRT2, ndwt_block, nwpt_block

__all__ = [
    "NDWT", "NWPT", "TransformBudgetError", "TransformConfig", "TransformState",
    "CoefficientFrame", "ndwt_push", "nwpt_push", "batch_dwt", "DwtPyramid",
    "haar_threshold_denoise", "online_invertibility_report", "InvertibilityReport",
]

NDWT = "ndwt"
NWPT = "nwpt"

# Ring-buffer budget in float64 slots (32 MiB) unless overridden per config.
DEFAULT_BUDGET = 1 << 22


class TransformBudgetError(ValueError):
    """Configured tree needs more ring-buffer memory than the budget allows."""


def _node_capacities(mode: str, levels: int, width: int) -> np.ndarray:
    """Ring capacity per buffered node, in emission order.

    A node at level ``lev`` is read by level ``lev+1`` with tap spacing
    ``2**lev``, so it must retain ``(W-1) * 2**lev + 1`` values.  Leaves
    (level L) are emitted but never re-read, hence not buffered.
    """
    caps = []
    for lev in range(levels):
        cap = (width - 1) * (1 << lev) + 1
        count = (1 << lev) if mode == NWPT else 1
        caps.extend([cap] * count)
    return np.asarray(caps, dtype=np.int64)


@dataclass(frozen=True)
class TransformConfig:
    """Shape of one streaming decomposition: level count, filter, mode."""

    levels: int
    filter: FilterPair
    mode: str = NDWT
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.mode not in (NDWT, NWPT):
            raise ValueError(f"mode must be {NDWT!r} or {NWPT!r}, got {self.mode!r}")
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        caps = _node_capacities(self.mode, self.levels, self.filter.width)
        total = int(caps.sum())
        if total > self.budget:
            raise TransformBudgetError(
                f"ring buffers need {total} float64 slots "
                f"(mode={self.mode}, levels={self.levels}, W={self.filter.width}) "
                f"but the budget is {self.budget}"
            )

    @property
    def n_outputs(self) -> int:
        if self.mode == NDWT:
            return 2 * self.levels
        return (1 << (self.levels + 1)) - 2

    def output_labels(self) -> list[tuple]:
        """Column labels of a coefficient row, in emission order.

        NDWT: (level, 'detail') and (level, 'smooth') per level.
        NWPT: (level, packet) with packet 0..2**level - 1.
        """
        labels: list[tuple] = []
        if self.mode == NDWT:
            for lev in range(1, self.levels + 1):
                labels.append((lev, "detail"))
                labels.append((lev, "smooth"))
        else:
            for lev in range(1, self.levels + 1):
                for p in range(1 << lev):
                    labels.append((lev, p))
        return labels

    @property
    def burn_in(self) -> int:
        """Prefix length during which constant-end extension can matter.

        This is the coarsest node's full receptive field,
        (W-1) * (2**L - 1): the deepest level looks back (W-1) * 2**(L-1)
        samples directly, and the parent values it reads are themselves
        extension-influenced over their own lookback.  Beyond this index,
        coefficients are exactly shift-equivariant.
        """
        return (self.filter.width - 1) * ((1 << self.levels) - 1)


@dataclass(frozen=True)
class CoefficientFrame:
    """All coefficients emitted at one time index."""

    t: int
    values: np.ndarray
    labels: tuple

    def detail(self, level: int) -> float:
        return float(self.values[self.labels.index((level, "detail"))])

    def smooth(self, level: int) -> float:
        return float(self.values[self.labels.index((level, "smooth"))])

    def packet(self, level: int, index: int) -> float:
        return float(self.values[self.labels.index((level, index))])

    def mapping(self) -> dict:
        return dict(zip(self.labels, (float(v) for v in self.values)))


class TransformState:
    """Mutable per-series state; pushes are strictly sequential.

    Not thread-safe; run one state per series, as many states in parallel
    as you like.
    """

    def __init__(self, config: TransformConfig):
        self.config = config
        self._labels = tuple(config.output_labels())
        caps = _node_capacities(config.mode, config.levels, config.filter.width)
        offs = np.zeros(caps.size, dtype=np.int64)
        np.cumsum(caps[:-1], out=offs[1:])
        self._cap = caps
        self._off = offs
        self._buf = np.zeros(int(caps.sum()), dtype=np.float64)
        self._first = np.zeros(caps.size, dtype=np.float64)
        self._kernel = ndwt_block if config.mode == NDWT else nwpt_block
        self.t = 0

    @property
    def labels(self) -> tuple:
        return self._labels

    def push(self, value: float) -> CoefficientFrame:
        """Consume one sample, emit the coefficients for this time index."""
        row = self.push_block([value])[0]
        row.setflags(write=False)
        return CoefficientFrame(t=self.t, values=row, labels=self._labels)

    def push_block(self, values) -> np.ndarray:
        """Consume a block of samples; returns one row per sample.

        Identical results to repeated push(); rejects non-finite input with
        the state untouched.
        """
        y = np.ascontiguousarray(values, dtype=np.float64)
        if y.ndim != 1:
            raise ValueError("push_block expects a 1-D block of samples")
        if y.size and not np.all(np.isfinite(y)):
            raise ValueError("non-finite sample rejected; state unchanged")
        out = np.empty((y.size, self.config.n_outputs), dtype=np.float64)
        if y.size:
            self._kernel(y, self.config.filter.h, self.config.filter.g,
                         self.config.levels, self._buf, self._off, self._cap,
                         self._first, self.t, out)
            self.t += y.size
        return out


def ndwt_push(state: TransformState, value: float) -> CoefficientFrame:
    if state.config.mode != NDWT:
        raise ValueError("state is not configured for NDWT")
    return state.push(value)


def nwpt_push(state: TransformState, value: float) -> CoefficientFrame:
    if state.config.mode != NWPT:
        raise ValueError("state is not configured for NWPT")
    return state.push(value)


@dataclass(frozen=True)
class DwtPyramid:
    """Decimated pyramid: details[i] / smooths[i] hold level i+1 (finest first)."""

    details: tuple
    smooths: tuple


def batch_dwt(series, filter: FilterPair, levels: int) -> DwtPyramid:
    """Classical decimated DWT of a dyadic-length series.

    Uses the same causal tap window and constant-end extension as the
    streaming engine, so interior coefficients coincide with the streaming
    ones on the even sub-lattice.  Reference oracle; not performance code.
    """
    y = np.asarray(series, dtype=np.float64)
    T = y.size
    J = T.bit_length() - 1
    if T < 2 or (T & (T - 1)) != 0:
        raise ValueError(f"batch_dwt needs dyadic length, got {T}")
    if not 1 <= levels <= J:
        raise ValueError(f"levels must be in 1..{J} for length {T}")
    h, g = filter.h, filter.g
    W = filter.width
    c = y
    details, smooths = [], []
    for _ in range(levels):
        K = c.size // 2
        d_next = np.empty(K)
        c_next = np.empty(K)
        for k in range(1, K + 1):
            acc_h = 0.0
            acc_g = 0.0
            for n in range(W):
                m = 2 * k - (W - 1) + n
                v = c[0] if m <= 0 else c[m - 1]
                acc_h += h[n] * v
                acc_g += g[n] * v
            d_next[k - 1] = acc_g
            c_next[k - 1] = acc_h
        details.append(d_next)
        smooths.append(c_next)
        c = c_next
    return DwtPyramid(details=tuple(details), smooths=tuple(smooths))


def haar_threshold_denoise(series, levels: int, lam: float) -> np.ndarray:
    """Online Haar denoising: forward step, hard-threshold, 2x2 inversion.

    Each output sample is reconstructed from the time-t coefficients only,
    inverting the orthonormal Haar step level by level:
    ``c_prev[t] = (c[t] - d[t]) / sqrt(2)``.  lam = 0 reproduces the input;
    only the Haar pair admits this causal inversion (see
    online_invertibility_report for why wider filters do not).
    """
    if lam < 0:
        raise ValueError("threshold must be >= 0")
    config = TransformConfig(levels=levels, filter=daubechies_filter(1), mode=NDWT)
    rows = TransformState(config).push_block(series)
    recon = rows[:, 2 * (levels - 1) + 1].copy()  # coarsest smooth
    for lev in range(levels, 0, -1):
        d = rows[:, 2 * (lev - 1)]
        d = np.where(np.abs(d) < lam, 0.0, d)
        recon = (recon - d) / SQRT2
    return recon


@dataclass(frozen=True)
class InvertibilityReport:
    """Why online thresholding is Haar-only, in numbers."""

    number: int
    width: int
    det_magnitude: float
    orthonormal: bool
    matrix: np.ndarray = field(repr=False)


def online_invertibility_report(number: int) -> InvertibilityReport:
    """Banded forward-step matrix of the shifted pyramid and its determinant.

    Rows are (h.., g..) pairs advanced one column per pair, W-1 pairs, giving
    a square (2W-2) x (2W-2) system.  For W = 2 the matrix is orthonormal
    with |det| = 1; for wider filters |det| < 1, so inverting the step after
    thresholding amplifies coefficients without bound.
    """
    filt = daubechies_filter(number)
    W = filt.width
    pairs = W - 1
    size = 2 * pairs
    M = np.zeros((size, size))
    for i in range(pairs):
        M[2 * i, i:i + W] = filt.h
        M[2 * i + 1, i:i + W] = filt.g
    sign, logdet = np.linalg.slogdet(M)
    det_mag = 0.0 if sign == 0 else float(np.exp(logdet))
    ortho = bool(np.allclose(M @ M.T, np.eye(size), atol=1e-10))
    return InvertibilityReport(number=number, width=W, det_magnitude=det_mag,
                               orthonormal=ortho, matrix=M)
