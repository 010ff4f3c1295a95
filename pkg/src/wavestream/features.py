"""Feature-set construction: lags, coefficient lags, z-scoring, selection.

Every row of a FeatureMatrix is stamped with its time index t and contains
only quantities computable from samples 1..t; targets live `horizon` steps
ahead.  Fitting operations (z-score statistics, selector fits, PCA loadings)
consume the leading `train_rows` rows only and are then applied to the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .ridge import ridge_fit
from .transform import NDWT, TransformConfig, TransformState

__all__ = [
    "FeatureMatrix", "Normalization", "SelectorSpec", "PcaResult",
    "lag_matrix", "coefficient_features", "coefficient_sequences",
    "design_from_sequences", "zscore", "ridge_topk_select", "pca_topk",
]


@dataclass(frozen=True)
class FeatureMatrix:
    """Named design matrix with per-row time stamps and aligned targets."""

    names: tuple
    X: np.ndarray
    times: np.ndarray
    y: np.ndarray
    horizon: int

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate feature names")
        if self.X.shape != (self.times.size, len(self.names)):
            raise ValueError("X shape does not match names/times")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def take_columns(self, indices) -> "FeatureMatrix":
        idx = list(indices)
        return FeatureMatrix(
            names=tuple(self.names[j] for j in idx),
            X=np.ascontiguousarray(self.X[:, idx]),
            times=self.times, y=self.y, horizon=self.horizon,
        )

    def rows_through(self, t: int) -> np.ndarray:
        """Boolean mask of rows whose time stamp is <= t."""
        return self.times <= t


def _lagged_block(seq: np.ndarray, n_lags: int, t_values: np.ndarray) -> np.ndarray:
    """Rows of [seq[t], seq[t-1], ..., seq[t-n_lags+1]] for each t (1-based)."""
    windows = sliding_window_view(seq, n_lags)
    return windows[t_values - n_lags][:, ::-1]


def lag_matrix(series, max_lag: int, horizon: int) -> FeatureMatrix:
    """Plain lag design: column lag.j holds the value j-1 steps before t.

    Rows run over t = max_lag .. T-horizon (every lag defined, target
    observed); the target column is the series `horizon` steps ahead.
    """
    y = np.asarray(series, dtype=np.float64)
    T = y.size
    if max_lag < 1 or horizon < 1:
        raise ValueError("max_lag and horizon must be >= 1")
    if T < max_lag + horizon:
        raise ValueError(
            f"series too short: need at least max_lag + horizon = "
            f"{max_lag + horizon} samples, got {T}"
        )
    t_values = np.arange(max_lag, T - horizon + 1, dtype=np.int64)
    X = np.ascontiguousarray(_lagged_block(y, max_lag, t_values), dtype=np.float64)
    names = tuple(f"lag.{j}" for j in range(1, max_lag + 1))
    return FeatureMatrix(names=names, X=X, times=t_values,
                         y=y[t_values + horizon - 1], horizon=horizon)


def coefficient_sequences(series, config: TransformConfig) -> list[tuple[str, np.ndarray]]:
    """Named per-node coefficient series from one causal streaming pass.

    NDWT keeps the detail sequence of every level, the coarsest smooth, and
    the raw series (intermediate smooths are redundant with finer levels);
    NWPT keeps every packet plus the raw series.
    """
    y = np.asarray(series, dtype=np.float64)
    rows = TransformState(config).push_block(y)
    out: list[tuple[str, np.ndarray]] = []
    if config.mode == NDWT:
        for lev in range(1, config.levels + 1):
            out.append((f"ndwt.L{lev}.detail", rows[:, 2 * (lev - 1)]))
        out.append((f"ndwt.L{config.levels}.smooth", rows[:, 2 * (config.levels - 1) + 1]))
    else:
        for col, (lev, p) in enumerate(config.output_labels()):
            out.append((f"nwpt.L{lev}.p{p}", rows[:, col]))
    out.append(("orig", y))
    return out


def design_from_sequences(named_seqs, y: np.ndarray, n_lags: int,
                          horizon: int) -> FeatureMatrix:
    """Lagged design over named sequences aligned with the target series y.

    Column names carry a `.lag.k` suffix only when n_lags > 1; with a single
    lag each sequence contributes one column named after the sequence.
    """
    if n_lags < 1 or horizon < 1:
        raise ValueError("lag count and horizon must be >= 1")
    T = y.size
    if T < n_lags + horizon:
        raise ValueError(
            f"series too short: need at least lags + horizon = "
            f"{n_lags + horizon} samples, got {T}"
        )
    t_values = np.arange(n_lags, T - horizon + 1, dtype=np.int64)
    blocks, names = [], []
    for name, seq in named_seqs:
        blocks.append(_lagged_block(seq, n_lags, t_values))
        if n_lags == 1:
            names.append(name)
        else:
            names.extend(f"{name}.lag.{k}" for k in range(1, n_lags + 1))
    X = np.ascontiguousarray(np.hstack(blocks), dtype=np.float64)
    return FeatureMatrix(names=tuple(names), X=X, times=t_values,
                         y=y[t_values + horizon - 1], horizon=horizon)


def coefficient_features(series, config: TransformConfig, lags_per_vector: int,
                         horizon: int) -> FeatureMatrix:
    """Lagged columns over each coefficient sequence plus the raw series."""
    y = np.asarray(series, dtype=np.float64)
    return design_from_sequences(coefficient_sequences(y, config), y,
                                 lags_per_vector, horizon)


@dataclass(frozen=True)
class Normalization:
    """Column means/sds fitted on the training rows (n-1 denominator)."""

    means: np.ndarray
    sds: np.ndarray
    train_rows: int

    def as_dict(self) -> dict:
        return {"train_rows": self.train_rows,
                "means": self.means.tolist(), "sds": self.sds.tolist()}


def zscore(fm: FeatureMatrix, train_rows: int) -> tuple[FeatureMatrix, Normalization]:
    """Z-score all rows with statistics fitted on the leading train_rows rows.

    Zero-variance columns map to all-zeros rather than dividing by zero.
    """
    if not 2 <= train_rows <= fm.n_rows:
        raise ValueError("train_rows must be in 2..n_rows")
    Xtr = fm.X[:train_rows]
    means = Xtr.mean(axis=0)
    sds = Xtr.std(axis=0, ddof=1)
    safe = np.where(sds == 0.0, 1.0, sds)
    Z = (fm.X - means) / safe
    Z[:, sds == 0.0] = 0.0
    out = FeatureMatrix(names=fm.names, X=Z, times=fm.times, y=fm.y,
                        horizon=fm.horizon)
    return out, Normalization(means=means, sds=sds, train_rows=train_rows)


@dataclass(frozen=True)
class SelectorSpec:
    method: str                 # "ridge_topk" | "pca_topk"
    k: int
    alpha: float = 1.0

    def __post_init__(self):
        if self.method not in ("ridge_topk", "pca_topk"):
            raise ValueError(f"unknown selector method {self.method!r}")
        if self.k < 1:
            raise ValueError("selector k must be >= 1")
        if self.method == "ridge_topk" and self.alpha <= 0:
            raise ValueError("selector alpha must be > 0")


def ridge_topk_select(fm: FeatureMatrix, y, spec: SelectorSpec,
                      train_rows: int) -> tuple[FeatureMatrix, list]:
    """Keep the k columns with the largest ridge coefficient magnitudes.

    The ridge is fitted on the training rows of the (z-scored) design; ties
    in |coefficient| break lexicographically on column name so rankings are
    reproducible across platforms.  Returns the reduced matrix (columns in
    rank order) and the full ranking as (name, coefficient) pairs.
    """
    if spec.method != "ridge_topk":
        raise ValueError("selector spec is not ridge_topk")
    if spec.k > fm.n_features:
        raise ValueError(f"k={spec.k} exceeds available features {fm.n_features}")
    targets = fm.y if y is None else np.asarray(y, dtype=np.float64)
    model = ridge_fit(fm.X[:train_rows], targets[:train_rows], spec.alpha)
    coef = model.coefficients
    order = sorted(range(fm.n_features),
                   key=lambda j: (-abs(coef[j]), fm.names[j]))
    ranking = [(fm.names[j], float(coef[j])) for j in order]
    return fm.take_columns(order[:spec.k]), ranking


@dataclass(frozen=True)
class PcaResult:
    loadings: np.ndarray        # p x k, orthonormal columns
    eigenvalues: np.ndarray     # k, descending
    explained_ratio: np.ndarray
    feature_names: tuple

    def as_dict(self) -> dict:
        return {"feature_names": list(self.feature_names),
                "eigenvalues": self.eigenvalues.tolist(),
                "explained_ratio": self.explained_ratio.tolist(),
                "loadings": self.loadings.tolist()}


def pca_topk(fm: FeatureMatrix, k: int, train_rows: int) -> tuple[FeatureMatrix, PcaResult]:
    """Project onto the top-k principal components of the training covariance.

    Uses the Gram matrix when rows < columns.  Component signs are fixed by
    making each loading's largest-magnitude entry positive; scores for all
    rows use the training loadings.
    """
    if not 2 <= train_rows <= fm.n_rows:
        raise ValueError("train_rows must be in 2..n_rows")
    Xtr = fm.X[:train_rows]
    n, p = Xtr.shape
    if not 1 <= k <= min(n, p):
        raise ValueError(f"k must be in 1..min(rows, cols) = {min(n, p)}")
    denom = n - 1
    total_var = float((Xtr * Xtr).sum()) / denom
    if p <= n:
        evals, evecs = np.linalg.eigh(Xtr.T @ Xtr / denom)
        V = evecs[:, ::-1][:, :k]
        lam = evals[::-1][:k]
    else:
        evals, u = np.linalg.eigh(Xtr @ Xtr.T / denom)
        lam = evals[::-1][:k]
        floor = 1e-12 * max(total_var, 1.0)
        if np.any(lam <= floor):
            raise ValueError("k exceeds the effective rank of the training rows")
        U = u[:, ::-1][:, :k]
        V = (Xtr.T @ U) / np.sqrt(lam * denom)
    for j in range(V.shape[1]):
        if V[np.argmax(np.abs(V[:, j])), j] < 0:
            V[:, j] = -V[:, j]
    lam = np.maximum(lam, 0.0)
    scores = fm.X @ V
    names = tuple(f"pca.c{j}" for j in range(1, k + 1))
    out = FeatureMatrix(names=names, X=scores, times=fm.times, y=fm.y,
                        horizon=fm.horizon)
    ratio = lam / total_var if total_var > 0 else np.zeros_like(lam)
    return out, PcaResult(loadings=V, eigenvalues=lam, explained_ratio=ratio,
                          feature_names=fm.names)
