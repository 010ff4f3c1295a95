"""Forecasting baselines, wavelet-number cross-validation, experiment runner.

The evaluation protocol mirrors the one-step experiment shape at desk scale:
contiguous train / validation-tail / test segments, features built causally
over the whole series, every statistic (normalization, selection, model
coefficients) fitted strictly on rows whose targets fall inside the fitting
segment.  Hyperparameters are chosen on the validation tail by a
deterministic grid: ridge alpha over ALPHA_GRID, wavelet number over the
configured candidates, ties resolved toward the smaller value.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .features import (FeatureMatrix, SelectorSpec, coefficient_sequences,
                       design_from_sequences, lag_matrix, pca_topk,
                       ridge_topk_select, zscore)
from .filters import daubechies_filter
from .metrics import ScoreSummary, smape, summarize_scores
from .ridge import RidgeModel, ridge_fit
from .transform import DEFAULT_BUDGET, TransformConfig

__all__ = [
    "ALPHA_GRID", "SplitSpec", "PipelineConfig", "ExperimentConfig",
    "RidgeModel", "ridge_fit", "persistence_forecast", "cv_select_wavelet",
    "WaveletSelection", "CellResult", "ReportRow", "ForecastReport",
    "run_experiment", "build_features", "default_pipeline",
]

# Ridge regularization search grid: 1/32 doubling up to 32.
ALPHA_GRID = tuple(2.0 ** e for e in range(-5, 6))

FEATURE_KINDS = ("lags", "ndwt", "nwpt")
MODELS = ("ridge", "persistence")


@dataclass(frozen=True)
class SplitSpec:
    """Contiguous train / validation-tail / test layout.

    horizon > 1 switches to direct multi-horizon forecasting from the end of
    the training segment (one model per step ahead); horizon = 1 scores
    one-step-ahead forecasts across the whole test segment.
    """

    train_len: int
    valid_tail_len: int
    test_len: int
    horizon: int = 1

    def __post_init__(self):
        if self.valid_tail_len < 1 or self.test_len < 1 or self.horizon < 1:
            raise ValueError("valid_tail_len, test_len and horizon must be >= 1")
        if self.train_len < self.valid_tail_len:
            raise ValueError("train_len must be >= valid_tail_len")


@dataclass(frozen=True)
class PipelineConfig:
    """How to turn a raw series into a (z-scored, selected) design matrix."""

    kind: str                       # "lags" | "ndwt" | "nwpt"
    max_lag: int = 200              # lags kind only
    levels: int = 6                 # transform kinds only
    lags_per_vector: int = 25       # per-sequence lags for ndwt; nwpt uses 1
    selector: SelectorSpec | None = None
    alpha_grid: tuple = ALPHA_GRID
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if not self.alpha_grid or any(a <= 0 for a in self.alpha_grid):
            raise ValueError("alpha_grid must be non-empty and positive")

    @property
    def n_lags(self) -> int:
        if self.kind == "lags":
            return self.max_lag
        return self.lags_per_vector if self.kind == "ndwt" else 1


def default_pipeline(kind: str) -> PipelineConfig:
    if kind == "nwpt":
        return PipelineConfig(kind=kind, lags_per_vector=1,
                              selector=SelectorSpec("ridge_topk", k=100))
    return PipelineConfig(kind=kind)


def build_features(series, pipeline: PipelineConfig, number: int | None,
                   horizon: int) -> FeatureMatrix:
    """Feature matrix for one series under one wavelet-number choice."""
    if pipeline.kind == "lags":
        return lag_matrix(series, pipeline.max_lag, horizon)
    config = TransformConfig(levels=pipeline.levels,
                             filter=daubechies_filter(number),
                             mode=pipeline.kind, budget=pipeline.budget)
    y = np.asarray(series, dtype=np.float64)
    return design_from_sequences(coefficient_sequences(y, config), y,
                                 pipeline.n_lags, horizon)


def persistence_forecast(train, horizons: int) -> np.ndarray:
    """Repeat the last training observation for every requested horizon."""
    train = np.asarray(train, dtype=np.float64)
    if train.size == 0:
        raise ValueError("persistence needs at least one training observation")
    if horizons < 1:
        raise ValueError("horizons must be >= 1")
    return np.full(horizons, train[-1])


def _fit_count(fm: FeatureMatrix, fit_end: int) -> int:
    """Rows usable for fitting a segment ending at fit_end: target observed."""
    return int(np.searchsorted(fm.times, fit_end - fm.horizon, side="right"))


def _prepare(fm: FeatureMatrix, fit_end: int):
    """Z-score and (optionally) select on the rows fitting before fit_end."""
    n_fit = _fit_count(fm, fit_end)
    if n_fit < 2:
        raise ValueError(
            f"not enough training rows before t={fit_end} "
            f"(first feature row is t={int(fm.times[0])}, horizon={fm.horizon})"
        )
    return n_fit, zscore(fm, n_fit)


def _apply_selector(fm_z: FeatureMatrix, selector: SelectorSpec | None, n_fit: int):
    if selector is None:
        return fm_z, None
    if selector.method == "ridge_topk":
        k = min(selector.k, fm_z.n_features)
        sel, ranking = ridge_topk_select(fm_z, None, replace(selector, k=k), n_fit)
        return sel, {"method": "ridge_topk", "ranking": ranking}
    sel, pca = pca_topk(fm_z, selector.k, n_fit)
    return sel, {"method": "pca_topk", "pca": pca}


def _score_segment(fm_sel: FeatureMatrix, n_fit: int, seg_start: int, seg_end: int,
                   alpha: float):
    """Fit ridge on the leading n_fit rows, predict targets in (seg_start, seg_end]."""
    model = ridge_fit(fm_sel.X[:n_fit], fm_sel.y[:n_fit], alpha)
    target_times = fm_sel.times + fm_sel.horizon
    mask = (target_times > seg_start) & (target_times <= seg_end)
    pred = model.predict(fm_sel.X[mask])
    actual = fm_sel.y[mask]
    return model, pred, actual, target_times[mask]


@dataclass(frozen=True)
class WaveletSelection:
    number: int
    alpha: float
    smape_pct: float
    table: tuple            # (number, best_alpha, best_smape) per candidate


def _tail_table(series, pipeline: PipelineConfig, candidates, split: SplitSpec,
                feature_builder) -> list[tuple[int, float, float]]:
    fit_end = split.train_len - split.valid_tail_len
    rows = []
    for number in sorted(candidates):
        fm = feature_builder(series, pipeline, number, 1)
        n_fit, (fm_z, _) = _prepare(fm, fit_end)
        fm_sel, _ = _apply_selector(fm_z, pipeline.selector, n_fit)
        best_alpha, best_smape = None, None
        for alpha in pipeline.alpha_grid:
            _, pred, actual, _ = _score_segment(fm_sel, n_fit, fit_end,
                                                split.train_len, alpha)
            score = smape(pred, actual)
            if best_smape is None or score < best_smape:
                best_alpha, best_smape = alpha, score
        rows.append((number, best_alpha, best_smape))
    return rows


def cv_select_wavelet(series, candidates, pipeline: PipelineConfig,
                      split: SplitSpec, feature_builder=build_features) -> WaveletSelection:
    """Pick the wavelet number whose validation-tail SMAPE is smallest.

    For every candidate, features are built causally, all fitting uses rows
    whose targets precede the tail, and the ridge alpha grid is scored on the
    tail; the best (number, alpha) pair wins with ties going to the smaller
    number then the smaller alpha.
    """
    if not candidates:
        raise ValueError("no wavelet-number candidates given")
    table = _tail_table(series, pipeline, candidates, split, feature_builder)
    number, alpha, score = min(table, key=lambda row: (row[2], row[0], row[1]))
    return WaveletSelection(number=number, alpha=alpha, smape_pct=score,
                            table=tuple(table))


@dataclass(frozen=True)
class ExperimentConfig:
    pipelines: tuple            # PipelineConfig per feature kind, in report order
    models: tuple = MODELS
    split: SplitSpec = SplitSpec(train_len=1800, valid_tail_len=200, test_len=200)
    candidates: tuple = tuple(range(1, 11))
    jobs: int = 1

    def __post_init__(self):
        if not self.pipelines or not self.models:
            raise ValueError("need at least one pipeline and one model")
        for m in self.models:
            if m not in MODELS:
                raise ValueError(f"unknown model {m!r}; supported: {MODELS}")
        kinds = [p.kind for p in self.pipelines]
        if len(set(kinds)) != len(kinds):
            raise ValueError("duplicate feature kinds in pipelines")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class CellResult:
    """One (series, model, feature-set) evaluation."""

    series_name: str
    model: str
    kind: str
    smape_pct: float
    wavelet_number: int | None
    alpha: float | None
    predictions: np.ndarray
    actuals: np.ndarray
    target_times: np.ndarray
    cv_table: tuple = ()
    training_artifacts: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ReportRow:
    model: str
    feature_set: str
    modal_wavelet_number: int | None
    summary: ScoreSummary


@dataclass(frozen=True)
class ForecastReport:
    rows: tuple
    cells: tuple


def _validate_series(name, values, config: ExperimentConfig):
    y = np.asarray(values, dtype=np.float64)
    split = config.split
    needed = split.train_len + (split.test_len if split.horizon == 1 else split.horizon)
    if y.size < needed:
        raise ValueError(f"series {name!r} has {y.size} samples; split needs {needed}")
    if not np.all(np.isfinite(y)):
        raise ValueError(f"series {name!r} contains non-finite values")
    for p in config.pipelines:
        min_fit_t = p.n_lags + 1
        if split.train_len - split.valid_tail_len - 1 < min_fit_t:
            raise ValueError(
                f"pipeline {p.kind!r}: no fitting rows before the validation "
                f"tail (first usable row t={min_fit_t})"
            )
    return y


def _ridge_cell(name, y, pipeline: PipelineConfig, config: ExperimentConfig) -> CellResult:
    split = config.split
    if pipeline.kind == "lags":
        selection = None
        table = _tail_table(y, pipeline, [0], split,
                            lambda s, p, n, h: build_features(s, p, None, h))
        _, alpha, _ = min(table, key=lambda row: (row[2], row[1]))
        number = None
    else:
        selection = cv_select_wavelet(y, config.candidates, pipeline, split)
        number, alpha = selection.number, selection.alpha

    horizons = range(1, split.horizon + 1) if split.horizon > 1 else (1,)
    test_end = split.train_len + (split.horizon if split.horizon > 1 else split.test_len)
    preds, actuals, times = [], [], []
    artifacts = {}
    for h in horizons:
        fm = build_features(y, pipeline, number, h)
        n_fit, (fm_z, norm) = _prepare(fm, split.train_len)
        fm_sel, sel_info = _apply_selector(fm_z, pipeline.selector, n_fit)
        model, pred, actual, t = _score_segment(fm_sel, n_fit, split.train_len,
                                                test_end, alpha)
        if split.horizon > 1:
            keep = t == split.train_len + h
            pred, actual, t = pred[keep], actual[keep], t[keep]
        preds.append(pred)
        actuals.append(actual)
        times.append(t)
        if h == 1:
            artifacts = {
                "normalization": norm,
                "selection": sel_info,
                "coefficients": model.coefficients,
                "intercept": model.intercept,
                "feature_names": fm_sel.names,
            }
    pred = np.concatenate(preds)
    actual = np.concatenate(actuals)
    return CellResult(
        series_name=name, model="ridge", kind=pipeline.kind,
        smape_pct=smape(pred, actual), wavelet_number=number, alpha=alpha,
        predictions=pred, actuals=actual, target_times=np.concatenate(times),
        cv_table=selection.table if selection else (),
        training_artifacts=artifacts,
    )


def _persistence_cell(name, y, pipeline: PipelineConfig,
                      config: ExperimentConfig) -> CellResult:
    split = config.split
    n_test = split.horizon if split.horizon > 1 else split.test_len
    pred = persistence_forecast(y[:split.train_len], n_test)
    actual = y[split.train_len:split.train_len + n_test]
    times = np.arange(split.train_len + 1, split.train_len + n_test + 1)
    return CellResult(
        series_name=name, model="persistence", kind=pipeline.kind,
        smape_pct=smape(pred, actual), wavelet_number=None, alpha=None,
        predictions=pred, actuals=actual, target_times=times,
    )


def run_experiment(series, config: ExperimentConfig) -> ForecastReport:
    """Evaluate every (model, feature set) cell on every series.

    `series` is a sequence of (name, values) pairs.  Cells are independent
    and may run on a thread pool (config.jobs); results are assembled in a
    fixed order so the report does not depend on the worker count.
    """
    data = [(name, _validate_series(name, values, config)) for name, values in series]

    tasks = []
    for model in config.models:
        for pipeline in config.pipelines:
            for name, y in data:
                fn = _ridge_cell if model == "ridge" else _persistence_cell
                tasks.append((fn, name, y, pipeline))

    def run(task):
        fn, name, y, pipeline = task
        return fn(name, y, pipeline, config)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            cells = list(pool.map(run, tasks))
    else:
        cells = [run(t) for t in tasks]

    rows = []
    i = 0
    for model in config.models:
        for pipeline in config.pipelines:
            group = cells[i:i + len(data)]
            i += len(data)
            numbers = [c.wavelet_number for c in group if c.wavelet_number is not None]
            modal = None
            if numbers:
                counts = Counter(numbers)
                top = max(counts.values())
                modal = min(n for n, cnt in counts.items() if cnt == top)
            rows.append(ReportRow(
                model=model, feature_set=pipeline.kind, modal_wavelet_number=modal,
                summary=summarize_scores([c.smape_pct for c in group]),
            ))
    return ForecastReport(rows=tuple(rows), cells=tuple(cells))


def format_report_text(report: ForecastReport) -> str:
    """Aligned four-column table: Model, Feature Set, Modal Wavelet Number,
    Mean SMAPE % (SE)."""
    header = ("Model", "Feature Set", "Modal Wavelet Number", "Mean SMAPE % (SE)")
    body = []
    for row in report.rows:
        modal = "-" if row.modal_wavelet_number is None else str(row.modal_wavelet_number)
        body.append((row.model, row.feature_set, modal,
                     f"{row.summary.mean_smape_pct:.2f} ({row.summary.se_pct:.2f})"))
    widths = [max(len(header[j]), *(len(r[j]) for r in body)) for j in range(4)]
    lines = ["  ".join(h.ljust(widths[j]) for j, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(v.ljust(widths[j]) for j, v in enumerate(r)))
    return "\n".join(lines) + "\n"
