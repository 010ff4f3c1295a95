"""Forecast accuracy metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["smape", "ScoreSummary", "summarize_scores"]


def smape(pred, actual, *, minus_form: bool = False) -> float:
    """Symmetric mean absolute percentage error, in percent.

    mean_t of |pred_t - actual_t| / ((|pred_t| + |actual_t|) / 2), times 100;
    terms with a zero denominator contribute zero, so identical zero series
    score 0.  Bounded by 200 and symmetric in its arguments.

    minus_form=True switches the denominator to (|pred| - |actual|) / 2, an
    unbounded variant kept only for auditing against sources that define it
    that way; it is never the right choice for evaluation.
    """
    p = np.asarray(pred, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape or p.ndim != 1 or p.size == 0:
        raise ValueError("smape needs two equal-length 1-D sequences")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(a))):
        raise ValueError("smape inputs must be finite")
    if minus_form:
        denom = (np.abs(p) - np.abs(a)) / 2.0
    else:
        denom = (np.abs(p) + np.abs(a)) / 2.0
    terms = np.zeros_like(p)
    nz = denom != 0.0
    terms[nz] = np.abs(p[nz] - a[nz]) / denom[nz]
    return float(terms.mean() * 100.0)


@dataclass(frozen=True)
class ScoreSummary:
    """Across-series summary: mean SMAPE %, its standard error, series count."""

    mean_smape_pct: float
    se_pct: float
    n: int


def summarize_scores(per_series_smape) -> ScoreSummary:
    """Mean and standard error (sd / sqrt(n), n-1 denominator) of SMAPEs."""
    s = np.asarray(per_series_smape, dtype=np.float64)
    if s.size == 0:
        raise ValueError("no scores to summarize")
    se = 0.0 if s.size == 1 else float(s.std(ddof=1) / np.sqrt(s.size))
    return ScoreSummary(mean_smape_pct=float(s.mean()), se_pct=se, n=int(s.size))
