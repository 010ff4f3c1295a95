"""Command-line surface: simulate | transform | features | forecast | filters | smape.

Wire format is CSV throughout (mandatory header, UTF-8, '.' decimal, floats
at 17 significant digits so values round-trip exactly).  Exit codes: 0
success, 1 runtime/data error, 2 usage or configuration error.

`transform --input -` runs in streaming mode: one sample per stdin line,
that sample's coefficient rows written and flushed before the next line is
read, so external callers can drive the engine push by push.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from ._accel import USING_NUMBA
from .features import SelectorSpec, coefficient_features, lag_matrix, pca_topk, \
    ridge_topk_select, zscore
from .filters import daubechies_filter
from .forecast import (ALPHA_GRID, ExperimentConfig, PipelineConfig, SplitSpec,
                       format_report_text, run_experiment)
from .metrics import smape
from .signals import SIGNAL_KINDS, SignalSpec, generate
from .transform import DEFAULT_BUDGET, NDWT, NWPT, TransformConfig, TransformState

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class DataError(Exception):
    """Runtime/data problem: exit code 1."""


class UsageError(Exception):
    """Configuration problem detected before processing: exit code 2."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def read_series_csv(path: str) -> np.ndarray:
    """Read a two-column t,value CSV (header mandatory)."""
    stream = sys.stdin if path == "-" else open(path, "r", encoding="utf-8")
    try:
        header = stream.readline()
        if not header:
            raise DataError(f"{path}: empty input file")
        if [c.strip() for c in header.strip().split(",")][:2] != ["t", "value"]:
            raise DataError(f"{path}: expected header 't,value', got {header.strip()!r}")
        values = []
        for lineno, line in enumerate(stream, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DataError(f"{path}: line {lineno}: expected 2 fields, got {len(parts)}")
            try:
                values.append(float(parts[1]))
            except ValueError:
                raise DataError(f"{path}: line {lineno}: bad value {parts[1]!r}") from None
        if not values:
            raise DataError(f"{path}: no data rows")
        return np.asarray(values, dtype=np.float64)
    finally:
        if stream is not sys.stdin:
            stream.close()


def write_series_csv(out, values) -> None:
    out.write("t,value\n")
    for i, v in enumerate(values, start=1):
        out.write(f"{i},{_fmt(v)}\n")


# -- simulate ---------------------------------------------------------------

def _parse_signal_spec(text: str) -> SignalSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"bad signal spec {text!r}; expected kind:length:noise_sd:seed")
    kind, length, noise_sd, seed = parts
    try:
        return SignalSpec(kind=kind, length=int(length), noise_sd=float(noise_sd),
                          seed=int(seed))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    try:
        spec = SignalSpec(kind=args.kind, length=args.length,
                          noise_sd=args.noise_sd, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out, close = _open_out(args.out)
    try:
        write_series_csv(out, generate(spec))
    finally:
        if close:
            out.close()
    return EXIT_OK


# -- filters ----------------------------------------------------------------

def cmd_filters(args) -> int:
    try:
        pair = daubechies_filter(args.number)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out, close = _open_out(args.out)
    try:
        out.write("n,h,g\n")
        for n in range(pair.width):
            out.write(f"{n},{_fmt(pair.h[n])},{_fmt(pair.g[n])}\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


# -- transform ---------------------------------------------------------------

def _coefficient_rows(t: int, labels, values) -> str:
    lines = []
    for (lev, tag), v in zip(labels, values):
        if isinstance(tag, str):
            lines.append(f"{t},{lev},,{tag},{_fmt(v)}")
        else:
            lines.append(f"{t},{lev},{tag},packet,{_fmt(v)}")
    return "\n".join(lines) + "\n"


def _transform_config(args) -> TransformConfig:
    try:
        return TransformConfig(levels=args.levels,
                               filter=daubechies_filter(args.number),
                               mode=args.mode, budget=args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_transform(args) -> int:
    config = _transform_config(args)
    state = TransformState(config)
    out, close = _open_out(args.out)
    try:
        out.write("t,level,packet,kind,value\n")
        if args.input == "-":
            header = sys.stdin.readline()
            if not header:
                raise DataError("stdin: empty input")
            if [c.strip() for c in header.strip().split(",")][:2] != ["t", "value"]:
                raise DataError(f"stdin: expected header 't,value', got {header.strip()!r}")
            out.flush()
            lineno = 1
            while True:
                line = sys.stdin.readline()
                if not line:
                    break
                lineno += 1
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise DataError(f"stdin: line {lineno}: expected 2 fields")
                try:
                    value = float(parts[1])
                except ValueError:
                    raise DataError(f"stdin: line {lineno}: bad value {parts[1]!r}") from None
                try:
                    frame = state.push(value)
                except ValueError as exc:
                    raise DataError(f"stdin: line {lineno}: {exc}") from None
                out.write(_coefficient_rows(frame.t, state.labels, frame.values))
                out.flush()
            if state.t == 0:
                raise DataError("stdin: no data rows")
        else:
            series = read_series_csv(args.input)
            try:
                rows = state.push_block(series)
            except ValueError as exc:
                raise DataError(str(exc)) from None
            for i in range(rows.shape[0]):
                out.write(_coefficient_rows(i + 1, state.labels, rows[i]))
    finally:
        if close:
            out.close()
    return EXIT_OK


# -- features ----------------------------------------------------------------

def _parse_selector(text: str | None) -> SelectorSpec | None:
    if text is None or text == "none":
        return None
    parts = text.split(":")
    try:
        if parts[0] == "ridge_topk" and len(parts) in (2, 3):
            alpha = float(parts[2]) if len(parts) == 3 else 1.0
            return SelectorSpec("ridge_topk", k=int(parts[1]), alpha=alpha)
        if parts[0] == "pca_topk" and len(parts) == 2:
            return SelectorSpec("pca_topk", k=int(parts[1]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"bad selector {text!r}; use ridge_topk:K[:ALPHA] or pca_topk:K")


def cmd_features(args) -> int:
    selector = _parse_selector(args.select)
    series = read_series_csv(args.input)
    try:
        if args.kind == "lags":
            fm = lag_matrix(series, args.max_lag, args.horizon)
        else:
            config = TransformConfig(levels=args.levels,
                                     filter=daubechies_filter(args.number),
                                     mode=args.kind, budget=args.budget)
            fm = coefficient_features(series, config, args.lags_per_vector,
                                      args.horizon)
        train_rows = fm.n_rows if args.train_rows == 0 else args.train_rows
        fm_z, norm = zscore(fm, train_rows)
        sidecar = {"normalization": norm.as_dict(), "selector": None}
        if selector is not None:
            if selector.method == "ridge_topk":
                fm_out, ranking = ridge_topk_select(fm_z, None, selector, train_rows)
                sidecar["selector"] = {"method": "ridge_topk", "k": selector.k,
                                       "alpha": selector.alpha,
                                       "ranking": [[n, c] for n, c in ranking]}
            else:
                fm_out, pca = pca_topk(fm_z, selector.k, train_rows)
                sidecar["selector"] = {"method": "pca_topk", "k": selector.k,
                                       "pca": pca.as_dict()}
        else:
            fm_out = fm_z
    except ValueError as exc:
        raise DataError(str(exc)) from None

    out, close = _open_out(args.out)
    try:
        out.write("t,target," + ",".join(fm_out.names) + "\n")
        for i in range(fm_out.n_rows):
            row = ",".join(_fmt(v) for v in fm_out.X[i])
            out.write(f"{fm_out.times[i]},{_fmt(fm_out.y[i])},{row}\n")
    finally:
        if close:
            out.close()
    if args.out != "-":
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


# -- smape -------------------------------------------------------------------

def cmd_smape(args) -> int:
    pred = read_series_csv(args.pred)
    actual = read_series_csv(args.actual)
    try:
        value = smape(pred, actual, minus_form=args.minus_form)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print(_fmt(value))
    return EXIT_OK


# -- forecast ----------------------------------------------------------------

_FORECAST_DEFAULTS = {
    "inputs": "",
    "simulate": "heavisine:2000:1.0:1",
    "feature_sets": "lags,ndwt,nwpt",
    "models": "ridge,persistence",
    "train_len": "1800",
    "valid_tail_len": "200",
    "test_len": "200",
    "horizon": "1",
    "candidates": "1,2,3,4,5,6,7,8,9,10",
    "levels": "6",
    "max_lag": "200",
    "lags_per_vector": "25",
    "select_k": "100",
    "select_alpha": "1",
    "budget": str(DEFAULT_BUDGET),
    "jobs": "1",
}


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}: line {lineno}: expected key=value")
                key, value = line.split("=", 1)
                key = key.strip()
                if key not in _FORECAST_DEFAULTS:
                    raise UsageError(f"{path}: line {lineno}: unknown key {key!r}")
                values[key] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    return values


def _resolve_forecast_config(args) -> dict:
    """defaults < config file < explicit flags."""
    resolved = dict(_FORECAST_DEFAULTS)
    if args.config:
        resolved.update(_load_config_file(args.config))
    for key in _FORECAST_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = str(flag)
    return resolved


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise UsageError(f"bad {what} list {text!r}") from None


def _experiment_from_config(cfg: dict):
    kinds = [k.strip() for k in cfg["feature_sets"].split(",") if k.strip()]
    models = tuple(m.strip() for m in cfg["models"].split(",") if m.strip())
    for m in models:
        if m not in ("ridge", "persistence"):
            raise UsageError(f"unknown model {m!r}; supported: ridge, persistence")
    try:
        split = SplitSpec(train_len=int(cfg["train_len"]),
                          valid_tail_len=int(cfg["valid_tail_len"]),
                          test_len=int(cfg["test_len"]),
                          horizon=int(cfg["horizon"]))
        selector = SelectorSpec("ridge_topk", k=int(cfg["select_k"]),
                                alpha=float(cfg["select_alpha"]))
        pipelines = []
        for kind in kinds:
            if kind == "lags":
                pipelines.append(PipelineConfig(kind=kind, max_lag=int(cfg["max_lag"]),
                                                budget=int(cfg["budget"])))
            elif kind == "ndwt":
                pipelines.append(PipelineConfig(
                    kind=kind, levels=int(cfg["levels"]),
                    lags_per_vector=int(cfg["lags_per_vector"]),
                    budget=int(cfg["budget"])))
            elif kind == "nwpt":
                pipelines.append(PipelineConfig(
                    kind=kind, levels=int(cfg["levels"]), lags_per_vector=1,
                    selector=selector, budget=int(cfg["budget"])))
            else:
                raise UsageError(f"unknown feature set {kind!r}; supported: lags, ndwt, nwpt")
        config = ExperimentConfig(pipelines=tuple(pipelines), models=models,
                                  split=split,
                                  candidates=tuple(_parse_int_list(cfg["candidates"],
                                                                   "candidates")),
                                  jobs=int(cfg["jobs"]))
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    series = []
    for path in (p for p in cfg["inputs"].split(",") if p.strip()):
        name = os.path.splitext(os.path.basename(path))[0]
        series.append((name, path, None))
    for spec_text in (s for s in cfg["simulate"].split(",") if s.strip()):
        spec = _parse_signal_spec(spec_text)
        name = f"{spec.kind}-T{spec.length}-sd{spec.noise_sd:g}-s{spec.seed}"
        series.append((name, None, spec))
    if not series:
        raise UsageError("no input series: set inputs= or simulate=")
    return config, series


def _canonical_config_text(cfg: dict) -> str:
    return "".join(f"{key}={cfg[key]}\n" for key in sorted(cfg))


def cmd_forecast(args) -> int:
    cfg = _resolve_forecast_config(args)
    config, series_specs = _experiment_from_config(cfg)

    config_text = _canonical_config_text(cfg)
    run_id = hashlib.sha256(config_text.encode()).hexdigest()[:12]
    out_root = args.out_root or os.environ.get("WAVESTREAM_OUTPUT_ROOT", "runs")
    run_dir = os.path.join(out_root, run_id)

    series = []
    for name, path, spec in series_specs:
        values = read_series_csv(path) if path else generate(spec)
        series.append((name, values))

    try:
        report = run_experiment(series, config)
    except ValueError as exc:
        raise DataError(str(exc)) from None

    os.makedirs(os.path.join(run_dir, "cells"), exist_ok=True)
    with open(os.path.join(run_dir, "config.txt"), "w", encoding="utf-8") as fh:
        fh.write(config_text)
    with open(os.path.join(run_dir, "versions.txt"), "w", encoding="utf-8") as fh:
        fh.write(_versions_text())
    with open(os.path.join(run_dir, "report.csv"), "w", encoding="utf-8") as fh:
        fh.write("model,feature_set,modal_wavelet_number,mean_smape_pct,se_pct,n\n")
        for row in report.rows:
            modal = "" if row.modal_wavelet_number is None else row.modal_wavelet_number
            fh.write(f"{row.model},{row.feature_set},{modal},"
                     f"{_fmt(row.summary.mean_smape_pct)},{_fmt(row.summary.se_pct)},"
                     f"{row.summary.n}\n")
    text = format_report_text(report)
    with open(os.path.join(run_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(text)

    for cell in report.cells:
        cell_dir = os.path.join(run_dir, "cells",
                                f"{cell.series_name}__{cell.model}__{cell.kind}")
        os.makedirs(cell_dir, exist_ok=True)
        with open(os.path.join(cell_dir, "predictions.csv"), "w", encoding="utf-8") as fh:
            fh.write("t,prediction,actual\n")
            for t, p, a in zip(cell.target_times, cell.predictions, cell.actuals):
                fh.write(f"{t},{_fmt(p)},{_fmt(a)}\n")
        info = {
            "series": cell.series_name,
            "model": cell.model,
            "feature_set": cell.kind,
            "smape_pct": cell.smape_pct,
            "wavelet_number": cell.wavelet_number,
            "alpha": cell.alpha,
            "cv_table": [[n, a, s] for n, a, s in cell.cv_table],
        }
        sel = cell.training_artifacts.get("selection")
        if sel and sel.get("ranking"):
            info["ranking"] = [[n, c] for n, c in sel["ranking"]]
        with open(os.path.join(cell_dir, "selection.json"), "w", encoding="utf-8") as fh:
            json.dump(info, fh, indent=1, sort_keys=True)
            fh.write("\n")

    sys.stdout.write(text)
    print(f"run directory: {run_dir}")
    return EXIT_OK


def _versions_text() -> str:
    import numpy
    import scipy
    lines = [f"wavestream={__version__}",
             f"python={sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
             f"numpy={numpy.__version__}", f"scipy={scipy.__version__}",
             f"numba_enabled={USING_NUMBA}"]
    if USING_NUMBA:
        import numba
        lines.append(f"numba={numba.__version__}")
    return "\n".join(lines) + "\n"


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavestream",
        description="Streaming causal wavelet features and forecasting harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated series as t,value CSV")
    p.add_argument("--kind", required=True, choices=SIGNAL_KINDS)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("filters", help="print filter taps as n,h,g CSV")
    p.add_argument("--number", type=int, required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_filters)

    p = sub.add_parser("transform", help="stream NDWT/NWPT coefficients to CSV")
    p.add_argument("--input", required=True, help="t,value CSV path, or - for stdin")
    p.add_argument("--mode", choices=(NDWT, NWPT), default=NDWT)
    p.add_argument("--number", type=int, default=1)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("features", help="build a feature matrix CSV + JSON sidecar")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("lags", "ndwt", "nwpt"), required=True)
    p.add_argument("--number", type=int, default=1)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--max-lag", type=int, default=200)
    p.add_argument("--lags-per-vector", type=int, default=1)
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--train-rows", type=int, default=0,
                   help="rows used to fit statistics (0 = all rows)")
    p.add_argument("--select", default=None,
                   help="ridge_topk:K[:ALPHA] or pca_topk:K")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("forecast", help="run the train/validate/test experiment")
    p.add_argument("--config", default=None, help="key=value file; flags override")
    p.add_argument("--inputs", default=None, help="comma-separated t,value CSV paths")
    p.add_argument("--simulate", default=None,
                   help="comma-separated kind:length:noise_sd:seed specs")
    p.add_argument("--feature-sets", dest="feature_sets", default=None)
    p.add_argument("--models", default=None)
    p.add_argument("--train-len", dest="train_len", type=int, default=None)
    p.add_argument("--valid-tail-len", dest="valid_tail_len", type=int, default=None)
    p.add_argument("--test-len", dest="test_len", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--candidates", default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--max-lag", dest="max_lag", type=int, default=None)
    p.add_argument("--lags-per-vector", dest="lags_per_vector", type=int, default=None)
    p.add_argument("--select-k", dest="select_k", type=int, default=None)
    p.add_argument("--select-alpha", dest="select_alpha", type=float, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out-root", default=None,
                   help="default $WAVESTREAM_OUTPUT_ROOT or ./runs")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("smape", help="SMAPE between two t,value CSVs")
    p.add_argument("--pred", required=True)
    p.add_argument("--actual", required=True)
    p.add_argument("--minus-form", action="store_true")
    p.set_defaults(func=cmd_smape)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
