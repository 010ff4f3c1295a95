import numpy as np
import pytest

from oracles import ridge_oracle
from wavestream.features import SelectorSpec, lag_matrix, zscore
from wavestream.forecast import (ALPHA_GRID, ExperimentConfig, PipelineConfig,
                                 SplitSpec, build_features, cv_select_wavelet,
                                 format_report_text, persistence_forecast,
                                 ridge_fit, run_experiment)
from wavestream.signals import SignalSpec, generate


def test_alpha_grid_matches_doubling_ladder():
    assert ALPHA_GRID == (1 / 32, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1, 2, 4, 8, 16, 32)


# -- ridge ---------------------------------------------------------------------

def test_ridge_ols_limit():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(100)
    X = (x - x.mean())[:, None] / x.std(ddof=1)
    y = 2.0 * X[:, 0]
    model = ridge_fit(X, y, 1e-10)
    assert model.coefficients[0] == pytest.approx(2.0, abs=1e-6)


def test_ridge_shrinkage_limit():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((50, 3))
    y = rng.standard_normal(50) + 5.0
    model = ridge_fit(X, y, 1e12)
    assert np.all(np.abs(model.coefficients) < 1e-6)
    assert model.predict(X) == pytest.approx(np.full(50, y.mean()), abs=1e-4)


def test_ridge_matches_brute_force_oracle():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((5, 3))
    y = rng.standard_normal(5)
    model = ridge_fit(X, y, 0.7)
    coef_ref, intercept_ref = ridge_oracle(X, y, 0.7)
    np.testing.assert_allclose(model.coefficients, coef_ref, atol=1e-10)
    assert model.intercept == pytest.approx(intercept_ref, abs=1e-12)


def test_ridge_normal_equation_residual():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((200, 40))
    y = rng.standard_normal(200)
    model = ridge_fit(X, y, 0.25)
    A = X.T @ X + 0.25 * np.eye(40)
    b = X.T @ (y - y.mean())
    assert np.linalg.norm(A @ model.coefficients - b) <= 1e-8 * np.linalg.norm(b)


def test_ridge_affine_equivariance_in_y():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((60, 4))
    y = rng.standard_normal(60)
    a, b = 3.5, -2.0
    base = ridge_fit(X, y, 1.0).predict(X)
    scaled = ridge_fit(X, a * y + b, 1.0).predict(X)
    np.testing.assert_allclose(scaled, a * base + b, atol=1e-10)


def test_ridge_validation():
    with pytest.raises(ValueError):
        ridge_fit(np.ones((3, 1)), np.ones(3), 0.0)
    with pytest.raises(ValueError):
        ridge_fit(np.array([[np.inf]]), np.ones(1), 1.0)


# -- persistence -----------------------------------------------------------------

def test_persistence_examples():
    np.testing.assert_array_equal(persistence_forecast([1.0, 5.0, 7.0], 3),
                                  [7.0, 7.0, 7.0])
    assert persistence_forecast([3.0], 1)[0] == 3.0
    with pytest.raises(ValueError):
        persistence_forecast([], 1)
    # constant series continuing the constant scores 0
    from wavestream.metrics import smape
    assert smape(persistence_forecast([2.0, 2.0], 4), np.full(4, 2.0)) == 0.0


# -- wavelet-number CV -------------------------------------------------------------

SPLIT = SplitSpec(train_len=300, valid_tail_len=60, test_len=100)


def small_pipeline(kind="ndwt"):
    return PipelineConfig(kind=kind, levels=2, lags_per_vector=3, max_lag=8,
                          alpha_grid=(0.5, 1.0))


@pytest.fixture(scope="module")
def series():
    return generate(SignalSpec("doppler", 400, noise_sd=0.3, seed=5))


def test_cv_singleton_candidate(series):
    sel = cv_select_wavelet(series, [4], small_pipeline(), SPLIT)
    assert sel.number == 4
    assert len(sel.table) == 1


def test_cv_argmin_contract(series):
    sel = cv_select_wavelet(series, [1, 2, 3], small_pipeline(), SPLIT)
    best = min(row[2] for row in sel.table)
    assert sel.smape_pct == best
    assert (sel.number, sel.alpha, sel.smape_pct) in sel.table


def test_cv_tie_break_prefers_smaller_number(series):
    fixed = lag_matrix(series, 5, 1)

    def stub_builder(s, pipeline, number, horizon):
        return fixed  # identical features for every candidate

    sel = cv_select_wavelet(series, [7, 3], small_pipeline(), SPLIT,
                            feature_builder=stub_builder)
    assert sel.number == 3
    scores = [row[2] for row in sel.table]
    assert scores[0] == scores[1]


def test_cv_empty_candidates(series):
    with pytest.raises(ValueError):
        cv_select_wavelet(series, [], small_pipeline(), SPLIT)


def test_cv_table_invariant_under_series_scaling(series):
    pipeline = small_pipeline()
    base = cv_select_wavelet(series, [1, 2], pipeline, SPLIT)
    scaled = cv_select_wavelet(3.7 * series, [1, 2], pipeline, SPLIT)
    assert scaled.number == base.number
    for (n1, a1, s1), (n2, a2, s2) in zip(base.table, scaled.table):
        assert (n1, a1) == (n2, a2)
        assert s1 == pytest.approx(s2, abs=1e-8)


# -- experiment runner --------------------------------------------------------------

def experiment_config(jobs=1, models=("ridge", "persistence")):
    return ExperimentConfig(
        pipelines=(PipelineConfig(kind="lags", max_lag=8, alpha_grid=(0.5, 1.0)),
                   PipelineConfig(kind="ndwt", levels=2, lags_per_vector=3,
                                  alpha_grid=(0.5, 1.0)),
                   PipelineConfig(kind="nwpt", levels=2, lags_per_vector=1,
                                  selector=SelectorSpec("ridge_topk", k=4),
                                  alpha_grid=(0.5, 1.0))),
        models=models, split=SPLIT, candidates=(1, 2), jobs=jobs)


@pytest.fixture(scope="module")
def two_series():
    return [("a", generate(SignalSpec("heavisine", 400, 0.5, 1))),
            ("b", generate(SignalSpec("doppler", 400, 0.5, 2)))]


def test_report_cardinality_and_summary(two_series):
    report = run_experiment(two_series, experiment_config())
    assert len(report.rows) == 2 * 3  # models x feature sets
    assert len(report.cells) == 2 * 3 * 2
    for row in report.rows:
        group = [c for c in report.cells
                 if c.model == row.model and c.kind == row.feature_set]
        scores = np.array([c.smape_pct for c in group])
        assert row.summary.mean_smape_pct == pytest.approx(scores.mean())
        assert row.summary.se_pct == pytest.approx(scores.std(ddof=1) / np.sqrt(2))
        assert row.summary.n == 2
    # modal wavelet number only for ridge on transform features
    by_key = {(r.model, r.feature_set): r for r in report.rows}
    assert by_key[("ridge", "lags")].modal_wavelet_number is None
    assert by_key[("persistence", "ndwt")].modal_wavelet_number is None
    assert by_key[("ridge", "ndwt")].modal_wavelet_number in (1, 2)


def test_constant_series_scores_zero():
    series = [("const", np.full(400, 3.0))]
    report = run_experiment(series, experiment_config())
    for cell in report.cells:
        assert cell.smape_pct == pytest.approx(0.0, abs=1e-8)


def test_jobs_do_not_change_results(two_series):
    r1 = run_experiment(two_series, experiment_config(jobs=1))
    r3 = run_experiment(two_series, experiment_config(jobs=3))
    assert r1.rows == r3.rows
    for c1, c3 in zip(r1.cells, r3.cells):
        assert np.array_equal(c1.predictions, c3.predictions)
        assert c1.smape_pct == c3.smape_pct


def test_no_test_leakage_bit_exact(two_series):
    name, y = two_series[0]
    y2 = y.copy()
    y2[SPLIT.train_len:] = 0.123  # rewrite the test segment
    cfg = experiment_config(models=("ridge",))
    r_a = run_experiment([(name, y)], cfg)
    r_b = run_experiment([(name, y2)], cfg)
    for ca, cb in zip(r_a.cells, r_b.cells):
        assert ca.wavelet_number == cb.wavelet_number
        assert ca.alpha == cb.alpha
        assert ca.cv_table == cb.cv_table
        aa, ab = ca.training_artifacts, cb.training_artifacts
        assert np.array_equal(aa["coefficients"], ab["coefficients"])
        assert aa["intercept"] == ab["intercept"]
        assert np.array_equal(aa["normalization"].means, ab["normalization"].means)
        assert np.array_equal(aa["normalization"].sds, ab["normalization"].sds)
        sel_a, sel_b = aa["selection"], ab["selection"]
        if sel_a is not None:
            assert sel_a["ranking"] == sel_b["ranking"]


def test_multi_horizon_direct_strategy(two_series):
    cfg = ExperimentConfig(
        pipelines=(PipelineConfig(kind="lags", max_lag=8, alpha_grid=(1.0,)),),
        models=("ridge", "persistence"),
        split=SplitSpec(train_len=300, valid_tail_len=60, test_len=20, horizon=20),
        candidates=(1,))
    report = run_experiment(two_series, cfg)
    for cell in report.cells:
        assert cell.predictions.shape == (20,)
        np.testing.assert_array_equal(cell.target_times, np.arange(301, 321))
        if cell.model == "persistence":
            assert np.all(cell.predictions == two_series[0 if cell.series_name == "a" else 1][1][299])


def test_config_validation_before_compute(two_series):
    with pytest.raises(ValueError, match="unknown model"):
        ExperimentConfig(pipelines=(PipelineConfig(kind="lags"),), models=("arima",))
    cfg = experiment_config()
    with pytest.raises(ValueError, match="split needs"):
        run_experiment([("short", np.arange(100.0))], cfg)


def test_report_text_layout(two_series):
    report = run_experiment(two_series, experiment_config())
    text = format_report_text(report)
    lines = text.strip().split("\n")
    assert lines[0].split("  ")[0].strip() == "Model"
    assert "Feature Set" in lines[0]
    assert "Modal Wavelet Number" in lines[0]
    assert "Mean SMAPE % (SE)" in lines[0]
    assert len(lines) == 2 + len(report.rows)
