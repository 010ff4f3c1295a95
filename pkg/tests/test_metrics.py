import numpy as np
import pytest

from wavestream.metrics import smape, summarize_scores


def test_exact_match_scores_zero():
    assert smape([1.0, 2.0, -3.0], [1.0, 2.0, -3.0]) == 0.0


def test_worked_example():
    # terms: 0 and |1-3| / ((1+3)/2) = 1 -> mean 0.5 -> 50%
    assert smape([1.0, 1.0], [1.0, 3.0]) == pytest.approx(50.0, abs=1e-12)


def test_zero_denominator_rule():
    assert smape([0.0], [0.0]) == 0.0
    # one zero-denominator term among others contributes nothing
    assert smape([0.0, 1.0], [0.0, 1.0]) == 0.0


def test_symmetry_exact():
    rng = np.random.default_rng(0)
    p = rng.standard_normal(50)
    a = rng.standard_normal(50)
    assert smape(p, a) == smape(a, p)


def test_scale_invariance():
    rng = np.random.default_rng(1)
    p = rng.standard_normal(50)
    a = rng.standard_normal(50)
    base = smape(p, a)
    for scale in (1e-6, 3.0, 1e6):
        assert abs(smape(scale * p, scale * a) - base) < 1e-12 * max(base, 1.0)


def test_bounded_by_200():
    rng = np.random.default_rng(2)
    for _ in range(20):
        p = rng.standard_normal(30)
        a = rng.standard_normal(30)
        assert 0.0 <= smape(p, a) <= 200.0
    assert smape([1.0], [-1.0]) == pytest.approx(200.0)


def test_input_validation():
    with pytest.raises(ValueError):
        smape([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        smape([np.nan], [1.0])
    with pytest.raises(ValueError):
        smape([], [])


def test_minus_form_compatibility_flag():
    # denominator (|p| - |a|)/2: term |2-1| / ((2-1)/2) = 2 -> 200%
    assert smape([2.0], [1.0], minus_form=True) == pytest.approx(200.0)
    # equal magnitudes hit the zero-denominator rule
    assert smape([1.0], [-1.0], minus_form=True) == 0.0


def test_summary_matches_hand_computation():
    scores = [10.0, 14.0, 12.0]
    s = summarize_scores(scores)
    assert s.mean_smape_pct == pytest.approx(12.0)
    assert s.se_pct == pytest.approx(np.std(scores, ddof=1) / np.sqrt(3))
    assert s.n == 3
    assert summarize_scores([5.0]).se_pct == 0.0
