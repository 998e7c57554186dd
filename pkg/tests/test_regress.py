"""Fold plans, standardization, selection, pruning, linear fits, CV."""

import numpy as np
import pytest

from kirjand.errors import ValidationError
from kirjand.regress import (
    Dataset,
    OLSConfig,
    RidgeConfig,
    clamp,
    cross_validate,
    f_scores,
    f_select,
    fit_ols,
    fit_ridge,
    in_range_rate,
    make_fold_plan,
    prune_multicollinear,
    round_half,
    standardize_apply,
    standardize_fit,
)


def test_dataset_validation():
    X = np.zeros((4, 2))
    y = np.zeros(4)
    Dataset(X, y, ("a", "b"))
    with pytest.raises(ValidationError, match="2-dimensional"):
        Dataset(np.zeros(4), y, ("a",))
    with pytest.raises(ValidationError, match="y has shape"):
        Dataset(X, np.zeros(3), ("a", "b"))
    with pytest.raises(ValidationError, match="feature names"):
        Dataset(X, y, ("a",))
    with pytest.raises(ValidationError, match="essay ids"):
        Dataset(X, y, ("a", "b"), essay_ids=("e1",))


def test_fold_plan_partition_and_balance():
    plan = make_fold_plan(23, k=5, seed=7)
    sizes = [len(plan.test_indices(f)) for f in range(5)]
    assert sum(sizes) == 23
    assert max(sizes) - min(sizes) <= 1
    seen = np.concatenate([plan.test_indices(f) for f in range(5)])
    assert sorted(seen.tolist()) == list(range(23))
    for f in range(5):
        train = set(plan.train_indices(f).tolist())
        test = set(plan.test_indices(f).tolist())
        assert not train & test
        assert train | test == set(range(23))


def test_fold_plan_determinism():
    assert make_fold_plan(50, 10, seed=3) == make_fold_plan(50, 10, seed=3)
    assert make_fold_plan(50, 10, seed=3) != make_fold_plan(50, 10, seed=4)


def test_fold_plan_guards():
    with pytest.raises(ValidationError, match="at least 2 folds"):
        make_fold_plan(10, k=1)
    with pytest.raises(ValidationError, match="cannot split"):
        make_fold_plan(3, k=4)


def test_standardize():
    X = np.array([[0.0, 5.0], [2.0, 5.0]])
    params = standardize_fit(X)
    Z = standardize_apply(X, params)
    # population SD of {0,2} is 1, so values map to -1/+1
    assert np.array_equal(Z[:, 0], [-1.0, 1.0])
    # constant columns become exactly 0 instead of dividing by 0
    assert np.array_equal(Z[:, 1], [0.0, 0.0])
    # params learned on train apply unchanged to new data
    Z_new = standardize_apply(np.array([[4.0, 7.0]]), params)
    assert np.array_equal(Z_new, [[3.0, 0.0]])


def test_f_scores_formula():
    X = np.array([[1.0, 1.0, 7.0], [2.0, 2.0, 7.0], [3.0, 2.0, 7.0], [4.0, 3.0, 7.0]])
    y = np.array([1.0, 2.0, 2.0, 3.0])
    scores = f_scores(X, y)
    # column 0: r^2 = 0.9 against y, so F = 0.9/0.1 * (4-2) = 18
    assert scores[0] == pytest.approx(18.0)
    # column 1 is y itself: perfect correlation scores infinity
    assert scores[1] == np.inf
    # constant column scores 0
    assert scores[2] == 0.0
    assert np.all(f_scores(X, np.full(4, 2.0)) == 0.0)
    with pytest.raises(ValidationError, match="at least 3 samples"):
        f_scores(X[:2], y[:2])


def test_f_select_order_and_ties():
    rng = np.random.default_rng(0)
    x = rng.normal(size=20)
    noise = rng.normal(size=20)
    X = np.column_stack([noise, x, x])  # columns 1 and 2 tie exactly
    y = 2 * x + 0.01 * rng.normal(size=20)
    assert f_select(X, y, 1) == [1]  # tie broken toward the lower index
    assert f_select(X, y, 2) == [1, 2]
    assert f_select(X, y, 3) == [1, 2, 0]
    with pytest.raises(ValidationError, match="k must be in"):
        f_select(X, y, 0)
    with pytest.raises(ValidationError, match="k must be in"):
        f_select(X, y, 4)


def test_fit_ols_exact_line():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = 2.0 * X[:, 0] + 1.0
    fit = fit_ols(X, y)
    assert fit.intercept == pytest.approx(1.0)
    assert fit.coefs[0] == pytest.approx(2.0)
    assert fit.predict(np.array([[10.0]]))[0] == pytest.approx(21.0)


def test_fit_ols_rank_deficient_advises_ridge():
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(ValidationError, match="ridge"):
        fit_ols(X, np.array([1.0, 2.0, 3.0]))


def test_fit_ridge():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(50, 3))
    y = X @ np.array([1.0, -2.0, 0.5]) + 0.3
    ols = fit_ols(X, y)
    ridge = fit_ridge(X, y, RidgeConfig(lam=1e-10))
    assert np.allclose(ridge.coefs, ols.coefs, atol=1e-6)
    assert ridge.intercept == pytest.approx(ols.intercept, abs=1e-6)
    # heavy penalty shrinks toward the mean-only model
    heavy = fit_ridge(X, y, RidgeConfig(lam=1e9))
    assert np.all(np.abs(heavy.coefs) < 1e-6)
    assert heavy.intercept == pytest.approx(float(y.mean()), abs=1e-6)
    with pytest.raises(ValidationError, match="non-negative"):
        fit_ridge(X, y, RidgeConfig(lam=-1.0))


def test_round_half():
    x = np.array([1.24, 1.25, 1.26, 1.75, 0.74, 0.0, 2.99])
    assert np.array_equal(round_half(x), [1.0, 1.5, 1.5, 2.0, 0.5, 0.0, 3.0])
    assert float(round_half(0.25)) == 0.5  # exact halves round up


def test_clamp():
    assert np.array_equal(clamp(np.array([-1.0, 1.5, 4.0])), [0.0, 1.5, 3.0])


def test_in_range_rate():
    rounded = np.array([1.5, 3.0, 0.0, 2.0])
    g1 = np.array([1.0, 2.0, 1.0, 2.0])
    g2 = np.array([2.0, 3.0, 2.0, 2.0])
    assert in_range_rate(rounded, g1, g2) == pytest.approx(0.75)
    assert in_range_rate(np.array([]), np.array([]), np.array([])) == 0.0


def _plan_and_data(n=40, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    X = np.column_stack([x, x.copy(), rng.normal(size=n)])
    y = x + rng.normal(scale=0.1, size=n)
    ds = Dataset(X, y, ("dup_a", "dup_b", "noise"))
    return ds, make_fold_plan(n, k=4, seed=seed)


def test_prune_multicollinear_duplicates():
    ds, plan = _plan_and_data()
    assert prune_multicollinear(ds, plan) == [0, 2]
    # anticorrelated duplicates are linked through |corr| too
    X2 = ds.X.copy()
    X2[:, 1] = -X2[:, 1]
    ds2 = Dataset(X2, ds.y, ds.feature_names)
    assert prune_multicollinear(ds2, plan) == [0, 2]
    # a threshold above 1 links nothing
    assert prune_multicollinear(ds, plan, threshold=1.01) == [0, 1, 2]


def test_cross_validate_recovers_line():
    rng = np.random.default_rng(5)
    n = 60
    x = rng.uniform(0, 1, size=n)
    X = np.column_stack([x, rng.normal(size=n)])
    y = 2.0 * x + 0.5  # inside the clamp range, so OLS recovers it
    ds = Dataset(X, y, ("signal", "noise"))
    plan = make_fold_plan(n, k=5, seed=1)
    result = cross_validate(ds, plan, OLSConfig())
    assert result.mean_mae < 1e-8
    assert np.allclose(result.predictions, y)
    assert result.kept_indices == [0, 1]
    assert set(result.feature_correlations) == {"signal", "noise"}
    mean_corr, sd_corr = result.feature_correlations["signal"]
    assert mean_corr > 0.9
    assert sd_corr < 0.1


def test_cross_validate_uninformative_features():
    # pure-noise features: a heavily penalised ridge predicts near the
    # train mean, so MAE approaches E|U[0,3] - 1.5| = 0.75
    rng = np.random.default_rng(9)
    n = 400
    X = rng.normal(size=(n, 4))
    y = rng.uniform(0, 3, size=n)
    ds = Dataset(X, y, tuple("abcd"))
    plan = make_fold_plan(n, k=10, seed=2)
    result = cross_validate(ds, plan, RidgeConfig(lam=1e6))
    assert result.mean_mae == pytest.approx(0.75, abs=0.1)


def test_cross_validate_selection_and_guards():
    ds, plan = _plan_and_data()
    result = cross_validate(ds, plan, RidgeConfig(lam=0.1), n_features=1)
    # the duplicate column is pruned before selection; the informative
    # survivor wins the univariate round in every fold
    assert all(sel == [0] for sel in result.selected_per_fold)
    with pytest.raises(ValidationError, match="exceeds surviving pool"):
        cross_validate(ds, plan, RidgeConfig(), n_features=3)
    other_plan = make_fold_plan(10, k=2, seed=0)
    with pytest.raises(ValidationError, match="fold plan covers"):
        cross_validate(ds, other_plan, RidgeConfig())


def test_cross_validate_deterministic():
    ds, plan = _plan_and_data(seed=3)
    a = cross_validate(ds, plan, RidgeConfig(lam=0.5))
    b = cross_validate(ds, plan, RidgeConfig(lam=0.5))
    assert np.array_equal(a.predictions, b.predictions)
    assert a.fold_maes == b.fold_maes
