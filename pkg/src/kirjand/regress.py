"""Feature-based score prediction: selection, linear models, and
cross-validation.

The per-fold pipeline is: standardize on the training split, rank
features by univariate F statistic, fit, predict the held-out split,
clamp into the score range.  Multicollinearity pruning is the one step
computed once per fold plan (from the ten training splits jointly)
rather than per fold, so every fold works from the same feature pool.
All stochastic choices flow from explicit seeds and refits are bitwise
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .trees import ForestConfig, TreeConfig, fit_forest, fit_tree

SCORE_RANGE = (0.0, 3.0)
PRUNE_THRESHOLD = 0.8


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    essay_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.X.ndim != 2:
            raise ValidationError("X must be 2-dimensional")
        n, p = self.X.shape
        if self.y.shape != (n,):
            raise ValidationError(f"y has shape {self.y.shape}, expected ({n},)")
        if len(self.feature_names) != p:
            raise ValidationError(
                f"{len(self.feature_names)} feature names for {p} columns"
            )
        if self.essay_ids and len(self.essay_ids) != n:
            raise ValidationError(f"{len(self.essay_ids)} essay ids for {n} rows")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of samples to k folds of near-equal size.

    A seeded permutation is dealt round-robin, so fold sizes never
    differ by more than one and the same seed reproduces the plan.
    """

    n: int
    k: int
    seed: int
    assignments: tuple[int, ...]

    def test_indices(self, fold: int) -> np.ndarray:
        return np.array([i for i, f in enumerate(self.assignments) if f == fold], dtype=int)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.array([i for i, f in enumerate(self.assignments) if f != fold], dtype=int)


def make_fold_plan(n: int, k: int = 10, seed: int = 0) -> FoldPlan:
    if k < 2:
        raise ValidationError(f"need at least 2 folds, got {k}")
    if n < k:
        raise ValidationError(f"cannot split {n} samples into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    assignments = [0] * n
    for pos, sample in enumerate(perm):
        assignments[sample] = pos % k
    return FoldPlan(n=n, k=k, seed=seed, assignments=tuple(assignments))


# --- standardization ---------------------------------------------------


@dataclass(frozen=True)
class StandardizeParams:
    means: np.ndarray
    sds: np.ndarray  # population standard deviations


def standardize_fit(X: np.ndarray) -> StandardizeParams:
    X = np.asarray(X, dtype=float)
    return StandardizeParams(means=X.mean(axis=0), sds=X.std(axis=0, ddof=0))


def standardize_apply(X: np.ndarray, params: StandardizeParams) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    safe = np.where(params.sds == 0.0, 1.0, params.sds)
    out = (X - params.means) / safe
    out[:, params.sds == 0.0] = 0.0
    return out


# --- univariate selection ----------------------------------------------


def f_scores(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Univariate F statistic per column: F = r^2 / (1 - r^2) * (n - 2).

    Constant columns (or constant y) score 0; a perfect correlation
    scores infinity so it always outranks finite scores.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 3:
        raise ValidationError(f"need at least 3 samples for F scores, got {n}")
    yc = y - y.mean()
    y_ss = float(yc @ yc)
    scores = np.zeros(X.shape[1], dtype=float)
    if y_ss == 0.0:
        return scores
    for j in range(X.shape[1]):
        xc = X[:, j] - X[:, j].mean()
        x_ss = float(xc @ xc)
        if x_ss == 0.0:
            continue
        r = float(xc @ yc) / math.sqrt(x_ss * y_ss)
        r2 = r * r
        if r2 >= 1.0:
            scores[j] = math.inf
        else:
            scores[j] = r2 / (1.0 - r2) * (n - 2)
    return scores


def f_select(X: np.ndarray, y: np.ndarray, k: int) -> list[int]:
    """Indices of the top-k features by F score, best first.

    Ties go to the lower column index so selection is deterministic.
    """
    p = np.asarray(X).shape[1]
    if not 1 <= k <= p:
        raise ValidationError(f"k must be in 1..{p}, got {k}")
    scores = f_scores(X, y)
    ranked = sorted(range(p), key=lambda j: (-scores[j], j))
    return ranked[:k]


# --- multicollinearity pruning -----------------------------------------


def _fold_corr(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    den = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if den == 0.0:
        return 0.0
    return float(xc @ yc) / den


def prune_multicollinear(
    dataset: Dataset, plan: FoldPlan, threshold: float = PRUNE_THRESHOLD
) -> list[int]:
    """Drop near-duplicate features before any per-fold work.

    Pairwise correlations are averaged (signed) over the plan's training
    splits; pairs above the threshold in absolute value are linked, and
    of each linked component only the feature with the strongest mean
    correlation to the target survives (ties to the lower index).
    Returns surviving column indices in ascending order.
    """
    p = dataset.p
    pair_sum = np.zeros((p, p), dtype=float)
    target_sum = np.zeros(p, dtype=float)
    for fold in range(plan.k):
        idx = plan.train_indices(fold)
        Xt = dataset.X[idx]
        yt = dataset.y[idx]
        sds = Xt.std(axis=0, ddof=0)
        safe = np.where(sds == 0.0, 1.0, sds)
        Z = (Xt - Xt.mean(axis=0)) / safe
        Z[:, sds == 0.0] = 0.0
        C = (Z.T @ Z) / len(idx)
        # A constant column correlates with nothing in this fold.
        C[sds == 0.0, :] = 0.0
        C[:, sds == 0.0] = 0.0
        pair_sum += C
        for j in range(p):
            target_sum[j] += _fold_corr(Xt[:, j], yt)
    mean_pair = pair_sum / plan.k
    mean_target = target_sum / plan.k

    parent = list(range(p))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(p):
        for b in range(a + 1, p):
            if abs(mean_pair[a, b]) > threshold:
                parent[find(a)] = find(b)

    components: dict[int, list[int]] = {}
    for j in range(p):
        components.setdefault(find(j), []).append(j)
    kept: list[int] = []
    for members in components.values():
        best = min(members, key=lambda j: (-abs(mean_target[j]), j))
        kept.append(best)
    return sorted(kept)


# --- regressors --------------------------------------------------------


@dataclass(frozen=True)
class OLSConfig:
    pass


@dataclass(frozen=True)
class RidgeConfig:
    lam: float = 1.0


@dataclass
class FittedLinear:
    intercept: float
    coefs: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.coefs + self.intercept


def fit_ols(X: np.ndarray, y: np.ndarray) -> FittedLinear:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([np.ones(len(y)), X])
    solution, _residuals, rank, _sv = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise ValidationError(
            f"design matrix is rank deficient (rank {rank} of {design.shape[1]}); "
            "use the ridge regressor instead"
        )
    return FittedLinear(intercept=float(solution[0]), coefs=solution[1:])


def fit_ridge(X: np.ndarray, y: np.ndarray, config: RidgeConfig = RidgeConfig()) -> FittedLinear:
    """Penalised least squares; only the slopes are penalised, the
    intercept absorbs the column means."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if config.lam < 0:
        raise ValidationError(f"ridge penalty must be non-negative, got {config.lam}")
    y_mean = float(y.mean())
    x_means = X.mean(axis=0)
    Xc = X - x_means
    p = X.shape[1]
    coefs = np.linalg.solve(Xc.T @ Xc + config.lam * np.eye(p), Xc.T @ (y - y_mean))
    return FittedLinear(intercept=y_mean - float(x_means @ coefs), coefs=coefs)


RegressorConfig = OLSConfig | RidgeConfig | TreeConfig | ForestConfig


def fit_regressor(
    config: RegressorConfig,
    X: np.ndarray,
    y: np.ndarray,
    seed_seq: np.random.SeedSequence | None = None,
):
    if isinstance(config, OLSConfig):
        return fit_ols(X, y)
    if isinstance(config, RidgeConfig):
        return fit_ridge(X, y, config)
    if isinstance(config, TreeConfig):
        return fit_tree(X, y, config)
    if isinstance(config, ForestConfig):
        if seed_seq is None:
            seed_seq = np.random.SeedSequence(0)
        return fit_forest(X, y, config, seed_seq)
    raise ValidationError(f"unknown regressor config {config!r}")


# --- rounding and range checks -----------------------------------------


def round_half(x):
    """Round to the nearest half point, halves rounding up."""
    return np.floor(2.0 * np.asarray(x, dtype=float) + 0.5) / 2.0


def clamp(x, lo: float = SCORE_RANGE[0], hi: float = SCORE_RANGE[1]):
    return np.clip(np.asarray(x, dtype=float), lo, hi)


def in_range_rate(rounded: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> float:
    """Share of predictions landing inside the two raters' interval."""
    rounded = np.asarray(rounded, dtype=float)
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    if not len(rounded):
        return 0.0
    lo = np.minimum(g1, g2)
    hi = np.maximum(g1, g2)
    return float(np.mean((rounded >= lo) & (rounded <= hi)))


# --- cross-validation --------------------------------------------------


@dataclass
class PipelineResult:
    plan: FoldPlan
    kept_indices: list[int]
    selected_per_fold: list[list[int]]
    predictions: np.ndarray
    fold_maes: list[float]
    mean_mae: float
    sd_mae: float
    #: feature name -> (mean, sd) of its correlation with the target
    #: across the plan's training splits, for the surviving features.
    feature_correlations: dict[str, tuple[float, float]] = field(default_factory=dict)


def cross_validate(
    dataset: Dataset,
    plan: FoldPlan,
    config: RegressorConfig,
    n_features: int | None = None,
    prune_threshold: float = PRUNE_THRESHOLD,
) -> PipelineResult:
    """Run the full per-fold pipeline and collect out-of-fold results.

    `n_features` caps the univariate selection inside each fold; None
    uses every surviving feature.  Forest fits get a per-fold seed
    stream derived from the plan seed, so a rerun with the same plan is
    identical down to the bits.
    """
    if plan.n != dataset.n:
        raise ValidationError(f"fold plan covers {plan.n} samples, dataset has {dataset.n}")
    kept = prune_multicollinear(dataset, plan, prune_threshold)
    if n_features is not None and n_features > len(kept):
        raise ValidationError(
            f"n_features={n_features} exceeds surviving pool of {len(kept)}"
        )

    corr_per_fold = np.zeros((plan.k, len(kept)), dtype=float)
    predictions = np.zeros(dataset.n, dtype=float)
    fold_maes: list[float] = []
    selected_per_fold: list[list[int]] = []
    for fold in range(plan.k):
        tr = plan.train_indices(fold)
        te = plan.test_indices(fold)
        X_tr = dataset.X[np.ix_(tr, kept)]
        X_te = dataset.X[np.ix_(te, kept)]
        y_tr = dataset.y[tr]
        y_te = dataset.y[te]

        for c, j in enumerate(kept):
            corr_per_fold[fold, c] = _fold_corr(dataset.X[tr, j], y_tr)

        params = standardize_fit(X_tr)
        Z_tr = standardize_apply(X_tr, params)
        Z_te = standardize_apply(X_te, params)

        if n_features is not None and n_features < len(kept):
            cols = f_select(Z_tr, y_tr, n_features)
        else:
            cols = list(range(len(kept)))
        selected_per_fold.append([kept[c] for c in cols])

        seed_seq = np.random.SeedSequence([plan.seed, fold])
        model = fit_regressor(config, Z_tr[:, cols], y_tr, seed_seq)
        preds = clamp(model.predict(Z_te[:, cols]))
        predictions[te] = preds
        fold_maes.append(float(np.mean(np.abs(preds - y_te))))

    maes = np.array(fold_maes)
    correlations = {
        dataset.feature_names[j]: (
            float(corr_per_fold[:, c].mean()),
            float(corr_per_fold[:, c].std(ddof=0)),
        )
        for c, j in enumerate(kept)
    }
    return PipelineResult(
        plan=plan,
        kept_indices=kept,
        selected_per_fold=selected_per_fold,
        predictions=predictions,
        fold_maes=fold_maes,
        mean_mae=float(maes.mean()),
        sd_mae=float(maes.std(ddof=0)),
        feature_correlations=correlations,
    )
