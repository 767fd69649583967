"""Categorical naive Bayes with k-fold cross-validation.

Selected indicators that come from the same source attribute are merged
back into one categorical variable before training, so a one-hot dataset
is classified like the original table restricted to what was selected.
"""

import numpy as np

from ..core import members, to_mask
from .entropy import _compress


def fold_ids(N, folds, seed):
    """Seeded shuffle, then round-robin assignment to ``folds`` folds."""
    perm = np.random.default_rng(seed).permutation(N)
    ids = np.empty(N, dtype=np.int64)
    ids[perm] = np.arange(N) % folds
    return ids


def design(data, A, group_aware=True):
    """Categorical variables (codes, arities) for the selected features ``A``."""
    A = members(to_mask(A))
    if not group_aware:
        return [data.columns[j] for j in A], [int(data.arities[j]) for j in A]
    by_group = {}
    for j in A:
        by_group.setdefault(int(data.groups[j]), []).append(j)
    cols, arities = [], []
    for g in sorted(by_group):
        key, d = np.zeros(data.N, dtype=np.int64), 1
        for j in by_group[g]:
            key, d = _compress(key, d, data.columns[j], int(data.arities[j]))
        cols.append(key)
        arities.append(d)
    return cols, arities


class CategoricalNB:
    """Laplace-smoothed class-conditionals (``alpha``) and an unsmoothed prior."""

    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def fit(self, cols, arities, y, n_classes):
        counts = np.bincount(y, minlength=n_classes).astype(float)
        with np.errstate(divide="ignore"):
            self.log_prior = np.log(counts / counts.sum())
        self.tables = []
        for col, a in zip(cols, arities):
            t = np.zeros((n_classes, a))
            np.add.at(t, (y, col), 1.0)
            t = (t + self.alpha) / (counts[:, None] + self.alpha * a)
            self.tables.append(np.log(t))
        return self

    def scores(self, cols, N):
        s = np.tile(self.log_prior, (N, 1))
        for col, t in zip(cols, self.tables):
            s += t[:, col].T
        return s

    def predict(self, cols, N):
        # argmax keeps the first maximum, so ties go to class 0
        return np.argmax(self.scores(cols, N), axis=1)


def cv_predictions(data, A, folds=10, seed=0, group_aware=True, alpha=1.0):
    """Out-of-fold predictions for every row."""
    if folds < 2:
        raise ValueError("need at least two folds")
    cols, arities = design(data, A, group_aware)
    fid = fold_ids(data.N, folds, seed)
    pred = np.empty(data.N, dtype=np.int64)
    for k in range(folds):
        test = fid == k
        train = ~test
        model = CategoricalNB(alpha).fit([c[train] for c in cols], arities, data.y[train], data.n_classes)
        pred[test] = model.predict([c[test] for c in cols], int(test.sum()))
    return pred


def train_eval_nb(data, A, folds=10, seed=0, group_aware=True, alpha=1.0):
    """k-fold cross-validated accuracy of naive Bayes on features ``A``."""
    pred = cv_predictions(data, A, folds, seed, group_aware, alpha)
    return float(np.mean(pred == data.y))
