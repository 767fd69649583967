import numpy as np
import pytest

from dsmin.featsel.data import Dataset, load_mushroom, one_hot, parse_csv
from dsmin.featsel.nb import CategoricalNB, cv_predictions, design, fold_ids, train_eval_nb


def toy(X, y, arities=None):
    X = np.asarray(X)
    arities = X.max(axis=0) + 1 if arities is None else arities
    return Dataset(X, y, arities, [f"x{j}" for j in range(X.shape[1])], ["0", "1"])


class TestFolds:
    def test_balanced_and_seeded(self):
        ids = fold_ids(23, 5, 0)
        assert np.bincount(ids).tolist() == [5, 5, 5, 4, 4]
        np.testing.assert_array_equal(ids, fold_ids(23, 5, 0))
        assert not np.array_equal(ids, fold_ids(23, 5, 1))


class TestNB:
    def test_perfect_feature(self):
        d = toy(np.arange(40)[:, None] % 2, np.arange(40) % 2)
        assert train_eval_nb(d, [0]) == 1.0

    def test_constant_feature(self):
        # the training majority is the class the test fold lacks, so CV sits
        # slightly below 0.5 unless every fold is balanced
        d = toy(np.zeros((400, 1), dtype=int), np.arange(400) % 2, [1])
        assert train_eval_nb(d, [0]) == pytest.approx(0.5, abs=0.1)

    def test_needs_two_folds(self):
        d = toy(np.zeros((4, 1), dtype=int), [0, 1, 0, 1], [1])
        with pytest.raises(ValueError):
            train_eval_nb(d, [0], folds=1)

    def test_deterministic(self):
        d = load_mushroom()
        a = cv_predictions(d, 0b1011 << 20, seed=3)
        b = cv_predictions(d, 0b1011 << 20, seed=3)
        np.testing.assert_array_equal(a, b)

    def test_tie_goes_to_class_zero(self):
        model = CategoricalNB().fit([np.array([0, 0])], [1], np.array([0, 1]), 2)
        assert model.predict([np.array([0])], 1)[0] == 0

    def test_single_class_fold(self):
        model = CategoricalNB().fit([np.array([0, 1])], [2], np.array([1, 1]), 2)
        assert model.predict([np.array([0])], 1)[0] == 1

    def test_unseen_category_smoothed(self):
        model = CategoricalNB().fit([np.array([0, 0, 1])], [3], np.array([0, 0, 1]), 2)
        assert np.isfinite(model.scores([np.array([2])], 1)).all()


class TestGroupAware:
    def test_merges_indicators(self):
        raw = parse_csv("x,class\na,p\nb,e\nc,p\na,e\n")
        oh = one_hot(raw)
        cols, arities = design(oh, [0, 1, 2])
        assert len(cols) == 1
        assert arities == [3]
        cols, arities = design(oh, [0, 1, 2], group_aware=False)
        assert arities == [2, 2, 2]

    def test_matches_raw_categorical(self):
        raw = parse_csv("x,y,class\na,u,p\nb,u,e\nc,v,p\na,v,e\nb,v,p\nc,u,e\n" * 3)
        oh = one_hot(raw)
        full = (1 << oh.n) - 1
        a = cv_predictions(oh, full, folds=3)
        b = cv_predictions(raw, 0b11, folds=3)
        np.testing.assert_array_equal(a, b)
