import numpy as np
import pytest
from hypothesis import given, settings

from conftest import seeds, small_n
from dsmin.core import (
    ConvergenceError,
    ModularFunction,
    TableFunction,
    ZeroFunction,
    brute_force_maximize,
    random_submodular,
)
from dsmin.submax import double_greedy, local_search_max, maximize_submodular

F3 = [0.0, -1.0, 1.0, -0.5]


class TestDoubleGreedy:
    def test_fixture(self, g1):
        assert double_greedy(g1) == (3, 1.5)

    def test_zero_includes_everything(self):
        assert double_greedy(ZeroFunction(3)) == (7, 0.0)

    def test_call_budget(self, g1):
        double_greedy(g1)
        assert g1.calls == 2 * g1.n + 2

    def test_randomized_seeded(self):
        f = random_submodular(8, seed=1, modular_shift=False)
        assert double_greedy(f, True, seed=5) == double_greedy(f, True, seed=5)

    @settings(max_examples=40, deadline=None)
    @given(n=small_n, seed=seeds)
    def test_third_guarantee(self, n, seed):
        f = random_submodular(n, seed=seed, modular_shift=False)
        _, opt = brute_force_maximize(f)
        assert double_greedy(f)[1] >= opt / 3 - 1e-9


class TestLocalSearch:
    def test_fixture(self, g1):
        assert local_search_max(g1) == (3, 1.5)

    def test_f3(self):
        assert local_search_max(TableFunction(2, F3)) == (2, 1.0)

    def test_global_max_is_fixed_point(self):
        f = random_submodular(6, seed=2)
        X, v = brute_force_maximize(f)
        assert local_search_max(f, X) == (X, v)

    def test_move_cap(self):
        with pytest.raises(ConvergenceError) as info:
            local_search_max(ModularFunction(np.ones(5)), max_iter=2)
        assert info.value.best == (3, 2.0)

    @settings(max_examples=30, deadline=None)
    @given(n=small_n, seed=seeds)
    def test_local_optimality(self, n, seed):
        f = random_submodular(n, seed=seed)
        X, v = local_search_max(f)
        for j in range(n):
            assert f(X ^ (1 << j)) <= v + 1e-9


class TestBestOf:
    def test_fixture(self, g1):
        assert maximize_submodular(g1) == (3, 1.5)

    def test_modular(self):
        assert maximize_submodular(ModularFunction([3.0, -1.0])) == (1, 3.0)

    def test_zero(self):
        assert maximize_submodular(ZeroFunction(2))[1] == 0.0

    @settings(max_examples=30, deadline=None)
    @given(n=small_n, seed=seeds)
    def test_never_worse_than_components(self, n, seed):
        f = random_submodular(n, seed=seed)
        _, v = maximize_submodular(f, seed=seed)
        assert v >= double_greedy(f)[1] - 1e-12
        assert v >= local_search_max(f)[1] - 1e-12
