import numpy as np
import pytest
from hypothesis import given, settings

from conftest import seeds
from dsmin.core import (
    ConvergenceError,
    ModularFunction,
    SumFunction,
    TableFunction,
    brute_force_minimize,
    make_standard,
    random_submodular,
)
from dsmin.sfm import greedy_base_vertex, lovasz_dual_bound, minimize_submodular
from hypothesis import strategies as st


class TestGreedyBase:
    def test_fixture(self, f1):
        np.testing.assert_allclose(greedy_base_vertex(f1, [0.0, 1.0]), [2.0, 0.5])

    def test_equal_weights_use_index_order(self, f1):
        np.testing.assert_allclose(greedy_base_vertex(f1, [1.0, 1.0]), [2.0, 0.5])

    def test_modular_base_is_unique(self):
        m = ModularFunction([1.0, -2.0, 3.0])
        np.testing.assert_allclose(greedy_base_vertex(m, [3.0, 1.0, 2.0]), m.weights)

    def test_base_sums_to_f_of_v(self):
        f = random_submodular(6, seed=4)
        y = greedy_base_vertex(f, np.random.default_rng(0).normal(size=6))
        assert y.sum() == pytest.approx(f(63))


class TestMinimize:
    def test_f3(self):
        X, v = minimize_submodular(TableFunction(2, [0.0, -1.0, 1.0, -0.5]))
        assert (X, v) == (1, -1.0)

    def test_nonnegative(self):
        X, v = minimize_submodular(make_standard("random_coverage", n=6, seed=2))
        assert (X, v) == (0, 0.0)

    def test_cut_minus_modular(self):
        cut = make_standard("cut", n=2, edges=[(0, 1)])
        f = SumFunction([(1.0, cut), (-1.0, ModularFunction([2.0, 0.0]))])
        X, v = minimize_submodular(f)
        assert (X, v) == (3, pytest.approx(-2.0))

    def test_modular_bypass(self):
        res = minimize_submodular(ModularFunction([1.0, -1.0, -0.5], offset=1.0))
        assert res.minimizer == 0b110
        assert res.value == pytest.approx(-0.5)

    def test_result_metadata(self):
        res = minimize_submodular(random_submodular(6, seed=9))
        assert res.certified
        assert res.gap <= 6e-10 + 1e-12
        assert lovasz_dual_bound(res.x) <= res.value + 1e-9

    def test_cycle_cap(self):
        with pytest.raises(ConvergenceError) as info:
            minimize_submodular(random_submodular(10, seed=5), max_cycles=1)
        assert info.value.best is not None

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(1, 9), seed=seeds)
    def test_matches_brute_force(self, n, seed):
        f = random_submodular(n, seed=seed)
        X, v = minimize_submodular(f)
        _, best = brute_force_minimize(f)
        assert v == pytest.approx(best, abs=1e-6)
        assert f(X) == pytest.approx(v, abs=1e-12)
