import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeds, small_n
from dsmin.bounds import (
    chain_contains,
    chain_permutation,
    subgradient,
    upper_bound_1,
    upper_bound_2,
    upper_bounds,
)
from dsmin.core import ModularFunction, full_mask, members, random_submodular, to_table


class TestChainPermutation:
    def test_examples(self):
        assert chain_permutation(0b10, [1], [0], 2) == (1, 0)
        assert chain_permutation(0, [], [2, 0, 1], 3) == (2, 0, 1)
        assert chain_permutation(0b111, [1, 2, 0], [], 3) == (1, 2, 0)

    def test_contains(self):
        assert chain_contains((1, 0, 2), 0b10)
        assert not chain_contains((1, 0, 2), 0b100)

    @pytest.mark.parametrize("inner,outer", [([0], [0]), ([0, 1], [])])
    def test_rejects_bad_orders(self, inner, outer):
        with pytest.raises(ValueError):
            chain_permutation(0b01, inner, outer, 2)


class TestSubgradient:
    def test_fixture_g1(self, g1):
        h = subgradient(g1, 0b01, (0, 1))
        np.testing.assert_allclose(h.weights, [1.0, 0.5])

    def test_fixture_f1(self, f1):
        h = subgradient(f1, 0, (0, 1))
        np.testing.assert_allclose(h.weights, [2.0, 0.5])
        assert h.value(0b10) <= f1(0b10)

    def test_modular_is_its_own_subgradient(self):
        m = ModularFunction([1.0, -2.0, 0.5])
        h = subgradient(m, 0b101, (2, 0, 1))
        np.testing.assert_allclose(h.weights, m.weights)

    def test_chain_must_contain_y(self, f1):
        with pytest.raises(ValueError):
            subgradient(f1, 0b10, (0, 1))

    @settings(max_examples=40, deadline=None)
    @given(n=small_n, seed=seeds, data=st.data())
    def test_domination_and_tightness(self, n, seed, data):
        f = random_submodular(n, seed=seed)
        sigma = tuple(data.draw(st.permutations(range(n))))
        k = data.draw(st.integers(0, n))
        Y = sum(1 << j for j in sigma[:k])
        h = to_table(subgradient(f, Y, sigma))
        T = to_table(f)
        assert (h <= T + 1e-9).all()
        prefix = 0
        for j in (None,) + sigma:
            if j is not None:
                prefix |= 1 << j
            assert h[prefix] == pytest.approx(T[prefix], abs=1e-9)


class TestUpperBounds:
    def test_fixture_bound_1(self, f1):
        m = upper_bound_1(f1, 0b01)
        assert m.value(0b10) == pytest.approx(1.0)

    def test_fixture_bound_2(self, f1):
        m = upper_bound_2(f1, 0b01)
        assert m.value(0b10) == pytest.approx(1.0)

    def test_modular_is_returned_exactly(self):
        m0 = ModularFunction([1.0, -1.0, 2.0], 0.0)
        for m in upper_bounds(m0, 0b011):
            np.testing.assert_allclose(m.weights, m0.weights)
            assert m.offset == pytest.approx(0.0)

    def test_shared_call_matches_single(self):
        f = random_submodular(5, seed=11)
        m1, m2 = upper_bounds(f, 0b10110)
        np.testing.assert_allclose(m1.weights, upper_bound_1(f, 0b10110).weights)
        np.testing.assert_allclose(m2.weights, upper_bound_2(f, 0b10110).weights)

    @settings(max_examples=40, deadline=None)
    @given(n=small_n, seed=seeds, data=st.data())
    def test_domination_and_tightness(self, n, seed, data):
        f = random_submodular(n, seed=seed)
        X = data.draw(st.integers(0, full_mask(n)))
        T = to_table(f)
        m1, m2 = (to_table(m) for m in upper_bounds(f, X))
        assert (m1 >= T - 1e-9).all()
        assert (m2 >= T - 1e-9).all()
        assert m1[X] == pytest.approx(T[X], abs=1e-9)
        assert m2[X] == pytest.approx(T[X], abs=1e-9)
        for j in members(X):
            assert m1[X & ~(1 << j)] == pytest.approx(T[X & ~(1 << j)], abs=1e-9)
        for j in members(full_mask(n) & ~X):
            assert m2[X | (1 << j)] == pytest.approx(T[X | (1 << j)], abs=1e-9)
