import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_ds, seeds
from dsmin.core import (
    CallableFunction,
    ConstructionError,
    DomainError,
    DSFunction,
    ModularFunction,
    SizeError,
    ZeroFunction,
    brute_force_minimize,
    is_monotone,
    popcount,
    random_submodular,
    to_table,
    verify_submodular,
)
from dsmin.decomp import (
    beta_concave,
    beta_sqrt,
    brute_force_alpha,
    ds_from_alpha,
    lower_bound_1,
    lower_bound_2,
    monotone_ds,
    totally_normalize,
)
from dsmin.sfm import minimize_submodular


def cardinality(n, phi):
    return CallableFunction(n, lambda m: phi(popcount(m)))


def exhaustive_beta(n):
    # min over j, X strictly inside Y inside V - j of sqrt-gain differences
    g = lambda k: math.sqrt(k + 1) - math.sqrt(k)
    return min(g(a) - g(b) for a in range(n - 1) for b in range(a + 1, n))


class TestTotallyNormalize:
    def test_f1(self, f1):
        s = totally_normalize(f1)
        np.testing.assert_allclose(s.k.weights, [1.5, 0.5])
        np.testing.assert_allclose(to_table(s.fprime), [0, 0.5, 0.5, 0.5])

    def test_g1(self, g1):
        s = totally_normalize(g1)
        np.testing.assert_allclose(s.k.weights, [0.5, 0.5])
        np.testing.assert_allclose(to_table(s.fprime), [0, 0.5, 0.5, 0.5])

    def test_modular(self):
        m = ModularFunction([1.0, -2.0, 0.5])
        s = totally_normalize(m)
        np.testing.assert_allclose(s.k.weights, m.weights)
        np.testing.assert_allclose(to_table(s.fprime), 0.0)

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(2, 8), seed=seeds)
    def test_polymatroid_part(self, n, seed):
        f = random_submodular(n, seed=seed)
        s = totally_normalize(f)
        np.testing.assert_allclose(to_table(s.fprime) + to_table(s.k), to_table(f), atol=1e-12)
        assert is_monotone(s.fprime)
        assert verify_submodular(s.fprime)
        np.testing.assert_allclose(totally_normalize(s.fprime).k.weights, 0.0, atol=1e-12)


class TestMonotoneDS:
    def test_fixture(self, v1):
        mono = monotone_ds(v1)
        np.testing.assert_allclose(to_table(mono.f), [0, 1.5, 0.5, 1.5])
        np.testing.assert_allclose(to_table(mono.g), [0, 0.5, 0.5, 0.5])

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(2, 8), seed=seeds)
    def test_identity_and_monotone(self, n, seed):
        ds = random_ds(n, seed)
        mono = monotone_ds(ds)
        Tf, Tg = to_table(mono.f), to_table(mono.g)
        np.testing.assert_allclose(Tf - Tg, to_table(ds.f) - to_table(ds.g), atol=1e-12)
        for h in (mono.f, mono.g):
            assert is_monotone(h)
            assert verify_submodular(h)


class TestBeta:
    def test_closed_form(self):
        assert beta_sqrt(4) == pytest.approx(2 * math.sqrt(3) - 2 - math.sqrt(2), abs=1e-15)
        assert beta_sqrt(4) == pytest.approx(0.0499, abs=1e-4)
        assert beta_sqrt(3) == pytest.approx(0.09638, abs=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            beta_sqrt(2)

    @pytest.mark.parametrize("n", range(3, 11))
    def test_matches_enumeration(self, n):
        assert beta_sqrt(n) == pytest.approx(exhaustive_beta(n), abs=1e-12)
        assert beta_concave(np.sqrt(np.arange(n + 1))) == pytest.approx(beta_sqrt(n), abs=1e-12)

    def test_positive(self):
        assert all(beta_sqrt(n) > 0 for n in range(3, 200))


class TestAlpha:
    def test_square_n3(self):
        assert brute_force_alpha(cardinality(3, lambda k: k * k)) == pytest.approx(-4.0)

    def test_square_n4(self):
        assert brute_force_alpha(cardinality(4, lambda k: k * k)) == pytest.approx(-6.0)

    def test_modular(self):
        assert brute_force_alpha(ModularFunction([1.0, -1.0, 3.0])) == pytest.approx(0.0)

    def test_submodular_nonnegative(self):
        assert brute_force_alpha(random_submodular(6, seed=1)) >= -1e-12

    def test_size_limit(self):
        with pytest.raises(SizeError):
            brute_force_alpha(ZeroFunction(13))

    def test_matches_direct_enumeration(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            n = 4
            T = rng.normal(size=16)
            v = CallableFunction(n, lambda m, T=T: T[m])
            best = np.inf
            for j in range(n):
                for X in range(16):
                    for Y in range(16):
                        if X >> j & 1 or Y >> j & 1 or X == Y or X & ~Y:
                            continue
                        best = min(best, (T[X | 1 << j] - T[X]) - (T[Y | 1 << j] - T[Y]))
            assert brute_force_alpha(v) == pytest.approx(best)


class TestDSFromAlpha:
    def test_square(self):
        v = cardinality(4, lambda k: k * k)
        ds = ds_from_alpha(v, -6.0)
        assert verify_submodular(ds.f)
        np.testing.assert_allclose(to_table(ds.f) - to_table(ds.g), to_table(v), atol=1e-12)

    def test_submodular_passthrough(self):
        v = random_submodular(4, seed=0)
        ds = ds_from_alpha(v, 0.0)
        assert ds.f is v
        np.testing.assert_allclose(to_table(ds.g), 0.0)

    def test_fixture(self, v1):
        v = v1.as_function()
        ds = ds_from_alpha(v, brute_force_alpha(v))
        np.testing.assert_allclose(to_table(ds.f) - to_table(ds.g), [0, 1, 0, 1], atol=1e-12)

    def test_adjacent_alpha_suffices_for_squares(self):
        # second differences of |X|^2 are 2, so -2 is already enough
        assert verify_submodular(ds_from_alpha(cardinality(4, lambda k: k * k), -2.0).f)

    def test_precondition_violation(self):
        with pytest.raises(ConstructionError):
            ds_from_alpha(cardinality(4, lambda k: k * k), -1.0)

    def test_custom_concave_table(self):
        v = cardinality(5, lambda k: k ** 3)
        phi = np.log1p(np.arange(6))
        ds = ds_from_alpha(v, brute_force_alpha(v), phi=phi)
        assert verify_submodular(ds.f)
        assert verify_submodular(ds.g)

    @settings(max_examples=20, deadline=None)
    @given(n=st.integers(3, 7), seed=seeds)
    def test_random_tables(self, n, seed):
        T = np.random.default_rng(seed).normal(size=1 << n)
        T[0] = 0.0
        v = CallableFunction(n, lambda m: T[m])
        ds = ds_from_alpha(v, brute_force_alpha(v))
        assert verify_submodular(ds.f, tol=1e-9)
        np.testing.assert_allclose(to_table(ds.f) - to_table(ds.g), T, atol=1e-9)


class TestLowerBounds:
    def test_fixture(self, v1):
        assert lower_bound_1(v1) == pytest.approx(-0.5)
        assert lower_bound_2(v1) == pytest.approx(-0.5)

    def test_zero_g_is_exact(self):
        f = random_submodular(6, seed=3)
        assert lower_bound_1(DSFunction(f, ZeroFunction(6))) == pytest.approx(minimize_submodular(f).value)

    def test_modular_exact(self):
        ds = DSFunction(ModularFunction([1.0, -2.0, 0.5]), ModularFunction([0.0, 1.0, 2.0]))
        assert lower_bound_2(ds) == pytest.approx(-4.5)
        assert lower_bound_1(ds) == pytest.approx(-4.5)
        assert brute_force_minimize(ds.as_function())[1] == pytest.approx(-4.5)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 8), seed=seeds)
    def test_soundness(self, n, seed):
        ds = random_ds(n, seed)
        lb1, lb2 = lower_bound_1(ds), lower_bound_2(ds)
        opt = brute_force_minimize(ds.as_function())[1]
        assert lb2 <= lb1 + 1e-9
        assert lb1 <= opt + 1e-9
