"""Small-n randomized property checks, run by ``dsmin selftest``.

Each check compares a routine against exhaustive enumeration on seeded
random instances and yields ``(name, passed, detail)``.
"""

import numpy as np

from .bounds import chain_permutation, subgradient, upper_bound_1, upper_bound_2
from .core import TOL, DSFunction, brute_force_maximize, brute_force_minimize, full_mask, random_submodular, to_table
from .decomp import beta_concave, beta_sqrt, lower_bound_1, lower_bound_2, monotone_ds
from .dsopt import ALGORITHMS, LOCAL_MIN, OptimizerOptions, certify_local_min, minimize
from .sfm import minimize_submodular
from .submax import double_greedy


def _instances(seed, count, lo=3, hi=8):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(lo, hi + 1))
        yield n, random_submodular(n, seed=seed * 10007 + i)


def check_bounds(seed, count):
    worst = 0.0
    rng = np.random.default_rng(seed)
    for n, f in _instances(seed, count):
        table = to_table(f)
        X = int(rng.integers(1 << n))
        perm = rng.permutation(n)
        inner = [j for j in perm if X >> j & 1]
        outer = [j for j in perm if not X >> j & 1]
        h = to_table(subgradient(f, X, chain_permutation(X, inner, outer, n)))
        m1, m2 = to_table(upper_bound_1(f, X)), to_table(upper_bound_2(f, X))
        worst = max(worst, (h - table).max(), (table - m1).max(), (table - m2).max(),
                    abs(h[X] - table[X]), abs(m1[X] - table[X]), abs(m2[X] - table[X]))
    return worst <= 1e-9, f"max_violation={worst:.3g}"


def check_sfm(seed, count):
    worst = 0.0
    for _, f in _instances(seed, count):
        _, v = minimize_submodular(f)
        worst = max(worst, abs(v - brute_force_minimize(f)[1]))
    return worst <= 1e-6, f"max_error={worst:.3g}"


def check_double_greedy(seed, count):
    worst = np.inf
    for n, f in _instances(seed, count):
        f = random_submodular(n, seed=seed + n, modular_shift=False)
        opt = brute_force_maximize(f)[1]
        if opt > 0:
            worst = min(worst, double_greedy(f)[1] / opt)
    return worst >= 1 / 3, f"min_ratio={worst:.3g}"


def check_descent(seed, count):
    bad = 0
    for i, (n, f) in enumerate(_instances(seed, count)):
        ds = DSFunction(f, random_submodular(n, seed=seed + 7919 * (i + 1)))
        for alg in ALGORITHMS:
            tr = minimize(ds, alg, OptimizerOptions(seed=i))
            vals = tr.values
            if any(b > a + TOL for a, b in zip(vals, vals[1:])):
                bad += 1
            if tr.certificate == LOCAL_MIN and not certify_local_min(ds, tr.set):
                bad += 1
    return bad == 0, f"violations={bad}"


def check_lower_bounds(seed, count):
    bad = 0
    for i, (n, f) in enumerate(_instances(seed, count)):
        ds = DSFunction(f, random_submodular(n, seed=seed + 104729 + i))
        lb1, lb2 = lower_bound_1(ds), lower_bound_2(ds)
        opt = brute_force_minimize(ds.as_function())[1]
        bad += not (lb2 <= lb1 + 1e-7 and lb1 <= opt + 1e-7)
    return bad == 0, f"violations={bad}"


def check_decomposition(seed, count):
    worst = 0.0
    for i, (n, f) in enumerate(_instances(seed, count)):
        ds = DSFunction(f, random_submodular(n, seed=seed + 31 * (i + 1)))
        mono = monotone_ds(ds)
        diff = to_table(mono.f) - to_table(mono.g) - (to_table(ds.f) - to_table(ds.g))
        worst = max(worst, np.abs(diff).max())
    ok = worst <= 1e-9 and all(
        abs(beta_sqrt(n) - beta_concave(np.sqrt(np.arange(n + 1)))) <= 1e-12 for n in range(3, 11)
    )
    return ok, f"max_identity_error={worst:.3g}"


CHECKS = {
    "bounds": check_bounds,
    "sfm": check_sfm,
    "double_greedy": check_double_greedy,
    "descent": check_descent,
    "lower_bounds": check_lower_bounds,
    "decomposition": check_decomposition,
}


def run_all(seed=0, count=20):
    for name, fn in CHECKS.items():
        passed, detail = fn(seed, count)
        yield name, bool(passed), detail
