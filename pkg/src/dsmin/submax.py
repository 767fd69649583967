"""Unconstrained submodular maximization: double greedy and local search."""

import numpy as np

from .core import ConvergenceError, TOL, check_mask, full_mask


def double_greedy(f, randomized=False, seed=0):
    """Bi-directional greedy over elements in index order.

    Keeps ``X ⊆ Y``, starting from ``∅`` and ``V``.  For element ``j`` with
    ``a = f(j|X)`` and ``b = f(Y-j) - f(Y)``, the deterministic variant adds
    ``j`` to ``X`` when ``a >= b`` and drops it from ``Y`` otherwise (a 1/3
    approximation for nonnegative ``f``).  The randomized variant adds with
    probability ``a+ / (a+ + b+)`` (1/2 in expectation).

    Uses ``2n + 2`` oracle calls.  Returns ``(set, value)``.
    """
    rng = np.random.default_rng(seed) if randomized else None
    X, Y = 0, full_mask(f.n)
    fX, fY = f(X), f(Y)
    for j in range(f.n):
        bit = 1 << j
        fXj = f(X | bit)
        fYj = f(Y & ~bit)
        a = fXj - fX
        b = fYj - fY
        if randomized:
            ap, bp = max(a, 0.0), max(b, 0.0)
            p = ap / (ap + bp) if ap + bp > 0 else (1.0 if a >= b else 0.0)
            take = rng.random() < p
        else:
            take = a >= b
        if take:
            X, fX = X | bit, fXj
        else:
            Y, fY = Y & ~bit, fYj
    return X, fX


def local_search_max(f, X0=0, max_iter=None, tol=TOL):
    """Best-improvement single add/remove ascent from ``X0``.

    Stops at a set no single move improves by more than ``tol``.  Raises
    :class:`ConvergenceError` carrying ``(set, value)`` after ``max_iter``
    (default ``10 n^2``) moves.
    """
    X = check_mask(X0, f.n)
    val = f(X)
    if max_iter is None:
        max_iter = 10 * f.n * f.n
    for _ in range(max_iter):
        best_j, best_val = -1, val + tol
        for j in range(f.n):
            v = f(X ^ (1 << j))
            if v > best_val:
                best_j, best_val = j, v
        if best_j < 0:
            return X, val
        X ^= 1 << best_j
        val = best_val
    raise ConvergenceError("local search hit its move cap", best=(X, val))


def maximize_submodular(f, seed=0):
    """Best of deterministic and randomized double greedy and local search from ``∅``.

    Ties keep the earlier candidate in that order.
    """
    candidates = [
        double_greedy(f, randomized=False),
        double_greedy(f, randomized=True, seed=seed),
        local_search_max(f, 0),
    ]
    best = candidates[0]
    for c in candidates[1:]:
        if c[1] > best[1]:
            best = c
    return best
