"""Tight modular bounds of submodular functions.

Lower bounds come from chains of a permutation (extreme points of the
sub-differential); the two upper bounds are built from singleton gains.
Every bound is returned as a :class:`~dsmin.core.ModularFunction`, so
querying it afterwards costs no oracle calls.
"""

import numpy as np

from .core import ModularFunction, check_mask, full_mask, members, popcount


def chain_permutation(Y, inner_order, outer_order, n):
    """Permutation listing ``inner_order`` (a permutation of ``Y``) first.

    The resulting chain passes through ``Y`` at position ``|Y|``.
    """
    Y = check_mask(Y, n)
    inner = [int(j) for j in inner_order]
    outer = [int(j) for j in outer_order]
    if sorted(inner) != members(Y):
        raise ValueError("inner_order must be a permutation of Y")
    if sorted(outer) != members(full_mask(n) & ~Y):
        raise ValueError("outer_order must be a permutation of V \\ Y")
    return tuple(inner + outer)


def chain_contains(sigma, Y):
    k = popcount(Y)
    prefix = 0
    for j in sigma[:k]:
        prefix |= 1 << j
    return prefix == Y


def subgradient(f, Y, sigma):
    """Chain subgradient ``h`` of ``f`` at ``Y`` for permutation ``sigma``.

    ``h(sigma[i]) = f(S_i) - f(S_{i-1})`` with ``f(∅)`` kept as the offset, so
    ``h <= f`` everywhere (for submodular ``f``) with equality on every
    prefix ``S_i`` of the chain.
    """
    Y = check_mask(Y, f.n)
    sigma = tuple(int(j) for j in sigma)
    if sorted(sigma) != list(range(f.n)):
        raise ValueError("sigma is not a permutation of the ground set")
    if not chain_contains(sigma, Y):
        raise ValueError("the chain of sigma does not contain Y")
    vals = f.eval_chain(sigma)
    w = np.empty(f.n)
    w[list(sigma)] = np.diff(vals)
    return ModularFunction(w, offset=vals[0])


def _upper_bounds(f, X, which):
    X = check_mask(X, f.n)
    n = f.n
    inside = members(X)
    outside = members(full_mask(n) & ~X)
    fX = f(X)
    out = {}
    if 1 in which:
        # tight on X and on every X \ j
        w = np.empty(n)
        f0 = f(0)
        for j in inside:
            w[j] = fX - f(X & ~(1 << j))
        for j in outside:
            w[j] = f(1 << j) - f0
        out[1] = ModularFunction(w, fX - w[inside].sum())
    if 2 in which:
        # tight on X and on every X + j
        w = np.empty(n)
        V = full_mask(n)
        fV = f(V)
        for j in inside:
            w[j] = fV - f(V & ~(1 << j))
        for j in outside:
            w[j] = f(X | (1 << j)) - fX
        out[2] = ModularFunction(w, fX - w[inside].sum())
    return out


def upper_bound_1(f, X):
    """``m(Y) = f(X) - sum_{X\\Y} f(j|X-j) + sum_{Y\\X} f(j|∅)``."""
    return _upper_bounds(f, X, (1,))[1]


def upper_bound_2(f, X):
    """``m(Y) = f(X) - sum_{X\\Y} f(j|V-j) + sum_{Y\\X} f(j|X)``."""
    return _upper_bounds(f, X, (2,))[2]


def upper_bounds(f, X):
    """Both upper bounds, sharing the evaluation of ``f(X)``."""
    b = _upper_bounds(f, X, (1, 2))
    return b[1], b[2]
