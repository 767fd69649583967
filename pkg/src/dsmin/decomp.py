"""Rewriting and bounding DS functions.

Any submodular ``f`` splits as ``f = f' + k`` with ``k(j) = f(j | V - j)``
modular and ``f'`` a totally normalized polymatroid (monotone, with zero gain
at the top).  The split gives monotone DS decompositions and two cheap lower
bounds on ``min (f - g)``.  Conversely, an arbitrary set function with a known
lower bound on its second differences becomes a DS function after adding a
scaled strictly submodular term.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    MAX_EXHAUSTIVE_N,
    ConstructionError,
    DomainError,
    DSFunction,
    ModularFunction,
    SetFunction,
    SizeError,
    SumFunction,
    ZeroFunction,
    full_mask,
    popcount,
    to_table,
    verify_submodular,
)
from .sfm import minimize_submodular

ALPHA_MAX_N = 12


@dataclass
class TotallyNormalizedSplit:
    """``f = fprime + k`` with ``k`` modular and ``fprime`` a polymatroid part."""

    fprime: SetFunction
    k: ModularFunction


class NormalizedPart(SetFunction):
    """``f(X) - k(X)``, evaluated lazily."""

    def __init__(self, f, k):
        super().__init__(f.n)
        self.f = f
        self.k = k

    def _value(self, mask):
        return self.f(mask) - self.k.value(mask)

    def _chain(self, order):
        return self.f.eval_chain(order) - self.k._chain(order)


def top_gains(f):
    """Modular function of the gains ``f(j | V - j)``; uses ``n + 1`` calls."""
    V = full_mask(f.n)
    fV = f(V)
    return ModularFunction([fV - f(V & ~(1 << j)) for j in range(f.n)])


def totally_normalize(f):
    """Split ``f`` into ``(f', k)`` with ``k(j) = f(j | V - j)`` and ``f' = f - k``."""
    k = top_gains(f)
    return TotallyNormalizedSplit(NormalizedPart(f, k), k)


def monotone_ds(ds):
    """Equivalent DS pair whose parts are both monotone.

    With ``k = k_f - k_g`` and ``V+ = {j : k(j) >= 0}``, returns
    ``f' + k restricted to V+`` and ``g' - k restricted to V-``.
    """
    sf = totally_normalize(ds.f)
    sg = totally_normalize(ds.g)
    k = sf.k.weights - sg.k.weights
    plus = ModularFunction(np.where(k >= 0, k, 0.0))
    minus = ModularFunction(np.where(k < 0, -k, 0.0))
    return DSFunction(SumFunction([(1.0, sf.fprime), (1.0, plus)]), SumFunction([(1.0, sg.fprime), (1.0, minus)]))


def beta_sqrt(n):
    """Smallest second difference of ``X -> sqrt(|X|)`` on ``n`` elements."""
    if n < 3:
        raise DomainError("beta_sqrt needs n >= 3")
    return 2 * math.sqrt(n - 1) - math.sqrt(n) - math.sqrt(n - 2)


def beta_concave(phi):
    """Smallest second difference of ``X -> phi[|X|]`` for a table ``phi[0..n]``.

    Gains of a concave table decrease, so the minimum over nested contexts is
    attained at adjacent sizes ``|Y| = |X| + 1 <= n - 1``.
    """
    phi = np.asarray(phi, dtype=float)
    if len(phi) < 4:
        raise DomainError("need a table over at least 3 elements")
    d = np.diff(phi)
    return float(np.min(d[:-1] - d[1:]))


def brute_force_alpha(v):
    """``min over j and X strictly inside Y inside V - j`` of ``v(j|X) - v(j|Y)``.

    Exponential; refuses ``n > 12``.  Returns 0 for ``n == 1``.
    """
    n = v.n
    if n > ALPHA_MAX_N:
        raise SizeError(f"exhaustive alpha refused for n={n} > {ALPHA_MAX_N}")
    T = to_table(v)
    masks = np.arange(1 << n)
    best = math.inf
    for j in range(n):
        bj = 1 << j
        out = (masks & bj) == 0
        G = np.full(1 << n, np.inf)
        G[out] = T[masks[out] | bj] - T[masks[out]]
        # S[Y] = min over subsets of Y of G
        S = G.copy()
        for i in range(n):
            if i == j:
                continue
            sel = masks[(masks >> i & 1) == 1]
            S[sel] = np.minimum(S[sel], S[sel ^ (1 << i)])
        strict = np.full(1 << n, np.inf)
        for i in range(n):
            if i == j:
                continue
            sel = masks[(masks >> i & 1) == 1]
            strict[sel] = np.minimum(strict[sel], S[sel ^ (1 << i)])
        diff = strict[out] - G[out]
        diff = diff[np.isfinite(diff)]
        if diff.size:
            best = min(best, float(diff.min()))
    return 0.0 if best == math.inf else best


class _CardinalityConcave(SetFunction):
    def __init__(self, phi, scale):
        super().__init__(len(phi) - 1)
        self.phi = np.asarray(phi, dtype=float)
        self.scale = float(scale)

    def _value(self, mask):
        return self.scale * self.phi[popcount(mask)]

    def _chain(self, order):
        return self.scale * self.phi[: len(order) + 1]


def ds_from_alpha(v, alpha_lower, phi=None, check=True):
    """DS pair ``(v + c*phi(|X|), c*phi(|X|))`` for an arbitrary set function ``v``.

    ``alpha_lower`` must not exceed the true second-difference bound of ``v``
    (see :func:`brute_force_alpha`).  ``phi`` is a concave table over sizes
    ``0..n``, defaulting to ``sqrt``; ``c = |min(alpha_lower, 0)| / beta``.
    With ``check`` and ``n <= 20`` the result is verified exhaustively and a
    :class:`ConstructionError` reports a violated precondition.
    """
    n = v.n
    a = min(float(alpha_lower), 0.0)
    if a == 0.0:
        return DSFunction(v, ZeroFunction(n))
    if phi is None:
        beta = beta_sqrt(n)
        phi = np.sqrt(np.arange(n + 1))
    else:
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (n + 1,):
            raise ConstructionError("phi must have n + 1 entries")
        beta = beta_concave(phi)
    if not beta > 0:
        raise ConstructionError("phi is not strictly concave")
    g = _CardinalityConcave(phi, abs(a) / beta)
    f = SumFunction([(1.0, v), (1.0, g)])
    if check and n <= MAX_EXHAUSTIVE_N and not verify_submodular(f):
        raise ConstructionError("alpha_lower exceeds the true alpha: f is not submodular")
    return DSFunction(f, g)


def lower_bound_1(ds):
    """``min_X f'(X) + k(X) - g'(V)``, solved by exact submodular minimization.

    ``f' + k`` equals ``f - k_g``, which is what gets minimized.
    """
    sg = totally_normalize(ds.g)
    _, fmin = minimize_submodular(SumFunction([(1.0, ds.f), (-1.0, sg.k)]))
    V = full_mask(ds.n)
    return fmin - sg.fprime(V)


def lower_bound_2(ds):
    """``f'(0) - g'(V) + sum_j min(k(j), 0)`` with ``k = k_f - k_g``."""
    sf = totally_normalize(ds.f)
    sg = totally_normalize(ds.g)
    k = sf.k.weights - sg.k.weights
    V = full_mask(ds.n)
    return sf.fprime(0) - sg.fprime(V) + float(np.minimum(k, 0).sum())

