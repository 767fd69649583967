"""Exact submodular minimization with the Fujishige-Wolfe minimum-norm-point method.

The base polytope is explored through Edmonds' greedy vertices.  Each greedy
call sorts the elements by the current point ``x``, which is exactly the
order whose prefixes are the level sets of ``x``; their values come for free
from the chain evaluation and give a running primal candidate.  Together with
the dual bound ``sum_j min(x_j, 0) <= min f`` this yields a duality gap that
serves as the stopping certificate.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import ConvergenceError, ModularFunction

_COEF_EPS = 1e-12


@dataclass
class SFMResult:
    """Minimizer and value; unpacks as ``(minimizer, value)``."""

    minimizer: int
    value: float
    x: np.ndarray = field(repr=False)
    major_cycles: int = 0
    gap: float = 0.0
    certified: bool = True
    norms: list = field(default_factory=list, repr=False)

    def __iter__(self):
        return iter((self.minimizer, self.value))


def greedy_base_vertex(f, weights):
    """Extreme base minimizing ``<weights, y>`` over the base polytope.

    Elements are sorted by increasing weight (ties by index) and receive their
    chain increments.  ``f`` is assumed normalized.
    """
    y, _, _ = _greedy(f, np.asarray(weights, dtype=float))
    return y


def _greedy(f, weights):
    order = np.argsort(weights, kind="stable")
    vals = f.eval_chain(order)
    y = np.empty(f.n)
    y[order] = np.diff(vals)
    return y, order, vals


def _affine_minimizer(P):
    """Min-norm point of the affine hull of the rows of ``P``.

    Solves the bordered normal equations ``G a + mu 1 = 0, 1'a = 1``.
    """
    m = P.shape[0]
    A = np.zeros((m + 1, m + 1))
    A[:m, :m] = P @ P.T
    A[:m, m] = 1.0
    A[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    a = sol[:m]
    a /= a.sum()
    return a, a @ P


def minimize_submodular(f, tol=1e-10, max_cycles=None, certify=True):
    """Global minimizer of a submodular ``f``.

    Runs Wolfe's major/minor cycles until the duality gap
    ``f(best level set) - sum_j min(x_j, 0)`` drops to ``n * tol`` (or Wolfe's
    own optimality test fires).  The returned set is certified locally
    optimal against all single-element moves.

    Raises :class:`ConvergenceError` (with the best-so-far
    :class:`SFMResult` attached) when ``max_cycles`` (default ``10 n^2``)
    major cycles do not suffice.
    """
    n = f.n
    f0 = f(0)
    if isinstance(f, ModularFunction):
        X = f.argmin()
        return SFMResult(X, f.value(X), f.weights.copy())
    if max_cycles is None:
        max_cycles = 10 * n * n
    gap_tol = n * tol

    # candidate tracking: chain values include f(∅)
    best = [0, f0]

    def note_chain(order, vals):
        k = int(np.argmin(vals))
        if vals[k] < best[1] - 1e-15 or (vals[k] <= best[1] + 1e-15 and k < best[0].bit_count()):
            best[0] = _prefix(order, k)
            best[1] = float(vals[k])

    x, order, vals = _greedy(f, np.zeros(n))
    note_chain(order, vals)
    P = x[None, :].copy()
    lam = np.ones(1)
    norms = [float(x @ x)]
    cycles = 0
    converged = False
    while cycles < max_cycles:
        cycles += 1
        q, order, vals = _greedy(f, x)
        note_chain(order, vals)
        dual = np.minimum(x, 0).sum() + f0
        if best[1] - dual <= gap_tol:
            converged = True
            break
        xx = x @ x
        scale = max(xx, q @ q, 1.0)
        if xx - x @ q <= 1e-15 * scale:
            converged = True
            break
        if np.any(np.all(np.abs(P - q) <= 1e-13 * np.sqrt(scale), axis=1)):
            converged = True
            break
        P = np.vstack([P, q])
        lam = np.append(lam, 0.0)
        while True:
            a, y = _affine_minimizer(P)
            if np.all(a > _COEF_EPS):
                lam, x = a, y
                break
            neg = a <= _COEF_EPS
            denom = lam[neg] - a[neg]
            ok = denom > 0
            theta = np.min(lam[neg][ok] / denom[ok]) if ok.any() else 0.0
            theta = min(max(theta, 0.0), 1.0)
            lam = theta * a + (1 - theta) * lam
            keep = lam > _COEF_EPS
            if keep.sum() == 0:
                keep[np.argmax(lam)] = True
            P, lam = P[keep], lam[keep]
            lam = lam / lam.sum()
            x = lam @ P
        if P.shape[0] > n + 1:
            # Carathéodory pruning keeps at most n+1 affinely independent points
            idx = np.argsort(lam)[::-1][: n + 1]
            P, lam = P[idx], lam[idx] / lam[idx].sum()
            x = lam @ P
        norms.append(float(x @ x))

    dual = np.minimum(x, 0).sum() + f0
    X, val = best
    certified = True
    if certify:
        X, val, certified = _polish(f, X, val)
    result = SFMResult(X, val, x, cycles, val - dual, certified, norms)
    if not converged:
        raise ConvergenceError(f"Wolfe did not converge in {max_cycles} major cycles", best=result)
    return result


def _prefix(order, k):
    m = 0
    for j in order[:k]:
        m |= 1 << int(j)
    return m


def _polish(f, X, val):
    """Check single-element moves; move downhill if the check fails."""
    certified = True
    while True:
        improved = False
        for j in range(f.n):
            Y = X ^ (1 << j)
            fy = f(Y)
            if fy < val - 1e-12:
                X, val, improved = Y, fy, True
                certified = False
        if not improved:
            return X, val, certified


def lovasz_dual_bound(x):
    """``sum_j min(x_j, 0)``: lower bound on ``min f`` for ``x`` in the base polytope."""
    return float(np.minimum(x, 0).sum())

