"""Exact modular minimization under combinatorial constraints, and constrained ModMod.

Each constraint exposes ``is_feasible(X)`` and ``minimize(weights)``, which
returns a feasible set of least total weight.  Modular functions are
minimized exactly under all of them, so a ModMod iteration stays exact when
its argmin is restricted to the feasible family.
"""

import math

import numpy as np

from .core import check_mask, members, popcount, to_mask
from .dsopt import OptimizerOptions, _Driver


class InfeasibleError(ValueError):
    """No feasible set exists, or a start set violates the constraint."""


def _weights(weights, n):
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got {w.size}")
    return w


def _stable_order(w):
    return [int(j) for j in np.argsort(w, kind="stable")]


class CardinalityEq:
    """``|X| = k``."""

    def __init__(self, n, k):
        self.n, self.k = int(n), int(k)
        if not 0 <= self.k <= self.n:
            raise InfeasibleError(f"cannot pick {k} of {n} elements")

    def is_feasible(self, X):
        return popcount(X) == self.k

    def minimize(self, weights):
        w = _weights(weights, self.n)
        return to_mask(_stable_order(w)[: self.k])


class CardinalityAtMost:
    """``|X| <= k``."""

    def __init__(self, n, k):
        self.n, self.k = int(n), int(k)
        if self.k < 0:
            raise InfeasibleError("negative cardinality bound")

    def is_feasible(self, X):
        return popcount(X) <= self.k

    def minimize(self, weights):
        w = _weights(weights, self.n)
        chosen = [j for j in _stable_order(w) if w[j] < 0]
        return to_mask(chosen[: self.k])


class PartitionMatroid:
    """At most ``caps[i]`` elements from block ``parts[i]``.

    With ``basis=True`` exactly ``caps[i]`` elements are required.
    """

    def __init__(self, n, parts, caps, basis=False):
        self.n = int(n)
        self.parts = [sorted(int(j) for j in p) for p in parts]
        self.caps = [int(c) for c in caps]
        self.basis = bool(basis)
        flat = sorted(j for p in self.parts for j in p)
        if flat != list(range(self.n)):
            raise ValueError("parts must partition the ground set")
        if len(self.caps) != len(self.parts):
            raise ValueError("one cap per part is required")
        for p, c in zip(self.parts, self.caps):
            if c < 0 or c > len(p):
                raise InfeasibleError(f"cap {c} infeasible for a part of size {len(p)}")
        self._masks = [to_mask(p) for p in self.parts]

    def is_feasible(self, X):
        for pm, c in zip(self._masks, self.caps):
            k = popcount(X & pm)
            if k > c or (self.basis and k != c):
                return False
        return True

    def minimize(self, weights):
        w = _weights(weights, self.n)
        chosen = []
        for p, c in zip(self.parts, self.caps):
            order = sorted(p, key=lambda j: (w[j], j))
            if not self.basis:
                order = [j for j in order if w[j] < 0]
            chosen += order[:c]
        return to_mask(chosen)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


class SpanningTree:
    """Elements are the edges of a connected graph; feasible sets are spanning trees."""

    def __init__(self, edges, n_vertices=None):
        self.edges = [(int(u), int(v)) for u, v in edges]
        if not self.edges:
            raise ValueError("graph has no edges")
        nv = 1 + max(max(e) for e in self.edges)
        self.n_vertices = nv if n_vertices is None else int(n_vertices)
        self.n = len(self.edges)
        uf = _UnionFind(self.n_vertices)
        comps = self.n_vertices
        for u, v in self.edges:
            comps -= uf.union(u, v)
        if comps != 1:
            raise InfeasibleError("graph is disconnected")

    @classmethod
    def from_edge_list(cls, source):
        """Read ``"u v"`` lines (a path or an open file); element ``i`` is line ``i``."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            with open(source) as fh:
                text = fh.read()
        edges = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls(edges)

    def is_feasible(self, X):
        ids = members(X)
        if len(ids) != self.n_vertices - 1:
            return False
        uf = _UnionFind(self.n_vertices)
        return all(uf.union(*self.edges[i]) for i in ids)

    def minimize(self, weights):
        # Kruskal; ties by edge index
        w = _weights(weights, self.n)
        uf = _UnionFind(self.n_vertices)
        chosen = [i for i in _stable_order(w) if uf.union(*self.edges[i])]
        return to_mask(chosen)


class Knapsack:
    """``sum_{j in X} cost_j <= budget`` with nonnegative costs.

    Integer costs and budget are solved exactly by dynamic programming.
    Otherwise costs are scaled by ``resolution`` and rounded up while the
    budget is rounded down, so every returned set is truly feasible.
    """

    def __init__(self, costs, budget, resolution=1e3):
        self.costs = np.asarray(costs, dtype=float).ravel()
        self.n = self.costs.size
        self.budget = float(budget)
        if (self.costs < 0).any():
            raise ValueError("knapsack costs must be nonnegative")
        if self.budget < 0:
            raise InfeasibleError("negative budget")
        integral = np.all(self.costs == np.round(self.costs)) and self.budget == round(self.budget)
        scale = 1.0 if integral else float(resolution)
        self._icost = np.ceil(self.costs * scale - 1e-9).astype(np.int64)
        self._ibudget = int(math.floor(self.budget * scale + 1e-9))

    def is_feasible(self, X):
        return float(self.costs[members(X)].sum()) <= self.budget + 1e-9

    def minimize(self, weights):
        w = _weights(weights, self.n)
        items = [j for j in range(self.n) if w[j] < 0]
        c = self._icost
        B = min(self._ibudget, int(c[items].sum()) if items else 0)
        # best[b]: least weight with integer cost <= b
        best = np.zeros(B + 1)
        take = np.zeros((len(items), B + 1), dtype=bool)
        for r, j in enumerate(items):
            cj = int(c[j])
            if cj > B:
                continue
            cand = best.copy()
            cand[cj:] = best[: B + 1 - cj] + w[j]
            better = cand < best
            take[r] = better
            best = np.where(better, cand, best)
        chosen = []
        b = B
        for r in range(len(items) - 1, -1, -1):
            if take[r, b]:
                chosen.append(items[r])
                b -= int(c[items[r]])
        return to_mask(chosen)


def min_modular_constrained(m, constraint):
    """Feasible set minimizing the modular function ``m`` (offset ignored)."""
    if constraint.n != m.n:
        raise ValueError("constraint and function live on different ground sets")
    return constraint.minimize(m.weights)


def constrained_mod_mod(ds, constraint, opts=None):
    """ModMod with its modular argmin restricted to feasible sets.

    The stall phase only visits feasible neighbours, so ``LocalMin`` means no
    feasible single-element change improves.  With a vacuous constraint the
    trace is identical to :func:`~dsmin.dsopt.mod_mod`.
    """
    opts = opts if opts is not None else OptimizerOptions()
    if opts.start is None:
        start = constraint.minimize(np.zeros(constraint.n))
    else:
        start = check_mask(opts.start, ds.n)
    if not constraint.is_feasible(start):
        raise InfeasibleError("start set violates the constraint")
    driver = _Driver(
        ds,
        opts,
        "modmod",
        argmin=lambda mm: constraint.minimize(mm.weights),
        feasible=constraint.is_feasible,
    )
    return driver.run(start)


def parse_constraint(text, n):
    """Build a constraint from a compact string.

    ``eq:K``, ``atmost:K``, ``partition:0,1/2,3:1,1[:basis]``,
    ``tree:EDGEFILE`` and ``knapsack:c0,c1,...:BUDGET``.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "eq":
        return CardinalityEq(n, int(rest))
    if kind == "atmost":
        return CardinalityAtMost(n, int(rest))
    if kind == "partition":
        fields = rest.split(":")
        parts = [[int(x) for x in p.split(",") if x] for p in fields[0].split("/")]
        caps = [int(x) for x in fields[1].split(",")]
        return PartitionMatroid(n, parts, caps, basis=len(fields) > 2 and fields[2] == "basis")
    if kind == "tree":
        return SpanningTree.from_edge_list(rest)
    if kind == "knapsack":
        costs, budget = rest.rsplit(":", 1)
        return Knapsack([float(x) for x in costs.split(",")], float(budget))
    raise ValueError(f"unknown constraint {text!r}")
