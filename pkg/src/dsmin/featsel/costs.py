"""Feature cost models: modular, grouped square-root, and per-source counting."""

from dataclasses import dataclass, field

import numpy as np

from ..core import ModularFunction, SetFunction, members


class GroupSqrtFunction(SetFunction):
    """``sum_i sqrt(m(A ∩ S_i))`` for a partition ``groups`` and ``m >= 0``."""

    def __init__(self, groups, m):
        groups = np.asarray(groups, dtype=int)
        super().__init__(len(groups))
        self.groups = groups
        self.m = np.asarray(m, dtype=float)
        if (self.m < 0).any():
            raise ValueError("m must be nonnegative")

    def _value(self, mask):
        ids = members(mask)
        if not ids:
            return 0.0
        sums = np.bincount(self.groups[ids], weights=self.m[ids])
        return float(np.sqrt(sums).sum())

    def _chain(self, order):
        sums = np.zeros(self.groups.max() + 1)
        total = 0.0
        out = [0.0]
        for j in order:
            gi = self.groups[j]
            old = sums[gi]
            sums[gi] += self.m[j]
            total += np.sqrt(sums[gi]) - np.sqrt(old)
            out.append(total)
        return out


class SourceCountFunction(SetFunction):
    """``sum_i c_i min(|A ∩ S_i|, 1)``: pay once per source that is touched."""

    def __init__(self, groups, c):
        groups = np.asarray(groups, dtype=int)
        super().__init__(len(groups))
        self.groups = groups
        self.c = np.asarray(c, dtype=float)
        if (self.c < 0).any():
            raise ValueError("source costs must be nonnegative")

    def _value(self, mask):
        ids = members(mask)
        return float(self.c[np.unique(self.groups[ids])].sum()) if ids else 0.0


@dataclass
class CostModel:
    """``lam * c(A)`` for ``kind`` in ``modular``, ``sqrt_group``, ``source_count``.

    ``weights`` is the per-element ``m`` (modular and sqrt_group) or the
    per-group ``c`` (source_count); ``groups`` maps elements to groups.
    """

    kind: str = "modular"
    lam: float = 0.0
    groups: np.ndarray = None
    weights: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def base(self, n):
        """The unscaled cost ``c`` as a set function on ``n`` elements."""
        if self.kind == "modular":
            w = np.ones(n) if self.weights is None else np.asarray(self.weights, dtype=float)
            return ModularFunction(w)
        if self.kind == "sqrt_group":
            return GroupSqrtFunction(self.groups, self.weights)
        if self.kind == "source_count":
            return SourceCountFunction(self.groups, self.weights)
        raise ValueError(f"unknown cost kind {self.kind!r}")

    def function(self, n):
        """``lam * c`` (a :class:`ModularFunction` for the modular kind)."""
        c = self.base(n)
        return c * self.lam

    def with_lambda(self, lam):
        return CostModel(self.kind, float(lam), self.groups, self.weights, dict(self.meta))


def synthetic_groups(n, n_groups=8, seed=0, low=0.5, high=1.5):
    """``n`` elements dealt into ``n_groups`` near-equal contiguous blocks, ``m ~ U(low, high)``."""
    rng = np.random.default_rng(seed)
    groups = (np.arange(n) * n_groups) // n
    return groups, rng.uniform(low, high, n)


def sqrt_group_cost(n, lam=1.0, n_groups=8, seed=0):
    groups, m = synthetic_groups(n, n_groups, seed)
    return CostModel("sqrt_group", lam, groups, m, {"n_groups": n_groups, "seed": seed})


def source_count_cost(groups, c=None, lam=1.0):
    groups = np.asarray(groups, dtype=int)
    c = np.ones(groups.max() + 1) if c is None else np.asarray(c, dtype=float)
    return CostModel("source_count", lam, groups, c)
