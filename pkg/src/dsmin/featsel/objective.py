"""Mutual-information feature-selection objectives and greedy baselines."""

import numpy as np

from ..core import DSFunction, ModularFunction, SetFunction, SumFunction
from .entropy import ConditionalEntropy, EntropyModel, JointEntropy


def _entropy_model(data, smoothing):
    return data if isinstance(data, EntropyModel) else EntropyModel(data, smoothing)


def factored_conditional(model):
    """Modular ``A -> sum_{j in A} H(X_j | C)``."""
    return ModularFunction([model.conditional(1 << j) for j in range(model.data.n)])


def mi_objective(data, factored=False, cost=None, smoothing=1.0):
    """DS form of ``-(I(X_A; C) - lam c(A))``.

    ``f = H(X_A | C) + lam c(A)`` (or the factored sum of ``H(X_j | C)``) and
    ``g = H(X_A)``; minimizing ``f - g`` maximizes the regularized information.
    """
    model = _entropy_model(data, smoothing)
    n = model.data.n
    cond = factored_conditional(model) if factored else ConditionalEntropy(model)
    if cost is not None and cost.lam != 0:
        c = cost.function(n)
        if isinstance(cond, ModularFunction) and isinstance(c, ModularFunction):
            f = cond + c
        else:
            f = SumFunction([(1.0, cond), (1.0, c)])
    else:
        f = cond
    return DSFunction(f, JointEntropy(model))


def mi_function(data, factored=False, smoothing=1.0):
    """``A -> H(X_A) - H(X_A | C)`` (factored: ``- sum_j H(X_j | C)``) to maximize."""
    model = _entropy_model(data, smoothing)
    cond = factored_conditional(model) if factored else ConditionalEntropy(model)
    return SumFunction([(1.0, JointEntropy(model)), (-1.0, cond)])


def greedy_order(objective, budget, force=False):
    """Forward greedy on a set function to maximize.

    Adds the element with the largest gain (ties by index) until ``budget``
    elements are chosen or, unless ``force``, the best gain is ``<= 0``.
    Returns ``(mask, order)``.
    """
    n = objective.n
    budget = min(int(budget), n)
    X, order = 0, []
    fX = objective(0)
    for _ in range(budget):
        best_j, best_v = -1, -np.inf
        for j in range(n):
            if X >> j & 1:
                continue
            v = objective(X | (1 << j))
            if v > best_v:
                best_j, best_v = j, v
        if best_j < 0 or (not force and best_v - fX <= 0):
            break
        X |= 1 << best_j
        fX = best_v
        order.append(best_j)
    return X, order


def greedy_select(objective, budget, force=False):
    """Greedy set of at most ``budget`` elements; see :func:`greedy_order`."""
    return greedy_order(objective, budget, force)[0]


class NegatedCost(SetFunction):
    """``objective(A) - cost(A)``: a helper for greedy with costs."""

    def __init__(self, objective, cost):
        super().__init__(objective.n)
        self.objective = objective
        self.cost = cost

    def _value(self, mask):
        return self.objective(mask) - self.cost(mask)

