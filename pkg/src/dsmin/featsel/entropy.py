"""Entropy estimates (in bits) of feature subsets of a categorical dataset.

The joint configuration of ``X_A`` is tracked as a compressed integer key
per row, so only configurations that actually occur are counted.  Laplace
smoothing adds ``alpha`` to every one of the ``K = prod(arities)`` cells;
the cells that never occur share one closed-form term.
"""

import math
import threading
import warnings
from collections import OrderedDict

import numpy as np

from ..core import SetFunction, members

K_LIMIT = 1e12


class SmoothingDroppedWarning(UserWarning):
    """The cell count overflowed, so smoothing was skipped for one estimate."""


def _compress(key, n_keys, col, arity):
    new = key * arity + col
    present = np.zeros(n_keys * arity, dtype=bool)
    present[new] = True
    ids = np.cumsum(present) - 1
    return ids[new], int(ids[-1]) + 1


def _smoothed_entropy(counts, total, alpha, K):
    """Entropy in bits of ``(counts + alpha) / (total + alpha K)`` over ``K`` cells."""
    counts = counts[counts > 0]
    if total <= 0:
        return 0.0
    if alpha == 0:
        p = counts / total
        return float(-(p * np.log2(p)).sum())
    Z = total + alpha * K
    p = (counts + alpha) / Z
    h = -(p * np.log2(p)).sum()
    rest = K - counts.size
    if rest > 0:
        q = alpha / Z
        h -= rest * q * math.log2(q)
    return float(h)


class EntropyModel:
    """Shared estimator for ``H(X_A)`` and ``H(X_A | C)`` on one dataset.

    Keys of recently evaluated subsets are memoized, so ``A + j`` costs one
    column pass when ``A`` was seen.  ``dropped`` counts estimates where the
    smoothing term was skipped because ``K > 1e12``.
    """

    def __init__(self, data, smoothing=1.0, cache_size=256):
        if smoothing < 0:
            raise ValueError("smoothing must be nonnegative")
        self.data = data
        self.alpha = float(smoothing)
        self.cache_size = cache_size
        self._keys = OrderedDict()
        self._lock = threading.Lock()
        self.dropped = 0
        y = data.y
        self.class_counts = np.bincount(y, minlength=data.n_classes)

    def _lookup(self, mask):
        with self._lock:
            hit = self._keys.get(mask)
            if hit is not None:
                self._keys.move_to_end(mask)
            return hit

    def _store(self, mask, entry):
        with self._lock:
            self._keys[mask] = entry
            if len(self._keys) > self.cache_size:
                self._keys.popitem(last=False)

    def key(self, mask):
        """``(row keys, number of distinct configurations)`` of ``X_A``."""
        if mask == 0:
            return np.zeros(self.data.N, dtype=np.int64), 1
        hit = self._lookup(mask)
        if hit is not None:
            return hit
        ids = members(mask)
        base, rest = 0, ids
        for j in reversed(ids):
            if self._lookup(mask ^ (1 << j)) is not None:
                base, rest = mask ^ (1 << j), [j]
                break
        key, d = self.key(base) if base else (np.zeros(self.data.N, dtype=np.int64), 1)
        for j in rest:
            key, d = _compress(key, d, self.data.columns[j], int(self.data.arities[j]))
        self._store(mask, (key, d))
        return key, d

    def chain_keys(self, order):
        key, d = np.zeros(self.data.N, dtype=np.int64), 1
        yield key, d
        for j in order:
            key, d = _compress(key, d, self.data.columns[j], int(self.data.arities[j]))
            yield key, d

    def cells(self, mask):
        K = 1
        for j in members(mask):
            K *= int(self.data.arities[j])
        return K

    def _alpha(self, K):
        if self.alpha > 0 and K > K_LIMIT:
            self.dropped += 1
            warnings.warn("cell count above 1e12: smoothing skipped", SmoothingDroppedWarning, stacklevel=3)
            return 0.0
        return self.alpha

    def joint_from_key(self, key, d, K):
        return _smoothed_entropy(np.bincount(key, minlength=d), self.data.N, self._alpha(K), K)

    def conditional_from_key(self, key, d, K):
        C = self.data.n_classes
        table = np.bincount(key * C + self.data.y, minlength=d * C).reshape(d, C)
        alpha = self._alpha(K)
        N = self.data.N
        h = 0.0
        for c in range(C):
            Nc = self.class_counts[c]
            if Nc:
                h += Nc / N * _smoothed_entropy(table[:, c], Nc, alpha, K)
        return h

    def joint(self, mask):
        key, d = self.key(mask)
        return self.joint_from_key(key, d, self.cells(mask))

    def conditional(self, mask):
        key, d = self.key(mask)
        return self.conditional_from_key(key, d, self.cells(mask))


def _model(data, smoothing):
    return data if isinstance(data, EntropyModel) else EntropyModel(data, smoothing)


def joint_entropy(data, A, smoothing=1.0):
    """``H(X_A)`` in bits; ``A`` is a bitmask or an iterable of feature indices."""
    from ..core import to_mask

    return _model(data, smoothing).joint(to_mask(A))


def conditional_entropy(data, A, smoothing=1.0):
    """``H(X_A | C) = sum_c p(c) H(X_A | C = c)`` with per-class smoothed joints."""
    from ..core import to_mask

    return _model(data, smoothing).conditional(to_mask(A))


class _EntropyFunction(SetFunction):
    def __init__(self, model, cache=False):
        super().__init__(model.data.n, cache=cache)
        self.model = model

    def _chain(self, order):
        out = []
        K = 1
        for i, (key, d) in enumerate(self.model.chain_keys(order)):
            if i:
                K *= int(self.model.data.arities[order[i - 1]])
            out.append(self._from_key(key, d, K))
        return out


class JointEntropy(_EntropyFunction):
    """``A -> H(X_A)`` as a set-function oracle."""

    def _value(self, mask):
        return self.model.joint(mask)

    def _from_key(self, key, d, K):
        return self.model.joint_from_key(key, d, K)


class ConditionalEntropy(_EntropyFunction):
    """``A -> H(X_A | C)`` as a set-function oracle."""

    def _value(self, mask):
        return self.model.conditional(mask)

    def _from_key(self, key, d, K):
        return self.model.conditional_from_key(key, d, K)
