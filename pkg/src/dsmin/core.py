"""Ground sets, set-function oracles and brute-force reference routines.

Subsets of the ground set ``V = {0, ..., n-1}`` are plain Python ``int``
bitmasks: bit ``j`` set means element ``j`` is a member.  Python integers are
unbounded, so the same representation covers toy fixtures and the ~120
element feature-selection problems.
"""

import json
import math
import threading

import numpy as np

TOL = 1e-9
MAX_EXHAUSTIVE_N = 20


class DomainError(ValueError):
    """A set refers to elements outside the ground set."""


class SizeError(ValueError):
    """An exhaustive routine was asked to enumerate too large a ground set."""


class ConstructionError(ValueError):
    """Invalid parameters for a set-function constructor."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its cycle cap.

    ``best`` carries the best-so-far result (routine specific).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


# -- bitmask helpers ---------------------------------------------------------

def to_mask(elements):
    """Bitmask of an iterable of element indices (an int passes through)."""
    if isinstance(elements, (int, np.integer)):
        return int(elements)
    m = 0
    for j in elements:
        j = int(j)
        if j < 0:
            raise DomainError(f"negative element index {j}")
        m |= 1 << j
    return m


def members(mask):
    """Sorted list of element indices in ``mask``."""
    mask = int(mask)
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def full_mask(n):
    return (1 << n) - 1


def popcount(mask):
    return mask.bit_count()


def format_set(mask):
    return "{" + ",".join(str(j) for j in members(mask)) + "}"


def check_mask(mask, n):
    mask = to_mask(mask)
    if mask < 0 or mask >> n:
        raise DomainError(f"set {mask:#x} is not a subset of a ground set of size {n}")
    return mask


# -- oracles -----------------------------------------------------------------

class SetFunction:
    """Value oracle ``2^V -> R`` with an evaluation counter.

    Subclasses implement ``_value(mask)`` and may override ``_chain(order)``
    when prefix values of an ordering can be computed incrementally.

    ``calls`` counts oracle evaluations.  With ``cache=True`` repeated
    evaluations of the same set are served from a memo and not counted.
    """

    def __init__(self, n, cache=False):
        if n < 1:
            raise ConstructionError("ground set must have at least one element")
        self.n = int(n)
        self._cache = {} if cache else None
        self._lock = threading.Lock()
        self._calls = 0

    @property
    def calls(self):
        return self._calls

    def reset_calls(self):
        with self._lock:
            self._calls = 0

    def _count(self, k=1):
        with self._lock:
            self._calls += k

    def __call__(self, X):
        mask = check_mask(X, self.n)
        if self._cache is not None:
            hit = self._cache.get(mask)
            if hit is not None:
                return hit
        value = float(self._value(mask))
        self._count()
        if self._cache is not None:
            self._cache[mask] = value
        return value

    evaluate = __call__

    def gain(self, j, X):
        """``f(X + j) - f(X)``; zero when ``j`` is already in ``X``."""
        mask = check_mask(X, self.n)
        if not 0 <= j < self.n:
            raise DomainError(f"element {j} out of range")
        if mask >> j & 1:
            return 0.0
        return self(mask | (1 << j)) - self(mask)

    def eval_chain(self, order):
        """Values on the chain ``∅ ⊂ {o1} ⊂ {o1,o2} ⊂ ...`` of ``order``.

        Returns an array of ``len(order) + 1`` values.
        """
        order = [int(j) for j in order]
        if any(not 0 <= j < self.n for j in order):
            raise DomainError("chain order has elements outside the ground set")
        if self._cache is not None:
            prefixes = _prefix_masks(order)
            if all(p in self._cache for p in prefixes):
                return np.array([self._cache[p] for p in prefixes])
            vals = np.asarray(self._chain(order), dtype=float)
            misses = sum(p not in self._cache for p in prefixes)
            self._count(misses)
            for p, v in zip(prefixes, vals):
                self._cache[p] = float(v)
            return vals
        vals = np.asarray(self._chain(order), dtype=float)
        self._count(len(order) + 1)
        return vals

    def _value(self, mask):
        raise NotImplementedError

    def _chain(self, order):
        return [self._value(p) for p in _prefix_masks(order)]

    # arithmetic helpers used throughout the optimizers
    def __add__(self, other):
        return SumFunction([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return SumFunction([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return SumFunction([(-1.0, self)])

    def __mul__(self, c):
        return SumFunction([(float(c), self)])

    __rmul__ = __mul__


def _prefix_masks(order):
    out = [0]
    m = 0
    for j in order:
        m |= 1 << j
        out.append(m)
    return out


class ModularFunction(SetFunction):
    """``m(X) = offset + sum_{j in X} weights[j]``."""

    def __init__(self, weights, offset=0.0, cache=False):
        w = np.asarray(weights, dtype=float).ravel()
        super().__init__(len(w), cache=cache)
        self.weights = w
        self.offset = float(offset)

    def _value(self, mask):
        w = self.weights
        return math.fsum([self.offset] + [w[j] for j in members(mask)])

    def _chain(self, order):
        steps = self.weights[np.asarray(order, dtype=int)]
        return self.offset + np.concatenate(([0.0], np.cumsum(steps)))

    def value(self, X):
        """Evaluate without touching the call counter (bounds are free to query)."""
        return self._value(check_mask(X, self.n))

    def argmin(self, strict=True):
        """Smallest minimizer: every element with negative weight.

        ``strict=False`` also takes zero weights (largest minimizer).
        """
        w = self.weights
        sel = np.flatnonzero(w < 0) if strict else np.flatnonzero(w <= 0)
        return to_mask(sel)

    def __add__(self, other):
        if isinstance(other, ModularFunction):
            return ModularFunction(self.weights + other.weights, self.offset + other.offset)
        return super().__add__(other)

    def __sub__(self, other):
        if isinstance(other, ModularFunction):
            return ModularFunction(self.weights - other.weights, self.offset - other.offset)
        return super().__sub__(other)

    def __neg__(self):
        return ModularFunction(-self.weights, -self.offset)

    def __mul__(self, c):
        return ModularFunction(self.weights * c, self.offset * c)

    __rmul__ = __mul__

    def __repr__(self):
        return f"ModularFunction(weights={self.weights.tolist()}, offset={self.offset})"


class SumFunction(SetFunction):
    """Linear combination ``sum_i c_i f_i(X) + constant``."""

    def __init__(self, terms, constant=0.0, cache=False):
        terms = [(float(c), f) for c, f in terms]
        ns = {f.n for _, f in terms}
        if len(ns) != 1:
            raise ConstructionError("summands live on different ground sets")
        super().__init__(ns.pop(), cache=cache)
        self.terms = terms
        self.constant = float(constant)

    def _value(self, mask):
        return self.constant + sum(c * f(mask) for c, f in self.terms)

    def _chain(self, order):
        total = np.full(len(order) + 1, self.constant)
        for c, f in self.terms:
            total += c * f.eval_chain(order)
        return total


class TableFunction(SetFunction):
    """Exhaustively tabulated function; ``values[mask]`` is ``f(mask)``."""

    def __init__(self, n, values, cache=False):
        super().__init__(n, cache=cache)
        v = np.asarray(values, dtype=float)
        if v.shape != (1 << self.n,):
            raise ConstructionError(f"expected {1 << self.n} values, got shape {v.shape}")
        self.values = v

    def _value(self, mask):
        return self.values[mask]

    def _chain(self, order):
        return self.values[_prefix_masks(order)]

    @classmethod
    def from_function(cls, f):
        return cls(f.n, to_table(f))

    @classmethod
    def from_json(cls, source):
        """Load ``{"n": int, "values": {mask: value}}``.

        Keys are bitmasks written as decimal integers (``"5"`` is ``{0, 2}``)
        or binary literals (``"0b101"``).  Missing subsets are an error.
        """
        if hasattr(source, "read"):
            data = json.load(source)
        elif isinstance(source, dict):
            data = source
        else:
            with open(source) as fh:
                data = json.load(fh)
        n = int(data["n"])
        table = np.full(1 << n, np.nan)
        for key, val in data["values"].items():
            mask = int(key, 0)
            if not 0 <= mask < (1 << n):
                raise DomainError(f"key {key!r} outside ground set of size {n}")
            table[mask] = float(val)
        if np.isnan(table).any():
            missing = int(np.flatnonzero(np.isnan(table))[0])
            raise ConstructionError(f"table is missing subset {missing}")
        return cls(n, table)

    def to_json(self, path=None):
        data = {"n": self.n, "values": {str(m): float(v) for m, v in enumerate(self.values)}}
        if path is not None:
            with open(path, "w") as fh:
                json.dump(data, fh, indent=1)
        return data


class CallableFunction(SetFunction):
    """Wrap ``fn(mask) -> float``."""

    def __init__(self, n, fn, cache=False):
        super().__init__(n, cache=cache)
        self.fn = fn

    def _value(self, mask):
        return self.fn(mask)


class CachedFunction(SetFunction):
    """Memoizing view of ``base``; only misses reach (and are counted by) ``base``."""

    def __init__(self, base):
        super().__init__(base.n, cache=True)
        self.base = base

    def _value(self, mask):
        return self.base(mask)

    def _chain(self, order):
        return self.base.eval_chain(order)


class ZeroFunction(ModularFunction):
    def __init__(self, n):
        super().__init__(np.zeros(n))


class DSFunction:
    """Difference ``v(X) = f(X) - g(X)`` of two set functions on one ground set."""

    def __init__(self, f, g):
        if f.n != g.n:
            raise ConstructionError("f and g live on different ground sets")
        self.f = f
        self.g = g
        self.n = f.n

    def __call__(self, X):
        return self.f(X) - self.g(X)

    evaluate = __call__

    @property
    def calls(self):
        return self.f.calls, self.g.calls

    def reset_calls(self):
        self.f.reset_calls()
        self.g.reset_calls()

    def as_function(self):
        """``v`` as a single :class:`SetFunction`."""
        return SumFunction([(1.0, self.f), (-1.0, self.g)])


# -- library of submodular functions -----------------------------------------

class CutFunction(SetFunction):
    """Undirected weighted cut ``sum_{(u,v)} w_uv [|{u,v} ∩ X| = 1]``."""

    def __init__(self, n, edges, weights=None, cache=False):
        super().__init__(n, cache=cache)
        edges = [(int(u), int(v)) for u, v in edges]
        if weights is None:
            weights = np.ones(len(edges))
        weights = np.asarray(weights, dtype=float)
        if len(weights) != len(edges):
            raise ConstructionError("one weight per edge required")
        if (weights < 0).any():
            raise ConstructionError("cut weights must be nonnegative")
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ConstructionError(f"edge ({u}, {v}) outside ground set")
        self.edges = edges
        self.weights = weights

    def _value(self, mask):
        return sum(w for (u, v), w in zip(self.edges, self.weights)
                   if (mask >> u ^ mask >> v) & 1)


_CONCAVE = {
    "sqrt": np.sqrt,
    "log1p": np.log1p,
}


class ConcaveModular(SetFunction):
    """``phi(sum_{j in X} w_j)`` for concave ``phi`` and ``w >= 0``.

    ``phi`` is ``"sqrt"``, ``"log1p"`` or ``"min"`` (truncation at ``tau``).
    """

    def __init__(self, weights, phi="sqrt", tau=None, cache=False):
        w = np.asarray(weights, dtype=float).ravel()
        super().__init__(len(w), cache=cache)
        if (w < 0).any():
            raise ConstructionError("concave-of-modular needs nonnegative weights")
        if phi == "min":
            if tau is None or tau < 0:
                raise ConstructionError("phi='min' needs a threshold tau >= 0")
            self._phi = lambda s: min(s, tau)
        elif phi in _CONCAVE:
            self._phi = _CONCAVE[phi]
        else:
            raise ConstructionError(f"unknown concave function {phi!r}")
        self.weights = w
        self.phi = phi
        self.tau = tau

    def _value(self, mask):
        return float(self._phi(math.fsum(self.weights[j] for j in members(mask))))

    def _chain(self, order):
        sums = np.concatenate([[0.0], np.cumsum(self.weights[order])])
        return [float(self._phi(s)) for s in sums]


class FacilityLocation(SetFunction):
    """``sum_j max_{i in X} M[i, j]`` with rows indexed by ground elements."""

    def __init__(self, similarity, cache=False):
        M = np.asarray(similarity, dtype=float)
        if M.ndim != 2:
            raise ConstructionError("similarity must be a matrix")
        if (M < 0).any():
            raise ConstructionError("facility location needs nonnegative similarities")
        super().__init__(M.shape[0], cache=cache)
        self.M = M

    def _value(self, mask):
        idx = members(mask)
        if not idx:
            return 0.0
        return float(self.M[idx].max(axis=0).sum())

    def _chain(self, order):
        best = np.zeros(self.M.shape[1])
        out = [0.0]
        for j in order:
            np.maximum(best, self.M[j], out=best)
            out.append(float(best.sum()))
        return out


class SetCover(SetFunction):
    """Weighted coverage: total weight of items covered by the chosen sets."""

    def __init__(self, covers, item_weights=None, cache=False):
        covers = [sorted({int(i) for i in c}) for c in covers]
        super().__init__(len(covers), cache=cache)
        n_items = 1 + max((max(c) for c in covers if c), default=-1)
        if item_weights is None:
            item_weights = np.ones(n_items)
        item_weights = np.asarray(item_weights, dtype=float)
        if len(item_weights) < n_items:
            raise ConstructionError("item_weights shorter than the item universe")
        if (item_weights < 0).any():
            raise ConstructionError("coverage weights must be nonnegative")
        self.covers = covers
        self.item_weights = item_weights
        self._cover_masks = [to_mask(c) for c in covers]

    def _value(self, mask):
        covered = 0
        for j in members(mask):
            covered |= self._cover_masks[j]
        return math.fsum(self.item_weights[i] for i in members(covered))


def random_coverage(n, n_items=None, density=0.3, seed=0):
    rng = np.random.default_rng(seed)
    n_items = n_items or 2 * n
    covers = [np.flatnonzero(rng.random(n_items) < density) for _ in range(n)]
    return SetCover(covers, rng.uniform(0.5, 2.0, n_items))


def make_standard(kind, **params):
    """Construct a library submodular function by name.

    ``kind`` is one of ``"cut"``, ``"concave"``, ``"cardinality"``,
    ``"facility_location"``, ``"set_cover"`` or ``"random_coverage"``;
    ``params`` are forwarded to the matching constructor.
    """
    try:
        if kind == "cut":
            return CutFunction(params["n"], params["edges"], params.get("weights"))
        if kind == "concave":
            return ConcaveModular(params["weights"], params.get("phi", "sqrt"), params.get("tau"))
        if kind == "cardinality":
            return ConcaveModular(np.ones(params["n"]), params.get("phi", "sqrt"), params.get("tau"))
        if kind == "facility_location":
            return FacilityLocation(params["similarity"])
        if kind == "set_cover":
            return SetCover(params["covers"], params.get("item_weights"))
        if kind == "random_coverage":
            return random_coverage(params["n"], params.get("n_items"),
                                   params.get("density", 0.3), params.get("seed", 0))
    except KeyError as exc:
        raise ConstructionError(f"{kind!r} needs parameter {exc.args[0]!r}") from None
    raise ConstructionError(f"unknown function kind {kind!r}")


def random_submodular(n, seed=0, modular_shift=True):
    """Random normalized submodular function, tabulated.

    A nonnegative mixture of a cut, a concave-of-modular term, a coverage and
    a facility-location term, optionally plus a random modular shift (which
    makes the function non-monotone and sign-indefinite).
    """
    rng = np.random.default_rng(seed)
    parts = []
    m = int(rng.integers(n, 2 * n + 1)) if n > 1 else 0
    edges = [tuple(rng.choice(n, 2, replace=False)) for _ in range(m)]
    parts.append(CutFunction(n, edges, rng.uniform(0, 1, m)))
    phi = ["sqrt", "log1p", "min"][rng.integers(3)]
    w = rng.uniform(0, 2, n)
    parts.append(ConcaveModular(w, phi, tau=float(w.sum() / 2)))
    parts.append(random_coverage(n, 2 * n, 0.3, seed=int(rng.integers(1 << 31))))
    parts.append(FacilityLocation(rng.uniform(0, 1, (n, 3))))
    coef = rng.uniform(0, 1, len(parts))
    table = sum(c * to_table(p) for c, p in zip(coef, parts))
    if modular_shift:
        shift = rng.normal(0, 1, n)
        table = table + _modular_table(shift)
    table = table - table[0]
    return TableFunction(n, table)


def _modular_table(weights):
    n = len(weights)
    masks = np.arange(1 << n)
    table = np.zeros(1 << n)
    for j in range(n):
        table += weights[j] * ((masks >> j) & 1)
    return table


# -- exhaustive routines -----------------------------------------------------

def to_table(f):
    """All ``2^n`` values of ``f`` indexed by bitmask (``n <= 20``)."""
    if f.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"refusing to tabulate 2^{f.n} subsets")
    if isinstance(f, TableFunction):
        return f.values.copy()
    return np.array([f(m) for m in range(1 << f.n)])


def verify_submodular(f, tol=TOL):
    """Exhaustive submodularity check (``n <= 20``).

    Uses the pairwise form ``f(X+i) + f(X+j) >= f(X+i+j) + f(X)`` over all
    ``X`` and ``i, j`` outside ``X``, which is equivalent to diminishing
    returns over all nested pairs.
    """
    if f.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"exhaustive check refused for n={f.n} > {MAX_EXHAUSTIVE_N}")
    T = to_table(f)
    masks = np.arange(1 << f.n)
    for i in range(f.n):
        bi = 1 << i
        for j in range(i + 1, f.n):
            bj = 1 << j
            X = masks[(masks & (bi | bj)) == 0]
            d = T[X | bi] + T[X | bj] - T[X | bi | bj] - T[X]
            if d.min() < -tol:
                return False
    return True


def is_monotone(f, tol=TOL):
    """Exhaustive check that all gains are ``>= -tol``."""
    T = to_table(f)
    masks = np.arange(1 << f.n)
    for j in range(f.n):
        X = masks[(masks >> j & 1) == 0]
        if (T[X | (1 << j)] - T[X]).min() < -tol:
            return False
    return True


def brute_force_minimize(f):
    """Exact minimizer by enumeration; ties go to the smallest bitmask."""
    if f.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"brute force refused for n={f.n} > {MAX_EXHAUSTIVE_N}")
    T = to_table(f)
    k = int(np.argmin(T))
    return k, float(T[k])


def brute_force_maximize(f):
    if f.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"brute force refused for n={f.n} > {MAX_EXHAUSTIVE_N}")
    T = to_table(f)
    k = int(np.argmax(T))
    return k, float(T[k])
