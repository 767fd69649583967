"""Minimizing a difference of submodular functions ``v = f - g``.

Three majorize-minimize procedures share one driver:

* SubSup replaces ``g`` by a chain subgradient and minimizes ``f - h`` exactly.
* SupSub replaces ``f`` by a modular upper bound and maximizes ``g - m``.
* ModMod replaces both and minimizes a modular function.

Every step goes through an acceptance guard, so the objective never
increases.  When a step fails to make progress, the driver looks at the
single-element neighbours of the current set.  For each improving one it
reruns the step with a permutation and upper bound that are tight at that
neighbour, which guarantees a descent.  If no neighbour improves, the
current set is a certified local minimum.
"""

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import subgradient, upper_bounds
from .core import (
    TOL,
    CachedFunction,
    ConvergenceError,
    DSFunction,
    SumFunction,
    check_mask,
    format_set,
    full_mask,
    members,
)
from .sfm import minimize_submodular
from .submax import local_search_max, maximize_submodular

STRATEGIES = ("random", "ggains", "vgains", "fgains")
POLICIES = ("bound1", "bound2", "both", "alternate")
ALGORITHMS = ("subsup", "supsub", "modmod")

LOCAL_MIN = "LocalMin"
ITERATION_CAP = "IterationCap"
EPSILON_STALL = "EpsilonStall"

_ALIASES = {
    "both-parallel": "both",
    "both_parallel": "both",
    "1": "bound1",
    "2": "bound2",
    "sub_sup": "subsup",
    "sup_sub": "supsub",
    "mod_mod": "modmod",
}


def _normalize(name, allowed, what):
    key = str(name).strip().lower()
    key = _ALIASES.get(key, key)
    if key not in allowed:
        raise ValueError(f"unknown {what} {name!r}; expected one of {', '.join(allowed)}")
    return key


@dataclass
class OptimizerOptions:
    """Knobs shared by the three procedures.

    ``epsilon > 0`` accepts a step from a negative value ``v`` only if it
    reaches ``v * (1 + epsilon)``.  ``start=None`` means the empty set (or a
    feasible default under a constraint).  ``exhaustive_retry`` makes the
    stall phase try boundary permutations for every element, not only for
    the improving neighbours.
    """

    epsilon: float = 0.0
    max_iterations: int = 100
    permutation_strategy: str = "vgains"
    upper_bound_policy: str = "both"
    seed: int = 0
    start: object = None
    exhaustive_retry: bool = False

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be nonnegative")
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be positive")
        self.max_iterations = int(self.max_iterations)
        self.permutation_strategy = _normalize(self.permutation_strategy, STRATEGIES, "strategy")
        self.upper_bound_policy = _normalize(self.upper_bound_policy, POLICIES, "bound policy")


@dataclass
class OptimizationTrace:
    """Iterates ``(set, value)`` (the first is the start), call counts and certificate.

    ``iteration_log`` holds one dict per outer iteration with its wall time,
    oracle calls and whether the stall phase ran.
    """

    algorithm: str
    iterates: list = field(default_factory=list)
    oracle_calls_f: int = 0
    oracle_calls_g: int = 0
    converged: bool = False
    certificate: str = ITERATION_CAP
    iteration_log: list = field(default_factory=list)

    @property
    def set(self):
        return self.iterates[-1][0]

    @property
    def value(self):
        return self.iterates[-1][1]

    @property
    def values(self):
        return [v for _, v in self.iterates]

    @property
    def wall_time(self):
        return [it["seconds"] for it in self.iteration_log]

    @property
    def accepted_steps(self):
        return len(self.iterates) - 1

    def to_dict(self):
        d = asdict(self)
        d["iterates"] = [{"set": format_set(X), "mask": hex(X), "value": v} for X, v in self.iterates]
        return d

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


# -- permutations ------------------------------------------------------------

def _sorted_by(js, key, descending):
    sign = -1.0 if descending else 1.0
    return sorted(js, key=lambda j: (sign * key[j], j))


def _orders(f, g, X, strategy, rng):
    """Inner (a permutation of ``X``) and outer (of ``V \\ X``) orders."""
    n = f.n
    inside = members(X)
    outside = members(full_mask(n) & ~X)
    if strategy == "random":
        return list(rng.permutation(inside).astype(int)), list(rng.permutation(outside).astype(int))
    if strategy == "ggains":
        funcs, descending = [(1.0, g)], True
    elif strategy == "vgains":
        funcs, descending = [(1.0, f), (-1.0, g)], False
    else:
        funcs, descending = [(1.0, f)], False

    def val(Y):
        return sum(c * h(Y) for c, h in funcs)

    vX = val(X)
    key = {}
    for j in inside:
        key[j] = vX - val(X & ~(1 << j))
    for j in outside:
        key[j] = val(X | (1 << j)) - vX
    return [int(j) for j in _sorted_by(inside, key, descending)], [
        int(j) for j in _sorted_by(outside, key, descending)
    ]


def permutation_heuristic(ds, X, strategy="vgains", seed=0):
    """Permutation of ``V`` whose chain passes through ``X``.

    ``random`` shuffles ``X`` and ``V \\ X`` with a seeded generator.  The
    gain strategies order ``X`` by the gain ``h(j | X - j)`` and ``V \\ X`` by
    ``h(j | X)``: ``ggains`` uses ``g`` in descending order, ``vgains`` and
    ``fgains`` use ``v`` and ``f`` in ascending order (largest descent first).
    Ties go to the smaller index.
    """
    X = check_mask(X, ds.n)
    strategy = _normalize(strategy, STRATEGIES, "strategy")
    inner, outer = _orders(ds.f, ds.g, X, strategy, np.random.default_rng(seed))
    return tuple(inner + outer)


# -- certification and bounds ------------------------------------------------

def certify_local_min(ds, X, tol=TOL):
    """True iff no single addition or removal lowers ``v(X)`` by more than ``tol``."""
    X = check_mask(X, ds.n)
    vX = ds(X)
    return all(ds(X ^ (1 << j)) >= vX - tol for j in range(ds.n))


def iteration_bound(ds, epsilon, first_value):
    """Bound on accepted steps after the first iterate of an ``epsilon`` run.

    With ``m = first_value < 0`` and ``M`` the closed-form lower bound on
    ``min v``, values shrink by ``(1 + epsilon)`` per step, so at most
    ``ceil(log(|M| / |m|) / log(1 + epsilon))`` further steps fit.  Returns 1
    when ``m >= 0``.
    """
    from .decomp import lower_bound_2

    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    m = float(first_value)
    if m >= 0:
        return 1
    M = lower_bound_2(ds)
    if abs(M) <= abs(m):
        return 0
    return int(math.ceil(math.log(abs(M) / abs(m)) / math.log1p(epsilon) - 1e-12))


# -- driver ------------------------------------------------------------------

class _Driver:
    def __init__(self, ds, opts, algorithm, argmin=None, feasible=None):
        self.ds = ds
        self.opts = opts
        self.algorithm = algorithm
        self.f = CachedFunction(ds.f)
        self.g = CachedFunction(ds.g)
        self.rng = np.random.default_rng(opts.seed)
        self.argmin = argmin if argmin is not None else (lambda m: m.argmin(strict=True))
        self.feasible = feasible
        self._shift_g = None

    def v(self, X):
        return self.f(X) - self.g(X)

    def threshold(self, vX):
        return vX * (1.0 + self.opts.epsilon) if vX < 0 else vX

    def bounds_for(self, t):
        p = self.opts.upper_bound_policy
        if p == "bound1":
            return (1,)
        if p == "bound2":
            return (2,)
        if p == "alternate":
            return (1,) if t % 2 == 1 else (2,)
        return (1, 2)

    # each proposal returns a list of candidate sets
    def propose(self, X, t, forced=None):
        if self.algorithm == "supsub":
            return self._supsub(X, t, self.bounds_for(t), local=False)
        if forced is None:
            inner, outer = _orders(self.f, self.g, X, self.opts.permutation_strategy, self.rng)
        else:
            inner, outer = forced
        h = subgradient(self.g, X, inner + outer)
        if self.algorithm == "subsup":
            inner_fn = SumFunction([(1.0, self.ds.f), (-1.0, h)])
            try:
                res = minimize_submodular(inner_fn)
            except ConvergenceError as exc:
                raise ConvergenceError(str(exc), best=self.trace) from exc
            return [res.minimizer]
        m1, m2 = upper_bounds(self.f, X)
        bounds = {1: m1, 2: m2}
        which = (1, 2) if forced is not None else self.bounds_for(t)
        return [self.argmin(bounds[b] - h) for b in which]

    def _supsub(self, X, t, which, local):
        m1, m2 = upper_bounds(self.f, X)
        bounds = {1: m1, 2: m2}
        out = []
        for b in which:
            m = bounds[b]
            inner_fn = SumFunction([(1.0, self.g), (-1.0, m)], constant=self._shift(m))
            if local:
                S, _ = local_search_max(inner_fn, X)
            else:
                S, _ = maximize_submodular(inner_fn, seed=self.opts.seed + t)
            out.append(S)
        return out

    def _shift(self, m):
        # makes g - m nonnegative; the maximizers are shift invariant
        if self._shift_g is None:
            V = full_mask(self.g.n)
            gV = self.g(V)
            low = self.g(0) + sum(min(gV - self.g(V & ~(1 << j)), 0.0) for j in range(self.g.n))
            self._shift_g = max(0.0, -low)
        return abs(m.offset) + float(np.maximum(m.weights, 0).sum()) + self._shift_g

    def best(self, cands):
        scored = sorted({(self.v(c), c) for c in cands})
        v, c = scored[0]
        return c, v

    def retry(self, X, vX, t):
        """Stall phase.  Returns ``(set, value)`` on descent, else a certificate."""
        thr = self.threshold(vX)
        n = self.ds.n
        nbr = []
        for j in range(n):
            Y = X ^ (1 << j)
            if self.feasible is not None and not self.feasible(Y):
                continue
            nbr.append((self.v(Y), j))
        improving = [j for val, j in sorted(nbr) if val < vX - TOL]
        js = list(improving)
        if self.opts.exhaustive_retry:
            js += [j for j in range(n) if j not in improving]
        if self.algorithm == "supsub":
            which = sorted({1 if X >> j & 1 else 2 for j in js})
            attempts = [("local", which, None)] if which else []
        else:
            inner, outer = _orders(self.f, self.g, X, self.opts.permutation_strategy, self.rng)
            attempts = []
            for j in js:
                if X >> j & 1:
                    attempts.append(("perm", [k for k in inner if k != j] + [j], outer))
                else:
                    attempts.append(("perm", inner, [j] + [k for k in outer if k != j]))
        for kind, a, b in attempts:
            if kind == "local":
                cands = self._supsub(X, t, a, local=True)
            else:
                cands = self.propose(X, t, forced=(a, b))
            c, vc = self.best(cands)
            if vc < vX - TOL and vc <= thr:
                return c, vc
        return EPSILON_STALL if improving else LOCAL_MIN

    def run(self, start):
        opts = self.opts
        self.trace = trace = OptimizationTrace(self.algorithm)
        base_f, base_g = self.ds.f.calls, self.ds.g.calls
        X = check_mask(start, self.ds.n)
        vX = self.v(X)
        trace.iterates.append((X, vX))
        for t in range(1, opts.max_iterations + 1):
            t0 = time.perf_counter()
            cf, cg = self.ds.f.calls, self.ds.g.calls
            c, vc = self.best(self.propose(X, t))
            thr = self.threshold(vX)
            stalled = not (vc < vX - TOL and vc <= thr)
            outcome = None
            if not stalled:
                X, vX = c, vc
                trace.iterates.append((X, vX))
            else:
                # equal-value moves are not taken; the stall phase either
                # finds a descent from X or certifies X
                outcome = self.retry(X, vX, t)
                if isinstance(outcome, tuple):
                    X, vX = outcome
                    trace.iterates.append((X, vX))
            trace.iteration_log.append(
                {
                    "seconds": time.perf_counter() - t0,
                    "calls_f": self.ds.f.calls - cf,
                    "calls_g": self.ds.g.calls - cg,
                    "stalled": stalled,
                }
            )
            if isinstance(outcome, str):
                trace.converged = True
                trace.certificate = outcome
                break
        trace.oracle_calls_f = self.ds.f.calls - base_f
        trace.oracle_calls_g = self.ds.g.calls - base_g
        return trace


def _run(ds, opts, algorithm):
    if opts is None:
        opts = OptimizerOptions()
    start = 0 if opts.start is None else opts.start
    return _Driver(ds, opts, algorithm).run(start)


def sub_sup(ds, opts=None):
    """Submodular-supermodular procedure: ``argmin f - h^g`` by exact SFM each step."""
    return _run(ds, opts, "subsup")


def sup_sub(ds, opts=None):
    """Supermodular-submodular procedure: ``argmax g - m^f`` by double greedy each step."""
    return _run(ds, opts, "supsub")


def mod_mod(ds, opts=None):
    """Modular-modular procedure: ``argmin m^f - h^g`` by taking negative net weights."""
    return _run(ds, opts, "modmod")


_PROCEDURES = {"subsup": sub_sup, "supsub": sup_sub, "modmod": mod_mod}


def minimize(ds, algorithm="modmod", opts=None):
    """Dispatch to one of the three procedures by name."""
    return _PROCEDURES[_normalize(algorithm, ALGORITHMS, "algorithm")](ds, opts)


def multi_start(ds, algorithm="modmod", opts=None, seeds=(0,), jobs=1):
    """Run one procedure for several seeds and keep the best trace.

    Ties in the final value go to the lexicographically smaller set.
    """
    opts = opts if opts is not None else OptimizerOptions()

    def one(seed):
        o = OptimizerOptions(**{**asdict(opts), "seed": int(seed)})
        return minimize(ds, algorithm, o)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            traces = list(pool.map(one, seeds))
    else:
        traces = [one(s) for s in seeds]
    return min(traces, key=lambda tr: (tr.value, members(tr.set)))

