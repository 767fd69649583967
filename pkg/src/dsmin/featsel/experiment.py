"""Feature-selection sweeps: DS procedures over a lambda grid against greedy baselines.

A config is a dict (or JSON file) with these keys; all but ``dataset`` have
defaults:

``dataset``        ``mushroom``, ``adult`` or ``path::format``
``algorithms``     subset of GrF, GrNF, SubSup, SupSub, ModMod
``cost``           ``{"kind": "modular"}``, ``{"kind": "sqrt_group", "n_groups": 8, "seed": 0}``
                   or ``{"kind": "source_count"}`` (one unit per source attribute)
``lambdas``        lambda grid for the DS procedures (and penalized greedy)
``budgets``        list of sizes, ``"matched"`` (sizes the DS runs produced) or ``null``
``greedy``         ``"budget"`` (forced size, pure MI) or ``"penalized"`` (MI - lambda c)
``smoothing``      Laplace constant of the entropy estimates
``folds``, ``seed``, ``max_iterations``, ``strategy``, ``bound_policy``, ``jobs``
``timing``         fill ``wall_ms`` (off by default so reruns are byte identical)
"""

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor

from ..core import members
from ..dsopt import OptimizerOptions, minimize
from .costs import CostModel, source_count_cost, sqrt_group_cost
from .data import load_named
from .entropy import ConditionalEntropy, EntropyModel, JointEntropy
from .nb import train_eval_nb
from .objective import NegatedCost, factored_conditional, greedy_order, mi_objective

DS_ALGORITHMS = {"SubSup": "subsup", "SupSub": "supsub", "ModMod": "modmod"}
GREEDY = ("GrF", "GrNF")
COLUMNS = [
    "dataset", "algorithm", "lambda", "budget", "set_bitmask_hex", "set_size", "cost",
    "accuracy", "oracle_calls_f", "oracle_calls_g", "wall_ms",
]

DEFAULTS = {
    "algorithms": ["GrF", "GrNF", "SubSup", "SupSub", "ModMod"],
    "cost": {"kind": "modular"},
    "lambdas": [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2],
    "budgets": "matched",
    "greedy": "budget",
    "smoothing": 0.0,
    "folds": 10,
    "seed": 0,
    "max_iterations": 100,
    "strategy": "vgains",
    "bound_policy": "both",
    "jobs": 1,
    "timing": False,
}


def load_config(path):
    with open(path) as fh:
        return json.load(fh)


def _cost_model(spec, data):
    kind = spec.get("kind", "modular")
    if kind == "modular":
        return CostModel("modular", 1.0)
    if kind == "sqrt_group":
        return sqrt_group_cost(data.n, 1.0, spec.get("n_groups", 8), spec.get("seed", 0))
    if kind == "source_count":
        return source_count_cost(data.groups, spec.get("c"), 1.0)
    raise ValueError(f"unknown cost kind {kind!r}")


def _row(cfg, data, algorithm, lam, budget, mask, cost_fn, calls, seconds):
    return {
        "dataset": data.name,
        "algorithm": algorithm,
        "lambda": "" if lam is None else f"{lam:g}",
        "budget": "" if budget is None else str(budget),
        "set_bitmask_hex": hex(mask),
        "set_size": len(members(mask)),
        "cost": f"{cost_fn(mask):.6g}",
        "accuracy": f"{train_eval_nb(data, mask, cfg['folds'], cfg['seed']):.6f}",
        "oracle_calls_f": calls[0],
        "oracle_calls_g": calls[1],
        "wall_ms": f"{seconds * 1000:.1f}" if cfg["timing"] else "",
    }


def _ds_task(cfg, data, cost, name, lam):
    model = EntropyModel(data, cfg["smoothing"])
    ds = mi_objective(model, False, cost.with_lambda(lam), cfg["smoothing"])
    opts = OptimizerOptions(
        max_iterations=cfg["max_iterations"], permutation_strategy=cfg["strategy"],
        upper_bound_policy=cfg["bound_policy"], seed=cfg["seed"],
    )
    t0 = time.perf_counter()
    tr = minimize(ds, DS_ALGORITHMS[name], opts)
    return tr.set, (tr.oracle_calls_f, tr.oracle_calls_g), time.perf_counter() - t0


def _greedy_task(cfg, data, cost, name, lam, budget):
    model = EntropyModel(data, cfg["smoothing"])
    joint = JointEntropy(model)
    cond = factored_conditional(model) if name == "GrF" else ConditionalEntropy(model)
    mi = joint - cond
    t0 = time.perf_counter()
    if lam is None:
        mask, _ = greedy_order(mi, budget, force=True)
    else:
        penalty = cost.with_lambda(lam).function(data.n)
        mask, _ = greedy_order(NegatedCost(mi, penalty), data.n)
    return mask, (cond.calls, joint.calls), time.perf_counter() - t0


def run_experiment(config, data=None):
    """Run the sweep described by ``config``; returns rows (dicts keyed by :data:`COLUMNS`).

    Rows are ordered by algorithm (config order), then lambda, then budget.
    """
    cfg = {**DEFAULTS, **config}
    if data is None:
        data = load_named(cfg["dataset"])
    cost = _cost_model(cfg["cost"], data)
    base_cost = cost.base(data.n)
    algs = list(cfg["algorithms"])
    unknown = [a for a in algs if a not in DS_ALGORITHMS and a not in GREEDY]
    if unknown:
        raise ValueError(f"unknown algorithms {unknown}")
    lambdas = [float(x) for x in cfg["lambdas"]]

    def pool_map(fn, items):
        if cfg["jobs"] > 1:
            with ThreadPoolExecutor(cfg["jobs"]) as pool:
                return list(pool.map(lambda it: fn(*it), items))
        return [fn(*it) for it in items]

    results = {}
    ds_jobs = [(cfg, data, cost, a, lam) for a in algs if a in DS_ALGORITHMS for lam in lambdas]
    for job, res in zip(ds_jobs, pool_map(_ds_task, ds_jobs)):
        results[(job[3], job[4], None)] = res

    greedy_jobs = []
    for a in (a for a in algs if a in GREEDY):
        if cfg["greedy"] == "penalized":
            greedy_jobs += [(cfg, data, cost, a, lam, None) for lam in lambdas]
        else:
            budgets = cfg["budgets"]
            if budgets == "matched":
                budgets = sorted({len(members(r[0])) for r in results.values()}) or [1]
            greedy_jobs += [(cfg, data, cost, a, None, int(b)) for b in budgets]
    for job, res in zip(greedy_jobs, pool_map(_greedy_task, greedy_jobs)):
        results[(job[3], job[4], job[5])] = res

    rows = []
    for a in algs:
        keys = sorted(
            (k for k in results if k[0] == a),
            key=lambda k: (math.inf if k[1] is None else k[1], -1 if k[2] is None else k[2]),
        )
        for k in keys:
            mask, calls, secs = results[k]
            rows.append(_row(cfg, data, a, k[1], k[2], mask, base_cost, calls, secs))
    return rows


def write_csv(rows, path_or_file):
    """Write result rows with the fixed column order."""
    if hasattr(path_or_file, "write"):
        _write(rows, path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(rows, fh)


def _write(rows, fh):
    w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def write_json(rows, path):
    with open(path, "w") as fh:
        json.dump(rows, fh, indent=1)


def parse_mask(hex_text):
    return int(hex_text, 16)
