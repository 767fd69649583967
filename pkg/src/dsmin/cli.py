"""Command-line front end: ``dsmin minimize | bounds | decompose | featsel | selftest``.

Output is ``key=value`` text.  Exit codes: 0 success, 1 bad input, 2 the
optimizer stopped at its iteration cap.
"""

import argparse
import json
import sys

import numpy as np

from . import core
from .core import DSFunction, TableFunction, ZeroFunction, format_set, make_standard, random_submodular

EXIT_OK, EXIT_USAGE, EXIT_CAP = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x):
    """``%g`` formatting with negative zero shown as ``0``."""
    x = float(x)
    return f"{0.0 if x == 0 else x:g}"


def _parse_value(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if ";" in text:
        return [_parse_value(t) for t in text.split(";") if t]
    return text


def load_function(spec, n=None):
    """A JSON file (a table or ``{"kind": ..., params}``) or ``kind:key=val,...``.

    Generator kinds: ``random`` (``n``, ``seed``), ``zero`` (``n``),
    ``modular`` (``weights=1;-2;...``) and every library kind whose
    parameters are scalars or ``;``-separated lists.
    """
    if spec is None:
        if n is None:
            raise UsageError("missing function")
        return ZeroFunction(n)
    if spec.endswith(".json"):
        try:
            with open(spec) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {spec}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{spec} is not valid JSON: {exc}") from None
        if "kind" in data:
            params = {k: v for k, v in data.items() if k != "kind"}
            return make_standard(data["kind"], **params)
        return TableFunction.from_json(data)
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"bad parameter {item!r} in {spec!r}")
        params[key.strip()] = _parse_value(val.strip())
    if kind == "random":
        return random_submodular(int(params.get("n", n or 8)), int(params.get("seed", 0)))
    if kind == "zero":
        return ZeroFunction(int(params.get("n", n or 1)))
    if kind == "modular":
        w = params.get("weights")
        w = [w] if not isinstance(w, list) else w
        return core.ModularFunction(w, params.get("offset", 0.0))
    if kind == "":
        raise UsageError(f"cannot interpret function spec {spec!r}")
    return make_standard(kind, **params)


def load_ds(args):
    if args.f is None and args.g is None:
        raise UsageError("need --f and/or --g")
    f = load_function(args.f) if args.f else None
    g = load_function(args.g, n=f.n if f else None) if args.g else None
    if f is None:
        f = ZeroFunction(g.n)
    if g is None:
        g = ZeroFunction(f.n)
    if f.n != g.n:
        raise UsageError(f"--f has n={f.n} but --g has n={g.n}")
    return DSFunction(f, g)


def _print(**items):
    for k, v in items.items():
        print(f"{k}={v}")


# -- subcommands -------------------------------------------------------------

def cmd_minimize(args):
    from .constraints import constrained_mod_mod, parse_constraint
    from .dsopt import OptimizerOptions, iteration_bound, minimize, multi_start

    ds = load_ds(args)
    opts = OptimizerOptions(
        epsilon=args.epsilon, max_iterations=args.max_iterations,
        permutation_strategy=args.strategy, upper_bound_policy=args.bound_policy,
        seed=args.seed, start=core.to_mask(_parse_set(args.start)) if args.start else None,
    )
    if args.constraint:
        if args.alg != "modmod":
            raise UsageError("--constraint is only supported with --alg modmod")
        trace = constrained_mod_mod(ds, parse_constraint(args.constraint, ds.n), opts)
    elif args.restarts > 1:
        seeds = range(args.seed, args.seed + args.restarts)
        trace = multi_start(ds, args.alg, opts, seeds, jobs=args.jobs)
    else:
        trace = minimize(ds, args.alg, opts)
    print(f"set={format_set(trace.set)} value={fmt(trace.value)} cert={trace.certificate}")
    _print(iterations=trace.accepted_steps, calls_f=trace.oracle_calls_f, calls_g=trace.oracle_calls_g)
    if args.epsilon > 0 and len(trace.iterates) > 1:
        bound = iteration_bound(ds, args.epsilon, trace.iterates[1][1])
        _print(iteration_bound=bound, steps_after_first=trace.accepted_steps - 1)
    if args.trace:
        trace.to_json(args.trace)
    return EXIT_OK if trace.converged else EXIT_CAP


def _parse_set(text):
    text = text.strip().strip("{}")
    return [int(t) for t in text.split(",") if t.strip()]


def cmd_bounds(args):
    from .decomp import lower_bound_1, lower_bound_2

    ds = load_ds(args)
    _print(lower_bound_1=fmt(lower_bound_1(ds)), lower_bound_2=fmt(lower_bound_2(ds)))
    if ds.n <= core.MAX_EXHAUSTIVE_N:
        X, v = core.brute_force_minimize(ds.as_function())
        _print(brute_force=fmt(v), brute_force_set=format_set(X))
    return EXIT_OK


def cmd_decompose(args):
    from .decomp import brute_force_alpha, monotone_ds, totally_normalize

    ds = load_ds(args)
    sf, sg = totally_normalize(ds.f), totally_normalize(ds.g)
    k = sf.k.weights - sg.k.weights
    _print(
        k_f=";".join(fmt(x) for x in sf.k.weights),
        k_g=";".join(fmt(x) for x in sg.k.weights),
        v_plus=format_set(core.to_mask(np.flatnonzero(k >= 0))),
    )
    if ds.n <= 12:
        _print(alpha=fmt(brute_force_alpha(ds.as_function())))
    if args.out:
        if ds.n > core.MAX_EXHAUSTIVE_N:
            raise UsageError("--out writes full tables and needs n <= 20")
        mono = monotone_ds(ds)
        payload = {
            "f": TableFunction.from_function(mono.f).to_json(),
            "g": TableFunction.from_function(mono.g).to_json(),
        }
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
        _print(written=args.out)
    return EXIT_OK


def cmd_featsel(args):
    from .featsel.experiment import load_config, run_experiment, write_csv, write_json

    if not args.config:
        raise UsageError("featsel needs --config")
    try:
        config = load_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad config: {exc}") from None
    if not isinstance(config, dict) or "dataset" not in config:
        raise UsageError("config must be an object with a 'dataset' key")
    if args.seed is not None:
        config["seed"] = args.seed
    if args.jobs:
        config["jobs"] = args.jobs
    try:
        rows = run_experiment(config)
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    if args.out:
        write_csv(rows, args.out)
        if args.json:
            write_json(rows, args.json)
        _print(rows=len(rows), written=args.out)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_all

    ok = True
    for name, passed, detail in run_all(args.seed, args.count):
        print(f"check={name} status={'pass' if passed else 'FAIL'} {detail}".rstrip())
        ok &= passed
    return EXIT_OK if ok else EXIT_USAGE


# -- parser ------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="dsmin", description="Minimize differences of submodular functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def ds_args(sp):
        sp.add_argument("--f", help="submodular f: JSON file or generator spec such as random:n=8,seed=1")
        sp.add_argument("--g", help="submodular g, same formats as --f")

    sp = sub.add_parser("minimize", help="run SubSup, SupSub or ModMod")
    ds_args(sp)
    sp.add_argument("--alg", default="modmod", choices=["subsup", "supsub", "modmod"])
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.add_argument("--strategy", default="vgains", choices=["random", "ggains", "vgains", "fgains"])
    sp.add_argument("--bound-policy", default="both", choices=["bound1", "bound2", "both", "alternate"])
    sp.add_argument("--constraint", help="eq:K, atmost:K, partition:0,1/2,3:1,1[:basis], tree:FILE, knapsack:c,...:B")
    sp.add_argument("--start", help="start set such as {0,2}")
    sp.add_argument("--max-iterations", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=1, help="number of seeds to try")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--trace", help="write the trace JSON here")
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("bounds", help="print the two lower bounds (and brute force when n <= 20)")
    ds_args(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("decompose", help="totally normalized split and monotone rewrite")
    ds_args(sp)
    sp.add_argument("--out", help="write the monotone pair as JSON tables")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("featsel", help="run a feature-selection sweep from a JSON config")
    sp.add_argument("--config")
    sp.add_argument("--out", help="csv path (default stdout)")
    sp.add_argument("--json", help="also write rows as JSON")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--jobs", type=int)
    sp.set_defaults(func=cmd_featsel)

    sp = sub.add_parser("selftest", help="small randomized property checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, core.ConstructionError, core.DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
