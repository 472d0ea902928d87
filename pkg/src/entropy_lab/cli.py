"""Command line front end: ``entropy-lab {compute,check,fuzz,scan,oracle}``.

Exit codes: 0 success, 1 a bound or property was violated, 2 unreadable
input or configuration (including bad arguments), 3 input outside the
domain of the requested quantity.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import bounds, classical, io, operators, quantum
from .harness import oracles, properties, scans
from .harness.mutations import MUTATION_HELP, mutated
from .kernel import DomainError, NumericalFailure, ShapeError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3
SEED_ENV = "ENTROPY_LAB_SEED"


class InputError(Exception):
    """Argument combination or input file that cannot be used."""


# ---------------------------------------------------------------------------
# input helpers


def _load(paths: Sequence[str], count: int):
    if len(paths) != count:
        raise InputError(f"expected {count} input file(s), got {len(paths)}")
    return [io.load_payload(p) for p in paths]


def _as_operator(kind, arr):
    if kind == "distribution":
        return np.diag(arr)
    if kind == "operator":
        return arr
    raise InputError(f"expected a distribution or an operator, got a {kind}")


def _pair_of(payloads):
    """Two payloads as either two distributions or two operators."""
    (k1, a1), (k2, a2) = payloads
    if k1 == k2 == "distribution":
        return "classical", a1, a2
    return "quantum", _as_operator(k1, a1), _as_operator(k2, a2)


def _need_alpha(args):
    if args.alpha is None:
        raise InputError("this quantity needs --alpha")
    return args.alpha


def _single(args):
    ((kind, arr),) = _load(args.inputs, 1)
    return kind, arr


# ---------------------------------------------------------------------------
# compute


def _c_trace_distance(args):
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        return classical.trace_distance_classical(X, Y)
    return operators.trace_distance_quantum(operators.as_positive(X), operators.as_positive(Y))


def _c_entropy(family):
    def run(args):
        a = _need_alpha(args)
        kind, arr = _single(args)
        if kind == "distribution":
            fn = classical.tsallis_entropy if family == "tsallis" else classical.renyi_entropy
            return fn(arr, a)
        if kind == "joint":
            if family != "tsallis":
                raise InputError("joint inputs support the Tsallis entropy only")
            return classical.joint_tsallis_entropy(arr, a)
        fn = quantum.quantum_tsallis_entropy if family == "tsallis" else quantum.quantum_renyi_entropy
        return fn(arr, a)

    return run


def _c_tsallis_rel(args):
    a = _need_alpha(args)
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        return classical.tsallis_rel_entropy(X, Y, a)
    return quantum.quantum_tsallis_rel_entropy(X, Y, a)


def _c_renyi_rel(args):
    a = _need_alpha(args)
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        return classical.renyi_rel_entropy(X, Y, a)
    return quantum.quantum_renyi_rel_entropy(X, Y, a)


def _c_relative_entropy(args):
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        return classical.renyi_rel_entropy(X, Y, 1.0)
    return quantum.quantum_relative_entropy(X, Y)


def _c_f_divergence(limit: bool):
    def run(args):
        spec = classical.tsallis_f(_need_alpha(args))
        mode, X, Y = _pair_of(_load(args.inputs, 2))
        if mode == "classical" and not limit:
            return classical.f_divergence(X, Y, spec)
        if limit:
            return quantum.quantum_f_divergence_limit(X, Y, spec)
        return quantum.quantum_f_divergence(X, Y, spec)

    return run


def _c_joint(fn_name):
    def run(args):
        kind, J = _single(args)
        if kind != "joint":
            raise InputError(f"expected a joint distribution, got a {kind}")
        fn = getattr(classical, fn_name)
        if fn_name == "error_probability":
            return fn(J)
        return fn(J, _need_alpha(args))

    return run


def _c_min_prob(args):
    (k1, P), (k2, Q) = _load(args.inputs, 2)
    if not k1 == k2 == "distribution":
        raise InputError("minimal-probability needs two distributions (P then Q)")
    return classical.minimal_probability(Q, P)


QUANTITIES: Dict[str, Callable] = {
    "trace-distance": _c_trace_distance,
    "tsallis": _c_entropy("tsallis"),
    "renyi": _c_entropy("renyi"),
    "tsallis-rel": _c_tsallis_rel,
    "renyi-rel": _c_renyi_rel,
    "relative-entropy": _c_relative_entropy,
    "f-divergence": _c_f_divergence(False),
    "f-divergence-limit": _c_f_divergence(True),
    "conditional-tsallis": _c_joint("conditional_tsallis_entropy"),
    "error-probability": _c_joint("error_probability"),
    "minimal-probability": _c_min_prob,
}


def cmd_compute(args) -> int:
    value = QUANTITIES[args.quantity](args)
    print(io.format_value(value))
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def _k_pinsker(args, series=False):
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        X, Y = np.diag(X), np.diag(Y)
    return bounds.check_pinsker(X, Y, _need_alpha(args), n_terms=args.n_terms if series else None,
                                tolerance=args.tolerance)


def _k_renyi_pinsker(args):
    mode, X, Y = _pair_of(_load(args.inputs, 2))
    if mode == "classical":
        X, Y = np.diag(X), np.diag(Y)
    return bounds.check_renyi_pinsker(X, Y, _need_alpha(args), tolerance=args.tolerance)


def _k_thm3(args):
    (k1, P), (k2, Q) = _load(args.inputs, 2)
    if not k1 == k2 == "distribution":
        raise InputError("thm3-upper needs two distributions (P then Q)")
    return bounds.check_min_prob(P, Q, _need_alpha(args), tolerance=args.tolerance)


def _k_fano(args):
    kind, J = _single(args)
    if kind != "joint":
        raise InputError(f"fano needs a joint distribution, got a {kind}")
    return bounds.check_fano(J, _need_alpha(args), tolerance=args.tolerance)


def _k_states(checker):
    def run(args):
        a = _need_alpha(args)
        if args.inputs:
            mode, X, Y = _pair_of(_load(args.inputs, 2))
            if mode == "classical":
                X, Y = np.diag(X), np.diag(Y)
            return checker(a, rho=X, sigma=Y, tolerance=args.tolerance)
        if args.tau is None or args.dim is None:
            raise InputError("give two state files or both --tau and --dim")
        return checker(a, tau=args.tau, d=args.dim, tolerance=args.tolerance)

    return run


BOUND_CHECKS: Dict[str, Callable] = {
    "pinsker": lambda a: _k_pinsker(a),
    "pinsker-series": lambda a: _k_pinsker(a, series=True),
    "renyi-pinsker": _k_renyi_pinsker,
    "thm3-upper": _k_thm3,
    "fano": _k_fano,
    "fannes": _k_states(bounds.check_fannes),
    "yanagi": _k_states(bounds.check_yanagi),
}


def _render_report(rep: bounds.BoundReport, fmt: str) -> str:
    row = rep.to_row()
    row["satisfied"] = "n/a" if rep.satisfied is None else rep.satisfied
    if fmt == "json":
        return json.dumps(io.clean_for_json(row), default=io.json_default, sort_keys=False) + "\n"
    if fmt == "csv":
        return io.rows_to_csv([row])
    width = max(len(k) for k in row)
    return "".join(f"{k.ljust(width)}  {io.format_value(v) if not isinstance(v, str) else v}\n"
                   for k, v in row.items())


def cmd_check(args) -> int:
    rep = BOUND_CHECKS[args.bound](args)
    sys.stdout.write(_render_report(rep, args.format))
    return EXIT_VIOLATION if rep.satisfied is False else EXIT_OK


# ---------------------------------------------------------------------------
# fuzz


def _csv_numbers(text: str, cast):
    return tuple(cast(x) for x in text.split(",") if x.strip())


def _fuzz_config(args) -> properties.SamplerConfig:
    data = {}
    if args.config:
        data = {k: v for k, v in properties.SamplerConfig.from_toml(args.config).__dict__.items()}
    elif os.environ.get(SEED_ENV):
        try:
            data["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise properties.ConfigError(f"{SEED_ENV} must be an integer") from None
    if args.seed is not None:
        data["seed"] = args.seed
    if args.trials is not None:
        data["trials"] = args.trials
    if args.dims:
        data["dims"] = _csv_numbers(args.dims, int)
    if args.alphas:
        data["alphas"] = _csv_numbers(args.alphas, float)
    if args.tolerance is not None:
        data["tolerance"] = args.tolerance
    if args.properties:
        data["properties"] = _csv_numbers(args.properties, str)
    return properties.SamplerConfig.from_mapping(data)


def cmd_fuzz(args) -> int:
    cfg = _fuzz_config(args)
    if args.mutate:
        with mutated(args.mutate):
            result = properties.run_property_suite(cfg)
    else:
        result = properties.run_property_suite(cfg)
    if args.format == "json":
        text = result.summary_json()
    elif args.format == "csv":
        text = f"# seed={cfg.seed}\n" + result.summary_csv()
    else:
        rows = [s.as_dict() for s in result.stats]
        text = (f"seed: {cfg.seed}\ntrials per cell: {cfg.trials}\n"
                f"violations: {len(result.violations)}\n\n"
                + io.rows_to_table(rows, ["property", "cells", "trials", "samples", "violations", "min_slack"]))
    _emit(text, args.output)
    if args.violations_csv:
        with open(args.violations_csv, "w", encoding="utf-8") as fh:
            fh.write(result.violations_csv())
    return EXIT_OK if result.ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# scan


def _tau_grid(args):
    if args.tau_grid is None:
        return None
    return [float(x) for x in args.tau_grid.split(",") if x.strip()]


def cmd_scan(args) -> int:
    if args.scan == "fannes-comparison":
        rows = scans.fannes_comparison_scan(args.dim or 2, args.alpha or 0.5, _tau_grid(args))
        header = scans.FANNES_COLUMNS
    elif args.scan == "pinsker-tightness":
        rows = scans.pinsker_tightness_scan(args.alpha or 0.5, _tau_grid(args))
        header = scans.PINSKER_COLUMNS
    else:
        if args.inputs:
            mode, X, Y = _pair_of(_load(args.inputs, 2))
            rows = scans.alpha_limit_scan(X, Y, quantum_inputs=mode == "quantum")
        else:
            rows = scans.alpha_limit_scan(np.array([0.7, 0.2, 0.1]), np.array([0.3, 0.3, 0.4]))
        header = scans.ALPHA_LIMIT_COLUMNS
    _emit(io.rows_to_csv(rows, header), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    res = oracles.oracle_maximizer(args.q0, args.tau, args.alpha, args.N, args.grid_steps)
    inst = oracles.extremal_min_prob_instance(args.q0, args.tau, args.alpha, args.N)
    bound = bounds.min_prob_upper_bound(args.q0, args.tau, args.alpha)
    row = {"q0": args.q0, "tau": args.tau, "alpha": args.alpha, "N": args.N,
           "grid_steps": args.grid_steps, "oracle": res.value, "bound": bound,
           "gap": bound - res.value, "explicit_pair": inst.value, "attained": inst.attained}
    if args.format == "json":
        text = json.dumps(io.clean_for_json(row), default=io.json_default) + "\n"
    elif args.format == "csv":
        text = io.rows_to_csv([row])
    else:
        text = io.rows_to_table([row])
    _emit(text, args.output)
    return EXIT_OK


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parser


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {s}")
    return v


SCAN_HELP = """\
scan tables (CSV, one row per grid point):
  fannes-comparison  tau,fannes,yanagi,relative_difference
                     (relative_difference = (yanagi - fannes) / fannes,
                      empty where the comparison bound does not apply)
  alpha-limit        alpha,distance,tsallis,renyi,limit,tsallis_error,
                     renyi_error,error_ratio at alpha = 1 -+ 10^-k, k = 2..6
  pinsker-tightness  tau,divergence,bound,series_quadratic,ratio for the
                     symmetric two-point pair
"""


def build_parser() -> argparse.ArgumentParser:
    """Top-level parser; each verb parser is reachable as ``p.verbs[verb]``."""
    p = argparse.ArgumentParser(prog="entropy-lab", description="Tsallis and Renyi divergences, "
                                "their quantum versions and continuity bounds.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("compute", help="evaluate one quantity")
    c.add_argument("quantity", choices=sorted(QUANTITIES))
    c.add_argument("inputs", nargs="*", help="distribution, joint or operator files (JSON or CSV)")
    c.add_argument("--alpha", type=_positive_float)
    c.set_defaults(func=cmd_compute)

    k = sub.add_parser("check", help="compare a measured divergence with a bound")
    k.add_argument("bound", choices=sorted(BOUND_CHECKS))
    k.add_argument("inputs", nargs="*")
    k.add_argument("--alpha", type=_positive_float)
    k.add_argument("--tau", type=float, help="trace distance (fannes/yanagi without state files)")
    k.add_argument("--dim", type=int, help="dimension (fannes/yanagi without state files)")
    k.add_argument("--n-terms", type=int, default=1, help="series terms for pinsker-series")
    k.add_argument("--tolerance", type=float, default=bounds.DEFAULT_TOLERANCE)
    k.add_argument("--format", choices=["table", "csv", "json"], default="table")
    k.set_defaults(func=cmd_check)

    f = sub.add_parser("fuzz", help="run the randomized property suite")
    f.add_argument("--config", help="TOML file with seed, dims, alphas, trials, tolerance, properties")
    f.add_argument("--seed", type=int, help=f"overrides the config and ${SEED_ENV}")
    f.add_argument("--trials", type=int)
    f.add_argument("--dims", help="comma separated")
    f.add_argument("--alphas", help="comma separated")
    f.add_argument("--tolerance", type=float)
    f.add_argument("--properties", help="comma separated property ids")
    f.add_argument("--mutate", choices=sorted(MUTATION_HELP),
                   help="run with a deliberate corruption: "
                        + "; ".join(f"{k}: {v}" for k, v in MUTATION_HELP.items()))
    f.add_argument("--violations-csv", help="write violation records here")
    f.add_argument("--format", choices=["table", "csv", "json"], default="table")
    f.add_argument("--output", "-o")
    f.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("scan", help="write a scan table as CSV", epilog=SCAN_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("scan", choices=["fannes-comparison", "alpha-limit", "pinsker-tightness"])
    s.add_argument("inputs", nargs="*", help="two distributions or operators for alpha-limit")
    s.add_argument("--dim", type=int)
    s.add_argument("--alpha", type=_positive_float)
    s.add_argument("--tau-grid", help="comma separated tau values; an empty string gives an empty table")
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_scan)

    o = sub.add_parser("oracle", help="grid search against the minimal-probability bound")
    o.add_argument("--q0", type=float, required=True)
    o.add_argument("--tau", type=float, required=True)
    o.add_argument("--alpha", type=_positive_float, required=True)
    o.add_argument("--N", type=int, required=True)
    o.add_argument("--grid-steps", type=int, default=40)
    o.add_argument("--format", choices=["table", "csv", "json"], default="table")
    o.add_argument("--output", "-o")
    o.set_defaults(func=cmd_oracle)
    p.verbs = {"compute": c, "check": k, "fuzz": f, "scan": s, "oracle": o}
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] in parser.verbs:
        # file operands may sit on either side of the options
        args = parser.verbs[argv[0]].parse_intermixed_args(argv[1:])
    else:
        args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, properties.ConfigError, InputError) as exc:
        print(f"entropy-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ShapeError, NumericalFailure) as exc:
        print(f"entropy-lab: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"entropy-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
