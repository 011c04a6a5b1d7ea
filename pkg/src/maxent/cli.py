"""Command-line front end.

Exit codes: 0 success (or verdict true), 1 verdict false / not converged,
2 usage or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import catalog
from .certify import DEFAULT_TOL, certify_generators, certify_slices
from .generators import sets_for
from .lambda_sim import SimConfig, SimulationError, evolve, read_config
from .solver import SolveOptions, find_max_entangled
from .states import partial_trace, read_state, von_neumann_entropy, write_state

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("maxent")


class UsageError(Exception):
    pass


def _parse_params(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"parameter {key!r} needs a numeric value, got {value!r}")
    return out


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"invalid dims {text!r}")
    if not dims or any(d < 2 for d in dims):
        raise UsageError(f"dims must be a comma-separated list of integers >= 2, got {text!r}")
    return dims


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_construct(args) -> int:
    params = _parse_params(args.param)
    try:
        entry = catalog.build(args.name, **params)
    except KeyError as exc:
        raise UsageError(exc.args[0])
    except ValueError as exc:
        raise UsageError(str(exc))
    report = certify_generators(entry.state, entry.generator_sets(), args.tol)
    if args.out:
        write_state(entry.state, args.out)
    print(f"{entry.name}: residual {report.residual!r} (generators: auto)")
    return EXIT_OK


def cmd_certify(args) -> int:
    try:
        state = read_state(args.state)
        sets = sets_for(state.dims, args.generators)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc))
    report = certify_generators(state, sets, args.tol)
    out = report.to_json()
    out["generators"] = args.generators
    if report.complete:
        out["slices"] = certify_slices(state, args.tol).to_json()
    _emit(out)
    return EXIT_OK if report.verdict else EXIT_FALSE


def cmd_entropy(args) -> int:
    try:
        state = read_state(args.state)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc))
    rows = []
    for k, n in enumerate(state.dims):
        s = von_neumann_entropy(partial_trace(state, k))
        rows.append({"factor": k, "entropy": s, "max_entropy": math.log(n)})
    _emit(rows)
    return EXIT_OK


def cmd_solve(args) -> int:
    dims = _parse_dims(args.dims)
    try:
        sets = sets_for(dims, args.generators)
        opts = SolveOptions(restarts=args.restarts, seed=args.seed, max_iters=args.max_iters,
                            objective_tol=args.objective_tol, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    result = find_max_entangled(dims, sets, opts)
    payload = result.to_json()
    payload["dims"] = dims
    payload["generators"] = args.generators
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if args.state_out:
        write_state(result.best_state, args.state_out)
    print(f"best objective {result.best_objective!r} converged={result.converged}")
    return EXIT_OK if result.converged else EXIT_FALSE


def cmd_simulate(args) -> int:
    try:
        config = read_config(args.config) if args.config else SimConfig()
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid config: {exc}")
    try:
        traj = evolve(config)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        traj.write_csv(args.out)
    print(f"final fidelity_final {float(traj['fidelity_final'][-1])!r} at t={float(traj.times[-1])!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="certification tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output file")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="maxent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="write a catalog state")
    c.add_argument("name", help=f"one of: {', '.join(catalog.names())}")
    c.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    c.set_defaults(func=cmd_construct)

    gen_choices = ["auto", "pauli", "spin", "sun"]
    c = sub.add_parser("certify", parents=[common], help="certify a state file")
    c.add_argument("state")
    c.add_argument("--generators", choices=gen_choices, default="auto")
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("entropy", parents=[common], help="reduced entropy of each factor")
    c.add_argument("state")
    c.set_defaults(func=cmd_entropy)

    c = sub.add_parser("solve", parents=[common], help="search for a maximally entangled state")
    c.add_argument("--dims", required=True, help="comma-separated factor dimensions")
    c.add_argument("--generators", choices=gen_choices, default="sun")
    c.add_argument("--restarts", type=int, default=10)
    c.add_argument("--max-iters", type=int, default=20000)
    c.add_argument("--objective-tol", type=float, default=1e-16)
    c.add_argument("--workers", type=int, default=1, help="parallel restarts")
    c.add_argument("--state-out", default=None, help="also write the best state file")
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("simulate", parents=[common], help="integrate the Lambda-atom cavity model")
    c.add_argument("--config", default=None, help="SimConfig JSON (defaults if omitted)")
    c.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
