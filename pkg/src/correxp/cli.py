"""Command line front end.

Subcommands: `exponents` (single-point table as JSON), `sweep` (CSV grid),
`simulate` (Monte Carlo likelihood-ratio testing), and `validate` (the
self-check suite).  All numeric output is locale-independent with 12
significant digits, and identical inputs produce byte-identical files.

Exit statuses: 0 success, 1 validation failure, 2 usage error, 3 I/O
error, 4 numerical instability.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import validate as validate_mod
from .classical import heterodyne_exponent, homodyne_exponent
from .errors import (
    DomainError,
    CorrexpError,
    NumericalInstabilityError,
    ResourceGuardError,
    UsageError,
)
from .quantum import photon_counting_exponent, quantum_exponent
from .scalars import EnergyParams, LogBase
from .simulate import STRATEGY_KINDS, Strategy, analytic_exponent, estimate_exponent

THREAD_ENV = "CORREXP_THREADS"

SWEEP_HEADER = "K,E,quantum,heterodyne,homodyne,photon,ratio_q_het"
SIMULATE_HEADER = "n,alpha_hat,beta_hat,exponent_hat,ci_low,ci_high"


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{float(value):.12g}"


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from None
    if not values:
        raise UsageError(f"{flag} must contain at least one integer")
    return values


def _thread_count() -> int:
    raw = os.environ.get(THREAD_ENV)
    if raw is None or raw == "":
        return min(4, os.cpu_count() or 1)
    try:
        count = int(raw)
    except ValueError:
        raise UsageError(f"{THREAD_ENV} must be a positive integer, got {raw!r}") from None
    if count < 1:
        raise UsageError(f"{THREAD_ENV} must be a positive integer, got {count}")
    return count


def _all_exponents(k: int, energy: float, base: LogBase) -> dict:
    p = EnergyParams(k, energy)
    return {
        "quantum": quantum_exponent(p, base),
        "heterodyne": heterodyne_exponent(p, base),
        "homodyne": homodyne_exponent(p, base),
        "photon": photon_counting_exponent(p, base),
    }


def cmd_exponents(args: argparse.Namespace) -> int:
    base = LogBase.parse(args.base)
    values = _all_exponents(args.k, args.energy, base)
    report = {
        "detectors": args.k,
        "energy": args.energy,
        "base": base.value,
        **values,
        "ratio_quantum_heterodyne": (
            values["quantum"] / values["heterodyne"] if values["heterodyne"] > 0.0 else None
        ),
        "ratio_quantum_homodyne": (
            values["quantum"] / values["homodyne"] if values["homodyne"] > 0.0 else None
        ),
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _sweep_row(k: int, energy: float, base: LogBase) -> str:
    values = _all_exponents(k, energy, base)
    ratio = values["quantum"] / values["heterodyne"] if values["heterodyne"] > 0.0 else math.inf
    cells = [
        str(k),
        _fmt(energy),
        _fmt(values["quantum"]),
        _fmt(values["heterodyne"]),
        _fmt(values["homodyne"]),
        _fmt(values["photon"]),
        _fmt(ratio),
    ]
    return ",".join(cells)


def cmd_sweep(args: argparse.Namespace) -> int:
    base = LogBase.parse(args.base)
    k_list = sorted(set(_parse_int_list(args.k, "--k")))
    if args.e_min <= 0.0:
        raise UsageError(f"--e-min must be positive for a log-spaced grid, got {args.e_min}")
    if args.e_max < args.e_min:
        raise UsageError(f"--e-max must be >= --e-min, got {args.e_max} < {args.e_min}")
    if args.e_points < 1:
        raise UsageError(f"--e-points must be >= 1, got {args.e_points}")
    energies = [float(e) for e in np.geomspace(args.e_min, args.e_max, args.e_points)]
    points = [(k, e) for k in k_list for e in energies]
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        rows = list(pool.map(lambda ke: _sweep_row(ke[0], ke[1], base), points))
    text = "\n".join([SWEEP_HEADER] + rows) + "\n"
    with open(args.out, "w", encoding="ascii", newline="") as fh:
        fh.write(text)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    base = LogBase.parse(args.base)
    strategy = Strategy(args.strategy, EnergyParams(args.k, args.energy))
    n_grid = _parse_int_list(args.n_grid, "--n-grid")
    if args.shots < 1000:
        raise UsageError(f"--shots must be >= 1000, got {args.shots}")
    target = analytic_exponent(strategy, LogBase.NATS)
    n_min = min(n_grid)
    measurable = math.log(args.shots / 3.0) / n_min
    if target > 0.0 and measurable < 1.5 * target:
        n_cap = int(math.log(args.shots / 3.0) / (1.5 * target))
        shots_needed = math.ceil(3.0 * math.exp(1.5 * target * n_min))
        raise UsageError(
            "infeasible grid: with "
            f"{args.shots} shots the smallest measurable exponent at n={n_min} is "
            f"{measurable:.4g} nats, below 1.5x the analytic exponent {target:.4g} nats. "
            f"Either keep every n <= {n_cap} or raise --shots to at least {shots_needed}."
        )
    outcomes = estimate_exponent(
        strategy, args.epsilon, n_grid, args.shots, args.seed, base
    )
    rows = [
        ",".join(
            [
                str(o.n),
                _fmt(o.alpha_hat),
                _fmt(o.beta_hat),
                _fmt(o.exponent_hat),
                _fmt(o.ci_low),
                _fmt(o.ci_high),
            ]
        )
        for o in outcomes
    ]
    text = "\n".join([SIMULATE_HEADER] + rows) + "\n"
    with open(args.out, "w", encoding="ascii", newline="") as fh:
        fh.write(text)
    sidecar = {
        "strategy": strategy.kind,
        "detectors": args.k,
        "energy": args.energy,
        "epsilon": args.epsilon,
        "shots": args.shots,
        "seed": args.seed,
        "base": base.value,
        "n_grid": n_grid,
        "analytic_exponent": analytic_exponent(strategy, base),
        "analytic_exponent_nats": target,
        "censored_rows": sum(1 for o in outcomes if o.censored),
    }
    with open(args.out + ".json", "w", encoding="ascii", newline="") as fh:
        fh.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(rows)} rows to {args.out} (sidecar {args.out}.json)")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    results = validate_mod.run_checks(args.level)
    for result in results:
        print(result.line())
    passed = sum(r.status == "PASS" for r in results)
    failed = sum(r.status == "FAIL" for r in results)
    skipped = sum(r.status == "SKIPPED" for r in results)
    total_s = sum(r.seconds for r in results)
    print(f"{passed} passed, {failed} failed, {skipped} skipped (level={args.level}, {total_s:.1f} s)")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="correxp",
        description="Error exponents for detecting shared randomness in optical noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("exponents", help="print all four exponents for one (K, E) point")
    p_exp.add_argument("--k", type=int, required=True, help="detector count")
    p_exp.add_argument("--energy", type=float, required=True, help="mean photon number per detector")
    p_exp.add_argument("--base", choices=["bits", "nats"], default="bits")
    p_exp.set_defaults(fn=cmd_exponents)

    p_sweep = sub.add_parser("sweep", help="write a CSV exponent grid over (K, E)")
    p_sweep.add_argument("--k", default="2,4,8", help="comma-separated detector counts")
    p_sweep.add_argument("--e-min", type=float, default=1e-4)
    p_sweep.add_argument("--e-max", type=float, default=10.0)
    p_sweep.add_argument("--e-points", type=int, default=60)
    p_sweep.add_argument("--base", choices=["bits", "nats"], default="bits")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo likelihood-ratio test")
    p_sim.add_argument("--strategy", choices=list(STRATEGY_KINDS), required=True)
    p_sim.add_argument("--k", type=int, required=True)
    p_sim.add_argument("--energy", type=float, required=True)
    p_sim.add_argument("--epsilon", type=float, default=0.1)
    p_sim.add_argument("--n-grid", default="4,8,12,16", help="comma-separated block lengths")
    p_sim.add_argument("--shots", type=int, default=10000)
    p_sim.add_argument("--seed", type=int, default=1)
    p_sim.add_argument("--base", choices=["bits", "nats"], default="bits")
    p_sim.add_argument("--out", required=True, help="output CSV path; JSON sidecar at <out>.json")
    p_sim.set_defaults(fn=cmd_simulate)

    p_val = sub.add_parser("validate", help="run the self-check suite")
    p_val.add_argument("--level", choices=["fast", "full"], default="fast")
    p_val.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed its message; --help exits 0, errors exit 2
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (UsageError, ResourceGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalInstabilityError as exc:
        print(f"error: numerical instability: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 3
    except CorrexpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
