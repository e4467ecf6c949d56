"""Command-line front end.

Verbs:

* ``derive``        one certified optimum, printed as fraction + decimal
* ``sweep``         optima over a parameter grid, CSV output
* ``reconstruct``   sweep plus exact piecewise-polynomial reconstruction
* ``critical``      the table of critical detection efficiencies
* ``crosstalk``     crosstalk cap, floor and hypothesis test from measured
  statistics
* ``oracle``        random-strategy LHV soundness check against the LP bound
* ``reproduce-all`` every derivation, table and figure dataset, with a
  pass/fail manifest

Exit codes: 0 success, 1 usage error, 2 computation error, 3 verification
mismatch.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import (
    crosstalk_critical,
    crosstalk_ztest,
    critical_efficiency_table,
    lhv_oracle,
)
from .bellq import BellKind, BellQuantity
from .scenarios import Family, Level, Params, ScenarioId
from .serialize import (
    bivariate_csv,
    decimal_text,
    fraction_text,
    parse_exact_param,
    piecewise_text,
    sweep_csv,
    write_text,
)
from .sweep import bound_at, reconstruct, sweep, sweep2

USAGE_ERROR = 1
COMPUTATION_ERROR = 2
VERIFICATION_MISMATCH = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage problems, not 2
        raise _UsageError(message)


_SENSES = {"max": "maximize", "min": "minimize"}


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, choices=[f.value for f in Family])
    p.add_argument("--level", choices=[l.value for l in Level], default="full")
    p.add_argument("--eta", help="exact fraction, e.g. 3/4")
    p.add_argument("--eta-a", help="exact fraction")
    p.add_argument("--eta-b", help="exact fraction")
    p.add_argument("--pc", help="crosstalk probability, exact fraction")
    p.add_argument("--apparent-locality", action="store_true")


def _add_quantity_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quantity", required=True, choices=[k.value for k in BellKind])
    p.add_argument("--normalized", action="store_true")


def _scenario_of(args) -> ScenarioId:
    return ScenarioId(Family(args.scenario), Level(args.level))


def _params_of(args) -> Params:
    kwargs = {}
    for attr, key in (
        ("eta", "eta"),
        ("eta_a", "eta_a"),
        ("eta_b", "eta_b"),
        ("pc", "p_crosstalk"),
    ):
        raw = getattr(args, attr)
        if raw is not None:
            try:
                kwargs[key] = parse_exact_param(raw)
            except ValueError as exc:
                raise _UsageError(str(exc)) from None
    if getattr(args, "apparent_locality", False):
        kwargs["apparent_locality"] = True
    return Params(**kwargs)


def _quantity_of(args) -> BellQuantity:
    return BellQuantity(BellKind(args.quantity), normalized=args.normalized)


def _grid_of(args) -> list[Params]:
    if args.grid:
        try:
            values = [parse_exact_param(v) for v in args.grid.split(",")]
        except ValueError as exc:
            raise _UsageError(str(exc)) from None
    else:
        den = args.grid_den
        values = [Fraction(k, den) for k in range(den + 1)]
    scenario = _scenario_of(args)
    if scenario.family is Family.CROSSTALK:
        return [Params(p_crosstalk=v) for v in values]
    return [Params(eta=v) for v in values]


def _build_parser() -> _Parser:
    parser = _Parser(prog="bellbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("derive", help="one certified bound")
    _add_scenario_args(p)
    _add_quantity_args(p)
    p.add_argument("--sense", required=True, choices=["max", "min"])

    p = sub.add_parser("sweep", help="bounds over a grid, CSV")
    _add_scenario_args(p)
    _add_quantity_args(p)
    p.add_argument("--sense", required=True, choices=["max", "min"])
    p.add_argument("--grid", help="comma list of exact fractions")
    p.add_argument("--grid-den", type=int, default=64)
    p.add_argument("--grid-b", help="second-axis grid for asymmetric families")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("reconstruct", help="sweep + piecewise reconstruction")
    _add_scenario_args(p)
    _add_quantity_args(p)
    p.add_argument("--sense", required=True, choices=["max", "min"])
    p.add_argument("--grid", help="comma list of exact fractions")
    p.add_argument("--grid-den", type=int, default=64)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv", type=Path)
    p.add_argument("--out-bound", type=Path)

    p = sub.add_parser("critical", help="critical detection efficiencies")
    p.add_argument("--out-csv", type=Path)

    p = sub.add_parser("crosstalk", help="crosstalk statistics and hypothesis test")
    p.add_argument("--s-exp", required=True)
    p.add_argument("--s-sig", required=True)
    p.add_argument("--pc-mean", required=True)
    p.add_argument("--pc-sig", required=True)
    p.add_argument("--delta-p")

    p = sub.add_parser("oracle", help="LHV strategy sampling vs LP bound")
    _add_scenario_args(p)
    _add_quantity_args(p)
    p.add_argument("--strategies", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("reproduce-all", help="full verification run")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--grid-den", type=int, default=16)
    p.add_argument("--asym-points", type=int, default=9)
    p.add_argument("--strategies", type=int, default=10_000)
    return parser


def _run_derive(args) -> int:
    value = bound_at(_scenario_of(args), _quantity_of(args), _SENSES[args.sense], _params_of(args))
    print(f"{fraction_text(value)} ({decimal_text(value)})")
    return 0


def _run_sweep(args) -> int:
    scenario = _scenario_of(args)
    q = _quantity_of(args)
    sense = _SENSES[args.sense]
    if args.grid_b is not None:
        grid_a = [parse_exact_param(v) for v in (args.grid or "").split(",") if v]
        grid_b = [parse_exact_param(v) for v in args.grid_b.split(",") if v]
        if not grid_a or not grid_b:
            raise _UsageError("asymmetric sweeps need --grid and --grid-b")
        grid2 = sweep2(scenario, q, sense, grid_a, grid_b, jobs=args.jobs)
        text = bivariate_csv(grid2)
    else:
        result = sweep(scenario, q, sense, _grid_of(args), jobs=args.jobs)
        if result.errors:
            for params, message in result.errors:
                print(f"error at {params}: {message}", file=sys.stderr)
        text = sweep_csv(result)
    if args.out:
        write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _run_reconstruct(args) -> int:
    scenario = _scenario_of(args)
    result = sweep(
        scenario, _quantity_of(args), _SENSES[args.sense], _grid_of(args), jobs=args.jobs
    )
    if result.errors:
        for params, message in result.errors:
            print(f"error at {params}: {message}", file=sys.stderr)
        return COMPUTATION_ERROR
    bound = reconstruct(result, max_degree=args.max_degree)
    text = piecewise_text(bound)
    if args.out_csv:
        write_text(args.out_csv, sweep_csv(result))
        print(f"wrote {args.out_csv}")
    if args.out_bound:
        write_text(args.out_bound, text)
        print(f"wrote {args.out_bound}")
    else:
        print(text, end="")
    return 0


def _run_critical(args) -> int:
    lines = ["quantity      side   eta_critical   enclosure"]
    csv_lines = ["quantity,side,eta_critical,enclosure_lo,enclosure_hi"]
    for th in critical_efficiency_table():
        name = th.quantity.kind.value
        lo, hi = th.enclosure
        lines.append(
            f"{name:13s} {th.side:6s} {th.decimal_str(4):>10s}   "
            f"[{fraction_text(lo)}, {fraction_text(hi)}]"
        )
        csv_lines.append(
            f"{name},{th.side},{th.decimal_str(6)},{fraction_text(lo)},{fraction_text(hi)}"
        )
    print("\n".join(lines))
    if args.out_csv:
        write_text(args.out_csv, "\n".join(csv_lines) + "\n")
        print(f"wrote {args.out_csv}")
    return 0


def _run_crosstalk(args) -> int:
    report = crosstalk_ztest(
        Fraction(args.s_exp),
        Fraction(args.s_sig),
        Fraction(args.pc_mean),
        Fraction(args.pc_sig),
        None if args.delta_p is None else Fraction(args.delta_p),
    )
    print(
        f"S upper bound   {decimal_text(report.s_upper_mean, 6)} "
        f"+/- {decimal_text(report.s_upper_sigma, 6)}"
    )
    if report.verdict == "z-test":
        print(f"z               {report.z_score:.4f}")
        print(f"alpha two-sided {report.alpha_two_sided:.4f}")
    else:
        print(f"verdict         {report.verdict}")
    if report.p_c_floor is not None:
        print(f"crosstalk floor {decimal_text(report.p_c_floor, 6)}")
    exact, dec = crosstalk_critical()
    print(f"critical pc     {exact} ~ {dec}")
    return 0


def _run_oracle(args) -> int:
    report = lhv_oracle(
        _scenario_of(args),
        _quantity_of(args),
        args.strategies,
        args.seed,
        _params_of(args),
    )
    print(
        f"strategies {report.strategies}  seed {report.seed}\n"
        f"observed  [{fraction_text(report.min_observed)}, "
        f"{fraction_text(report.max_observed)}]\n"
        f"lp bounds [{fraction_text(report.bound_lower)}, "
        f"{fraction_text(report.bound_upper)}]\n"
        f"sound     {report.sound}"
    )
    return 0 if report.sound else VERIFICATION_MISMATCH


def _run_reproduce_all(args) -> int:
    from .reproduce import run_all

    checks, ok = run_all(
        args.out,
        jobs=args.jobs,
        denominator=args.grid_den,
        asym_points=args.asym_points,
        oracle_strategies=args.strategies,
    )
    failures = [c for c in checks if not c.ok]
    print(f"{len(checks)} checks, {len(failures)} failures; manifest in {args.out}")
    for c in failures:
        print(f"  FAIL {c.anchor}: expected {c.expected}, computed {c.computed}")
    return 0 if ok else VERIFICATION_MISMATCH


_RUNNERS = {
    "derive": _run_derive,
    "sweep": _run_sweep,
    "reconstruct": _run_reconstruct,
    "critical": _run_critical,
    "crosstalk": _run_crosstalk,
    "oracle": _run_oracle,
    "reproduce-all": _run_reproduce_all,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        return _RUNNERS[args.verb](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, LookupError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return COMPUTATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
