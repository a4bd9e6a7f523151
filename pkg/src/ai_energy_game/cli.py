"""Command-line front end: solves, d0 sweeps, counterfactuals, calibration,
oracle audits and duopoly region maps.

Exit codes: 0 success, 1 failed audit, 2 invalid configuration, 3 solver
returned a non-finite result.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from . import calibration, duopoly, oracle, policy
from .model import ModelParams

SCHEMA_LINE = "# schema-version: 1"
EXIT_CONFIG = 2
EXIT_SOLVER = 3


class ConfigError(Exception):
    pass


class SolverError(Exception):
    pass


def _fmt(v) -> str:
    if v is None:
        return "unattainable"
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.10g}"


def load_params(args) -> ModelParams:
    """Registry instance, then parameter file, then ``--set`` overrides."""
    try:
        base = calibration.build_instance(args.instance) if args.instance else None
        values = {}
        if args.params:
            with open(args.params) as fh:
                values.update(calibration.parse_assignments(fh))
        values.update(calibration.parse_assignments(args.set or []))
        if base is None and not values:
            raise ConfigError("give --instance or --params")
        p = calibration.params_from_table_values(values, base) if values else base
        if getattr(args, "d0", None) is not None:
            p = p.replace(d0=args.d0)
        return p
    except ConfigError:
        raise
    except (ValueError, KeyError, OSError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from exc


def _check_finite(eq: policy.Equilibrium) -> policy.Equilibrium:
    if not all(math.isfinite(v) for v in (eq.x_star, eq.y_star, eq.welfare, eq.emissions)):
        raise SolverError(f"non-finite equilibrium at d0={eq.d0}")
    return eq


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows, footer=()) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _pool_map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- solve -------------------------------------------------------------------------


def equilibrium_record(eq: policy.Equilibrium, report: policy.RegimeReport) -> dict:
    return {
        "d0": eq.d0,
        "x_star": eq.x_star,
        "y_star": eq.y_star,
        "energy_demand": eq.demand,
        "beta": eq.beta,
        "emissions": eq.emissions,
        "damages": eq.damages,
        "welfare": eq.welfare,
        "zone": eq.zone.value,
        "carbon_free": eq.carbon_free,
        "regime": eq.regime.value,
        "classification": report.classification.value,
        "d_bar": report.d_bar if math.isfinite(report.d_bar) else None,
    }


def cmd_solve(args) -> int:
    p = load_params(args)
    eq = _check_finite(policy.optimal_capacity(p))
    record = equilibrium_record(eq, policy.classify_regime(p))
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        for key, value in record.items():
            print(f"{key:>15}: {_fmt(value) if value is not None else 'none'}")
    if args.out:
        Path(args.out).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    return 0


# -- sweep -------------------------------------------------------------------------

SWEEP_HEADER = ["d0", "x_star", "y_star", "energy_demand", "beta", "emissions", "welfare", "zone"]


def _sweep_point(p: ModelParams, d0: float):
    return _check_finite(policy.solve(p, d0=d0))


def _switches(d0s, flags) -> list[tuple[float, float]]:
    return [(d0s[i - 1], d0s[i]) for i in range(1, len(flags)) if flags[i] != flags[i - 1]]


def sweep_footer(eqs: list[policy.Equilibrium]) -> list[str]:
    d0s = [eq.d0 for eq in eqs]
    lines = []
    for name, flags in (
        ("carbon_free", [eq.carbon_free for eq in eqs]),
        ("active", [eq.x_star > 0 for eq in eqs]),
        ("frontier", [eq.x_star == 1.0 for eq in eqs]),
    ):
        switches = _switches(d0s, flags)
        if not switches:
            lines.append(f"{name}: constant {_fmt(flags[0]) if flags else 'n/a'}")
        for lo, hi in switches:
            lines.append(f"{name}: switches in ({_fmt(lo)}, {_fmt(hi)}]")
    return lines


def cmd_sweep(args) -> int:
    p = load_params(args)
    if args.steps < 1 or args.d0_max < args.d0_min or args.d0_min < 0:
        raise ConfigError("need 0 <= d0-min <= d0-max and steps >= 1")
    steps = 1 if args.d0_max == args.d0_min else args.steps
    d0s = [float(v) for v in np.linspace(args.d0_min, args.d0_max, steps)]
    eqs = _pool_map(partial(_sweep_point, p), d0s, args.jobs)
    rows = [(eq.d0, eq.x_star, eq.y_star, eq.demand, eq.beta, eq.emissions, eq.welfare, eq.zone.value) for eq in eqs]
    _write(_csv(SWEEP_HEADER, rows, sweep_footer(eqs)), args.out)
    return 0


# -- counterfactual ----------------------------------------------------------------


def parse_scenario(text: str) -> policy.Scenario:
    """``label:key=factor,...`` where ``d0=value`` sets rather than scales."""
    label, _, spec = text.partition(":")
    factors, d0 = {}, None
    for item in filter(None, spec.split(",")):
        key, _, value = item.partition("=")
        key = key.strip()
        if key == "d0":
            d0 = float(value)
        else:
            factors[key] = float(value)
    return policy.Scenario(label.strip() or "scenario", factors, d0)


def cmd_counterfactual(args) -> int:
    p = load_params(args)
    try:
        scenarios = [parse_scenario(s) for s in args.scenario] or [policy.Scenario("baseline")]
        results = policy.counterfactual_sweep(p, scenarios)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    header = ["label", "d0", "k", "theta", "x_star", "y_star", "beta", "emissions", "required_reduction"]
    rows = []
    for r in results:
        eq = _check_finite(r.equilibrium)
        rows.append((r.scenario.label, r.params.d0, r.params.k, r.params.theta, eq.x_star, eq.y_star, eq.beta, eq.emissions, r.required_reduction))
    _write(_csv(header, rows), args.out)
    return 0


# -- calibrate ---------------------------------------------------------------------


def cmd_calibrate(args) -> int:
    rep = calibration.run_calibration()
    lines = ["quantity,region,value"]
    lines += [f"lambda,{r},{_fmt(v)}" for r, v in sorted(rep.lam.items())]
    lines += [f"theta_fit,{r},{_fmt(v)}" for r, v in sorted(rep.theta_fit.items())]
    lines += [f"c_f,{r},{_fmt(v)}" for r, v in sorted(rep.c_f.items())]
    lines += [f"alpha,all,{_fmt(rep.alpha)}", f"mu,all,{_fmt(rep.mu)}", f"eta,all,{_fmt(rep.eta)}", f"k,EU,{_fmt(rep.k_eu)}"]
    text = SCHEMA_LINE + "\n" + "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "calibration.csv").write_text(text)
        for name in sorted(calibration.REGISTRY):
            calibration.write_params(calibration.build_instance(name), out / f"instance_{name}.txt")
    else:
        sys.stdout.write(text)
    return 0


# -- audit -------------------------------------------------------------------------


def cmd_audit(args) -> int:
    grid = oracle.GridSpec(n_x=args.grid_x, n_y=args.grid_y)
    rep = oracle.audit(
        n_per_regime=args.n_per_regime,
        seed=args.seed,
        y_points=args.y_points,
        policy=args.policy,
        grid=grid,
        policy_grid=oracle.GridSpec(n_x=args.policy_grid_x, n_y=args.grid_y),
    )
    print(f"instances: {rep.n_instances}  checks: {rep.checks}  failures: {len(rep.failures)}")
    for failure in rep.failures[:20]:
        print("  " + " ".join(_fmt(v) if not isinstance(v, str) else v for v in failure))
    print("PASS" if rep.passed else "FAIL")
    return 0 if rep.passed else 1


# -- duopoly map -------------------------------------------------------------------

MAP_HEADER = ["theta", "lambda", "region", "x1", "x2", "y1", "y2", "coverage_share"]


def _map_point(p, capacities, grid, cell):
    theta, lam = cell
    return duopoly.map_cell(p, theta, lam, capacities, grid)


def cmd_duopoly_map(args) -> int:
    p = load_params(args)
    capacities = None
    if args.capacities:
        try:
            capacities = tuple(float(v) for v in args.capacities.split(","))
        except ValueError as exc:
            raise ConfigError("--capacities expects 'y1,y2'") from exc
        if len(capacities) != 2 or min(capacities) < 0:
            raise ConfigError("--capacities expects two nonnegative numbers")
    thetas = np.linspace(args.theta_min, args.theta_max, args.theta_steps)
    lams = np.linspace(args.lambda_min, args.lambda_max, args.lambda_steps)
    cells = [(float(t), float(l)) for t in thetas for l in lams]
    try:
        out = _pool_map(partial(_map_point, p, capacities, args.grid_x), cells, args.jobs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [(c.theta, c.lam, c.region.value, c.x1, c.x2, c.y1, c.y2, c.coverage_share) for c in out]
    _write(_csv(MAP_HEADER, rows), args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ai-energy-game", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    config = argparse.ArgumentParser(add_help=False)
    config.add_argument("--instance", help="registry instance A-D")
    config.add_argument("--params", help="parameter file (key = value lines)")
    config.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one parameter (table units)")
    config.add_argument("--out", help="output path (stdout if omitted)")

    p = sub.add_parser("solve", parents=[config], help="policy optimum and classification")
    p.add_argument("--d0", type=float)
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[config], help="equilibrium over a d0 grid (CSV)")
    p.add_argument("--d0-min", type=float, default=0.0)
    p.add_argument("--d0-max", type=float, default=100.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterfactual", parents=[config], help="scaled-parameter scenarios (CSV)")
    p.add_argument("--d0", type=float)
    p.add_argument(
        "--scenario", action="append", default=[], metavar="LABEL:KEY=FACTOR,...",
        help="e.g. 'small-k:k=0.775,d0=351.7'; d0 is set, the others scale",
    )
    p.set_defaults(func=cmd_counterfactual)

    p = sub.add_parser("calibrate", help="re-derive parameters from the bundled data")
    p.add_argument("--out", help="directory for calibration.csv and instance files")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("audit", help="compare solvers to the brute-force oracle")
    p.add_argument("--n-per-regime", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--y-points", type=int, default=5)
    p.add_argument("--grid-x", type=int, default=20_001)
    p.add_argument("--grid-y", type=int, default=4_001)
    p.add_argument("--policy-grid-x", type=int, default=1_001)
    p.add_argument("--policy", action="store_true", help="also audit the policy optimum")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("duopoly-map", parents=[config], help="duopoly regions over (theta, lambda) (CSV)")
    p.add_argument("--d0", type=float)
    p.add_argument("--theta-min", type=float, default=10.0)
    p.add_argument("--theta-max", type=float, default=200.0)
    p.add_argument("--theta-steps", type=int, default=8)
    p.add_argument("--lambda-min", type=float, default=2.5)
    p.add_argument("--lambda-max", type=float, default=5.0)
    p.add_argument("--lambda-steps", type=int, default=6)
    p.add_argument("--capacities", help="fix 'y1,y2' instead of letting the planner choose")
    p.add_argument("--grid-x", type=int, default=201, help="capability grid points")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_duopoly_map)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
