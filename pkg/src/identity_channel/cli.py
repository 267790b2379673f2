"""Command-line front door.

Subcommands: equilibrium, verify, estimate, sweep, simulate.  Configs are
JSON documents; reports are JSON on stdout with reals at 12 significant
digits; sweeps and simulations additionally write CSV artifacts.

Exit codes: 0 success, 1 property failure, 2 domain error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .equilibrium import (
    AssumptionViolated,
    IndeterminateParams,
    check_equivalence,
    closed_form_equilibrium,
    compare_on,
)
from .estimator import (
    DEFAULT_SEARCH_BOUND,
    GroundTruthOracle,
    InvalidResolution,
    estimate_k,
    strategy_from_estimates,
)
from .experiments import (
    NonBelievingReceiver,
    SweepAxis,
    SweepSpec,
    audit_monotonicity,
    expected_direction,
    monte_carlo_accuracy,
    run_sweep,
    write_simulation_csv,
    write_sweep_csv,
)
from .model import (
    Group,
    Population,
    population_from_params,
    population_params,
    quality,
)
from .receiver import believes

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_DOMAIN_ERROR = 2
EXIT_USAGE = 64


class UsageError(Exception):
    """Bad flags or malformed config; mapped to exit code 64."""


class _Parser(argparse.ArgumentParser):
    """argparse parser that raises instead of exiting, so errors map to 64."""

    def error(self, message):
        raise UsageError(message)


def _round12(value: float) -> float:
    return float(f"{value:.12g}")


@dataclass(frozen=True)
class RunConfig:
    """Parsed JSON config: a population plus optional per-command blocks."""

    population: Population
    estimator: dict | None = None
    sweep: dict | None = None
    simulate: dict | None = None


_CONFIG_KEYS = {"population", "estimator", "sweep", "simulate"}
_ESTIMATOR_KEYS = {"delta", "M"}
_SWEEP_KEYS = {"axes", "simplex_constrained"}
_AXIS_KEYS = {"name", "lo", "hi", "resolution"}
_SIMULATE_KEYS = {"N", "seed"}


def _check_keys(block: dict, allowed: set, where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise UsageError(f"unknown keys in {where}: {sorted(unknown)}")


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    _check_keys(raw, _CONFIG_KEYS, "config")
    if "population" not in raw:
        raise UsageError("config is missing the 'population' block")
    try:
        population = population_from_params(raw["population"])
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad population block: {exc}") from exc
    for name, keys in (
        ("estimator", _ESTIMATOR_KEYS),
        ("sweep", _SWEEP_KEYS),
        ("simulate", _SIMULATE_KEYS),
    ):
        if raw.get(name) is not None:
            if not isinstance(raw[name], dict):
                raise UsageError(f"config block {name!r} must be a JSON object")
            _check_keys(raw[name], keys, f"config block {name!r}")
    return RunConfig(
        population=population,
        estimator=raw.get("estimator"),
        sweep=raw.get("sweep"),
        simulate=raw.get("simulate"),
    )


def _print_report(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _printable_strategy(strategy, population):
    """Round the lie probabilities to 12 significant digits, preserving belief.

    Nearest-rounding can cross a belief boundary (e.g. round 1/k_B up), so
    when that happens the offending coordinate is dropped to the adjacent
    12-digit value below; reports then round-trip through `believes`.
    """
    from .model import SenderStrategy

    flags = believes(strategy, population)

    def variants(x):
        r = float(f"{x:.12g}")
        out = [r]
        if r > 0.0:
            out.append(max(0.0, r - 10.0 ** (math.floor(math.log10(r)) - 11)))
        return out

    for n_A in variants(strategy.n_A):
        for n_B in variants(strategy.n_B):
            cand = SenderStrategy(strategy.m_A, strategy.m_B, n_A, n_B)
            if believes(cand, population) == flags:
                return cand
    return SenderStrategy(
        strategy.m_A,
        strategy.m_B,
        float(f"{strategy.n_A:.12g}"),
        float(f"{strategy.n_B:.12g}"),
    )


def cmd_equilibrium(args) -> int:
    config = load_config(args.config)
    result = closed_form_equilibrium(config.population)
    strat = _printable_strategy(result.strategy, config.population)
    bel_A, bel_B = believes(strat, config.population)
    _print_report(
        {
            "k_A": _round12(result.params.k_A),
            "k_B": _round12(result.params.k_B),
            "case": result.case_label,
            "m_A": _round12(strat.m_A),
            "m_B": _round12(strat.m_B),
            "n_A": _round12(strat.n_A),
            "n_B": _round12(strat.n_B),
            "Q": _round12(result.quality),
            "believes_A": bel_A,
            "believes_B": bel_B,
        }
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.config is not None:
        config = load_config(args.config)
        case = compare_on(config.population)
        max_q = case.quality_gap
        max_coord = case.coordinate_gap
        failures = [] if max(max_q, max_coord) <= 1e-9 else [case]
        trials = 1
    else:
        if args.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {args.trials}")
        report = check_equivalence(args.trials, args.seed)
        max_q, max_coord = report.max_quality_gap, report.max_coordinate_gap
        failures = list(report.failures)
        trials = args.trials
    _print_report(
        {
            "trials": trials,
            "max_quality_gap": _round12(max_q),
            "max_coordinate_gap": _round12(max_coord),
            "failures": [
                {
                    "population": {
                        k: _round12(v)
                        for k, v in sorted(population_params(f.population).items())
                    },
                    "quality_gap": _round12(f.quality_gap),
                    "coordinate_gap": _round12(f.coordinate_gap),
                }
                for f in failures
            ],
        }
    )
    return EXIT_OK if not failures else EXIT_PROPERTY_FAILURE


def cmd_estimate(args) -> int:
    config = load_config(args.config)
    if config.estimator is None:
        raise UsageError("config is missing the 'estimator' block")
    delta = float(config.estimator.get("delta", 0.0))
    M = float(config.estimator.get("M", DEFAULT_SEARCH_BOUND))
    # Validate before querying so assumption checks see a sane oracle.
    oracle = GroundTruthOracle(config.population)
    res_A = estimate_k(oracle, Group.A, delta, M)
    res_B = estimate_k(oracle, Group.B, delta, M)
    strat = strategy_from_estimates(res_A.k_hat, res_B.k_hat)
    _print_report(
        {
            "k_hat_A": _round12(res_A.k_hat),
            "steps_A": res_A.steps,
            "hit_upper_bound_A": res_A.hit_upper_bound,
            "k_hat_B": _round12(res_B.k_hat),
            "steps_B": res_B.steps,
            "hit_upper_bound_B": res_B.hit_upper_bound,
            "m_A": _round12(strat.m_A),
            "m_B": _round12(strat.m_B),
            "n_A": _round12(strat.n_A),
            "n_B": _round12(strat.n_B),
            "Q": _round12(quality(strat)),
        }
    )
    return EXIT_OK


def _sweep_spec_from_config(config: RunConfig) -> SweepSpec:
    if config.sweep is None:
        raise UsageError("config is missing the 'sweep' block")
    raw_axes = config.sweep.get("axes")
    if not isinstance(raw_axes, list) or not raw_axes:
        raise UsageError("sweep block must list one or two axes")
    axes = []
    for raw in raw_axes:
        if not isinstance(raw, dict):
            raise UsageError("each sweep axis must be a JSON object")
        _check_keys(raw, _AXIS_KEYS, "sweep axis")
        try:
            axis = SweepAxis(
                name=str(raw["name"]),
                lo=float(raw["lo"]),
                hi=float(raw["hi"]),
                resolution=int(raw["resolution"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"bad sweep axis: {exc}") from exc
        if axis.resolution < 2:
            raise UsageError(
                f"sweep axis {axis.name!r} needs resolution >= 2, "
                f"got {axis.resolution}"
            )
        axes.append(axis)
    try:
        return SweepSpec(
            base=config.population,
            axes=tuple(axes),
            simplex_constrained=bool(config.sweep.get("simplex_constrained", False)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    spec = _sweep_spec_from_config(config)
    result = run_sweep(spec)
    try:
        write_sweep_csv(result, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    qualities = [rec.Q for rec in result.records]
    report = {
        "rows": len(result.records),
        "skipped": len(result.skipped),
        "min_Q": _round12(min(qualities)) if qualities else None,
        "max_Q": _round12(max(qualities)) if qualities else None,
        "out": args.out,
    }
    exit_code = EXIT_OK
    if args.audit:
        if len(spec.axes) != 1:
            raise UsageError("--audit requires a single sweep axis")
        axis = spec.axes[0].name
        direction = expected_direction(axis)
        violations = audit_monotonicity(spec, axis, direction)
        report["audit_direction"] = direction.value
        report["audit_violations"] = [
            {
                "axis_lo": _round12(v.axis_lo),
                "axis_hi": _round12(v.axis_hi),
                "q_lo": _round12(v.q_lo),
                "q_hi": _round12(v.q_hi),
            }
            for v in violations
        ]
        if violations:
            exit_code = EXIT_PROPERTY_FAILURE
    _print_report(report)
    return exit_code


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    if config.simulate is None:
        raise UsageError("config is missing the 'simulate' block")
    try:
        N = int(config.simulate["N"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad simulate block: {exc}") from exc
    seed = int(config.simulate.get("seed", args.seed))
    result = closed_form_equilibrium(config.population)
    accuracy, std_error = monte_carlo_accuracy(
        result.strategy, config.population, N, seed
    )
    expected = result.quality / 4.0
    try:
        write_simulation_csv(args.out, N, seed, accuracy, std_error, expected)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    _print_report(
        {
            "N": N,
            "seed": seed,
            "accuracy": _round12(accuracy),
            "std_error": _round12(std_error),
            "expected": _round12(expected),
            "out": args.out,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="identity-channel",
        description="Solve, verify, estimate and simulate the identity channel game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eq = sub.add_parser("equilibrium", help="closed-form equilibrium for a config")
    p_eq.add_argument("--config", required=True)
    p_eq.set_defaults(func=cmd_equilibrium)

    p_ver = sub.add_parser(
        "verify", help="closed form vs LP oracle on random or configured populations"
    )
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(func=cmd_verify)

    p_est = sub.add_parser("estimate", help="bisection estimation against the config")
    p_est.add_argument("--config", required=True)
    p_est.set_defaults(func=cmd_estimate)

    p_sw = sub.add_parser("sweep", help="parameter sweep to CSV")
    p_sw.add_argument("--config", required=True)
    p_sw.add_argument("--out", required=True)
    p_sw.add_argument("--audit", action="store_true")
    p_sw.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo accuracy to CSV")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        AssumptionViolated,
        IndeterminateParams,
        InvalidResolution,
        NonBelievingReceiver,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
