"""Command-line harness: percolate, pc, evaluate, and bandit subcommands.

All output is deterministic for a given config: seeds are explicit, Monte
Carlo reductions are thread-count independent, and every emitted file embeds
the config for provenance (a # comment line in CSV, a top-level field in
JSON).  Exit codes: 0 success, 2 invalid input, 1 internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .bandits import (
    BernoulliArm,
    DesignArm,
    cumulative_regrets,
    run_bandit,
)
from .designs import (
    DesignValidationError,
    evaluate_designs,
    parse_design_set,
    regret_summary,
)
from .lattice import DIRECTIONS, square_lattice, lattice_for_count
from .percolation import estimate_pc, sweep_grid, theoretical_k_limit
from .rng import derive_seed

DEFAULTS = {
    "seed": 0,
    "samples": 1000,
    "threads": 1,
    "direction": "either",
    "y": 0.5,
    "epsilon": 0.05,
    "grid": "0:1:0.1",
    "format": "csv",
    "out": None,
}


class InputError(ValueError):
    """Bad user input; maps to exit code 2."""


def parse_grid(spec: str) -> list:
    """Parse "start:stop:step" into an ascending list of probabilities."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid {spec!r} is not start:stop:step")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise InputError(f"grid {spec!r} has non-numeric parts")
    if step <= 0 or start > stop:
        raise InputError("grid requires step > 0 and start <= stop")
    values = []
    i = 0
    while True:
        p = round(start + i * step, 12)
        if p > stop + step * 1e-9:
            break
        values.append(min(p, 1.0) if p <= 1.0 else p)
        i += 1
    if not values:
        raise InputError(f"grid {spec!r} is empty")
    for p in values:
        if not 0.0 <= p <= 1.0:
            raise InputError(f"grid value {p} outside [0, 1]")
    return values


def _load_json(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def _config_dict(args, keys) -> dict:
    return {k: getattr(args, k) for k in sorted(keys)}


def _csv_text(config: dict, header: list, rows: list, sections=None) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    for name, sec_header, sec_rows in sections or []:
        buf.write(f"# section: {name}\n")
        writer.writerow(sec_header)
        for row in sec_rows:
            writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_text(config: dict, payload: dict) -> str:
    return json.dumps({"config": config, **payload}, indent=2) + "\n"


def _emit(text: str, out: str):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as handle:
            handle.write(text)


def _design_lattice(args):
    if args.design_file:
        designs = parse_design_set(_load_json(args.design_file))
        if args.design_id:
            matches = [d for d in designs if d.id == args.design_id]
            if not matches:
                raise InputError(f"design id {args.design_id!r} not in {args.design_file}")
            design = matches[0]
        else:
            design = designs[0]
        return lattice_for_count(design.l)
    if args.rows is None or args.cols is None:
        raise InputError("provide --rows/--cols or --design-file")
    return square_lattice(args.rows, args.cols)


def cmd_percolate(args) -> int:
    lattice = _design_lattice(args)
    grid = parse_grid(args.grid)
    estimates = sweep_grid(
        lattice, grid, args.samples, args.seed, args.direction, args.threads
    )
    config = _config_dict(args, ["seed", "samples", "direction", "grid"])
    config["rows"], config["cols"] = lattice.rows, lattice.cols
    header = ["p", "theta_hat", "theta_stderr", "p_infinity_hat", "k_hat", "k_stderr"]
    rows = [
        [e.p, e.theta_hat, e.theta_stderr, e.p_infinity_hat, e.k_hat, e.k_stderr]
        for e in estimates
    ]
    if args.format == "json":
        text = _json_text(config, {"sweep": [dict(zip(header, r)) for r in rows]})
    else:
        text = _csv_text(config, header, rows)
    _emit(text, args.out)
    return 0


def cmd_pc(args) -> int:
    if args.rows is None or args.cols is None:
        raise InputError("pc requires --rows and --cols")
    lattice = square_lattice(args.rows, args.cols)
    grid = parse_grid(args.grid)
    estimate = estimate_pc(
        lattice, args.samples, args.seed, args.epsilon, grid, args.direction, args.threads
    )
    config = _config_dict(
        args, ["seed", "samples", "direction", "grid", "epsilon"]
    )
    config["rows"], config["cols"] = args.rows, args.cols
    header = ["p", "theta_hat"]
    rows = [[p, th] for p, th in estimate.trace]
    if args.format == "json":
        text = _json_text(
            config,
            {"p_c_hat": estimate.p_c_hat, "trace": [dict(zip(header, r)) for r in rows]},
        )
    else:
        text = _csv_text(
            config,
            header,
            rows,
            sections=[("p_c", ["p_c_hat", "epsilon"], [[estimate.p_c_hat, args.epsilon]])],
        )
    _emit(text, args.out)
    return 0


def _regret_surface(sizes, grid, args):
    """Theoretical regret over (p, l): the data behind the regret surface."""
    rows = []
    for l in sorted(sizes):
        lattice = lattice_for_count(l)
        seed = derive_seed(args.seed, f"surface:{l}")
        limit = theoretical_k_limit(l, args.y)
        for est in sweep_grid(
            lattice, grid, args.samples, seed, args.direction, args.threads
        ):
            rows.append([l, est.p, est.k_hat, limit, limit - est.k_hat])
    return rows


def cmd_evaluate(args) -> int:
    designs = parse_design_set(_load_json(args.design_file))
    reports = evaluate_designs(
        designs, args.samples, args.seed, args.direction, args.y, args.threads
    )
    summary = regret_summary(reports)
    grid = parse_grid(args.grid)
    surface = _regret_surface({d.l for d in designs}, grid, args)
    config = _config_dict(
        args, ["seed", "samples", "direction", "grid", "y"]
    )
    report_header = [
        "design_id",
        "l",
        "phi_hat",
        "phi_stderr",
        "theoretical_limit",
        "theoretical_regret",
        "empirical_regret",
    ]
    report_rows = [
        [
            r.design_id,
            r.l,
            r.phi_hat,
            r.phi_stderr,
            r.theoretical_limit,
            r.theoretical_regret,
            regret,
        ]
        for r, regret in zip(reports, summary.empirical_regrets)
    ]
    summary_obj = {
        "optimal_design_id": summary.optimal_design_id,
        "regret_star": summary.regret_star,
        "regret_bound": summary.regret_bound,
    }
    surface_header = ["l", "p", "phi_hat", "theoretical_limit", "theoretical_regret"]
    if args.format == "json":
        text = _json_text(
            config,
            {
                "reports": [dict(zip(report_header, r)) for r in report_rows],
                "summary": summary_obj,
                "regret_surface": [dict(zip(surface_header, r)) for r in surface],
            },
        )
    else:
        text = _csv_text(
            config,
            report_header,
            report_rows,
            sections=[
                (
                    "summary",
                    ["optimal_design_id", "regret_star", "regret_bound"],
                    [[summary.optimal_design_id, summary.regret_star, summary.regret_bound]],
                ),
                ("regret_surface", surface_header, surface),
            ],
        )
    _emit(text, args.out)
    return 0


def _load_arms(args) -> list:
    spec = _load_json(args.arms_file)
    if not isinstance(spec, list) or not spec:
        raise InputError("arms spec must be a non-empty JSON array")
    designs_by_id = {}
    if args.design_file:
        designs_by_id = {d.id: d for d in parse_design_set(_load_json(args.design_file))}
    arms = []
    for i, entry in enumerate(spec):
        if not isinstance(entry, dict) or "type" not in entry:
            raise InputError(f"arms[{i}]: expected an object with a 'type' field")
        if entry["type"] == "bernoulli":
            if "mean" not in entry:
                raise InputError(f"arms[{i}]: bernoulli arm requires 'mean'")
            try:
                arms.append(BernoulliArm(float(entry["mean"])))
            except ValueError as exc:
                raise InputError(f"arms[{i}]: {exc}")
        elif entry["type"] == "design":
            design_id = entry.get("id")
            if design_id not in designs_by_id:
                raise InputError(
                    f"arms[{i}]: design id {design_id!r} not found "
                    "(pass the design set with --designs)"
                )
            arms.append(
                DesignArm(designs_by_id[design_id], y=args.y, direction=args.direction)
            )
        else:
            raise InputError(f"arms[{i}]: unknown arm type {entry['type']!r}")
    return arms


def _load_schedule(path: str, n_arms: int) -> np.ndarray:
    try:
        with open(path) as handle:
            reader = csv.reader(handle)
            rows = [row for row in reader if row and not row[0].startswith("#")]
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    try:
        table = np.array([[float(x) for x in row] for row in rows])
    except ValueError:
        raise InputError(f"{path}: schedule entries must be numbers")
    if table.ndim != 2 or table.shape[1] != n_arms:
        raise InputError(
            f"{path}: schedule must have {n_arms} reward columns per row"
        )
    return table


def cmd_bandit(args) -> int:
    arms = _load_arms(args)
    schedule = _load_schedule(args.schedule, len(arms)) if args.schedule else None
    try:
        trace = run_bandit(
            arms, args.policy, args.horizon, args.seed, schedule, args.gamma
        )
    except ValueError as exc:
        raise InputError(str(exc))
    cum = cumulative_regrets(trace)
    config = _config_dict(args, ["seed", "direction", "y"])
    config["policy"] = args.policy
    config["horizon"] = args.horizon
    if trace.gamma is not None:
        config["gamma"] = trace.gamma
    header = [
        "t",
        "arm",
        "reward",
        "cum_mean_regret",
        "cum_realized_regret",
        "cum_weak_regret",
    ]
    rows = [
        [
            t + 1,
            int(trace.chosen[t]),
            float(trace.rewards[t]),
            None if cum["mean"] is None else float(cum["mean"][t]),
            float(cum["realized"][t]),
            float(cum["weak"][t]),
        ]
        for t in range(trace.horizon)
    ]
    summary = {
        "horizon": trace.horizon,
        "arm_pulls": np.bincount(trace.chosen, minlength=len(arms)).tolist(),
        "total_reward": float(trace.rewards.sum()),
        "mean_regret": None if cum["mean"] is None else float(cum["mean"][-1]),
        "realized_regret": float(cum["realized"][-1]),
        "weak_regret": float(cum["weak"][-1]),
    }
    if args.format == "json":
        text = _json_text(
            config, {"steps": [dict(zip(header, r)) for r in rows], "summary": summary}
        )
        _emit(text, args.out)
    else:
        text = _csv_text(config, header, rows)
        _emit(text, args.out)
        summary_text = _json_text(config, {"summary": summary})
        if args.out is None:
            sys.stdout.write(summary_text)
        else:
            with open(args.out + ".summary.json", "w") as handle:
                handle.write(summary_text)
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--direction", choices=DIRECTIONS)
    parser.add_argument("--y", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--grid", help="p sweep as start:stop:step")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percoregret",
        description="Percolation-based design resilience scoring with regret accounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("percolate", help="coupled theta/p_infinity/<k> sweep over a p grid")
    _add_common(p)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--design-file", help="design-set JSON supplying the lattice")
    p.add_argument("--design-id")
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("pc", help="finite-size critical probability estimate")
    _add_common(p)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("evaluate", help="score a design set and report regrets")
    _add_common(p)
    p.add_argument("--designs", dest="design_file", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bandit", help="run a bandit policy over an arm set")
    _add_common(p)
    p.add_argument("--arms", dest="arms_file", required=True)
    p.add_argument("--designs", dest="design_file")
    p.add_argument("--policy", choices=("ucb1", "exp3"), default="ucb1")
    p.add_argument("--horizon", "-T", type=int, default=1000)
    p.add_argument("--gamma", type=float)
    p.add_argument("--schedule", help="adversarial reward schedule CSV (T rows x K cols)")
    p.set_defaults(func=cmd_bandit)
    return parser


def _apply_config(args):
    file_values = {}
    if getattr(args, "config", None):
        loaded = _load_json(args.config)
        if not isinstance(loaded, dict):
            raise InputError(f"{args.config}: config must be a JSON object")
        file_values = loaded
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, file_values.get(key, default))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        if args.samples < 1:
            raise InputError("--samples must be >= 1")
        if args.threads < 1:
            raise InputError("--threads must be >= 1")
        return args.func(args)
    except (InputError, DesignValidationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
