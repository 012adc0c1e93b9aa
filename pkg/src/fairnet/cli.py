"""Command-line interface.

Subcommands: ``netgen`` (generate and save a network), ``run`` (single
simulation), ``sweep`` (full policy grid from a config file), ``pareto`` and
``best`` (post-processing of aggregate CSVs), ``baseline`` (offer-level scan
without interference). Stochastic commands require an explicit ``--seed`` /
master seed; every output file starts with a commented metadata header that
names the tool version, the resolved configuration, and the seed, and carries
no timestamps, so reruns are byte-identical.

Exit codes: 0 success, 1 partial failure (some sweep runs failed), 2 bad
usage or bad input files.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .dynamics import SimConfig, UPDATE_MODES, UPDATE_SYNC, run_simulation
from .game import GameParams
from .interference import InterferenceConfig, Scheme, TargetSet
from .netgen import (
    GenParams,
    load_edgelist,
    network_stats,
    parse_gen_params,
    save_edgelist,
    generate,
)
from .sweep import (
    AGGREGATE_COLUMNS,
    BASELINE_COLUMNS,
    BEST_COLUMNS,
    DECISION_LOG_COLUMNS,
    DEFAULT_NI_FRACTIONS,
    DEFAULT_SHARE_THRESHOLDS,
    DEFAULT_THETAS,
    GridSpec,
    PARETO_COLUMNS,
    RESULT_COLUMNS,
    SEED_ALGORITHM,
    SweepSpec,
    aggregate_row,
    baseline_row,
    baseline_scan,
    best_rows_from_aggregate_rows,
    decision_log_rows,
    pareto_front,
    pareto_points_from_aggregate_rows,
    pareto_row,
    read_csv,
    result_row,
    run_sweep,
    write_csv,
)

_SCHEME_TOKENS = tuple(s.value for s in Scheme)


def _metadata(command: str, seed: int | None, config_items: Sequence[tuple[str, str]]) -> list[str]:
    lines = [f"fairnet {__version__}", f"command: {command}"]
    if seed is not None:
        lines.append(f"master_seed: {seed}")
        lines.append(f"replicate_seed_algorithm: {SEED_ALGORITHM}")
    if config_items:
        lines.append("config: " + " ".join(f"{k}={v}" for k, v in config_items))
    return lines


def _float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise SystemExit(_usage_error(f"{flag}: expected a list of numbers, got {text!r}"))
    if not values:
        raise SystemExit(_usage_error(f"{flag}: empty list"))
    return values


def _int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise SystemExit(_usage_error(f"{flag}: expected a list of integers, got {text!r}"))
    if not values:
        raise SystemExit(_usage_error(f"{flag}: empty list"))
    return values


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def cmd_netgen(args: argparse.Namespace) -> int:
    params = parse_gen_params(args.model, args.n, args.m, args.m0, args.seed)
    net = generate(params)
    stats = network_stats(net)
    header = _metadata(
        "netgen",
        args.seed,
        [("model", params.model), ("n", str(params.n)), ("m", str(params.m)),
         ("m0", str(params.m0 if params.m0 is not None else params.m + 1))],
    )
    save_edgelist(net, args.out, comments=header)
    print("n,m,model,seed,mean_degree,clustering,gamma")
    print(
        f"{params.n},{params.m},{params.model},{params.seed},"
        f"{stats.mean_degree:.6g},{stats.global_clustering:.6g},{stats.fitted_exponent:.6g}"
    )
    return 0


def _interference_from_args(args: argparse.Namespace) -> InterferenceConfig | None:
    scheme_token = (args.scheme or "none").lower()
    if scheme_token == "none":
        return None
    scheme = Scheme.from_token(scheme_token)
    if args.target is None or args.threshold is None or args.theta is None:
        raise ValueError("--scheme needs --target, --threshold, and --theta")
    cfg = InterferenceConfig(
        scheme=scheme,
        target=TargetSet.from_token(args.target),
        threshold=args.threshold,
        endowment=args.theta,
    )
    cfg.validate_strict()
    return cfg


def cmd_run(args: argparse.Namespace) -> int:
    net = load_edgelist(args.network)
    game = GameParams(low=args.l, high=args.h)
    interference = _interference_from_args(args)
    sim = SimConfig(
        generations=args.generations, window=args.window,
        noise=args.noise, seed=args.seed, update_mode=args.update,
    )
    result = run_simulation(
        net, game, interference, sim, log_decisions=args.log_decisions is not None
    )

    config_items = [
        ("network", str(args.network)), ("l", repr(args.l)), ("h", repr(args.h)),
        ("generations", str(args.generations)), ("window", str(args.window)),
        ("K", repr(args.noise)), ("update", args.update),
        ("scheme", args.scheme or "none"),
    ]
    if interference is not None:
        config_items += [
            ("target", interference.target.token),
            ("threshold", repr(interference.threshold)),
            ("theta", repr(interference.endowment)),
        ]
    header = _metadata("run", args.seed, config_items)

    freq = result.window_freq
    row = [
        "file", "-", str(args.seed),
        args.scheme or "none",
        interference.target.token if interference else "-",
        repr(float(interference.threshold)) if interference else "0",
        repr(float(interference.endowment)) if interference else "0",
        repr(float(args.l)), repr(float(args.h)), repr(float(args.noise)),
        str(args.generations), str(args.window),
        repr(float(freq[0])), repr(float(freq[1])),
        repr(float(freq[2])), repr(float(freq[3])),
        repr(result.fairness), repr(result.unfair_share),
        repr(result.total_cost), str(result.endowment_events),
    ]
    for line in header:
        print(f"# {line}")
    print(",".join(RESULT_COLUMNS))
    print(",".join(f'"{v}"' if "," in v else v for v in row))
    if args.out:
        write_csv(args.out, RESULT_COLUMNS, [row], header_lines=header)
    if args.log_decisions is not None:
        rows = decision_log_rows(
            args.scheme or "none",
            interference.endowment if interference else 0.0,
            result.decision_counts,
        )
        write_csv(args.log_decisions, DECISION_LOG_COLUMNS, rows, header_lines=header)
    return 0


_CONFIG_SECTIONS = {"network", "game", "sim", "grid", "sweep"}


def load_sweep_config(path: str | Path, master_seed_override: int | None = None) -> SweepSpec:
    """Build a SweepSpec from an INI-style config file; all keys optional."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ValueError(f"config file not found: {path}")
    unknown = set(parser.sections()) - _CONFIG_SECTIONS
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")

    def get(section: str, key: str, fallback):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return fallback

    model = str(get("network", "model", "ba")).lower()
    n = int(get("network", "n", 2000))
    m = int(get("network", "m", 2))
    m0_raw = get("network", "m0", None)
    seeds_raw = get("network", "seeds", None)
    network_seeds = (
        tuple(int(tok) for tok in str(seeds_raw).replace(",", " ").split())
        if seeds_raw is not None
        else tuple(range(10))
    )

    schemes_raw = get("grid", "schemes", None)
    schemes = (
        tuple(Scheme.from_token(tok) for tok in str(schemes_raw).replace(",", " ").split())
        if schemes_raw is not None
        else (Scheme.POP, Scheme.NEB, Scheme.NI_DEG, Scheme.NI_EIG)
    )
    targets_raw = get("grid", "targets", None)
    # Targets are whitespace-separated tokens; a token may contain a comma
    # ("hh,lh" is one target).
    targets = (
        tuple(TargetSet.from_token(tok) for tok in str(targets_raw).split())
        if targets_raw is not None
        else (TargetSet.FAIR_PROPOSERS, TargetSet.FAIR_RESPONDERS, TargetSet.STRICT)
    )

    def float_tuple(section: str, key: str, fallback: tuple[float, ...]) -> tuple[float, ...]:
        raw = get(section, key, None)
        if raw is None:
            return fallback
        return tuple(float(tok) for tok in str(raw).replace(",", " ").split())

    grid = GridSpec(
        schemes=schemes,
        targets=targets,
        thresholds=float_tuple("grid", "thresholds", DEFAULT_SHARE_THRESHOLDS),
        ni_thresholds=float_tuple("grid", "ni_thresholds", DEFAULT_NI_FRACTIONS),
        thetas=float_tuple("grid", "thetas", DEFAULT_THETAS),
    )

    if master_seed_override is not None:
        master_seed = master_seed_override
    else:
        raw_seed = get("sweep", "master_seed", None)
        if raw_seed is None:
            raise ValueError(
                "a master seed is required: set [sweep] master_seed or pass --master-seed"
            )
        master_seed = int(raw_seed)
    return SweepSpec(
        network=GenParams(
            model=model, n=n, m=m, m0=None if m0_raw is None else int(m0_raw), seed=0
        ),
        network_seeds=network_seeds,
        game=GameParams(low=float(get("game", "l", 0.1)), high=float(get("game", "h", 0.6))),
        generations=int(get("sim", "generations", 500_000)),
        window=int(get("sim", "window", 25_000)),
        noise=float(get("sim", "noise", 0.1)),
        update_mode=str(get("sim", "update", UPDATE_SYNC)),
        replicates=int(get("sim", "replicates", 20)),
        master_seed=master_seed,
        grid=grid,
    )


def _spec_config_items(spec: SweepSpec) -> list[tuple[str, str]]:
    return [
        ("model", spec.network.model), ("n", str(spec.network.n)), ("m", str(spec.network.m)),
        ("m0", str(spec.network.m0 if spec.network.m0 is not None else spec.network.m + 1)),
        ("network_seeds", "|".join(map(str, spec.network_seeds))),
        ("l", repr(spec.game.low)), ("h", repr(spec.game.high)),
        ("K", repr(spec.noise)), ("generations", str(spec.generations)),
        ("window", str(spec.window)), ("update", spec.update_mode),
        ("replicates", str(spec.replicates)),
        ("schemes", "|".join(s.value for s in spec.grid.schemes)),
        ("targets", "|".join(t.token for t in spec.grid.targets)),
        ("thresholds", "|".join(map(repr, spec.grid.thresholds))),
        ("ni_thresholds", "|".join(map(repr, spec.grid.ni_thresholds))),
        ("thetas", "|".join(map(repr, spec.grid.thetas))),
    ]


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = load_sweep_config(args.config, args.master_seed)
    outcome = run_sweep(spec, jobs=args.jobs)
    header = _metadata("sweep", spec.master_seed, _spec_config_items(spec))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / "results.csv",
        RESULT_COLUMNS,
        (result_row(spec, rec) for rec in outcome.records),
        header_lines=header,
    )
    write_csv(
        out_dir / "aggregates.csv",
        AGGREGATE_COLUMNS,
        (aggregate_row(spec, cfg, agg) for cfg, agg in outcome.aggregates),
        header_lines=header,
    )
    for failure in outcome.failures:
        print(f"run failed: {failure}", file=sys.stderr)
    print(
        f"sweep: {len(outcome.records)} runs, {len(outcome.aggregates)} grid points, "
        f"{len(outcome.failures)} failures -> {out_dir}"
    )
    return 1 if outcome.failures else 0


def cmd_pareto(args: argparse.Namespace) -> int:
    columns, rows = read_csv(args.inp)
    missing = {"mean_unfair", "mean_cost", "scheme", "target", "threshold", "theta"} - set(columns)
    if missing:
        raise ValueError(f"input is not an aggregate CSV; missing columns {sorted(missing)}")
    front = pareto_front(pareto_points_from_aggregate_rows(rows))
    header = _metadata("pareto", None, [("input", str(args.inp)), ("points", str(len(rows)))])
    write_csv(args.out, PARETO_COLUMNS, (pareto_row(p) for p in front), header_lines=header)
    print(f"pareto: {len(front)} of {len(rows)} points on the front -> {args.out}")
    return 0


def cmd_best(args: argparse.Namespace) -> int:
    columns, rows = read_csv(args.inp)
    missing = {"mean_fairness", "mean_cost", "se_cost", "scheme", "target", "threshold",
               "theta"} - set(columns)
    if missing:
        raise ValueError(f"input is not an aggregate CSV; missing columns {sorted(missing)}")
    levels = _float_list(args.min_fairness, "--min-fairness")
    best = best_rows_from_aggregate_rows(rows, levels)
    header = _metadata(
        "best", None,
        [("input", str(args.inp)), ("levels", "|".join(map(repr, levels)))],
    )
    write_csv(args.out, BEST_COLUMNS, best, header_lines=header)
    print(f"best: {len(best)} rows for {len(levels)} fairness levels -> {args.out}")
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    params = parse_gen_params(args.model, args.n, args.m, args.m0, 0)
    seeds = _int_list(args.network_seeds, "--network-seeds")
    networks = [generate(parse_gen_params(args.model, args.n, args.m, args.m0, s)) for s in seeds]
    low_values = _float_list(args.l_values, "--l-values")
    high_values = _float_list(args.h_values, "--h-values")
    points = baseline_scan(
        low_values, high_values, networks, seeds,
        generations=args.generations, window=args.window, noise=args.noise,
        replicates=args.replicates, master_seed=args.seed, update_mode=args.update,
    )
    header = _metadata(
        "baseline", args.seed,
        [("model", params.model), ("n", str(params.n)), ("m", str(params.m)),
         ("network_seeds", "|".join(map(str, seeds))),
         ("l_values", "|".join(map(repr, low_values))),
         ("h_values", "|".join(map(repr, high_values))),
         ("generations", str(args.generations)), ("window", str(args.window)),
         ("K", repr(args.noise)), ("replicates", str(args.replicates)),
         ("update", args.update)],
    )
    write_csv(args.out, BASELINE_COLUMNS, (baseline_row(p) for p in points), header_lines=header)
    defined = sum(1 for p in points if p.defined)
    print(f"baseline: {defined} simulated points, {len(points) - defined} undefined -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairnet",
        description="Ultimatum-game fairness dynamics and endowment policies on networks",
    )
    parser.add_argument("--version", action="version", version=f"fairnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("netgen", help="generate a network and write its edge list")
    p.add_argument("--model", required=True, choices=("ba", "dms"))
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--m0", type=int, default=None)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_netgen)

    p = sub.add_parser("run", help="run one simulation on a saved network")
    p.add_argument("--network", required=True)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--l", type=float, default=0.1)
    p.add_argument("--h", type=float, default=0.6)
    p.add_argument("--generations", type=int, default=500_000)
    p.add_argument("--window", type=int, default=25_000)
    p.add_argument("--noise", "--K", dest="noise", type=float, default=0.1,
                   help="imitation noise amplitude")
    p.add_argument("--update", choices=UPDATE_MODES, default=UPDATE_SYNC)
    p.add_argument("--scheme", choices=_SCHEME_TOKENS + ("none",), default="none")
    p.add_argument("--target", default=None, help="one of: hh | hh,hl | hh,lh")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--theta", type=float, default=None, help="per-node endowment")
    p.add_argument("--out", default=None)
    p.add_argument("--log-decisions", default=None, metavar="PATH",
                   help="write a per-generation investment log CSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a policy grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--master-seed", type=int, default=None,
                   help="override the config file's master seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pareto", help="extract the Pareto front from an aggregate CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("best", help="cheapest policies meeting fairness levels")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--min-fairness", required=True,
                   help="comma-separated fairness levels, e.g. 0.75,0.9")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_best)

    p = sub.add_parser("baseline", help="offer-level scan without interference")
    p.add_argument("--model", required=True, choices=("ba", "dms"))
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--m", required=True, type=int)
    p.add_argument("--m0", type=int, default=None)
    p.add_argument("--network-seeds", required=True, help="comma-separated seeds")
    p.add_argument("--l-values", required=True)
    p.add_argument("--h-values", required=True)
    p.add_argument("--generations", type=int, default=500_000)
    p.add_argument("--window", type=int, default=25_000)
    p.add_argument("--noise", "--K", dest="noise", type=float, default=0.1)
    p.add_argument("--replicates", type=int, default=20)
    p.add_argument("--update", choices=UPDATE_MODES, default=UPDATE_SYNC)
    p.add_argument("--seed", required=True, type=int, help="master seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
