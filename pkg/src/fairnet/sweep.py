"""Policy sweeps: grid execution, aggregation, Pareto fronts, cost minima.

A sweep expands a grid of (scheme, target, threshold, endowment) points over
a set of generated networks and replicate seeds, runs every combination, and
reduces the results deterministically: the raw per-run table and the pooled
per-grid-point aggregates come out byte-identical no matter how many worker
processes executed the runs.

Per-replicate seeds derive from blake2b("master:network_seed:replicate"), so
any single run can be reproduced in isolation from its CSV row.
"""

from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from io import StringIO
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .dynamics import RunResult, SimConfig, run_simulation
from .game import GameParams
from .interference import InterferenceConfig, Scheme, TargetSet
from .metrics import Aggregate, aggregate, fairness as fairness_of, mean_se
from .netgen import GenParams, Network, generate

SEED_ALGORITHM = "blake2b64"

DEFAULT_THETAS: tuple[float, ...] = (10.0, 17.78, 23.71, 31.62, 42.16, 56.23, 74.98)
DEFAULT_SHARE_THRESHOLDS: tuple[float, ...] = tuple(round(0.1 * k, 1) for k in range(1, 11))
DEFAULT_NI_FRACTIONS: tuple[float, ...] = tuple(
    sorted(
        {0.001, 0.003, 0.004, 0.005, 0.007, 0.017, 0.031, 0.177}
        | {round(10.0 ** (-3.0 + 0.25 * k), 6) for k in range(10)}
    )
)

RESULT_COLUMNS = (
    "model", "network_seed", "replicate_seed", "scheme", "target", "threshold",
    "theta", "l", "h", "K", "generations", "window", "freq_hh", "freq_hl",
    "freq_lh", "freq_ll", "fairness", "unfair", "total_cost", "endowment_events",
)
AGGREGATE_COLUMNS = (
    "model", "scheme", "target", "threshold", "theta", "l", "h", "K",
    "generations", "window", "runs", "mean_freq_hh", "mean_freq_hl",
    "mean_freq_lh", "mean_freq_ll", "mean_fairness", "se_fairness",
    "mean_unfair", "mean_cost", "se_cost",
)
PARETO_COLUMNS = ("model", "scheme", "target", "threshold", "theta", "unfair", "mean_cost")
BEST_COLUMNS = ("scheme", "min_fairness", "target", "threshold", "theta", "cost_mean", "cost_se")
BASELINE_COLUMNS = ("l", "h", "defined", "freq_hh", "freq_hl", "freq_lh", "freq_ll", "fairness")
DECISION_LOG_COLUMNS = ("generation", "scheme", "invested_count", "cost_delta")


def derive_replicate_seed(master_seed: int, network_seed: int, replicate: int) -> int:
    """Stable 64-bit per-run seed from the master seed and run coordinates."""
    digest = hashlib.blake2b(
        f"{master_seed}:{network_seed}:{replicate}".encode("ascii"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class GridSpec:
    """The policy grid. Fraction-style thresholds for the influential-node
    schemes default separately from the coverage thresholds of the others."""

    schemes: tuple[Scheme, ...] = (Scheme.POP, Scheme.NEB, Scheme.NI_DEG, Scheme.NI_EIG)
    targets: tuple[TargetSet, ...] = (
        TargetSet.FAIR_PROPOSERS, TargetSet.FAIR_RESPONDERS, TargetSet.STRICT,
    )
    thresholds: tuple[float, ...] = DEFAULT_SHARE_THRESHOLDS
    ni_thresholds: tuple[float, ...] = DEFAULT_NI_FRACTIONS
    thetas: tuple[float, ...] = DEFAULT_THETAS

    def thresholds_for(self, scheme: Scheme) -> tuple[float, ...]:
        if scheme in (Scheme.NI_DEG, Scheme.NI_EIG):
            return self.ni_thresholds
        return self.thresholds

    def points(self) -> Iterator[InterferenceConfig]:
        """Grid points in deterministic (scheme, target, threshold, theta) order."""
        for scheme in self.schemes:
            for target in self.targets:
                for threshold in self.thresholds_for(scheme):
                    for theta in self.thetas:
                        yield InterferenceConfig(
                            scheme=scheme, target=target,
                            threshold=threshold, endowment=theta,
                        )


@dataclass(frozen=True)
class SweepSpec:
    """Everything a sweep needs; every field has a reproducible default."""

    network: GenParams = GenParams(model="ba", n=2000, m=2)
    network_seeds: tuple[int, ...] = tuple(range(10))
    game: GameParams = GameParams()
    generations: int = 500_000
    window: int = 25_000
    noise: float = 0.1
    update_mode: str = "sync"
    replicates: int = 20
    master_seed: int = 0
    grid: GridSpec = GridSpec()

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError(f"replicates must be positive, got {self.replicates}")
        if not self.network_seeds:
            raise ValueError("at least one network seed is required")
        for theta in self.grid.thetas:
            if not theta > 0.0:
                raise ValueError(f"endowments must be positive, got {theta!r}")

    def sim_config(self, seed: int) -> SimConfig:
        return SimConfig(
            generations=self.generations, window=self.window,
            noise=self.noise, seed=seed, update_mode=self.update_mode,
        )


@dataclass(frozen=True)
class SweepRecord:
    """One (grid point, network seed, replicate) outcome."""

    config: InterferenceConfig
    network_seed: int
    replicate: int
    replicate_seed: int
    result: RunResult


@dataclass
class SweepOutcome:
    spec: SweepSpec
    records: list[SweepRecord]
    aggregates: list[tuple[InterferenceConfig, Aggregate]]
    failures: list[str] = field(default_factory=list)


# Worker-side cache: networks are deterministic in their parameters, so each
# process regenerates them once instead of unpickling per task.
_NET_CACHE: dict[GenParams, Network] = {}


def _network_for(params: GenParams) -> Network:
    net = _NET_CACHE.get(params)
    if net is None:
        net = generate(params)
        _NET_CACHE[params] = net
    return net


def _run_unit(
    unit: tuple[SweepSpec, InterferenceConfig, int, int]
) -> tuple[InterferenceConfig, int, int, int, RunResult]:
    spec, cfg, network_seed, replicate = unit
    net = _network_for(replace(spec.network, seed=network_seed))
    seed = derive_replicate_seed(spec.master_seed, network_seed, replicate)
    result = run_simulation(net, spec.game, cfg, spec.sim_config(seed))
    return cfg, network_seed, replicate, seed, result


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepOutcome:
    """Execute the whole grid; failures are collected, not fatal.

    ``jobs`` bounds process parallelism; the reduced output is identical for
    any value because records are keyed and sorted, never appended in
    completion order.
    """
    points = list(spec.grid.points())
    units = [
        (spec, cfg, network_seed, replicate)
        for cfg in points
        for network_seed in spec.network_seeds
        for replicate in range(spec.replicates)
    ]

    keyed: dict[tuple, SweepRecord] = {}
    failures: list[str] = []

    def consume(unit, payload, error) -> None:
        spec_, cfg, network_seed, replicate = unit
        if error is not None:
            failures.append(
                f"scheme={cfg.scheme.value} target={cfg.target.token} "
                f"threshold={cfg.threshold!r} theta={cfg.endowment!r} "
                f"network_seed={network_seed} replicate={replicate}: {error}"
            )
            return
        cfg, network_seed, replicate, seed, result = payload
        key = _config_key(cfg) + (network_seed, replicate)
        keyed[key] = SweepRecord(cfg, network_seed, replicate, seed, result)

    if jobs <= 1:
        for unit in units:
            try:
                consume(unit, _run_unit(unit), None)
            except Exception as exc:  # noqa: BLE001 - per-run isolation is the point
                consume(unit, None, exc)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(unit, pool.submit(_run_unit, unit)) for unit in units]
            for unit, future in futures:
                try:
                    consume(unit, future.result(), None)
                except Exception as exc:  # noqa: BLE001
                    consume(unit, None, exc)

    records = [keyed[key] for key in sorted(keyed)]
    grouped: dict[tuple, list[RunResult]] = {}
    for rec in records:
        grouped.setdefault(_config_key(rec.config), []).append(rec.result)
    aggregates = [
        (cfg, aggregate(grouped[_config_key(cfg)]))
        for cfg in points
        if _config_key(cfg) in grouped
    ]
    return SweepOutcome(spec=spec, records=records, aggregates=aggregates, failures=failures)


def _config_key(cfg: InterferenceConfig) -> tuple:
    return (cfg.scheme.value, cfg.target.token, cfg.threshold, cfg.endowment)


@dataclass(frozen=True)
class ParetoPoint:
    """A grid point in objective space: (unfair share, mean cost) to minimize."""

    unfair: float
    mean_cost: float
    coords: tuple[tuple[str, str], ...] = ()


def pareto_front(points: Sequence[ParetoPoint]) -> list[ParetoPoint]:
    """Points not strictly beaten in BOTH objectives; ties kept.

    Sorted by unfair share ascending (then cost, then coordinates) so equal
    inputs give equal output bytes.
    """
    front = [
        p
        for p in points
        if not any(
            q.unfair < p.unfair and q.mean_cost < p.mean_cost for q in points
        )
    ]
    return sorted(front, key=lambda p: (p.unfair, p.mean_cost, p.coords))


def best_per_fairness(
    aggregates: Sequence[tuple[InterferenceConfig, Aggregate]],
    levels: Sequence[float],
) -> list[tuple[float, InterferenceConfig, Aggregate]]:
    """Cheapest qualifying grid point per (fairness level, scheme).

    A point qualifies when its mean fairness is at least the level; schemes
    with no qualifying point contribute no row. Cost ties break on threshold,
    then endowment, then target token.
    """
    rows: list[tuple[float, InterferenceConfig, Aggregate]] = []
    for level in levels:
        schemes = sorted({cfg.scheme.value for cfg, _ in aggregates})
        for scheme_token in schemes:
            qualifying = [
                (cfg, agg)
                for cfg, agg in aggregates
                if cfg.scheme.value == scheme_token and agg.mean_fairness >= level
            ]
            if not qualifying:
                continue
            cfg, agg = min(
                qualifying,
                key=lambda pair: (
                    pair[1].mean_cost, pair[0].threshold, pair[0].endowment,
                    pair[0].target.token,
                ),
            )
            rows.append((level, cfg, agg))
    return rows


@dataclass(frozen=True)
class BaselinePoint:
    low: float
    high: float
    defined: bool
    mean_freqs: np.ndarray | None
    fairness: float | None


def baseline_scan(
    low_values: Sequence[float],
    high_values: Sequence[float],
    networks: Sequence[Network],
    network_seeds: Sequence[int],
    generations: int,
    window: int,
    noise: float,
    replicates: int,
    master_seed: int,
    update_mode: str = "sync",
) -> list[BaselinePoint]:
    """No-interference fairness over an offer-level grid.

    Only points with ``low < high`` are simulated; the rest are emitted as
    undefined placeholders so grid consumers keep their shape.
    """
    points: list[BaselinePoint] = []
    for low in low_values:
        for high in high_values:
            if not low < high:
                points.append(BaselinePoint(low, high, False, None, None))
                continue
            game = GameParams(low=low, high=high)
            results: list[RunResult] = []
            for net, net_seed in zip(networks, network_seeds):
                for replicate in range(replicates):
                    seed = derive_replicate_seed(master_seed, net_seed, replicate)
                    sim = SimConfig(
                        generations=generations, window=window, noise=noise,
                        seed=seed, update_mode=update_mode,
                    )
                    results.append(run_simulation(net, game, None, sim))
            agg = aggregate(results)
            points.append(
                BaselinePoint(low, high, True, agg.mean_freqs, fairness_of(agg.mean_freqs))
            )
    return points


# --- CSV plumbing -----------------------------------------------------------
#
# Machine artifacts (results, aggregates, decision logs) carry full
# round-trip precision; presentation artifacts (pareto, best, baseline) use
# 6 significant digits with costs at 2 decimals.


def _full(x: float) -> str:
    return repr(float(x))


def _sig6(x: float) -> str:
    return f"{float(x):.6g}"


def _cost2(x: float) -> str:
    return f"{float(x):.2f}"


def write_csv(
    sink: str | Path | IO[str],
    columns: Sequence[str],
    rows: Iterable[Sequence[str]],
    header_lines: Sequence[str] = (),
) -> None:
    """Write '#' metadata lines, a column header, then the rows."""
    buffer = StringIO()
    for line in header_lines:
        buffer.write(f"# {line}\n" if line else "#\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    payload = buffer.getvalue()
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(payload, encoding="ascii")
    else:
        sink.write(payload)


def read_csv(source: str | Path | IO[str]) -> tuple[list[str], list[dict[str, str]]]:
    """Read a CSV written by :func:`write_csv`, skipping '#' comment lines.

    Returns (columns, rows-as-dicts). Raises ValueError with the 1-based data
    row number when a row's width disagrees with the header.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="ascii")
    else:
        text = source.read()
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not lines:
        raise ValueError("no CSV content found")
    reader = csv.reader(lines)
    columns = next(reader)
    rows: list[dict[str, str]] = []
    for number, row in enumerate(reader, start=1):
        if len(row) != len(columns):
            raise ValueError(
                f"row {number}: expected {len(columns)} fields, got {len(row)}"
            )
        rows.append(dict(zip(columns, row)))
    return columns, rows


def result_row(spec: SweepSpec, record: SweepRecord) -> list[str]:
    cfg, res = record.config, record.result
    freq = res.window_freq
    return [
        spec.network.model,
        str(record.network_seed),
        str(record.replicate_seed),
        cfg.scheme.value,
        cfg.target.token,
        _full(cfg.threshold),
        _full(cfg.endowment),
        _full(spec.game.low),
        _full(spec.game.high),
        _full(spec.noise),
        str(spec.generations),
        str(spec.window),
        _full(freq[0]), _full(freq[1]), _full(freq[2]), _full(freq[3]),
        _full(res.fairness),
        _full(res.unfair_share),
        _full(res.total_cost),
        str(res.endowment_events),
    ]


def aggregate_row(spec: SweepSpec, cfg: InterferenceConfig, agg: Aggregate) -> list[str]:
    freq = agg.mean_freqs
    return [
        spec.network.model,
        cfg.scheme.value,
        cfg.target.token,
        _full(cfg.threshold),
        _full(cfg.endowment),
        _full(spec.game.low),
        _full(spec.game.high),
        _full(spec.noise),
        str(spec.generations),
        str(spec.window),
        str(agg.replicate_count),
        _full(freq[0]), _full(freq[1]), _full(freq[2]), _full(freq[3]),
        _full(agg.mean_fairness),
        _full(agg.se_fairness),
        _full(agg.mean_unfair),
        _full(agg.mean_cost),
        _full(agg.se_cost),
    ]


def pareto_row(point: ParetoPoint) -> list[str]:
    coords = dict(point.coords)
    return [
        coords.get("model", ""),
        coords.get("scheme", ""),
        coords.get("target", ""),
        coords.get("threshold", ""),
        coords.get("theta", ""),
        _sig6(point.unfair),
        _cost2(point.mean_cost),
    ]


def pareto_points_from_aggregate_rows(rows: Sequence[dict[str, str]]) -> list[ParetoPoint]:
    points = []
    for row in rows:
        points.append(
            ParetoPoint(
                unfair=float(row["mean_unfair"]),
                mean_cost=float(row["mean_cost"]),
                coords=(
                    ("model", row.get("model", "")),
                    ("scheme", row["scheme"]),
                    ("target", row["target"]),
                    ("threshold", _sig6(float(row["threshold"]))),
                    ("theta", _sig6(float(row["theta"]))),
                ),
            )
        )
    return points


def best_rows_from_aggregate_rows(
    rows: Sequence[dict[str, str]], levels: Sequence[float]
) -> list[list[str]]:
    """Table rows (scheme, level, coordinates, cost mean +/- se) from a parsed
    aggregate CSV; pure post-processing, no simulation."""
    out: list[list[str]] = []
    for level in levels:
        schemes = sorted({row["scheme"] for row in rows})
        for scheme_token in schemes:
            qualifying = [
                row
                for row in rows
                if row["scheme"] == scheme_token and float(row["mean_fairness"]) >= level
            ]
            if not qualifying:
                continue
            pick = min(
                qualifying,
                key=lambda row: (
                    float(row["mean_cost"]), float(row["threshold"]),
                    float(row["theta"]), row["target"],
                ),
            )
            out.append(
                [
                    scheme_token,
                    _sig6(level),
                    pick["target"],
                    _sig6(float(pick["threshold"])),
                    _sig6(float(pick["theta"])),
                    _cost2(float(pick["mean_cost"])),
                    _cost2(float(pick["se_cost"])),
                ]
            )
    return out


def baseline_row(point: BaselinePoint) -> list[str]:
    if not point.defined:
        return [_sig6(point.low), _sig6(point.high), "0", "", "", "", "", ""]
    freq = point.mean_freqs
    return [
        _sig6(point.low), _sig6(point.high), "1",
        _sig6(freq[0]), _sig6(freq[1]), _sig6(freq[2]), _sig6(freq[3]),
        _sig6(point.fairness),
    ]


def decision_log_rows(scheme_token: str, endowment: float, counts: np.ndarray) -> list[list[str]]:
    """Rows for generations with at least one endowed node."""
    rows = []
    for generation in np.flatnonzero(counts):
        count = int(counts[generation])
        rows.append(
            [str(int(generation) + 1), scheme_token, str(count), _full(endowment * count)]
        )
    return rows
