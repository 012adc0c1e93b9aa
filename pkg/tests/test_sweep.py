from __future__ import annotations

from io import StringIO

import numpy as np
import pytest

from fairnet.game import GameParams
from fairnet.interference import InterferenceConfig, Scheme, TargetSet
from fairnet.metrics import Aggregate
from fairnet.netgen import GenParams
from fairnet.sweep import (
    AGGREGATE_COLUMNS,
    BASELINE_COLUMNS,
    BEST_COLUMNS,
    DECISION_LOG_COLUMNS,
    DEFAULT_NI_FRACTIONS,
    DEFAULT_SHARE_THRESHOLDS,
    DEFAULT_THETAS,
    PARETO_COLUMNS,
    RESULT_COLUMNS,
    SEED_ALGORITHM,
    BaselinePoint,
    GridSpec,
    ParetoPoint,
    SweepSpec,
    aggregate_row,
    baseline_row,
    baseline_scan,
    best_per_fairness,
    best_rows_from_aggregate_rows,
    decision_log_rows,
    derive_replicate_seed,
    pareto_front,
    pareto_points_from_aggregate_rows,
    pareto_row,
    read_csv,
    result_row,
    run_sweep,
    write_csv,
)
from fairnet.netgen import generate


TINY_GRID = GridSpec(
    schemes=(Scheme.NEB,),
    targets=(TargetSet.FAIR_RESPONDERS,),
    thresholds=(0.3,),
    ni_thresholds=(0.01,),
    thetas=(10.0, 56.23),
)


def tiny_spec(**overrides) -> SweepSpec:
    base = dict(
        network=GenParams(model="ba", n=60, m=2),
        network_seeds=(0, 1),
        generations=300,
        window=50,
        replicates=2,
        master_seed=0,
        grid=TINY_GRID,
    )
    base.update(overrides)
    return SweepSpec(**base)


def synth_aggregate(fairness: float, cost: float) -> Aggregate:
    freqs = np.array([fairness, 0.0, 0.0, 1.0 - fairness])
    return Aggregate(
        replicate_count=4,
        mean_freqs=freqs,
        mean_fairness=fairness,
        se_fairness=0.01,
        mean_cost=cost,
        se_cost=1.0,
    )


def test_replicate_seeds_are_frozen_64_bit_hashes() -> None:
    assert SEED_ALGORITHM == "blake2b64"
    assert derive_replicate_seed(0, 1, 0) == 17811131114006815906
    assert derive_replicate_seed(0, 1, 1) == 16322667305867698914
    seeds = {
        derive_replicate_seed(m, n, r)
        for m in range(3)
        for n in range(10)
        for r in range(20)
    }
    assert len(seeds) == 600
    assert all(0 <= s < 2**64 for s in seeds)


def test_default_grids() -> None:
    assert DEFAULT_THETAS == (10.0, 17.78, 23.71, 31.62, 42.16, 56.23, 74.98)
    assert DEFAULT_SHARE_THRESHOLDS == (
        0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
    )
    expected_fractions = tuple(
        sorted(
            {0.001, 0.003, 0.004, 0.005, 0.007, 0.017, 0.031, 0.177}
            | {round(10.0 ** (-3.0 + 0.25 * k), 6) for k in range(10)}
        )
    )
    assert DEFAULT_NI_FRACTIONS == expected_fractions
    assert DEFAULT_NI_FRACTIONS[0] == 0.001
    assert DEFAULT_NI_FRACTIONS[-1] == 0.177828


def test_grid_points_order_and_threshold_selection() -> None:
    grid = GridSpec(
        schemes=(Scheme.POP, Scheme.NI_DEG),
        targets=(TargetSet.STRICT,),
        thresholds=(0.2, 0.4),
        ni_thresholds=(0.001,),
        thetas=(10.0, 20.0),
    )
    assert grid.thresholds_for(Scheme.POP) == (0.2, 0.4)
    assert grid.thresholds_for(Scheme.NEB) == (0.2, 0.4)
    assert grid.thresholds_for(Scheme.NI_DEG) == (0.001,)
    assert grid.thresholds_for(Scheme.NI_EIG) == (0.001,)
    points = list(grid.points())
    keys = [(p.scheme.value, p.threshold, p.endowment) for p in points]
    assert keys == [
        ("pop", 0.2, 10.0), ("pop", 0.2, 20.0),
        ("pop", 0.4, 10.0), ("pop", 0.4, 20.0),
        ("ni-deg", 0.001, 10.0), ("ni-deg", 0.001, 20.0),
    ]
    assert all(p.target is TargetSet.STRICT for p in points)


def test_sweep_spec_reference_defaults() -> None:
    spec = SweepSpec()
    assert spec.network == GenParams(model="ba", n=2000, m=2)
    assert spec.network_seeds == tuple(range(10))
    assert spec.generations == 500_000
    assert spec.window == 25_000
    assert spec.noise == 0.1
    assert spec.replicates == 20
    assert spec.master_seed == 0
    sim = spec.sim_config(seed=99)
    assert sim.seed == 99
    assert sim.generations == 500_000
    assert sim.window == 25_000


def test_sweep_spec_validation() -> None:
    with pytest.raises(ValueError):
        tiny_spec(replicates=0)
    with pytest.raises(ValueError):
        tiny_spec(network_seeds=())
    with pytest.raises(ValueError):
        tiny_spec(grid=GridSpec(thetas=(10.0, 0.0)))
    with pytest.raises(ValueError):
        tiny_spec(grid=GridSpec(thetas=(-5.0,)))


def test_tiny_sweep_shape_and_determinism() -> None:
    spec = tiny_spec()
    outcome = run_sweep(spec)
    assert outcome.failures == []
    assert len(outcome.records) == 8  # 2 grid points x 2 networks x 2 replicates
    assert len(outcome.aggregates) == 2
    for cfg, agg in outcome.aggregates:
        assert agg.replicate_count == 4
        assert cfg.scheme is Scheme.NEB

    # replicate seeds recorded on rows must re-derive from coordinates
    for rec in outcome.records:
        assert rec.replicate_seed == derive_replicate_seed(
            spec.master_seed, rec.network_seed, rec.replicate
        )

    again = run_sweep(spec)
    first = [result_row(spec, rec) for rec in outcome.records]
    second = [result_row(spec, rec) for rec in again.records]
    assert first == second


def test_sweep_worker_count_does_not_change_output() -> None:
    spec = tiny_spec()
    serial = run_sweep(spec, jobs=1)
    parallel = run_sweep(spec, jobs=2)
    assert [result_row(spec, r) for r in serial.records] == [
        result_row(spec, r) for r in parallel.records
    ]
    assert [
        aggregate_row(spec, cfg, agg) for cfg, agg in serial.aggregates
    ] == [aggregate_row(spec, cfg, agg) for cfg, agg in parallel.aggregates]


def test_sweep_captures_per_run_failures() -> None:
    spec = tiny_spec(network=GenParams(model="ba", n=1, m=2), network_seeds=(0,))
    outcome = run_sweep(spec)
    assert outcome.records == []
    assert outcome.aggregates == []
    assert len(outcome.failures) == 4  # 2 grid points x 2 replicates
    assert "scheme=neb" in outcome.failures[0]
    assert "network_seed=0" in outcome.failures[0]
    assert "replicate=1" in outcome.failures[1]


def test_pareto_front_toy_example() -> None:
    points = [
        ParetoPoint(0.1, 100.0),
        ParetoPoint(0.2, 50.0),
        ParetoPoint(0.15, 120.0),
    ]
    front = pareto_front(points)
    assert [(p.unfair, p.mean_cost) for p in front] == [(0.1, 100.0), (0.2, 50.0)]


def test_pareto_front_keeps_single_point_and_ties() -> None:
    only = ParetoPoint(0.3, 10.0)
    assert pareto_front([only]) == [only]

    tied = [ParetoPoint(0.1, 100.0), ParetoPoint(0.1, 90.0)]
    assert pareto_front(tied) == [ParetoPoint(0.1, 90.0), ParetoPoint(0.1, 100.0)]

    twins = [ParetoPoint(0.2, 5.0), ParetoPoint(0.2, 5.0)]
    assert len(pareto_front(twins)) == 2


def test_pareto_front_matches_quadratic_oracle() -> None:
    rng = np.random.default_rng(17)
    points = [
        ParetoPoint(float(u), float(c))
        for u, c in zip(rng.random(300), rng.random(300) * 100)
    ]
    oracle = [
        p
        for p in points
        if not any(
            q.unfair < p.unfair and q.mean_cost < p.mean_cost for q in points
        )
    ]
    front = pareto_front(points)
    assert sorted((p.unfair, p.mean_cost) for p in front) == sorted(
        (p.unfair, p.mean_cost) for p in oracle
    )
    unfairs = [p.unfair for p in front]
    assert unfairs == sorted(unfairs)


def test_best_per_fairness_picks_cheapest_per_scheme() -> None:
    def cfg(scheme: Scheme, threshold: float, theta: float) -> InterferenceConfig:
        return InterferenceConfig(scheme, TargetSet.FAIR_RESPONDERS, threshold, theta)

    aggregates = [
        (cfg(Scheme.POP, 0.5, 10.0), synth_aggregate(0.92, 800.0)),
        (cfg(Scheme.POP, 0.6, 10.0), synth_aggregate(0.97, 450.0)),
        (cfg(Scheme.NEB, 0.3, 56.23), synth_aggregate(0.91, 300.0)),
        (cfg(Scheme.NEB, 0.7, 10.0), synth_aggregate(0.70, 100.0)),
    ]
    rows = best_per_fairness(aggregates, levels=[0.75, 0.90, 0.99])
    as_tuples = [
        (level, c.scheme.value, c.threshold, a.mean_cost) for level, c, a in rows
    ]
    # nothing reaches 0.99, so that level contributes no rows at all
    assert as_tuples == [
        (0.75, "neb", 0.3, 300.0),
        (0.75, "pop", 0.6, 450.0),
        (0.90, "neb", 0.3, 300.0),
        (0.90, "pop", 0.6, 450.0),
    ]
    assert best_per_fairness(aggregates, levels=[1.01]) == []


def test_best_per_fairness_tie_breaks_on_threshold_then_theta() -> None:
    def cfg(threshold: float, theta: float) -> InterferenceConfig:
        return InterferenceConfig(Scheme.NEB, TargetSet.STRICT, threshold, theta)

    same_cost = [
        (cfg(0.5, 20.0), synth_aggregate(0.95, 200.0)),
        (cfg(0.4, 30.0), synth_aggregate(0.95, 200.0)),
        (cfg(0.4, 25.0), synth_aggregate(0.95, 200.0)),
    ]
    rows = best_per_fairness(same_cost, levels=[0.9])
    assert len(rows) == 1
    _, picked, _ = rows[0]
    assert (picked.threshold, picked.endowment) == (0.4, 25.0)


def test_baseline_scan_marks_degenerate_offer_pairs() -> None:
    nets = [generate(GenParams(model="ba", n=40, m=2, seed=s)) for s in (0,)]
    points = baseline_scan(
        low_values=[0.1, 0.6],
        high_values=[0.5],
        networks=nets,
        network_seeds=[0],
        generations=60,
        window=20,
        noise=0.1,
        replicates=1,
        master_seed=0,
    )
    assert [(p.low, p.high, p.defined) for p in points] == [
        (0.1, 0.5, True), (0.6, 0.5, False),
    ]
    live, dead = points
    assert dead.mean_freqs is None and dead.fairness is None
    assert live.fairness == pytest.approx(live.mean_freqs[0] + live.mean_freqs[1])
    assert live.mean_freqs.sum() == pytest.approx(1.0)


def test_csv_round_trip_preserves_full_precision() -> None:
    columns = ("a", "b")
    rows = [[repr(0.1), repr(1.0 / 3.0)], [repr(56.23 * 3), "7"]]
    sink = StringIO()
    write_csv(sink, columns, rows, header_lines=["first", "", "second"])
    text = sink.getvalue()
    assert text.startswith("# first\n#\n# second\na,b\n")

    got_columns, got_rows = read_csv(StringIO(text))
    assert got_columns == ["a", "b"]
    assert float(got_rows[0]["a"]) == 0.1
    assert float(got_rows[0]["b"]) == 1.0 / 3.0
    assert float(got_rows[1]["a"]) == 56.23 * 3


def test_csv_reader_reports_bad_row_width() -> None:
    with pytest.raises(ValueError, match="row 2"):
        read_csv(StringIO("a,b\n1,2\n1,2,3\n"))
    with pytest.raises(ValueError):
        read_csv(StringIO("# only comments\n"))


def test_csv_files_round_trip_on_disk(tmp_path) -> None:
    path = tmp_path / "table.csv"
    write_csv(path, ("x",), [["1"], ["2"]], header_lines=["note"])
    columns, rows = read_csv(path)
    assert columns == ["x"]
    assert [r["x"] for r in rows] == ["1", "2"]


def test_column_tuples_are_frozen() -> None:
    assert RESULT_COLUMNS == (
        "model", "network_seed", "replicate_seed", "scheme", "target",
        "threshold", "theta", "l", "h", "K", "generations", "window",
        "freq_hh", "freq_hl", "freq_lh", "freq_ll", "fairness", "unfair",
        "total_cost", "endowment_events",
    )
    assert AGGREGATE_COLUMNS == (
        "model", "scheme", "target", "threshold", "theta", "l", "h", "K",
        "generations", "window", "runs", "mean_freq_hh", "mean_freq_hl",
        "mean_freq_lh", "mean_freq_ll", "mean_fairness", "se_fairness",
        "mean_unfair", "mean_cost", "se_cost",
    )
    assert PARETO_COLUMNS == (
        "model", "scheme", "target", "threshold", "theta", "unfair", "mean_cost",
    )
    assert BEST_COLUMNS == (
        "scheme", "min_fairness", "target", "threshold", "theta",
        "cost_mean", "cost_se",
    )
    assert BASELINE_COLUMNS == (
        "l", "h", "defined", "freq_hh", "freq_hl", "freq_lh", "freq_ll", "fairness",
    )
    assert DECISION_LOG_COLUMNS == ("generation", "scheme", "invested_count", "cost_delta")


def test_result_row_widths_and_formats() -> None:
    spec = tiny_spec()
    outcome = run_sweep(spec)
    for rec in outcome.records:
        row = result_row(spec, rec)
        assert len(row) == len(RESULT_COLUMNS)
        assert row[0] == "ba"
        assert row[3] == "neb"
        assert row[4] == "hh,lh"
        # full-precision repr round-trips bit-exactly
        assert float(row[5]) == rec.config.threshold
        assert float(row[6]) == rec.config.endowment
        assert float(row[18]) == rec.result.total_cost
    for cfg, agg in outcome.aggregates:
        row = aggregate_row(spec, cfg, agg)
        assert len(row) == len(AGGREGATE_COLUMNS)
        assert row[10] == "4"
        assert float(row[18]) == agg.mean_cost


def test_pareto_row_presentation_formats() -> None:
    point = ParetoPoint(
        unfair=0.123456789,
        mean_cost=1234.5678,
        coords=(
            ("model", "ba"), ("scheme", "neb"), ("target", "hh,lh"),
            ("threshold", "0.3"), ("theta", "56.23"),
        ),
    )
    row = pareto_row(point)
    assert row == ["ba", "neb", "hh,lh", "0.3", "56.23", "0.123457", "1234.57"]


def test_baseline_row_presentation() -> None:
    live = BaselinePoint(0.1, 0.6, True, np.array([0.25, 0.25, 0.25, 0.25]), 0.5)
    assert baseline_row(live) == ["0.1", "0.6", "1", "0.25", "0.25", "0.25", "0.25", "0.5"]
    dead = BaselinePoint(0.6, 0.5, False, None, None)
    assert baseline_row(dead) == ["0.6", "0.5", "0", "", "", "", "", ""]


def test_decision_log_rows_keep_only_active_generations() -> None:
    counts = np.array([0, 2, 0, 1])
    rows = decision_log_rows("neb", 56.23, counts)
    assert rows == [
        ["2", "neb", "2", "112.46"],
        ["4", "neb", "1", "56.23"],
    ]
    assert decision_log_rows("pop", 10.0, np.zeros(5, dtype=int)) == []


def test_best_rows_from_csv_agree_with_object_route() -> None:
    spec = tiny_spec()
    outcome = run_sweep(spec)
    csv_rows = [
        dict(zip(AGGREGATE_COLUMNS, aggregate_row(spec, cfg, agg)))
        for cfg, agg in outcome.aggregates
    ]
    levels = [0.1, 0.5, 0.9]
    from_csv = best_rows_from_aggregate_rows(csv_rows, levels)
    from_objects = best_per_fairness(outcome.aggregates, levels)
    assert len(from_csv) == len(from_objects)
    for row, (level, cfg, agg) in zip(from_csv, from_objects):
        assert row[0] == cfg.scheme.value
        assert float(row[1]) == level
        assert row[2] == cfg.target.token
        assert float(row[3]) == pytest.approx(cfg.threshold, rel=1e-5)
        assert float(row[4]) == pytest.approx(cfg.endowment, rel=1e-5)
        assert row[5] == f"{agg.mean_cost:.2f}"


def test_pareto_points_from_aggregate_csv_rows() -> None:
    spec = tiny_spec()
    outcome = run_sweep(spec)
    csv_rows = [
        dict(zip(AGGREGATE_COLUMNS, aggregate_row(spec, cfg, agg)))
        for cfg, agg in outcome.aggregates
    ]
    points = pareto_points_from_aggregate_rows(csv_rows)
    assert len(points) == len(outcome.aggregates)
    for point, (cfg, agg) in zip(points, outcome.aggregates):
        assert point.unfair == agg.mean_unfair
        assert point.mean_cost == agg.mean_cost
        coords = dict(point.coords)
        assert coords["scheme"] == cfg.scheme.value
        assert coords["model"] == "ba"
