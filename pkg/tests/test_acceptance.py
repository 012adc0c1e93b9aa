"""End-to-end acceptance checks, one test per guarantee.

Each test here states one externally visible property of the package:
exact payoff algebra, network ensemble shape, centrality and Pareto oracles,
Fermi-rule numerics, bit-exact cost accounting, byte-identical reruns, and
the scaled qualitative behaviour of endowment policies on a 500-node network.
Run with ``pytest -v tests/test_acceptance.py`` for a line per guarantee.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from fairnet.cli import main
from fairnet.dynamics import RunResult, SimConfig, fermi_probability, run_simulation
from fairnet.game import GameParams, Strategy, one_shot_payoffs, payoff_entry, payoff_matrix
from fairnet.interference import InterferenceConfig, Scheme, TargetSet
from fairnet.metrics import fairness, mean_se
from fairnet.netgen import (
    GenParams,
    Network,
    degree_centrality,
    eigenvector_centrality,
    fit_power_law_exponent,
    generate,
    network_stats,
)
from fairnet.sweep import ParetoPoint, derive_replicate_seed, pareto_front


DESK_NETWORK = GenParams(model="ba", n=500, m=2, seed=1)
DESK_SIM = dict(generations=50_000, window=5_000)
DESK_REPLICATES = 10
DESK_TARGET = TargetSet.FAIR_RESPONDERS  # invest in high offers and low demands


def desk_seeds() -> list[int]:
    return [derive_replicate_seed(0, 1, r) for r in range(DESK_REPLICATES)]


def run_desk_batch(
    interference: InterferenceConfig | None, log_decisions: bool = False
) -> tuple[list[RunResult], float]:
    net = generate(DESK_NETWORK)
    started = time.perf_counter()
    results = [
        run_simulation(
            net,
            GameParams(low=0.1, high=0.6),
            interference,
            SimConfig(seed=seed, **DESK_SIM),
            log_decisions=log_decisions,
        )
        for seed in desk_seeds()
    ]
    return results, time.perf_counter() - started


@pytest.fixture(scope="module")
def baseline_batch() -> tuple[list[RunResult], float]:
    return run_desk_batch(None)


@pytest.fixture(scope="module")
def efficacy_batch() -> tuple[list[RunResult], float]:
    cfg = InterferenceConfig(Scheme.NEB, DESK_TARGET, threshold=0.7, endowment=56.23)
    return run_desk_batch(cfg)


@pytest.fixture(scope="module")
def strong_endowment_batch() -> tuple[list[RunResult], float]:
    cfg = InterferenceConfig(Scheme.NEB, DESK_TARGET, threshold=0.7, endowment=74.98)
    return run_desk_batch(cfg, log_decisions=True)


@pytest.fixture(scope="module")
def weak_endowment_batch() -> tuple[list[RunResult], float]:
    cfg = InterferenceConfig(Scheme.NEB, DESK_TARGET, threshold=0.7, endowment=10.0)
    return run_desk_batch(cfg)


def random_connected_network(rng: np.random.Generator) -> Network:
    n = int(rng.integers(5, 51))
    edges = {(int(rng.integers(0, i)), i) for i in range(1, n)}
    for _ in range(int(rng.integers(0, 2 * n))):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            edges.add((min(int(i), int(j)), max(int(i), int(j))))
    return Network(n, sorted(edges))


def test_payoff_entries_match_role_enumeration_oracle() -> None:
    started = time.perf_counter()
    rng = np.random.default_rng(1234)
    for _ in range(50):
        low = float(rng.uniform(0.0, 0.98))
        high = float(rng.uniform(low + 1e-6, 1.0))
        params = GameParams(low=low, high=high)
        for a in Strategy:
            for b in Strategy:
                as_proposer = one_shot_payoffs(a, b, params)[0]
                as_responder = one_shot_payoffs(b, a, params)[1]
                expected = 0.5 * (as_proposer + as_responder)
                assert abs(payoff_entry(a, b, params) - expected) <= 1e-12
    assert time.perf_counter() - started < 1.0


def test_payoff_closed_forms_at_reference_offers() -> None:
    params = GameParams(low=0.1, high=0.6)
    matrix = payoff_matrix(params)
    assert matrix[Strategy.LH, Strategy.HL] == 0.75
    assert matrix[Strategy.HH, Strategy.LH] == 0.2
    assert matrix[Strategy.LL, Strategy.LH] == 0.05
    assert matrix[Strategy.HH, Strategy.HH] == 0.5
    assert matrix[Strategy.LH, Strategy.LH] == 0.0


def test_scale_free_network_suite() -> None:
    started = time.perf_counter()
    clustering_wins = 0
    for seed in range(10):
        ba = generate(GenParams(model="ba", n=2000, m=2, seed=seed))
        assert abs(ba.mean_degree - 4.0) / 4.0 < 0.01
        dms = generate(GenParams(model="dms", n=2000, m=2, seed=seed))
        if network_stats(dms).global_clustering > network_stats(ba).global_clustering:
            clustering_wins += 1
    assert clustering_wins >= 9

    big = generate(GenParams(model="ba", n=10_000, m=2, seed=0))
    gamma = fit_power_law_exponent(big.degrees)
    assert 2.5 <= gamma <= 3.5
    assert time.perf_counter() - started < 30.0


def test_centrality_against_dense_eigendecomposition() -> None:
    started = time.perf_counter()
    rng = np.random.default_rng(77)
    for _ in range(100):
        net = random_connected_network(rng)
        n = net.node_count

        dense = np.zeros((n, n))
        for u, v in net.edge_pairs():
            dense[u, v] = dense[v, u] = 1.0
        eigenvalues, eigenvectors = np.linalg.eigh(dense)
        principal = eigenvectors[:, -1]
        if principal.sum() < 0:
            principal = -principal
        principal /= np.linalg.norm(principal)

        ranking = eigenvector_centrality(net)
        assert np.abs(ranking.values - principal).max() < 1e-6
        # every pair the oracle separates beyond tolerance must be ordered
        # the same way by the package's ranking
        position = np.empty(n, dtype=np.int64)
        position[ranking.order] = np.arange(n)
        separated = np.abs(principal[:, None] - principal[None, :]) > 1e-6
        oracle_less = principal[:, None] < principal[None, :]
        ranked_less = position[:, None] < position[None, :]
        assert (oracle_less[separated] == ranked_less[separated]).all()

        degree = degree_centrality(net)
        np.testing.assert_array_equal(degree.values, net.degrees / (n - 1))
    assert time.perf_counter() - started < 10.0


def test_fermi_rule_numerical_properties() -> None:
    rng = np.random.default_rng(5)
    a = rng.uniform(-500.0, 500.0, size=1_000_000)
    b = rng.uniform(-500.0, 500.0, size=1_000_000)
    with np.errstate(over="raise"):
        forward = fermi_probability(a, b, 0.1)
        backward = fermi_probability(b, a, 0.1)
        assert np.abs(forward + backward - 1.0).max() <= 1e-12

        ties = rng.uniform(-100.0, 100.0, size=1000)
        assert (fermi_probability(ties, ties, 0.1) == 0.5).all()
        assert fermi_probability(0.0, 0.0, 0.1) == 0.5

        # |score gap| / noise up to 1e4 in both directions
        assert fermi_probability(1000.0, 0.0, 0.1) == 0.0
        assert fermi_probability(0.0, 1000.0, 0.1) == 1.0


def test_logged_cost_recomputes_bit_exactly(strong_endowment_batch) -> None:
    results, _ = strong_endowment_batch
    theta = 74.98
    for result in results:
        assert result.decision_counts is not None
        events = int(result.decision_counts.sum())
        assert events == result.endowment_events
        assert theta * events == result.total_cost


def test_desk_sweep_byte_identical_across_reruns(tmp_path) -> None:
    config = tmp_path / "desk.ini"
    config.write_text(
        "[network]\n"
        "model = ba\n"
        "n = 500\n"
        "m = 2\n"
        "seeds = 0 1\n"
        "\n"
        "[sim]\n"
        "generations = 20000\n"
        "window = 2500\n"
        "replicates = 2\n"
        "\n"
        "[grid]\n"
        "schemes = neb\n"
        "targets = hh,lh\n"
        "thresholds = 0.3 0.7\n"
        "thetas = 10.0 56.23\n"
        "\n"
        "[sweep]\n"
        "master_seed = 0\n"
    )
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert main(["sweep", "--config", str(config), "--out-dir", str(first), "--jobs", "2"]) == 0
    assert main(["sweep", "--config", str(config), "--out-dir", str(second), "--jobs", "2"]) == 0
    for name in ("results.csv", "aggregates.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_uninterfered_baseline_stays_mostly_unfair(baseline_batch) -> None:
    results, seconds = baseline_batch
    mean_fairness, _ = mean_se([r.fairness for r in results])
    assert mean_fairness < 0.5
    assert seconds < 120.0


def test_neighbourhood_endowments_restore_fairness(baseline_batch, efficacy_batch) -> None:
    baseline_results, _ = baseline_batch
    endowed_results, seconds = efficacy_batch
    baseline_mean, _ = mean_se([r.fairness for r in baseline_results])
    endowed_mean, _ = mean_se([r.fairness for r in endowed_results])
    assert endowed_mean >= baseline_mean + 0.3
    assert sum(1 for r in endowed_results if r.fairness >= 0.9) >= 7
    assert seconds < 300.0


def test_strong_endowment_dominates_and_absorbed_runs_stop_costing(
    strong_endowment_batch, weak_endowment_batch
) -> None:
    strong_results, _ = strong_endowment_batch
    weak_results, _ = weak_endowment_batch
    strong_mean, _ = mean_se([r.fairness for r in strong_results])
    weak_mean, _ = mean_se([r.fairness for r in weak_results])
    assert strong_mean >= weak_mean

    generations = DESK_SIM["generations"]
    window = DESK_SIM["window"]
    absorbed = [
        r for r in strong_results if fairness(r.freq_trajectory[0]) > 0.99
    ]
    assert absorbed, "no replicate absorbed before the recording window"
    for result in absorbed:
        pre = result.decision_counts[: generations - window]
        tail = result.decision_counts[generations - window:]
        pre_rate = pre.sum() / (generations - window)
        tail_rate = tail.sum() / window
        assert pre_rate > 0.0
        assert tail_rate < 0.05 * pre_rate


def test_pareto_front_equals_quadratic_scan() -> None:
    rng = np.random.default_rng(31)
    points = [
        ParetoPoint(float(u), float(c), coords=(("index", str(k)),))
        for k, (u, c) in enumerate(zip(rng.random(1000), rng.random(1000) * 1e4))
    ]
    oracle = sorted(
        (
            (p.unfair, p.mean_cost, p.coords)
            for p in points
            if not any(
                q.unfair < p.unfair and q.mean_cost < p.mean_cost for q in points
            )
        ),
    )
    front = [(p.unfair, p.mean_cost, p.coords) for p in pareto_front(points)]
    assert front == oracle
