"""Imitation dynamics of the networked ultimatum game.

A generation consists of a fitness sweep (every node accumulates the
role-averaged payoff against each neighbor, starting from zero), an optional
endowment round, and an imitation sweep. Under synchronous updating every
node draws one uniform neighbor and adopts that neighbor's pre-update
strategy with the Fermi probability; all adoptions land simultaneously.
Asynchronous updating instead performs one node update at a time, N per
generation, recomputing the two local fitnesses on the current state.

Runs are bit-deterministic given the network, the seed, and the
configuration; endowment decisions consume no randomness, so a zero endowment
reproduces the uninterfered trajectory exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import GameParams, STRATEGY_COUNT, payoff_matrix
from .interference import InterferenceConfig, apply_endowments, prepare_decider
from .netgen import Network

UPDATE_SYNC = "sync"
UPDATE_ASYNC = "async"
UPDATE_MODES = (UPDATE_SYNC, UPDATE_ASYNC)


@dataclass(frozen=True)
class SimConfig:
    """Length, averaging window, imitation noise, seed, and update mode."""

    generations: int = 500_000
    window: int = 25_000
    noise: float = 0.1
    seed: int = 0
    update_mode: str = UPDATE_SYNC

    def __post_init__(self) -> None:
        if self.generations < 1:
            raise ValueError(f"generations must be positive, got {self.generations}")
        if not (1 <= self.window <= self.generations):
            raise ValueError(
                f"window must lie in [1, generations], got window={self.window} "
                f"generations={self.generations}"
            )
        if not self.noise > 0.0:
            raise ValueError(f"noise must be positive, got {self.noise!r}")
        if self.update_mode not in UPDATE_MODES:
            raise ValueError(f"update_mode must be one of {UPDATE_MODES}, got {self.update_mode!r}")


@dataclass
class PopulationState:
    """Per-node strategies and fitness at some generation."""

    strategies: np.ndarray
    fitness: np.ndarray
    generation: int = 0


@dataclass(frozen=True)
class RunResult:
    """Outcome of one simulation run.

    ``freq_trajectory`` holds one strategy-frequency row per recorded
    generation (the averaging window unless full recording was requested),
    ``recorded_from`` the 1-based generation of its first row. ``total_cost``
    is exactly ``endowment * endowment_events``. ``decision_counts`` is the
    per-generation invested-node count when decision logging was on.
    """

    freq_trajectory: np.ndarray
    window_freq: np.ndarray
    fairness: float
    total_cost: float
    endowment_events: int
    recorded_from: int
    decision_counts: np.ndarray | None = field(default=None, repr=False)

    @property
    def unfair_share(self) -> float:
        return 1.0 - self.fairness


def init_population(net: Network, rng: np.random.Generator) -> PopulationState:
    """Independent uniform strategy draw per node; fitness starts at zero."""
    strategies = rng.integers(0, STRATEGY_COUNT, size=net.node_count)
    return PopulationState(
        strategies=strategies,
        fitness=np.zeros(net.node_count, dtype=np.float64),
        generation=0,
    )


def _payoff_sums(strategies: np.ndarray, net: Network, matrix: np.ndarray) -> np.ndarray:
    against = matrix[strategies[net.arc_src], strategies[net.arc_dst]]
    return np.bincount(net.arc_src, weights=against, minlength=net.node_count)


def compute_fitness(state: PopulationState, net: Network, matrix: np.ndarray) -> np.ndarray:
    """Sum of payoff-matrix entries against every neighbor (fresh, no carry)."""
    return _payoff_sums(state.strategies, net, matrix)


def fermi_probability(score_focal, score_model, noise: float):
    """Probability that the focal agent copies the model agent.

    ``1 / (1 + exp((f_focal - f_model) / noise))``: 1/2 at equal scores,
    approaching 1 when the model scores far higher. Evaluated through
    ``exp(-|x|)`` only, so arbitrarily large score gaps neither overflow nor
    lose the exact complement identity beyond rounding.
    """
    if not noise > 0.0:
        raise ValueError(f"noise must be positive, got {noise!r}")
    x = (np.asarray(score_focal, dtype=np.float64) - np.asarray(score_model, dtype=np.float64))
    x = x / noise
    t = np.exp(-np.abs(x))
    p = np.where(x > 0.0, t / (1.0 + t), 1.0 / (1.0 + t))
    if p.ndim == 0:
        return float(p)
    return p


def _sync_sweep(
    strategies: np.ndarray,
    fitness: np.ndarray,
    net: Network,
    rng: np.random.Generator,
    noise: float,
) -> np.ndarray:
    picks = net.adj_ptr[:-1] + (rng.random(net.node_count) * net.degrees).astype(np.int64)
    models = net.adj_flat[picks]
    p = fermi_probability(fitness, fitness[models], noise)
    adopt = rng.random(net.node_count) < p
    return np.where(adopt, strategies[models], strategies)


def _async_sweep(
    strategies: np.ndarray,
    net: Network,
    matrix: np.ndarray,
    surplus: np.ndarray,
    rng: np.random.Generator,
    noise: float,
) -> None:
    # In-place sequential updates; local fitness recomputed on the live state.
    flat, ptr = net.adj_flat, net.adj_ptr
    n = net.node_count
    agents = rng.integers(0, n, size=n)
    for i in agents:
        nbrs_i = flat[ptr[i]: ptr[i + 1]]
        j = int(nbrs_i[int(rng.random() * nbrs_i.size)])
        nbrs_j = flat[ptr[j]: ptr[j + 1]]
        f_i = float(matrix[strategies[i], strategies[nbrs_i]].sum()) + surplus[i]
        f_j = float(matrix[strategies[j], strategies[nbrs_j]].sum()) + surplus[j]
        if rng.random() < fermi_probability(f_i, f_j, noise):
            strategies[i] = strategies[j]


def imitation_step(
    state: PopulationState,
    net: Network,
    rng: np.random.Generator,
    mode: str = UPDATE_SYNC,
    *,
    matrix: np.ndarray | None = None,
    noise: float = 0.1,
) -> PopulationState:
    """One imitation sweep from ``state``; returns the successor state.

    Synchronous mode uses ``state.fitness`` as-is (endowments included if the
    caller applied them); asynchronous mode needs ``matrix`` to recompute
    local fitness and treats ``state.fitness`` as a per-node surplus to add
    on top.
    """
    if mode not in UPDATE_MODES:
        raise ValueError(f"mode must be one of {UPDATE_MODES}, got {mode!r}")
    if mode == UPDATE_SYNC:
        strategies = _sync_sweep(state.strategies, state.fitness, net, rng, noise)
    else:
        if matrix is None:
            raise ValueError("asynchronous updating needs the payoff matrix")
        strategies = state.strategies.copy()
        _async_sweep(strategies, net, matrix, state.fitness, rng, noise)
    return PopulationState(
        strategies=strategies,
        fitness=np.zeros(net.node_count, dtype=np.float64),
        generation=state.generation + 1,
    )


def run_simulation(
    net: Network,
    game_params: GameParams,
    interference: InterferenceConfig | None,
    sim: SimConfig,
    *,
    record_full: bool = False,
    log_decisions: bool = False,
) -> RunResult:
    """Simulate ``sim.generations`` generations and average the final window."""
    if net.node_count < 2 or int(net.degrees.min()) < 1:
        raise ValueError("simulation needs every node to have at least one neighbor")

    rng = np.random.default_rng(sim.seed)
    strategies = init_population(net, rng).strategies
    matrix = payoff_matrix(game_params)
    n = net.node_count
    src, dst, ptr, flat = net.arc_src, net.arc_dst, net.adj_ptr[:-1], net.adj_flat
    degrees = net.degrees.astype(np.float64)
    noise = sim.noise
    sync = sim.update_mode == UPDATE_SYNC

    decider = prepare_decider(interference, net) if interference is not None else None
    generations, window = sim.generations, sim.window
    recorded_from = 1 if record_full else generations - window + 1
    trajectory = np.empty((generations - recorded_from + 1, 4), dtype=np.float64)
    decision_counts = np.zeros(generations, dtype=np.int64) if log_decisions else None

    events = 0
    for gen in range(1, generations + 1):
        fitness = np.bincount(
            src, weights=matrix[strategies[src], strategies[dst]], minlength=n
        )
        if decider is not None:
            decision = decider(strategies)
            apply_endowments(decision, fitness)
            events += decision.count
            if decision_counts is not None:
                decision_counts[gen - 1] = decision.count

        if sync:
            picks = ptr + (rng.random(n) * degrees).astype(np.int64)
            models = flat[picks]
            gap = (fitness - fitness[models]) / noise
            t = np.exp(-np.abs(gap))
            p = np.where(gap > 0.0, t / (1.0 + t), 1.0 / (1.0 + t))
            adopt = rng.random(n) < p
            strategies = np.where(adopt, strategies[models], strategies)
        else:
            surplus = np.zeros(n, dtype=np.float64)
            if decider is not None and decision.count:
                surplus[decision.invested] = interference.endowment
            _async_sweep(strategies, net, matrix, surplus, rng, noise)

        if gen >= recorded_from:
            trajectory[gen - recorded_from] = np.bincount(strategies, minlength=4) / n

    window_freq = trajectory[-window:].mean(axis=0)
    total_cost = interference.endowment * events if interference is not None else 0.0
    return RunResult(
        freq_trajectory=trajectory,
        window_freq=window_freq,
        fairness=float(window_freq[0] + window_freq[1]),
        total_cost=total_cost,
        endowment_events=events,
        recorded_from=recorded_from,
        decision_counts=decision_counts,
    )
