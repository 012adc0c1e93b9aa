"""Fairness dynamics of the networked ultimatum game, with endowment policies."""

from .game import GameParams, Strategy, one_shot_payoffs, payoff_entry, payoff_matrix
from .netgen import (
    CentralityRanking,
    GenParams,
    Network,
    NetworkStats,
    degree_centrality,
    eigenvector_centrality,
    generate,
    generate_ba,
    generate_dms,
    load_edgelist,
    network_stats,
    save_edgelist,
)
from .dynamics import (
    PopulationState,
    RunResult,
    SimConfig,
    compute_fitness,
    fermi_probability,
    imitation_step,
    init_population,
    run_simulation,
)
from .interference import (
    InterferenceConfig,
    InvestmentDecision,
    Scheme,
    TargetSet,
    apply_endowments,
    decide_neb,
    decide_ni,
    decide_pop,
    eligible,
)
from .metrics import Aggregate, aggregate, fairness, mean_se, unfair_share, window_average
from .sweep import (
    GridSpec,
    ParetoPoint,
    SweepSpec,
    baseline_scan,
    best_per_fairness,
    derive_replicate_seed,
    pareto_front,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "CentralityRanking",
    "GameParams",
    "GenParams",
    "GridSpec",
    "InterferenceConfig",
    "InvestmentDecision",
    "Network",
    "NetworkStats",
    "ParetoPoint",
    "PopulationState",
    "RunResult",
    "Scheme",
    "SimConfig",
    "Strategy",
    "SweepSpec",
    "TargetSet",
    "aggregate",
    "apply_endowments",
    "baseline_scan",
    "best_per_fairness",
    "compute_fitness",
    "decide_neb",
    "decide_ni",
    "decide_pop",
    "degree_centrality",
    "derive_replicate_seed",
    "eigenvector_centrality",
    "eligible",
    "fairness",
    "fermi_probability",
    "generate",
    "generate_ba",
    "generate_dms",
    "imitation_step",
    "init_population",
    "load_edgelist",
    "mean_se",
    "network_stats",
    "one_shot_payoffs",
    "pareto_front",
    "payoff_entry",
    "payoff_matrix",
    "run_simulation",
    "run_sweep",
    "save_edgelist",
    "unfair_share",
    "window_average",
]
