"""Institutional endowment schemes.

Every generation, after fitness is computed and before imitation, an external
institution may pay a fixed endowment on top of the game fitness of selected
nodes. All schemes are deterministic functions of the strategy state (they
consume no randomness), pay the same per-node amount, and only ever pay nodes
whose current strategy is in the configured target set:

- population-wide: invest in every target node, but only while the population
  share of target strategies has not yet exceeded the threshold;
- neighborhood: invest in a target node while the fraction of its neighbors
  playing target strategies has not yet exceeded the threshold;
- influential nodes: invest in target nodes among a fixed candidate list of
  the most central nodes (degree or eigenvector centrality, computed once on
  the static network); the threshold is the candidate fraction of the
  population.

Thresholds are inclusive: a coverage exactly at the threshold still invests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .game import STRATEGY_COUNT, Strategy
from .netgen import CentralityRanking, Network, degree_centrality, eigenvector_centrality


class TargetSet(Enum):
    """Strategy sets an institution may deem desirable."""

    FAIR_PROPOSERS = ("hh,hl", (Strategy.HH, Strategy.HL))
    FAIR_RESPONDERS = ("hh,lh", (Strategy.HH, Strategy.LH))
    STRICT = ("hh", (Strategy.HH,))

    def __init__(self, token: str, members: tuple[Strategy, ...]) -> None:
        self.token = token
        self.members = frozenset(members)
        mask = np.zeros(STRATEGY_COUNT, dtype=bool)
        for s in members:
            mask[s] = True
        mask.setflags(write=False)
        self.mask = mask

    @classmethod
    def from_token(cls, token: str) -> "TargetSet":
        normalized = "".join(str(token).lower().split())
        for member in cls:
            if member.token == normalized:
                return member
        expected = ", ".join(repr(m.token) for m in cls)
        raise ValueError(f"unknown target {token!r}; expected one of {expected}")


class Scheme(Enum):
    POP = "pop"
    NEB = "neb"
    NI_DEG = "ni-deg"
    NI_EIG = "ni-eig"

    @classmethod
    def from_token(cls, token: str) -> "Scheme":
        normalized = str(token).lower()
        for member in cls:
            if member.value == normalized:
                return member
        expected = ", ".join(repr(m.value) for m in cls)
        raise ValueError(f"unknown scheme {token!r}; expected one of {expected}")


@dataclass(frozen=True)
class InterferenceConfig:
    """One scheme instance: what to reward, when, and by how much.

    ``threshold`` is a coverage bound for the population-wide and neighborhood
    schemes and the candidate fraction for the influential-node schemes.
    ``endowment`` is the per-node per-generation payment; valid configurations
    require it positive (zero is tolerated by the engine and pays nothing).
    """

    scheme: Scheme
    target: TargetSet
    threshold: float
    endowment: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.threshold <= 1.0):
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold!r}")
        if self.endowment < 0.0:
            raise ValueError(f"endowment must be non-negative, got {self.endowment!r}")

    def validate_strict(self) -> None:
        """User-facing validation: endowments must be strictly positive."""
        if not self.endowment > 0.0:
            raise ValueError("endowment must be positive")


@dataclass(frozen=True)
class InvestmentDecision:
    """Nodes endowed this generation and the resulting cost."""

    invested: np.ndarray
    endowment: float

    @property
    def count(self) -> int:
        return int(self.invested.size)

    @property
    def cost_delta(self) -> float:
        return self.endowment * self.count


def eligible(strategy: Strategy, target: TargetSet) -> bool:
    """Whether a strategy belongs to the target set."""
    return Strategy(strategy) in target.members


def eligibility_mask(strategies: np.ndarray, target: TargetSet) -> np.ndarray:
    """Boolean per-node mask of target-set membership."""
    return target.mask[strategies]


_EMPTY = np.empty(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def decide_pop(
    strategies: np.ndarray, target: TargetSet, threshold: float, endowment: float
) -> InvestmentDecision:
    """All-or-nothing population-wide decision.

    Coverage is the share of nodes currently playing a target strategy,
    measured on the state entering the generation. At or below the threshold
    every target node is endowed; above it nobody is.
    """
    mask = eligibility_mask(strategies, target)
    coverage = mask.sum() / strategies.size
    if coverage <= threshold:
        return InvestmentDecision(np.flatnonzero(mask), endowment)
    return InvestmentDecision(_EMPTY, endowment)


def decide_neb(
    strategies: np.ndarray,
    net: Network,
    target: TargetSet,
    threshold: float,
    endowment: float,
) -> InvestmentDecision:
    """Per-node neighborhood decision.

    A target node is endowed while the fraction of its neighbors playing
    target strategies is at or below the threshold.
    """
    mask = eligibility_mask(strategies, target)
    in_target = mask[net.arc_dst].astype(np.float64)
    neighbor_share = (
        np.bincount(net.arc_src, weights=in_target, minlength=net.node_count) / net.degrees
    )
    invest = mask & (neighbor_share <= threshold)
    return InvestmentDecision(np.flatnonzero(invest), endowment)


def candidate_count(fraction: float, node_count: int) -> int:
    """ceil(fraction * n), computed with a small slack against float excess.

    A positive fraction always yields at least one candidate.
    """
    if fraction <= 0.0:
        return 0
    raw = math.ceil(fraction * node_count - 1e-9)
    return max(1, min(node_count, raw))


def ni_candidates(ranking: CentralityRanking, fraction: float) -> np.ndarray:
    """Fixed candidate list: the top ``ceil(fraction * n)`` of the ranking."""
    return ranking.top(candidate_count(fraction, ranking.order.size))


def decide_ni(
    strategies: np.ndarray,
    ranking: CentralityRanking,
    target: TargetSet,
    threshold: float,
    endowment: float,
) -> InvestmentDecision:
    """Influential-node decision against a centrality ranking.

    Candidates are the ``ceil(threshold * n)`` highest-ranked nodes; those
    currently playing a target strategy are endowed.
    """
    candidates = ni_candidates(ranking, threshold)
    return decide_ni_static(strategies, candidates, target, endowment)


def decide_ni_static(
    strategies: np.ndarray,
    candidates: np.ndarray,
    target: TargetSet,
    endowment: float,
) -> InvestmentDecision:
    """Influential-node decision with a precomputed candidate list."""
    invested = candidates[target.mask[strategies[candidates]]]
    return InvestmentDecision(invested, endowment)


def apply_endowments(decision: InvestmentDecision, fitness: np.ndarray) -> float:
    """Add the endowment to the invested nodes' fitness; returns the cost."""
    if decision.count:
        fitness[decision.invested] += decision.endowment
    return decision.cost_delta


Decider = Callable[[np.ndarray], InvestmentDecision]


def prepare_decider(cfg: InterferenceConfig, net: Network) -> Decider:
    """Bind a config to a network; centralities are computed once, here."""
    if cfg.scheme is Scheme.POP:
        return lambda strategies: decide_pop(strategies, cfg.target, cfg.threshold, cfg.endowment)
    if cfg.scheme is Scheme.NEB:
        return lambda strategies: decide_neb(
            strategies, net, cfg.target, cfg.threshold, cfg.endowment
        )
    ranking = (
        degree_centrality(net) if cfg.scheme is Scheme.NI_DEG else eigenvector_centrality(net)
    )
    candidates = ni_candidates(ranking, cfg.threshold)
    return lambda strategies: decide_ni_static(strategies, candidates, cfg.target, cfg.endowment)
