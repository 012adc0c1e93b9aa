"""Ultimatum-game strategies and the role-averaged payoff matrix.

Players carry a two-letter strategy: the first letter is the offer they make
as proposer (H = high, L = low), the second the minimum offer they accept as
responder. A pairwise interaction plays both role assignments once and
averages, so the matrix entry for (row, col) is

    0.5 * (proposer payoff of row against col + responder payoff of row
           when col proposes),

with an offer accepted whenever it is greater than or equal to the
responder's threshold (ties accept).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class Strategy(IntEnum):
    """Offer level then acceptance level; values index the payoff matrix."""

    HH = 0
    HL = 1
    LH = 2
    LL = 3

    @property
    def offers_high(self) -> bool:
        return self in (Strategy.HH, Strategy.HL)

    @property
    def demands_high(self) -> bool:
        return self in (Strategy.HH, Strategy.LH)


STRATEGIES: tuple[Strategy, ...] = tuple(Strategy)
STRATEGY_COUNT = len(STRATEGIES)


@dataclass(frozen=True)
class GameParams:
    """The two admissible offer sizes, shared by proposers and responders.

    ``low`` and ``high`` are fractions of the unit pie; a valid game needs
    ``0 <= low < high <= 1``.
    """

    low: float = 0.1
    high: float = 0.6

    def __post_init__(self) -> None:
        if not (0.0 <= self.low < self.high <= 1.0):
            raise ValueError(
                "offer levels must satisfy 0 <= low < high <= 1, "
                f"got low={self.low!r} high={self.high!r}"
            )

    def offer(self, strategy: Strategy) -> float:
        """Amount ``strategy`` offers when proposing."""
        return self.high if Strategy(strategy).offers_high else self.low

    def threshold(self, strategy: Strategy) -> float:
        """Minimum offer ``strategy`` accepts when responding."""
        return self.high if Strategy(strategy).demands_high else self.low


def one_shot_payoffs(
    proposer: Strategy, responder: Strategy, params: GameParams
) -> tuple[float, float]:
    """Payoffs (proposer, responder) of a single directed encounter.

    The proposer keeps ``1 - offer`` and the responder receives ``offer`` when
    the offer meets the responder's threshold; both get nothing on rejection.
    """
    offer = params.offer(proposer)
    if offer >= params.threshold(responder):
        return 1.0 - offer, offer
    return 0.0, 0.0


def payoff_entry(row: Strategy, col: Strategy, params: GameParams) -> float:
    """Role-averaged payoff of the row strategy against the column strategy."""
    as_proposer, _ = one_shot_payoffs(row, col, params)
    _, as_responder = one_shot_payoffs(col, row, params)
    return 0.5 * (as_proposer + as_responder)


def payoff_matrix(params: GameParams) -> np.ndarray:
    """4x4 read-only matrix of role-averaged payoffs, indexed by Strategy."""
    matrix = np.empty((STRATEGY_COUNT, STRATEGY_COUNT), dtype=np.float64)
    for row in STRATEGIES:
        for col in STRATEGIES:
            matrix[row, col] = payoff_entry(row, col, params)
    matrix.setflags(write=False)
    return matrix
