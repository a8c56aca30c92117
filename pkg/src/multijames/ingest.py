"""Turn multi-competitor event results into pairwise records and percentages.

An event with k finishers is scored as all C(k, 2) head-to-head games: the
better-placed competitor beats each competitor ranked below it.  A third-place
finisher out of ten therefore picks up seven wins and two losses.
"""

from __future__ import annotations

import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

__all__ = [
    "EventRecord",
    "MalformedRanksError",
    "PairResult",
    "Standings",
    "TiedRanksError",
    "TiesPolicy",
    "UnbalancedScheduleWarning",
    "build_standings",
    "expand_event",
]


class TiesPolicy(Enum):
    REJECT = "reject"
    HALF = "half"


class TiedRanksError(ValueError):
    pass


class MalformedRanksError(ValueError):
    pass


class UnbalancedScheduleWarning(UserWarning):
    """Pairwise records are far from the equal-schedule assumption."""


@dataclass(frozen=True)
class EventRecord:
    event_id: str
    placements: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        placements = tuple((str(name), int(rank)) for name, rank in self.placements)
        if len(placements) < 2:
            raise MalformedRanksError(
                f"event {self.event_id!r}: needs at least 2 competitors"
            )
        names = [name for name, _ in placements]
        if len(set(names)) != len(names):
            raise MalformedRanksError(
                f"event {self.event_id!r}: repeated competitor names"
            )
        if any(rank < 1 for _, rank in placements):
            raise MalformedRanksError(f"event {self.event_id!r}: ranks must be >= 1")
        object.__setattr__(self, "placements", placements)


@dataclass(frozen=True)
class PairResult:
    """One head-to-head outcome: scores sum to 1 (0.5 each for a tie)."""

    u: str
    v: str
    u_score: float
    v_score: float


def _validate_ranks(e: EventRecord, ties: TiesPolicy) -> None:
    ranks = sorted(rank for _, rank in e.placements)
    k = len(ranks)
    if ties is TiesPolicy.REJECT:
        if len(set(ranks)) != k:
            raise TiedRanksError(f"event {e.event_id!r}: tied ranks {ranks}")
        if ranks != list(range(1, k + 1)):
            raise MalformedRanksError(
                f"event {e.event_id!r}: ranks {ranks} are not a permutation of 1..{k}"
            )
    else:
        # Competition ranking: a rank equals 1 + the number of strictly
        # better finishers, so (1, 1, 3) is valid and (1, 1, 2) is not.
        counts = Counter(ranks)
        for rank in counts:
            better = sum(c for r, c in counts.items() if r < rank)
            if rank != better + 1:
                raise MalformedRanksError(
                    f"event {e.event_id!r}: ranks {ranks} break competition ranking"
                )


def expand_event(e: EventRecord, ties: TiesPolicy = TiesPolicy.REJECT) -> list[PairResult]:
    """All-pairs results for one event, one entry per unordered pair."""
    _validate_ranks(e, ties)
    results = []
    placements = e.placements
    for i in range(len(placements)):
        name_i, rank_i = placements[i]
        for j in range(i + 1, len(placements)):
            name_j, rank_j = placements[j]
            if rank_i < rank_j:
                results.append(PairResult(name_i, name_j, 1.0, 0.0))
            elif rank_j < rank_i:
                results.append(PairResult(name_i, name_j, 0.0, 1.0))
            else:
                results.append(PairResult(name_i, name_j, 0.5, 0.5))
    return results


@dataclass
class Standings:
    wins: dict[str, float] = field(default_factory=dict)
    losses: dict[str, float] = field(default_factory=dict)
    pairwise: dict[tuple[str, str], tuple[float, float]] = field(default_factory=dict)
    ties_policy: TiesPolicy = TiesPolicy.REJECT

    def competitors(self) -> list[str]:
        return sorted(self.wins)

    def games(self, name: str) -> float:
        return self.wins.get(name, 0.0) + self.losses.get(name, 0.0)

    def pct(self, name: str) -> float:
        games = self.games(name)
        if games == 0:
            raise ValueError(f"{name!r} has no games; winning percentage undefined")
        return self.wins[name] / games

    def as_dict(self) -> dict:
        return {
            "ties_policy": self.ties_policy.value,
            "competitors": {
                name: {
                    "wins": self.wins[name],
                    "losses": self.losses[name],
                    "pct": self.pct(name) if self.games(name) else None,
                }
                for name in self.competitors()
            },
            "pairwise": [
                {"u": u, "v": v, "u_wins": uw, "v_wins": vw}
                for (u, v), (uw, vw) in sorted(self.pairwise.items())
            ],
        }


def build_standings(
    events: Iterable[EventRecord], ties: TiesPolicy = TiesPolicy.REJECT
) -> Standings:
    """Aggregate all-pairs results over events; order of events is irrelevant."""
    wins: dict[str, float] = defaultdict(float)
    losses: dict[str, float] = defaultdict(float)
    pairwise: dict[tuple[str, str], list[float]] = defaultdict(lambda: [0.0, 0.0])
    for event in events:
        for r in expand_event(event, ties):
            u, v = sorted((r.u, r.v))
            u_score = r.u_score if u == r.u else r.v_score
            wins[u] += u_score
            losses[u] += 1.0 - u_score
            wins[v] += 1.0 - u_score
            losses[v] += u_score
            cell = pairwise[(u, v)]
            cell[0] += u_score
            cell[1] += 1.0 - u_score
    standings = Standings(
        wins=dict(wins),
        losses=dict(losses),
        pairwise={k: (v[0], v[1]) for k, v in pairwise.items()},
        ties_policy=ties,
    )
    games = [standings.games(name) for name in standings.competitors()]
    if games and max(games) > 10 * min(games):
        warnings.warn(
            "pairwise records are highly unbalanced (>10x game-count spread); "
            "the equal-schedule assumption is doubtful",
            UnbalancedScheduleWarning,
            stacklevel=2,
        )
    return standings
