import math
import random

import pytest

from multijames.ingest import (
    EventRecord,
    MalformedRanksError,
    TiedRanksError,
    TiesPolicy,
    UnbalancedScheduleWarning,
    build_standings,
    expand_event,
)


def event(event_id, *placements):
    return EventRecord(event_id, tuple(placements))


class TestEventRecord:
    def test_needs_two_competitors(self):
        with pytest.raises(MalformedRanksError):
            event("e1", ("solo", 1))

    def test_rejects_repeated_names(self):
        with pytest.raises(MalformedRanksError):
            event("e1", ("x", 1), ("x", 2))

    def test_rejects_nonpositive_ranks(self):
        with pytest.raises(MalformedRanksError):
            event("e1", ("x", 0), ("y", 1))


class TestExpandEvent:
    def test_third_of_ten(self):
        e = event("race", *((f"c{r}", r) for r in range(1, 11)))
        results = expand_event(e)
        assert len(results) == math.comb(10, 2)
        focal_wins = sum(
            r.u_score if r.u == "c3" else r.v_score
            for r in results
            if "c3" in (r.u, r.v)
        )
        focal_games = sum(1 for r in results if "c3" in (r.u, r.v))
        assert focal_wins == 7
        assert focal_games - focal_wins == 2

    def test_two_competitors_single_pair(self):
        results = expand_event(event("e", ("a", 1), ("b", 2)))
        assert len(results) == 1
        assert (results[0].u_score, results[0].v_score) == (1.0, 0.0)

    def test_tied_ranks_rejected(self):
        e = event("e", ("a", 1), ("b", 1), ("c", 3))
        with pytest.raises(TiedRanksError):
            expand_event(e, TiesPolicy.REJECT)

    def test_tied_ranks_half_policy(self):
        e = event("e", ("a", 1), ("b", 1), ("c", 3))
        results = expand_event(e, TiesPolicy.HALF)
        tied = next(r for r in results if {r.u, r.v} == {"a", "b"})
        assert (tied.u_score, tied.v_score) == (0.5, 0.5)

    def test_rank_gaps_rejected(self):
        with pytest.raises(MalformedRanksError):
            expand_event(event("e", ("a", 1), ("b", 3)))

    def test_half_policy_requires_competition_ranking(self):
        # (1, 1, 2) skips nobody for the tie, so it is malformed.
        with pytest.raises(MalformedRanksError):
            expand_event(event("e", ("a", 1), ("b", 1), ("c", 2)), TiesPolicy.HALF)


class TestBuildStandings:
    def test_single_event_percentages(self):
        e = event("race", *((f"c{r}", r) for r in range(1, 11)))
        standings = build_standings([e])
        for r in range(1, 11):
            assert standings.pct(f"c{r}") == pytest.approx((10 - r) / 9, rel=1e-15)

    def test_win_loss_balance(self):
        events = [
            event("e1", *((f"c{r}", r) for r in range(1, 6))),
            event("e2", ("c1", 1), ("c2", 2), ("x", 3)),
        ]
        standings = build_standings(events)
        total_pairs = math.comb(5, 2) + math.comb(3, 2)
        assert sum(standings.wins.values()) == total_pairs
        assert sum(standings.losses.values()) == total_pairs

    def test_event_order_invariance(self):
        events = [
            event("e1", ("a", 1), ("b", 2), ("c", 3)),
            event("e2", ("b", 1), ("a", 2)),
            event("e3", ("c", 1), ("a", 2), ("b", 3)),
        ]
        forward = build_standings(events)
        rng = random.Random(0)
        for _ in range(5):
            shuffled = list(events)
            rng.shuffle(shuffled)
            assert build_standings(shuffled).as_dict() == forward.as_dict()

    def test_disjoint_fields(self):
        events = [
            event("e1", ("a", 1), ("b", 2)),
            event("e2", ("x", 1), ("y", 2)),
        ]
        standings = build_standings(events)
        assert standings.pct("a") == 1.0
        assert standings.pct("y") == 0.0

    def test_empty_input(self):
        standings = build_standings([])
        assert standings.competitors() == []
        assert standings.as_dict()["pairwise"] == []

    def test_missing_competitor_pct_raises(self):
        standings = build_standings([event("e1", ("a", 1), ("b", 2))])
        with pytest.raises(ValueError):
            standings.pct("ghost")

    def test_unbalanced_schedule_warns(self):
        events = [
            event(f"e{i}", ("grinder", 1 + (i % 2)), ("partner", 2 - (i % 2)))
            for i in range(22)
        ]
        events.append(event("odd", ("rookie", 1), ("grinder", 2)))
        with pytest.warns(UnbalancedScheduleWarning):
            build_standings(events)

    def test_error_carries_event_id(self):
        events = [event("good", ("a", 1), ("b", 2)), event("bad", ("a", 1), ("b", 1))]
        with pytest.raises(TiedRanksError, match="bad"):
            build_standings(events)

    def test_pairwise_cells(self):
        events = [
            event("e1", ("a", 1), ("b", 2)),
            event("e2", ("b", 1), ("a", 2)),
            event("e3", ("a", 1), ("b", 2)),
        ]
        standings = build_standings(events)
        assert standings.pairwise[("a", "b")] == (2.0, 1.0)
