"""Alternate evaluators for the multi-opponent win probability.

Each function here recomputes the same probability as :func:`core.p_n`, but
through a different algebraic route built from single-opponent probabilities.
They serve both as user-selectable computation methods and as a
cross-agreement test battery, so none of them simply delegates its own
arithmetic to the direct evaluator.
"""

from __future__ import annotations

import math
from typing import Sequence

from .core import (
    Contest,
    ContestClass,
    UndefinedContestError,
    classify_contest,
    james_p,
    p_n,
    strength,
)

__all__ = [
    "distorted_difference",
    "iia_ratio",
    "odds_from_sum",
    "odds_ratio",
    "p_n_expanded_sum",
    "p_n_partitioned",
    "p_n_product_form",
    "p_n_reduction",
    "p_n_shifted_sum",
    "p_n_substitution",
    "validate_partition",
]


def _odds(p: float) -> float:
    """The odds-against value 1/p - 1, i.e. P(loss)/P(win)."""
    return 1.0 / p - 1.0


def _require_interior(value: float, name: str) -> float:
    if value <= 0.0 or value >= 1.0:
        raise ValueError(f"{name} must lie strictly inside (0, 1), got {value!r}")
    return value


def _interior_contest(c: Contest) -> None:
    _require_interior(c.protagonist, "protagonist")
    for b in c.opponents:
        _require_interior(b, "opponent")


def p_n_product_form(c: Contest) -> float:
    """Literal product-form evaluation, the direct analog of the log5 fraction.

    Numerator a * prod(1-b_i); denominator adds one term per opponent j of
    b_j (1-a) * prod over i != j of (1-b_i).  Handles a single boundary
    percentage (0 or 1) without special casing.
    """
    if classify_contest(c) is ContestClass.UNDEFINED:
        raise UndefinedContestError("probability undefined for this contest")
    a = c.protagonist
    bs = c.opponents
    num = a * math.prod(1.0 - b for b in bs)
    terms = [
        b * (1.0 - a) * math.prod(1.0 - x for i, x in enumerate(bs) if i != j)
        for j, b in enumerate(bs)
    ]
    return num / (num + math.fsum(terms))


def odds_from_sum(c: Contest) -> float:
    """Sum Formula: the odds against the protagonist, as a sum over opponents."""
    _interior_contest(c)
    return math.fsum(_odds(james_p(c.protagonist, b)) for b in c.opponents)


def p_n_substitution(c: Contest, pivot: float) -> float:
    """Substitution Formula: route the odds through an arbitrary pivot percentage."""
    _interior_contest(c)
    pivot = _require_interior(float(pivot), "pivot")
    odds = _odds(james_p(c.protagonist, pivot)) * _odds(p_n(Contest(pivot, c.opponents)))
    return 1.0 / (1.0 + odds)


def validate_partition(blocks: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    """Check that blocks are nonempty, disjoint, and cover the indices 0..n-1."""
    normalized = tuple(tuple(block) for block in blocks)
    seen: set[int] = set()
    for block in normalized:
        if not block:
            raise ValueError("partition blocks must be nonempty")
        for idx in block:
            if not 0 <= idx < n:
                raise ValueError(f"partition index {idx} outside 0..{n - 1}")
            if idx in seen:
                raise ValueError(f"partition index {idx} repeated")
            seen.add(idx)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        raise ValueError(f"partition does not cover indices {missing}")
    return normalized


def p_n_partitioned(c: Contest, blocks: Sequence[Sequence[int]]) -> float:
    """Partitioned sum formula: odds add across any split of the opponent set."""
    _interior_contest(c)
    parts = validate_partition(blocks, c.n)
    odds = math.fsum(
        _odds(p_n(Contest(c.protagonist, tuple(c.opponents[i] for i in block))))
        for block in parts
    )
    return 1.0 / (1.0 + odds)


def p_n_reduction(c: Contest) -> float:
    """Reduction Formula: peel off the first opponent, recurse on the rest.

    Valid with the remaining opponents at 0; the empty field is treated as
    probability 1.
    """
    a = _require_interior(c.protagonist, "protagonist")
    b1 = c.opponents[0]
    _require_interior(b1, "first opponent")
    rest = c.opponents[1:]
    if any(b >= 1.0 for b in rest):
        raise ValueError("remaining opponents must lie in [0, 1)")
    p_rest = p_n(Contest(b1, rest)) if rest else 1.0
    odds = _odds(james_p(a, b1)) / p_rest
    return 1.0 / (1.0 + odds)


def p_n_shifted_sum(c: Contest) -> float:
    """Shifted Sum Formula: everything expressed through the first opponent."""
    _interior_contest(c)
    a = c.protagonist
    b1 = c.opponents[0]
    inner = 1.0 + math.fsum(_odds(james_p(b1, b)) for b in c.opponents[1:])
    return 1.0 / (1.0 + _odds(james_p(a, b1)) * inner)


def p_n_expanded_sum(c: Contest) -> float:
    """Expanded Sum Formula: a chain of pairwise odds, protagonist first."""
    _interior_contest(c)
    chain = (c.protagonist,) + c.opponents
    terms = []
    product = 1.0
    for prev, cur in zip(chain, chain[1:]):
        product *= _odds(james_p(prev, cur))
        terms.append(product)
    return 1.0 / (1.0 + math.fsum(terms))


def distorted_difference(
    b: float,
    a: float,
    c_rest: Sequence[float] = (),
    d_rest: Sequence[float] = (),
) -> float:
    """Distorted Difference Formula: P_m(b; a, d_rest) from P_n(a; b, c_rest).

    With both rest-lists empty this reduces exactly to 1 - james_p(a, b),
    the complementarity of the single-opponent game.
    """
    a = _require_interior(float(a), "a")
    b = _require_interior(float(b), "b")
    c_rest = tuple(_require_interior(float(x), "c_rest entry") for x in c_rest)
    d_rest = tuple(_require_interior(float(x), "d_rest entry") for x in d_rest)
    delta1 = p_n(Contest(b, c_rest)) if c_rest else 1.0
    delta2 = p_n(Contest(a, d_rest)) if d_rest else 1.0
    p_na = p_n(Contest(a, (b,) + c_rest))
    return (1.0 - p_na) / (1.0 + (1.0 / (delta1 * delta2) - 1.0) * p_na)


def odds_ratio(c1: Contest, c2: Contest) -> float:
    """Odds of winning contest c1 over odds of winning contest c2.

    Both contests must feature the same protagonist; the value then equals
    the ratio of total opponent strengths (c2 over c1) and does not depend
    on the protagonist's percentage at all.
    """
    if c1.protagonist != c2.protagonist:
        raise ValueError("odds_ratio requires a common protagonist")
    _interior_contest(c1)
    _interior_contest(c2)
    p1 = p_n(c1)
    p2 = p_n(c2)
    return (p1 / (1.0 - p1)) / (p2 / (1.0 - p2))


def iia_ratio(a: float, b: float, shared: Sequence[float] = ()) -> float:
    """Ratio of b's and a's win probabilities against a shared field.

    Independent of the shared opponents: always q(b)/q(a).
    """
    a = _require_interior(float(a), "a")
    b = _require_interior(float(b), "b")
    shared_t = tuple(float(x) for x in shared)
    for x in shared_t:
        if x < 0.0 or x >= 1.0:
            raise ValueError("shared opponents must lie in [0, 1)")
    top = p_n(Contest(b, (a,) + shared_t))
    bottom = p_n(Contest(a, (b,) + shared_t))
    return top / bottom


def total_strength(opponents: Sequence[float]) -> float:
    """Sum of opponent strengths; convenience for odds-ratio cross-checks."""
    return math.fsum(strength(b) for b in opponents)
