"""Empirical verifier for candidate multi-opponent win-probability families.

A candidate family is any evaluator J_n(a; b_1..b_n) -> [0, 1].  The checks
here probe the six structural conditions (fixed point against a balanced
uniform field, zero-opponent reduction, normalization, the complement
identity, monotonicity, permutation invariance), the five formula-based
uniqueness properties (sum, substitution, reduction, independence from
irrelevant alternatives, odds-ratio independence), and direct agreement
with the canonical family.  Also provides the generic strict-utility
(ratio-scale) evaluator.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .core import Contest, p_n, strength

__all__ = [
    "CandidateFamily",
    "CanonicalFamily",
    "CheckReport",
    "GridFamily",
    "SampleSpec",
    "check_conditions",
    "check_matches_canonical",
    "check_uniqueness_properties",
    "counterexample_family",
    "COUNTEREXAMPLE_NAMES",
    "run_all_checks",
    "strict_utility",
    "strict_utility_distribution",
]


# ---------------------------------------------------------------------------
# Strict utility (ratio scale)


def _check_scale(weights: Mapping[str, float]) -> None:
    if not weights:
        raise ValueError("ratio scale needs at least one outcome")
    for label, w in weights.items():
        if not (float(w) > 0.0):
            raise ValueError(f"weight for {label!r} must be positive, got {w!r}")


def strict_utility(weights: Mapping[str, float], outcome: str) -> float:
    """Choice probability of ``outcome`` under a ratio scale of positive weights."""
    _check_scale(weights)
    if outcome not in weights:
        raise ValueError(f"unknown outcome {outcome!r}")
    return float(weights[outcome]) / math.fsum(float(w) for w in weights.values())


def strict_utility_distribution(weights: Mapping[str, float]) -> dict[str, float]:
    _check_scale(weights)
    total = math.fsum(float(w) for w in weights.values())
    return {label: float(w) / total for label, w in weights.items()}


# ---------------------------------------------------------------------------
# Candidate families


class CandidateFamily:
    """Evaluator contract: call with (a, opponents), get a value in [0, 1].

    ``max_n`` bounds the opponent counts the family supports (None means
    unbounded).
    """

    name: str = "candidate"
    max_n: int | None = None

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        raise NotImplementedError


class CanonicalFamily(CandidateFamily):
    name = "canonical"

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        return p_n(Contest(a, tuple(opponents)))


def _pairwise(a: float, b: float) -> float:
    num = a * (1.0 - b)
    return num / (num + b * (1.0 - a))


class NaiveProductFamily(CandidateFamily):
    """Treats the opponents as independent pairwise games: prod of P(a, b_i).

    Matches the canonical family at n = 1 but fails normalization (and the
    balanced-field fixed point) for n >= 2.
    """

    name = "naive-product"

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        return math.prod(_pairwise(a, b) for b in opponents)


class SquaredOddsFamily(CandidateFamily):
    """Strict-utility family with weights q(s)^2 instead of q(s).

    Satisfies normalization, permutation invariance, and every formula-based
    uniqueness property, yet fails the balanced-uniform fixed point, so it
    does not match the canonical family.
    """

    name = "squared-odds"

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        if a == 1.0:
            return 0.0 if any(b == 1.0 for b in opponents) else 1.0
        wa = strength(a) ** 2
        ws = [strength(b) ** 2 if b < 1.0 else math.inf for b in opponents]
        if any(math.isinf(w) for w in ws):
            return 0.0
        return wa / (wa + math.fsum(ws))


class MismatchedBaseFamily(CandidateFamily):
    """Canonical for n >= 2 but squared-odds at n = 1.

    The n = 1 member no longer generates the higher members, so the sum,
    substitution, reduction, and IIA formulas all fail with explicit
    witnesses.
    """

    name = "mismatched-base"

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        if len(opponents) == 1:
            return SquaredOddsFamily()(a, opponents)
        return p_n(Contest(a, tuple(opponents)))


_COUNTEREXAMPLES: dict[str, Callable[[], CandidateFamily]] = {
    "naive-product": NaiveProductFamily,
    "squared-odds": SquaredOddsFamily,
    "mismatched-base": MismatchedBaseFamily,
}

COUNTEREXAMPLE_NAMES = tuple(sorted(_COUNTEREXAMPLES))


def counterexample_family(name: str) -> CandidateFamily:
    try:
        return _COUNTEREXAMPLES[name]()
    except KeyError:
        raise ValueError(
            f"unknown counterexample {name!r}; available: {', '.join(COUNTEREXAMPLE_NAMES)}"
        ) from None


class GridFamily(CandidateFamily):
    """Family tabulated on rectangular grids, one grid per opponent count.

    Evaluation is multilinear interpolation with coordinates clamped to the
    grid range.  Accuracy is interpolation-limited, so checks against grid
    families should use a loosened tolerance (1e-3 by default in the CLI).
    """

    def __init__(self, tables: Mapping[int, tuple[Sequence[Sequence[float]], np.ndarray]],
                 name: str = "grid"):
        self.name = name
        self._interps: dict[int, RegularGridInterpolator] = {}
        self._bounds: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for n, (grids, values) in tables.items():
            axes = [np.asarray(g, dtype=float) for g in grids]
            if len(axes) != n + 1:
                raise ValueError(f"n={n} table needs {n + 1} axes, got {len(axes)}")
            shape = tuple(len(g) for g in axes)
            vals = np.asarray(values, dtype=float).reshape(shape)
            self._interps[n] = RegularGridInterpolator(axes, vals)
            self._bounds[n] = (
                np.array([g[0] for g in axes]),
                np.array([g[-1] for g in axes]),
            )
        self.max_n = max(self._interps) if self._interps else 0

    def __call__(self, a: float, opponents: Sequence[float]) -> float:
        n = len(opponents)
        if n not in self._interps:
            raise ValueError(f"grid family has no table for n={n}")
        lo, hi = self._bounds[n]
        point = np.clip(np.array([a, *opponents], dtype=float), lo, hi)
        return float(np.clip(self._interps[n](point)[0], 0.0, 1.0))

    @classmethod
    def from_dict(cls, payload: Mapping, name: str = "grid") -> "GridFamily":
        tables = {}
        for key, entry in payload.items():
            n = int(key)
            tables[n] = (entry["grids"], np.asarray(entry["values"], dtype=float))
        return cls(tables, name=name)

    @classmethod
    def from_file(cls, path: str) -> "GridFamily":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls.from_dict(payload, name=f"grid:{path}")

    @classmethod
    def tabulate_canonical(cls, resolution: int = 101, n_max: int = 3) -> "GridFamily":
        """Tabulate the canonical family on uniform [0, 1] grids.

        Grid nodes where the probability is undefined (all-zero corner,
        multiple percentages at 1) are stored as 0; interior sampling never
        interpolates across them alone.
        """
        axis = np.linspace(0.0, 1.0, resolution)
        tables = {}
        for n in range(1, n_max + 1):
            coords = np.meshgrid(*([axis] * (n + 1)), indexing="ij")
            a, bs = coords[0], coords[1:]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio_sum = sum(b * (1.0 - a) / (a * (1.0 - b)) for b in bs)
                values = 1.0 / (1.0 + ratio_sum)
            values = np.where(a == 0.0, 0.0, values)
            ones = (a == 1.0).astype(int) + sum((b == 1.0).astype(int) for b in bs)
            # Exactly one percentage at 1 forces the outcome; two or more is
            # undefined and stored as 0 by convention (never sampled interior).
            values = np.where((a == 1.0) & (ones == 1), 1.0, values)
            values = np.where((ones >= 1) & (a < 1.0), 0.0, values)
            values = np.where(ones >= 2, 0.0, values)
            np.nan_to_num(values, copy=False, nan=0.0)
            tables[n] = ([axis] * (n + 1), values)
        return cls(tables, name=f"grid-canonical-{resolution}")

    def to_dict(self) -> dict:
        out = {}
        for n, interp in self._interps.items():
            out[str(n)] = {
                "grids": [list(map(float, g)) for g in interp.grid],
                "values": [float(v) for v in np.ravel(interp.values)],
            }
        return out


# ---------------------------------------------------------------------------
# Check machinery


@dataclass(frozen=True)
class SampleSpec:
    n_values: tuple[int, ...] = (1, 2, 3, 4)
    points: int = 250
    seed: int = 0
    tolerance: float = 1e-9
    low: float = 0.05
    high: float = 0.95


@dataclass(frozen=True)
class CheckReport:
    name: str
    samples: int
    max_violation: float
    worst_input: tuple | None
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "worst_input": None if self.worst_input is None else list(self.worst_input),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _scan(name: str, spec: SampleSpec, sample_fn) -> CheckReport:
    """Drive one check over the sample grid, tracking the worst violation.

    ``sample_fn(rng, n)`` returns (violation, witness).  An evaluator
    failure counts as an infinite violation with the exception recorded.
    """
    rng = random.Random(f"{spec.seed}:{name}")
    worst = 0.0
    worst_input: tuple | None = None
    samples = 0
    for n in spec.n_values:
        for _ in range(spec.points):
            samples += 1
            try:
                violation, witness = sample_fn(rng, n)
            except Exception as exc:  # surface as a failed check, not a crash
                return CheckReport(
                    name, samples, math.inf, (f"evaluator failure: {exc!r}",),
                    spec.tolerance,
                )
            if violation > worst:
                worst = violation
                worst_input = witness
    return CheckReport(name, samples, worst, worst_input, spec.tolerance)


def _uniform(rng: random.Random, spec: SampleSpec) -> float:
    return rng.uniform(spec.low, spec.high)


def check_conditions(f: CandidateFamily, spec: SampleSpec) -> list[CheckReport]:
    """The six structural conditions, one report each."""
    n_values = tuple(
        n for n in spec.n_values if f.max_n is None or n <= f.max_n
    )
    spec = SampleSpec(n_values, spec.points, spec.seed, spec.tolerance, spec.low, spec.high)

    def cond_a(rng, n):
        a = _uniform(rng, spec)
        got = f(a, [1.0 / (n + 1)] * n)
        return abs(got - a), (a, n)

    def cond_b(rng, n):
        a = _uniform(rng, spec)
        rest = [_uniform(rng, spec) for _ in range(n - 1)]
        with_zero = f(a, rest + [0.0])
        reduced = f(a, rest) if rest else 1.0
        return abs(with_zero - reduced), (a, *rest)

    def cond_c(rng, n):
        xs = [_uniform(rng, spec) for _ in range(n + 1)]
        total = math.fsum(
            f(xs[i], xs[:i] + xs[i + 1:]) for i in range(n + 1)
        )
        return abs(total - 1.0), tuple(xs)

    def cond_d(rng, n):
        a = _uniform(rng, spec)
        b = _uniform(rng, spec)
        k = rng.randint(1, n)
        lhs = f(1.0 - b, [1.0 - b] * (k - 1) + [1.0 - a] * (n + 1 - k))
        rhs = f(a, [a] * (k - 1) + [b] * (n + 1 - k))
        return abs(lhs - rhs), (a, b, k)

    def cond_e(rng, n):
        a = _uniform(rng, spec)
        rest = [_uniform(rng, spec) for _ in range(n - 1)]
        b_lo = rng.uniform(spec.low, spec.high - 2e-3)
        b_hi = rng.uniform(b_lo + 1e-3, spec.high)
        decrease = f(a, [b_lo] + rest) - f(a, [b_hi] + rest)
        if decrease > 0.0:
            return 0.0, None
        # Non-strict behavior fails even when the two values coincide.
        return max(-decrease, 10.0 * spec.tolerance), (a, b_lo, b_hi, *rest)

    def cond_f(rng, n):
        a = _uniform(rng, spec)
        bs = [_uniform(rng, spec) for _ in range(n)]
        perm = rng.sample(bs, len(bs))
        return abs(f(a, perm) - f(a, bs)), (a, *bs)

    return [
        _scan("condition-A", spec, cond_a),
        _scan("condition-B", spec, cond_b),
        _scan("condition-C", spec, cond_c),
        _scan("condition-D", spec, cond_d),
        _scan("condition-E", spec, cond_e),
        _scan("condition-F", spec, cond_f),
    ]


def _odds(p: float) -> float:
    return 1.0 / p - 1.0


def check_uniqueness_properties(f: CandidateFamily, spec: SampleSpec) -> list[CheckReport]:
    """The five formula-based properties, each relating J_n to the family's own J_1."""
    n_values = tuple(
        n for n in spec.n_values if f.max_n is None or n <= f.max_n
    )
    spec = SampleSpec(n_values, spec.points, spec.seed, spec.tolerance, spec.low, spec.high)

    def j1(a, b):
        return f(a, [b])

    def sum_formula(rng, n):
        a = _uniform(rng, spec)
        bs = [_uniform(rng, spec) for _ in range(n)]
        rhs = 1.0 / (1.0 + math.fsum(_odds(j1(a, b)) for b in bs))
        return abs(f(a, bs) - rhs), (a, *bs)

    def substitution(rng, n):
        a = _uniform(rng, spec)
        c = _uniform(rng, spec)
        bs = [_uniform(rng, spec) for _ in range(n)]
        rhs = 1.0 / (1.0 + _odds(j1(a, c)) * _odds(f(c, bs)))
        return abs(f(a, bs) - rhs), (a, c, *bs)

    def reduction(rng, n):
        a = _uniform(rng, spec)
        bs = [_uniform(rng, spec) for _ in range(n)]
        tail = f(bs[0], bs[1:]) if len(bs) > 1 else 1.0
        rhs = 1.0 / (1.0 + _odds(j1(a, bs[0])) / tail)
        return abs(f(a, bs) - rhs), (a, *bs)

    def iia(rng, n):
        a = _uniform(rng, spec)
        b = _uniform(rng, spec)
        shared = [_uniform(rng, spec) for _ in range(n - 1)]
        # Cross-multiplied so the violation stays on the probability scale.
        lhs = f(b, [a] + shared) * j1(a, b)
        rhs = f(a, [b] + shared) * j1(b, a)
        return abs(lhs - rhs), (a, b, *shared)

    def odds_ratio_indep(rng, n):
        m = rng.choice(spec.n_values)
        bs = [_uniform(rng, spec) for _ in range(n)]
        cs = [_uniform(rng, spec) for _ in range(m)]
        a1 = _uniform(rng, spec)
        a2 = _uniform(rng, spec)

        def ratio(a):
            pm = f(a, cs)
            pn = f(a, bs)
            return (pm * (1.0 - pn)) / ((1.0 - pm) * pn)

        r1, r2 = ratio(a1), ratio(a2)
        return abs(r1 - r2) / max(1.0, abs(r1), abs(r2)), (a1, a2, *bs, *cs)

    return [
        _scan("sum-formula", spec, sum_formula),
        _scan("substitution-formula", spec, substitution),
        _scan("reduction-formula", spec, reduction),
        _scan("iia", spec, iia),
        _scan("odds-ratio-independence", spec, odds_ratio_indep),
    ]


def check_matches_canonical(f: CandidateFamily, spec: SampleSpec) -> CheckReport:
    """Largest pointwise gap between the family and the canonical evaluator."""
    n_values = tuple(
        n for n in spec.n_values if f.max_n is None or n <= f.max_n
    )
    spec = SampleSpec(n_values, spec.points, spec.seed, spec.tolerance, spec.low, spec.high)

    def gap(rng, n):
        a = _uniform(rng, spec)
        bs = [_uniform(rng, spec) for _ in range(n)]
        return abs(f(a, bs) - p_n(Contest(a, tuple(bs)))), (a, *bs)

    return _scan("matches-canonical", spec, gap)


def run_all_checks(f: CandidateFamily, spec: SampleSpec) -> list[CheckReport]:
    """Conditions, uniqueness properties, and canonical agreement, in fixed order."""
    reports = check_conditions(f, spec)
    reports.extend(check_uniqueness_properties(f, spec))
    reports.append(check_matches_canonical(f, spec))
    return reports
