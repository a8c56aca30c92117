"""Tree-based inference from partial pairwise data.

When the probability of each of n single-opponent match-ups is known and
those match-ups connect every opponent to the protagonist (so the known
edges form a tree), the multi-opponent win probability is fully determined.
Given one anchor percentage the whole tree of winning percentages follows.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import james_p

__all__ = [
    "AnchorBoundaryError",
    "CompetitionGraph",
    "DisconnectedError",
    "DuplicateEdgeError",
    "ExtraEdgesError",
    "GraphError",
    "InconsistentEdgeError",
    "PairwiseEdge",
    "RootedTree",
    "p_n_from_tree",
    "propagate_percentages",
    "validate_tree",
]

# Path products switch to log-space accumulation past this imbalance.
_LOG_SPACE_RATIO = 1e8


class GraphError(ValueError):
    """Base class for competition-graph validation failures."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class ExtraEdgesError(GraphError):
    """At least as many edges as vertices: some edge closes a cycle."""


class DisconnectedError(GraphError):
    def __init__(self, unreachable: Iterable[str]):
        self.unreachable = sorted(unreachable)
        super().__init__(f"vertices unreachable from root: {', '.join(self.unreachable)}")


class AnchorBoundaryError(ValueError):
    pass


class InconsistentEdgeError(GraphError):
    """Reserved for non-tree inputs whose edges over-determine the percentages.

    On a tree there are exactly as many constraints as unknowns, so this
    cannot currently be raised.
    """


@dataclass(frozen=True)
class PairwiseEdge:
    u: str
    v: str
    p_u_beats_v: float

    def __post_init__(self) -> None:
        if not self.u or not self.v:
            raise GraphError("edge endpoints must be nonempty names")
        if self.u == self.v:
            raise SelfLoopError(f"self-loop at {self.u!r}")
        p = float(self.p_u_beats_v)
        if math.isnan(p) or p <= 0.0 or p >= 1.0:
            raise GraphError(
                f"edge probability must lie strictly inside (0, 1), got {self.p_u_beats_v!r}"
            )
        object.__setattr__(self, "p_u_beats_v", p)


@dataclass(frozen=True)
class CompetitionGraph:
    root: str
    edges: tuple[PairwiseEdge, ...]
    vertices: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices:
            inferred = {self.root}
            for e in self.edges:
                inferred.add(e.u)
                inferred.add(e.v)
            object.__setattr__(self, "vertices", frozenset(inferred))
        else:
            object.__setattr__(self, "vertices", frozenset(self.vertices))
            if self.root not in self.vertices:
                raise GraphError(f"root {self.root!r} not among vertices")
            for e in self.edges:
                if e.u not in self.vertices or e.v not in self.vertices:
                    raise GraphError(f"edge {e.u!r}-{e.v!r} has an unknown endpoint")


@dataclass(frozen=True)
class RootedTree:
    """Parent-pointer form of a validated tree, rooted at the protagonist."""

    root: str
    parent: Mapping[str, str]
    p_parent_beats_child: Mapping[str, float]  # keyed by child
    order: tuple[str, ...]  # breadth-first from the root, names sorted per level


def _adjacency(g: CompetitionGraph) -> dict[str, dict[str, float]]:
    """Neighbor map storing p(u beats v) for both orientations."""
    adj: dict[str, dict[str, float]] = {v: {} for v in g.vertices}
    for e in g.edges:
        key = (min(e.u, e.v), max(e.u, e.v))
        if e.v in adj[e.u]:
            raise DuplicateEdgeError(f"duplicate edge between {key[0]!r} and {key[1]!r}")
        adj[e.u][e.v] = e.p_u_beats_v
        adj[e.v][e.u] = 1.0 - e.p_u_beats_v
    return adj


def _bfs(adj: Mapping[str, Mapping[str, float]], start: str):
    """Deterministic BFS: neighbors visited in sorted name order."""
    parent: dict[str, str] = {}
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nbr in sorted(adj[node]):
            if nbr not in seen:
                seen.add(nbr)
                parent[nbr] = node
                order.append(nbr)
                queue.append(nbr)
    return parent, order


def validate_tree(g: CompetitionGraph) -> RootedTree:
    """Check that the known match-ups form a tree spanning all competitors."""
    adj = _adjacency(g)
    if len(g.edges) >= len(g.vertices):
        raise ExtraEdgesError(
            f"{len(g.edges)} edges over {len(g.vertices)} vertices: a cycle exists"
        )
    parent, order = _bfs(adj, g.root)
    if len(order) < len(g.vertices):
        raise DisconnectedError(g.vertices - set(order))
    p_parent_beats_child = {
        child: adj[par][child] for child, par in parent.items()
    }
    return RootedTree(g.root, parent, p_parent_beats_child, tuple(order))


def p_n_from_tree(g: CompetitionGraph) -> float:
    """Path Formula: win probability of the root from the tree's edge probabilities.

    Each opponent contributes the product, along its path from the root, of
    the ratios p(child beats parent) / p(parent beats child).
    """
    tree = validate_tree(g)
    ratio: dict[str, float] = {tree.root: 1.0}
    log_ratio: dict[str, float] = {tree.root: 0.0}
    use_logs = False
    for v in tree.order[1:]:
        p = tree.p_parent_beats_child[v]
        factor = (1.0 - p) / p
        if factor > _LOG_SPACE_RATIO or factor < 1.0 / _LOG_SPACE_RATIO:
            use_logs = True
        par = tree.parent[v]
        ratio[v] = ratio[par] * factor
        log_ratio[v] = log_ratio[par] + math.log(factor)
    if use_logs:
        total = math.fsum(math.exp(log_ratio[v]) for v in tree.order[1:])
    else:
        total = math.fsum(ratio[v] for v in tree.order[1:])
    return 1.0 / (1.0 + total)


def propagate_percentages(
    g: CompetitionGraph, anchor: str, anchor_pct: float
) -> dict[str, float]:
    """Recover every competitor's winning percentage from one known anchor.

    Walks outward from the anchor; each known edge probability c between a
    solved vertex s and its neighbor t yields pct(t) = james_p(pct(s), c)
    by the involutive property.  Result is independent of traversal order
    on a tree; breadth-first with sorted names keeps it reproducible.
    """
    validate_tree(g)
    if anchor not in g.vertices:
        raise GraphError(f"anchor {anchor!r} not among vertices")
    pct = float(anchor_pct)
    if not 0.0 < pct < 1.0:
        raise AnchorBoundaryError("anchor percentage must lie strictly inside (0, 1)")
    adj = _adjacency(g)
    parent, order = _bfs(adj, anchor)
    result = {anchor: pct}
    for v in order[1:]:
        s = parent[v]
        result[v] = james_p(result[s], adj[s][v])
    return result
