"""Depth reduction: find small node sets whose removal caps the longest path.

Exact decisions run a hitting-set branch and bound over violating paths; the
greedy heuristic strips nodes that lie on the most maximum-length paths. The
length convention (nodes vs edges) is always an explicit argument here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Dag, OutOfRange, TooLarge, depth

__all__ = [
    "ReducibilityResult",
    "is_reducible",
    "min_reducing_set",
    "greedy_reduce",
    "verify_set",
]


@dataclass(frozen=True)
class ReducibilityResult:
    """Outcome of a reducibility decision.

    When reducible, witness_set is a smallest removal set found and
    residual_depth is depth(g - witness_set) recomputed from scratch. When
    not reducible, witness_set is None and residual_depth is the depth of
    the untouched graph.
    """

    reducible: bool
    witness_set: frozenset[int] | None
    residual_depth: int
    convention: str


def _allowed_nodes(d: int, convention: str) -> int:
    """Max node count of a permitted path: depth <= d translated to nodes."""
    if convention == "nodes":
        return d
    if convention == "edges":
        return d + 1
    raise ValueError(f"unknown depth convention {convention!r}")


def _longest_path(g: Dag, removed: set[int]) -> list[int]:
    """One maximum-node-count path avoiding removed; deterministic."""
    f = [0] * (g.n + 1)
    pred = [0] * (g.n + 1)
    for v in range(1, g.n + 1):
        if v in removed:
            continue
        for u in sorted(g.parent_sets[v]):
            if u not in removed and f[u] > f[v] - 1:
                f[v] = f[u] + 1
                pred[v] = u
        if pred[v] == 0:
            f[v] = 1
    end = 0
    for v in range(1, g.n + 1):
        if v not in removed and f[v] > f[end]:
            end = v
    if end == 0:
        return []
    path = []
    while end != 0:
        path.append(end)
        end = pred[end]
    path.reverse()
    return path


def _disjoint_violations(g: Dag, removed: set[int], allowed: int) -> int:
    """Greedy count of vertex-disjoint paths longer than allowed nodes.

    Every removal set must hit each of them, so the count lower-bounds the
    remaining budget needed.
    """
    blocked = set(removed)
    count = 0
    while True:
        path = _longest_path(g, blocked)
        if len(path) <= allowed:
            return count
        count += 1
        blocked.update(path)


class _Budget:
    def __init__(self, cap: int) -> None:
        self.left = cap

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise TooLarge("reducibility search exceeded its node-visit cap")


def _search(
    g: Dag,
    removed: set[int],
    banned: set[int],
    budget: int,
    allowed: int,
    visits: _Budget,
) -> frozenset[int] | None:
    visits.tick()
    path = _longest_path(g, removed)
    if len(path) <= allowed:
        return frozenset(removed)
    if budget == 0:
        return None
    if _disjoint_violations(g, removed, allowed) > budget:
        return None
    # The window is itself a violating path, so any valid set hits it. Nodes
    # banned by an earlier sibling branch cannot be chosen again; if the
    # whole window is banned this subtree is infeasible.
    window = path[: allowed + 1]
    candidates = [v for v in window if v not in banned]
    for i, v in enumerate(candidates):
        removed.add(v)
        banned.update(candidates[:i])
        found = _search(g, removed, banned, budget - 1, allowed, visits)
        banned.difference_update(candidates[:i])
        removed.discard(v)
        if found is not None:
            return found
    return None


def is_reducible(
    g: Dag, e: int, d: int, convention: str, max_visits: int = 500_000
) -> ReducibilityResult:
    """Decide whether removing at most e nodes brings the depth down to d.

    Witness sets are searched in increasing size, so a reducible verdict
    carries a smallest witness. Raises TooLarge past max_visits search nodes.
    """
    if e < 0 or d < 0:
        raise ValueError("e and d must be nonnegative")
    allowed = _allowed_nodes(d, convention)
    visits = _Budget(max_visits)
    for size in range(0, min(e, g.n) + 1):
        found = _search(g, set(), set(), size, allowed, visits)
        if found is not None:
            return ReducibilityResult(
                reducible=True,
                witness_set=found,
                residual_depth=depth(g, convention, excluding=found),
                convention=convention,
            )
    return ReducibilityResult(
        reducible=False,
        witness_set=None,
        residual_depth=depth(g, convention),
        convention=convention,
    )


def min_reducing_set(
    g: Dag, d: int, convention: str, max_visits: int = 500_000
) -> tuple[int, frozenset[int]]:
    """Smallest e with a depth-d reducing set, plus one such set.

    Always terminates: removing every node leaves depth 0.
    """
    allowed = _allowed_nodes(d, convention)
    visits = _Budget(max_visits)
    for size in range(0, g.n + 1):
        found = _search(g, set(), set(), size, allowed, visits)
        if found is not None:
            return len(found), found
    raise AssertionError("unreachable: the full node set always works")


def greedy_reduce(g: Dag, d: int, convention: str) -> frozenset[int]:
    """Heuristic reducing set: peel nodes carrying the most critical paths.

    Each round counts, for every node on some maximum-length path, the number
    of such paths through it (forward count times backward count) and removes
    the busiest node until the depth target holds. Ties go to the most
    central node (largest min of forward and backward reach, so a lone
    critical path is cut near its middle rather than nibbled from one end),
    then to the smallest id.
    """
    _allowed_nodes(d, convention)  # validates the convention
    removed: set[int] = set()
    while depth(g, convention, excluding=removed) > d:
        f = [0] * (g.n + 1)
        nf = [0] * (g.n + 1)
        b = [0] * (g.n + 1)
        nb = [0] * (g.n + 1)
        for v in range(1, g.n + 1):
            if v in removed:
                continue
            f[v] = 1 + max(
                (f[u] for u in g.parent_sets[v] if u not in removed), default=0
            )
            nf[v] = sum(
                nf[u]
                for u in g.parent_sets[v]
                if u not in removed and f[u] == f[v] - 1
            ) or 1
        for v in range(g.n, 0, -1):
            if v in removed:
                continue
            b[v] = 1 + max(
                (b[w] for w in g.child_sets[v] if w not in removed), default=0
            )
            nb[v] = sum(
                nb[w]
                for w in g.child_sets[v]
                if w not in removed and b[w] == b[v] - 1
            ) or 1
        span = max(f[v] for v in range(1, g.n + 1) if v not in removed)
        busiest, key = 0, (0, 0)
        for v in range(1, g.n + 1):
            if v not in removed and f[v] + b[v] - 1 == span:
                cand = (nf[v] * nb[v], min(f[v], b[v]))
                if cand > key:
                    busiest, key = v, cand
        removed.add(busiest)
    return frozenset(removed)


def verify_set(g: Dag, s, d: int, convention: str) -> bool:
    """Recompute depth(g - s) and compare against d."""
    s = frozenset(s)
    for v in s:
        if not 1 <= v <= g.n:
            raise OutOfRange(v, g.n)
    return depth(g, convention, excluding=s) <= d
