"""Immutable DAGs in topological label order, generators, and JSON/DOT I/O.

Nodes are labelled 1..n and every edge (u, v) has u < v, so a plain ascending
loop over labels is a topological sweep. All other modules build on this.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property

__all__ = [
    "BackwardEdge",
    "OutOfRange",
    "TooLarge",
    "Dag",
    "build_dag",
    "depth",
    "chain",
    "pyramid",
    "complete",
    "layered_random",
    "generate",
    "export",
    "dag_to_json",
    "dag_from_json",
    "dag_to_dot",
]


class BackwardEdge(ValueError):
    """Raised for an edge (u, v) with u >= v, which the label order forbids."""

    def __init__(self, u: int, v: int) -> None:
        super().__init__(f"edge ({u}, {v}) does not go label-forward")
        self.u = u
        self.v = v


class OutOfRange(ValueError):
    """Raised for a node id outside [1, n]."""

    def __init__(self, node: int, n: int) -> None:
        super().__init__(f"node {node} is outside [1, {n}]")
        self.node = node
        self.n = n


class TooLarge(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph whose 1-based labels are a topological order.

    Instances are immutable values; every transform returns a new Dag. The
    edge tuple is sorted lexicographically and duplicate-free.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    @cached_property
    def parent_sets(self) -> tuple[frozenset[int], ...]:
        """parent_sets[v] is parents(v); index 0 is an unused placeholder."""
        ps: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            ps[v].add(u)
        return tuple(frozenset(s) for s in ps)

    @cached_property
    def child_sets(self) -> tuple[frozenset[int], ...]:
        cs: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            cs[u].add(v)
        return tuple(frozenset(s) for s in cs)

    def parents(self, v: int) -> frozenset[int]:
        if not 1 <= v <= self.n:
            raise OutOfRange(v, self.n)
        return self.parent_sets[v]

    def indeg(self, v: int) -> int:
        return len(self.parents(v))

    @cached_property
    def max_indeg(self) -> int:
        return max((len(s) for s in self.parent_sets[1:]), default=0)

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if not self.child_sets[v])

    @cached_property
    def sources(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if not self.parent_sets[v])


def build_dag(n: int, edges) -> Dag:
    """Validate and build a Dag on nodes 1..n.

    Args:
        n: node count, at least 1.
        edges: iterable of (u, v) pairs; each must satisfy 1 <= u < v <= n.
            Duplicates are dropped.

    Raises:
        BackwardEdge: if some edge has u >= v.
        OutOfRange: if some endpoint is outside [1, n].
        ValueError: if n < 1.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        for x in (u, v):
            if not 1 <= x <= n:
                raise OutOfRange(x, n)
        if u >= v:
            raise BackwardEdge(u, v)
        seen.add((u, v))
    return Dag(n=n, edges=tuple(sorted(seen)))


def depth(g: Dag, convention: str = "nodes", excluding=frozenset()) -> int:
    """Length of the longest directed path, by DP over the label order.

    Args:
        g: the graph.
        convention: "nodes" counts nodes on the path, "edges" counts edges.
            A single node has depth 1 under "nodes" and 0 under "edges".
        excluding: node ids treated as deleted (used by the reducibility
            module to measure induced subgraphs without rebuilding).

    Returns:
        The longest-path length; 0 if every node is excluded.
    """
    if convention not in ("nodes", "edges"):
        raise ValueError(f"unknown depth convention {convention!r}")
    removed = frozenset(excluding)
    best = 0
    f = [0] * (g.n + 1)  # f[v] = longest path ending at v, in nodes
    for v in range(1, g.n + 1):
        if v in removed:
            continue
        longest_in = 0
        for u in g.parent_sets[v]:
            if u not in removed and f[u] > longest_in:
                longest_in = f[u]
        f[v] = longest_in + 1
        if f[v] > best:
            best = f[v]
    if convention == "edges":
        return max(best - 1, 0)
    return best


# ---------------------------------------------------------------------------
# generators


def chain(n: int) -> Dag:
    """The path 1 -> 2 -> ... -> n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return build_dag(n, [(i, i + 1) for i in range(1, n)])


def pyramid(k: int) -> Dag:
    """A k-row pyramid: k sources on the bottom row narrowing to one apex.

    Rows are numbered bottom-up; row r (0-based) holds k - r nodes and each
    node above the bottom has the two nodes below it as parents. Total
    k(k+1)/2 nodes.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    edges = []
    row_start = 1
    for r in range(k - 1):
        width = k - r
        nxt = row_start + width
        for pos in range(width - 1):
            edges.append((row_start + pos, nxt + pos))
            edges.append((row_start + pos + 1, nxt + pos))
        row_start = nxt
    return build_dag(k * (k + 1) // 2, edges)


def complete(n: int) -> Dag:
    """All forward edges (u, v), u < v."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return build_dag(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def layered_random(n: int, seed: int, extra_edge_rule: str = "uniform") -> Dag:
    """Chain 1..n plus one random extra parent per node, deterministic in seed.

    Node i > 1 always has parent i-1; the extra parent is drawn uniformly from
    [1, i-1] and may coincide with i-1 (then no extra edge results). This is
    the usual single-pass layered construction.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if extra_edge_rule != "uniform":
        raise ValueError(f"unknown extra edge rule {extra_edge_rule!r}")
    rng = random.Random(seed)
    edges = []
    for i in range(2, n + 1):
        edges.append((i - 1, i))
        edges.append((rng.randint(1, i - 1), i))
    return build_dag(n, edges)


_GENERATORS = {
    "chain": chain,
    "pyramid": pyramid,
    "complete": complete,
    "layered_random": layered_random,
}


def generate(kind: str, *args, **kwargs) -> Dag:
    """Dispatch to a named generator: chain, pyramid, complete, layered_random."""
    try:
        fn = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}") from None
    return fn(*args, **kwargs)


# ---------------------------------------------------------------------------
# I/O


def dag_to_json(g: Dag) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]})


def dag_from_json(text: str) -> Dag:
    data = json.loads(text)
    return build_dag(int(data["n"]), [(int(u), int(v)) for u, v in data["edges"]])


def dag_to_dot(g: Dag) -> str:
    lines = ["digraph g {"]
    linked = {v for e in g.edges for v in e}
    for v in range(1, g.n + 1):
        if v not in linked:
            lines.append(f"  {v};")
    for u, v in g.edges:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines)


def export(g: Dag, format: str) -> str:
    """Serialize to "json" or "dot"; json round-trips through dag_from_json."""
    if format == "json":
        return dag_to_json(g)
    if format == "dot":
        return dag_to_dot(g)
    raise ValueError(f"unknown export format {format!r}")
