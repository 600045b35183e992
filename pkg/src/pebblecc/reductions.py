"""Instance and graph constructions: 3-partition to covering equations, the
covering-equation gadget graph, vertex-cover decorations, indegree reduction,
chain appending, and the fixed 16-node counterexample graph.
"""

from __future__ import annotations

import heapq
import json
import warnings
from dataclasses import dataclass, field

from .b2lc import B2lcInstance, ThreePartitionInstance, b2lc_to_json
from .graph import Dag, build_dag, dag_to_json

__all__ = [
    "NotDivisibleWarning",
    "DegenerateEquation",
    "AmbiguousSink",
    "ReductionLayout",
    "threepartition_to_b2lc",
    "default_tau",
    "b2lc_to_graph",
    "vc_to_reducible",
    "reduce_indegree",
    "append_chain",
    "amplifier_chain_length",
    "counterexample_dag",
    "layout_to_json",
]


class NotDivisibleWarning(UserWarning):
    """The triple-sum target T/n is fractional; the emitted instance is scaled."""


class DegenerateEquation(ValueError):
    """An equation whose offset equals the full chain length leaves a 0-node gadget."""

    def __init__(self, index: int) -> None:
        super().__init__(f"equation {index} has offset >= c; its gadget chain would be empty")
        self.index = index


class AmbiguousSink(ValueError):
    """The operation needs a unique sink but the graph has several."""


@dataclass(frozen=True)
class ReductionLayout:
    """The gadget graph of a covering instance plus its coordinate labelling.

    Coordinates are strings: "C/i/j/z" is node z of copy j of variable i's
    chain, "E/i/a" is node a of equation i's chain, "M/i/p" is position p of
    variable i's long path, and "sink" is the single sink. label_map is a
    bijection from coordinates to node ids.
    """

    graph: Dag
    instance: B2lcInstance
    tau: int
    c: int
    label_map: dict[str, int] = field(repr=False)

    def var_chain(self, i: int, j: int, z: int) -> int:
        return self.label_map[f"C/{i}/{j}/{z}"]

    def eq_chain(self, i: int, a: int) -> int:
        return self.label_map[f"E/{i}/{a}"]

    def path_node(self, i: int, p: int) -> int:
        return self.label_map[f"M/{i}/{p}"]

    @property
    def sink_id(self) -> int:
        return self.label_map["sink"]

    def sibling_groups(self) -> list[tuple[int, ...]]:
        """All variable-chain sibling tuples: for each (i, z), the tau copies."""
        inst = self.instance
        return [
            tuple(self.var_chain(i, j, z) for j in range(1, self.tau + 1))
            for i in range(1, inst.n_vars + 1)
            for z in range(1, self.c + 1)
        ]

    def pebbling_cost_bound(self) -> int:
        """Cumulative-cost guarantee of the witness-driven pebbling schedule."""
        inst = self.instance
        n, m, k = inst.n_vars, inst.m, inst.k
        return self.tau * self.c * m * n + 2 * self.c * m * n + 2 * self.c * k * m + 1


def threepartition_to_b2lc(p: ThreePartitionInstance) -> B2lcInstance:
    """Encode a 3-partition instance as a covering-equation instance.

    Elements are sorted ascending into a ladder of difference equations over
    x_1..x_{3n+1}: one row per element offset, one all-zero spacer row per
    repeat, scaled target rows, and n closing equations tying x_1 to
    x_{3n+1}. Budget m is set to n. Equation count is 3n^2 + n.

    If n does not divide the total T, the instance is a trivial no; the
    reduction is still emitted, applied to the instance scaled by n (which
    preserves the answer and keeps every constant integral), under a
    NotDivisibleWarning.
    """
    n = p.n
    total = p.total
    scale = 1
    if total % n:
        scale = n
        warnings.warn(
            f"triple-sum target {total}/{n} is fractional; emitting the reduction "
            f"of the instance scaled by {n}",
            NotDivisibleWarning,
            stacklevel=2,
        )
    xs = tuple(sorted(x * scale for x in p.elements))
    t = total * scale
    eqs: list[tuple[int, int, int]] = []
    for i in range(1, 3 * n + 1):
        eqs.append((i, xs[i - 1], i + 1))
    for q in range(0, n - 1):
        for i in range(1, 3 * n + 1):
            eqs.append((i, q * t, i + 1))
    for i in range(1, n + 1):
        eqs.append((1, t // n + 3 * (i - 1) * (n - 2) * t, 3 * n + 1))
    return B2lcInstance(
        n_vars=3 * n + 1,
        m=n,
        equations=tuple(eqs),
        promise_bound={"promise_satisfied": p.promise_satisfied, "scaled_by": scale},
    )


def default_tau(inst: B2lcInstance) -> int:
    """Chain replication count large enough to separate yes from no instances."""
    c = sum(c_i for _, c_i, _ in inst.equations)
    return 2 * c * inst.m * inst.n_vars + 2 * c * inst.k * inst.m + 2


def b2lc_to_graph(inst: B2lcInstance, tau: int | None = None) -> ReductionLayout:
    """Build the pebbling gadget graph of a covering-equation instance.

    Per variable, tau parallel chains of c = sum(c_i) nodes; per equation i, a
    chain of c - c_i nodes whose node a also hangs off chain positions a (of
    the alpha variable) and a + c_i (of the beta variable) in all tau copies;
    per variable, a path of c*m nodes whose position p + qc hangs off chain
    position p in all copies; one sink fed by the last node of every equation
    chain and every path.

    Node ids are assigned in the documented deterministic order (variable
    chains by (i, j, z), equation chains by (i, a), paths by (i, p), then the
    sink), which is already topological, so no relabelling happens.

    Raises:
        DegenerateEquation: if some offset c_i satisfies c_i >= c.
        ValueError: if c < 1.
    """
    offsets = [c_i for _, c_i, _ in inst.equations]
    c = sum(offsets)
    if c < 1:
        raise ValueError("the offsets sum to 0; the gadget needs c >= 1")
    for idx, c_i in enumerate(offsets):
        if c_i >= c:
            raise DegenerateEquation(idx)
    if tau is None:
        tau = default_tau(inst)
    if tau < 1:
        raise ValueError(f"need tau >= 1, got {tau}")

    n, m, k = inst.n_vars, inst.m, inst.k
    label_map: dict[str, int] = {}
    nid = 0

    def fresh(coord: str) -> int:
        nonlocal nid
        nid += 1
        label_map[coord] = nid
        return nid

    edges: list[tuple[int, int]] = []
    for i in range(1, n + 1):
        for j in range(1, tau + 1):
            prev = None
            for z in range(1, c + 1):
                cur = fresh(f"C/{i}/{j}/{z}")
                if prev is not None:
                    edges.append((prev, cur))
                prev = cur
    for i in range(1, k + 1):
        alpha, c_i, beta = inst.equations[i - 1]
        prev = None
        for a in range(1, c - c_i + 1):
            cur = fresh(f"E/{i}/{a}")
            if prev is not None:
                edges.append((prev, cur))
            for l in range(1, tau + 1):
                edges.append((label_map[f"C/{alpha}/{l}/{a}"], cur))
                edges.append((label_map[f"C/{beta}/{l}/{a + c_i}"], cur))
            prev = cur
    for i in range(1, n + 1):
        prev = None
        for p in range(1, c * m + 1):
            cur = fresh(f"M/{i}/{p}")
            if prev is not None:
                edges.append((prev, cur))
            p_local = (p - 1) % c + 1
            for j in range(1, tau + 1):
                edges.append((label_map[f"C/{i}/{j}/{p_local}"], cur))
            prev = cur
    sink = fresh("sink")
    for i in range(1, k + 1):
        edges.append((label_map[f"E/{i}/{c - offsets[i - 1]}"], sink))
    for i in range(1, n + 1):
        edges.append((label_map[f"M/{i}/{c * m}"], sink))

    expected = tau * n * c + sum(c - c_i for c_i in offsets) + n * c * m + 1
    assert nid == expected, f"node count {nid} != formula {expected}"
    return ReductionLayout(
        graph=build_dag(nid, edges),
        instance=inst,
        tau=tau,
        c=c,
        label_map=label_map,
    )


def vc_to_reducible(
    n: int, edges, convention: str = "nodes"
) -> tuple[Dag, frozenset[int]]:
    """Decorate an undirected graph for the removal-set correspondence.

    Each undirected edge is oriented label-forward; vertex i gets an incoming
    chain of length i-1 and an outgoing chain of length n-i. Under the
    "nodes" convention a chain of length L has L nodes; under "edges" it has
    L internal edges, hence L+1 nodes. Either way one extra edge joins the
    chain to its vertex.

    Returns:
        (dag, originals) where originals marks the ids of the n input
        vertices inside the decorated DAG.
    """
    if convention not in ("nodes", "edges"):
        raise ValueError(f"unknown length convention {convention!r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    undirected: set[tuple[int, int]] = set()
    for a, b in edges:
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise ValueError(f"bad undirected edge ({a}, {b})")
        undirected.add((min(a, b), max(a, b)))

    extra = 1 if convention == "edges" else 0
    out_edges: list[tuple[int, int]] = []
    vertex_id: dict[int, int] = {}
    nid = 0
    for i in range(1, n + 1):
        in_len = (i - 1) + extra
        prev = None
        for _ in range(in_len):
            nid += 1
            if prev is not None:
                out_edges.append((prev, nid))
            prev = nid
        nid += 1
        vertex_id[i] = nid
        if prev is not None:
            out_edges.append((prev, nid))
        prev = nid
        out_len = (n - i) + extra
        for _ in range(out_len):
            nid += 1
            out_edges.append((prev, nid))
            prev = nid
    for a, b in sorted(undirected):
        out_edges.append((vertex_id[a], vertex_id[b]))
    return build_dag(nid, out_edges), frozenset(vertex_id.values())


def _relabel_topological(
    n: int, raw_edges: list[tuple[int, int]]
) -> tuple[Dag, dict[int, int]]:
    """Relabel an acyclic digraph on ids 1..n so labels become topological.

    Kahn's algorithm popping the smallest old id first, so the result is
    deterministic. Returns the Dag and the old-to-new mapping.
    """
    indeg = [0] * (n + 1)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in raw_edges:
        indeg[v] += 1
        children[u].append(v)
    ready = [v for v in range(1, n + 1) if indeg[v] == 0]
    heapq.heapify(ready)
    mapping: dict[int, int] = {}
    nxt = 0
    while ready:
        v = heapq.heappop(ready)
        nxt += 1
        mapping[v] = nxt
        for w in children[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if nxt != n:
        raise ValueError("digraph has a cycle")
    return build_dag(n, [(mapping[u], mapping[v]) for u, v in raw_edges]), mapping


def reduce_indegree(g: Dag, delta: int = 2, *, with_map: bool = False):
    """Cap indegrees at delta by replacing fan-ins with balanced merge trees.

    A node with p > delta parents gets ceil((p-1)/(delta-1)) - 1 fresh
    internal nodes; its former parents feed chunks of delta, level by level,
    until at most delta feed the node itself. Reachability between original
    nodes is unchanged. The result is relabelled topologically.

    Args:
        g: input graph.
        delta: target indegree bound, at least 2.
        with_map: also return the old-to-new id mapping (original ids only
            when the graph is returned unchanged).

    Returns:
        The transformed Dag, or (Dag, mapping) when with_map is set.
    """
    if delta < 2:
        raise ValueError(f"need delta >= 2, got {delta}")
    if g.max_indeg <= delta:
        return (g, {v: v for v in range(1, g.n + 1)}) if with_map else g

    raw_edges: list[tuple[int, int]] = []
    nid = g.n
    for v in range(1, g.n + 1):
        parents = sorted(g.parent_sets[v])
        if len(parents) <= delta:
            raw_edges.extend((u, v) for u in parents)
            continue
        layer = parents
        while len(layer) > delta:
            nxt: list[int] = []
            for q in range(0, len(layer), delta):
                chunk = layer[q : q + delta]
                if len(chunk) == 1:
                    nxt.append(chunk[0])
                else:
                    nid += 1
                    raw_edges.extend((u, nid) for u in chunk)
                    nxt.append(nid)
            layer = nxt
        raw_edges.extend((u, v) for u in layer)
    out, mapping = _relabel_topological(nid, raw_edges)
    return (out, mapping) if with_map else out


def append_chain(g: Dag, length: int) -> Dag:
    """Extend the unique sink with a fresh path of `length` nodes.

    Raises:
        AmbiguousSink: if the graph has more than one sink.
        ValueError: if length < 1.
    """
    if length < 1:
        raise ValueError(f"need length >= 1, got {length}")
    if len(g.sinks) != 1:
        raise AmbiguousSink(f"expected one sink, found {len(g.sinks)}")
    edges = list(g.edges)
    prev = g.sinks[0]
    for v in range(g.n + 1, g.n + length + 1):
        edges.append((prev, v))
        prev = v
    return build_dag(g.n + length, edges)


def amplifier_chain_length(n: int) -> int:
    """Polynomial chain length that dominates an n-node base graph's cost scale."""
    return 300 * n**3 + 6 * n**2 + 40 * n + 100


def counterexample_dag() -> Dag:
    """The fixed 16-node graph separating round-limited from unlimited pebbling.

    A 16-node path with five skip-9 shortcuts from the start and two skip-7
    shortcuts near the end; 22 edges, single sink 16, full depth 16.
    """
    edges = [(i, i + 1) for i in range(1, 16)]
    edges += [(i, i + 9) for i in range(1, 6)]
    edges += [(i, i + 7) for i in (8, 9)]
    return build_dag(16, edges)


def layout_to_json(layout: ReductionLayout) -> str:
    return json.dumps(
        {
            "graph": json.loads(dag_to_json(layout.graph)),
            "instance": json.loads(b2lc_to_json(layout.instance)),
            "tau": layout.tau,
            "c": layout.c,
            "labels": layout.label_map,
        }
    )
