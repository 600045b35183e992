"""Exact optimal-pebbling search over pebble configurations.

This is the brute-force oracle the rest of the package leans on: uniform-cost
search for minimum cumulative cost, a round-indexed variant for
fixed-horizon optima, and capped breadth-first sweeps for space-time and
minimum-space optima. States are (pebble bitmask, satisfied-sink bitmask)
pairs; every returned witness replays the predecessor chain as literal
rounds, so it can be revalidated independently.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from heapq import heappop, heappush

from .graph import Dag, TooLarge
from .pebbling import Pebbling
from .pebbling import cost as pebbling_cost

__all__ = [
    "Exhausted",
    "Infeasible",
    "SearchLimits",
    "SearchResult",
    "exact_pcc",
    "exact_pcc_bounded",
    "exact_min_st",
    "exact_min_space",
]


class Exhausted(RuntimeError):
    """A search cap (states or wall clock) was hit before the proof finished."""

    def __init__(self, message: str, expanded: int, limits: SearchLimits) -> None:
        super().__init__(message)
        self.expanded = expanded
        self.limits = limits


class Infeasible(RuntimeError):
    """No legal pebbling exists within the stated limits (horizon or caps)."""


@dataclass(frozen=True)
class SearchLimits:
    """Caps for the exact searches.

    upper_bound_seed must be achievable (the cost of some known legal
    pebbling); it seeds incumbent pruning without excluding the optimum.
    time_budget is in seconds of wall clock.
    """

    max_nodes: int = 24
    max_states: int = 2_000_000
    max_space: int | None = None
    upper_bound_seed: int | None = None
    time_budget: float | None = None


@dataclass(frozen=True)
class SearchResult:
    """optimum is proven within the declared limits (mode, horizon, caps);
    witness is a legal pebbling achieving it."""

    optimum: int
    witness: Pebbling
    proven: bool
    expanded_states: int


def _check_entry(g: Dag, mode: str, limits: SearchLimits) -> None:
    if mode not in ("parallel", "sequential"):
        raise ValueError(f"mode must be parallel or sequential, got {mode!r}")
    if g.n > limits.max_nodes:
        raise TooLarge(
            f"graph has {g.n} nodes, above the configured cap {limits.max_nodes}"
        )


def _bit_tables(g: Dag) -> tuple[list[int], int]:
    """Parent sets and the sink set as bitmasks (bit v-1 is node v)."""
    parent_masks = [0] * (g.n + 1)
    for v in range(1, g.n + 1):
        m = 0
        for u in g.parent_sets[v]:
            m |= 1 << (u - 1)
        parent_masks[v] = m
    sink_mask = 0
    for s in g.sinks:
        sink_mask |= 1 << (s - 1)
    return parent_masks, sink_mask


def _future_need(parent_masks: list[int], n: int, pebbles: int, need: int) -> int:
    """Backward closure of `need` through unpebbled nodes.

    Every node in the closure must occupy at least one future round, so its
    popcount lower-bounds the remaining cumulative cost. Ids are
    topological, so one descending sweep settles the closure.
    """
    closure = need
    unpebbled = ~pebbles
    for v in range(n, 0, -1):
        if closure >> (v - 1) & 1:
            closure |= parent_masks[v] & unpebbled
    return closure


def _rounds_needed(parent_masks: list[int], n: int, pebbles: int, need: int) -> int:
    """Longest dependency chain in the closure: a floor on remaining rounds."""
    closure = _future_need(parent_masks, n, pebbles, need)
    if closure == 0:
        return 0
    lvl = [0] * (n + 1)
    deepest = 0
    for v in range(1, n + 1):
        if closure >> (v - 1) & 1:
            pm = parent_masks[v] & closure
            best = 0
            while pm:
                low = pm & -pm
                u = low.bit_length()
                if lvl[u] > best:
                    best = lvl[u]
                pm ^= low
            lvl[v] = best + 1
            if lvl[v] > deepest:
                deepest = lvl[v]
    return deepest


def _placeable(g: Dag, parent_masks: list[int], mask: int) -> int:
    out = 0
    for v in range(1, g.n + 1):
        bit = 1 << (v - 1)
        if not mask & bit and parent_masks[v] & ~mask == 0:
            out |= bit
    return out


def _mask_nodes(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _witness(pred, goal, mode: str) -> Pebbling:
    rounds = []
    cur = goal
    while cur != (0, 0):
        rounds.append(_mask_nodes(cur[0]))
        cur = pred[cur]
    rounds.reverse()
    return Pebbling(rounds=tuple(rounds), mode=mode)


def exact_pcc(
    g: Dag,
    mode: str = "parallel",
    limits: SearchLimits | None = None,
    complete_enumeration: bool = False,
) -> SearchResult:
    """Minimum cumulative cost over all legal pebblings, with witness.

    Least-total-weight-first search on the configuration graph. Pruning
    (pure-discard elimination, incumbent cuts against the closure bound,
    single-bit superset dominance) never excludes an optimal plan;
    complete_enumeration=True disables all of it and enumerates every
    transition, which the test suite uses to check the pruned search against
    the unpruned one on small graphs.

    Raises:
        TooLarge: n exceeds limits.max_nodes.
        Exhausted: a state or time cap was hit first.
        Infeasible: no pebbling within limits (only possible when max_space
            is set or upper_bound_seed was not actually achievable).
    """
    limits = limits or SearchLimits()
    _check_entry(g, mode, limits)
    n = g.n
    parent_masks, sink_mask = _bit_tables(g)
    space_cap = limits.max_space if limits.max_space is not None else n
    if limits.upper_bound_seed is not None:
        ub = limits.upper_bound_seed
    else:
        ub = n * (n + 1) // 2
    deadline = (
        time.monotonic() + limits.time_budget
        if limits.time_budget is not None
        else None
    )
    sequential = mode == "sequential"

    start = (0, 0)
    best: dict[tuple[int, int], int] = {start: 0}
    pred: dict[tuple[int, int], tuple[int, int]] = {}
    heap: list[tuple[int, int, int]] = [(0, 0, 0)]
    expanded = 0
    best_get = best.get

    while heap:
        gc, mask, sat = heappop(heap)
        state = (mask, sat)
        if gc > best_get(state, gc):
            continue
        if sat == sink_mask:
            return SearchResult(gc, _witness(pred, state, mode), True, expanded)
        expanded += 1
        if expanded > limits.max_states:
            raise Exhausted(
                f"state cap {limits.max_states} hit at cost {gc}", expanded, limits
            )
        if deadline is not None and expanded % 256 == 0:
            if time.monotonic() > deadline:
                raise Exhausted("time budget hit", expanded, limits)

        if not complete_enumeration:
            # single-bit superset dominance: a state with one extra pebble,
            # same sinks done, at no extra cost can do anything we can
            rest = ((1 << n) - 1) & ~mask
            dominated = False
            probe = rest
            while probe:
                low = probe & -probe
                if best_get((mask | low, sat), gc + 1) <= gc:
                    dominated = True
                    break
                probe ^= low
            if dominated:
                continue

        avail = _placeable(g, parent_masks, mask)
        if complete_enumeration:
            pool = mask | avail
            sub = pool
            while sub:
                new = sub & ~mask
                if new or sub != mask:
                    if not (sequential and new.bit_count() > 1):
                        ns = sat | (sub & sink_mask)
                        ng = gc + sub.bit_count()
                        nstate = (sub, ns)
                        if ng < best_get(nstate, ng + 1):
                            best[nstate] = ng
                            pred[nstate] = state
                            heappush(heap, (ng, sub, ns))
                sub = (sub - 1) & pool
            continue

        avail &= ~sat  # re-placing a finished sink never helps
        retainable = mask & ~sat  # nor does holding one
        if sequential:
            new_sets = []
            probe = avail
            while probe:
                low = probe & -probe
                new_sets.append(low)
                probe ^= low
        else:
            new_sets = []
            sub = avail
            while sub:
                new_sets.append(sub)
                sub = (sub - 1) & avail
        for new in new_sets:
            nsize = new.bit_count()
            if nsize > space_cap:
                continue
            ns = sat | (new & sink_mask)
            need = sink_mask & ~ns
            generous = _future_need(parent_masks, n, mask | new, need)
            floor = gc + nsize + generous.bit_count()
            if floor > ub:
                continue
            rcap = min(ub - floor, space_cap - nsize)
            if rcap < 0:
                continue
            sub = retainable
            while True:
                if sub.bit_count() <= rcap:
                    t_mask = new | sub
                    ng = gc + t_mask.bit_count()
                    nstate = (t_mask, ns)
                    if ng < best_get(nstate, ng + 1):
                        exact = _future_need(parent_masks, n, t_mask, need)
                        if ng + exact.bit_count() <= ub:
                            best[nstate] = ng
                            pred[nstate] = state
                            heappush(heap, (ng, t_mask, ns))
                if sub == 0:
                    break
                sub = (sub - 1) & retainable
    raise Infeasible(
        "no legal pebbling within the given limits (space cap or a seed "
        "upper bound below the true optimum)"
    )


def exact_pcc_bounded(
    g: Dag,
    t_max: int,
    mode: str = "parallel",
    limits: SearchLimits | None = None,
    cost_cap: int | None = None,
) -> SearchResult:
    """Minimum cumulative cost among pebblings with at most t_max rounds.

    Round-indexed dynamic program; layer r holds the cheapest way to reach
    each configuration in exactly r rounds. States whose remaining dependency
    chain cannot fit in the rounds left are cut, as are partial costs above
    cost_cap when one is given.

    Raises:
        Infeasible: nothing completes within t_max rounds (and under
            cost_cap, if set).
        TooLarge / Exhausted: as exact_pcc.
    """
    limits = limits or SearchLimits()
    _check_entry(g, mode, limits)
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    n = g.n
    parent_masks, sink_mask = _bit_tables(g)
    space_cap = limits.max_space if limits.max_space is not None else n
    ub = cost_cap if cost_cap is not None else n * t_max
    deadline = (
        time.monotonic() + limits.time_budget
        if limits.time_budget is not None
        else None
    )
    sequential = mode == "sequential"

    cur: dict[tuple[int, int], int] = {(0, 0): 0}
    pred: dict[tuple[int, int, int], tuple[int, int]] = {}
    goal: tuple[int, int, tuple[int, int]] | None = None  # (cost, round, state)
    expanded = 0
    for r in range(1, t_max + 1):
        nxt: dict[tuple[int, int], int] = {}
        rounds_left = t_max - r
        for (mask, sat), gc in cur.items():
            if sat == sink_mask:
                continue  # done; extending only adds cost
            expanded += 1
            if expanded > limits.max_states:
                raise Exhausted(
                    f"state cap {limits.max_states} hit in round {r}",
                    expanded,
                    limits,
                )
            if deadline is not None and expanded % 256 == 0:
                if time.monotonic() > deadline:
                    raise Exhausted("time budget hit", expanded, limits)
            if _rounds_needed(parent_masks, n, mask, sink_mask & ~sat) > rounds_left + 1:
                continue
            avail = _placeable(g, parent_masks, mask) & ~sat
            retainable = mask & ~sat
            if sequential:
                new_sets = []
                probe = avail
                while probe:
                    low = probe & -probe
                    new_sets.append(low)
                    probe ^= low
            else:
                new_sets = []
                sub = avail
                while sub:
                    new_sets.append(sub)
                    sub = (sub - 1) & avail
            for new in new_sets:
                nsize = new.bit_count()
                if nsize > space_cap:
                    continue
                ns = sat | (new & sink_mask)
                need = sink_mask & ~ns
                generous = _future_need(parent_masks, n, mask | new, need)
                floor = gc + nsize + generous.bit_count()
                if floor > ub:
                    continue
                rcap = min(ub - floor, space_cap - nsize)
                if rcap < 0:
                    continue
                sub = retainable
                while True:
                    if sub.bit_count() <= rcap:
                        t_mask = new | sub
                        ng = gc + t_mask.bit_count()
                        nstate = (t_mask, ns)
                        old = nxt.get(nstate)
                        if old is None or ng < old:
                            keep = True
                            if ns != sink_mask:
                                if (
                                    _rounds_needed(parent_masks, n, t_mask, need)
                                    > rounds_left
                                ):
                                    keep = False
                            if keep:
                                nxt[nstate] = ng
                                pred[(r, t_mask, ns)] = (mask, sat)
                                if ns == sink_mask and (
                                    goal is None or ng < goal[0]
                                ):
                                    goal = (ng, r, nstate)
                    if sub == 0:
                        break
                    sub = (sub - 1) & retainable
        cur = nxt
        if not cur:
            break
    if goal is None:
        cap_note = f" under cost cap {cost_cap}" if cost_cap is not None else ""
        raise Infeasible(f"no legal pebbling within {t_max} rounds{cap_note}")
    gcost, r, state = goal
    rounds = []
    cur_state = state
    while r > 0:
        rounds.append(_mask_nodes(cur_state[0]))
        cur_state = pred[(r, cur_state[0], cur_state[1])]
        r -= 1
    rounds.reverse()
    witness = Pebbling(rounds=tuple(rounds), mode=mode)
    return SearchResult(gcost, witness, True, expanded)


def _min_rounds_capped(
    g: Dag,
    cap: int,
    mode: str,
    limits: SearchLimits,
    deadline: float | None,
    expanded_so_far: int,
) -> tuple[Pebbling, int] | tuple[None, int]:
    """Fewest rounds to satisfy all sinks using at most cap pebbles at once.

    Plain breadth-first search over the capped configuration graph; returns
    (witness, expanded) or (None, expanded) when the cap is infeasible.
    """
    n = g.n
    parent_masks, sink_mask = _bit_tables(g)
    sequential = mode == "sequential"
    start = (0, 0)
    seen = {start}
    pred: dict[tuple[int, int], tuple[int, int]] = {}
    frontier = [start]
    expanded = expanded_so_far
    while frontier:
        nfront = []
        for mask, sat in frontier:
            expanded += 1
            if expanded > limits.max_states:
                raise Exhausted(
                    f"state cap {limits.max_states} hit at space cap {cap}",
                    expanded,
                    limits,
                )
            if deadline is not None and expanded % 256 == 0:
                if time.monotonic() > deadline:
                    raise Exhausted("time budget hit", expanded, limits)
            avail = _placeable(g, parent_masks, mask) & ~sat
            retainable = mask & ~sat
            if sequential:
                new_sets = []
                probe = avail
                while probe:
                    low = probe & -probe
                    new_sets.append(low)
                    probe ^= low
            else:
                new_sets = []
                sub = avail
                while sub:
                    new_sets.append(sub)
                    sub = (sub - 1) & avail
            for new in new_sets:
                nsize = new.bit_count()
                if nsize > cap:
                    continue
                ns = sat | (new & sink_mask)
                rcap = cap - nsize
                sub = retainable
                while True:
                    if sub.bit_count() <= rcap:
                        t_mask = new | sub
                        nstate = (t_mask, ns)
                        if nstate not in seen:
                            seen.add(nstate)
                            pred[nstate] = (mask, sat)
                            if ns == sink_mask:
                                return _witness(pred, nstate, mode), expanded
                            nfront.append(nstate)
                    if sub == 0:
                        break
                    sub = (sub - 1) & retainable
        frontier = nfront
    return None, expanded


def exact_min_st(
    g: Dag, mode: str = "parallel", limits: SearchLimits | None = None
) -> SearchResult:
    """Minimum space-time product t * max-space over all legal pebblings.

    For each space cap s the capped breadth-first sweep yields the fewest
    rounds t(s); the best witness over s is exact. Caps at or above the
    current best product cannot improve it (t >= 1), so the sweep stops there.
    """
    limits = limits or SearchLimits()
    _check_entry(g, mode, limits)
    deadline = (
        time.monotonic() + limits.time_budget
        if limits.time_budget is not None
        else None
    )
    expanded = 0
    best: tuple[int, Pebbling] | None = None
    for s in range(1, g.n + 1):
        if best is not None and s >= best[0]:
            break
        witness, expanded = _min_rounds_capped(g, s, mode, limits, deadline, expanded)
        if witness is None:
            continue
        st = pebbling_cost(witness).st
        if best is None or st < best[0]:
            best = (st, witness)
    assert best is not None, "cap n is always feasible"
    return SearchResult(best[0], best[1], True, expanded)


def exact_min_space(
    g: Dag, mode: str = "parallel", limits: SearchLimits | None = None
) -> SearchResult:
    """Smallest s such that some legal pebbling never holds more than s pebbles."""
    limits = limits or SearchLimits()
    _check_entry(g, mode, limits)
    deadline = (
        time.monotonic() + limits.time_budget
        if limits.time_budget is not None
        else None
    )
    expanded = 0
    for s in range(1, g.n + 1):
        witness, expanded = _min_rounds_capped(g, s, mode, limits, deadline, expanded)
        if witness is not None:
            return SearchResult(s, witness, True, expanded)
    raise AssertionError("unreachable: cap n is always feasible")
