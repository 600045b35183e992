"""Bounded 2-linear covering: cover difference equations x_a + c = x_b with a
budget of m variable assignments. Includes the exhaustive decision oracle and
the 3-partition oracle used to cross-check the reduction pipeline.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import product

from .graph import TooLarge

__all__ = [
    "TooLarge",
    "B2lcBudgetWarning",
    "B2lcInstance",
    "B2lcWitness",
    "ThreePartitionInstance",
    "group_consistent",
    "check_witness",
    "solve_b2lc",
    "solve_3partition",
    "b2lc_to_json",
    "b2lc_from_json",
]


class B2lcBudgetWarning(UserWarning):
    """Budget m exceeds the equation count; the instance is trivially coverable."""


@dataclass(frozen=True)
class B2lcInstance:
    """k equations x_alpha + c = x_beta over variables 1..n_vars, budget m.

    Asks for m assignments of nonnegative integers to the variables such that
    every equation holds under at least one assignment. promise_bound is an
    informational record carried along by reductions; it is never enforced.
    """

    n_vars: int
    m: int
    equations: tuple[tuple[int, int, int], ...]
    promise_bound: object = None

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError(f"need n_vars >= 1, got {self.n_vars}")
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        if not self.equations:
            raise ValueError("need at least one equation")
        for alpha, c, beta in self.equations:
            if not (1 <= alpha <= self.n_vars and 1 <= beta <= self.n_vars):
                raise ValueError(f"equation ({alpha}, {c}, {beta}) references an unknown variable")
            if alpha == beta:
                raise ValueError(f"equation ({alpha}, {c}, {beta}) relates a variable to itself")
            if c < 0:
                raise ValueError(f"offset must be nonnegative, got {c}")
        if self.m > len(self.equations):
            warnings.warn(
                f"budget m={self.m} exceeds k={len(self.equations)} equations",
                B2lcBudgetWarning,
                stacklevel=2,
            )

    @property
    def k(self) -> int:
        return len(self.equations)


@dataclass(frozen=True)
class B2lcWitness:
    """group_of[i] is the 1-based assignment covering equation i; values[y-1]
    is assignment y as a row of n_vars nonnegative integers."""

    group_of: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ThreePartitionInstance:
    """3n positive integers to be split into n triples of equal sum T/n."""

    elements: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if len(self.elements) != 3 * self.n:
            raise ValueError(f"need exactly {3 * self.n} elements, got {len(self.elements)}")
        if any(x < 1 for x in self.elements):
            raise ValueError("elements must be positive")

    @property
    def total(self) -> int:
        return sum(self.elements)

    @property
    def promise_satisfied(self) -> bool:
        """True iff every element lies strictly between T/(4n) and T/(2n)."""
        t = self.total
        return all(4 * self.n * x > t and 2 * self.n * x < t for x in self.elements)


class OffsetUnionFind:
    """Union-find whose links carry integer offsets, for difference constraints.

    Maintains x = root(x) + offset(x) for each tracked variable; merging two
    variables under x_b = x_a + c either succeeds or reports a conflicting
    cycle exactly.
    """

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.rank: dict[int, int] = {}
        self.off: dict[int, int] = {}  # off[x] = value(x) - value(parent[x])

    def add(self, x: int) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0
            self.off[x] = 0

    def find(self, x: int) -> tuple[int, int]:
        """Return (root, value(x) - value(root)), compressing the path."""
        self.add(x)
        path = []
        r = x
        while self.parent[r] != r:
            path.append(r)
            r = self.parent[r]
        acc = 0
        for node in reversed(path):
            acc += self.off[node]
            self.parent[node] = r
            self.off[node] = acc
        return r, self.off[x] if path else 0

    def union(self, a: int, b: int, c: int) -> bool:
        """Impose x_b = x_a + c; return False on a conflicting cycle."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            return ob - oa == c
        # value(rb) relative to value(ra) if rb hangs under ra
        delta = oa + c - ob
        if self.rank[ra] < self.rank[rb]:
            self.parent[ra] = rb
            self.off[ra] = -delta
        else:
            self.parent[rb] = ra
            self.off[rb] = delta
            if self.rank[ra] == self.rank[rb]:
                self.rank[ra] += 1
        return True


def group_consistent(inst: B2lcInstance, group) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether one assignment can satisfy the given equations at once.

    Args:
        inst: the owning instance.
        group: iterable of 0-based equation indices.

    Returns:
        (True, values) with the canonical satisfying assignment, or
        (False, None). Canonical means every connected component of the
        difference-constraint graph is shifted so its minimum is 0 and
        untouched variables are 0, which keeps all values nonnegative.
    """
    uf = OffsetUnionFind()
    for idx in sorted(group):
        alpha, c, beta = inst.equations[idx]
        if not uf.union(alpha, beta, c):
            return False, None
    by_root: dict[int, list[tuple[int, int]]] = {}
    for var in uf.parent:
        root, off = uf.find(var)
        by_root.setdefault(root, []).append((var, off))
    values = [0] * inst.n_vars
    for members in by_root.values():
        low = min(off for _, off in members)
        for var, off in members:
            values[var - 1] = off - low
    return True, tuple(values)


def check_witness(inst: B2lcInstance, w: B2lcWitness) -> bool:
    """Re-validate a witness against the instance, independently of the solver."""
    if len(w.group_of) != inst.k or len(w.values) != inst.m:
        return False
    if any(len(row) != inst.n_vars for row in w.values):
        return False
    if any(x < 0 for row in w.values for x in row):
        return False
    for (alpha, c, beta), y in zip(inst.equations, w.group_of):
        if not 1 <= y <= inst.m:
            return False
        row = w.values[y - 1]
        if row[alpha - 1] + c != row[beta - 1]:
            return False
    return True


def _assemble_witness(inst: B2lcInstance, group_of: tuple[int, ...]) -> B2lcWitness:
    rows = []
    for y in range(1, inst.m + 1):
        idxs = [i for i, g in enumerate(group_of) if g == y]
        ok, values = group_consistent(inst, idxs)
        assert ok, "groups were checked consistent before assembly"
        rows.append(values)
    return B2lcWitness(group_of=group_of, values=tuple(rows))


def solve_b2lc(inst: B2lcInstance, cap: int = 2_000_000) -> tuple[bool, B2lcWitness | None]:
    """Exhaustively decide the instance by enumerating equation-to-assignment maps.

    Enumeration is lexicographic over the m^k maps, so the returned witness is
    deterministic. With m >= k each equation simply gets its own assignment.

    Raises:
        TooLarge: if m^k exceeds cap.
    """
    k = inst.k
    if inst.m >= k:
        return True, _assemble_witness(inst, tuple(range(1, k + 1)))
    if inst.m**k > cap:
        raise TooLarge(f"m^k = {inst.m}^{k} exceeds the enumeration cap {cap}")
    for mapping in product(range(1, inst.m + 1), repeat=k):
        ok = True
        for y in range(1, inst.m + 1):
            idxs = [i for i, g in enumerate(mapping) if g == y]
            if idxs and not group_consistent(inst, idxs)[0]:
                ok = False
                break
        if ok:
            return True, _assemble_witness(inst, mapping)
    return False, None


def solve_3partition(
    inst: ThreePartitionInstance, cap: int = 6
) -> tuple[bool, tuple[tuple[int, int, int], ...] | None]:
    """Decide 3-partition by backtracking over triples of element indices.

    Returns (True, triples) where each triple is 0-based indices into
    inst.elements summing to T/n, or (False, None). An instance whose total
    is not divisible by n is an immediate no.

    Raises:
        TooLarge: if inst.n exceeds cap.
    """
    if inst.n > cap:
        raise TooLarge(f"n={inst.n} exceeds the enumeration cap {cap}")
    total = inst.total
    if total % inst.n:
        return False, None
    target = total // inst.n
    xs = inst.elements
    size = 3 * inst.n
    used = [False] * size
    triples: list[tuple[int, int, int]] = []

    def backtrack() -> bool:
        try:
            first = used.index(False)
        except ValueError:
            return True
        used[first] = True
        for j in range(first + 1, size):
            if used[j] or xs[first] + xs[j] > target:
                continue
            used[j] = True
            rest = target - xs[first] - xs[j]
            for l in range(j + 1, size):
                if not used[l] and xs[l] == rest:
                    used[l] = True
                    triples.append((first, j, l))
                    if backtrack():
                        return True
                    triples.pop()
                    used[l] = False
            used[j] = False
        used[first] = False
        return False

    if backtrack():
        return True, tuple(triples)
    return False, None


def b2lc_to_json(inst: B2lcInstance) -> str:
    return json.dumps(
        {
            "n_vars": inst.n_vars,
            "m": inst.m,
            "equations": [list(eq) for eq in inst.equations],
        }
    )


def b2lc_from_json(text: str) -> B2lcInstance:
    data = json.loads(text)
    return B2lcInstance(
        n_vars=int(data["n_vars"]),
        m=int(data["m"]),
        equations=tuple((int(a), int(c), int(b)) for a, c, b in data["equations"]),
    )
