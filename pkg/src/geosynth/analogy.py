"""Coarse problem isomorphism and goal-type partitions."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .facts import goal_type
from .hypergraph import Hypergraph
from .synthesizer import Problem

MAX_SEARCH_NODES = 64
# classes up to this size are re-checked pair by pair
VERIFY_CLASS_SIZE = 8


@dataclass(frozen=True)
class Shape:
    """A problem's induced sub-hypergraph with nodes reduced to their type."""

    types: tuple[str, ...]
    edges: frozenset[tuple[frozenset[int], int]]
    goal: int

    @property
    def n(self) -> int:
        return len(self.types)

    def signatures(self) -> list[tuple]:
        indeg = Counter(t for _, t in self.edges)
        outdeg: Counter = Counter()
        arities: dict[int, list[int]] = defaultdict(list)
        for srcs, t in self.edges:
            for s in srcs:
                outdeg[s] += 1
            arities[t].append(len(srcs))
        return [(self.types[v], indeg[v], outdeg[v], tuple(sorted(arities[v])), v == self.goal)
                for v in range(self.n)]

    def invariant(self) -> tuple:
        """Cheap necessary condition for coarse isomorphism."""
        per_edge = sorted((tuple(sorted(Counter(self.types[s] for s in srcs).items())), self.types[t])
                          for srcs, t in self.edges)
        return (self.n, len(self.edges), tuple(sorted(self.signatures())), tuple(per_edge))


def shape(h: Hypergraph, p: Problem) -> Shape:
    nodes: set[int] = set(p.sources) | {p.goal}
    for k in p.solution:
        e = h.edges[k]
        nodes.add(e.target)
        nodes.update(e.sources)
    order = sorted(nodes)
    local = {v: i for i, v in enumerate(order)}
    types = tuple(h.node_types[v].value for v in order)
    edges = frozenset((frozenset(local[s] for s in h.edges[k].sources), local[h.edges[k].target])
                      for k in p.solution)
    return Shape(types, edges, local[p.goal])


def _isomorphic(a: Shape, b: Shape) -> bool:
    sig_a, sig_b = a.signatures(), b.signatures()
    cand: dict[int, list[int]] = {v: [w for w in range(b.n) if sig_b[w] == sig_a[v]] for v in range(a.n)}
    if any(not c for c in cand.values()):
        return False
    inc_a: dict[int, list] = defaultdict(list)
    for e in a.edges:
        for v in e[0] | {e[1]}:
            inc_a[v].append(e)
    inc_b: dict[int, list] = defaultdict(list)
    for e in b.edges:
        for v in e[0] | {e[1]}:
            inc_b[v].append(e)
    # most constrained first, starting from the goal
    order = sorted(range(a.n), key=lambda v: (v != a.goal, len(cand[v]), v))
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}

    def consistent(v: int, w: int) -> bool:
        for srcs, t in inc_a[v]:
            if t in fwd and all(s in fwd for s in srcs):
                if (frozenset(fwd[s] for s in srcs), fwd[t]) not in b.edges:
                    return False
        for srcs, t in inc_b[w]:
            if t in bwd and all(s in bwd for s in srcs):
                if (frozenset(bwd[s] for s in srcs), bwd[t]) not in a.edges:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in cand[v]:
            if w in bwd:
                continue
            fwd[v], bwd[w] = w, v
            if consistent(v, w) and search(i + 1):
                return True
            del fwd[v], bwd[w]
        return False

    return search(0)


def compare(a: Shape, b: Shape) -> str:
    """``analogous``, ``distinct``, or ``probably`` when too large to search."""
    if a.invariant() != b.invariant():
        return "distinct"
    if a.n > MAX_SEARCH_NODES:
        return "probably"
    return "analogous" if _isomorphic(a, b) else "distinct"


def coarsely_analogous(h: Hypergraph, p1: Problem, p2: Problem) -> bool:
    return compare(shape(h, p1), shape(h, p2)) == "analogous"


@dataclass
class AnalogyReport:
    coarse: list[list[str]] = field(default_factory=list)
    goal: dict[str, list[str]] = field(default_factory=dict)
    # pairs too large to decide; kept out of the coarse classes
    probable: list[tuple[str, str]] = field(default_factory=list)

    @property
    def goal_partitions(self) -> int:
        return len(self.goal)


def partition(h: Hypergraph, problems: Sequence[Problem]) -> AnalogyReport:
    rep = AnalogyReport()
    goal: dict[str, list[str]] = defaultdict(list)
    for p in problems:
        goal[goal_type(h.nodes[p.goal])].append(p.id)
    rep.goal = dict(sorted(goal.items()))
    shapes = {p.id: shape(h, p) for p in problems}
    buckets: dict[tuple, list[str]] = defaultdict(list)
    for p in problems:
        buckets[shapes[p.id].invariant()].append(p.id)
    classes: list[list[str]] = []
    for key in sorted(buckets, key=lambda k: buckets[k][0]):
        reps: list[list[str]] = []
        for pid in buckets[key]:
            for cls in reps:
                verdict = compare(shapes[cls[0]], shapes[pid])
                if verdict == "analogous":
                    cls.append(pid)
                    break
                if verdict == "probably":
                    rep.probable.append((cls[0], pid))
            else:
                reps.append([pid])
        classes.extend(reps)
    for cls in classes:
        if len(cls) <= VERIFY_CLASS_SIZE:
            for i, a in enumerate(cls):
                for b in cls[i + 1:]:
                    if compare(shapes[a], shapes[b]) != "analogous":
                        raise AssertionError(f"coarse class not transitive: {a} vs {b}")
    rep.coarse = sorted(classes, key=lambda c: _id_key(c[0]))
    for i, cls in enumerate(rep.coarse):
        for pid in cls:
            for p in problems:
                if p.id == pid:
                    p.analogy_class = i
    return rep


def _id_key(pid: str):
    return (len(pid), pid)
