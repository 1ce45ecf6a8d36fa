"""Breadth-first pebbling: label every hyperedge forward, back or excluded."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .hypergraph import Hypergraph
from .rules import RuleConfig


@dataclass(frozen=True)
class PebbleResult:
    order: tuple[int, ...]
    forward: frozenset[int]
    back: frozenset[int]
    excluded: frozenset[int]
    # the forward edge that first pebbled each derived node
    first: dict[int, int]

    @property
    def pebbled(self) -> frozenset[int]:
        return frozenset(self.order)

    def position(self) -> dict[int, int]:
        return {n: i for i, n in enumerate(self.order)}

    def direction(self, k: int) -> str:
        if k in self.forward:
            return "forward"
        if k in self.back:
            return "back"
        if k in self.excluded:
            return "excluded"
        return "unset"

    def directions(self, n_edges: int) -> list[str]:
        return [self.direction(k) for k in range(n_edges)]


def pebble(h: Hypergraph, sources: Iterable[int], cfg: RuleConfig | None = None) -> PebbleResult:
    """Two-phase pebbling from ``sources``.

    Phase 1 fires edges in rounds; within a round edges fire in
    ``(rule id, source tuple)`` order and the first edge to reach a target
    is forward. Phase 2 sweeps pebbled nodes from last to first and marks
    any unfired edge whose sources are all pebbled as back. Edges of
    disabled rules, and edges whose sources never get pebbled, are excluded.
    """
    cfg = cfg or RuleConfig()
    src = sorted(set(sources))
    for s in src:
        if not 0 <= s < len(h.nodes):
            raise KeyError(f"source node {s} not in graph")
    disabled = {k for k, e in enumerate(h.edges) if e.rule not in cfg.enabled}
    pebbled = set(src)
    order = list(src)
    forward: set[int] = set()
    back: set[int] = set()
    first: dict[int, int] = {}
    missing = [len(e.sources) for e in h.edges]
    ready = []
    for s in src:
        for k in h.out_edges[s]:
            missing[k] -= 1
            if missing[k] == 0:
                ready.append(k)
    while ready:
        ready = sorted((k for k in set(ready) if k not in disabled),
                       key=lambda k: (h.edges[k].rule, h.edges[k].sources, h.edges[k].target))
        newly = []
        for k in ready:
            t = h.edges[k].target
            if t in pebbled:
                back.add(k)
            else:
                forward.add(k)
                first[t] = k
                pebbled.add(t)
                order.append(t)
                newly.append(t)
        ready = []
        for t in newly:
            for k in h.out_edges[t]:
                missing[k] -= 1
                if missing[k] == 0:
                    ready.append(k)
    # phase 2: catch anything the rounds did not fire
    fired = forward | back
    for n in reversed(order):
        for k in h.out_edges[n]:
            if k in fired or k in disabled:
                continue
            if all(s in pebbled for s in h.edges[k].sources):
                back.add(k)
                fired.add(k)
    excluded = set(range(len(h.edges))) - forward - back
    return PebbleResult(tuple(order), frozenset(forward), frozenset(back), frozenset(excluded), first)


def reachable(h: Hypergraph, sources: Iterable[int], allowed: Iterable[int] | None = None,
              forbid: Iterable[int] = ()) -> set[int]:
    """Plain closure of ``sources`` under the allowed edges."""
    if allowed is not None and not isinstance(allowed, (set, frozenset)):
        allowed = set(allowed)
    forbid = set(forbid)
    seen = set(sources)
    # premises still unpebbled, filled in as edges are first touched
    missing: dict[int, int] = {}
    stack = list(seen)
    while stack:
        n = stack.pop()
        for k in h.out_edges[n]:
            if allowed is not None and k not in allowed:
                continue
            left = missing.get(k, len(h.edges[k].sources)) - 1
            missing[k] = left
            if left == 0:
                t = h.edges[k].target
                if t not in seen and t not in forbid:
                    seen.add(t)
                    stack.append(t)
    return seen


class Reach:
    """Closure queries that share one precomputed base closure.

    Closures are cached per source set; synthesis asks about the same few
    hundred source sets thousands of times.
    """

    CACHE_SIZE = 4096

    def __init__(self, h: Hypergraph, base: Iterable[int], allowed: Iterable[int] | None = None):
        self.h = h
        self.allowed = None if allowed is None else frozenset(allowed)
        self._seen: set[int] = set()
        self._missing: dict[int, int] = {}
        self._cache: dict[frozenset[int], frozenset[int]] = {}
        self._run(self._seen, self._missing, list(set(base)), None)

    def _run(self, seen: set[int], missing: dict[int, int], stack: list[int], goal: int | None) -> bool:
        h, allowed = self.h, self.allowed
        seen.update(stack)
        if goal is not None and goal in seen:
            return True
        while stack:
            n = stack.pop()
            for k in h.out_edges[n]:
                if allowed is not None and k not in allowed:
                    continue
                left = missing.get(k, len(h.edges[k].sources)) - 1
                missing[k] = left
                if left == 0:
                    t = h.edges[k].target
                    if t not in seen:
                        if t == goal:
                            return True
                        seen.add(t)
                        stack.append(t)
        return False

    def closure(self, sources: Iterable[int]) -> frozenset[int]:
        return self._closure(frozenset(sources))

    def _closure(self, sources: frozenset[int]) -> frozenset[int]:
        hit = self._cache.get(sources)
        if hit is None:
            seen, missing = set(self._seen), dict(self._missing)
            self._run(seen, missing, [n for n in sources if n not in seen], None)
            hit = self._cache[sources] = frozenset(seen)
            if len(self._cache) > self.CACHE_SIZE:
                del self._cache[next(iter(self._cache))]
        return hit

    def derives(self, sources: Iterable[int], goal: int) -> bool:
        return goal in self._seen or goal in self._closure(frozenset(sources))
