"""Typed deduction hypergraph, saturation, induced sub-hypergraphs and metrics."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from .facts import NodeType, Prop
from .figure import Layout
from .rules import RULES, FactIndex, RuleConfig, instantiate

log = logging.getLogger(__name__)

PROVENANCES = ("intrinsic", "assumption", "derived")
DIRECTIONS = ("unset", "forward", "back", "excluded")


@dataclass(frozen=True, order=True)
class Edge:
    target: int
    rule: str
    sources: tuple[int, ...]

    @property
    def family(self) -> str:
        return RULES[self.rule].family


@dataclass(frozen=True)
class ProblemMetrics:
    width: int
    length: int
    steps: int


class CyclicProof(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Nodes are sorted canonical propositions; edges are sorted by target."""

    nodes: tuple[Prop, ...]
    provenance: tuple[str, ...]
    edges: tuple[Edge, ...]
    directions: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    # length of the shortest algebraic chain ending at each node
    depths: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.directions:
            object.__setattr__(self, "directions", ("unset",) * len(self.edges))
        if not self.depths:
            object.__setattr__(self, "depths", (0,) * len(self.nodes))
        if len(self.directions) != len(self.edges) or len(self.provenance) != len(self.nodes) \
                or len(self.depths) != len(self.nodes):
            raise ValueError("hypergraph field lengths disagree")

    @classmethod
    def build(cls, nodes: dict[Prop, str], edges: Iterable[tuple[Sequence[Prop], Prop, str]],
              warnings: Sequence[str] = (), depths: dict[Prop, int] | None = None) -> "Hypergraph":
        order = sorted(nodes)
        index = {p: i for i, p in enumerate(order)}
        es = set()
        for prem, concl, rid in edges:
            srcs = tuple(sorted({index[p] for p in prem}))
            tgt = index[concl]
            if not srcs or tgt in srcs:
                raise ValueError(f"malformed edge {rid}: {prem} -> {concl}")
            es.add(Edge(tgt, rid, srcs))
        ds = tuple(depths.get(p, 0) for p in order) if depths else ()
        return cls(tuple(order), tuple(nodes[p] for p in order), tuple(sorted(es)), (), tuple(warnings), ds)

    # -- lookup ----------------------------------------------------------
    @cached_property
    def index(self) -> dict[Prop, int]:
        return {p: i for i, p in enumerate(self.nodes)}

    def node(self, p: Prop) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise KeyError(f"unknown node {p}") from None

    def __contains__(self, p: Prop) -> bool:
        return p in self.index

    def __len__(self) -> int:
        return len(self.nodes)

    @cached_property
    def in_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for k, e in enumerate(self.edges):
            out[e.target].append(k)
        return out

    @cached_property
    def out_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for k, e in enumerate(self.edges):
            for s in e.sources:
                out[s].append(k)
        return out

    def with_directions(self, directions: Sequence[str]) -> "Hypergraph":
        bad = set(directions) - set(DIRECTIONS)
        if bad:
            raise ValueError(f"unknown direction(s) {bad}")
        return replace(self, directions=tuple(directions))

    # -- typing ----------------------------------------------------------
    @cached_property
    def node_types(self) -> tuple[NodeType, ...]:
        """Least fixpoint: a derived node is algebraic when all of its
        derivations are algebraic rules applied either as a manipulation of
        one equation or to premises that are themselves algebraic."""
        alg = [False] * len(self.nodes)
        changed = True
        while changed:
            changed = False
            for n in range(len(self.nodes)):
                if alg[n] or self.provenance[n] != "derived" or not self.in_edges[n]:
                    continue
                ok = True
                for k in self.in_edges[n]:
                    e = self.edges[k]
                    r = RULES[e.rule]
                    if r.family != "algebraic" or not (r.manipulation or all(alg[s] for s in e.sources)):
                        ok = False
                        break
                if ok:
                    alg[n] = changed = True
        return tuple(NodeType.ALGEBRAIC if a else NodeType.GEOMETRIC for a in alg)

    def node_type(self, n: int | Prop) -> NodeType:
        if isinstance(n, Prop):
            n = self.node(n)
        if not 0 <= n < len(self.nodes):
            raise KeyError(f"unknown node {n}")
        return self.node_types[n]

    # -- output ----------------------------------------------------------
    def dump(self) -> str:
        lines = [f"n{i} {self.node_types[i].value} {self.provenance[i]} {p}" for i, p in enumerate(self.nodes)]
        for e, d in zip(self.edges, self.directions):
            lines.append(f"e {e.rule} {' '.join(map(str, e.sources))} -> {e.target} {d}")
        return "\n".join(lines) + "\n"

    def soundness_warnings(self, lay: Layout) -> list[str]:
        """Derived nodes that are numerically false in the figure."""
        return [f"unsound derived fact: {p}" for p, pv in zip(self.nodes, self.provenance)
                if pv == "derived" and not lay.holds(p)]


# ---------------------------------------------------------------------------
# saturation

def saturate(seed: Iterable[Prop], cfg: RuleConfig | None = None, lay: Layout | None = None,
             intrinsic: Iterable[Prop] = (), depths: dict[Prop, int] | None = None,
             rule_order: Sequence[str] | None = None) -> Hypergraph:
    """Least fixpoint of the enabled rules over ``seed``.

    ``intrinsic`` marks which seed facts are structural; the rest are
    assumptions. Rounds are applied all-at-once (every rule sees the same
    node set), so the result does not depend on rule order. An algebraic
    edge is admitted only while the algebraic chain ending at its conclusion
    stays within ``cfg.max_algebraic_chain``. Seed facts start at chain
    depth 0 unless ``depths`` says otherwise, so ``h.nodes`` with
    ``h.depths`` re-saturates to ``h``. ``rule_order`` only changes the
    order rules are tried in; the result is the same.
    """
    cfg = cfg or RuleConfig()
    intrinsic = set(intrinsic)
    nodes: dict[Prop, str] = {p: ("intrinsic" if p in intrinsic else "assumption") for p in seed}
    edges: dict[tuple[tuple[Prop, ...], Prop, str], None] = {}
    depth: dict[Prop, int] = {p: (depths or {}).get(p, 0) for p in nodes}
    order = sorted(cfg.enabled) if rule_order is None else [r for r in rule_order if r in cfg.enabled]
    rules = [RULES[r] for r in order]
    capped: set[Prop] = set()
    rounds = 0
    while True:
        rounds += 1
        idx = FactIndex(nodes)
        new_edges = []
        for r in rules:
            for prem, concl in instantiate(r, idx, lay, cfg):
                key = (prem, concl, r.id)
                if key not in edges:
                    new_edges.append(key)
        added = False
        for key in new_edges:
            prem, concl, rid = key
            if RULES[rid].family == "algebraic":
                d = 1 + max(depth[p] for p in prem)
                if d > cfg.max_algebraic_chain:
                    if concl not in nodes:
                        capped.add(concl)
                    continue
            edges[key] = None
            if concl not in nodes:
                nodes[concl] = "derived"
            added = True
        # chain depths: minimum over admitted derivations, iterated to a fixpoint
        depth_changed = _relax_depths(nodes, edges, depth)
        if not added and not depth_changed:
            break
    capped -= set(nodes)
    warnings = []
    if capped:
        warnings.append(f"algebraic chain cap {cfg.max_algebraic_chain} cut off {len(capped)} conclusion(s)")
        log.info(warnings[-1])
    log.debug("saturation: %d rounds, %d nodes, %d edges", rounds, len(nodes), len(edges))
    return Hypergraph.build(nodes, ((p, c, r) for p, c, r in edges), warnings, depth)


def _relax_depths(nodes, edges, depth) -> bool:
    changed = False
    for p in nodes:
        if p not in depth:
            depth[p] = 10 ** 9
    loop = True
    while loop:
        loop = False
        for prem, concl, rid in edges:
            d = 1 + max(depth[p] for p in prem) if RULES[rid].family == "algebraic" else 0
            if d < depth[concl]:
                depth[concl] = d
                loop = changed = True
    return changed


def seed_facts(lay: Layout) -> tuple[list[Prop], list[Prop]]:
    """``(intrinsic, assumptions)`` for a figure."""
    from .rules import intrinsic_facts
    intr = intrinsic_facts(lay)
    assumptions = sorted(set(lay.fig.assumptions) - set(intr))
    return intr, assumptions


def saturate_figure(lay: Layout, cfg: RuleConfig | None = None) -> Hypergraph:
    intr, assumptions = seed_facts(lay)
    return saturate(intr + assumptions, cfg, lay, intrinsic=intr)


# ---------------------------------------------------------------------------
# problem sub-hypergraphs

def induced(h: Hypergraph, sources: Iterable[int], solution: Iterable[int]) -> Hypergraph:
    """Sub-hypergraph spanned by the solution edges; sources get no in-edges."""
    sources = set(sources)
    sol = sorted(set(solution))
    for k in sol:
        if not 0 <= k < len(h.edges):
            raise KeyError(f"dangling edge reference {k}")
        if h.edges[k].target in sources:
            raise ValueError("solution edge targets a source node")
    keep = set(sources)
    for k in sol:
        keep.add(h.edges[k].target)
        keep.update(h.edges[k].sources)
    nodes = {h.nodes[i]: h.provenance[i] for i in keep}
    edges = [([h.nodes[s] for s in h.edges[k].sources], h.nodes[h.edges[k].target], h.edges[k].rule)
             for k in sol]
    return Hypergraph.build(nodes, edges)


def levels(h: Hypergraph, sources: Iterable[int], solution: Sequence[int]) -> dict[int, int]:
    """Level of every node touched by the solution: leaves are 0."""
    by_target: dict[int, list[int]] = defaultdict(list)
    nodes = set(sources)
    for k in solution:
        e = h.edges[k]
        by_target[e.target].append(k)
        nodes.add(e.target)
        nodes.update(e.sources)
    lv: dict[int, int] = {}
    visiting: set[int] = set()

    def level(n: int) -> int:
        if n in lv:
            return lv[n]
        if n in visiting:
            raise CyclicProof(f"cycle through {h.nodes[n]}")
        visiting.add(n)
        best = 0
        for k in by_target.get(n, ()):
            best = max(best, 1 + max(level(s) for s in h.edges[k].sources))
        visiting.discard(n)
        lv[n] = best
        return best

    for n in sorted(nodes):
        level(n)
    return lv


def metrics(h: Hypergraph, goal: int, sources: Iterable[int], solution: Sequence[int]) -> ProblemMetrics:
    lv = levels(h, sources, solution)
    counts: dict[int, int] = defaultdict(int)
    for n, v in lv.items():
        counts[v] += 1
    return ProblemMetrics(width=max(counts.values()), length=lv.get(goal, 0), steps=len(set(solution)))
