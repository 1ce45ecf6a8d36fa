"""Problem enumeration, minimality, interestingness and converse problems."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .facts import GOAL_KINDS, NodeType
from .hypergraph import Hypergraph, ProblemMetrics, metrics
from .pebbler import PebbleResult, Reach, pebble, reachable
from .rules import RuleConfig

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budget:
    max_per_goal: int = 64
    max_depth: int = 12
    # converse search: largest source set and options kept per node
    converse_sources: int = 3
    converse_width: int = 24


@dataclass
class Problem:
    goal: int
    sources: tuple[int, ...]
    solution: tuple[int, ...]
    metrics: ProblemMetrics
    interesting: bool = False
    strictly_interesting: bool = False
    converse: bool = False
    # None when an earlier check already settled the verdict
    minimal: bool | None = None
    reason: str = ""
    assumption_share: float = 0.0
    id: str = ""
    analogy_class: int | None = None

    @property
    def key(self) -> tuple:
        return (self.goal, self.sources)


@dataclass
class Context:
    """Everything the synthesizer needs about one saturated figure."""

    h: Hypergraph
    cfg: RuleConfig
    budget: Budget = field(default_factory=Budget)

    @cached_property
    def intrinsic(self) -> frozenset[int]:
        return frozenset(i for i, pv in enumerate(self.h.provenance) if pv == "intrinsic")

    @cached_property
    def assumptions(self) -> frozenset[int]:
        return frozenset(i for i, pv in enumerate(self.h.provenance) if pv == "assumption")

    @cached_property
    def pebbling(self) -> PebbleResult:
        return pebble(self.h, self.intrinsic | self.assumptions, self.cfg)

    @cached_property
    def free_pebbling(self) -> PebbleResult:
        return pebble(self.h, self.intrinsic, self.cfg)

    @cached_property
    def free(self) -> frozenset[int]:
        """Nodes that follow from the figure alone."""
        return self.free_pebbling.pebbled

    @cached_property
    def usable(self) -> frozenset[int]:
        return frozenset(self.pebbling.forward | self.pebbling.back)

    @cached_property
    def reach(self) -> Reach:
        """Closure queries from the figure over usable edges."""
        return Reach(self.h, self.intrinsic, self.usable)

    @cached_property
    def closure(self) -> frozenset[int]:
        """Assumptions plus what the definitions alone make of them."""
        defs = [k for k in self.usable if self.h.edges[k].family == "definition"]
        base = self.intrinsic | self.free | self.assumptions
        return frozenset(reachable(self.h, base, defs) - self.free)

    @cached_property
    def position(self) -> dict[int, int]:
        return self.pebbling.position()

    def free_edges(self, n: int) -> frozenset[int]:
        return self._free_edges.get(n, frozenset())

    @cached_property
    def _free_edges(self) -> dict[int, frozenset[int]]:
        out: dict[int, frozenset[int]] = {}
        first = self.free_pebbling.first
        for n in self.free_pebbling.order:
            if n in first:
                k = first[n]
                acc = {k}
                for s in self.h.edges[k].sources:
                    acc |= out.get(s, frozenset())
                out[n] = frozenset(acc)
        return out

    def order_solution(self, edges: Iterable[int], sources: Iterable[int]) -> tuple[int, ...]:
        """Topological order of ``edges`` starting from ``sources`` and the figure."""
        have = set(sources) | self.intrinsic
        todo = set(edges)
        out = []
        while todo:
            ready = [k for k in todo if all(s in have for s in self.h.edges[k].sources)]
            if not ready:
                raise ValueError("solution edges do not form a derivation")
            k = min(ready, key=lambda k: (self.position.get(self.h.edges[k].target, 1 << 30), k))
            out.append(k)
            todo.discard(k)
            have.add(self.h.edges[k].target)
        return tuple(out)


# ---------------------------------------------------------------------------
# minimality

def is_minimal(h: Hypergraph, S: Iterable[int], g: int, ctx: Context | None = None) -> bool:
    """No single source can be dropped while still reaching ``g``."""
    S = set(S)
    if ctx is not None:
        derives = ctx.reach.derives
    else:
        base = frozenset(i for i, pv in enumerate(h.provenance) if pv == "intrinsic")
        derives = lambda T, t: t in reachable(h, set(T) | base)  # noqa: E731
    if not derives(S, g):
        raise ValueError(f"sources do not derive {h.nodes[g]}")
    return not any(derives(S - {s}, g) for s in S)


# ---------------------------------------------------------------------------
# enumeration over forward edges

Option = tuple[frozenset[int], frozenset[int], int]  # sources, edges, depth


def _prune(opts: Iterable[Option], k: int, closure: frozenset[int]) -> list[Option]:
    """Keep the ``k`` best options: sources inside the assumption closure
    first, then fewer sources, then fewer edges."""
    def key(o: Option):
        return (len(o[0] - closure), len(o[0]), len(o[1]), sorted(o[0]), sorted(o[1]))

    best: dict[frozenset[int], Option] = {}
    for o in opts:
        cur = best.get(o[0])
        if cur is None or key(o) < key(cur):
            best[o[0]] = o
    return sorted(best.values(), key=key)[:k]


def _forward_options(ctx: Context) -> dict[int, list[Option]]:
    h, pr, budget = ctx.h, ctx.pebbling, ctx.budget
    opts: dict[int, list[Option]] = {}
    for n in pr.order:
        if n in ctx.free:
            opts[n] = [(frozenset(), ctx.free_edges(n), 0)]
            continue
        own: Option = (frozenset({n}), frozenset(), 0)
        if n not in pr.first:
            opts[n] = [own]
            continue
        k = pr.first[n]
        acc: list[Option] = [(frozenset(), frozenset({k}), 0)]
        for s in h.edges[k].sources:
            acc = _prune(((a[0] | b[0], a[1] | b[1], max(a[2], b[2] + 1))
                          for a, b in product(acc, opts[s])), budget.max_per_goal, ctx.closure)
        acc = [o for o in acc if o[2] <= budget.max_depth]
        opts[n] = _prune([own] + acc, budget.max_per_goal, ctx.closure)
    return opts


def _expand(ctx: Context, g: int, S: frozenset[int]) -> tuple[set[int], set[int]] | None:
    """Edges of the forward derivation of ``g`` stopping at ``S``; visited sources."""
    pr, h = ctx.pebbling, ctx.h
    edges: set[int] = set()
    used: set[int] = set()
    stack, seen = [g], set()
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if n in S and n != g:
            used.add(n)
            continue
        if n in ctx.free:
            edges |= ctx.free_edges(n)
            continue
        if n not in pr.first:
            return None
        k = pr.first[n]
        edges.add(k)
        stack.extend(h.edges[k].sources)
    return edges, used


def goal_nodes(ctx: Context) -> list[int]:
    return [n for n in sorted(ctx.pebbling.pebbled)
            if ctx.h.provenance[n] == "derived" and ctx.h.nodes[n].kind in GOAL_KINDS]


def enumerate_problems(ctx: Context, g: int, opts: dict[int, list[Option]] | None = None) -> list[Problem]:
    if g not in ctx.pebbling.pebbled:
        raise ValueError(f"goal {ctx.h.nodes[g]} is unreachable")
    if g in ctx.free:
        sol = ctx.order_solution(ctx.free_edges(g), ())
        return [_problem(ctx, g, (), sol)]
    opts = opts if opts is not None else _forward_options(ctx)
    out = []
    for S, _, _ in opts[g]:
        if g in S:
            continue
        got = _expand(ctx, g, S)
        if got is None or got[1] != S:
            continue
        out.append(_problem(ctx, g, tuple(sorted(S)), ctx.order_solution(got[0], S)))
    return out


def _problem(ctx: Context, g: int, S: tuple[int, ...], solution: tuple[int, ...]) -> Problem:
    m = metrics(ctx.h, g, S, solution)
    return Problem(goal=g, sources=S, solution=solution, metrics=m)


# ---------------------------------------------------------------------------
# classification

def classify(ctx: Context, p: Problem) -> Problem:
    h = ctx.h
    S = set(p.sources)
    used = S & ctx.assumptions
    p.assumption_share = len(used) / len(ctx.assumptions) if ctx.assumptions else 0.0
    preds = {s for k in p.solution if h.edges[k].target == p.goal for s in h.edges[k].sources}
    reason = ""
    if p.converse:
        reason = "converse"
    elif h.node_types[p.goal] is NodeType.ALGEBRAIC:
        reason = "algebraic goal"
    elif any(h.node_types[s] is NodeType.ALGEBRAIC for s in preds):
        reason = "algebraic predecessor"
    elif not used:
        reason = "no assumption used"
    elif not S <= ctx.closure:
        reason = "sources outside assumption closure"
    if p.minimal is None and not reason:
        p.minimal = is_minimal(h, S, p.goal, ctx)
        if not p.minimal:
            reason = "not minimal"
    p.reason = reason
    p.interesting = not reason
    p.strictly_interesting = p.interesting and used == set(ctx.assumptions)
    return p


# ---------------------------------------------------------------------------
# converse problems

def _definitional_restatements(ctx: Context, a: int) -> set[int]:
    defs = [k for k in ctx.usable if ctx.h.edges[k].family == "definition"]
    return reachable(ctx.h, {a} | ctx.free, defs)


def converse_problems(ctx: Context) -> list[Problem]:
    """Problems whose goal is an assumption, proved from derived facts.

    Candidate source sets come from a bounded cut search over all usable
    edges that avoid the goal; each candidate is then re-derived from
    scratch, checked for minimality, and required to contain a derived fact.
    """
    h, budget = ctx.h, ctx.budget
    closure_mask = sum(1 << n for n in ctx.closure)
    limit = budget.converse_sources
    pos = ctx.position
    out = []
    for a in sorted(ctx.assumptions):
        banned = _definitional_restatements(ctx, a)
        edges = [k for k in ctx.usable if a not in h.edges[k].sources and h.edges[k].target not in ctx.free]
        allowed = set(_ancestor_edges(h, a, edges))
        eligible = {n for n in ctx.pebbling.pebbled
                    if n not in ctx.free and n not in banned and h.nodes[n].kind in GOAL_KINDS}
        # source sets as bitmasks over node indices
        opts: dict[int, list[int]] = {n: [1 << n] for n in eligible}
        for n in ctx.free:
            opts[n] = [0]
        todo = set(allowed)
        while todo:
            batch, todo = sorted(todo, key=lambda k: (pos.get(h.edges[k].target, 0), k)), set()
            for k in batch:
                e = h.edges[k]
                if any(s not in opts for s in e.sources):
                    continue
                acc = [0]
                for s in e.sources:
                    # figure facts add nothing; an empty side needs no merge
                    if opts[s] == [0]:
                        continue
                    if acc == [0]:
                        acc = opts[s]
                        continue
                    acc = _prune_masks({z for x in acc for y in opts[s] if (z := x | y).bit_count() <= limit},
                                       budget, closure_mask)
                    if not acc:
                        break
                if not acc:
                    continue
                cur = opts.get(e.target, [])
                if all(any(not t & ~m for t in cur) for m in acc):
                    continue
                merged = _prune_masks(cur + acc, budget, closure_mask)
                if merged != cur:
                    opts[e.target] = merged
                    todo.update(j for j in h.out_edges[e.target] if j in allowed)
        for m in opts.get(a, []):
            S = frozenset(i for i in range(m.bit_length()) if m >> i & 1)
            if not S or a in S:
                continue
            p = _converse_problem(ctx, a, S)
            if p is not None:
                out.append(p)
    return out


def _ancestor_edges(h: Hypergraph, goal: int, edges: Iterable[int]) -> list[int]:
    """Edges from which ``goal`` can be reached."""
    edges = set(edges)
    seen, stack, keep = {goal}, [goal], []
    while stack:
        n = stack.pop()
        for k in h.in_edges[n]:
            if k not in edges:
                continue
            keep.append(k)
            for s in h.edges[k].sources:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
    return sorted(set(keep))


def _prune_masks(masks: Iterable[int], budget: Budget, closure_mask: int) -> list[int]:
    """Smallest source sets first (fewest outside the assumption closure),
    dropping supersets of sets already kept."""
    limit, outside = budget.converse_sources, ~closure_mask
    uniq = sorted(((m & outside).bit_count(), c, m) for m in set(masks) if (c := m.bit_count()) <= limit)
    kept: list[int] = []
    seen: set[int] = set()
    for _, _, m in uniq:
        # masks are tiny, so walking their subsets beats scanning ``kept``
        sub, dominated = m, 0 in seen
        while sub and not dominated:
            dominated = sub in seen
            sub = (sub - 1) & m
        if not dominated:
            kept.append(m)
            seen.add(m)
            if len(kept) == budget.converse_width:
                break
    return kept


def problem_for(ctx: Context, S: Iterable[int], g: int) -> Problem | None:
    """The problem ``S ⊢ g`` with its first-derivation solution, unclassified;
    None when ``S`` and the figure do not derive ``g``."""
    h, S = ctx.h, frozenset(S)
    local = pebble(h, S | ctx.intrinsic, ctx.cfg)
    if g not in local.pebbled:
        return None
    edges, stack, seen = set(), [g], set()
    while stack:
        n = stack.pop()
        if n in seen or n in S or n in ctx.intrinsic:
            continue
        seen.add(n)
        k = local.first[n]
        edges.add(k)
        stack.extend(h.edges[k].sources)
    return _problem(ctx, g, tuple(sorted(S)), ctx.order_solution(edges, S))


def _converse_problem(ctx: Context, a: int, S: frozenset[int]) -> Problem | None:
    if not S - ctx.assumptions:
        return None
    p = problem_for(ctx, S, a)
    if p is None or not is_minimal(ctx.h, S, a, ctx):
        return None
    p.converse = True
    p.minimal = True
    return p


def reduce_sources(ctx: Context, S: Iterable[int], g: int) -> tuple[int, ...]:
    """A minimal subset of ``S`` still deriving ``g``.

    Sources are dropped greedily: those outside the assumption closure
    first, then derived facts, then assumptions, so that a reduction keeps
    as many assumptions as it can.
    """
    keep = set(S)
    order = sorted(keep, key=lambda n: (n in ctx.closure, n in ctx.assumptions, n))
    for s in order:
        if ctx.reach.derives(keep - {s}, g):
            keep.discard(s)
    return tuple(sorted(keep))


def _reductions(ctx: Context, problems: Iterable[Problem]) -> list[Problem]:
    """Minimal problems behind the enumerated ones that are not minimal.

    A redundant assumption can hide the only forward cut through a smaller
    source set, so each non-minimal candidate is shrunk and re-solved.
    """
    out, seen = [], set()
    for p in problems:
        if p.converse or p.reason not in ("not minimal", "sources outside assumption closure"):
            continue
        if p.minimal is None:
            p.minimal = is_minimal(ctx.h, p.sources, p.goal, ctx)
        if p.minimal:
            continue
        S = reduce_sources(ctx, p.sources, p.goal)
        if (p.goal, S) in seen:
            continue
        seen.add((p.goal, S))
        q = problem_for(ctx, S, p.goal)
        if q is not None:
            q.minimal = True
            out.append(classify(ctx, q))
    return out


# ---------------------------------------------------------------------------

@dataclass
class SynthesisResult:
    ctx: Context
    problems: list[Problem]

    def by_goal(self, g: int) -> list[Problem]:
        return [p for p in self.problems if p.goal == g]


def synthesize(h: Hypergraph, cfg: RuleConfig | None = None, budget: Budget | None = None) -> SynthesisResult:
    ctx = Context(h, cfg or RuleConfig(), budget or Budget())
    opts = _forward_options(ctx)
    problems: list[Problem] = []
    for g in goal_nodes(ctx):
        problems.extend(classify(ctx, p) for p in enumerate_problems(ctx, g, opts))
    problems.extend(_reductions(ctx, problems))
    problems.extend(classify(ctx, p) for p in converse_problems(ctx))
    uniq: dict[tuple, Problem] = {}
    for p in problems:
        uniq.setdefault(p.key, p)
    ordered = sorted(uniq.values(), key=lambda p: (h.nodes[p.goal], [h.nodes[s] for s in p.sources]))
    for i, p in enumerate(ordered, start=1):
        p.id = f"p{i}"
    return SynthesisResult(ctx, ordered)
