"""End-to-end synthesis for one figure."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .analogy import AnalogyReport, partition
from .checker import Replayer, Step
from .figure import DEFAULT_EPS, Figure, Layout, extract_implicit_facts
from .hypergraph import Hypergraph, saturate_figure
from .problemset import ProblemSet, Record, stats_block
from .rules import RuleConfig
from .synthesizer import Budget, Problem, SynthesisResult, synthesize

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage
        self.cause = exc


class InvariantViolation(AssertionError):
    pass


@dataclass
class Run:
    fig: Figure
    lay: Layout
    cfg: RuleConfig
    h: Hypergraph
    result: SynthesisResult
    report: AnalogyReport
    problems: ProblemSet
    seconds: float
    validation: list[tuple[str, bool]] = field(default_factory=list)

    def stats(self, timing: bool = False) -> str:
        return stats_block(self.problems, len(self.fig.goals), self.seconds if timing else None,
                           self.validation)


def solution_steps(h: Hypergraph, p: Problem) -> tuple[Step, ...]:
    return tuple(Step(tuple(h.nodes[s] for s in h.edges[k].sources), h.edges[k].rule, h.nodes[h.edges[k].target])
                 for k in p.solution)


def to_record(h: Hypergraph, p: Problem, n_assumptions: int) -> Record:
    flags = {name for name, on in (("interesting", p.interesting),
                                   ("strictly-interesting", p.strictly_interesting),
                                   ("converse", p.converse)) if on}
    used = sum(h.provenance[s] == "assumption" for s in p.sources)
    return Record(p.id, frozenset(flags), p.reason, (used, n_assumptions), tuple(h.nodes[s] for s in p.sources),
                  h.nodes[p.goal], p.metrics, solution_steps(h, p))


def _stage(name, fn, *args, **kw):
    log.info("stage=%s start", name)
    try:
        return fn(*args, **kw)
    except (InvariantViolation, AssertionError):
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def run(fig: Figure, cfg: RuleConfig | None = None, eps: float = DEFAULT_EPS,
        budget: Budget | None = None, check: bool = True) -> Run:
    """Implicit facts, saturation, pebbling, enumeration, classification,
    converse problems and analogy; every solution is replayed when ``check``."""
    cfg = cfg or RuleConfig()
    t0 = time.perf_counter()
    lay = _stage("layout", Layout, fig, eps)
    implicit = _stage("implicit-facts", extract_implicit_facts, fig, eps, lay)
    h = _stage("saturate", saturate_figure, lay, cfg)
    for w in h.warnings:
        log.warning("stage=saturate %s", w)
    unsound = h.soundness_warnings(lay)
    if unsound:
        raise InvariantViolation("; ".join(unsound[:3]))
    result = _stage("synthesize", synthesize, h, cfg, budget)
    inter = [p for p in result.problems if p.interesting]
    report = _stage("analogy", partition, h, inter)
    n_assume = len(result.ctx.assumptions)
    records = [to_record(h, p, n_assume) for p in result.problems]
    if check:
        rep = Replayer(lay, cfg)
        for rec in records:
            v = rep.grade(rec.sources, rec.goal, rec.steps)
            if not v.correct:
                raise InvariantViolation(f"solution of {rec.id} does not replay: {v.message}")
    coarse = [(f"c{i + 1}", ids) for i, ids in enumerate(report.coarse)]
    ps = ProblemSet(fig.name, records, coarse, list(report.goal.items()))
    seconds = time.perf_counter() - t0
    validation = []
    for g in fig.goals:
        n = h.index.get(g)
        ok = n is not None and any(p.interesting for p in result.by_goal(n))
        validation.append((str(g), ok))
    log.info("stage=done problems=%d implicit=%d seconds=%.2f", len(records), len(implicit), seconds)
    return Run(fig, lay, cfg, h, result, report, ps, seconds, validation)
