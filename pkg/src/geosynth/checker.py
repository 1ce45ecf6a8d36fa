"""Step-by-step proof checking against the rule catalog.

Nothing here looks at a hypergraph: a proof is replayed from its givens and
the figure's structural facts, one rule application at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .facts import Prop, format_prop, parse_prop
from .figure import Layout
from .rules import RULES, RuleConfig, instantiate, intrinsic_facts


class ProofSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    premises: tuple[Prop, ...]
    rule: str
    conclusion: Prop

    def __str__(self) -> str:
        return format_step(self)


@dataclass(frozen=True)
class StepResult:
    index: int
    step: Step
    ok: bool
    reason: str = ""


@dataclass
class Verdict:
    correct: bool
    steps: list[StepResult] = field(default_factory=list)
    message: str = ""
    suggestion: str = ""


def format_step(s: Step) -> str:
    return f"{s.rule}: {', '.join(map(format_prop, s.premises))} => {format_prop(s.conclusion)}"


def parse_step(line: str, lay: Layout | None = None) -> Step:
    """``<rule>: <premise>, <premise> => <conclusion>``"""
    head, sep, rest = line.partition(":")
    if not sep or "=>" not in rest:
        raise ProofSyntaxError(f"expected `<rule>: <premises> => <conclusion>`: {line!r}")
    rule = head.strip()
    if rule not in RULES:
        raise ProofSyntaxError(f"unknown rule id {rule!r}")
    prem_text, _, concl_text = rest.partition("=>")
    norm = lay.normalize if lay else (lambda p: p)
    try:
        prems = tuple(norm(parse_prop(t)) for t in prem_text.split(",") if t.strip())
        concl = norm(parse_prop(concl_text))
    except ValueError as exc:
        raise ProofSyntaxError(str(exc)) from exc
    return Step(prems, rule, concl)


def parse_script(text: str, lay: Layout | None = None) -> list[Step]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_step(line, lay))
        except ProofSyntaxError as exc:
            raise ProofSyntaxError(f"line {lineno}: {exc}") from None
    return out


def _correspondence_slip(step: Step, lay: Layout) -> bool:
    """A CPCTC conclusion pairing parts that exist in the two triangles but do not correspond."""
    if step.rule != "cpctc" or len(step.premises) != 1 or step.premises[0].kind != "tri-cong":
        return False
    t = step.premises[0].pts
    t1, t2 = set(t[:3]), set(t[3:])
    c = step.conclusion
    if c.kind == "seg-cong":
        s1, s2 = c.segs()
    elif c.kind == "angle-cong":
        s1, s2 = c.angles()
    else:
        return False

    def inside(x, tri):
        if len(x) == 2:
            return set(x) <= tri
        a, v, b = x
        if v not in tri:
            return False
        arms = {lay.ray_rep(v, q) for q in tri - {v} if lay.connected(v, q)}
        return {a, b} <= arms

    return (inside(s1, t1) and inside(s2, t2)) or (inside(s1, t2) and inside(s2, t1))


@dataclass
class Replayer:
    """Grades many proofs on one layout, sharing rule instantiations."""

    lay: Layout
    cfg: RuleConfig = field(default_factory=RuleConfig)
    intrinsic: frozenset[Prop] = frozenset()
    _seen: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.intrinsic:
            self.intrinsic = frozenset(intrinsic_facts(self.lay))

    def licensed(self, rule: str, prem: tuple[Prop, ...]) -> set[tuple]:
        key = (rule, prem)
        if key not in self._seen:
            self._seen[key] = set(instantiate(RULES[rule], set(prem), self.lay, self.cfg))
        return self._seen[key]

    def grade(self, givens: Iterable[Prop], goal: Prop, steps: Sequence[Step]) -> Verdict:
        return _grade(self, set(self.intrinsic) | set(givens), goal, steps)


def check_step(step: Step, available: set[Prop], lay: Layout, cfg: RuleConfig,
               rep: Replayer | None = None) -> str:
    """Empty string when the step is licensed, else the reason it is not."""
    if step.rule not in RULES:
        raise ProofSyntaxError(f"unknown rule id {step.rule!r}")
    missing = [p for p in step.premises if p not in available]
    if missing:
        return "unknown premise"
    prem = tuple(sorted(set(step.premises)))
    licensed = rep.licensed(step.rule, prem) if rep else instantiate(RULES[step.rule], set(prem), lay, cfg)
    if (prem, step.conclusion) in licensed:
        return ""
    return "wrong correspondence" if _correspondence_slip(step, lay) else "rule mismatch"


def grade(lay: Layout, givens: Iterable[Prop], goal: Prop, steps: Sequence[Step],
          cfg: RuleConfig | None = None) -> Verdict:
    return Replayer(lay, cfg or RuleConfig()).grade(givens, goal, steps)


def _grade(rep: Replayer, available: set[Prop], goal: Prop, steps: Sequence[Step]) -> Verdict:
    verdict = Verdict(correct=True)
    for i, step in enumerate(steps, start=1):
        reason = check_step(step, available, rep.lay, rep.cfg, rep)
        verdict.steps.append(StepResult(i, step, not reason, reason))
        if reason:
            verdict.correct = False
        else:
            available.add(step.conclusion)
    if not verdict.correct:
        bad = [r for r in verdict.steps if not r.ok]
        verdict.message = f"step {bad[0].index}: {bad[0].reason}"
    elif not steps or steps[-1].conclusion != goal:
        verdict.correct = False
        verdict.message = "goal not established"
    else:
        verdict.message = "correct"
    return verdict
