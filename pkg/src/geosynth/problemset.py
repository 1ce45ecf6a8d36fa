"""Problem-set files, stats blocks, queries and hints.

A problem set is self-contained: every record carries its propositions and
solution steps, so querying, hinting and grading need no hypergraph.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .checker import Step, format_step, parse_step
from .facts import Prop, format_prop, goal_type, parse_prop
from .hypergraph import ProblemMetrics

FLAG_NAMES = ("interesting", "strictly-interesting", "converse")
STEP_BUCKETS = ("0-2", "3-5", "6-10", ">10")
COVERAGE_BUCKETS = ("0-25%", "26-50%", "51-75%", "76-99%", "100%")


class ProblemSetError(ValueError):
    pass


@dataclass
class Record:
    id: str
    flags: frozenset[str]
    reason: str
    coverage: tuple[int, int]  # (assumptions used, assumptions in the figure)
    sources: tuple[Prop, ...]
    goal: Prop
    metrics: ProblemMetrics
    steps: tuple[Step, ...]

    @property
    def interesting(self) -> bool:
        return "interesting" in self.flags

    @property
    def strictly_interesting(self) -> bool:
        return "strictly-interesting" in self.flags

    @property
    def converse(self) -> bool:
        return "converse" in self.flags


@dataclass
class ProblemSet:
    figure: str
    records: list[Record]
    coarse: list[tuple[str, list[str]]] = field(default_factory=list)
    goal_classes: list[tuple[str, list[str]]] = field(default_factory=list)

    def get(self, pid: str) -> Record:
        for r in self.records:
            if r.id == pid:
                return r
        raise KeyError(f"no problem {pid!r}")


# ---------------------------------------------------------------------------
# text format

def dumps(ps: ProblemSet) -> str:
    out = [f"figure {ps.figure}", f"problems {len(ps.records)}", ""]
    for r in ps.records:
        out.append(f"problem {r.id}")
        out.append("flags " + (" ".join(f for f in FLAG_NAMES if f in r.flags) or "none"))
        out.append(f"reason {r.reason or '-'}")
        out.append(f"coverage {r.coverage[0]}/{r.coverage[1]}")
        out.extend(f"source {format_prop(s)}" for s in r.sources)
        out.append(f"goal {format_prop(r.goal)}")
        m = r.metrics
        out.append(f"metrics width {m.width} length {m.length} steps {m.steps}")
        out.extend(f"step {format_step(s)}" for s in r.steps)
        out.append("end")
        out.append("")
    if ps.coarse or ps.goal_classes:
        out.append("analogy coarse")
        out.extend(f"class {cid}: {' '.join(ids)}" for cid, ids in ps.coarse)
        out.append("analogy goal")
        out.extend(f"class {cid}: {' '.join(ids)}" for cid, ids in ps.goal_classes)
    return "\n".join(out).rstrip("\n") + "\n"


def loads(text: str) -> ProblemSet:
    ps = ProblemSet("", [])
    cur: dict | None = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition(" ")
        try:
            if cur is not None:
                if word == "end":
                    ps.records.append(_record(cur))
                    cur = None
                elif word == "flags":
                    cur["flags"] = frozenset() if rest == "none" else frozenset(rest.split())
                elif word == "reason":
                    cur["reason"] = "" if rest == "-" else rest
                elif word == "coverage":
                    cur["coverage"] = _coverage(rest)
                elif word == "source":
                    cur["sources"].append(parse_prop(rest))
                elif word == "goal":
                    cur["goal"] = parse_prop(rest)
                elif word == "metrics":
                    t = rest.split()
                    cur["metrics"] = ProblemMetrics(int(t[1]), int(t[3]), int(t[5]))
                elif word == "step":
                    cur["steps"].append(parse_step(rest))
                else:
                    raise ProblemSetError(f"unexpected {word!r} inside a problem")
            elif word == "figure":
                ps.figure = rest
            elif word == "problems":
                pass
            elif word == "problem":
                cur = {"id": rest, "flags": frozenset(), "reason": "", "coverage": (0, 0),
                       "sources": [], "steps": []}
            elif word == "analogy":
                section = rest
            elif word == "class" and section in ("coarse", "goal"):
                cid, _, ids = rest.partition(":")
                (ps.coarse if section == "coarse" else ps.goal_classes).append((cid.strip(), ids.split()))
            else:
                raise ProblemSetError(f"unexpected {word!r}")
        except (ValueError, IndexError, KeyError) as exc:
            raise ProblemSetError(f"line {lineno}: {exc}") from None
    if cur is not None:
        raise ProblemSetError("unterminated problem record")
    return ps


def _record(d: dict) -> Record:
    if "goal" not in d or "metrics" not in d:
        raise ProblemSetError(f"problem {d['id']} lacks a goal or metrics")
    return Record(d["id"], d["flags"], d["reason"], d["coverage"], tuple(d["sources"]), d["goal"],
                  d["metrics"], tuple(d["steps"]))


# ---------------------------------------------------------------------------
# stats

def step_bucket(steps: int) -> str:
    if steps <= 2:
        return "0-2"
    if steps <= 5:
        return "3-5"
    if steps <= 10:
        return "6-10"
    return ">10"


def _coverage(text: str) -> tuple[int, int]:
    a, b = text.split("/")
    used, total = int(a), int(b)
    if not 0 <= used <= total:
        raise ValueError(f"bad coverage {text!r}")
    return used, total


def coverage_bucket(c: tuple[int, int]) -> str:
    used, total = c
    pct = Fraction(100 * used, total) if total else Fraction(0)
    if pct <= 25:
        return "0-25%"
    if pct <= 50:
        return "26-50%"
    if pct <= 75:
        return "51-75%"
    if pct < 100:
        return "76-99%"
    return "100%"


def _avg(xs: Sequence[int]) -> str:
    return f"{sum(xs) / len(xs):.2f}" if xs else "0.00"


def stats_block(ps: ProblemSet, original_problems: int = 0, seconds: float | None = None,
                validation: Sequence[tuple[str, bool]] = ()) -> str:
    recs = ps.records
    inter = [r for r in recs if r.interesting]
    strict = [r for r in recs if r.strictly_interesting]
    goal_parts = len({goal_type(r.goal) for r in inter})
    rows = [
        ("Figures", "1"),
        ("Original Textbook Problems", str(original_problems)),
        ("Generated Problems", str(len(recs))),
        ("Interesting Problems", str(len(inter))),
        ("Strictly Interesting Problems", str(len(strict))),
        ("Converse Problems", str(sum(r.converse for r in recs))),
        ("Time (secs / figure)", "-" if seconds is None else f"{seconds:.2f}"),
        ("Ave. Goal Analogous Partitions", f"{goal_parts:.2f}"),
    ]
    out = ["[general]"]
    out += [f"{name:<34}{val}" for name, val in rows]
    out.append(f"{'':<34}{'Interesting':<14}Strictly Interesting")
    for name, attr in (("Ave. Proof Width", "width"), ("Ave. Proof Length", "length"),
                       ("Ave. Deductive Steps", "steps")):
        a = _avg([getattr(r.metrics, attr) for r in inter])
        b = _avg([getattr(r.metrics, attr) for r in strict])
        out.append(f"{name:<34}{a:<14}{b}")
    out.append("")
    out.append("[deductive steps]")
    out.append(f"{'Deductive Steps':<18}{'Interesting':<14}Strictly Interesting")
    for b in STEP_BUCKETS:
        n1 = sum(step_bucket(r.metrics.steps) == b for r in inter)
        n2 = sum(step_bucket(r.metrics.steps) == b for r in strict)
        out.append(f"{b:<18}{n1:<14}{n2}")
    out.append("")
    out.append("[coverage of the givens]")
    out.append("  ".join(COVERAGE_BUCKETS))
    counts = [sum(coverage_bucket(r.coverage) == b for r in inter) for b in COVERAGE_BUCKETS]
    out.append("  ".join(f"{c:<{len(b)}}" for c, b in zip(counts, COVERAGE_BUCKETS)).rstrip())
    if validation:
        out.append("")
        out.append("[textbook validation]")
        out.extend(f"{'pass' if ok else 'fail'} {goal}" for goal, ok in validation)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# queries

@dataclass(frozen=True)
class Query:
    width: tuple[int, int] | None = None
    length: tuple[int, int] | None = None
    steps: tuple[int, int] | None = None
    source_types: frozenset[str] | None = None
    goal_types: frozenset[str] | None = None

    def __post_init__(self):
        for name in ("width", "length", "steps"):
            r = getattr(self, name)
            if r is not None and not (1 <= r[0] <= r[1]):
                raise ValueError(f"bad {name} range {r[0]}:{r[1]}")

    def matches(self, r: Record) -> bool:
        for name in ("width", "length", "steps"):
            rng = getattr(self, name)
            if rng is not None and not rng[0] <= getattr(r.metrics, name) <= rng[1]:
                return False
        if self.goal_types is not None and goal_type(r.goal) not in self.goal_types:
            return False
        if self.source_types is not None and not {s.kind for s in r.sources} & self.source_types:
            return False
        return True


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise ValueError(f"range must look like a:b, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise ValueError(f"range needs 1 <= a <= b, got {text!r}")
    return lo, hi


def query(ps: ProblemSet, q: Query) -> ProblemSet:
    keep = [r for r in ps.records if q.matches(r)]
    ids = {r.id for r in keep}
    coarse = [(c, [i for i in m if i in ids]) for c, m in ps.coarse]
    goals = [(c, [i for i in m if i in ids]) for c, m in ps.goal_classes]
    return ProblemSet(ps.figure, keep, [x for x in coarse if x[1]], [x for x in goals if x[1]])


def histograms(records: Iterable[Record]) -> str:
    records = list(records)
    steps = defaultdict(int)
    cover = defaultdict(int)
    for r in records:
        steps[step_bucket(r.metrics.steps)] += 1
        cover[coverage_bucket(r.coverage)] += 1
    out = ["[deductive steps]"]
    out += [f"{b:<8}{steps[b]}" for b in STEP_BUCKETS]
    out.append("[coverage of the givens]")
    out += [f"{b:<8}{cover[b]}" for b in COVERAGE_BUCKETS]
    out.append(f"total   {len(records)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# hints

def hint(r: Record, established: Iterable[Prop]) -> Step | None:
    """Earliest solution step whose premises are known and whose conclusion is not."""
    known = set(r.sources) | set(established)
    stated = {s.conclusion for s in r.steps} | set(r.sources)
    unknown = [p for p in established if p not in stated]
    if unknown:
        raise ValueError(f"not part of this problem's solution: {format_prop(unknown[0])}")
    if r.goal in known:
        return None
    derived = {s.conclusion for s in r.steps}
    for s in r.steps:
        if s.conclusion in known:
            continue
        # structural figure facts appear as premises but are never steps
        if all(p in known or p not in derived for p in s.premises):
            return s
    return None
