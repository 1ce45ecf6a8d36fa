"""``geosynth`` command line.

Results go to stdout (or ``--out``); stage logs go to stderr.
Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .checker import ProofSyntaxError, Replayer, Step, format_step, parse_step
from .facts import format_prop, parse_prop
from .figure import DEFAULT_EPS, Figure, Layout, parse_figure
from .hypergraph import saturate_figure
from .pipeline import InvariantViolation, StageError, run
from .problemset import Query, dumps, histograms, hint, loads, parse_range, query, stats_block
from .rules import RuleConfig
from .synthesizer import Context, classify, problem_for

log = logging.getLogger("geosynth")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _config(args) -> RuleConfig:
    return RuleConfig.parse(_read(args.rules)) if args.rules else RuleConfig()


def _figure(args) -> Figure:
    return parse_figure(_read(args.figure), args.eps)


def _kinds(text: str | None) -> frozenset[str] | None:
    return None if text is None else frozenset(k.strip() for k in text.split(",") if k.strip())


# ---------------------------------------------------------------------------
# subcommands

def cmd_synthesize(args) -> int:
    r = run(_figure(args), _config(args), args.eps)
    text = dumps(r.problems)
    stats = r.stats(timing=args.timing)
    if args.out:
        _write(args.out, text)
        _write(args.out + ".stats", stats)
    else:
        _write(None, text + "\n" + stats)
    return 0


def cmd_query(args) -> int:
    ps = loads(_read(args.problems))
    q = Query(width=args.width, length=args.length, steps=args.steps,
              source_types=_kinds(args.source_type), goal_types=_kinds(args.goal_type))
    sub = query(ps, q)
    _write(args.out, dumps(sub) + "\n" + histograms(sub.records))
    return 0


def cmd_hint(args) -> int:
    rec = loads(_read(args.problems)).get(args.id)
    step = hint(rec, [parse_prop(t) for t in args.established])
    _write(args.out, "complete\n" if step is None else format_step(step) + "\n")
    return 0


def _parse_script(text: str, lay: Layout) -> tuple[list, object, list[Step]]:
    givens, goal, steps = [], None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        try:
            if word == "given":
                givens.append(lay.normalize(parse_prop(rest)))
            elif word == "goal":
                goal = lay.normalize(parse_prop(rest))
            else:
                steps.append(parse_step(line, lay))
        except ValueError as exc:
            raise ProofSyntaxError(f"line {lineno}: {exc}") from None
    if goal is None:
        raise ProofSyntaxError("script declares no goal")
    return givens, goal, steps


def cmd_grade(args) -> int:
    fig = _figure(args)
    lay = Layout(fig, args.eps)
    cfg = _config(args)
    givens, goal, steps = _parse_script(_read(args.script), lay)
    v = Replayer(lay, cfg).grade(givens, goal, steps)
    if v.correct:
        ps = loads(_read(args.problems)) if args.problems else run(fig, cfg, args.eps, check=False).problems
        have = set(givens)
        shorter = [r for r in ps.records
                   if r.goal == goal and set(r.sources) <= have and len(r.steps) < len(steps)]
        if shorter:
            best = min(shorter, key=lambda r: (len(r.steps), r.id))
            v.suggestion = f"a {len(best.steps)}-step solution exists ({best.id})"
    out = [f"verdict {'correct' if v.correct else 'incorrect'}: {v.message}"]
    out += [f"step {r.index} {'ok' if r.ok else 'fail ' + r.reason}: {format_step(r.step)}" for r in v.steps]
    if v.suggestion:
        out.append(f"suggestion {v.suggestion}")
    _write(args.out, "\n".join(out) + "\n")
    return 0


def cmd_classify(args) -> int:
    fig = _figure(args)
    lay = Layout(fig, args.eps)
    cfg = _config(args)
    h = saturate_figure(lay, cfg)
    ctx = Context(h, cfg)

    def node(text: str) -> int:
        p = lay.normalize(parse_prop(text))
        n = h.index.get(p)
        if n is None:
            raise InputError(f"{format_prop(p)} is not a fact of this figure")
        return n

    S = [node(t) for t in args.source]
    g = node(args.goal)
    p = problem_for(ctx, S, g)
    if p is None:
        raise InputError("the sources do not derive the goal")
    classify(ctx, p)
    flags = [f for f, on in (("interesting", p.interesting), ("strictly-interesting", p.strictly_interesting))
             if on]
    m = p.metrics
    out = [f"flags {' '.join(flags) or 'none'}", f"reason {p.reason or '-'}",
           f"metrics width {m.width} length {m.length} steps {m.steps}"]
    _write(args.out, "\n".join(out) + "\n")
    return 0


def cmd_stats(args) -> int:
    _write(args.out, stats_block(loads(_read(args.problems))))
    return 0


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for invariant violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[int, int]:
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="geosynth", description="Geometry proof problem synthesis.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log stage progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, figure=True):
        if figure:
            p.add_argument("--rules", help="rule configuration file")
            p.add_argument("--eps", type=float, default=DEFAULT_EPS)
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("synthesize", help="synthesize a problem set from a figure")
    p.add_argument("figure")
    p.add_argument("--timing", action="store_true", help="report wall time in the stats block")
    common(p)
    p.set_defaults(fn=cmd_synthesize)

    p = sub.add_parser("query", help="filter a problem set")
    p.add_argument("problems")
    for name in ("width", "length", "steps"):
        p.add_argument(f"--{name}", type=_range, metavar="a:b")
    p.add_argument("--goal-type", metavar="KIND[,KIND]")
    p.add_argument("--source-type", metavar="KIND[,KIND]")
    common(p, figure=False)
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("hint", help="next solution step of a problem")
    p.add_argument("problems")
    p.add_argument("id")
    p.add_argument("--established", action="append", default=[], metavar="PROP")
    common(p, figure=False)
    p.set_defaults(fn=cmd_hint)

    p = sub.add_parser("grade", help="check a proof script against a figure")
    p.add_argument("figure")
    p.add_argument("script")
    p.add_argument("--problems", help="problem set to look for shorter solutions in")
    common(p)
    p.set_defaults(fn=cmd_grade)

    p = sub.add_parser("classify", help="classify the problem given by --source and --goal")
    p.add_argument("figure")
    p.add_argument("--source", action="append", default=[], metavar="PROP")
    p.add_argument("--goal", required=True, metavar="PROP")
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("stats", help="stats block of a problem set")
    p.add_argument("problems")
    common(p, figure=False)
    p.set_defaults(fn=cmd_stats)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="level=%(levelname)s logger=%(name)s %(message)s")
    try:
        return args.fn(args)
    except (InvariantViolation, AssertionError) as exc:
        log.error("invariant violation: %s", exc)
        return 2
    except StageError as exc:
        log.error("stage=%s %s", exc.stage, exc.cause)
        return 1 if isinstance(exc.cause, (ValueError, KeyError)) else 2
    except (InputError, ValueError, KeyError) as exc:
        log.error("input error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
