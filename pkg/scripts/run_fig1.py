"""Synthesize the fixture figure and summarize statements A-H.

    python scripts/run_fig1.py [--out fig1.pset] [--full-catalog]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from geosynth.facts import parse_prop
from geosynth.figure import parse_figure
from geosynth.pipeline import run
from geosynth.problemset import dumps
from geosynth.rules import RuleConfig

DATA = Path(__file__).resolve().parent.parent / "data"
STATEMENTS = {
    "A": "tri-cong B M C D M A",
    "B": "angle-measure A D C 90",
    "C": "tri-cong A D C B C D",
    "D": "seg-scale 2 B M A C",
    "E": "isosceles M C D",
    "F": "isosceles M B C",
    "G": "isosceles M A D",
    "H": "parallel A D B C",
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="write the problem set here")
    ap.add_argument("--full-catalog", action="store_true", help="use every rule instead of data/fig1.rules")
    args = ap.parse_args()

    fig = parse_figure((DATA / "fig1.fig").read_text())
    cfg = RuleConfig() if args.full_catalog else RuleConfig.parse((DATA / "fig1.rules").read_text())
    t0 = time.perf_counter()
    r = run(fig, cfg)
    secs = time.perf_counter() - t0
    print(r.stats(timing=True))

    print(f"{'':3}{'statement':<26}{'interesting':>12}{'min steps':>11}")
    for key, text in STATEMENTS.items():
        goal = r.lay.normalize(parse_prop(text))
        recs = [x for x in r.problems.records if x.goal == goal and x.interesting]
        best = min((x.metrics.steps for x in recs), default="-")
        print(f"{key:<3}{text:<26}{len(recs):>12}{best:>11}")
    print(f"\n{len(r.problems.records)} problems in {secs:.2f}s")
    if args.out:
        Path(args.out).write_text(dumps(r.problems))
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
