"""Coarse analogy between the isosceles statements E, F and G of the fixture
figure, under the fixture rule file and under the full catalog.

    python scripts/analogy_report.py
"""

from __future__ import annotations

from pathlib import Path

from geosynth.analogy import coarsely_analogous
from geosynth.facts import parse_prop
from geosynth.figure import parse_figure
from geosynth.pipeline import run
from geosynth.rules import RuleConfig

DATA = Path(__file__).resolve().parent.parent / "data"
GOALS = {"E": "isosceles M C D", "F": "isosceles M B C", "G": "isosceles M A D"}


def report(label: str, cfg: RuleConfig) -> None:
    r = run(parse_figure((DATA / "fig1.fig").read_text()), cfg, check=False)
    h = r.h
    probs = {k: [p for p in r.result.by_goal(h.node(parse_prop(t))) if p.interesting] for k, t in GOALS.items()}
    print(f"[{label}]")
    for a, b in (("E", "F"), ("E", "G"), ("F", "G")):
        hits = sum(coarsely_analogous(h, p, q) for p in probs[a] for q in probs[b])
        print(f"  {a}~{b}: {hits}/{len(probs[a]) * len(probs[b])} pairs")


def main() -> None:
    report("data/fig1.rules", RuleConfig.parse((DATA / "fig1.rules").read_text()))
    report("full catalog", RuleConfig())


if __name__ == "__main__":
    main()
