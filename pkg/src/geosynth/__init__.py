"""Synthesis, classification and grading of Euclidean geometry proof problems."""

from .facts import Prop, format_prop, make, parse_prop
from .figure import Figure, Layout, parse_figure
from .hypergraph import Hypergraph, saturate_figure
from .pipeline import Run, run
from .rules import RULES, RuleConfig
from .synthesizer import Budget, Problem, synthesize

__all__ = ["Prop", "format_prop", "make", "parse_prop", "Figure", "Layout", "parse_figure",
           "Hypergraph", "saturate_figure", "Run", "run", "RULES", "RuleConfig", "Budget",
           "Problem", "synthesize"]
