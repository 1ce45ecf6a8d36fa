import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import figure_text, figures

from geosynth.facts import parse_prop
from geosynth.figure import (ClassId, FigureError, Layout, class_leq, classify_strongest,
                             extract_implicit_facts, parse_figure, serialize_figure)


def P(text):
    return parse_prop(text)


def test_fig1_parses(fig1):
    assert len(fig1.points) == 5 and len(fig1.segments) == 6
    assert len(fig1.assumptions) == 3 and len(fig1.goals) == 4


def test_minimal_figure():
    fig = parse_figure("figure f\npoint A 0 0\npoint B 1 0\nsegment A B\n")
    assert len(fig.points) == 2 and len(fig.segments) == 1
    assert len(extract_implicit_facts(fig)) == 0


@pytest.mark.parametrize("text, needle", [
    ("figure f\npoint A 0 0\npoint B 1 0\nsegment A Z\n", "unknown point"),
    ("figure f\npoint A 0 0\npoint A 1 0\n", "duplicate point"),
    ("figure f\npoint A 0 0\npoint B 0 0\nsegment A B\n", "zero-length"),
    ("figure f\npoint A 0 zero\n", "bad coordinate"),
    ("point A 0 0\n", "figure"),
    ("figure f\npoint A 0 0\ncircle A 1\n", "unknown declaration"),
])
def test_parse_errors(text, needle):
    with pytest.raises(FigureError, match=needle):
        parse_figure(text)


def test_parse_error_carries_line_number():
    with pytest.raises(FigureError) as info:
        parse_figure("figure f\npoint A 0 0\nsegment A Q\n")
    assert info.value.line == 3


def test_fig1_implicit_facts(fig1):
    facts = set(extract_implicit_facts(fig1))
    for text in ("parallel A D B C", "isosceles M B C", "isosceles M A D", "isosceles M C D", "isosceles M A B"):
        assert P(text) in facts
    # declared assumptions are not extracted again
    assert P("midpoint M A C") not in facts


def test_fig1_implicit_facts_without_assumptions(fig1):
    bare = parse_figure(serialize_figure(fig1).replace("assume", "# assume"))
    facts = set(extract_implicit_facts(bare))
    assert {P("midpoint M A C"), P("midpoint M B D"), P("angle-measure B C D 90")} <= facts


def test_isosceles_oracle():
    fig = parse_figure(figure_text({"A": (0, 0), "B": (4, 0), "C": (2, 3)}, [("A", "B"), ("B", "C"), ("C", "A")]))
    assert P("isosceles C A B") in extract_implicit_facts(fig)


def test_strongest_classes(fig1):
    assert classify_strongest(fig1, ("B", "M", "C")) is ClassId.ISOSCELES_TRIANGLE
    assert classify_strongest(fig1, ("A", "B", "C", "D")) is ClassId.RECTANGLE
    eq = parse_figure(figure_text({"A": (0, 0), "B": (1, 0), "C": (0.5, math.sqrt(3) / 2)},
                                  [("A", "B"), ("B", "C"), ("C", "A")]))
    assert classify_strongest(eq, ("A", "B", "C")) is ClassId.EQUILATERAL_TRIANGLE


def test_strongest_rejects_absent_shapes(fig1):
    with pytest.raises(FigureError):
        classify_strongest(fig1, ("A", "B", "Z"))
    with pytest.raises(FigureError):
        classify_strongest(fig1, ("A", "C", "B", "D"))


def test_lattice_is_a_partial_order():
    classes = list(ClassId)
    for a in classes:
        assert class_leq(a, a)
        for b in classes:
            if a != b and class_leq(a, b):
                assert not class_leq(b, a)
            for c in classes:
                if class_leq(a, b) and class_leq(b, c):
                    assert class_leq(a, c)
    assert class_leq(ClassId.SQUARE, ClassId.RHOMBUS) and class_leq(ClassId.SQUARE, ClassId.TRAPEZOID)
    assert class_leq(ClassId.EQUILATERAL_TRIANGLE, ClassId.TRIANGLE)


@given(figures())
def test_serialize_roundtrip(fig):
    assert parse_figure(serialize_figure(fig)) == fig


@given(figures())
def test_implicit_facts_hold_numerically(fig):
    lay = Layout(fig)
    facts = extract_implicit_facts(fig, lay=lay)
    assert all(lay.holds(p) for p in facts)
    assert not set(facts) & set(fig.assumptions)


@given(figures(max_assumptions=0), st.floats(-50, 50), st.floats(-50, 50), st.floats(0, 2 * math.pi),
       st.floats(0.1, 20))
def test_implicit_facts_invariant_under_similarity(fig, dx, dy, theta, k):
    c, s = math.cos(theta), math.sin(theta)
    moved = {p.name: (k * (c * p.x - s * p.y) + dx, k * (s * p.x + c * p.y) + dy) for p in fig.points}
    other = parse_figure(figure_text(moved, fig.segments))
    assert set(extract_implicit_facts(fig)) == set(extract_implicit_facts(other))


@given(figures())
def test_strongest_is_below_every_accepting_class(fig):
    lay = Layout(fig)
    for t in lay.triangles:
        best = classify_strongest(fig, t, lay=lay)
        assert class_leq(best, ClassId.TRIANGLE)
