import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import figures

from geosynth.facts import parse_prop
from geosynth.figure import Layout, parse_figure
from geosynth.hypergraph import saturate, saturate_figure, seed_facts
from geosynth.rules import RULES, FactIndex, RuleConfig, instantiate, intrinsic_facts

FAMILIES = {"axiom", "algebraic", "definition", "theorem"}


def P(text):
    return parse_prop(text)


def _edges(h):
    return {(tuple(h.nodes[s] for s in e.sources), h.nodes[e.target], e.rule) for e in h.edges}


# -- catalog ----------------------------------------------------------------

def test_catalog_shape():
    assert len(RULES) == 42
    for rid, r in RULES.items():
        assert r.id == rid and r.family in FAMILIES and r.premises and r.conclusion
    assert {r.id for r in RULES.values() if r.manipulation} == {"seg-multiply"}
    for rid in ("sas", "sss", "asa", "cpctc", "vertical-angles", "midpoint-def", "base-angles",
                "alternate-interior-converse", "corresponding-angles-converse", "triangle-sum"):
        assert rid in RULES


def test_config_roundtrip_and_caps():
    cfg = RuleConfig().without("sas", "cpctc")
    assert RuleConfig.parse(cfg.dumps()) == cfg
    text = "sas\ncpctc\ncaps 4 2 5\n"
    parsed = RuleConfig.parse(text)
    assert parsed.enabled == {"sas", "cpctc"}
    assert (parsed.max_numerator, parsed.max_denominator, parsed.max_algebraic_chain) == (4, 2, 5)


@pytest.mark.parametrize("text", ["no-such-rule\n", "caps 0 1 1\n", "caps 1 2\n", "caps a b c\n", "sas cpctc\n"])
def test_config_rejects_bad_files(text):
    with pytest.raises(ValueError):
        RuleConfig.parse(text)


def test_config_without_rule_ids_keeps_the_full_catalog():
    assert RuleConfig.parse("") == RuleConfig()
    assert RuleConfig.parse("# comment\ncaps 8 8 2\n") == RuleConfig(max_algebraic_chain=2)
    with pytest.raises(ValueError):
        RuleConfig(frozenset())


def test_fixture_knowledge_base(fig1_cfg):
    assert fig1_cfg == RuleConfig().without("base-angles-converse")


# -- instantiate --------------------------------------------------------------

def test_segment_addition(fig1_lay):
    facts = {P("between B M D"), P("collinear B M D"), P("segment B D")}
    got = instantiate(RULES["segment-addition"], facts, fig1_lay)
    assert got == [((P("between B M D"), P("collinear B M D")), P("seg-sum B M D M B D"))]


def test_sas_on_statement_a(fig1_lay):
    prem = {P("triangle B M C"), P("triangle D M A"), P("seg-cong B M D M"), P("seg-cong C M A M"),
            P("angle-cong B M C D M A")}
    concl = {c for _, c in instantiate(RULES["sas"], prem, fig1_lay)}
    assert concl == {P("tri-cong B M C D M A")}


def test_cpctc_needs_a_congruence(fig1_lay):
    assert instantiate(RULES["cpctc"], set(intrinsic_facts(fig1_lay)), fig1_lay) == []


def test_layout_rules_are_silent_without_layout():
    facts = {P("triangle A B C"), P("triangle D E F")}
    assert instantiate(RULES["triangle-sum"], facts) == []
    assert instantiate(RULES["midpoint-def"], {P("midpoint M A C")}) == [
        ((P("midpoint M A C"),), P("seg-cong A M C M"))]


def test_algebraic_closure_of_one_fact():
    cfg = RuleConfig().only(*(r for r in RULES if RULES[r].family == "algebraic"))
    h = saturate([P("seg-cong A B C D")], cfg)
    assert list(h.nodes) == [P("seg-cong A B C D")] and not h.edges


def test_disabling_congruence_removes_tri_cong(fig1_lay, fig1_cfg):
    h = saturate_figure(fig1_lay, fig1_cfg.without("sss", "sas", "asa"))
    assert not [p for p in h.nodes if p.kind == "tri-cong"]
    full = saturate_figure(fig1_lay, fig1_cfg)
    assert set(h.nodes) < set(full.nodes)


def test_fig1_has_every_statement(fig1_h):
    for text in ("tri-cong B M C D M A", "angle-measure A D C 90", "tri-cong A D C B C D",
                 "seg-scale 2 B M A C", "isosceles M B C", "parallel A D B C", "seg-cong A C B D",
                 "angle-cong A B D B D C"):
        assert P(text) in fig1_h


def test_every_edge_replays_in_one_step(fig1_h, fig1_lay, fig1_cfg):
    for prem, concl, rid in _edges(fig1_h):
        assert (tuple(sorted(set(prem))), concl) in instantiate(RULES[rid], set(prem), fig1_lay, fig1_cfg)


def test_conclusions_invent_no_points(fig1_h, fig1_lay):
    for prem, concl, rid in _edges(fig1_h):
        pts = {x for p in prem for x in p.pts}
        # angles are written on canonical rays, which may name a farther point of the same line
        near = {x for line in fig1_lay.lines if len(pts & set(line)) >= 2 for x in line}
        assert set(concl.pts) <= pts | near, rid


@settings(max_examples=100)
@given(figures())
def test_saturation_is_sound(fig):
    lay = Layout(fig)
    h = saturate_figure(lay)
    assert h.soundness_warnings(lay) == []


@settings(max_examples=50)
@given(figures())
def test_instances_are_pure(fig):
    lay = Layout(fig)
    facts = set(saturate_figure(lay).nodes)
    for r in RULES.values():
        a = instantiate(r, facts, lay)
        assert a == instantiate(r, FactIndex(facts), lay) == sorted(a)
        assert all(set(prem) <= facts for prem, _ in a)


# -- saturation properties, 200 trials each ---------------------------------

@settings(max_examples=200)
@given(figures())
def test_saturation_fixpoint(fig):
    lay = Layout(fig)
    cfg = RuleConfig()
    intr, _ = seed_facts(lay)
    h = saturate_figure(lay, cfg)
    again = saturate(h.nodes, cfg, lay, intr, dict(zip(h.nodes, h.depths)))
    assert again.nodes == h.nodes and _edges(again) == _edges(h)


@settings(max_examples=200)
@given(figures())
def test_saturation_fixpoint_without_chain_cap(fig):
    # coefficient caps alone bound the arithmetic, so plain node sets are a fixpoint
    lay = Layout(fig)
    cfg = RuleConfig(max_algebraic_chain=10 ** 6)
    intr, _ = seed_facts(lay)
    h = saturate_figure(lay, cfg)
    again = saturate(h.nodes, cfg, lay, intr)
    assert again.nodes == h.nodes and _edges(again) == _edges(h)


@settings(max_examples=200)
@given(figures(max_assumptions=3), st.data())
def test_saturation_is_monotone_in_the_seed(fig, data):
    lay = Layout(fig)
    intr, assumed = seed_facts(lay)
    sub = data.draw(st.lists(st.sampled_from(assumed), unique=True)) if assumed else []
    small = saturate(intr + sub, RuleConfig(), lay, intr)
    big = saturate(intr + assumed, RuleConfig(), lay, intr)
    assert set(small.nodes) <= set(big.nodes)


@settings(max_examples=200)
@given(figures(), st.randoms(use_true_random=False))
def test_saturation_ignores_rule_order(fig, rnd: random.Random):
    lay = Layout(fig)
    intr, assumed = seed_facts(lay)
    order = sorted(RULES)
    rnd.shuffle(order)
    seed = intr + assumed
    rnd.shuffle(seed)
    a = saturate(intr + assumed, RuleConfig(), lay, intr)
    b = saturate(seed, RuleConfig(), lay, intr, rule_order=order)
    assert a.nodes == b.nodes and a.edges == b.edges and a.depths == b.depths


def test_fixpoint_on_fig1_needs_depths(fig1_h, fig1_lay, fig1_cfg):
    intr, _ = seed_facts(fig1_lay)
    assert fig1_h.warnings
    again = saturate(fig1_h.nodes, fig1_cfg, fig1_lay, intr, dict(zip(fig1_h.nodes, fig1_h.depths)))
    assert again.nodes == fig1_h.nodes
    # dropping the depths lets the cut-off conclusions through
    loose = saturate(fig1_h.nodes, fig1_cfg, fig1_lay, intr)
    assert set(loose.nodes) > set(fig1_h.nodes)


def test_random_figure_strategy_parses():
    fig = parse_figure("figure t\npoint A 0 0\npoint B 2 0\npoint C 0 2\nsegment A B\nsegment B C\nsegment C A\n")
    assert Layout(fig).triangles == [("A", "B", "C")]
