"""Deduction rules and forward-chaining saturation into a hypergraph.

Each rule is a generator over a :class:`FactIndex`: it yields every ground
instance ``(premises, conclusion)`` whose premises are all present. Figure
side conditions (which rays are vertical, which angles sit on a transversal)
come from the :class:`~geosynth.figure.Layout`.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Callable, Iterable, Iterator

from .facts import Ang, MalformedProp, Prop, Seg, ang, make, seg
from .figure import Layout

log = logging.getLogger(__name__)

Instance = tuple[tuple[Prop, ...], Prop]

FAMILIES = ("axiom", "algebraic", "definition", "theorem")


@dataclass(frozen=True)
class RuleConfig:
    """Enabled rules (the student's knowledge base) and algebra caps."""

    enabled: frozenset[str] = field(default_factory=lambda: frozenset(RULES))
    max_numerator: int = 8
    max_denominator: int = 8
    max_algebraic_chain: int = 3

    def __post_init__(self):
        if not self.enabled:
            raise ValueError("rule configuration enables no rules")
        unknown = set(self.enabled) - set(RULES)
        if unknown:
            raise ValueError(f"unknown rule id(s): {', '.join(sorted(unknown))}")
        if min(self.max_numerator, self.max_denominator, self.max_algebraic_chain) < 1:
            raise ValueError("caps must be positive")

    def without(self, *ids: str) -> "RuleConfig":
        return RuleConfig(self.enabled - frozenset(ids), self.max_numerator,
                          self.max_denominator, self.max_algebraic_chain)

    def only(self, *ids: str) -> "RuleConfig":
        return RuleConfig(frozenset(ids), self.max_numerator, self.max_denominator,
                          self.max_algebraic_chain)

    @classmethod
    def parse(cls, text: str) -> "RuleConfig":
        ids, caps = [], None
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if toks[0] == "caps":
                if len(toks) != 4:
                    raise ValueError(f"line {lineno}: expected `caps k n m`")
                try:
                    caps = tuple(int(t) for t in toks[1:])
                except ValueError:
                    raise ValueError(f"line {lineno}: caps must be integers") from None
            elif len(toks) == 1:
                if toks[0] not in RULES:
                    raise ValueError(f"line {lineno}: unknown rule id {toks[0]!r}")
                ids.append(toks[0])
            else:
                raise ValueError(f"line {lineno}: expected a rule id or `caps k n m`")
        kw = dict(zip(("max_numerator", "max_denominator", "max_algebraic_chain"), caps)) if caps else {}
        return cls(frozenset(ids) if ids else frozenset(RULES), **kw)

    def dumps(self) -> str:
        lines = sorted(self.enabled)
        lines.append(f"caps {self.max_numerator} {self.max_denominator} {self.max_algebraic_chain}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fact index

class FactIndex:
    def __init__(self, facts: Iterable[Prop]):
        self.facts = set(facts)
        self.by_kind: dict[str, list[Prop]] = defaultdict(list)
        for p in sorted(self.facts):
            self.by_kind[p.kind].append(p)
        self.seg_cong: dict[Seg, set[Seg]] = defaultdict(set)
        for p in self.by_kind["seg-cong"]:
            s1, s2 = p.segs()
            self.seg_cong[s1].add(s2)
            self.seg_cong[s2].add(s1)
        self.ang_cong: dict[Ang, set[Ang]] = defaultdict(set)
        for p in self.by_kind["angle-cong"]:
            a1, a2 = p.angles()
            self.ang_cong[a1].add(a2)
            self.ang_cong[a2].add(a1)
        self.measure: dict[Ang, list[Fraction]] = defaultdict(list)
        for p in self.by_kind["angle-measure"]:
            self.measure[tuple(p.pts)].append(p.nums[0])

    def __contains__(self, p: Prop) -> bool:
        return p in self.facts

    def kind(self, k: str) -> list[Prop]:
        return self.by_kind.get(k, [])


def _seg_pair(idx: FactIndex, s1: Seg, s2: Seg) -> tuple[bool, Prop | None]:
    """Whether ``s1 ≅ s2`` is available, and the premise that says so."""
    if s1 == s2:
        return True, None
    p = make("seg-cong", *s1, *s2)
    return (p in idx, p)


def _ang_pair(idx: FactIndex, a1: Ang, a2: Ang) -> tuple[bool, Prop | None]:
    if a1 == a2:
        return True, None
    p = make("angle-cong", *a1, *a2)
    return (p in idx, p)


# ---------------------------------------------------------------------------
# rules

@dataclass(frozen=True)
class Rule:
    id: str
    family: str
    premises: str
    conclusion: str
    fire: Callable[[FactIndex, Layout, RuleConfig], Iterator[Instance]] = field(repr=False, compare=False)
    # single-premise rewrites of one equation (multiplying both sides etc.)
    manipulation: bool = False
    # reads figure incidence (rays, transversals, triangle angles)
    needs_layout: bool = True


RULES: dict[str, Rule] = {}


def rule(id: str, family: str, premises: str, conclusion: str, manipulation: bool = False):
    def deco(fn):
        RULES[id] = Rule(id, family, premises, conclusion, fn, manipulation)
        return fn
    return deco


def _tri(*pts: str) -> Prop:
    return make("triangle", *pts)


def _angle(a: Ang) -> Prop:
    return make("angle", *a)


# -- axioms ---------------------------------------------------------------

@rule("segment-addition", "axiom", "collinear A B C, between A B C", "seg-sum A B B C A C")
def _segment_addition(idx, lay, cfg):
    for b in idx.kind("between"):
        a, m, c = b.pts
        col = make("collinear", a, m, c)
        if col in idx:
            yield (col, b), make("seg-sum", a, m, m, c, a, c)


@rule("angle-addition", "axiom", "angle x, angle y, angle z (ray inside)", "angle-add x y z")
def _angle_addition(idx, lay, cfg):
    for a, b, c in lay.angle_additions:
        prem = (_angle(a), _angle(b), _angle(c))
        if all(p in idx for p in prem):
            yield prem, make("angle-add", *a, *b, *c)


def _tri_pairs(idx: FactIndex, lay: Layout):
    """Vertex correspondences between triangles that are both facts."""
    present = [(t, Prop("triangle", t)) for t in lay.triangles]
    present = [(t, p) for t, p in present if p in idx]
    for (t1, p1), (t2, p2) in combinations(present, 2):
        for perm in permutations(t2):
            yield t1, perm, p1, p2


def _tri_parts(lay: Layout, t: tuple[str, str, str]):
    return lay.tri_parts(tuple(t))


def _congruence_rule(kind: str):
    """SSS / SAS / ASA instance generator."""

    def fire(idx, lay, cfg):
        for t1, t2, tp1, tp2 in _tri_pairs(idx, lay):
            s1, a1 = _tri_parts(lay, t1)
            s2, a2 = _tri_parts(lay, t2)
            # side i joins vertex i and i+1; angle i sits at vertex i
            if kind == "sss":
                choices = [[("s", 0), ("s", 1), ("s", 2)]]
            elif kind == "sas":
                choices = [[("s", (i - 1) % 3), ("a", i), ("s", i)] for i in range(3)]
            else:
                choices = [[("a", i), ("s", i), ("a", (i + 1) % 3)] for i in range(3)]
            for choice in choices:
                prem: list[Prop] = [tp1, tp2]
                ok = True
                for part, i in choice:
                    good, p = _seg_pair(idx, s1[i], s2[i]) if part == "s" else _ang_pair(idx, a1[i], a2[i])
                    if not good:
                        ok = False
                        break
                    if p is not None:
                        prem.append(p)
                if ok and len(prem) > 2:
                    yield tuple(prem), make("tri-cong", *t1, *t2)
    return fire


for _k, _p in (("sss", "three side pairs"), ("sas", "side, included angle, side"),
               ("asa", "angle, included side, angle")):
    RULES[_k] = Rule(_k, "axiom", f"triangle T1, triangle T2, {_p} congruent", "tri-cong T1 T2",
                     _congruence_rule(_k))


@rule("cpctc", "axiom", "tri-cong A B C D E F", "seg-cong / angle-cong of corresponding parts")
def _cpctc(idx, lay, cfg):
    for p in idx.kind("tri-cong"):
        t1, t2 = p.pts[:3], p.pts[3:]
        s1, a1 = _tri_parts(lay, t1)
        s2, a2 = _tri_parts(lay, t2)
        for x, y in zip(s1, s2):
            if x != y:
                yield (p,), make("seg-cong", *x, *y)
        for x, y in zip(a1, a2):
            if x != y:
                yield (p,), make("angle-cong", *x, *y)


@rule("aa-similarity", "axiom", "triangle T1, triangle T2, two angle pairs congruent", "tri-sim T1 T2")
def _aa(idx, lay, cfg):
    for t1, t2, tp1, tp2 in _tri_pairs(idx, lay):
        _, a1 = _tri_parts(lay, t1)
        _, a2 = _tri_parts(lay, t2)
        for i, j in combinations(range(3), 2):
            prem = [tp1, tp2]
            ok = True
            for k in (i, j):
                good, p = _ang_pair(idx, a1[k], a2[k])
                if not good:
                    ok = False
                    break
                if p is not None:
                    prem.append(p)
            if ok and len(prem) > 2:
                yield tuple(prem), make("tri-sim", *t1, *t2)


def _transversal_rule(kind: str, converse: bool):
    def fire(idx, lay, cfg):
        for t in lay.transversals:
            if t.kind != kind:
                continue
            par = make("parallel", *t.line1, *t.line2)
            rel = make("supplementary" if kind == "same-side" else "angle-cong", *t.angle1, *t.angle2)
            if converse:
                if rel in idx:
                    yield (rel,), par
            elif par in idx:
                yield (par,), rel
    return fire


for _k, _rel in (("corresponding-angles", "angle-cong"), ("alternate-interior", "angle-cong"),
                 ("same-side-interior", "supplementary")):
    _kind = {"corresponding-angles": "corresponding", "alternate-interior": "alternate",
             "same-side-interior": "same-side"}[_k]
    RULES[_k] = Rule(_k, "axiom", "parallel L1 L2 (cut by a transversal)", f"{_rel} of the angle pair",
                     _transversal_rule(_kind, False))
    RULES[_k + "-converse"] = Rule(_k + "-converse", "axiom", f"{_rel} of the angle pair",
                                   "parallel L1 L2", _transversal_rule(_kind, True))


# -- theorems -------------------------------------------------------------

@rule("vertical-angles", "theorem", "angle x, angle y (vertical)", "angle-cong x y")
def _vertical(idx, lay, cfg):
    for a, b in lay.vertical_pairs:
        if _angle(a) in idx and _angle(b) in idx:
            yield (_angle(a), _angle(b)), make("angle-cong", *a, *b)


@rule("linear-pair", "theorem", "angle x, angle y (linear pair)", "supplementary x y")
def _linear_pair(idx, lay, cfg):
    for a, b in lay.linear_pairs:
        if _angle(a) in idx and _angle(b) in idx:
            yield (_angle(a), _angle(b)), make("supplementary", *a, *b)


@rule("triangle-sum", "theorem", "triangle A B C", "angle-sum of the interior angles")
def _triangle_sum(idx, lay, cfg):
    for p in idx.kind("triangle"):
        _, angles = _tri_parts(lay, p.pts)
        yield (p,), make("angle-sum", *angles[0], *angles[1], *angles[2])


@rule("base-angles", "theorem", "isosceles X A B", "angle-cong X A B X B A")
def _base_angles(idx, lay, cfg):
    for p in idx.kind("isosceles"):
        v, a, b = p.pts
        yield (p,), make("angle-cong", *lay.angle(v, a, b), *lay.angle(v, b, a))


@rule("base-angles-converse", "theorem", "triangle X A B, angle-cong X A B X B A", "isosceles X A B")
def _base_angles_converse(idx, lay, cfg):
    for t in idx.kind("triangle"):
        for v, a, b in ((t.pts[0], t.pts[1], t.pts[2]), (t.pts[1], t.pts[0], t.pts[2]),
                        (t.pts[2], t.pts[0], t.pts[1])):
            c = make("angle-cong", *lay.angle(v, a, b), *lay.angle(v, b, a))
            if c in idx:
                yield (t, c), make("isosceles", v, a, b)


# -- definitions ----------------------------------------------------------

@rule("midpoint-def", "definition", "midpoint M A C", "seg-cong A M M C")
def _midpoint_def(idx, lay, cfg):
    for p in idx.kind("midpoint"):
        m, a, c = p.pts
        yield (p,), make("seg-cong", a, m, m, c)


@rule("midpoint-def-converse", "definition", "between A M C, seg-cong A M M C", "midpoint M A C")
def _midpoint_conv(idx, lay, cfg):
    for b in idx.kind("between"):
        a, m, c = b.pts
        sc = make("seg-cong", a, m, m, c)
        if sc in idx:
            yield (b, sc), make("midpoint", m, a, c)


@rule("isosceles-def", "definition", "isosceles X A B", "seg-cong X A X B")
def _iso_def(idx, lay, cfg):
    for p in idx.kind("isosceles"):
        v, a, b = p.pts
        yield (p,), make("seg-cong", v, a, v, b)


@rule("isosceles-def-converse", "definition", "triangle X A B, seg-cong X A X B", "isosceles X A B")
def _iso_conv(idx, lay, cfg):
    for t in idx.kind("triangle"):
        x = t.pts
        for v, a, b in ((x[0], x[1], x[2]), (x[1], x[0], x[2]), (x[2], x[0], x[1])):
            sc = make("seg-cong", v, a, v, b)
            if sc in idx:
                yield (t, sc), make("isosceles", v, a, b)


@rule("equilateral-def", "definition", "equilateral A B C", "seg-cong of each side pair")
def _equi_def(idx, lay, cfg):
    for p in idx.kind("equilateral"):
        a, b, c = p.pts
        sides = (seg(a, b), seg(b, c), seg(a, c))
        for s1, s2 in combinations(sides, 2):
            yield (p,), make("seg-cong", *s1, *s2)


@rule("equilateral-def-converse", "definition", "triangle A B C, two side congruences", "equilateral A B C")
def _equi_conv(idx, lay, cfg):
    for t in idx.kind("triangle"):
        a, b, c = t.pts
        sides = (seg(a, b), seg(b, c), seg(a, c))
        congs = [make("seg-cong", *s1, *s2) for s1, s2 in combinations(sides, 2)]
        for c1, c2 in combinations(congs, 2):
            if c1 in idx and c2 in idx:
                yield (t, c1, c2), make("equilateral", a, b, c)


@rule("right-angle-def", "definition", "perpendicular L1 L2", "angle-measure of each angle at the crossing 90")
def _right_def(idx, lay, cfg):
    for p in idx.kind("perpendicular"):
        s1, s2 = p.segs()
        for _, a in lay.lines_meeting_at(s1, s2):
            yield (p,), make("angle-measure", *a, nums=(90,))


@rule("right-angle-def-converse", "definition", "angle-measure A V B 90", "perpendicular VA VB")
def _right_conv(idx, lay, cfg):
    for p in idx.kind("angle-measure"):
        if p.nums[0] == 90:
            a, v, b = p.pts
            yield (p,), make("perpendicular", *lay.line_seg(v, a), *lay.line_seg(v, b))


@rule("right-triangle-def", "definition", "triangle A B C, angle-measure A B C 90", "right-triangle A B C")
def _rt_def(idx, lay, cfg):
    for t in idx.kind("triangle"):
        x = t.pts
        for a, v, b in ((x[1], x[0], x[2]), (x[0], x[1], x[2]), (x[0], x[2], x[1])):
            m = make("angle-measure", *lay.angle(a, v, b), nums=(90,))
            if m in idx:
                yield (t, m), make("right-triangle", a, v, b)


@rule("right-triangle-def-converse", "definition", "right-triangle A B C", "angle-measure A B C 90")
def _rt_conv(idx, lay, cfg):
    for p in idx.kind("right-triangle"):
        a, v, b = p.pts
        yield (p,), make("angle-measure", *lay.angle(a, v, b), nums=(90,))


# -- algebraic ------------------------------------------------------------

def _transitivity(partners_attr: str, kind: str):
    def fire(idx, lay, cfg):
        partners = getattr(idx, partners_attr)
        for mid in sorted(partners):
            for x, z in combinations(sorted(partners[mid]), 2):
                yield (make(kind, *x, *mid), make(kind, *mid, *z)), make(kind, *x, *z)
    return fire


RULES["seg-cong-transitivity"] = Rule("seg-cong-transitivity", "algebraic", "seg-cong x y, seg-cong y z",
                                      "seg-cong x z", _transitivity("seg_cong", "seg-cong"))
RULES["angle-cong-transitivity"] = Rule("angle-cong-transitivity", "algebraic",
                                        "angle-cong x y, angle-cong y z", "angle-cong x z",
                                        _transitivity("ang_cong", "angle-cong"))


def _tri_map_transitivity(kind: str):
    def fire(idx, lay, cfg):
        by_tri: dict[tuple, list[tuple[Prop, dict]]] = defaultdict(list)
        for p in idx.kind(kind):
            t1, t2 = p.pts[:3], p.pts[3:]
            by_tri[tuple(sorted(t1))].append((p, dict(zip(t1, t2))))
            by_tri[tuple(sorted(t2))].append((p, dict(zip(t2, t1))))
        for key in sorted(by_tri):
            for (p1, m1), (p2, m2) in combinations(by_tri[key], 2):
                # m1 maps the shared triangle to X, m2 maps it to Z
                shared = sorted(key)
                x = [m1[v] for v in shared]
                z = [m2[v] for v in shared]
                if set(x) == set(z):
                    continue
                yield (p1, p2), make(kind, *x, *z)
    return fire


RULES["tri-cong-transitivity"] = Rule("tri-cong-transitivity", "algebraic", "tri-cong X Y, tri-cong Y Z",
                                      "tri-cong X Z", _tri_map_transitivity("tri-cong"))
RULES["tri-sim-transitivity"] = Rule("tri-sim-transitivity", "algebraic", "tri-sim X Y, tri-sim Y Z",
                                     "tri-sim X Z", _tri_map_transitivity("tri-sim"))


def _primitive(p: Prop) -> bool:
    k, m = p.nums
    return k.denominator == 1 and m.denominator == 1 and gcd(k.numerator, m.numerator) == 1


def _scale(cfg: RuleConfig, k, s1: Seg, m, s2: Seg) -> Prop | None:
    try:
        p = make("seg-scale", *s1, *s2, nums=(k, m))
    except MalformedProp:
        return None
    if p.kind == "seg-scale" and (p.nums[0] > cfg.max_numerator or p.nums[1] > cfg.max_denominator):
        return None
    return p


@rule("seg-halving", "algebraic", "seg-sum x y z, seg-cong x y", "seg-scale 2 x z")
def _halving(idx, lay, cfg):
    for p in idx.kind("seg-sum"):
        x, y, z = p.segs()
        c = make("seg-cong", *x, *y)
        if c in idx:
            for part in (x, y):
                q = _scale(cfg, 2, part, 1, z)
                if q is not None:
                    yield (p, c), q


@rule("seg-scale-substitution", "algebraic", "seg-scale k x m z, seg-cong z w", "seg-scale k x m w")
def _scale_subst(idx, lay, cfg):
    for p in idx.kind("seg-scale"):
        if not _primitive(p):
            continue
        (s1, s2), (k, m) = p.segs(), p.nums
        for w in sorted(idx.seg_cong.get(s2, ())):
            q = _scale(cfg, k, s1, m, w)
            if q is not None and q != p:
                yield (p, make("seg-cong", *s2, *w)), q
        for w in sorted(idx.seg_cong.get(s1, ())):
            q = _scale(cfg, k, w, m, s2)
            if q is not None and q != p:
                yield (p, make("seg-cong", *s1, *w)), q


@rule("seg-equal-multiples", "algebraic", "seg-scale k x m z, seg-scale k y m z", "seg-cong x y")
def _equal_multiples(idx, lay, cfg):
    groups: dict[tuple, list[tuple[Seg, Prop]]] = defaultdict(list)
    for p in idx.kind("seg-scale"):
        if not _primitive(p):
            continue
        (s1, s2), (k, m) = p.segs(), p.nums
        groups[("L", k, m, s2)].append((s1, p))
        groups[("R", k, m, s1)].append((s2, p))
    for key in sorted(groups):
        for (x, p1), (y, p2) in combinations(groups[key], 2):
            if x != y:
                yield (p1, p2), make("seg-cong", *x, *y)


@rule("seg-multiply", "algebraic", "seg-scale k x m z", "seg-scale 2k x 2m z", manipulation=True)
def _multiply(idx, lay, cfg):
    for p in idx.kind("seg-scale"):
        (s1, s2), (k, m) = p.segs(), p.nums
        q = _scale(cfg, 2 * k, s1, 2 * m, s2)
        if q is not None:
            yield (p,), q


@rule("angle-measure-transfer", "algebraic", "angle-cong x y, angle-measure x v", "angle-measure y v")
def _measure_transfer(idx, lay, cfg):
    for a in sorted(idx.measure):
        for v in idx.measure[a]:
            mp = make("angle-measure", *a, nums=(v,))
            for b in sorted(idx.ang_cong.get(a, ())):
                yield (make("angle-cong", *a, *b), mp), make("angle-measure", *b, nums=(v,))


@rule("angle-measure-equality", "algebraic", "angle-measure x v, angle-measure y v", "angle-cong x y")
def _measure_equal(idx, lay, cfg):
    by_value: dict[Fraction, list[Ang]] = defaultdict(list)
    for a in sorted(idx.measure):
        for v in idx.measure[a]:
            by_value[v].append(a)
    for v in sorted(by_value):
        for a, b in combinations(by_value[v], 2):
            yield ((make("angle-measure", *a, nums=(v,)), make("angle-measure", *b, nums=(v,))),
                   make("angle-cong", *a, *b))


@rule("supplement-measure", "algebraic", "supplementary x y, angle-measure x v", "angle-measure y 180-v")
def _supp_measure(idx, lay, cfg):
    for p in idx.kind("supplementary"):
        a1, a2 = p.angles()
        for x, y in ((a1, a2), (a2, a1)):
            for v in idx.measure.get(x, ()):
                if x == y:
                    continue
                yield (p, make("angle-measure", *x, nums=(v,))), make("angle-measure", *y, nums=(180 - v,))


@rule("angle-sum-substitution", "algebraic", "angle-sum x y z, angle-cong x w", "angle-sum w y z")
def _sum_subst(idx, lay, cfg):
    for p in idx.kind("angle-sum"):
        angles = p.angles()
        for i, x in enumerate(angles):
            rest = angles[:i] + angles[i + 1:]
            for w in sorted(idx.ang_cong.get(x, ())):
                yield (p, make("angle-cong", *x, *w)), make("angle-sum", *w, *rest[0], *rest[1])


@rule("angle-sum-combine", "algebraic", "angle-sum x y z, angle-add x y w", "supplementary w z")
def _sum_combine(idx, lay, cfg):
    adds: dict[tuple[Ang, Ang], list[Prop]] = defaultdict(list)
    for p in idx.kind("angle-add"):
        x, y, w = p.angles()
        adds[(x, y)].append(p)
    for p in idx.kind("angle-sum"):
        angles = p.angles()
        for i, j in combinations(range(3), 2):
            x, y = angles[i], angles[j]
            z = angles[3 - i - j]
            for q in adds.get((min(x, y), max(x, y)), ()):
                w = q.angles()[2]
                if w == z:
                    yield (p, q), make("angle-measure", *w, nums=(90,))
                else:
                    yield (p, q), make("supplementary", *w, *z)


@rule("angle-sum-measure", "algebraic", "angle-sum x y z, angle-measure x u, angle-measure y v",
      "angle-measure z 180-u-v")
def _sum_measure(idx, lay, cfg):
    for p in idx.kind("angle-sum"):
        angles = p.angles()
        for i, j in combinations(range(3), 2):
            x, y, z = angles[i], angles[j], angles[3 - i - j]
            for u in idx.measure.get(x, ()):
                for v in idx.measure.get(y, ()):
                    r = 180 - u - v
                    if 0 < r < 180:
                        yield ((p, make("angle-measure", *x, nums=(u,)), make("angle-measure", *y, nums=(v,))),
                               make("angle-measure", *z, nums=(r,)))


_LAYOUT_FREE = ("segment-addition", "midpoint-def", "midpoint-def-converse", "isosceles-def",
                "isosceles-def-converse", "equilateral-def", "equilateral-def-converse")
for _k in list(RULES):
    if _k in _LAYOUT_FREE or RULES[_k].family == "algebraic":
        RULES[_k] = replace(RULES[_k], needs_layout=False)


# ---------------------------------------------------------------------------

def _reflexive(p: Prop) -> bool:
    if p.kind in ("seg-cong", "angle-cong", "parallel", "perpendicular", "supplementary"):
        h = len(p.pts) // 2
        return p.kind != "supplementary" and p.pts[:h] == p.pts[h:]
    if p.kind in ("tri-cong", "tri-sim"):
        return set(p.pts[:3]) == set(p.pts[3:])
    return False


def instantiate(r: Rule, facts: Iterable[Prop] | FactIndex, lay: Layout | None = None,
                cfg: RuleConfig | None = None) -> list[Instance]:
    """All ground instances of ``r`` whose premises are all in ``facts``.

    Rules that read figure incidence yield nothing without a layout.
    """
    if r.needs_layout and lay is None:
        return []
    idx = facts if isinstance(facts, FactIndex) else FactIndex(facts)
    cfg = cfg or RuleConfig()
    out = set()
    for prem, concl in r.fire(idx, lay, cfg):
        if _reflexive(concl) or concl in prem:
            continue
        assert all(p in idx for p in prem), (r.id, prem)
        out.add((tuple(sorted(set(prem))), concl))
    return sorted(out)


def intrinsic_facts(lay: Layout) -> list[Prop]:
    """Structural facts of the figure: the seed every problem shares."""
    out = set()
    for s in lay.segments:
        out.add(make("segment", *s))
    for a in lay.angles:
        out.add(make("angle", *a))
    for t in lay.triangles:
        out.add(make("triangle", *t))
    for a, m, c in lay.betweens:
        out.add(make("between", a, m, c))
        out.add(make("collinear", a, m, c))
    return sorted(out)
