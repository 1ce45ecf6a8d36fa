"""Grounded propositions: canonical forms, surface syntax and goal typing.

A proposition is a ``(kind, points, numbers)`` triple. Every symmetric way of
writing the same fact maps to one canonical representative, so hypergraph
nodes can be keyed directly on :class:`Prop` values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

Seg = tuple[str, str]
Ang = tuple[str, str, str]
Tri = tuple[str, str, str]


class MalformedProp(ValueError):
    pass


class NodeType(str, enum.Enum):
    ALGEBRAIC = "algebraic"
    GEOMETRIC = "geometric"


# kind -> (number of point arguments, number of numeric arguments)
ARITY: dict[str, tuple[int, int]] = {
    "between": (3, 0),
    "collinear": (-3, 0),  # three or more
    "midpoint": (3, 0),
    "seg-cong": (4, 0),
    "seg-sum": (6, 0),
    "seg-scale": (4, 2),
    "angle-measure": (3, 1),
    "angle-cong": (6, 0),
    "parallel": (4, 0),
    "perpendicular": (4, 0),
    "tri-cong": (6, 0),
    "tri-sim": (6, 0),
    "isosceles": (3, 0),
    "equilateral": (3, 0),
    "right-triangle": (3, 0),
    "supplementary": (6, 0),
    "angle-add": (9, 0),
    "angle-sum": (9, 0),
    "triangle": (3, 0),
    "angle": (3, 0),
    "segment": (2, 0),
}

KINDS = tuple(ARITY)

# Facts describing the figure's structure; never goals, never sources.
STRUCTURAL_KINDS = frozenset({"triangle", "angle", "segment", "between", "collinear"})

# Intermediate equations that only exist to carry arithmetic between rules.
BOOKKEEPING_KINDS = frozenset({"seg-sum", "angle-add", "angle-sum", "supplementary"})

GOAL_KINDS = frozenset(KINDS) - STRUCTURAL_KINDS - BOOKKEEPING_KINDS


@dataclass(frozen=True, order=True)
class Prop:
    kind: str
    pts: tuple[str, ...]
    nums: tuple[Fraction, ...] = ()

    def __str__(self) -> str:
        return format_prop(self)

    # convenience views -------------------------------------------------
    def segs(self) -> list[Seg]:
        return [(self.pts[i], self.pts[i + 1]) for i in range(0, len(self.pts), 2)]

    def angles(self) -> list[Ang]:
        return [tuple(self.pts[i:i + 3]) for i in range(0, len(self.pts), 3)]  # type: ignore[misc]


# ---------------------------------------------------------------------------
# canonical pieces

def seg(a: str, b: str) -> Seg:
    if a == b:
        raise MalformedProp(f"degenerate segment {a}{b}")
    return (a, b) if a < b else (b, a)


def ang(p: str, v: str, q: str) -> Ang:
    if v in (p, q) or p == q:
        raise MalformedProp(f"degenerate angle {p}{v}{q}")
    return (p, v, q) if p < q else (q, v, p)


def _least_correspondence(t1: Sequence[str], t2: Sequence[str]) -> tuple[str, ...]:
    best = None
    for perm in permutations(range(3)):
        a = tuple(t1[i] for i in perm)
        b = tuple(t2[i] for i in perm)
        for cand in (a + b, b + a):
            if best is None or cand < best:
                best = cand
    return best  # type: ignore[return-value]


def _check_distinct(pts: Sequence[str], what: str) -> None:
    if len(set(pts)) != len(pts):
        raise MalformedProp(f"{what} needs distinct points: {' '.join(pts)}")


def canonicalize(p: Prop) -> Prop:
    """Return the canonical representative of ``p``; idempotent."""
    if p.kind not in ARITY:
        raise MalformedProp(f"unknown proposition kind {p.kind!r}")
    npts, nnums = ARITY[p.kind]
    if (npts >= 0 and len(p.pts) != npts) or (npts < 0 and len(p.pts) < -npts) or len(p.nums) != nnums:
        raise MalformedProp(f"wrong arity for {p.kind}: {len(p.pts)} points, {len(p.nums)} numbers")
    k, x = p.kind, p.pts
    nums = tuple(Fraction(n) for n in p.nums)

    if k in ("segment",):
        return Prop(k, seg(*x))
    if k in ("triangle", "equilateral"):
        _check_distinct(x, k)
        return Prop(k, tuple(sorted(x)))
    if k == "collinear":
        _check_distinct(x, k)
        return Prop(k, tuple(sorted(x)))
    if k == "angle":
        return Prop(k, ang(*x))
    if k in ("between", "midpoint"):
        _check_distinct(x, k)
        if k == "between":
            a, m, c = x
        else:
            m, a, c = x
        a, c = sorted((a, c))
        return Prop(k, (a, m, c) if k == "between" else (m, a, c))
    if k in ("isosceles", "right-triangle"):
        _check_distinct(x, k)
        if k == "isosceles":
            apex, a, b = x
            a, b = sorted((a, b))
            return Prop(k, (apex, a, b))
        a, v, b = x
        a, b = sorted((a, b))
        return Prop(k, (a, v, b))
    if k in ("seg-cong", "parallel", "perpendicular"):
        s1, s2 = sorted((seg(x[0], x[1]), seg(x[2], x[3])))
        return Prop(k, s1 + s2)
    if k == "seg-sum":
        s1, s2 = sorted((seg(x[0], x[1]), seg(x[2], x[3])))
        return Prop(k, s1 + s2 + seg(x[4], x[5]))
    if k == "seg-scale":
        s1, s2 = seg(x[0], x[1]), seg(x[2], x[3])
        c1, c2 = nums
        if c1 <= 0 or c2 <= 0:
            raise MalformedProp("seg-scale coefficients must be positive")
        # larger coefficient first; equal coefficients order the segments
        if c1 < c2 or (c1 == c2 and s1 > s2):
            s1, s2, c1, c2 = s2, s1, c2, c1
        if c1 == c2 == 1:
            return Prop("seg-cong", s1 + s2)
        return Prop(k, s1 + s2, (c1, c2))
    if k == "angle-measure":
        if not (0 < nums[0] < 180):
            raise MalformedProp(f"angle measure out of range: {nums[0]}")
        return Prop(k, ang(*x), nums)
    if k in ("angle-cong", "supplementary"):
        a1, a2 = sorted((ang(*x[:3]), ang(*x[3:])))
        return Prop(k, a1 + a2)
    if k == "angle-add":
        a1, a2 = sorted((ang(*x[:3]), ang(*x[3:6])))
        return Prop(k, a1 + a2 + ang(*x[6:]))
    if k == "angle-sum":
        a = sorted((ang(*x[:3]), ang(*x[3:6]), ang(*x[6:])))
        return Prop(k, a[0] + a[1] + a[2])
    if k in ("tri-cong", "tri-sim"):
        _check_distinct(x[:3], k)
        _check_distinct(x[3:], k)
        return Prop(k, _least_correspondence(x[:3], x[3:]))
    raise MalformedProp(k)  # pragma: no cover


def make(kind: str, *pts: str, nums: Iterable = ()) -> Prop:
    """Build and canonicalize a proposition."""
    return canonicalize(Prop(kind, tuple(pts), tuple(Fraction(n) for n in nums)))


def goal_type(p: Prop) -> str:
    return p.kind


# ---------------------------------------------------------------------------
# surface syntax

def _fmt_num(n: Fraction) -> str:
    return str(n)


def format_prop(p: Prop) -> str:
    pts = list(p.pts)
    if p.kind == "seg-scale":
        k, m = p.nums
        if m == 1:
            return f"seg-scale {_fmt_num(k)} {pts[0]} {pts[1]} {pts[2]} {pts[3]}"
        return f"seg-scale {_fmt_num(k)} {pts[0]} {pts[1]} {_fmt_num(m)} {pts[2]} {pts[3]}"
    if p.kind == "angle-measure":
        return f"angle-measure {' '.join(pts)} {_fmt_num(p.nums[0])}"
    return " ".join([p.kind] + pts)


def parse_prop(text: str | Sequence[str]) -> Prop:
    toks = text.split() if isinstance(text, str) else list(text)
    if not toks:
        raise MalformedProp("empty proposition")
    kind, args = toks[0], toks[1:]
    if kind not in ARITY:
        raise MalformedProp(f"unknown proposition kind {kind!r}")
    try:
        if kind == "seg-scale":
            if len(args) == 5:
                return make(kind, *args[1:5], nums=(args[0], 1))
            if len(args) == 6:
                return make(kind, args[1], args[2], args[4], args[5], nums=(args[0], args[3]))
            raise MalformedProp("seg-scale takes `k A B C D` or `k A B m C D`")
        if kind == "angle-measure":
            if len(args) != 4:
                raise MalformedProp("angle-measure takes `A B C deg`")
            return make(kind, *args[:3], nums=(args[3],))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MalformedProp):
            raise
        raise MalformedProp(f"bad number in {' '.join(toks)!r}") from exc
    return make(kind, *args)


def sort_key(p: Prop) -> tuple:
    """Total order used wherever output ordering must be canonical."""
    return (p.kind, p.pts, p.nums)
