"""Figures: parsing, coordinate layout, figure strengthening and shape classes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations

from .facts import Ang, MalformedProp, Prop, Seg, Tri, ang, format_prop, make, parse_prop, seg

DEFAULT_EPS = 1e-6


class FigureError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class Point:
    name: str
    x: float
    y: float


@dataclass(frozen=True)
class Figure:
    name: str
    points: tuple[Point, ...]
    segments: tuple[Seg, ...]
    assumptions: tuple[Prop, ...] = ()
    goals: tuple[Prop, ...] = ()

    @cached_property
    def coords(self) -> dict[str, tuple[float, float]]:
        return {p.name: (p.x, p.y) for p in self.points}


# ---------------------------------------------------------------------------
# parsing

def _check_prop_points(p: Prop, names: set[str], lineno: int) -> None:
    for x in p.pts:
        if x not in names:
            raise FigureError(f"unknown point {x!r}", lineno)


def parse_figure(text: str, eps: float = DEFAULT_EPS) -> Figure:
    name = None
    points: dict[str, Point] = {}
    segments: list[Seg] = []
    raw_props: list[tuple[str, Prop, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kw, args = toks[0], toks[1:]
        if kw == "figure":
            if len(args) != 1:
                raise FigureError("expected `figure <name>`", lineno)
            if name is not None:
                raise FigureError("duplicate figure declaration", lineno)
            name = args[0]
        elif kw == "point":
            if len(args) != 3:
                raise FigureError("expected `point <id> <x> <y>`", lineno)
            pid = args[0]
            if pid in points:
                raise FigureError(f"duplicate point name {pid!r}", lineno)
            try:
                x, y = float(args[1]), float(args[2])
            except ValueError:
                raise FigureError(f"bad coordinate in {line!r}", lineno) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise FigureError("coordinates must be finite", lineno)
            points[pid] = Point(pid, x, y)
        elif kw == "segment":
            if len(args) != 2:
                raise FigureError("expected `segment <id> <id>`", lineno)
            for a in args:
                if a not in points:
                    raise FigureError(f"unknown point {a!r}", lineno)
            a, b = args
            pa, pb = points[a], points[b]
            if a == b or (pa.x, pa.y) == (pb.x, pb.y):
                raise FigureError(f"zero-length segment {a} {b}", lineno)
            s = seg(a, b)
            if s in segments:
                raise FigureError(f"duplicate segment {a} {b}", lineno)
            segments.append(s)
        elif kw in ("assume", "goal"):
            try:
                p = parse_prop(args)
            except MalformedProp as exc:
                raise FigureError(str(exc), lineno) from None
            _check_prop_points(p, set(points), lineno)
            raw_props.append((kw, p, lineno))
        else:
            raise FigureError(f"unknown declaration {kw!r}", lineno)
    if name is None:
        raise FigureError("missing `figure <name>` declaration")
    fig = Figure(name, tuple(points.values()), tuple(segments))
    lay = Layout(fig, eps)
    assumptions, goals = [], []
    for kw, p, lineno in raw_props:
        try:
            q = lay.normalize(p)
        except MalformedProp as exc:
            raise FigureError(str(exc), lineno) from None
        target = assumptions if kw == "assume" else goals
        if q in target:
            raise FigureError(f"duplicate {kw} {format_prop(q)}", lineno)
        target.append(q)
    return Figure(name, fig.points, fig.segments, tuple(assumptions), tuple(goals))


def serialize_figure(fig: Figure) -> str:
    out = [f"figure {fig.name}"]
    out += [f"point {p.name} {p.x!r} {p.y!r}" for p in fig.points]
    out += [f"segment {a} {b}" for a, b in fig.segments]
    out += [f"assume {format_prop(p)}" for p in fig.assumptions]
    out += [f"goal {format_prop(p)}" for p in fig.goals]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# coordinate layout

def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _norm(u):
    return math.hypot(u[0], u[1])


@dataclass(frozen=True)
class Transversal:
    """Two angle positions cut by a transversal between two lines."""

    kind: str  # alternate | corresponding | same-side
    angle1: Ang
    angle2: Ang
    line1: Seg
    line2: Seg


class Layout:
    """Derived incidence structure of a figure: lines, rays, angles, triangles."""

    def __init__(self, fig: Figure, eps: float = DEFAULT_EPS):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.fig = fig
        self.xy = fig.coords
        pts = list(self.xy.values())
        diam = max((_norm(_sub(a, b)) for a, b in combinations(pts, 2)), default=0.0)
        self.tol = eps * max(1.0, diam)
        self.lines = self._build_lines()
        self._parts: dict[Tri, tuple] = {}
        self._line_of_pair: dict[Seg, int] = {}
        for i, line in enumerate(self.lines):
            for a, b in combinations(line, 2):
                self._line_of_pair[seg(a, b)] = i

    # -- primitives ------------------------------------------------------
    def dist(self, a: str, b: str) -> float:
        return _norm(_sub(self.xy[a], self.xy[b]))

    def _collinear(self, a: str, b: str, c: str) -> bool:
        pa, pb, pc = self.xy[a], self.xy[b], self.xy[c]
        base = _norm(_sub(pb, pa))
        if base == 0:
            return True
        return abs(_cross(_sub(pb, pa), _sub(pc, pa))) / base < self.tol

    def _strictly_between(self, a: str, m: str, c: str) -> bool:
        if not self._collinear(a, m, c):
            return False
        pa, pm, pc = self.xy[a], self.xy[m], self.xy[c]
        t = _dot(_sub(pm, pa), _sub(pc, pa))
        return self.tol < t and _norm(_sub(pm, pa)) > self.tol and _norm(_sub(pm, pc)) > self.tol \
            and t < _dot(_sub(pc, pa), _sub(pc, pa))

    def _build_lines(self) -> list[tuple[str, ...]]:
        names = list(self.xy)
        groups: list[set[str]] = []
        for a, b in self.fig.segments:
            groups.append({a, b} | {m for m in names if m not in (a, b) and self._strictly_between(a, m, b)})
        changed = True
        while changed:
            changed = False
            for i, j in combinations(range(len(groups)), 2):
                gi, gj = groups[i], groups[j]
                if not gi & gj:
                    continue
                union = gi | gj
                p, q = sorted(gi)[:2]
                if all(self._collinear(p, q, r) for r in union):
                    groups[i] = union
                    del groups[j]
                    changed = True
                    break
        lines = []
        for g in groups:
            a, b = max(combinations(sorted(g), 2), key=lambda ab: (self.dist(*ab), ab))
            a, b = sorted((a, b))
            d = _sub(self.xy[b], self.xy[a])
            order = sorted(g, key=lambda p: _dot(_sub(self.xy[p], self.xy[a]), d))
            lines.append(tuple(order))
        lines.sort()
        return lines

    # -- incidence -------------------------------------------------------
    def line_index(self, a: str, b: str) -> int | None:
        if a == b:
            return None
        return self._line_of_pair.get(seg(a, b))

    def crosses(self, a: str, b: str, c: str, d: str) -> bool:
        """Segments ab and cd meet at a point interior to both."""
        p = self.xy
        d1 = _cross(_sub(p[b], p[a]), _sub(p[c], p[a]))
        d2 = _cross(_sub(p[b], p[a]), _sub(p[d], p[a]))
        d3 = _cross(_sub(p[d], p[c]), _sub(p[a], p[c]))
        d4 = _cross(_sub(p[d], p[c]), _sub(p[b], p[c]))
        return d1 * d2 < 0 and d3 * d4 < 0

    def connected(self, a: str, b: str) -> bool:
        return self.line_index(a, b) is not None

    def extremes(self, i: int) -> Seg:
        line = self.lines[i]
        return seg(line[0], line[-1])

    def line_seg(self, a: str, b: str) -> Seg:
        i = self.line_index(a, b)
        if i is None:
            raise MalformedProp(f"{a}{b} does not lie along a segment of the figure")
        return self.extremes(i)

    def ray_rep(self, v: str, p: str) -> str:
        i = self.line_index(v, p)
        if i is None:
            raise MalformedProp(f"{v}{p} does not lie along a segment of the figure")
        line = self.lines[i]
        iv, ip = line.index(v), line.index(p)
        return line[0] if ip < iv else line[-1]

    def angle(self, p: str, v: str, q: str) -> Ang:
        rp, rq = self.ray_rep(v, p), self.ray_rep(v, q)
        if self.line_index(v, p) == self.line_index(v, q):
            raise MalformedProp(f"{p}{v}{q} is not a proper angle")
        return ang(rp, v, rq)

    @cached_property
    def rays(self) -> dict[str, list[tuple[int, str]]]:
        """Rays from each vertex as ``(line index, representative point)``."""
        out: dict[str, list[tuple[int, str]]] = {v: [] for v in self.xy}
        for i, line in enumerate(self.lines):
            for k, v in enumerate(line):
                if k > 0:
                    out[v].append((i, line[0]))
                if k < len(line) - 1:
                    out[v].append((i, line[-1]))
        return out

    @cached_property
    def segments(self) -> list[Seg]:
        return sorted(self._line_of_pair)

    @cached_property
    def angles(self) -> list[Ang]:
        found = set()
        for v, rays in self.rays.items():
            for (i, a), (j, b) in combinations(rays, 2):
                if i != j:
                    found.add(ang(a, v, b))
        return sorted(found)

    def measure(self, a: Ang) -> float:
        p, v, q = a
        u, w = _sub(self.xy[p], self.xy[v]), _sub(self.xy[q], self.xy[v])
        c = _dot(u, w) / (_norm(u) * _norm(w))
        return math.degrees(math.acos(max(-1.0, min(1.0, c))))

    @cached_property
    def triangles(self) -> list[Tri]:
        out = []
        for a, b, c in combinations(sorted(self.xy), 3):
            if self.connected(a, b) and self.connected(b, c) and self.connected(a, c) \
                    and not self._collinear(a, b, c):
                out.append((a, b, c))
        return out

    def tri_angle(self, a: str, b: str, c: str) -> Ang:
        """Interior angle at ``b`` of triangle ``abc``."""
        return self.angle(a, b, c)

    def tri_parts(self, t: Tri) -> tuple[tuple[Seg, Seg, Seg], tuple[Ang, Ang, Ang]]:
        """Sides ``(ab, bc, ca)`` and interior angles at ``a, b, c`` of triangle ``t``."""
        got = self._parts.get(t)
        if got is None:
            a, b, c = t
            got = ((seg(a, b), seg(b, c), seg(c, a)),
                   (self.angle(c, a, b), self.angle(a, b, c), self.angle(b, c, a)))
            self._parts[t] = got
        return got

    @cached_property
    def betweens(self) -> list[tuple[str, str, str]]:
        out = []
        for line in self.lines:
            for i, j, k in combinations(range(len(line)), 3):
                a, m, c = line[i], line[j], line[k]
                a, c = sorted((a, c))
                out.append((a, m, c))
        return sorted(out)

    @cached_property
    def angle_additions(self) -> list[tuple[Ang, Ang, Ang]]:
        """``(a, b, c)`` with ``a + b = c`` for rays sharing a vertex."""
        out = set()
        deg_tol = 1e-7 * 180 + math.degrees(self.tol)
        for v, rays in self.rays.items():
            for r1, r2, r3 in permutations(rays, 3):
                if len({r1[0], r2[0], r3[0]}) < 3 or r1[1] > r3[1]:
                    continue
                a = ang(r1[1], v, r2[1])
                b = ang(r2[1], v, r3[1])
                c = ang(r1[1], v, r3[1])
                if abs(self.measure(a) + self.measure(b) - self.measure(c)) < deg_tol:
                    out.add((min(a, b), max(a, b), c))
        return sorted(out)

    @cached_property
    def linear_pairs(self) -> list[tuple[Ang, Ang]]:
        out = set()
        for v, rays in self.rays.items():
            for (i, a), (j, b) in combinations(rays, 2):
                if i != j:
                    continue
                for k, c in rays:
                    if k != i:
                        out.add(tuple(sorted((ang(a, v, c), ang(c, v, b)))))
        return sorted(out)  # type: ignore[arg-type]

    @cached_property
    def vertical_pairs(self) -> list[tuple[Ang, Ang]]:
        out = set()
        for v, rays in self.rays.items():
            by_line: dict[int, list[str]] = {}
            for i, r in rays:
                by_line.setdefault(i, []).append(r)
            through = [rs for rs in by_line.values() if len(rs) == 2]
            for (a1, a2), (b1, b2) in combinations(through, 2):
                out.add(tuple(sorted((ang(a1, v, b1), ang(a2, v, b2)))))
                out.add(tuple(sorted((ang(a1, v, b2), ang(a2, v, b1)))))
        return sorted(out)  # type: ignore[arg-type]

    def _side(self, p: str, q: str, x: str) -> int:
        c = _cross(_sub(self.xy[q], self.xy[p]), _sub(self.xy[x], self.xy[p]))
        if abs(c) / max(self.dist(p, q), 1e-300) < self.tol:
            return 0
        return 1 if c > 0 else -1

    @cached_property
    def transversals(self) -> list[Transversal]:
        out = set()
        for t, tline in enumerate(self.lines):
            for p, q in permutations(tline, 2):
                ip, iq = tline.index(p), tline.index(q)
                beyond_p = tline[0] if iq > ip else tline[-1]
                has_beyond_p = beyond_p != p
                for l1, r1 in self.rays[p]:
                    if l1 == t:
                        continue
                    for l2, r2 in self.rays[q]:
                        if l2 in (t, l1) or set(self.lines[l1]) & set(self.lines[l2]):
                            continue
                        s1, s2 = self._side(p, q, r1), self._side(p, q, r2)
                        if s1 == 0 or s2 == 0:
                            continue
                        seg1, seg2 = self.extremes(l1), self.extremes(l2)
                        a1 = ang(r1, p, self.ray_rep(p, q))
                        a2 = ang(r2, q, self.ray_rep(q, p))
                        kind = "same-side" if s1 == s2 else "alternate"
                        out.add(self._config(kind, (a1, seg1), (a2, seg2)))
                        if has_beyond_p and s1 == s2:
                            a1c = ang(r1, p, beyond_p)
                            out.add(self._config("corresponding", (a1c, seg1), (a2, seg2)))
        return sorted(out, key=lambda c: (c.kind, c.angle1, c.angle2, c.line1, c.line2))

    @staticmethod
    def _config(kind, x, y) -> Transversal:
        (a1, s1), (a2, s2) = sorted((x, y))
        return Transversal(kind, a1, a2, s1, s2)

    def lines_meeting_at(self, s1: Seg, s2: Seg) -> list[tuple[str, Ang]]:
        """Angles formed where the lines carrying ``s1`` and ``s2`` meet at a figure point."""
        i, j = self.line_index(*s1), self.line_index(*s2)
        if i is None or j is None or i == j:
            return []
        out = []
        for v in set(self.lines[i]) & set(self.lines[j]):
            for li, a in self.rays[v]:
                for lj, b in self.rays[v]:
                    if li == i and lj == j:
                        out.append((v, ang(a, v, b)))
        return sorted(set(out))

    # -- normalization ---------------------------------------------------
    def normalize(self, p: Prop) -> Prop:
        """Rewrite angles onto canonical rays and lines onto their full extent."""
        k = p.kind
        if k in ("angle", "angle-measure", "angle-cong", "supplementary", "angle-add", "angle-sum"):
            pts: list[str] = []
            for a in p.angles():
                pts += self.angle(*a)
            return make(k, *pts, nums=p.nums)
        if k in ("parallel", "perpendicular"):
            s1, s2 = p.segs()
            return make(k, *self.line_seg(*s1), *self.line_seg(*s2))
        return p

    # -- numeric truth ---------------------------------------------------
    def holds(self, p: Prop) -> bool:
        """Numerically evaluate ``p`` on the coordinates (``None``-free)."""
        k, x = p.kind, p.pts
        eq = lambda u, v: abs(u - v) < self.tol  # noqa: E731
        deg_eq = lambda u, v: abs(u - v) < 1e-6 * 180 + math.degrees(self.tol)  # noqa: E731
        d = self.dist
        if k == "segment":
            return self.connected(*x)
        if k == "triangle":
            return tuple(x) in self.triangles
        if k == "angle":
            return tuple(x) in self.angles
        if k == "collinear":
            return all(self._collinear(x[0], x[1], r) for r in x[2:])
        if k == "between":
            return self._strictly_between(*x)
        if k == "midpoint":
            m, a, c = x
            return self._strictly_between(a, m, c) and eq(d(a, m), d(m, c))
        if k == "seg-cong":
            return eq(d(x[0], x[1]), d(x[2], x[3]))
        if k == "seg-sum":
            return eq(d(x[0], x[1]) + d(x[2], x[3]), d(x[4], x[5]))
        if k == "seg-scale":
            c1, c2 = (float(n) for n in p.nums)
            return eq(c1 * d(x[0], x[1]), c2 * d(x[2], x[3]))
        if k == "angle-measure":
            return deg_eq(self.measure(tuple(x)), float(p.nums[0]))
        if k == "angle-cong":
            return deg_eq(self.measure(x[:3]), self.measure(x[3:]))
        if k == "supplementary":
            return deg_eq(self.measure(x[:3]) + self.measure(x[3:]), 180.0)
        if k == "angle-add":
            return deg_eq(self.measure(x[:3]) + self.measure(x[3:6]), self.measure(x[6:]))
        if k == "angle-sum":
            return deg_eq(self.measure(x[:3]) + self.measure(x[3:6]) + self.measure(x[6:]), 180.0)
        if k in ("parallel", "perpendicular"):
            u = _sub(self.xy[x[1]], self.xy[x[0]])
            w = _sub(self.xy[x[3]], self.xy[x[2]])
            val = _cross(u, w) if k == "parallel" else _dot(u, w)
            return abs(val) / (_norm(u) * _norm(w)) < 1e-6 + self.tol
        if k == "isosceles":
            v, a, b = x
            return not self._collinear(v, a, b) and eq(d(v, a), d(v, b))
        if k == "equilateral":
            a, b, c = x
            return not self._collinear(a, b, c) and eq(d(a, b), d(b, c)) and eq(d(a, b), d(a, c))
        if k == "right-triangle":
            a, v, b = x
            return not self._collinear(a, v, b) and deg_eq(self.measure(ang(a, v, b)), 90.0)
        if k in ("tri-cong", "tri-sim"):
            t1, t2 = x[:3], x[3:]
            s1 = [d(t1[i], t1[(i + 1) % 3]) for i in range(3)]
            s2 = [d(t2[i], t2[(i + 1) % 3]) for i in range(3)]
            if k == "tri-cong":
                return all(eq(u, v) for u, v in zip(s1, s2))
            r = s2[0] / s1[0]
            return all(eq(u * r, v) for u, v in zip(s1, s2))
        raise MalformedProp(k)  # pragma: no cover


# ---------------------------------------------------------------------------
# figure strengthening

@dataclass(frozen=True)
class ImplicitFactSet:
    """Coordinate-implied candidate goals (not yet proven)."""

    facts: frozenset[Prop] = field(default_factory=frozenset)
    tag: str = "coordinate-implied"

    def __contains__(self, p: Prop) -> bool:
        return p in self.facts

    def __len__(self) -> int:
        return len(self.facts)

    def __iter__(self):
        return iter(sorted(self.facts))


def _nice_degrees(x: float, tol: float) -> Fraction | None:
    r = round(x)
    return Fraction(r) if abs(x - r) < tol else None


def extract_implicit_facts(fig: Figure, eps: float = DEFAULT_EPS, lay: Layout | None = None) -> ImplicitFactSet:
    lay = lay or Layout(fig, eps)
    out: set[Prop] = set()
    names = sorted(fig.coords)
    for a, m, c in permutations(names, 3):
        if a < c and lay._strictly_between(a, m, c):
            out.add(make("between", a, m, c))
            out.add(make("collinear", a, m, c))
            if abs(lay.dist(a, m) - lay.dist(m, c)) < lay.tol:
                out.add(make("midpoint", m, a, c))
    segs = lay.segments
    for s1, s2 in combinations(segs, 2):
        if abs(lay.dist(*s1) - lay.dist(*s2)) < lay.tol:
            out.add(make("seg-cong", *s1, *s2))
    for a in lay.angles:
        deg = _nice_degrees(lay.measure(a), 1e-6 * 180 + math.degrees(lay.tol))
        if deg is not None:
            out.add(make("angle-measure", *a, nums=(deg,)))
    nl = len(lay.lines)
    for i, j in combinations(range(nl), 2):
        s1, s2 = lay.extremes(i), lay.extremes(j)
        for kind in ("parallel", "perpendicular"):
            p = make(kind, *s1, *s2)
            if lay.holds(p):
                out.add(p)
    for t in lay.triangles:
        a, b, c = t
        if lay.holds(make("equilateral", a, b, c)):
            out.add(make("equilateral", a, b, c))
        for v, x, y in ((a, b, c), (b, a, c), (c, a, b)):
            iso = make("isosceles", v, x, y)
            if lay.holds(iso):
                out.add(iso)
            rt = make("right-triangle", x, v, y)
            if lay.holds(rt):
                out.add(rt)
    for t1, t2 in combinations(lay.triangles, 2):
        for perm in permutations(t2):
            cong = make("tri-cong", *t1, *perm)
            if lay.holds(cong):
                out.add(cong)
            else:
                sim = make("tri-sim", *t1, *perm)
                if lay.holds(sim):
                    out.add(sim)
    return ImplicitFactSet(frozenset(out - set(fig.assumptions)))


# ---------------------------------------------------------------------------
# shape classes

class ClassId(str, enum.Enum):
    TRIANGLE = "Triangle"
    ISOSCELES_TRIANGLE = "IsoscelesTriangle"
    RIGHT_TRIANGLE = "RightTriangle"
    EQUILATERAL_TRIANGLE = "EquilateralTriangle"
    QUADRILATERAL = "Quadrilateral"
    TRAPEZOID = "Trapezoid"
    PARALLELOGRAM = "Parallelogram"
    RECTANGLE = "Rectangle"
    RHOMBUS = "Rhombus"
    SQUARE = "Square"


# immediate weaker classes
_PARENTS: dict[ClassId, tuple[ClassId, ...]] = {
    ClassId.TRIANGLE: (),
    ClassId.ISOSCELES_TRIANGLE: (ClassId.TRIANGLE,),
    ClassId.RIGHT_TRIANGLE: (ClassId.TRIANGLE,),
    ClassId.EQUILATERAL_TRIANGLE: (ClassId.ISOSCELES_TRIANGLE,),
    ClassId.QUADRILATERAL: (),
    ClassId.TRAPEZOID: (ClassId.QUADRILATERAL,),
    ClassId.PARALLELOGRAM: (ClassId.TRAPEZOID,),
    ClassId.RECTANGLE: (ClassId.PARALLELOGRAM,),
    ClassId.RHOMBUS: (ClassId.PARALLELOGRAM,),
    ClassId.SQUARE: (ClassId.RECTANGLE, ClassId.RHOMBUS),
}


def class_leq(a: ClassId, b: ClassId) -> bool:
    """``a`` is at least as strong as ``b`` (a's theory entails b's)."""
    if a == b:
        return True
    return any(class_leq(p, b) for p in _PARENTS[a])


def _shape_recognizers(lay: Layout, shape: tuple[str, ...]) -> dict[ClassId, bool]:
    d = lay.dist
    eq = lambda u, v: abs(u - v) < lay.tol  # noqa: E731
    right = lambda a, v, b: abs(lay.measure(ang(a, v, b)) - 90.0) < 1e-6 * 180 + math.degrees(lay.tol)  # noqa: E731
    if len(shape) == 3:
        a, b, c = shape
        sides = [d(a, b), d(b, c), d(c, a)]
        n_eq = sum(eq(sides[i], sides[j]) for i, j in ((0, 1), (1, 2), (0, 2)))
        return {
            ClassId.TRIANGLE: True,
            ClassId.ISOSCELES_TRIANGLE: n_eq >= 1,
            ClassId.EQUILATERAL_TRIANGLE: n_eq == 3,
            ClassId.RIGHT_TRIANGLE: right(b, a, c) or right(a, b, c) or right(a, c, b),
        }
    a, b, c, e = shape
    par = lambda p, q, r, s: lay.holds(Prop("parallel", (p, q, r, s)))  # noqa: E731
    sides = [d(a, b), d(b, c), d(c, e), d(e, a)]
    rhombus_sides = all(eq(sides[0], s) for s in sides[1:])
    pairs = par(a, b, c, e) + par(b, c, e, a)
    corners = all(right(*t) for t in ((e, a, b), (a, b, c), (b, c, e), (c, e, a)))
    return {
        ClassId.QUADRILATERAL: True,
        ClassId.TRAPEZOID: pairs >= 1,
        ClassId.PARALLELOGRAM: pairs == 2,
        ClassId.RECTANGLE: pairs == 2 and corners,
        ClassId.RHOMBUS: pairs == 2 and rhombus_sides,
        ClassId.SQUARE: pairs == 2 and corners and rhombus_sides,
    }


# tie-break for incomparable accepted classes (isosceles right triangles)
_PRIORITY = [ClassId.EQUILATERAL_TRIANGLE, ClassId.ISOSCELES_TRIANGLE, ClassId.RIGHT_TRIANGLE]


def classify_strongest(fig: Figure, shape: tuple[str, ...], eps: float = DEFAULT_EPS,
                       lay: Layout | None = None) -> ClassId:
    lay = lay or Layout(fig, eps)
    shape = tuple(shape)
    if any(p not in fig.coords for p in shape):
        raise FigureError(f"shape {''.join(shape)} not present in figure")
    if len(shape) == 3:
        if tuple(sorted(shape)) not in lay.triangles:
            raise FigureError(f"triangle {''.join(shape)} not present in figure")
    elif len(shape) == 4:
        cyc = list(shape) + [shape[0]]
        if len(set(shape)) != 4 or not all(lay.connected(cyc[i], cyc[i + 1]) for i in range(4)) \
                or any(lay._collinear(cyc[i], cyc[i + 1], cyc[(i + 2) % 4]) for i in range(4)) \
                or lay.crosses(cyc[0], cyc[1], cyc[2], cyc[3]) or lay.crosses(cyc[1], cyc[2], cyc[3], cyc[0]):
            raise FigureError(f"quadrilateral {''.join(shape)} not present in figure")
    else:
        raise FigureError("shape must have 3 or 4 points")
    accepted = [c for c, ok in _shape_recognizers(lay, shape).items() if ok]
    least = [c for c in accepted if all(class_leq(c, o) for o in accepted)]
    if least:
        return least[0]
    minimal = [c for c in accepted if not any(o != c and class_leq(o, c) for o in accepted)]
    return min(minimal, key=lambda c: _PRIORITY.index(c) if c in _PRIORITY else len(_PRIORITY))
