"""Exact 2-D convex geometry kernel.

Polygons, half-plane clipping, support functions and line-hitting
predicates. Everything here is pure and immutable; degenerate polygons
(segments, points) share the same code paths as proper ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Point = tuple[float, float]

# Geometric tolerance in length units. Windows are O(1)..O(1e2) units, so
# doubles leave ample headroom below this.
EPS = 1e-9

# Unit-vector normalisation tolerance.
DIR_EPS = 1e-12


class GeometryError(ValueError):
    """Raised on invalid geometric input."""


@dataclass(frozen=True)
class Direction:
    """Unit vector in the plane, renormalised on construction."""

    x: float
    y: float

    def __post_init__(self) -> None:
        n = math.hypot(self.x, self.y)
        if n == 0.0 or not math.isfinite(n):
            raise GeometryError("direction must be a non-zero finite vector")
        if abs(n - 1.0) > DIR_EPS:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)

    @classmethod
    def from_angle(cls, theta: float) -> Direction:
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def dot(self, p: Point) -> float:
        return self.x * p[0] + self.y * p[1]

    def cross(self, other: Direction) -> float:
        return self.x * other.y - self.y * other.x

    def opposite(self) -> Direction:
        return Direction(-self.x, -self.y)

    def perpendicular(self) -> Direction:
        return Direction(-self.y, self.x)


@dataclass(frozen=True)
class Hyperplane:
    """Line at distance ``r >= 0`` from the origin with exterior unit normal ``u``.

    The line is {x : <x,u> = r}; the closed half-plane not containing the
    origin is ``plus``, the other one ``minus``.
    """

    r: float
    u: Direction

    def __post_init__(self) -> None:
        if not (self.r >= 0.0) or not math.isfinite(self.r):
            raise GeometryError(f"hyperplane distance must be >= 0, got {self.r}")

    def offset(self, p: Point) -> float:
        """Signed distance of ``p`` from the line, positive on the plus side."""
        return self.u.dot(p) - self.r


def _dist(p: Point, q: Point) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _shoelace2(verts: Sequence[Point]) -> float:
    """Twice the signed area of a closed vertex loop."""
    s = 0.0
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        s += x1 * y2 - y1 * x2
    return s


def _perp_distance(p: Point, a: Point, b: Point) -> float:
    """Distance of ``p`` from the infinite line through ``a`` and ``b``."""
    ax, ay = a
    bx, by = b
    ex, ey = bx - ax, by - ay
    n = math.hypot(ex, ey)
    if n == 0.0:
        return _dist(p, a)
    return abs(ex * (p[1] - ay) - ey * (p[0] - ax)) / n


def _canonical_loop(points: Sequence[Point]) -> tuple[Point, ...]:
    """Tidy a convex vertex loop: dedupe, orient CCW, strip collinear vertices.

    Collapses nearly-collinear loops to a segment and coincident points to a
    single point, using the module tolerance.
    """
    pts: list[Point] = []
    for p in points:
        q = (float(p[0]), float(p[1]))
        if not pts or _dist(q, pts[-1]) > EPS:
            pts.append(q)
    while len(pts) > 1 and _dist(pts[0], pts[-1]) <= EPS:
        pts.pop()
    if len(pts) == 1:
        return (pts[0],)
    if len(pts) == 2:
        return tuple(pts)

    area2 = _shoelace2(pts)
    spread = math.hypot(
        max(x for x, _ in pts) - min(x for x, _ in pts),
        max(y for _, y in pts) - min(y for _, y in pts),
    )
    # A loop within EPS of a line spans at most a 2*EPS-wide strip, so its
    # doubled area is below 4*EPS*diameter; larger loops skip the collapse.
    if abs(area2) <= 4.0 * EPS * spread:
        best = (0, 1)
        best_d = -1.0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = _dist(pts[i], pts[j])
                if d > best_d:
                    best_d = d
                    best = (i, j)
        a, b = pts[best[0]], pts[best[1]]
        if all(_perp_distance(p, a, b) <= EPS for p in pts):
            return (a, b) if best_d > EPS else (a,)

    if area2 < 0.0:
        pts.reverse()

    # Strip interior vertices lying on the chord of their neighbours.
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for i in range(len(pts)):
            p = pts[i - 1]
            q = pts[i]
            r = pts[(i + 1) % len(pts)]
            if _perp_distance(q, p, r) <= EPS:
                pts.pop(i)
                changed = True
                break
    return tuple(pts)


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex vertex chain in counter-clockwise order.

    One vertex is a point, two a segment, three or more a proper polygon.
    The constructor canonicalises the chain (orientation, duplicate and
    collinear vertex removal) but assumes the input loop is convex.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) == 0:
            raise GeometryError("polygon needs at least one vertex")
        verts = _canonical_loop(self.vertices)
        n = len(verts)
        for i in range(n):
            p, q, r = verts[i - 1], verts[i], verts[(i + 1) % n]
            if n > 2:
                cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0])
                if cross < 0.0 and _perp_distance(q, p, r) > EPS:
                    raise GeometryError("vertex chain is not convex")
        object.__setattr__(self, "vertices", verts)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2


@dataclass(frozen=True)
class CompactSet:
    """Finite union of convex polygons; ``connected`` is derived on construction."""

    pieces: tuple[ConvexPolygon, ...]
    connected: bool = field(init=False)

    def __post_init__(self) -> None:
        if len(self.pieces) == 0:
            raise GeometryError("compact set needs at least one piece")
        object.__setattr__(self, "connected", _is_connected(self.pieces))

    @classmethod
    def of(cls, *pieces: ConvexPolygon) -> CompactSet:
        return cls(tuple(pieces))

    def all_vertices(self) -> list[Point]:
        out: list[Point] = []
        for p in self.pieces:
            out.extend(p.vertices)
        return out



def _pieces_of(body: ConvexPolygon | CompactSet) -> tuple[ConvexPolygon, ...]:
    if isinstance(body, ConvexPolygon):
        return (body,)
    return body.pieces


def _vertices_of(body: ConvexPolygon | CompactSet) -> list[Point]:
    if isinstance(body, ConvexPolygon):
        return list(body.vertices)
    return body.all_vertices()


def _is_connected(pieces: Sequence[ConvexPolygon]) -> bool:
    n = len(pieces)
    if n == 1:
        return True
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if piece_distance(pieces[i], pieces[j]) <= EPS:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    root = find(0)
    return all(find(i) == root for i in range(n))


# ---------------------------------------------------------------------------
# Hull, clipping, intersection


def convex_hull(points: Iterable[Point]) -> ConvexPolygon:
    """Minimal convex polygon containing the input points (monotone chain)."""
    pts = sorted({(float(x), float(y)) for x, y in points})
    if not pts:
        raise GeometryError("empty point set")
    if len(pts) == 1:
        return ConvexPolygon((pts[0],))

    def half(seq: Sequence[Point]) -> list[Point]:
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0.0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return ConvexPolygon(tuple(lower[:-1] + upper[:-1]))


def _clip_loop(
    verts: Sequence[Point], nx: float, ny: float, c: float, keep_ge: bool
) -> list[Point]:
    """Clip a convex vertex loop against <x,n> >= c (or <= c).

    Vertices within EPS of the line are kept on both sides.
    """
    sign = 1.0 if keep_ge else -1.0
    s = [sign * (x * nx + y * ny - c) for x, y in verts]
    n = len(verts)
    if n == 1:
        return [verts[0]] if s[0] >= -EPS else []
    out: list[Point] = []
    for i in range(n):
        j = (i + 1) % n
        si, sj = s[i], s[j]
        if si >= -EPS:
            out.append(verts[i])
        if (si > EPS and sj < -EPS) or (si < -EPS and sj > EPS):
            t = si / (si - sj)
            vi, vj = verts[i], verts[j]
            out.append((vi[0] + t * (vj[0] - vi[0]), vi[1] + t * (vj[1] - vi[1])))
    return out


def clip(poly: ConvexPolygon, plane: Hyperplane, side: str) -> ConvexPolygon | None:
    """Intersection of ``poly`` with the closed half-plane on ``side`` of ``plane``.

    Returns None when the intersection is empty or degenerates onto the
    cutting line (a sliver thinner than the tolerance).
    """
    if side not in ("plus", "minus"):
        raise GeometryError(f"side must be 'plus' or 'minus', got {side!r}")
    keep_ge = side == "plus"
    loop = _clip_loop(poly.vertices, plane.u.x, plane.u.y, plane.r, keep_ge)
    if not loop:
        return None
    if all(abs(plane.u.dot(p) - plane.r) <= EPS for p in loop):
        return None
    return ConvexPolygon(tuple(loop))


def polygon_intersection(poly: ConvexPolygon, window: ConvexPolygon) -> ConvexPolygon | None:
    """Intersection of a convex polygon (possibly degenerate) with a proper one."""
    if len(window.vertices) < 3:
        raise GeometryError("intersection window must have positive area")
    loop = list(poly.vertices)
    wv = window.vertices
    for i in range(len(wv)):
        a, b = wv[i], wv[(i + 1) % len(wv)]
        nx, ny = a[1] - b[1], b[0] - a[0]
        c = a[0] * nx + a[1] * ny
        loop = _clip_loop(loop, nx, ny, c, keep_ge=True)
        if not loop:
            return None
    return ConvexPolygon(tuple(loop))


def clip_segment_to_polygon(
    a: Point, b: Point, window: ConvexPolygon
) -> tuple[Point, Point] | None:
    """Part of segment ``ab`` inside a proper convex polygon, or None."""
    t0, t1 = 0.0, 1.0
    dx, dy = b[0] - a[0], b[1] - a[1]
    wv = window.vertices
    for i in range(len(wv)):
        p, q = wv[i], wv[(i + 1) % len(wv)]
        nx, ny = p[1] - q[1], q[0] - p[0]
        c = p[0] * nx + p[1] * ny
        sa = a[0] * nx + a[1] * ny - c
        sd = dx * nx + dy * ny
        if abs(sd) < 1e-300:
            if sa < -EPS:
                return None
            continue
        t = -sa / sd
        if sd > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    # Snap to the exact endpoints when the cut is only rounding noise.
    if t0 < 1e-12:
        t0 = 0.0
    if t1 > 1.0 - 1e-12:
        t1 = 1.0
    p0 = a if t0 == 0.0 else (a[0] + t0 * dx, a[1] + t0 * dy)
    p1 = b if t1 == 1.0 else (a[0] + t1 * dx, a[1] + t1 * dy)
    if _dist(p0, p1) <= EPS:
        return None
    return (p0, p1)


def chord(poly: ConvexPolygon, plane: Hyperplane) -> tuple[Point, Point] | None:
    """Segment in which the cutting line crosses the polygon, or None."""
    u = plane.u
    pts: list[Point] = []
    verts = poly.vertices
    n = len(verts)
    offs = [u.dot(v) - plane.r for v in verts]
    for i in range(n):
        j = (i + 1) % n
        si, sj = offs[i], offs[j]
        if abs(si) <= EPS:
            pts.append(verts[i])
        if (si > EPS and sj < -EPS) or (si < -EPS and sj > EPS):
            t = si / (si - sj)
            vi, vj = verts[i], verts[j]
            pts.append((vi[0] + t * (vj[0] - vi[0]), vi[1] + t * (vj[1] - vi[1])))
    if len(pts) < 2:
        return None
    tx, ty = -u.y, u.x
    pts.sort(key=lambda p: p[0] * tx + p[1] * ty)
    if _dist(pts[0], pts[-1]) <= EPS:
        return None
    return (pts[0], pts[-1])


# ---------------------------------------------------------------------------
# Support functions and hit predicates


def support(body: ConvexPolygon | CompactSet, u: Direction) -> float:
    """Support function h(u): the largest projection of the set onto ``u``."""
    return max(u.dot(v) for v in _vertices_of(body))


@dataclass(frozen=True)
class HitInterval:
    """Projection interval [lo, hi] of a convex body onto a direction.

    A hyperplane (r, u) with r >= 0 hits the body iff
    r in [max(0, lo), max(0, hi)] and that interval is non-degenerate or
    touching. Both ends may be negative before truncation.
    """

    lo: float
    hi: float


def hit_interval(body: ConvexPolygon | CompactSet, u: Direction) -> HitInterval:
    """Projection interval of the convex hull of ``body`` onto ``u``."""
    return HitInterval(-support(body, u.opposite()), support(body, u))


def hit_length(body: ConvexPolygon | CompactSet, u: Direction) -> float:
    """Length of {r >= 0 : the hyperplane (r, u) hits the hull of the body}."""
    iv = hit_interval(body, u)
    return max(0.0, iv.hi) - max(0.0, iv.lo)


def hits(plane: Hyperplane, body: ConvexPolygon | CompactSet) -> bool:
    """True iff the line meets some piece of the body (touching counts)."""
    u, r = plane.u, plane.r
    for piece in _pieces_of(body):
        lo = math.inf
        hi = -math.inf
        for v in piece.vertices:
            d = u.dot(v)
            lo = min(lo, d)
            hi = max(hi, d)
        if lo - EPS <= r <= hi + EPS:
            return True
    return False


def separates(
    plane: Hyperplane, a: ConvexPolygon | CompactSet, b: ConvexPolygon | CompactSet
) -> bool:
    """True iff the line strictly separates the two sets (clearance > EPS)."""
    offs_a = [plane.offset(v) for v in _vertices_of(a)]
    offs_b = [plane.offset(v) for v in _vertices_of(b)]
    a_minus = all(o < -EPS for o in offs_a)
    a_plus = all(o > EPS for o in offs_a)
    b_minus = all(o < -EPS for o in offs_b)
    b_plus = all(o > EPS for o in offs_b)
    return (a_minus and b_plus) or (a_plus and b_minus)


# ---------------------------------------------------------------------------
# Metric quantities


def area(poly: ConvexPolygon) -> float:
    return 0.5 * _shoelace2(poly.vertices)


def perimeter(poly: ConvexPolygon) -> float:
    """Boundary length; a segment's boundary is traversed both ways (2L)."""
    verts = poly.vertices
    n = len(verts)
    if n == 1:
        return 0.0
    return sum(_dist(verts[i], verts[(i + 1) % n]) for i in range(n))


def diameter(body: ConvexPolygon | CompactSet) -> float:
    verts = _vertices_of(body)
    if len(verts) == 1:
        return 0.0
    return max(
        _dist(verts[i], verts[j])
        for i in range(len(verts))
        for j in range(i + 1, len(verts))
    )


def centroid(poly: ConvexPolygon) -> Point:
    verts = poly.vertices
    n = len(verts)
    if n == 1:
        return verts[0]
    if n == 2:
        return ((verts[0][0] + verts[1][0]) / 2.0, (verts[0][1] + verts[1][1]) / 2.0)
    a2 = 0.0
    cx = 0.0
    cy = 0.0
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        w = x1 * y2 - x2 * y1
        a2 += w
        cx += (x1 + x2) * w
        cy += (y1 + y2) * w
    return (cx / (3.0 * a2), cy / (3.0 * a2))


# ---------------------------------------------------------------------------
# Distances and containment


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return _dist(p, a)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / l2
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return _dist(p, (ax + t * dx, ay + t * dy))


def segment_segment_distance(p1: Point, p2: Point, q1: Point, q2: Point) -> float:
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) > 1e-300:
        rx, ry = q1[0] - p1[0], q1[1] - p1[1]
        t = (rx * d2[1] - ry * d2[0]) / denom
        s = (rx * d1[1] - ry * d1[0]) / denom
        if 0.0 <= t <= 1.0 and 0.0 <= s <= 1.0:
            return 0.0
    return min(
        _point_segment_distance(p1, q1, q2),
        _point_segment_distance(p2, q1, q2),
        _point_segment_distance(q1, p1, p2),
        _point_segment_distance(q2, p1, p2),
    )


def contains_point(poly: ConvexPolygon, p: Point, tol: float = EPS) -> bool:
    """True iff ``p`` lies in the polygon, within ``tol`` of its point set."""
    verts = poly.vertices
    n = len(verts)
    if n == 1:
        return _dist(p, verts[0]) <= tol
    if n == 2:
        return _point_segment_distance(p, verts[0], verts[1]) <= tol
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]
        ln = math.hypot(ex, ey)
        if (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / ln < -tol:
            return False
    return True


def interior_clearance(window: ConvexPolygon, p: Point) -> float:
    """Smallest signed distance from ``p`` to the window edges (inside positive)."""
    verts = window.vertices
    if len(verts) < 3:
        return -math.inf
    best = math.inf
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        ex, ey = b[0] - a[0], b[1] - a[1]
        ln = math.hypot(ex, ey)
        best = min(best, (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / ln)
    return best


def _boundary_edges(poly: ConvexPolygon) -> list[tuple[Point, Point]]:
    v = poly.vertices
    n = len(v)
    if n == 1:
        return [(v[0], v[0])]
    if n == 2:
        return [(v[0], v[1])]
    return [(v[i], v[(i + 1) % n]) for i in range(n)]


def piece_distance(p: ConvexPolygon, q: ConvexPolygon) -> float:
    """Distance between the point sets of two convex pieces (0 if they meet)."""
    if any(contains_point(p, v, 0.0) for v in q.vertices):
        return 0.0
    if any(contains_point(q, v, 0.0) for v in p.vertices):
        return 0.0
    best = math.inf
    for a1, a2 in _boundary_edges(p):
        for b1, b2 in _boundary_edges(q):
            best = min(best, segment_segment_distance(a1, a2, b1, b2))
            if best == 0.0:
                return 0.0
    return best


def segment_hits_body(
    a: Point, b: Point, body: ConvexPolygon | CompactSet, tol: float = EPS
) -> bool:
    """True iff segment ``ab`` comes within ``tol`` of any piece of the body."""
    for piece in _pieces_of(body):
        if contains_point(piece, a, tol) or contains_point(piece, b, tol):
            return True
        pv = piece.vertices
        n = len(pv)
        if n == 1:
            if _point_segment_distance(pv[0], a, b) <= tol:
                return True
            continue
        for i in range(n if n > 2 else 1):
            if segment_segment_distance(a, b, pv[i], pv[(i + 1) % n]) <= tol:
                return True
    return False


# ---------------------------------------------------------------------------
# Rigid motions, scaling, dilation


def translate(poly: ConvexPolygon, t: Point) -> ConvexPolygon:
    return ConvexPolygon(tuple((x + t[0], y + t[1]) for x, y in poly.vertices))


def rotate(poly: ConvexPolygon, theta: float, about: Point = (0.0, 0.0)) -> ConvexPolygon:
    c, s = math.cos(theta), math.sin(theta)
    ox, oy = about
    return ConvexPolygon(
        tuple(
            (ox + c * (x - ox) - s * (y - oy), oy + s * (x - ox) + c * (y - oy))
            for x, y in poly.vertices
        )
    )


def scale(poly: ConvexPolygon, s: float) -> ConvexPolygon:
    if s <= 0:
        raise GeometryError("scale factor must be positive")
    return ConvexPolygon(tuple((s * x, s * y) for x, y in poly.vertices))


def translate_set(body: CompactSet, t: Point) -> CompactSet:
    return CompactSet(tuple(translate(p, t) for p in body.pieces))


def dilate(body: ConvexPolygon | CompactSet, margin: float, n_dirs: int = 16) -> ConvexPolygon:
    """Convex window containing the body with clearance ~``margin`` everywhere.

    Hull of the vertices pushed outward in ``n_dirs`` directions; the true
    clearance is at least margin * cos(pi / n_dirs).
    """
    if margin <= 0:
        raise GeometryError("dilation margin must be positive")
    pts: list[Point] = []
    for v in _vertices_of(body):
        for k in range(n_dirs):
            t = 2.0 * math.pi * k / n_dirs
            pts.append((v[0] + margin * math.cos(t), v[1] + margin * math.sin(t)))
    return convex_hull(pts)


def hull_of(body: ConvexPolygon | CompactSet) -> ConvexPolygon:
    """Convex hull of all pieces."""
    if isinstance(body, ConvexPolygon):
        return body
    if len(body.pieces) == 1:
        return body.pieces[0]
    return convex_hull(body.all_vertices())


# ---------------------------------------------------------------------------
# Common shapes and JSON forms


def box(x0: float, y0: float, x1: float, y1: float) -> ConvexPolygon:
    return ConvexPolygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))


def regular_polygon(n: int, circumradius: float = 1.0, center: Point = (0.0, 0.0)) -> ConvexPolygon:
    return ConvexPolygon(
        tuple(
            (
                center[0] + circumradius * math.cos(2.0 * math.pi * k / n),
                center[1] + circumradius * math.sin(2.0 * math.pi * k / n),
            )
            for k in range(n)
        )
    )


def polygon_to_json(poly: ConvexPolygon) -> dict:
    return {"vertices": [[x, y] for x, y in poly.vertices]}


def polygon_from_json(obj: dict) -> ConvexPolygon:
    return ConvexPolygon(tuple((float(x), float(y)) for x, y in obj["vertices"]))


def compact_to_json(body: CompactSet) -> dict:
    return {"pieces": [polygon_to_json(p) for p in body.pieces]}


def compact_from_json(obj: dict) -> CompactSet:
    return CompactSet(tuple(polygon_from_json(p) for p in obj["pieces"]))
