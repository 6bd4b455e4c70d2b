"""Planar geometry kernel: convex pieces, decomposition, facets and contact patterns."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

TOL = 1e-9
DEFAULT_ANGLE_TOL = 1e-6


class Point2(NamedTuple):
    x: float
    y: float


class Pose(NamedTuple):
    q_x: float
    q_y: float
    q_theta: float

    @classmethod
    def make(cls, x: float, y: float, theta: float) -> "Pose":
        return cls(float(x), float(y), wrap_angle(theta))


def wrap_angle(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    if t <= -math.pi:
        t += 2 * math.pi
    return t


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def cross2(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def signed_area(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    return 0.5 * float(np.sum(cross2(v, np.roll(v, -1, axis=0))))


def _outward_normal(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    n = np.array([d[1], -d[0]])
    return n / np.linalg.norm(n)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices and halfplanes ``a.x <= b``."""

    vertices: np.ndarray
    normals: np.ndarray = field(init=False, repr=False)
    offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) < 3:
            raise ValueError("convex polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite vertex")
        nxt = np.roll(v, -1, axis=0)
        if np.any(np.linalg.norm(nxt - v, axis=1) <= 1e-12):
            raise ValueError("duplicate consecutive vertices")
        e = nxt - v
        turns = cross2(e, np.roll(e, -1, axis=0))
        if signed_area(v) <= 0:
            raise ValueError("vertices must be counter-clockwise with positive area")
        if np.any(turns < -TOL):
            raise ValueError("polygon is not convex")
        normals = np.array([_outward_normal(v[k], nxt[k]) for k in range(len(v))])
        offsets = np.einsum("ij,ij->i", normals, v)
        v.setflags(write=False)
        normals.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @classmethod
    def from_points(cls, points) -> "ConvexPolygon":
        """Build from convex points in either orientation."""
        v = np.asarray(points, dtype=float)
        if signed_area(v) < 0:
            v = v[::-1]
        return cls(v)

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        nxt = np.roll(v, -1, axis=0)
        c = cross2(v, nxt)
        a = 0.5 * c.sum()
        return ((v + nxt) * c[:, None]).sum(axis=0) / (6.0 * a)

    def contains(self, p, tol: float = TOL) -> bool:
        return bool(np.all(self.normals @ np.asarray(p, dtype=float) <= self.offsets + tol))

    def max_violation(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return (pts @ self.normals.T - self.offsets).max(axis=1)

    def transformed(self, matrix: np.ndarray, shift=(0.0, 0.0)) -> "ConvexPolygon":
        v = self.vertices @ np.asarray(matrix).T + np.asarray(shift, dtype=float)
        return ConvexPolygon.from_points(v)

    def __len__(self):
        return len(self.vertices)


def rotate_polygon(poly: ConvexPolygon, theta: float) -> ConvexPolygon:
    return ConvexPolygon(poly.vertices @ rotation(theta).T)


class Facet(NamedTuple):
    start: np.ndarray
    end: np.ndarray
    normal: np.ndarray

    @property
    def direction(self) -> np.ndarray:
        return self.end - self.start

    @property
    def angle(self) -> float:
        return math.atan2(self.normal[1], self.normal[0])


class ConcaveVertex(NamedTuple):
    point: np.ndarray
    arc_lo: float
    arc_hi: float  # arc_lo <= arc_hi, span < pi

    @property
    def extreme_normals(self) -> np.ndarray:
        return np.array([[math.cos(self.arc_lo), math.sin(self.arc_lo)],
                         [math.cos(self.arc_hi), math.sin(self.arc_hi)]])

    def contains_direction(self, angle: float, tol: float = DEFAULT_ANGLE_TOL) -> bool:
        span = self.arc_hi - self.arc_lo
        rel = (angle - self.arc_lo) % (2 * math.pi)
        return rel <= span + tol or rel >= 2 * math.pi - tol


def _segments_cross(p1, p2, p3, p4) -> bool:
    d1 = cross2(p4 - p3, p1 - p3)
    d2 = cross2(p4 - p3, p2 - p3)
    d3 = cross2(p2 - p1, p3 - p1)
    d4 = cross2(p2 - p1, p4 - p1)
    if ((d1 > TOL and d2 < -TOL) or (d1 < -TOL and d2 > TOL)) and \
            ((d3 > TOL and d4 < -TOL) or (d3 < -TOL and d4 > TOL)):
        return True

    def on_seg(a, b, c):
        return (min(a[0], b[0]) - TOL <= c[0] <= max(a[0], b[0]) + TOL
                and min(a[1], b[1]) - TOL <= c[1] <= max(a[1], b[1]) + TOL)

    if abs(d1) <= TOL and on_seg(p3, p4, p1):
        return True
    if abs(d2) <= TOL and on_seg(p3, p4, p2):
        return True
    if abs(d3) <= TOL and on_seg(p1, p2, p3):
        return True
    if abs(d4) <= TOL and on_seg(p1, p2, p4):
        return True
    return False


def is_simple(outline) -> bool:
    v = np.asarray(outline, dtype=float)
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            if _segments_cross(a, b, v[j], v[(j + 1) % n]):
                return False
    return True


def clean_outline(outline) -> np.ndarray:
    """Return a CCW outline without duplicate or collinear vertices."""
    v = np.asarray(outline, dtype=float).reshape(-1, 2)
    keep = [p for k, p in enumerate(v) if np.linalg.norm(p - v[k - 1]) > 1e-12]
    v = np.array(keep)
    changed = True
    while changed and len(v) >= 3:
        changed = False
        for k in range(len(v)):
            a, b, c = v[k - 1], v[k], v[(k + 1) % len(v)]
            if abs(cross2(b - a, c - b)) <= TOL * max(1.0, np.linalg.norm(c - a)):
                v = np.delete(v, k, axis=0)
                changed = True
                break
    if len(v) >= 3 and signed_area(v) < 0:
        v = v[::-1]
    return v


@dataclass(eq=False)
class DecomposedObject:
    """The object as a union of convex pieces plus its boundary description.

    ``piece_boundary[i][k]`` tells whether edge ``k`` of piece ``i`` lies on the
    outline; the remaining edges are internal diagonals.
    """

    outline: np.ndarray
    pieces: list[ConvexPolygon]
    boundary_facets: list[Facet]
    concave_vertices: list[ConcaveVertex]
    piece_adjacency: np.ndarray
    piece_boundary: list[np.ndarray]
    adjacency_points: dict[tuple[int, int], np.ndarray]

    @property
    def n_pieces(self) -> int:
        return len(self.pieces)

    @property
    def n_facets(self) -> int:
        return len(self.boundary_facets)

    @property
    def area(self) -> float:
        return signed_area(self.outline)

    @property
    def diameter(self) -> float:
        v = self.outline
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    @property
    def min_width(self) -> float:
        """Smallest caliper width of the convex hull."""
        from scipy.spatial import ConvexHull

        hull = self.outline[ConvexHull(self.outline).vertices]
        best = math.inf
        for k in range(len(hull)):
            n = _outward_normal(hull[k], hull[(k + 1) % len(hull)])
            proj = hull @ n
            best = min(best, proj.max() - proj.min())
        return best

    @property
    def features(self) -> list[Facet | ConcaveVertex]:
        """Contact features: facets first, then concave vertices."""
        return list(self.boundary_facets) + list(self.concave_vertices)

    def translated(self, shift) -> "DecomposedObject":
        shift = np.asarray(shift, dtype=float)
        return DecomposedObject.from_pieces(self.outline + shift,
                                            [ConvexPolygon(p.vertices + shift) for p in self.pieces])

    @classmethod
    def from_pieces(cls, outline, pieces: Sequence[ConvexPolygon]) -> "DecomposedObject":
        outline = np.asarray(outline, dtype=float)
        pieces = list(pieces)
        facets = outline_facets(outline)
        concave = concave_vertices(outline)
        m = len(pieces)
        piece_boundary = []
        for p in pieces:
            mask = np.zeros(len(p), dtype=bool)
            for k in range(len(p)):
                a, b = p.vertices[k], p.vertices[(k + 1) % len(p)]
                mask[k] = any(_collinear_sub(a, b, f.start, f.end) for f in facets)
            piece_boundary.append(mask)
        adjacency = np.zeros((m, m), dtype=bool)
        points: dict[tuple[int, int], np.ndarray] = {}
        for i, j in itertools.combinations(range(m), 2):
            seg = _shared_segment(pieces[i], pieces[j])
            if seg is not None:
                adjacency[i, j] = adjacency[j, i] = True
                pt = _max_clearance_point(seg, facets)
                points[(i, j)] = pt
                points[(j, i)] = pt
        obj = cls(outline, pieces, facets, concave, adjacency, piece_boundary, points)
        obj.validate()
        return obj

    @classmethod
    def from_convex_pieces(cls, pieces: Sequence[ConvexPolygon]) -> "DecomposedObject":
        """Build from a conforming decomposition; the outline is recovered from unshared edges."""
        edges = []
        for p in pieces:
            for k in range(len(p)):
                edges.append((p.vertices[k], p.vertices[(k + 1) % len(p)]))
        free = []
        for a, b in edges:
            shared = any(np.allclose(a, d, atol=1e-9) and np.allclose(b, c, atol=1e-9) for c, d in edges)
            if not shared:
                free.append((a, b))
        if not free:
            raise ValueError("could not recover outline")
        loop = [free[0][0], free[0][1]]
        used = {0}
        while len(used) < len(free):
            for k, (a, b) in enumerate(free):
                if k not in used and np.allclose(a, loop[-1], atol=1e-9):
                    used.add(k)
                    loop.append(b)
                    break
            else:
                raise ValueError("pieces do not form a single simple outline")
        outline = clean_outline(np.array(loop[:-1]))
        return cls.from_pieces(outline, pieces)

    def validate(self) -> None:
        m = self.n_pieces
        if m == 0:
            raise ValueError("object has no pieces")
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in np.flatnonzero(self.piece_adjacency[i]):
                if j not in seen:
                    seen.add(int(j))
                    stack.append(int(j))
        if len(seen) != m:
            raise ValueError("pieces are not connected")
        for f in self.boundary_facets:
            owners = 0
            for p, mask in zip(self.pieces, self.piece_boundary):
                for k in np.flatnonzero(mask):
                    a, b = p.vertices[k], p.vertices[(k + 1) % len(p)]
                    if _collinear_sub(a, b, f.start, f.end):
                        owners += 1
                        break
            if owners == 0:
                raise ValueError("boundary facet not covered by any piece")
        for p in self.pieces:
            if not _clean_edges(p, self.boundary_facets):
                raise ValueError("piece edge runs partly along the outline")
        total = sum(p.area for p in self.pieces)
        if abs(total - self.area) > 1e-6 * max(1.0, abs(self.area)):
            raise ValueError("pieces do not cover the outline area")


def _collinear_sub(a, b, s, e) -> bool:
    """True when segment ab lies on segment se."""
    d = e - s
    length = np.linalg.norm(d)
    for p in (a, b):
        if abs(cross2(d, p - s)) > 1e-9 * max(1.0, length):
            return False
        t = np.dot(p - s, d) / length ** 2
        if t < -1e-9 or t > 1 + 1e-9:
            return False
    return np.linalg.norm(b - a) > 1e-12


def _shared_segment(p: ConvexPolygon, q: ConvexPolygon):
    """Positive-length segment common to the boundaries of two pieces, if any."""
    for k in range(len(p)):
        a, b = p.vertices[k], p.vertices[(k + 1) % len(p)]
        d = b - a
        length = np.linalg.norm(d)
        for l in range(len(q)):
            c, e = q.vertices[l], q.vertices[(l + 1) % len(q)]
            if abs(cross2(d, c - a)) > 1e-9 * length or abs(cross2(d, e - a)) > 1e-9 * length:
                continue
            if np.dot(e - c, d) >= 0:
                continue
            t0 = max(0.0, min(np.dot(c - a, d), np.dot(e - a, d)) / length ** 2)
            t1 = min(1.0, max(np.dot(c - a, d), np.dot(e - a, d)) / length ** 2)
            if (t1 - t0) * length > 1e-9:
                return a + t0 * d, a + t1 * d
    return None


def segment_distance(p, a, b) -> float:
    d = b - a
    t = np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * d)))


def _max_clearance_point(seg, facets) -> np.ndarray:
    a, b = seg
    best, best_pt = -1.0, 0.5 * (a + b)
    for t in np.linspace(0.1, 0.9, 17):
        pt = a + t * (b - a)
        clearance = min(segment_distance(pt, f.start, f.end) for f in facets)
        if clearance > best + 1e-12:
            best, best_pt = clearance, pt
    return best_pt


def outline_facets(outline) -> list[Facet]:
    v = np.asarray(outline, dtype=float)
    return [Facet(v[k].copy(), v[(k + 1) % len(v)].copy(), _outward_normal(v[k], v[(k + 1) % len(v)]))
            for k in range(len(v))]


def concave_vertices(outline) -> list[ConcaveVertex]:
    v = np.asarray(outline, dtype=float)
    n = len(v)
    out = []
    for k in range(n):
        a, b, c = v[k - 1], v[k], v[(k + 1) % n]
        if cross2(b - a, c - b) < -TOL:
            n_in = _outward_normal(a, b)
            n_out = _outward_normal(b, c)
            lo = math.atan2(n_out[1], n_out[0])
            hi = math.atan2(n_in[1], n_in[0])
            if hi < lo:
                hi += 2 * math.pi
            out.append(ConcaveVertex(b.copy(), lo, hi))
    return out


def _point_in_triangle(p, a, b, c) -> bool:
    return (cross2(b - a, p - a) >= -TOL and cross2(c - b, p - b) >= -TOL
            and cross2(a - c, p - c) >= -TOL)


def ear_clip(outline) -> list[np.ndarray]:
    """Ear-clipping triangulation of a CCW simple polygon; returns vertex triples."""
    v = [np.asarray(p, dtype=float) for p in outline]
    idx = list(range(len(v)))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * len(v) ** 2:
            raise ValueError("ear clipping failed; outline may be degenerate")
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = v[i0], v[i1], v[i2]
            if cross2(b - a, c - b) <= TOL:
                continue
            if any(_point_in_triangle(v[j], a, b, c) for j in idx if j not in (i0, i1, i2)):
                continue
            tris.append(np.array([a, b, c]))
            idx.pop(k)
            break
    tris.append(np.array([v[i] for i in idx]))
    return tris


def triangulate(outline) -> DecomposedObject:
    """Triangulate a simple polygon outline (either orientation)."""
    raw = np.asarray(outline, dtype=float).reshape(-1, 2)
    if len(raw) < 3:
        raise ValueError("outline needs at least 3 vertices")
    if abs(signed_area(raw)) <= 1e-12:
        raise ValueError("degenerate (zero-area) outline")
    if not is_simple(raw):
        raise ValueError("outline is self-intersecting")
    v = clean_outline(raw)
    if len(v) < 3 or abs(signed_area(v)) <= 1e-12:
        raise ValueError("degenerate (zero-area) outline")
    pieces = [ConvexPolygon(t) for t in ear_clip(v)]
    return DecomposedObject.from_pieces(v, pieces)


def _overlaps_facet(a, b, facets) -> bool:
    """Whether segment ab shares a positive-length piece with some facet."""
    d = b - a
    length = np.linalg.norm(d)
    for f in facets:
        if abs(cross2(d, f.start - a)) > 1e-9 * length or abs(cross2(d, f.end - a)) > 1e-9 * length:
            continue
        ts = sorted((np.dot(f.start - a, d), np.dot(f.end - a, d)))
        if (min(length ** 2, ts[1]) - max(0.0, ts[0])) / length > 1e-9:
            return True
    return False


def _clean_edges(poly: ConvexPolygon, facets) -> bool:
    """Every edge lies on one facet or touches the outline in at most a point."""
    v = poly.vertices
    for k in range(len(v)):
        a, b = v[k], v[(k + 1) % len(v)]
        if _overlaps_facet(a, b, facets) and not any(_collinear_sub(a, b, f.start, f.end) for f in facets):
            return False
    return True


def _merge_pair(p: ConvexPolygon, q: ConvexPolygon, facets=()):
    """Union of two pieces sharing a full edge, or None if not convex.

    A union whose edge would run partly along the outline and partly through
    the interior is rejected too, so every piece edge is either boundary or
    internal.
    """
    pv, qv = p.vertices, q.vertices
    for k in range(len(pv)):
        a, b = pv[k], pv[(k + 1) % len(pv)]
        for l in range(len(qv)):
            if np.allclose(qv[l], b, atol=1e-9) and np.allclose(qv[(l + 1) % len(qv)], a, atol=1e-9):
                ring = [pv[(k + 1 + t) % len(pv)] for t in range(len(pv))]
                ring += [qv[(l + 2 + t) % len(qv)] for t in range(len(qv) - 2)]
                ring = clean_outline(np.array(ring))
                try:
                    union = ConvexPolygon(ring)
                except ValueError:
                    return None
                return union if _clean_edges(union, facets) else None
    return None


def merge_convex(obj: DecomposedObject) -> DecomposedObject:
    """Greedily drop internal diagonals while pieces stay convex (Hertel-Mehlhorn)."""
    pieces = list(obj.pieces)
    merged = True
    while merged:
        merged = False
        for i, j in itertools.combinations(range(len(pieces)), 2):
            u = _merge_pair(pieces[i], pieces[j], obj.boundary_facets)
            if u is not None:
                pieces = [p for k, p in enumerate(pieces) if k not in (i, j)] + [u]
                merged = True
                break
    return DecomposedObject.from_pieces(obj.outline, pieces)


def decompose(outline, convex_merge: bool = True) -> DecomposedObject:
    obj = triangulate(outline)
    return merge_convex(obj) if convex_merge else obj


# -- facets, opposite pairs, limit contact patterns ---------------------------------

def _feature_normals(feature) -> np.ndarray:
    if isinstance(feature, Facet):
        return feature.normal[None, :]
    return feature.extreme_normals


def opposite_facet_pairs(obj: DecomposedObject, angle_tol: float = DEFAULT_ANGLE_TOL):
    """Feature index pairs whose outward normals are antiparallel.

    Facet-facet pairs come first; a facet pairs with a concave vertex when the
    reversed facet normal falls inside the vertex's normal arc.
    """
    facets = obj.boundary_facets
    pairs = []
    for i, j in itertools.combinations(range(len(facets)), 2):
        c = float(np.dot(facets[i].normal, facets[j].normal))
        if c <= -math.cos(angle_tol):
            pairs.append((i, j))
    base = len(facets)
    for f, facet in enumerate(facets):
        rev = math.atan2(-facet.normal[1], -facet.normal[0])
        for k, cv in enumerate(obj.concave_vertices):
            if cv.contains_direction(rev, angle_tol):
                pairs.append((f, base + k))
    return pairs


def positively_spans(normal_groups: Sequence[np.ndarray]) -> bool:
    """Whether contact normals positively span the plane.

    Each group is an array of extreme normals; a group contributes any
    nonnegative combination of its rows with total weight at least one.
    Feasibility of a strictly positive zero combination, together with rank
    two, is equivalent to positive spanning.
    """
    rows = [np.atleast_2d(g) for g in normal_groups]
    allv = np.vstack(rows)
    if np.linalg.matrix_rank(allv, tol=1e-9) < 2:
        return False
    nv = len(allv)
    a_eq = allv.T
    a_ub = np.zeros((len(rows), nv))
    col = 0
    for r, g in enumerate(rows):
        a_ub[r, col:col + len(g)] = -1.0
        col += len(g)
    res = linprog(np.zeros(nv), A_ub=a_ub, b_ub=-np.ones(len(rows)), A_eq=a_eq, b_eq=np.zeros(2),
                  bounds=[(0, None)] * nv, method="highs")
    return res.status == 0


def _parallel(u: np.ndarray, v: np.ndarray, angle_tol: float) -> bool:
    return abs(float(cross2(u, v))) <= math.sin(angle_tol)


def _codirectional(u: np.ndarray, v: np.ndarray, angle_tol: float) -> bool:
    return float(np.dot(u, v)) >= math.cos(angle_tol)


class ContactPattern(NamedTuple):
    """Feature indices (into ``obj.features``) that fingers must touch, in any order."""

    features: tuple[int, ...]


def limit_assignment_set(obj: DecomposedObject, n_fingers: int,
                         angle_tol: float = DEFAULT_ANGLE_TOL) -> list[ContactPattern]:
    """Contact patterns that pin the object at a limit orientation."""
    if n_fingers < 2:
        raise ValueError("need at least two fingers")
    if n_fingers == 2:
        return [ContactPattern(tuple(p)) for p in opposite_facet_pairs(obj, angle_tol)]
    feats = obj.features
    nf = len(obj.boundary_facets)
    out = []
    for trip in itertools.combinations(range(len(feats)), 3):
        ok = True
        for a, b in itertools.combinations(trip, 2):
            if a < nf and b < nf and _parallel(feats[a].normal, feats[b].normal, angle_tol):
                ok = False
                break
        if ok and positively_spans([_feature_normals(feats[k]) for k in trip]):
            out.append(ContactPattern(trip))
    if n_fingers >= 4:
        for quad in itertools.combinations(range(len(feats)), 4):
            ok = True
            for a, b in itertools.combinations(quad, 2):
                if a < nf and b < nf and _codirectional(feats[a].normal, feats[b].normal, angle_tol):
                    ok = False
                    break
            if ok and positively_spans([_feature_normals(feats[k]) for k in quad]):
                out.append(ContactPattern(quad))
    return out


def minimal_patterns(patterns: Sequence[ContactPattern]) -> list[ContactPattern]:
    """Drop patterns that contain another pattern; satisfying the subset suffices."""
    sets = [frozenset(p.features) for p in patterns]
    keep = []
    for k, s in enumerate(sets):
        if not any(o < s for o in sets):
            keep.append(patterns[k])
    return keep


# -- point location ---------------------------------------------------------------

def point_in_polygon(p, outline, tol: float = TOL) -> bool:
    """Even-odd ray casting; points within ``tol`` of the boundary count as inside."""
    v = np.asarray(outline, dtype=float)
    x, y = float(p[0]), float(p[1])
    n = len(v)
    inside = False
    for k in range(n):
        a, b = v[k], v[(k + 1) % n]
        if segment_distance(np.array([x, y]), a, b) <= tol:
            return True
        if (a[1] > y) != (b[1] > y):
            xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if xc > x:
                inside = not inside
    return inside


def winding_number(p, outline) -> int:
    """Winding number of a closed polyline around ``p`` (angle summation)."""
    v = np.asarray(outline, dtype=float) - np.asarray(p, dtype=float)
    ang = np.arctan2(v[:, 1], v[:, 0])
    d = np.diff(np.append(ang, ang[0]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(round(d.sum() / (2 * np.pi)))


def points_strictly_inside(points: np.ndarray, outline: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Vectorized strict-interior test (boundary points are outside)."""
    pts = np.asarray(points, dtype=float)
    v = np.asarray(outline, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    near = np.zeros(len(pts), dtype=bool)
    for k in range(len(v)):
        a, b = v[k], v[(k + 1) % len(v)]
        cond = (a[1] > y) != (b[1] > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
        inside ^= cond & (xc > x)
        d = b - a
        t = np.clip(((pts - a) @ d) / (d @ d), 0.0, 1.0)
        dist = np.hypot(x - (a[0] + t * d[0]), y - (a[1] + t * d[1]))
        near |= dist <= tol
    return inside & ~near
