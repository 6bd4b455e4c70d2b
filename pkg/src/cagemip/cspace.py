"""Per-slice configuration-space data: C-obstacle shapes, free-space cells, slice plans."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (TOL, ConvexPolygon, DecomposedObject, Pose, clean_outline, rotation,
                       wrap_angle)


@dataclass(eq=False)
class SliceGeometry:
    """C-obstacle shapes for one orientation.

    The C-obstacle of piece ``i`` for a finger at ``p`` is ``p + obstacle_shapes[i]``:
    the set of object translations at which the finger penetrates that piece.
    """

    theta: float
    obstacle_shapes: list[ConvexPolygon]
    boundary_masks: list[np.ndarray]
    intra_adjacency: np.ndarray
    witness_offsets: dict[tuple[int, int], np.ndarray]
    rotation_center_offsets: list[np.ndarray]


def build_slice_geometry(obj: DecomposedObject, theta: float) -> SliceGeometry:
    flip = -rotation(theta)
    shapes = [ConvexPolygon(p.vertices @ flip.T) for p in obj.pieces]
    offsets = {k: flip @ v for k, v in obj.adjacency_points.items()}
    return SliceGeometry(
        theta=float(theta),
        obstacle_shapes=shapes,
        boundary_masks=[m.copy() for m in obj.piece_boundary],
        intra_adjacency=obj.piece_adjacency.copy(),
        witness_offsets=offsets,
        rotation_center_offsets=[s.centroid for s in shapes],
    )


def posed_outline(obj: DecomposedObject, pose: Pose) -> np.ndarray:
    return obj.outline @ rotation(pose.q_theta).T + np.array([pose.q_x, pose.q_y])


@dataclass(frozen=True)
class Box:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def contains(self, p, tol: float = 0.0) -> bool:
        return (self.x0 - tol <= p[0] <= self.x1 + tol) and (self.y0 - tol <= p[1] <= self.y1 + tol)

    @classmethod
    def around(cls, q: Pose, half: float) -> "Box":
        return cls(q.q_x - half, q.q_y - half, q.q_x + half, q.q_y + half)


def default_box(obj: DecomposedObject, q: Pose, factor: float = 4.0) -> Box:
    """Square of side ``factor`` times the object diameter centred at ``q``."""
    return Box.around(q, 0.5 * factor * obj.diameter)


@dataclass(eq=False)
class FreeWorkspacePartition:
    regions: list[ConvexPolygon]
    workspace_box: Box

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    def locate(self, p, tol: float = TOL) -> list[int]:
        return [k for k, r in enumerate(self.regions) if r.contains(p, tol)]


def partition_free_workspace(obj: DecomposedObject, q: Pose, box: Box) -> FreeWorkspacePartition:
    """Vertical trapezoidal decomposition of ``box`` minus the object posed at ``q``."""
    v = posed_outline(obj, q)
    if not (v[:, 0].min() > box.x0 + TOL and v[:, 0].max() < box.x1 - TOL
            and v[:, 1].min() > box.y0 + TOL and v[:, 1].max() < box.y1 - TOL):
        raise ValueError("object does not fit strictly inside the workspace box")
    n = len(v)
    edges = [(v[k], v[(k + 1) % n]) for k in range(n)]
    xs = np.unique(np.concatenate([[box.x0, box.x1], v[:, 0]]))
    xs = xs[np.concatenate([[True], np.diff(xs) > TOL])]

    def y_at(edge_id: int, x: float) -> float:
        if edge_id == -1:
            return box.y0
        if edge_id == -2:
            return box.y1
        a, b = edges[edge_id]
        return a[1] + (x - a[0]) * (b[1] - a[1]) / (b[0] - a[0])

    open_cells: dict[tuple[int, int], float] = {}
    cells: list[tuple[int, int, float, float]] = []
    for xa, xb in zip(xs[:-1], xs[1:]):
        xm = 0.5 * (xa + xb)
        hits = []
        for k, (a, b) in enumerate(edges):
            lo, hi = min(a[0], b[0]), max(a[0], b[0])
            if lo < xm < hi:
                hits.append((y_at(k, xm), k))
        hits.sort()
        bounds = [-1] + [k for _, k in hits] + [-2]
        keys = [(bounds[2 * t], bounds[2 * t + 1]) for t in range(len(bounds) // 2)]
        for key in list(open_cells):
            if key not in keys:
                cells.append((*key, open_cells.pop(key), xa))
        for key in keys:
            open_cells.setdefault(key, xa)
    for key, start in open_cells.items():
        cells.append((*key, start, box.x1))

    regions = []
    for lo_e, hi_e, xa, xb in sorted(cells, key=lambda c: (c[2], y_at(c[0], 0.5 * (c[2] + c[3])))):
        pts = [(xa, y_at(lo_e, xa)), (xb, y_at(lo_e, xb)), (xb, y_at(hi_e, xb)), (xa, y_at(hi_e, xa))]
        regions.append(ConvexPolygon(clean_outline(np.array(pts))))
    return FreeWorkspacePartition(regions, box)


@dataclass(frozen=True)
class SlicePlan:
    thetas: tuple[float, ...]
    index_of_q: int
    periodic: bool = False

    def __post_init__(self):
        t = np.asarray(self.thetas)
        if len(t) < 3 or np.any(np.diff(t) <= 0):
            raise ValueError("slice angles must be strictly increasing, at least 3")
        if self.periodic and t[-1] - t[0] >= 2 * math.pi:
            raise ValueError("periodic plan must span less than a full turn")

    @property
    def size(self) -> int:
        return len(self.thetas)

    def spacing(self, s: int) -> float:
        """Angle from slice ``s`` to the next one (wrapping for periodic plans)."""
        if s + 1 < self.size:
            return self.thetas[s + 1] - self.thetas[s]
        if not self.periodic:
            raise IndexError("no slice after the last one")
        return self.thetas[0] + 2 * math.pi - self.thetas[-1]

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        pairs = [(s, s + 1) for s in range(self.size - 1)]
        if self.periodic:
            pairs.append((self.size - 1, 0))
        return pairs


def make_slice_plan(q: Pose, count: int, lo: float = -math.pi / 2, hi: float = math.pi / 2,
                    mode: str = "uniform", obj: DecomposedObject | None = None,
                    periodic: bool = False) -> SlicePlan:
    """Slice orientations over ``[lo, hi]``; one slice is placed exactly at ``q_theta``.

    A periodic plan ignores ``hi`` and spreads ``count`` slices over a full
    turn starting at ``lo``.
    """
    if count < 3:
        raise ValueError("need at least 3 slices")
    qt = q.q_theta
    if periodic:
        step = 2 * math.pi / count
        thetas = lo + step * np.arange(count)
    else:
        if not lo < qt < hi:
            raise ValueError("q_theta must lie strictly inside the slice range")
        if mode == "uniform":
            thetas = np.linspace(lo, hi, count)
        elif mode == "facet-aware":
            if obj is None:
                raise ValueError("facet-aware slicing needs the object")
            thetas = _facet_aware(qt, count, lo, hi, obj)
        else:
            raise ValueError(f"unknown slicing mode {mode!r}")
    thetas = np.array(thetas, dtype=float)
    k = int(np.argmin(np.abs(np.vectorize(wrap_angle)(thetas - qt))))
    thetas[k] = qt if not periodic else thetas[k] + wrap_angle(qt - thetas[k])
    return SlicePlan(tuple(float(t) for t in thetas), k, periodic)


def _facet_aware(qt: float, count: int, lo: float, hi: float, obj: DecomposedObject) -> np.ndarray:
    angles = [f.angle for f in obj.boundary_facets]
    cand = {lo, hi, qt}
    for a in angles:
        for b in angles:
            # rotation bringing normal b antiparallel to normal a as seen at q_theta
            d = wrap_angle(a + math.pi - b)
            t = qt + d
            if lo - 1e-9 <= t <= hi + 1e-9:
                cand.add(min(max(t, lo), hi))
    pts = sorted(cand)
    merged = [pts[0]]
    for t in pts[1:]:
        if t - merged[-1] > 1e-6:
            merged.append(t)
    while len(merged) > count:
        # drop the candidate closest to a neighbour, never the ends or q
        gaps = [(merged[k + 1] - merged[k - 1], k) for k in range(1, len(merged) - 1)
                if abs(merged[k] - qt) > 1e-9]
        merged.pop(min(gaps)[1])
    while len(merged) < count:
        k = int(np.argmax(np.diff(merged)))
        merged.insert(k + 1, 0.5 * (merged[k] + merged[k + 1]))
    return np.array(merged)
