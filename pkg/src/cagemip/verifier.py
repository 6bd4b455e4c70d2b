"""Brute-force cage oracle on a sampled configuration space.

Translations are sampled on a square grid centred on ``q`` and orientations
on a full turn of equally spaced layers. A sample is blocked when some finger
lies strictly inside the posed object. Free samples are joined within a layer
with 8-connectivity and across neighbouring layers (including the wrap from
the last layer back to the first) through the 3x3 neighbourhood, which errs
towards connecting, i.e. towards reporting an escape. The configuration is
caged when the component of ``q`` never reaches the border of the grid.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .geometry import DecomposedObject, Pose, point_in_polygon, points_strictly_inside, rotation

__all__ = ["GridCSpace", "VerifyReport", "verify_cage", "cross_validate", "point_in_polygon"]

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass
class VerifyReport:
    caged: bool
    verdict: str                 # caged | escapes | q-blocked
    q_free: bool
    theta_extent: tuple[float, float] | None   # offsets from q_theta, radians; None for a full turn
    component_size: int
    resolution: float
    theta_step: float
    half_extent: float
    n_layers: int
    elapsed: float
    notes: list[str] = field(default_factory=list)

    @property
    def full_rotation(self) -> bool:
        return self.q_free and self.theta_extent is None

    def brackets(self, lo: float, hi: float, slack: float = 0.0) -> bool:
        """True when the oracle component covers orientation offsets ``[lo, hi]``."""
        if not self.q_free:
            return False
        if self.theta_extent is None:
            return True
        a, b = self.theta_extent
        return a <= lo + slack and hi - slack <= b

    def within(self, lo: float, hi: float, margin: float) -> bool:
        """True when the component stays inside ``[lo - margin, hi + margin]``."""
        if not self.q_free or self.theta_extent is None:
            return False
        a, b = self.theta_extent
        return lo - margin <= a and b <= hi + margin


class GridCSpace:
    """Sampled translations around ``q`` and one free mask per orientation layer."""

    def __init__(self, outline: np.ndarray, q: Pose, fingers: np.ndarray, resolution: float,
                 theta_step: float, half_extent: float, tol: float):
        self.outline = np.asarray(outline, dtype=float)
        self.q = q
        self.fingers = np.asarray(fingers, dtype=float).reshape(-1, 2)
        self.resolution = resolution
        k = int(math.ceil(half_extent / resolution))
        self.half_cells = k
        offs = np.arange(-k, k + 1) * resolution
        self.xs = q.q_x + offs
        self.ys = q.q_y + offs
        self.n_layers = max(4, int(round(2 * math.pi / theta_step)))
        self.theta_step = 2 * math.pi / self.n_layers
        self.tol = tol

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.xs), len(self.ys)

    def layer_theta(self, k: int) -> float:
        return self.q.q_theta + k * self.theta_step

    def blocked(self, k: int) -> np.ndarray:
        """Boolean grid: object at translation (x_i, y_j) and layer ``k`` contains a finger."""
        rot = rotation(self.layer_theta(k))
        shape = -(self.outline @ rot.T)     # translations c with finger - c in the posed outline
        out = np.zeros(self.shape, dtype=bool)
        for p in self.fingers:
            poly = shape + p
            lo = poly.min(axis=0)
            hi = poly.max(axis=0)
            i0 = max(0, int(np.searchsorted(self.xs, lo[0])) - 1)
            i1 = min(len(self.xs), int(np.searchsorted(self.xs, hi[0])) + 1)
            j0 = max(0, int(np.searchsorted(self.ys, lo[1])) - 1)
            j1 = min(len(self.ys), int(np.searchsorted(self.ys, hi[1])) + 1)
            if i0 >= i1 or j0 >= j1:
                continue
            gx, gy = np.meshgrid(self.xs[i0:i1], self.ys[j0:j1], indexing="ij")
            pts = np.column_stack([gx.ravel(), gy.ravel()])
            hit = points_strictly_inside(pts, poly, self.tol).reshape(gx.shape)
            out[i0:i1, j0:j1] |= hit
        return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n)

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return int(root)

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _cross_pairs(la: np.ndarray, lb: np.ndarray) -> np.ndarray:
    """Label pairs (a, b) with a free cell of ``la`` next to a free cell of ``lb``."""
    pairs = []
    n, m = la.shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            a = la[max(0, di):n + min(0, di), max(0, dj):m + min(0, dj)]
            b = lb[max(0, -di):n + min(0, -di), max(0, -dj):m + min(0, -dj)]
            both = (a > 0) & (b > 0)
            if both.any():
                pairs.append(np.unique((a[both] << 32) | b[both]))
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    keys = np.unique(np.concatenate(pairs))
    return np.column_stack([keys >> 32, keys & 0xFFFFFFFF])


def verify_cage(obj, q: Pose, fingers, resolution: float | None = None,
                theta_step: float = math.radians(1.0), half_extent: float | None = None,
                tol: float | None = None) -> VerifyReport:
    """Decide by flood fill whether the fingers cage the object placed at ``q``.

    ``obj`` is a ``DecomposedObject`` or a raw outline. ``resolution``
    defaults to one hundredth of the object diameter; the grid reaches at
    least 1.5 diameters from ``q`` and always past every finger by more than
    the object's radius, so a component touching the border has escaped.
    """
    t0 = time.monotonic()
    outline = obj.outline if isinstance(obj, DecomposedObject) else np.asarray(obj, dtype=float)
    q = Pose(*q)
    fingers = np.asarray(fingers, dtype=float).reshape(-1, 2)
    diam = float(np.max(np.linalg.norm(outline[:, None] - outline[None], axis=-1)))
    res = resolution or diam / 100.0
    reach = float(np.linalg.norm(outline, axis=1).max())
    far = float(np.abs(fingers - [q.q_x, q.q_y]).max()) if len(fingers) else 0.0
    half = max(half_extent or 0.0, 1.5 * diam, far + reach + res)
    grid = GridCSpace(outline, q, fingers, res, theta_step, half, tol if tol is not None else 1e-6 * diam)
    c = grid.half_cells
    labels = []
    offset = 0
    border = set()
    for k in range(grid.n_layers):
        lab, count = ndimage.label(~grid.blocked(k), structure=_EIGHT)
        lab = lab.astype(np.int64)
        lab[lab > 0] += offset
        offset += count
        edge = np.concatenate([lab[0], lab[-1], lab[:, 0], lab[:, -1]])
        border.update(int(v) for v in np.unique(edge[edge > 0]))
        labels.append(lab)
    uf = _UnionFind(offset + 1)
    for k in range(grid.n_layers):
        nxt = labels[(k + 1) % grid.n_layers]
        for a, b in _cross_pairs(labels[k], nxt):
            uf.union(int(a), int(b))
    q_label = int(labels[0][c, c])
    notes = []
    if q_label == 0:
        return VerifyReport(False, "q-blocked", False, (0.0, 0.0), 0, res, grid.theta_step, half,
                            grid.n_layers, time.monotonic() - t0, ["q itself is blocked by a finger"])
    root = uf.find(q_label)
    escaped = any(uf.find(b) == root for b in border)
    member = [bool(np.any([uf.find(int(v)) == root for v in np.unique(lab[lab > 0])])) for lab in labels]
    size = 0
    for lab in labels:
        ids = np.unique(lab[lab > 0])
        mine = [v for v in ids if uf.find(int(v)) == root]
        if mine:
            size += int(np.isin(lab, mine).sum())
    if all(member):
        extent = None
    else:
        up = 0
        while member[(up + 1) % grid.n_layers]:
            up += 1
        down = 0
        while member[(-down - 1) % grid.n_layers]:
            down += 1
        extent = (-down * grid.theta_step, up * grid.theta_step)
    caged = not escaped
    return VerifyReport(caged, "caged" if caged else "escapes", True, extent, size, res, grid.theta_step,
                        half, grid.n_layers, time.monotonic() - t0, notes)


def cross_validate(certificate, obj, resolution: float | None = None,
                   theta_step: float = math.radians(1.0)) -> VerifyReport:
    """Run the oracle on a certificate and compare its orientation extent with the caged slices.

    The component should cover the caged slices and end before the
    neighbouring uncaged slices, so it is bracketed by the caged interval
    widened by one slice spacing.
    """
    report = verify_cage(obj, certificate.q, certificate.fingers, resolution, theta_step)
    lo, hi = (t - certificate.q.q_theta for t in certificate.theta_interval)
    spacing = float(np.max(np.diff(certificate.thetas))) if len(certificate.thetas) > 1 else 2 * math.pi
    if report.caged:
        if not report.brackets(lo, hi, slack=report.theta_step):
            report.notes.append("oracle component does not span the certified orientation interval")
        if not report.within(lo, hi, spacing):
            report.notes.append("oracle component extends past the neighbouring uncaged slices")
    return report
