"""Deterministic SVG figures of a certificate: workspace, C-slice and connection graph."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .cage import CageCertificate
from .cspace import build_slice_geometry, posed_outline
from .geometry import DecomposedObject

PANEL = 300.0
PAD = 12.0
COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _f(v: float) -> str:
    return f"{v:.3f}"


class _Frame:
    """Maps a world box onto one square panel (y axis up)."""

    def __init__(self, points: np.ndarray, x_offset: float):
        lo = points.min(axis=0)
        hi = points.max(axis=0)
        span = float(max(hi - lo)) or 1.0
        self.lo = lo - 0.05 * span
        self.scale = (PANEL - 2 * PAD) / (1.1 * span)
        self.x_offset = x_offset

    def __call__(self, p) -> tuple[str, str]:
        x = self.x_offset + PAD + (p[0] - self.lo[0]) * self.scale
        y = PANEL - PAD - (p[1] - self.lo[1]) * self.scale
        return _f(x), _f(y)

    def path(self, pts) -> str:
        return " ".join(",".join(self(p)) for p in pts)


def _polygon(frame, pts, fill, stroke="#333", opacity=1.0) -> str:
    return (f'<polygon points="{frame.path(pts)}" fill="{fill}" fill-opacity="{opacity:.2f}" '
            f'stroke="{stroke}" stroke-width="1"/>')


def _dot(frame, p, color, r=3.5, cls="finger") -> str:
    x, y = frame(p)
    return f'<circle class="{cls}" cx="{x}" cy="{y}" r="{r}" fill="{color}"/>'


def workspace_view(cert: CageCertificate, obj: DecomposedObject, x_offset: float = 0.0) -> list[str]:
    outline = posed_outline(obj, cert.q)
    pts = np.vstack([outline, cert.fingers])
    fr = _Frame(pts, x_offset)
    out = ['<g id="workspace">', _polygon(fr, outline, "#cccccc")]
    loop = np.vstack([cert.fingers, cert.fingers[:1]])
    out.append(f'<polyline class="loop" points="{fr.path(loop)}" fill="none" stroke="#555" '
               f'stroke-dasharray="4 3"/>')
    for n, p in enumerate(cert.fingers):
        out.append(_dot(fr, p, COLORS[n % len(COLORS)]))
    out.append("</g>")
    return out


def slice_view(cert: CageCertificate, obj: DecomposedObject, s: int | None = None,
               x_offset: float = 0.0) -> list[str]:
    """C-obstacles of every finger at slice ``s`` (the q slice by default), q and the witness loop."""
    thetas = cert.thetas
    if s is None:
        s = int(np.argmin([abs(t - cert.q.q_theta) for t in thetas]))
    geom = build_slice_geometry(obj, thetas[s])
    shapes = [(n, m, shape.vertices + p) for n, p in enumerate(cert.fingers)
              for m, shape in enumerate(geom.obstacle_shapes)]
    pts = np.vstack([v for _, _, v in shapes] + [[[cert.q.q_x, cert.q.q_y]]])
    fr = _Frame(pts, x_offset)
    out = [f'<g id="cslice" data-theta="{_f(math.degrees(thetas[s]))}">']
    for n, m, v in shapes:
        out.append(_polygon(fr, v, COLORS[n % len(COLORS)], opacity=0.35))
    if s in cert.witnesses:
        w = np.vstack([cert.witnesses[s], cert.witnesses[s][:1]])
        out.append(f'<polyline class="loop" points="{fr.path(w)}" fill="none" stroke="#000"/>')
    out.append(_dot(fr, (cert.q.q_x, cert.q.q_y), "#000", 3.0, "q"))
    out.append("</g>")
    return out


def graph_edges(cert: CageCertificate) -> list[tuple[tuple[int, int], tuple[int, int], str]]:
    """Directed edges between (finger, piece) nodes: H between fingers, G inside one finger."""
    n_f = len(cert.loop)
    edges = []
    for n, chain in enumerate(cert.loop):
        for a, b in zip(chain, chain[1:]):
            edges.append(((n, a), (n, b), "G"))
        nxt = (n + 1) % n_f
        edges.append(((n, chain[-1]), (nxt, cert.loop[nxt][0]), "H"))
    return edges


def graph_view(cert: CageCertificate, n_pieces: int, x_offset: float = 0.0) -> list[str]:
    n_f = len(cert.loop)
    cx, cy, rad = x_offset + PANEL / 2, PANEL / 2, PANEL / 2 - 3 * PAD

    def node(n, m):
        a = 2 * math.pi * n / n_f
        r = rad * (1.0 - 0.25 * m / max(n_pieces, 1))
        return cx + r * math.cos(a) + 14 * m * math.sin(a), cy - r * math.sin(a) + 14 * m * math.cos(a)

    out = ['<g id="graph">']
    for a, b, kind in graph_edges(cert):
        (x0, y0), (x1, y1) = node(*a), node(*b)
        color = "#000" if kind == "H" else "#888"
        out.append(f'<line class="edge-{kind}" x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                   f'stroke="{color}" marker-end="url(#arrow)"/>')
    for n in range(n_f):
        for m in range(n_pieces):
            x, y = node(n, m)
            out.append(f'<circle class="node" cx="{_f(x)}" cy="{_f(y)}" r="6" fill="{COLORS[n % len(COLORS)]}"/>')
            out.append(f'<text x="{_f(x + 8)}" y="{_f(y - 8)}" font-size="9">{n}.{m}</text>')
    out.append("</g>")
    return out


def render_svg(cert: CageCertificate, obj: DecomposedObject, path=None, slice_index: int | None = None) -> str:
    """Three side-by-side panels; identical inputs give identical bytes."""
    body = (workspace_view(cert, obj, 0.0) + slice_view(cert, obj, slice_index, PANEL)
            + graph_view(cert, obj.n_pieces, 2 * PANEL))
    head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(3 * PANEL)}" height="{int(PANEL)}" '
            f'viewBox="0 0 {int(3 * PANEL)} {int(PANEL)}">',
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="16" refY="5" markerWidth="6" markerHeight="6" '
            'orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>',
            '<rect width="100%" height="100%" fill="white"/>']
    text = "\n".join(head + body + ["</svg>"]) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return text
