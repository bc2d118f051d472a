"""Minimal deterministic SVG output for bodies, isoptics and polygon frames."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fourier_body import FourierBody, boundary_point, uniform_grid
from .isoptic import circumscribed_polygon, isoptic_point

STYLE = {
    "body": 'fill="#dfe8f3" stroke="#1f4e79" stroke-width="{w}"',
    "isoptic": 'fill="none" stroke="#b03a2e" stroke-width="{w}" stroke-dasharray="{d}"',
    "frame": 'fill="none" stroke="#444444" stroke-width="{w}"',
    "marker": 'fill="#1e8449" stroke="none"',
}


@dataclass
class Scene:
    body: np.ndarray
    isoptics: list = field(default_factory=list)
    frames: list = field(default_factory=list)
    title: str = ""


def build_scene(body: FourierBody, alphas=(), sides: int | None = None, frame_count: int = 3,
                grid_size: int = 720, title: str = "") -> Scene:
    """Sample the body boundary, the requested isoptics and ``frame_count`` rotated frames."""
    t = uniform_grid(grid_size)
    scene = Scene(boundary_point(body, t), title=title)
    for a in alphas:
        scene.isoptics.append(isoptic_point(body, a, t))
    if sides is not None:
        for k in range(frame_count):
            phase = 2 * math.pi * k / (sides * frame_count)
            scene.frames.append(circumscribed_polygon(body, sides, phase))
    return scene


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(points: np.ndarray, closed: bool = True) -> str:
    cmds = [f"M{_fmt(points[0, 0])},{_fmt(-points[0, 1])}"]
    cmds += [f"L{_fmt(x)},{_fmt(-y)}" for x, y in points[1:]]
    if closed:
        cmds.append("Z")
    return " ".join(cmds)


def render_svg(scene: Scene, path=None, size: int = 600) -> str:
    """Serialise ``scene``; writes to ``path`` when given and returns the SVG text.

    The y axis is flipped so the picture has the usual mathematical orientation.
    """
    clouds = [scene.body, *scene.isoptics, *[f.vertices for f in scene.frames]]
    allpts = np.vstack(clouds)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo))
    pad = 0.05 * span
    x0, y0 = lo[0] - pad, -hi[1] - pad
    w, h = (hi[0] - lo[0]) + 2 * pad, (hi[1] - lo[1]) + 2 * pad
    stroke = _fmt(span / 400)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
    ]
    if scene.title:
        lines.append(f"<title>{scene.title}</title>")
    lines.append(f'<path class="body" {STYLE["body"].format(w=stroke)} d="{_path(scene.body)}"/>')
    for iso in scene.isoptics:
        dash = _fmt(span / 100)
        lines.append(f'<path class="isoptic" {STYLE["isoptic"].format(w=stroke, d=dash)} d="{_path(iso)}"/>')
    r = _fmt(span / 150)
    for frame in scene.frames:
        pts = np.vstack([frame.vertices, frame.vertices[:1]])
        coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in pts)
        lines.append(f'<polyline class="frame" {STYLE["frame"].format(w=stroke)} points="{coords}"/>')
        for x, y in frame.tangency_points:
            lines.append(f'<circle class="tangency" {STYLE["marker"]} cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{r}"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write SVG to {path}: {exc.strerror}") from exc
    return text


#: rotor presets: (support terms, a0, isoptic angle, polygon sides)
FIGURES = {
    "triangle-sin4": ({4: (0.0, 1.0)}, 30.0, math.pi / 3, 3),
    "hexagon-cos7": ({7: (1.0, 0.0)}, 80.0, 2 * math.pi / 3, 6),
    "triangle-sin4-cos5": ({4: (0.0, 1.0), 5: (1.0, 0.0)}, 70.0, math.pi / 3, 3),
    "square-cos5": ({5: (1.0, 0.0)}, 60.0, math.pi / 2, 4),
}


def figure_scene(name: str, frame_count: int = 3) -> Scene:
    terms, a0, alpha, sides = FIGURES[name]
    body = FourierBody.from_terms(a0, terms)
    return build_scene(body, [alpha], sides, frame_count, title=f"p(t) = {body.describe()}")

