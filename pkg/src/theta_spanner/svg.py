"""Deterministic SVG rendering of an instance and its graph."""

from __future__ import annotations

from pathlib import Path

from .theta import ThetaGraph
from .verify import RatioReport
from .visibility import Instance

MARGIN = 0.05


def _f(v: float) -> str:
    return f"{v:.6f}"


def svg_string(inst: Instance, graph: ThetaGraph | None = None, report: RatioReport | None = None) -> str:
    xs = [p.x for p in inst.points] or [0.0]
    ys = [-p.y for p in inst.points] or [0.0]  # SVG y grows downward
    w = max(xs) - min(xs)
    h = max(ys) - min(ys)
    extent = max(w, h) or 1.0
    mx, my = (w or extent) * MARGIN, (h or extent) * MARGIN
    box = (min(xs) - mx, min(ys) - my, (w or extent) + 2 * mx, (h or extent) + 2 * my)
    thin, thick, dot = extent * 0.002, extent * 0.008, extent * 0.006

    def line(a, b, cls, width, extra=""):
        pa, pb = inst.points[a], inst.points[b]
        return (
            f'  <line class="{cls}" x1="{_f(pa.x)}" y1="{_f(-pa.y)}" x2="{_f(pb.x)}" y2="{_f(-pb.y)}" '
            f'stroke-width="{_f(width)}"{extra}/>'
        )

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{" ".join(_f(v) for v in box)}">',
        "  <style>.constraint{stroke:#000}.edge{stroke:#3366cc}.worst{stroke:#d62728}"
        ".point{fill:#222}.worst-endpoint{fill:#d62728}</style>",
    ]
    for a, b in sorted(inst.constraint_keys):
        out.append(line(a, b, "constraint", thick))
    if graph is not None:
        for a, b in sorted(graph.edges):
            out.append(line(a, b, "edge", thin))
    worst = report.argmax if report is not None else None
    if worst is not None:
        out.append(line(worst[0], worst[1], "worst", thin * 1.5, f' stroke-dasharray="{_f(thick)}"'))
    for p in inst.points:
        cls = "worst-endpoint" if worst is not None and p.id in worst else "point"
        out.append(f'  <circle class="{cls}" cx="{_f(p.x)}" cy="{_f(-p.y)}" r="{_f(dot)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(inst: Instance, graph: ThetaGraph | None, report: RatioReport | None, path) -> None:
    Path(path).write_text(svg_string(inst, graph, report))
