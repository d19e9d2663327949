"""JSON file formats for instances, graphs and ratio reports."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import IndexOutOfRange, ParseError
from .geometry import Point
from .theta import ThetaGraph
from .verify import PairRecord, RatioReport
from .visibility import Instance

FORMAT_VERSION = 1


def _num(x: float) -> str:
    # json.dumps gives the shortest round-trip repr; integral floats keep their ".0"
    return json.dumps(float(x))


def dumps_instance(inst: Instance, metadata: dict[str, str] | None = None) -> str:
    """Canonical text form: constraints as sorted ``[min, max]`` pairs, one item per line."""
    canon = inst.canonical()
    lines = ["{", f'  "version": {FORMAT_VERSION},']
    meta = {str(k): str(v) for k, v in sorted((metadata or {}).items())}
    lines.append(f'  "metadata": {json.dumps(meta, sort_keys=True)},')
    pts = [f"    [{_num(p.x)}, {_num(p.y)}]" for p in canon.points]
    lines.append('  "points": [' + ("\n" + ",\n".join(pts) + "\n  ]," if pts else "],"))
    cons = [f"    [{a}, {b}]" for a, b in canon.constraints]
    lines.append('  "constraints": [' + ("\n" + ",\n".join(cons) + "\n  ]" if cons else "]"))
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_instance(text: str, *, check_planarity: bool = True) -> tuple[Instance, dict[str, str]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("instance file must hold a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version!r}")
    raw_pts = data.get("points")
    if not isinstance(raw_pts, list):
        raise ParseError("'points' must be a list of [x, y] pairs")
    points = []
    for i, p in enumerate(raw_pts):
        if not (isinstance(p, list) and len(p) == 2 and all(_is_real(c) for c in p)):
            raise ParseError(f"point {i} is not an [x, y] pair of numbers")
        x, y = float(p[0]), float(p[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"point {i} has a non-finite coordinate")
        points.append(Point(x, y, i))
    raw_cons = data.get("constraints", [])
    if not isinstance(raw_cons, list):
        raise ParseError("'constraints' must be a list of [i, j] pairs")
    cons = []
    for c in raw_cons:
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(i, int) and not isinstance(i, bool) for i in c)):
            raise ParseError(f"constraint {c!r} is not an [i, j] index pair")
        if not all(0 <= i < len(points) for i in c):
            raise IndexOutOfRange(f"constraint {c} references a missing point")
        cons.append((c[0], c[1]))
    meta = data.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("'metadata' must be an object")
    inst = Instance(points, cons)
    if check_planarity:
        inst.validate()
    return inst, {str(k): str(v) for k, v in meta.items()}


def _is_real(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_instance(text)[0]


def save_instance(inst: Instance, path, metadata: dict[str, str] | None = None) -> None:
    Path(path).write_text(dumps_instance(inst, metadata))


def graph_to_dict(g: ThetaGraph) -> dict:
    keys = sorted(g.edges)
    return {
        "version": FORMAT_VERSION,
        "m": g.m,
        "n": g.n,
        "edges": [[u, v, g.edges[(u, v)]] for u, v in keys],
        "provenance": [[u, v, [list(s) for s in sorted(g.provenance[(u, v)])]] for u, v in keys],
    }


def _record(r: PairRecord) -> dict:
    return {
        "u": r.u,
        "w": r.w,
        "delta": r.delta,
        "euclid": r.euclid,
        "alpha": r.alpha,
        "bound": r.bound,
        "ratio": r.ratio,
        "violation": r.violation,
    }


def report_to_dict(rep: RatioReport, *, timing: bool = False) -> dict:
    """Serializable report; per-pair records appear only if the report carries them.

    Timing is opt-in so that reports stay byte-identical across runs.
    """
    out = {
        "version": FORMAT_VERSION,
        "m": rep.m,
        "family": {"k": rep.k, "x": rep.x},
        "theta": rep.theta,
        "bound": rep.bound,
        "max_ratio": rep.max_ratio,
        "max_pair_bound": rep.max_bound,
        "argmax": list(rep.argmax) if rep.argmax else None,
        "n_pairs": rep.n_pairs,
        "connectivity_ok": rep.connectivity_ok,
        "violations": [_record(r) for r in rep.violations],
        "vis_violations": [
            {"u": u, "w": w, "d_graph": dg, "d_vis": dv} for u, w, dg, dv in rep.vis_violations
        ],
    }
    if rep.records is not None:
        out["pairs"] = [_record(r) for r in rep.records]
    if timing:
        out["timing"] = dict(rep.timing)
    return out


def write_json(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
