"""Subcone decomposition and (constrained) theta-graph construction."""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeneralPositionViolation
from .geometry import (
    EPS_GEOM,
    TWO_PI,
    ConeSystem,
    as_cones,
    bearing,
    cone_of,
    projection_length,
    validate_general_position,
)
from .visibility import Instance, visibility_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subcone:
    vertex: int
    m: int
    cone: int
    index: int  # position within the cone, counted clockwise
    angular_interval: tuple[float, float]  # bearings (start, end), clockwise, end may exceed 2*pi
    generators: tuple[int, ...]  # constraint indices whose rays bound this subcone
    boundary_points: tuple[int, ...] = ()  # far endpoints of those constraints


@dataclass
class ThetaGraph:
    n: int
    m: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)
    provenance: dict[tuple[int, int], list[tuple[int, int, int]]] = field(default_factory=dict)
    flagged: list[tuple[int, int]] = field(default_factory=list)

    def add(self, u: int, v: int, weight: float, source: tuple[int, int, int]) -> None:
        key = (u, v) if u < v else (v, u)
        self.edges[key] = weight
        self.provenance.setdefault(key, []).append(source)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for (u, v), wgt in self.edges.items():
            adj[u].append((v, wgt))
            adj[v].append((u, wgt))
        return adj

    def weight_matrix(self) -> np.ndarray:
        """Dense weights with ``inf`` for absent edges and 0 on the diagonal."""
        w = np.full((self.n, self.n), np.inf)
        np.fill_diagonal(w, 0.0)
        for (u, v), wgt in self.edges.items():
            w[u, v] = w[v, u] = wgt
        return w


def _splits(inst: Instance, u: int, cs: ConeSystem) -> dict[int, list[tuple[float, int, int]]]:
    """Per cone of ``u``: sorted (offset, constraint index, far endpoint) of splitting rays."""
    P = inst.points
    out: dict[int, list[tuple[float, int, int]]] = {}
    for ci, (a, b) in enumerate(inst.constraints):
        if u not in (a, b):
            continue
        v = b if a == u else a
        i = cone_of(P[u], P[v], cs)
        off = (bearing(P[v].x - P[u].x, P[v].y - P[u].y) - (i * cs.theta - cs.theta / 2)) % TWO_PI
        out.setdefault(i, []).append((off, ci, v))
    for lst in out.values():
        lst.sort()
    return out


def subcones(inst: Instance, u: int, cones) -> list[Subcone]:
    """All subcones of ``u``, cone by cone, each cone listed clockwise."""
    cs = as_cones(cones)
    splits = _splits(inst, u, cs)
    result = []
    for i in range(cs.m):
        start = i * cs.theta - cs.theta / 2
        cuts = splits.get(i, [])
        bounds = [0.0] + [off for off, _, _ in cuts] + [cs.theta]
        for j in range(len(bounds) - 1):
            gens, pts = [], []
            if j > 0:
                gens.append(cuts[j - 1][1])
                pts.append(cuts[j - 1][2])
            if j < len(cuts):
                gens.append(cuts[j][1])
                pts.append(cuts[j][2])
            lo = (start + bounds[j]) % TWO_PI
            result.append(
                Subcone(u, cs.m, i, j, (lo, lo + bounds[j + 1] - bounds[j]), tuple(gens), tuple(pts))
            )
    return result


def _cone_offsets(coords: np.ndarray, u: int, cs: ConeSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cone index, in-cone offset and bisector projection of every point seen from ``u``."""
    d = coords - coords[u]
    phi = np.mod(np.arctan2(d[:, 0], d[:, 1]), TWO_PI)
    t = (phi + cs.theta / 2) / cs.theta
    cone = np.floor(t).astype(int) % cs.m
    off = np.mod(phi - (cone * cs.theta - cs.theta / 2), TWO_PI)
    ang = cone * cs.theta
    proj = d[:, 0] * np.sin(ang) + d[:, 1] * np.cos(ang)
    return cone, off, proj


def subcone_members(inst: Instance, u: int, sub: Subcone) -> list[int]:
    """Points of ``sub``: those strictly inside its interval plus its generating endpoints.

    A non-generator point falling exactly on a splitting ray (only possible
    through rounding) belongs to the subcone clockwise of the ray.
    """
    cs = ConeSystem.from_count(sub.m)
    cone, off, _ = _cone_offsets(inst.coords, u, cs)
    cuts = [c[0] for c in _splits(inst, u, cs).get(sub.cone, [])]
    members = []
    for p in range(inst.n):
        if p == u or cone[p] != sub.cone:
            continue
        if p in sub.boundary_points:
            members.append(p)
            continue
        if bisect.bisect_right(cuts, off[p]) == sub.index:
            members.append(p)
    return members


def _check_gp(inst: Instance, cs: ConeSystem) -> None:
    violations = validate_general_position(inst.points, cs)
    if violations:
        raise GeneralPositionViolation(violations)


def build_constrained_theta(inst: Instance, cones, *, check: bool = True, vis: np.ndarray | None = None) -> ThetaGraph:
    """Constrained theta-graph: per subcone, an edge to the visible member with the
    smallest projection onto the bisector of the enclosing cone.

    ``vis`` may carry a precomputed visibility matrix for the instance.
    """
    cs = as_cones(cones)
    if check:
        inst.validate()
        _check_gp(inst, cs)
    n = inst.n
    coords = inst.coords
    if vis is None:
        vis = visibility_matrix(inst)
    g = ThetaGraph(n, cs.m)
    ids = np.arange(n)
    for u in range(n):
        cone, off, proj = _cone_offsets(coords, u, cs)
        splits = _splits(inst, u, cs) if inst.constraints else {}
        cut_offs = {i: [c[0] for c in cuts] for i, cuts in splits.items()}
        boundary = {c[2]: (i, j) for i, cuts in splits.items() for j, c in enumerate(cuts)}
        best: dict[tuple[int, int], int] = {}
        candidates = ids[vis[u]]
        for p in candidates[np.lexsort((candidates, proj[candidates]))]:
            p = int(p)
            i = int(cone[p])
            if p in boundary:
                _, j = boundary[p]
                targets = ((i, j), (i, j + 1))
            else:
                cuts = cut_offs.get(i, ())
                j = bisect.bisect_right(cuts, off[p])
                if j > 0 and off[p] == cuts[j - 1]:
                    g.flagged.append((u, p))
                    log.warning("point %d lies on a splitting ray of %d", p, u)
                targets = ((i, j),)
            for t in targets:
                best.setdefault(t, p)
        for (i, j), p in sorted(best.items()):
            g.add(u, p, math.dist(coords[u], coords[p]), (u, i, j))
    return g


def build_unconstrained_theta(points, cones, *, check: bool = True) -> ThetaGraph:
    """Classic theta-graph by direct evaluation of the cone rule for every pair."""
    cs = as_cones(cones)
    pts = [(float(p[0]), float(p[1])) for p in points]
    if check:
        _check_gp(Instance.from_coords(pts), cs)
    n = len(pts)
    g = ThetaGraph(n, cs.m)
    for u in range(n):
        best: dict[int, tuple[float, int]] = {}
        for v in range(n):
            if v == u:
                continue
            i = cone_of(pts[u], pts[v], cs, EPS_GEOM)
            key = (projection_length(pts[u], pts[v], i, cs), v)
            if i not in best or key < best[i]:
                best[i] = key
        for i, (_, v) in sorted(best.items()):
            g.add(u, v, math.dist(pts[u], pts[v]), (u, i, 0))
    return g
