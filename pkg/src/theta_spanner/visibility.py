"""Constrained visibility among points and planar segment constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, InvalidInstance, PreconditionViolated
from .geometry import EPS_GEOM, Orientation, Point, cross, orientation, proper_intersection


@dataclass
class Instance:
    """A point set with a planar set of segment constraints between its points."""

    points: list[Point]
    constraints: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.points = [
            p if isinstance(p, Point) and p.id == i else Point(float(p[0]), float(p[1]), i)
            for i, p in enumerate(self.points)
        ]
        self.constraints = [(int(a), int(b)) for a, b in self.constraints]

    @classmethod
    def from_coords(cls, coords: Iterable, constraints: Iterable = ()) -> "Instance":
        return cls([Point(float(x), float(y), i) for i, (x, y) in enumerate(coords)], list(constraints))

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points], dtype=float).reshape(-1, 2)

    @cached_property
    def constraint_keys(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(a, b), max(a, b)) for a, b in self.constraints)

    def is_constraint(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.constraint_keys

    def segment(self, a: int, b: int) -> tuple[Point, Point]:
        return self.points[a], self.points[b]

    def with_constraint(self, a: int, b: int) -> "Instance":
        return Instance(list(self.points), self.constraints + [(a, b)])

    def canonical(self) -> "Instance":
        """Same instance with constraints stored as sorted ``(min, max)`` pairs."""
        return Instance(list(self.points), sorted(self.constraint_keys))

    def validate(self) -> None:
        """Raise :class:`InvalidInstance` unless the instance is well formed."""
        n = self.n
        if not np.all(np.isfinite(self.coords)):
            raise InvalidInstance("non-finite coordinate")
        if len({(p.x, p.y) for p in self.points}) != n:
            raise InvalidInstance("duplicate points")
        seen = set()
        for a, b in self.constraints:
            if not (0 <= a < n and 0 <= b < n):
                raise IndexOutOfRange(f"constraint ({a}, {b}) references a missing point")
            if a == b:
                raise InvalidInstance(f"degenerate constraint ({a}, {b})")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise InvalidInstance(f"duplicate constraint {key}")
            seen.add(key)
        crossing = crossing_constraints(self)
        if crossing:
            raise InvalidInstance(f"constraints {crossing[0]} properly intersect (not planar)")


def crossing_constraints(inst: Instance) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    out = []
    cons = inst.constraints
    for i in range(len(cons)):
        for j in range(i + 1, len(cons)):
            if proper_intersection(inst.segment(*cons[i]), inst.segment(*cons[j])):
                out.append((cons[i], cons[j]))
    return out


def visible(inst: Instance, u: int, v: int) -> bool:
    if u == v:
        raise ValueError("visible() needs two distinct points")
    if inst.is_constraint(u, v):
        return True
    seg = inst.segment(u, v)
    return not any(proper_intersection(seg, inst.segment(a, b)) for a, b in inst.constraints)


@dataclass(frozen=True)
class VisibilityGraph:
    n: int
    adjacency: np.ndarray  # (n, n) bool, symmetric, zero diagonal

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def pairs(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def weights(self, coords: np.ndarray) -> np.ndarray:
        """Dense distance matrix with ``inf`` where there is no edge."""
        d = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=-1)
        return np.where(self.adjacency, d, np.inf)


def visibility_matrix(inst: Instance, eps: float = EPS_GEOM) -> np.ndarray:
    """Vectorised pairwise visibility; same predicate as :func:`visible`."""
    n = inst.n
    vis = np.ones((n, n), dtype=bool)
    np.fill_diagonal(vis, False)
    if not inst.constraints or n < 2:
        return vis
    P = inst.coords
    cons = np.asarray(inst.constraints, dtype=int)
    A, B = P[cons[:, 0]], P[cons[:, 1]]

    def sgn(x):
        return np.where(x > eps, 1, np.where(x < -eps, -1, 0))

    # side of each point relative to each constraint line: (n, s)
    e = B - A
    side_pt = sgn(e[None, :, 0] * (P[:, None, 1] - A[None, :, 1]) - e[None, :, 1] * (P[:, None, 0] - A[None, :, 0]))
    straddle = side_pt[:, None, :] * side_pt[None, :, :] < 0
    # side of each constraint endpoint relative to each segment pq: (n, n, s)
    d = P[None, :, :] - P[:, None, :]
    ra = A[None, None, :, :] - P[:, None, None, :]
    rb = B[None, None, :, :] - P[:, None, None, :]
    sa = sgn(d[:, :, None, 0] * ra[..., 1] - d[:, :, None, 1] * ra[..., 0])
    sb = sgn(d[:, :, None, 0] * rb[..., 1] - d[:, :, None, 1] * rb[..., 0])
    blocked = np.any(straddle & (sa * sb < 0), axis=-1)
    vis &= ~blocked
    vis[cons[:, 0], cons[:, 1]] = True
    vis[cons[:, 1], cons[:, 0]] = True
    return vis


def visibility_graph(inst: Instance) -> VisibilityGraph:
    """Visibility graph Vis(P, S) by brute force over all pairs and constraints."""
    if crossing_constraints(inst):
        raise InvalidInstance("constraint set is not planar")
    return VisibilityGraph(inst.n, visibility_matrix(inst))


@dataclass(frozen=True)
class ConvexChain:
    vertices: list[int]
    frame: tuple[int, int, int]  # (u, v, w)


def _strictly_inside(tri: Sequence, p, eps: float = EPS_GEOM) -> bool:
    a, b, c = tri
    s = 1.0 if cross(a, b, c) > 0 else -1.0
    return s * cross(a, b, p) > eps and s * cross(b, c, p) > eps and s * cross(c, a, p) > eps


def _angle_strictly_between(apex, left, right, p, eps: float = EPS_GEOM) -> bool:
    """Whether ray apex->p points into the open wedge spanned by apex->left, apex->right (< pi)."""
    s = 1.0 if cross(apex, left, right) > 0 else -1.0
    return s * cross(apex, left, p) > eps and s * cross(apex, p, right) > eps


def _chain_preconditions(inst: Instance, u: int, v: int, w: int) -> None:
    if len({u, v, w}) != 3:
        raise PreconditionViolated("u, v, w must be distinct")
    P = inst.points
    if orientation(P[u], P[v], P[w]) == Orientation.COLLINEAR:
        raise PreconditionViolated("u, v, w are collinear")
    if not visible(inst, u, w) or not visible(inst, v, w):
        raise PreconditionViolated("uw and vw must be visibility edges")
    for a, b in inst.constraints:
        if w in (a, b):
            other = b if a == w else a
            if other in (u, v):
                continue
            if _angle_strictly_between(P[w], P[u], P[v], P[other]):
                raise PreconditionViolated(f"w is an endpoint of constraint ({a}, {b}) entering triangle uvw")


def _hull_ccw(ids: list[int], pts: Sequence) -> list[int]:
    order = sorted(ids, key=lambda i: (pts[i][0], pts[i][1]))
    if len(order) < 3:
        return order

    def half(seq):
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and cross(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = half(order), half(reversed(order))
    return lower[:-1] + upper[:-1]


def convex_chain(inst: Instance, u: int, v: int, w: int) -> ConvexChain:
    """Convex chain of visibility edges from ``u`` to ``v`` inside triangle ``uvw``.

    The chain is the taut path from ``u`` to ``v`` that keeps every point
    and constraint of the triangle on the far side from ``w``: the boundary
    of the convex hull of ``u``, ``v`` and the points strictly inside the
    triangle, minus the hull edge ``uv``.  The pocket between the chain and
    ``w`` is then empty.
    """
    _chain_preconditions(inst, u, v, w)
    P = inst.points
    tri = (P[u], P[v], P[w])
    inside = [p.id for p in P if p.id not in (u, v, w) and _strictly_inside(tri, p)]
    if not inside:
        return ConvexChain([u, v], (u, v, w))
    hull = _hull_ccw([u, v] + inside, P)
    k = hull.index(u)
    hull = hull[k:] + hull[:k]
    if hull[1] == v:
        chain = [u] + hull[:0:-1]
    else:
        chain = hull[: hull.index(v) + 1]
    return ConvexChain(chain, (u, v, w))


def _point_in_polygon(poly: Sequence, p) -> bool:
    inside = False
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return inside


def verify_chain(inst: Instance, chain: ConvexChain, eps: float = EPS_GEOM) -> bool:
    """Check every convex-chain property, including the empty pocket toward ``w``."""
    u, v, w = chain.frame
    vs = chain.vertices
    P = inst.points
    if len(vs) < 2 or vs[0] != u or vs[-1] != v or len(set(vs)) != len(vs) or w in vs:
        return False
    if any(not visible(inst, a, b) for a, b in zip(vs, vs[1:])):
        return False
    side = cross(P[u], P[v], P[w])
    if abs(side) <= eps:
        return False
    s = 1.0 if side > 0 else -1.0
    for i in vs[1:-1]:
        # inside the closed triangle
        if (
            s * cross(P[u], P[v], P[i]) < -eps
            or s * cross(P[v], P[w], P[i]) < -eps
            or s * cross(P[w], P[u], P[i]) < -eps
        ):
            return False
    # turns go away from w: each chain vertex is extreme toward w
    for a, b, c in zip(vs, vs[1:], vs[2:]):
        if s * cross(P[a], P[b], P[c]) >= -eps:
            return False
    pocket = [P[i] for i in vs] + [P[w]]
    boundary = list(zip(vs, vs[1:])) + [(v, w), (w, u)]
    on_boundary = set(vs) | {w}
    for p in P:
        if p.id not in on_boundary and _point_in_polygon(pocket, p):
            return False
    for a, b in inst.constraints:
        seg = inst.segment(a, b)
        for x, y in boundary:
            if proper_intersection(seg, inst.segment(x, y)):
                return False
        if a in on_boundary and b in on_boundary:
            key = {a, b}
            if any(key == {x, y} for x, y in boundary):
                continue
            mid = ((P[a].x + P[b].x) / 2, (P[a].y + P[b].y) / 2)
            if _point_in_polygon(pocket, mid):
                return False
    return True
