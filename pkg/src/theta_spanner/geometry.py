"""Plane primitives: orientation, segment crossing, cones and canonical triangles.

Directions are measured as *bearings*: radians clockwise from the positive
y-axis, in ``[0, 2*pi)``.  Cone ``i`` of a vertex covers the bearings
``(i*theta - theta/2, i*theta + theta/2)``, so cone 0 is centred on
vertical-up and indices grow clockwise.

Points are plain ``(x, y)`` pairs; :class:`Point` is a named tuple so it can
be passed wherever a pair is expected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundaryDegeneracy, NotInCone, UnsupportedConeCount

EPS_GEOM = 1e-9
EPS_GP = 1e-9

TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float
    id: int = -1


class Segment(NamedTuple):
    """A segment between two instance points, stored by point id."""

    a: int
    b: int

    def key(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


@dataclass(frozen=True)
class ConeSystem:
    m: int
    k: int
    x: int
    theta: float

    @classmethod
    def from_count(cls, m: int) -> "ConeSystem":
        m = int(m)
        if m < 6:
            raise UnsupportedConeCount(f"need m = 4k + x with k >= 1 and x in 2..5, got m={m}")
        x = (m - 2) % 4 + 2
        return cls(m=m, k=(m - x) // 4, x=x, theta=TWO_PI / m)

    def bisector(self, i: int) -> tuple[float, float]:
        """Unit vector along the bisector of cone ``i``."""
        b = i * self.theta
        return (math.sin(b), math.cos(b))


def as_cones(cones) -> ConeSystem:
    if isinstance(cones, ConeSystem):
        return cones
    if isinstance(cones, (int, np.integer)):
        return ConeSystem.from_count(int(cones))
    return ConeSystem.from_count(cones.m)


@dataclass(frozen=True)
class CanonicalTriangle:
    apex: Point
    target: Point
    cone: int
    corner_ccw: tuple[float, float]
    corner_cw: tuple[float, float]
    far_mid: tuple[float, float]
    alpha: float

    @property
    def height(self) -> float:
        return math.dist(self.apex[:2], self.far_mid)


def cross(o, a, b) -> float:
    """Twice the signed area of triangle ``o, a, b``."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(p, q, r, eps: float = EPS_GEOM) -> Orientation:
    d = cross(p, q, r)
    if abs(d) <= eps:
        return Orientation.COLLINEAR
    return Orientation.COUNTERCLOCKWISE if d > 0 else Orientation.CLOCKWISE


def proper_intersection(s1, s2, eps: float = EPS_GEOM) -> bool:
    """True iff the open interiors of segments ``s1`` and ``s2`` cross.

    Each segment is a pair of points.  Touching at an endpoint, or any
    collinear contact, is not a proper intersection.
    """
    p, q = s1
    r, s = s2
    o1 = orientation(p, q, r, eps)
    o2 = orientation(p, q, s, eps)
    o3 = orientation(r, s, p, eps)
    o4 = orientation(r, s, q, eps)
    return o1 * o2 < 0 and o3 * o4 < 0


def bearing(dx: float, dy: float) -> float:
    return math.atan2(dx, dy) % TWO_PI


def angle_between(v1, v2) -> float:
    """Unsigned angle in ``[0, pi]`` between two vectors."""
    c = v1[0] * v2[1] - v1[1] * v2[0]
    d = v1[0] * v2[0] + v1[1] * v2[1]
    return math.atan2(abs(c), d)


def cone_of(u, v, cones, eps: float = EPS_GEOM) -> int:
    """Index of the cone of ``u`` whose open interior contains ``v``."""
    cs = as_cones(cones)
    dx, dy = v[0] - u[0], v[1] - u[1]
    length = math.hypot(dx, dy)
    if length == 0.0:
        raise ValueError("cone_of needs two distinct points")
    phi = bearing(dx, dy)
    t = (phi + cs.theta / 2) / cs.theta
    # distance from v to the nearest boundary ray
    nearest = round(t) * cs.theta - cs.theta / 2
    if length * abs(math.sin(phi - nearest)) <= eps and math.cos(phi - nearest) > 0:
        raise BoundaryDegeneracy(f"direction {tuple(u[:2])}->{tuple(v[:2])} lies on a cone boundary")
    return int(math.floor(t)) % cs.m


def canonical_triangle(u, w, cones, eps: float = EPS_GEOM) -> CanonicalTriangle:
    cs = as_cones(cones)
    i = cone_of(u, w, cs, eps)
    bx, by = cs.bisector(i)
    dx, dy = w[0] - u[0], w[1] - u[1]
    h = dx * bx + dy * by
    mid = (u[0] + h * bx, u[1] + h * by)
    # clockwise perpendicular of the bisector
    px, py = by, -bx
    half = h * math.tan(cs.theta / 2)
    corner_cw = (mid[0] + half * px, mid[1] + half * py)
    corner_ccw = (mid[0] - half * px, mid[1] - half * py)
    alpha = angle_between((dx, dy), (bx, by))
    return CanonicalTriangle(
        apex=_as_point(u),
        target=_as_point(w),
        cone=i,
        corner_ccw=corner_ccw,
        corner_cw=corner_cw,
        far_mid=mid,
        alpha=alpha,
    )


def projection_length(u, v, cone_index: int, cones, eps: float = EPS_GEOM) -> float:
    """Length of the projection of ``u->v`` onto the bisector of cone ``cone_index``."""
    cs = as_cones(cones)
    i = cone_of(u, v, cs, eps)
    if i != cone_index:
        raise NotInCone(f"point lies in cone {i}, not {cone_index}")
    bx, by = cs.bisector(i)
    return (v[0] - u[0]) * bx + (v[1] - u[1]) * by


@dataclass(frozen=True)
class GPViolation:
    kind: str  # "parallel-to-ray" | "perpendicular-to-bisector" | "collinear"
    ids: tuple[int, ...]
    direction: int | None = None

    def __str__(self) -> str:
        extra = "" if self.direction is None else f" (direction {self.direction})"
        return f"{self.kind} {self.ids}{extra}"


def validate_general_position(points: Sequence, cones, eps: float = EPS_GP) -> list[GPViolation]:
    """Report every general-position violation of ``points`` for the cone system.

    Checks pairs on a line parallel to a cone boundary ray, pairs on a line
    perpendicular to a cone bisector, and collinear triples.  Pair tests
    measure the perpendicular offset of one point from the line through the
    other; the triple test uses twice the signed area.
    """
    cs = as_cones(cones)
    pts = np.asarray([(p[0], p[1]) for p in points], dtype=float).reshape(-1, 2)
    n = len(pts)
    out: list[GPViolation] = []
    if n < 2:
        return out

    iu, ju = np.triu_indices(n, 1)
    d = pts[ju] - pts[iu]

    # Lines only care about direction modulo pi, so half the rays suffice
    # for even m; iterating all m is simpler and the duplicates are skipped.
    seen: set[tuple[str, int, int]] = set()
    for j in range(cs.m):
        ray = j * cs.theta + cs.theta / 2
        rx, ry = math.sin(ray), math.cos(ray)
        off = np.abs(d[:, 0] * ry - d[:, 1] * rx)
        for idx in np.nonzero(off <= eps)[0]:
            key = ("parallel-to-ray", int(iu[idx]), int(ju[idx]))
            if key not in seen:
                seen.add(key)
                out.append(GPViolation("parallel-to-ray", (int(iu[idx]), int(ju[idx])), j))
    for j in range(cs.m):
        bx, by = cs.bisector(j)
        off = np.abs(d[:, 0] * bx + d[:, 1] * by)
        for idx in np.nonzero(off <= eps)[0]:
            key = ("perpendicular-to-bisector", int(iu[idx]), int(ju[idx]))
            if key not in seen:
                seen.add(key)
                out.append(GPViolation("perpendicular-to-bisector", (int(iu[idx]), int(ju[idx])), j))

    for a in range(n - 2):
        rest = pts[a + 1:]
        rel = rest - pts[a]
        area = rel[:, None, 0] * rel[None, :, 1] - rel[:, None, 1] * rel[None, :, 0]
        bb, cc = np.nonzero(np.triu(np.abs(area) <= eps, 1))
        for b, c in zip(bb, cc):
            out.append(GPViolation("collinear", (a, a + 1 + int(b), a + 1 + int(c))))
    return out


def _as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    return Point(float(p[0]), float(p[1]))
