"""Closed-form spanning bounds, the two quadrilateral/trigonometric lemma checks,
and classification of consecutive convex-chain vertices.

The lemma checks work in the frame where ``w`` lies in cone 0 of ``u``; the
caller rotates (and possibly mirrors) coordinates into that frame first.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import AlphaOutOfRange, BoundaryDegeneracy, DegenerateDenominator, PreconditionViolated
from .geometry import (
    EPS_GEOM,
    ConeSystem,
    Orientation,
    angle_between,
    canonical_triangle,
    cone_of,
    orientation,
)

LEMMA_SLACK = 1e-9


@dataclass(frozen=True)
class FamilySpec:
    x: int
    k: int
    m: int
    theta: float
    c_const: float

    @property
    def cones(self) -> ConeSystem:
        return ConeSystem(self.m, self.k, self.x, self.theta)


def family_constant(x: int, theta: float) -> float:
    if x == 2:
        return 1.0
    if x == 4:
        return 1.0 / (math.cos(theta / 2) - math.sin(theta / 2))
    return math.cos(theta / 4) / (math.cos(theta / 2) - math.sin(3 * theta / 4))


def family_of(m: int) -> FamilySpec:
    """Decompose ``m = 4k + x`` with ``k >= 1`` and attach the family constant."""
    cs = ConeSystem.from_count(m)
    return FamilySpec(cs.x, cs.k, cs.m, cs.theta, family_constant(cs.x, cs.theta))


def as_spec(spec) -> FamilySpec:
    if isinstance(spec, FamilySpec):
        return spec
    if isinstance(spec, int):
        return family_of(spec)
    return family_of(spec.m)


def path_bound(spec, alpha: float) -> float:
    """Multiplier on ``|uw|`` guaranteed for a visible pair at angle ``alpha``
    from the bisector of its canonical triangle."""
    spec = as_spec(spec)
    half = spec.theta / 2
    if not (-1e-12 <= alpha <= half + 1e-12):
        raise AlphaOutOfRange(f"alpha={alpha} outside [0, {half}]")
    alpha = min(max(alpha, 0.0), half)
    ca, sa = math.cos(alpha), math.sin(alpha)
    if spec.x == 2:
        return (1 + math.sin(half)) / math.cos(half) * ca + sa
    return ca / math.cos(half) + (ca * math.tan(half) + sa) * spec.c_const


def two_direction_bound(spec, alpha: float) -> float:
    """``min`` of the bounds seen from both endpoints when the reverse angle is theta/2 - alpha."""
    spec = as_spec(spec)
    return min(path_bound(spec, alpha), path_bound(spec, spec.theta / 2 - alpha))


def spanning_ratio_bound(spec) -> float:
    spec = as_spec(spec)
    half = spec.theta / 2
    if spec.x == 2:
        return 1 + 2 * math.sin(half)
    if spec.x == 4:
        return 1 + 2 * math.sin(half) / (math.cos(half) - math.sin(half))
    return math.cos(spec.theta / 4) / (math.cos(half) - math.sin(3 * spec.theta / 4))


# --- lemma checks --------------------------------------------------------


@dataclass(frozen=True)
class Lemma3Config:
    beta: float
    gamma: float
    theta: float


def _frame_checks(u, v, w, spec: FamilySpec) -> None:
    try:
        i = cone_of(u, w, spec.m)
    except BoundaryDegeneracy as exc:
        raise PreconditionViolated(str(exc)) from exc
    if i != 0:
        raise PreconditionViolated("w must lie in cone 0 of u")
    tri = canonical_triangle(u, w, spec.m)
    scale = math.dist(u[:2], w[:2])
    tol = EPS_GEOM * max(1.0, scale)
    # v inside the closed canonical triangle, left of u->w
    a, b = tri.corner_ccw, tri.corner_cw
    for p, q in ((u, b), (b, a), (a, u)):
        if (q[0] - p[0]) * (v[1] - p[1]) - (q[1] - p[1]) * (v[0] - p[0]) < -tol:
            raise PreconditionViolated("v is not inside the canonical triangle of u and w")
    if orientation(u, w, v) != Orientation.COUNTERCLOCKWISE:
        raise PreconditionViolated("v must lie to the left of uw")


def _corner_a(v, w, theta: float) -> tuple[float, float]:
    """Where the upward-left ray from ``v`` (parallel to the left side of cone 0) meets the horizontal through ``w``."""
    t = (w[1] - v[1]) / math.cos(theta / 2)
    return (v[0] - t * math.sin(theta / 2), w[1])


def lemma2_check(u, v, w, spec) -> bool:
    spec = as_spec(spec)
    _frame_checks(u, v, w, spec)
    try:
        tri = canonical_triangle(v, w, spec.m)
    except BoundaryDegeneracy as exc:
        raise PreconditionViolated(str(exc)) from exc
    c, d = tri.corner_ccw, tri.corner_cw
    cw, dw = math.dist(c, w[:2]), math.dist(d, w[:2])
    i = tri.cone
    if not (1 <= i <= spec.k - 1 or (i == spec.k and cw <= dw)):
        raise PreconditionViolated(f"w lies in cone {i} of v; the check needs 1..k-1, or k with |cw| <= |dw|")
    a = _corner_a(v, w, spec.theta)
    va, aw = math.dist(v[:2], a), math.dist(a, w[:2])
    vc, vd = math.dist(v[:2], c), math.dist(v[:2], d)
    slack = LEMMA_SLACK * math.dist(u[:2], w[:2])
    return max(vc + cw, vd + dw) <= va + aw + slack and max(cw, dw) <= aw + slack


def lemma3_rhs(cfg: Lemma3Config) -> float:
    half = cfg.theta / 2
    den = math.cos(half - cfg.beta) - math.sin(half + cfg.gamma)
    if den <= 0:
        raise DegenerateDenominator(f"denominator {den} <= 0")
    return (math.cos(cfg.gamma) - math.sin(cfg.beta)) / den


def lemma3_config(u, v, w, spec) -> Lemma3Config:
    """The (beta, gamma) angles of a configuration after checking its geometric hypotheses."""
    spec = as_spec(spec)
    _frame_checks(u, v, w, spec)
    try:
        tri = canonical_triangle(v, w, spec.m)
    except BoundaryDegeneracy as exc:
        raise PreconditionViolated(str(exc)) from exc
    if tri.cone == 0:
        raise PreconditionViolated("w must not lie in cone 0 of v")
    a = _corner_a(v, w, spec.theta)
    beta = angle_between((a[0] - w[0], a[1] - w[1]), (v[0] - w[0], v[1] - w[1]))
    return Lemma3Config(beta=beta, gamma=tri.alpha, theta=spec.theta)


def lemma3_sides(u, v, w, spec, c: float) -> tuple[float, float]:
    """Both sides of ``|vp| + c|pw| <= |va| + c|aw|``."""
    spec = as_spec(spec)
    lemma3_config(u, v, w, spec)
    tri = canonical_triangle(v, w, spec.m)
    y, z = tri.corner_ccw, tri.corner_cw
    p = y if math.dist(y, w[:2]) >= math.dist(z, w[:2]) else z
    a = _corner_a(v, w, spec.theta)
    lhs = math.dist(v[:2], p) + c * math.dist(p, w[:2])
    rhs = math.dist(v[:2], a) + c * math.dist(a, w[:2])
    return lhs, rhs


def lemma3_check(u, v, w, spec, c: float | None = None) -> bool:
    """Evaluate the displaced-path inequality with constant ``c`` (default: the family constant).

    Only the geometric hypotheses raise; whether ``c`` clears the threshold
    :func:`lemma3_rhs` is left to the caller, so sub-threshold constants can
    be probed.
    """
    spec = as_spec(spec)
    if c is None:
        c = spec.c_const
    lhs, rhs = lemma3_sides(u, v, w, spec, c)
    return lhs <= rhs + LEMMA_SLACK * math.dist(u[:2], w[:2])


# --- convex chain configurations ----------------------------------------


class ConfigType(enum.IntEnum):
    TypeI = 1
    TypeII = 2
    TypeIII = 3
    TypeIV = 4


def classify_configuration(prev, cur, spec, cw_corner_dist_cmp: int | None = None) -> ConfigType:
    """Configuration type of the chain step ``prev -> cur``.

    ``cw_corner_dist_cmp`` is the sign of ``|c cur| - |d cur|`` for the upper
    and lower corners ``c``, ``d`` of the canonical triangle of ``prev`` and
    ``cur``; it is only consulted in cone ``k`` and is computed when omitted.
    """
    spec = as_spec(spec)
    if prev[0] == cur[0] and prev[1] == cur[1]:
        raise ValueError("prev and cur must differ")
    i = cone_of(prev, cur, spec.m)
    if i == 0:
        return ConfigType.TypeIII if cur[0] >= prev[0] else ConfigType.TypeIV
    if 1 <= i < spec.k:
        return ConfigType.TypeII
    if i == spec.k:
        if spec.x == 2:
            return ConfigType.TypeI
        if cw_corner_dist_cmp is None:
            tri = canonical_triangle(prev, cur, spec.m)
            cw = math.dist(tri.corner_ccw, cur[:2])
            dw = math.dist(tri.corner_cw, cur[:2])
            cw_corner_dist_cmp = (cw > dw) - (cw < dw)
        return ConfigType.TypeI if cw_corner_dist_cmp > 0 else ConfigType.TypeII
    return ConfigType.TypeI


def rotate_to_cone_zero(points, cone: int, theta: float, mirror: bool = False):
    """Rotate so that cone ``cone`` becomes cone 0; optionally mirror left-right."""
    ang = cone * theta  # bearing of that cone's bisector; rotate counterclockwise by it
    c, s = math.cos(ang), math.sin(ang)
    out = []
    for p in points:
        x, y = p[0] * c - p[1] * s, p[0] * s + p[1] * c
        out.append((-x if mirror else x, y))
    return out

