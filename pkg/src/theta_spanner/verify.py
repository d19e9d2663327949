"""Empirical verification of the spanning bounds on concrete instances."""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .bounds import (
    ConfigType,
    FamilySpec,
    as_spec,
    classify_configuration,
    path_bound,
    rotate_to_cone_zero,
    spanning_ratio_bound,
)
from .errors import InvalidInstance, PreconditionViolated
from .geometry import TWO_PI, cone_of, validate_general_position
from .theta import ThetaGraph, _cone_offsets, _splits, build_constrained_theta
from .visibility import ConvexChain, Instance, convex_chain, crossing_constraints, visibility_matrix

log = logging.getLogger(__name__)

RATIO_SLACK = 1e-7
GEN_JITTER = 1e-6


def worker_count() -> int:
    """Worker cap from ``THETA_SPANNER_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("THETA_SPANNER_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


# --- shortest paths -------------------------------------------------------


def _csr(n: int, edges: dict[tuple[int, int], float]):
    if not edges:
        return coo_matrix((n, n)).tocsr()
    uv = np.array(list(edges), dtype=int)
    w = np.array(list(edges.values()), dtype=float)
    return coo_matrix((w, (uv[:, 0], uv[:, 1])), shape=(n, n)).tocsr()


def shortest_paths(g: ThetaGraph, source: int) -> np.ndarray:
    """Single-source Euclidean shortest-path distances; ``inf`` when unreachable."""
    return dijkstra(_csr(g.n, g.edges), directed=False, indices=source)


def all_pairs(g: ThetaGraph) -> np.ndarray:
    return dijkstra(_csr(g.n, g.edges), directed=False)


def visibility_distances(inst: Instance, vis: np.ndarray) -> np.ndarray:
    iu, ju = np.nonzero(np.triu(vis, 1))
    d = np.linalg.norm(inst.coords[iu] - inst.coords[ju], axis=1)
    edges = dict(zip(zip(iu.tolist(), ju.tolist()), d.tolist()))
    return dijkstra(_csr(inst.n, edges), directed=False)


# --- per-pair report ------------------------------------------------------


@dataclass(frozen=True)
class PairRecord:
    u: int
    w: int
    delta: float
    euclid: float
    alpha: float
    bound: float
    ratio: float
    violation: bool


@dataclass
class RatioReport:
    m: int
    k: int
    x: int
    theta: float
    bound: float
    max_ratio: float
    max_bound: float
    argmax: tuple[int, int] | None
    n_pairs: int
    violations: list[PairRecord]
    vis_violations: list[tuple[int, int, float, float]]
    connectivity_ok: bool
    records: list[PairRecord] | None = None
    timing: dict[str, float] = field(default_factory=dict)
    graph: ThetaGraph | None = field(default=None, repr=False)

    @property
    def clean(self) -> bool:
        return not self.violations and not self.vis_violations and self.connectivity_ok


def pair_alphas(inst: Instance, spec: FamilySpec) -> np.ndarray:
    """``alpha[u, w]``: angle between ``uw`` and the bisector of the cone of ``u`` holding ``w``."""
    cs = spec.cones
    out = np.zeros((inst.n, inst.n))
    for u in range(inst.n):
        _, off, _ = _cone_offsets(inst.coords, u, cs)
        out[u] = np.abs(off - cs.theta / 2)
    np.fill_diagonal(out, 0.0)
    return out


def pair_ratio_report(inst: Instance, cones, *, per_pair: bool = False, check: bool = True) -> RatioReport:
    """Build the constrained theta-graph of ``inst`` and check every visible pair
    against its path bound and every pair against the spanning-ratio bound."""
    spec = as_spec(cones)
    t0 = time.perf_counter()
    vis = visibility_matrix(inst)
    g = build_constrained_theta(inst, spec.cones, check=check, vis=vis)
    t1 = time.perf_counter()
    dg = all_pairs(g)
    dvis = visibility_distances(inst, vis)
    t2 = time.perf_counter()

    ratio_bound = spanning_ratio_bound(spec)
    alphas = pair_alphas(inst, spec)
    records: list[PairRecord] = []
    violations: list[PairRecord] = []
    max_ratio, max_bound, argmax = 1.0, 0.0, None
    iu, ju = np.nonzero(np.triu(vis, 1))
    for u, w in zip(iu.tolist(), ju.tolist()):
        euclid = float(np.hypot(*(inst.coords[u] - inst.coords[w])))
        a_uw, a_wu = float(alphas[u, w]), float(alphas[w, u])
        b_uw, b_wu = path_bound(spec, a_uw), path_bound(spec, a_wu)
        bound, alpha = (b_uw, a_uw) if b_uw <= b_wu else (b_wu, a_wu)
        delta = float(dg[u, w])
        ratio = delta / euclid
        rec = PairRecord(u, w, delta, euclid, alpha, bound, ratio, ratio > bound * (1 + RATIO_SLACK))
        if per_pair:
            records.append(rec)
        if rec.violation:
            violations.append(rec)
        if argmax is None or ratio > max_ratio:
            max_ratio, argmax = ratio, (u, w)
        max_bound = max(max_bound, bound)

    finite_vis = np.isfinite(dvis)
    connectivity_ok = bool(np.array_equal(finite_vis, np.isfinite(dg)))
    vis_violations = []
    bad = finite_vis & ~(dg <= ratio_bound * dvis * (1 + RATIO_SLACK))
    for u, w in zip(*np.nonzero(np.triu(bad, 1))):
        vis_violations.append((int(u), int(w), float(dg[u, w]), float(dvis[u, w])))

    return RatioReport(
        m=spec.m,
        k=spec.k,
        x=spec.x,
        theta=spec.theta,
        bound=ratio_bound,
        max_ratio=max_ratio,
        max_bound=max_bound,
        argmax=argmax,
        n_pairs=len(iu),
        violations=violations,
        vis_violations=vis_violations,
        connectivity_ok=connectivity_ok,
        records=records if per_pair else None,
        timing={"build": t1 - t0, "paths": t2 - t1, "check": time.perf_counter() - t2},
        graph=g,
    )


# --- instances ------------------------------------------------------------


def _fixture_coords(theta: float, eps: float) -> list[tuple[float, float]]:
    half = theta / 2
    w = (math.sin(half - eps), math.cos(half - eps))
    h = w[1] * (1 - eps)
    v = ((-math.tan(half) + eps) * h, h)
    x = (w[0] - v[0], w[1] - v[1])
    return [(0.0, 0.0), w, v, x]


def tightness_fixture(spec, eps: float = 1e-3) -> Instance:
    """Near-worst-case instance for a ``4k + 2`` cone count.

    Points are ``u`` (id 0) at the origin, ``w`` (id 1) at angle
    ``theta/2 - eps`` from the bisector of cone 0, ``v`` (id 2) just inside
    the upper-left corner of the canonical triangle of ``u`` and ``w``, and
    ``x`` (id 3), the reflection of ``v`` through the midpoint of ``uw``.
    ``v`` blocks the cone of ``u`` and ``x`` blocks the opposite cone of
    ``w``, so ``uw`` is not an edge and every ``u``-``w`` path bends at a
    corner.
    """
    spec = as_spec(spec)
    if spec.x != 2:
        raise PreconditionViolated("the tightness fixture is defined for m = 4k + 2 only")
    if not 0 < eps < spec.theta / 2:
        raise PreconditionViolated("eps must lie in (0, theta/2); the fixture is near-tight only for small eps")
    return Instance.from_coords(_fixture_coords(spec.theta, eps))


def random_instance(n: int, n_constraints: int, rng, cones=None, max_tries: int = 50) -> Instance:
    """Uniform points in the unit square with up to ``n_constraints`` planar constraints.

    With ``cones`` given, general position is enforced by jittering the
    offending points and retrying.
    """
    rng = np.random.default_rng(rng)
    pts = rng.random((n, 2))
    if cones is not None:
        for _ in range(max_tries):
            bad = validate_general_position(pts, cones)
            if not bad:
                break
            for v in bad:
                for i in v.ids:
                    pts[i] += rng.uniform(-GEN_JITTER, GEN_JITTER, 2)
        else:
            raise InvalidInstance("could not reach general position")
    inst = Instance.from_coords(pts)
    cons: list[tuple[int, int]] = []
    keys = set()
    attempts = 0
    while len(cons) < n_constraints and attempts < 50 * max(n_constraints, 1) and n >= 2:
        attempts += 1
        a, b = sorted(rng.choice(n, 2, replace=False).tolist())
        if (a, b) in keys:
            continue
        trial = Instance(inst.points, cons + [(a, b)])
        if crossing_constraints(trial):
            continue
        cons.append((a, b))
        keys.add((a, b))
    return Instance(inst.points, cons)


# --- convex chains in the spanning argument --------------------------------


@dataclass(frozen=True)
class ChainCase:
    u: int
    w: int
    v0: int
    chain: ConvexChain
    frame_coords: dict[int, tuple[float, float]]
    types: list[ConfigType]


def _subcone_index(inst: Instance, u: int, w: int, cone: int, cs) -> int:
    cuts = _splits(inst, u, cs).get(cone, [])
    for j, (_, _, p) in enumerate(cuts):
        if p == w:
            return j
    off = (math.atan2(inst.points[w].x - inst.points[u].x, inst.points[w].y - inst.points[u].y)
           - (cone * cs.theta - cs.theta / 2)) % TWO_PI
    return sum(1 for c in cuts if c[0] <= off)


def spanning_chain_cases(inst: Instance, spec, graph: ThetaGraph | None = None, vis: np.ndarray | None = None):
    """Yield the convex chain of every visible non-edge pair as used in the inductive argument.

    For a visible pair ``(u, w)`` that is not an edge, ``v0`` is the graph
    neighbour chosen in the subcone of ``u`` containing ``w``; the chain runs
    from ``v0`` to ``w`` inside triangle ``v0 w u``.  Coordinates are rotated
    so that ``w`` is in cone 0 of ``u`` and mirrored if ``v0`` is right of
    ``uw``; the chain steps are classified in that frame.
    """
    spec = as_spec(spec)
    cs = spec.cones
    if vis is None:
        vis = visibility_matrix(inst)
    if graph is None:
        graph = build_constrained_theta(inst, cs, vis=vis)
    chosen: dict[tuple[int, int, int], int] = {}
    for (a, b), srcs in graph.provenance.items():
        for src, i, j in srcs:
            chosen[(src, i, j)] = b if src == a else a
    P = inst.points
    for u in range(inst.n):
        for w in range(inst.n):
            if u == w or not vis[u, w] or graph.has_edge(u, w):
                continue
            i = cone_of(P[u], P[w], cs)
            j = _subcone_index(inst, u, w, i, cs)
            v0 = chosen.get((u, i, j))
            if v0 is None or v0 == w:
                continue
            chain = convex_chain(inst, v0, w, u)
            rot = rotate_to_cone_zero([P[p] for p in range(inst.n)], i, cs.theta)
            ou, ow, ov = rot[u], rot[w], rot[v0]
            mirror = (ow[0] - ou[0]) * (ov[1] - ou[1]) - (ow[1] - ou[1]) * (ov[0] - ou[0]) < 0
            if mirror:
                rot = [(-x, y) for x, y in rot]
            frame = {p: rot[p] for p in chain.vertices + [u]}
            types = [
                classify_configuration(frame[a], frame[b], spec)
                for a, b in zip(chain.vertices, chain.vertices[1:])
            ]
            yield ChainCase(u, w, v0, chain, frame, types)


# --- adversarial search ---------------------------------------------------


@dataclass
class SearchResult:
    instance: Instance
    ratio: float
    bound: float
    violation: bool
    restart: int

    def __iter__(self):
        return iter((self.instance, self.ratio))


def _achieved(inst: Instance, spec: FamilySpec) -> float | None:
    """Max visible-pair ratio, or ``None`` when the instance is unusable."""
    try:
        inst.validate()
        if validate_general_position(inst.points, spec.cones):
            return None
        return pair_ratio_report(inst, spec, check=False).max_ratio
    except (InvalidInstance, ValueError):
        return None


def _climb_points(inst, score, spec, rng, iterations):
    step = 0.05
    fails = 0
    for _ in range(iterations):
        i = int(rng.integers(inst.n))
        coords = inst.coords.copy()
        coords[i] += rng.normal(0.0, step, 2)
        trial = Instance.from_coords(coords, inst.constraints)
        s = _achieved(trial, spec)
        if s is not None and s > score:
            inst, score, fails = trial, s, 0
        else:
            fails += 1
            if fails >= 40:
                step = max(step * 0.5, 1e-6)
                fails = 0
    return inst, score


def _climb_constraints(inst, score, spec, rng, iterations, max_constraints):
    for _ in range(iterations):
        cons = list(inst.constraints)
        if cons and (len(cons) >= max_constraints or rng.random() < 0.3):
            cons.pop(int(rng.integers(len(cons))))
        else:
            a, b = sorted(rng.choice(inst.n, 2, replace=False).tolist())
            if (a, b) in cons:
                continue
            cons.append((a, b))
        trial = Instance(inst.points, cons)
        s = _achieved(trial, spec)
        if s is not None and s > score:
            inst, score = trial, s
    return inst, score


def adversarial_search(
    spec,
    seed: int,
    iterations: int,
    *,
    n_points: int = 6,
    max_constraints: int = 0,
    restarts: int = 4,
) -> SearchResult:
    """Hill-climb toward instances with a large achieved spanning ratio.

    The iteration budget is shared by ``restarts`` independent climbs, each
    with its own seed derived from ``seed``.  The first restart starts from
    the tightness fixture geometry when the cone count is even; the others
    start from random points.  Each climb perturbs one point at a time and
    keeps strict improvements.  With ``max_constraints > 0`` a climb then
    continues with constraint insertions and removals, so its result never
    falls below the point-only climb from the same seed.
    """
    spec = as_spec(spec)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    restarts = max(1, min(restarts, iterations))
    per = iterations // restarts
    seqs = np.random.SeedSequence(seed).spawn(restarts)

    def run(r: int):
        rng_pts, rng_cons = (np.random.default_rng(s) for s in seqs[r].spawn(2))
        if r == 0 and spec.m % 2 == 0:
            inst = Instance.from_coords(_fixture_coords(spec.theta, 1e-3))
        else:
            inst = random_instance(n_points, 0, rng_pts, spec.cones)
        score = _achieved(inst, spec) or 1.0
        inst, score = _climb_points(inst, score, spec, rng_pts, per + (1 if r < iterations % restarts else 0))
        if max_constraints > 0:
            inst, score = _climb_constraints(inst, score, spec, rng_cons, per, max_constraints)
        return inst, score

    with ThreadPoolExecutor(max_workers=min(worker_count(), restarts)) as pool:
        results = list(pool.map(run, range(restarts)))
    best = max(range(restarts), key=lambda r: (results[r][1], -r))
    inst, ratio = results[best]
    bound = spanning_ratio_bound(spec)
    violation = ratio > bound + 1e-9
    if violation:
        log.error("achieved ratio %.12f exceeds the bound %.12f", ratio, bound)
    return SearchResult(inst, ratio, bound, violation, best)
