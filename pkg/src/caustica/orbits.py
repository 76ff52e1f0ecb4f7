"""Periodic directions from a point, their counts, and extremal paths.

A shot from p = (a, b) with direction angle phi rides the caustic

    s(phi) = c^2 cos^2 phi + (a sin phi - b cos phi)^2,

and is periodic with period dividing n exactly when the Betti
coordinate beta2(s/c^2) is a multiple of 1/n (odd n forces an elliptic
caustic).  The slope circle splits at the focal transitions s = c^2
(slopes tan phi = b/(a -+ c)) and at the critical slopes
tan 2phi = 2ab/(a^2-b^2-c^2), where s reaches the parameters M, m of
the two confocal conics through p; on each remaining arc beta2 is
strictly monotone, so every level k/n is found by bracketed
root-finding and certified by simulating the n bounces.  Levels with
1 - lambda below a resolution band correspond to caustics within
~4^(-n) of the focal degeneration; they are provably present by
monotonicity and the exact limit beta2 -> 1/2 and are counted by
integer arithmetic, since no double-precision direction can represent
them.  The resulting direction counts grow linearly in n, with odd
slope 2 - 4 beta2(M/c^2).

Connecting trajectories between two interior points are found by
maximizing total length over bounce angles (the maximum satisfies the
reflection law at every vertex); boomerang, hole, and angle-pair scans
bracket sign changes of passage distances over a direction grid and
re-simulate every hit.
"""

import cmath
import math
import random as _random
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, fsolve, minimize_scalar

from .conics import (CausticKind, CausticParam, PhasePoint, Shot, Trajectory,
                     advance, caustic_of_line, classify_caustic, first_hit,
                     unit)
from .periods import BettiModel

# Certification bound on the phase-space closure defect of a returned
# periodic direction.
CERT_TOL = 1e-6
# Width |lambda - 1| of the focal boundary layer whose levels are
# counted exactly instead of root-found.
LAYER_BAND = 1e-6
# Default number of direction cells for the passage scans.
DEFAULT_GRID = 4096
_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class CausticExtrema:
    M: float
    m: float


@dataclass(frozen=True)
class PeriodicDirection:
    direction: tuple
    period: int
    caustic: CausticParam
    closure_error: float


class CountBreakdown(NamedTuple):
    total: int
    certified: int
    layer: int


@dataclass(frozen=True)
class BoomerangHit:
    direction: tuple
    bounce: int
    kind: int
    miss: float


@dataclass(frozen=True)
class HoleHit:
    direction: tuple
    m: int
    n: int
    miss_p: float
    miss_h: float


@dataclass(frozen=True)
class AnglePair:
    dir1: tuple
    dir2: tuple
    period1: int
    period2: int


_MODELS = {}


def _betti_model(e):
    model = _MODELS.get(e.c)
    if model is None:
        model = BettiModel(e)
        _MODELS[e.c] = model
    return model


def caustic_extrema(e, p):
    """Parameters of the two confocal conics through interior p: the
    roots of s^2 - (a^2+b^2+c^2) s + a^2 c^2 = 0, which are the max M
    (elliptic) and min m (hyperbolic) of s over all shot slopes."""
    a, b = p
    if a * a + b * b / e.b2 >= 1.0 - 1e-12:
        raise ValueError("point must be strictly interior")
    tr = a * a + b * b + e.c2
    det = a * a * e.c2
    disc = max(0.0, tr * tr - 4.0 * det)
    rt = math.sqrt(disc)
    return CausticExtrema(M=0.5 * (tr + rt), m=0.5 * (tr - rt))


def _s_of_phi(a, b, c2, phi):
    co, si = math.cos(phi), math.sin(phi)
    d = a * si - b * co
    return c2 * co * co + d * d


def _breakpoints(e, p):
    """Focal transitions and critical slopes of s(phi), as angles in
    [0, pi): the lines through the upper/lower focus and the tangents
    at p to the two confocal conics through p."""
    a, b = p
    pts = set()
    for sgn in (1.0, -1.0):
        den = a - sgn * e.c
        pts.add(math.atan2(b, den) % math.pi)
    half = 0.5 * math.atan2(2.0 * a * b, a * a - b * b - e.c2)
    pts.add(half % math.pi)
    pts.add((half + 0.5 * math.pi) % math.pi)
    return sorted(pts)


def branch_intervals(e, p):
    """Maximal open slope arcs of uniform caustic kind, as a list of
    (phi_lo, phi_hi, kind) with angles in [0, pi) and the last arc
    possibly wrapping; kind decided at the midpoint."""
    a, b = p
    cuts = _breakpoints(e, p)
    out = []
    k = len(cuts)
    for j in range(k):
        lo = cuts[j]
        hi = cuts[(j + 1) % k] + (math.pi if j == k - 1 else 0.0)
        if hi - lo < 1e-13:
            continue
        mid = 0.5 * (lo + hi)
        s = _s_of_phi(a, b, e.c2, mid)
        lam = s / e.c2
        if lam > 1.0:
            kind = CausticKind.ELLIPTIC
        else:
            kind = CausticKind.HYPERBOLIC
        out.append((lo, hi, kind))
    return out


def closure_error(e, p, v, n):
    """Phase-space defect of the claim "the shot (p, v) has period n":
    distance of p from the outgoing line after n bounces plus the
    direction mismatch."""
    vx, vy = unit(v[0], v[1])
    x = first_hit(e, Shot(p[0], p[1], vx, vy))
    for _ in range(n - 1):
        x = advance(e, x)
    cross = x.vx * (p[1] - x.y) - x.vy * (p[0] - x.x)
    return abs(cross) + math.hypot(x.vx - vx, x.vy - vy)


def _axis_directions(e, p, n):
    """Two-bounce axis orbits through p, which close for every even n.
    A boundary p contributes only its inward axis direction."""
    if n % 2:
        return []
    a, b = p
    on_boundary = abs(e.boundary_residual(a, b)) < 1e-12

    def inward_ok(vx, vy):
        return not on_boundary or vx * a + vy * b / e.b2 < 0.0

    out = []
    if abs(b) <= _AXIS_TOL and abs(a) <= 1.0:
        caustic = classify_caustic(e, e.c2)
        for vx in (1.0, -1.0):
            if not inward_ok(vx, 0.0):
                continue
            err = closure_error(e, p, (vx, 0.0), n)
            if err < CERT_TOL:
                out.append(PeriodicDirection((vx, 0.0), n, caustic, err))
    if abs(a) <= _AXIS_TOL and abs(b) <= math.sqrt(e.b2):
        caustic = classify_caustic(e, 0.0)
        for vy in (1.0, -1.0):
            if not inward_ok(0.0, vy):
                continue
            err = closure_error(e, p, (0.0, vy), n)
            if err < CERT_TOL:
                out.append(PeriodicDirection((0.0, vy), n, caustic, err))
    return out


def _monotone_pieces(e, p):
    """Monotone-beta2 slope pieces trimmed at the focal boundary layer.

    Returns (pieces, sides): pieces are (phi_lo, phi_hi, kind) with
    |lambda - 1| >= LAYER_BAND throughout; sides are (kind, beta_edge)
    records of every trimmed approach to a focal transition, for the
    exact counting of the layer levels between beta_edge and 1/2.
    """
    a, b = p
    c2 = e.c2
    model = _betti_model(e)

    def lam(phi):
        return _s_of_phi(a, b, c2, phi) / c2

    pieces = []
    sides = []
    for lo, hi, kind in branch_intervals(e, p):
        target = 1.0 + LAYER_BAND if kind is CausticKind.ELLIPTIC else 1.0 - LAYER_BAND
        g = lambda phi: lam(phi) - target
        llo, lhi = lo, hi
        glo, ghi = g(lo), g(hi)
        gmid = g(0.5 * (lo + hi))
        if gmid == 0.0 or (gmid > 0) != (kind is CausticKind.ELLIPTIC):
            # The whole arc sits inside the layer (p near a focal line).
            sides.append((kind, model.beta2(lam(0.5 * (lo + hi)))))
            continue
        if (glo > 0) != (gmid > 0):
            llo = brentq(g, lo, 0.5 * (lo + hi), xtol=1e-14)
            sides.append((kind, model.beta2(lam(llo))))
        if (ghi > 0) != (gmid > 0):
            lhi = brentq(g, 0.5 * (lo + hi), hi, xtol=1e-14)
            sides.append((kind, model.beta2(lam(lhi))))
        if lhi - llo > 1e-13:
            pieces.append((llo, lhi, kind))
    return pieces, sides


def _line_roots(e, p, n):
    """Slope roots of beta2(lambda(phi)) = k/n on the monotone pieces,
    with their caustics, plus the exact count of layer levels (lines)
    unreachable in double precision."""
    a, b = p
    c2 = e.c2
    model = _betti_model(e)
    pieces, sides = _monotone_pieces(e, p)
    odd = bool(n % 2)

    def beta_at(phi):
        return model.beta2(_s_of_phi(a, b, c2, phi) / c2)

    roots = []
    for lo, hi, kind in pieces:
        if odd and kind is not CausticKind.ELLIPTIC:
            continue
        vlo, vhi = beta_at(lo), beta_at(hi)
        va, vb = min(vlo, vhi), max(vlo, vhi)
        kmin = int(math.floor(va * n)) + 1
        kmax = int(math.ceil(vb * n)) - 1
        for k in range(kmin, kmax + 1):
            if k <= 0 or 2 * k >= n:
                continue
            tgt = k / n
            if not va < tgt < vb:
                continue
            phi = brentq(lambda t: beta_at(t) - tgt, lo, hi, xtol=1e-13)
            s = _s_of_phi(a, b, c2, phi)
            roots.append((phi, s))
    layer_lines = 0
    for kind, edge in sides:
        if odd and kind is not CausticKind.ELLIPTIC:
            continue
        kmin = int(math.floor(edge * n)) + 1
        kmax = (n - 1) // 2
        layer_lines += max(0, kmax - kmin + 1)
    return roots, layer_lines


def _certified(e, p, n, roots):
    out = list(_axis_directions(e, p, n))
    for phi, s in roots:
        caustic = classify_caustic(e, s)
        for ang in (phi, phi + math.pi):
            v = (math.cos(ang), math.sin(ang))
            err = closure_error(e, p, v, n)
            if err < CERT_TOL:
                out.append(PeriodicDirection(v, n, caustic, err))
    out.sort(key=lambda d: math.atan2(d.direction[1], d.direction[0]) % (2.0 * math.pi))
    return out


def find_periodic_directions(e, p, n, grid=DEFAULT_GRID):
    """All certified unit directions from p with orbit period dividing
    n, both orientations of every tangent line, sorted by angle.

    Directions whose caustics fall in the focal boundary layer are not
    representable and are omitted here; count_periodic adds their exact
    number.  grid is accepted for interface compatibility; the search
    is exact on monotone slope pieces.
    """
    if n < 2:
        raise ValueError("period search needs n >= 2")
    roots, _ = _line_roots(e, p, n)
    return _certified(e, p, n, roots)


def count_periodic(e, p, n, grid=DEFAULT_GRID):
    """Number of periodic directions (period dividing n) from p:
    certified directions plus the exact count of focal-layer levels
    (two directions per unrepresentable tangent line)."""
    if n < 2:
        raise ValueError("period search needs n >= 2")
    roots, layer_lines = _line_roots(e, p, n)
    dirs = _certified(e, p, n, roots)
    return CountBreakdown(len(dirs) + 2 * layer_lines, len(dirs), 2 * layer_lines)


def predicted_count(e, p, n):
    """Linear-law prediction for the number of period-dividing-n
    directions: c_o n (odd) or c_e n (even) with
    c_o = 2 - 4 beta2(M/c^2), c_e = 2(1 - beta2(M/c^2) - beta2(m/c^2));
    for p on an axis (degenerate extrema) the coefficient falls back to
    the total variation of beta2 over the admissible slope arcs."""
    a, b = p
    if math.hypot(a - e.c, b) < 1e-9 or math.hypot(a + e.c, b) < 1e-9:
        raise ValueError("prediction undefined at a focus")
    ex = caustic_extrema(e, p)
    model = _betti_model(e)
    odd = bool(n % 2)
    generic = abs(a) > 1e-9 and abs(b) > 1e-9
    if generic:
        bM = model.beta2(ex.M / e.c2)
        if odd:
            return (2.0 - 4.0 * bM) * n
        bm = model.beta2(ex.m / e.c2)
        return 2.0 * (1.0 - bM - bm) * n
    tv_ell, tv_hyp = _betti_variation(e, p)
    if odd:
        return 2.0 * tv_ell * n
    return (tv_ell + tv_hyp) * n


def _betti_variation(e, p):
    """Total variation of beta2 over the elliptic and hyperbolic slope
    arcs, each monotone piece contributing |1/2 - extreme value|."""
    a, b = p
    c2 = e.c2
    model = _betti_model(e)
    tv = {CausticKind.ELLIPTIC: 0.0, CausticKind.HYPERBOLIC: 0.0}
    for lo, hi, kind in branch_intervals(e, p):
        res = minimize_scalar(
            lambda t: (1.0 if kind is CausticKind.ELLIPTIC else -1.0)
            * -_s_of_phi(a, b, c2, t),
            bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12})
        s_ext = _s_of_phi(a, b, c2, res.x)
        lam = s_ext / c2
        if abs(lam - 1.0) < 1e-9:
            continue
        tv[kind] += 2.0 * (0.5 - model.beta2(lam))
    return tv[CausticKind.ELLIPTIC], tv[CausticKind.HYPERBOLIC]


class ConvergenceError(RuntimeError):
    """Length maximization failed to settle; .best holds the candidate."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


def _path_length(e, p1, p2, thetas):
    pts = [p1] + [e.boundary_point(t) for t in thetas] + [p2]
    return sum(math.hypot(q[0] - r[0], q[1] - r[1])
               for q, r in zip(pts, pts[1:]))


def connecting_trajectory(e, p1, p2, n, seed=0, starts=8, max_sweeps=400):
    """Billiard path p1 -> (n-1 bounces) -> p2 by total-length
    maximization (the maximum satisfies the reflection law at every
    bounce).  Coordinate ascent over bounce angles from `starts` random
    initializations plus wound interpolations locates the basin; a
    Newton solve of the stationarity system (tangential component of
    the angle defect at every bounce) then polishes to machine
    precision.  Returns a Trajectory whose points carry the outgoing
    direction at each bounce."""
    if n < 1:
        raise ValueError("need n >= 1 segments")
    if n == 1:
        raise ValueError("a single segment has no bounce to optimize")
    rng = _random.Random(seed)
    a1 = math.atan2(p1[1], p1[0])
    a2 = math.atan2(p2[1], p2[0])
    inits = []
    for w in (1, 2, -1):
        end = a2 + 2.0 * math.pi * w
        inits.append([a1 + (end - a1) * (j + 1) / n for j in range(n - 1)])
    for _ in range(starts):
        inits.append([rng.uniform(0.0, 2.0 * math.pi) for _ in range(n - 1)])

    best_len, best_th = -1.0, None
    for th in inits:
        th = list(th)
        cur = _path_length(e, p1, p2, th)
        for _ in range(max_sweeps):
            for j in range(n - 1):
                prev = p1 if j == 0 else e.boundary_point(th[j - 1])
                nxt = p2 if j == n - 2 else e.boundary_point(th[j + 1])

                def neg_gain(t):
                    q = e.boundary_point(t)
                    return -(math.hypot(q[0] - prev[0], q[1] - prev[1])
                             + math.hypot(q[0] - nxt[0], q[1] - nxt[1]))

                res = minimize_scalar(neg_gain, bounds=(th[j] - 1.2, th[j] + 1.2),
                                      method="bounded", options={"xatol": 1e-14})
                if -res.fun > -neg_gain(th[j]):
                    th[j] = res.x
            new = _path_length(e, p1, p2, th)
            if new - cur < 1e-12 * max(1.0, new):
                cur = new
                break
            cur = new
        if cur > best_len:
            best_len, best_th = cur, th

    b = math.sqrt(e.b2)

    def grad(th):
        chain = [p1] + [e.boundary_point(t) for t in th] + [p2]
        out = []
        for j in range(n - 1):
            q = chain[j + 1]
            ux, uy = unit(q[0] - chain[j][0], q[1] - chain[j][1])
            wx, wy = unit(chain[j + 2][0] - q[0], chain[j + 2][1] - q[1])
            out.append((ux - wx) * (-math.sin(th[j]))
                       + (uy - wy) * (b * math.cos(th[j])))
        return out

    def worst_residual(th):
        chain = [p1] + [e.boundary_point(t) for t in th] + [p2]
        return max(reflection_residual(e, chain[j], chain[j + 1], chain[j + 2])
                   for j in range(n - 1))

    sol, _, ier, _ = fsolve(grad, best_th, full_output=True, xtol=1e-13)
    if ier == 1 and worst_residual(list(sol)) < worst_residual(best_th):
        best_th = list(sol)

    pts = []
    verts = [e.boundary_point(t) for t in best_th]
    chain = verts + [p2]
    for j, q in enumerate(verts):
        nxt = chain[j + 1]
        vx, vy = unit(nxt[0] - q[0], nxt[1] - q[1])
        pts.append(PhasePoint(q[0], q[1], vx, vy))
    traj = Trajectory(points=pts, caustic=caustic_of_line(
        e, p1, _slope(verts[0][0] - p1[0], verts[0][1] - p1[1])))
    if worst_residual(best_th) > 1e-8:
        raise ConvergenceError("length maximization did not converge", traj)
    return traj


def _slope(dx, dy):
    return math.inf if dx == 0.0 else dy / dx


def reflection_residual(e, q_prev, q, q_next):
    """Angle defect of the reflection law at boundary point q between
    the incoming segment from q_prev and the outgoing one to q_next."""
    ux, uy = unit(q[0] - q_prev[0], q[1] - q_prev[1])
    wx, wy = unit(q_next[0] - q[0], q_next[1] - q[1])
    nx, ny = unit(q[0], q[1] / e.b2)
    return abs((ux * nx + uy * ny) + (wx * nx + wy * ny))


def segment_caustics(e, vertices):
    """Caustic parameter of every segment of a polygonal path."""
    out = []
    for q, r in zip(vertices, vertices[1:]):
        out.append(caustic_of_line(e, q, _slope(r[0] - q[0], r[1] - q[1])).s)
    return out


def _passage(x, p):
    """Signed distance of p from the line of the outgoing segment at x,
    and the position of the foot along the direction."""
    cross = x.vx * (p[1] - x.y) - x.vy * (p[0] - x.x)
    along = (p[0] - x.x) * x.vx + (p[1] - x.y) * x.vy
    return cross, along


def boomerang_scan(e, p, n_max, tol, grid=DEFAULT_GRID):
    """Shots from p whose k-th segment passes through p again, k <= n_max,
    classified as retraced (kind 2, direction reversed) or crossing on
    the other tangent line (kind 3).  Sign changes of the passage
    distance over a direction grid are refined by bisection and each
    hit is certified by re-simulation."""
    a, b = p
    if a * a + b * b / e.b2 >= 1.0 - 1e-12:
        raise ValueError("point must be strictly interior")

    def segments(phi):
        x = first_hit(e, Shot(a, b, math.cos(phi), math.sin(phi)))
        out = [x]
        for _ in range(n_max - 1):
            x = advance(e, x)
            out.append(x)
        return out

    def dk(phi, k):
        return _passage(segments(phi)[k], p)[0]

    hits = []
    thetas = np.linspace(0.0, 2.0 * math.pi, grid + 1)
    segs = [segments(t) for t in thetas[:-1]]
    for k in range(1, n_max):
        vals = [_passage(s[k], p)[0] for s in segs]
        for j in range(grid):
            v0, v1 = vals[j], vals[(j + 1) % grid]
            if v0 == 0.0 or v0 * v1 >= 0.0:
                continue
            lo, hi = thetas[j], thetas[j + 1]
            try:
                phi = brentq(lambda t: dk(t, k), lo, hi, xtol=1e-14)
            except ValueError:
                continue
            seg = segments(phi)[k]
            cross, along = _passage(seg, p)
            nxt = advance(e, seg)
            seg_len = math.hypot(nxt.x - seg.x, nxt.y - seg.y)
            if abs(cross) > tol or not -tol <= along <= seg_len + tol:
                continue
            v0x, v0y = math.cos(phi), math.sin(phi)
            dot = seg.vx * v0x + seg.vy * v0y
            crossdir = seg.vx * v0y - seg.vy * v0x
            if dot > 0.0 and abs(crossdir) < 1e-6:
                continue  # periodic passage, not a boomerang
            kind = 2 if (dot < 0.0 and abs(crossdir) < 1e-6) else 3
            hits.append(BoomerangHit((v0x, v0y), k, kind, abs(cross)))
    hits.sort(key=lambda h: (math.atan2(h.direction[1], h.direction[0]) % (2 * math.pi), h.bounce))
    dedup = []
    for h in hits:
        if dedup and abs(math.atan2(dedup[-1].direction[1], dedup[-1].direction[0])
                         - math.atan2(h.direction[1], h.direction[0])) < 1e-10 \
                and dedup[-1].bounce == h.bounce:
            continue
        dedup.append(h)
    return dedup


def hole_scan(e, p1, p2, h, n_max, tol, grid=DEFAULT_GRID):
    """Shots from p1 passing through p2 at bounce count m and later
    within tol of the boundary point h at bounce n <= n_max.

    The passage through p2 is solved exactly (bracket and bisect per
    m); the hole condition is then checked on the resulting orbit.  The
    focal pair p1, p2 = (+-c, 0) is rejected: every chord through one
    focus passes through the other, the excluded exceptional case.
    """
    if (math.hypot(p1[0] - e.c, p1[1]) < 1e-9 and math.hypot(p2[0] + e.c, p2[1]) < 1e-9) or \
       (math.hypot(p1[0] + e.c, p1[1]) < 1e-9 and math.hypot(p2[0] - e.c, p2[1]) < 1e-9):
        raise ValueError("p1, p2 are the foci: excluded exceptional case")
    if abs(e.boundary_residual(h[0], h[1])) > 1e-9:
        raise ValueError("h must lie on the boundary")
    a, b = p1

    def segments(phi):
        x = first_hit(e, Shot(a, b, math.cos(phi), math.sin(phi)))
        out = [x]
        for _ in range(n_max - 1):
            x = advance(e, x)
            out.append(x)
        return out

    hits = []
    thetas = np.linspace(0.0, 2.0 * math.pi, grid + 1)
    segs = [segments(t) for t in thetas[:-1]]
    for m in range(1, n_max):
        vals = [_passage(s[m], p2)[0] for s in segs]
        for j in range(grid):
            v0, v1 = vals[j], vals[(j + 1) % grid]
            if v0 == 0.0 or v0 * v1 >= 0.0:
                continue
            try:
                phi = brentq(lambda t: _passage(segments(t)[m], p2)[0],
                             thetas[j], thetas[j + 1], xtol=1e-14)
            except ValueError:
                continue
            orbit = segments(phi)
            cross, along = _passage(orbit[m], p2)
            nxt = advance(e, orbit[m])
            seg_len = math.hypot(nxt.x - orbit[m].x, nxt.y - orbit[m].y)
            if abs(cross) > tol or not -tol <= along <= seg_len + tol:
                continue
            for n in range(m + 1, n_max + 1):
                x = orbit[n - 1]
                miss = math.hypot(x.x - h[0], x.y - h[1])
                if miss <= tol:
                    hits.append(HoleHit((math.cos(phi), math.sin(phi)),
                                        m, n, abs(cross), miss))
    hits.sort(key=lambda r: (math.atan2(r.direction[1], r.direction[0]) % (2 * math.pi), r.m, r.n))
    return hits


def angle_pair_scan(e, p, alpha, n_max, tol, grid=DEFAULT_GRID):
    """Pairs of periodic directions from p separated by exactly the
    angle alpha, assembled from the certified period-dividing-n lists
    for n <= n_max; both members close within tol."""
    if not 0.0 < alpha < math.pi:
        raise ValueError("alpha must lie in (0, pi)")
    found = {}
    for n in range(2, n_max + 1):
        for d in find_periodic_directions(e, p, n, grid):
            ang = math.atan2(d.direction[1], d.direction[0]) % (2.0 * math.pi)
            key = round(ang / 1e-9)
            if key not in found or found[key][1] > n:
                found[key] = (ang, n, d)
    angles = sorted(found.values(), key=lambda t: (t[0], t[1]))
    pairs = []
    for ang, n1, d1 in angles:
        target = (ang + alpha) % (2.0 * math.pi)
        for ang2, n2, d2 in angles:
            if abs((ang2 - target + math.pi) % (2.0 * math.pi) - math.pi) < 1e-7:
                if d1.closure_error < tol and d2.closure_error < tol:
                    pairs.append(AnglePair(d1.direction, d2.direction, n1, n2))
    return pairs


def parallelogram_angle_pairs(tau, alpha, H):
    """Lattice pairs (lambda, delta) in (Z tau + Z)^2 with
    arg(lambda/delta) = +-alpha (mod pi), coefficients bounded by H,
    deduplicated up to real scaling; also reports whether tau satisfies
    a small rational quadratic (complex-multiplication proxy)."""
    if H < 1:
        raise ValueError("H must be >= 1")
    H = int(H)
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must have positive imaginary part")
    pairs = []
    seen = set()
    for aa in range(-H, H + 1):
        for bb in range(-H, H + 1):
            lam = aa * tau + bb
            if lam == 0:
                continue
            for dd in range(-H, H + 1):
                for ee in range(-H, H + 1):
                    dl = dd * tau + ee
                    if dl == 0:
                        continue
                    rho = lam / dl
                    arg = cmath.phase(rho) % math.pi
                    ok = False
                    for tgt in (alpha % math.pi, (-alpha) % math.pi):
                        d1 = abs(arg - tgt)
                        if min(d1, math.pi - d1) <= 1e-10:
                            ok = True
                            break
                    if not ok:
                        continue
                    key = (round(rho.real / 1e-8), round(rho.imag / 1e-8),
                           rho.imag >= 0)
                    if key in seen:
                        continue
                    seen.add(key)
                    pairs.append(((aa, bb), (dd, ee)))
    cm = _is_quadratic(tau)
    return pairs, cm


def _is_quadratic(tau, bound=50, tol=1e-10):
    for A in range(1, bound + 1):
        v = A * tau * tau
        for B in range(-2 * bound, 2 * bound + 1):
            w = v + B * tau
            C = -round(w.real)
            if abs(C) <= 2 * bound and abs(w + C) < tol:
                return True
    return False
