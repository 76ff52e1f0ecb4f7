"""Geometry of the elliptical billiard with confocal caustics.

The table is the ellipse C: x^2 + y^2/(1 - c^2) = 1 with foci (+-c, 0),
where 0 < c < 1.  Every chord of a billiard trajectory is tangent to one
fixed member of the confocal family

    C_s:  x^2/s + y^2/(s - c^2) = 1,

a hyperbola for 0 < s < c^2 and an ellipse for c^2 < s < 1.  A line of
slope xi through (a, b) is tangent to C_s for

    s = (c^2 + (xi*a - b)^2) / (xi^2 + 1),

and a line written t*x + u*y = 1 is tangent to C_s exactly when
s*t^2 + (s - c^2)*u^2 = 1 (the dual conic).  This module implements the
reflection law, the billiard map, trajectory simulation, the tangency
invariant (1 - c^2)*x*v1 + y*v2, and the invariant boundary measure in
the rational parameter z = y/(x - 1).
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.integrate import quad

# Below this squared-distance threshold the two intersection roots are
# considered equal and the chord is treated as tangent to the boundary.
TANGENCY_EPS = 1e-12

# Relative tolerance used to classify nearly degenerate caustics.
DEGENERACY_RTOL = 1e-9


class CausticKind(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    DEGENERATE_FOCAL = "focal"
    DEGENERATE_BOUNDARY = "boundary"
    DEGENERATE_CENTER = "center"


@dataclass(frozen=True)
class Ellipse:
    """Billiard table x^2 + y^2/(1-c^2) = 1 with focal parameter c."""

    c: float

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ValueError("focal parameter must satisfy 0 < c < 1")

    @property
    def c2(self):
        return self.c * self.c

    @property
    def b2(self):
        """Square of the semi-minor axis, 1 - c^2."""
        return 1.0 - self.c * self.c

    @property
    def foci(self):
        return (self.c, 0.0), (-self.c, 0.0)

    def boundary_residual(self, x, y):
        return x * x + y * y / self.b2 - 1.0

    def contains(self, x, y, tol=1e-12):
        return self.boundary_residual(x, y) <= tol

    def boundary_point(self, theta):
        """Point (cos theta, sqrt(1-c^2) sin theta) on the boundary."""
        return math.cos(theta), math.sqrt(self.b2) * math.sin(theta)

    def project_to_boundary(self, x, y):
        """Radial projection onto the boundary (drift control)."""
        r = math.sqrt(x * x + y * y / self.b2)
        return x / r, y / r


@dataclass(frozen=True)
class CausticParam:
    s: float
    kind: CausticKind

    @property
    def is_degenerate(self):
        return self.kind not in (CausticKind.HYPERBOLIC, CausticKind.ELLIPTIC)


def classify_caustic(e, s, rtol=DEGENERACY_RTOL):
    """CausticParam for a confocal parameter s, with degeneracy tolerance."""
    c2 = e.c2
    if abs(s - c2) < rtol * c2:
        return CausticParam(s, CausticKind.DEGENERATE_FOCAL)
    if abs(s - 1.0) < rtol:
        return CausticParam(s, CausticKind.DEGENERATE_BOUNDARY)
    if abs(s) < rtol:
        return CausticParam(s, CausticKind.DEGENERATE_CENTER)
    if 0.0 < s < c2:
        return CausticParam(s, CausticKind.HYPERBOLIC)
    if c2 < s < 1.0:
        return CausticParam(s, CausticKind.ELLIPTIC)
    raise ValueError(f"confocal parameter s={s} outside [0, 1]")


@dataclass(frozen=True)
class PhasePoint:
    """Boundary point plus inward unit direction."""

    x: float
    y: float
    vx: float
    vy: float

    @property
    def p(self):
        return self.x, self.y

    @property
    def v(self):
        return self.vx, self.vy

    def reversed(self):
        return PhasePoint(self.x, self.y, -self.vx, -self.vy)


@dataclass(frozen=True)
class Shot:
    """Starting point in the closed table plus unit direction."""

    x: float
    y: float
    vx: float
    vy: float


@dataclass
class Trajectory:
    points: list
    caustic: CausticParam

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


def slope_of(vx, vy):
    """Slope of a direction, with math.inf for vertical."""
    if vx == 0.0:
        return math.inf
    return vy / vx


def unit(vx, vy):
    n = math.hypot(vx, vy)
    return vx / n, vy / n


def caustic_of_line(e, p, slope):
    """Caustic parameter of the line of given slope through p.

    s = (c^2 + (xi*a - b)^2)/(xi^2 + 1); vertical lines are the
    projective limit s = a^2.
    """
    a, b = p
    if math.isinf(slope):
        s = a * a
    else:
        d = slope * a - b
        s = (e.c2 + d * d) / (slope * slope + 1.0)
    return classify_caustic(e, s)


def reflect(e, q, v_in, tol=1e-9):
    """Specular reflection of v_in at boundary point q."""
    x, y = q
    if abs(e.boundary_residual(x, y)) > tol:
        raise ValueError("reflection point off the boundary")
    nx, ny = x, y / e.b2
    nn = nx * nx + ny * ny
    d = (v_in[0] * nx + v_in[1] * ny) / nn
    return v_in[0] - 2.0 * d * nx, v_in[1] - 2.0 * d * ny


def _chord_exit(e, x, y, vx, vy):
    """Parameter t > 0 of the next intersection of (x,y) + t(vx,vy) with C.

    Returns 0.0 for a tangent (grazing) shot or when no intersection
    lies ahead.  The current point may be on the boundary (one root
    near 0, excluded by the tangency threshold) or interior (one root
    of each sign; the positive one is the first hit).
    """
    b2 = e.b2
    A = vx * vx + vy * vy / b2
    B = 2.0 * (x * vx + y * vy / b2)
    C = x * x + y * y / b2 - 1.0
    disc = B * B - 4.0 * A * C
    if disc <= 0.0:
        return 0.0
    sq = math.sqrt(disc)
    # Stable pair of roots: the subtraction-free one first, its partner
    # from the product of roots.
    if B >= 0.0:
        t1 = (-B - sq) / (2.0 * A)
    else:
        t1 = (-B + sq) / (2.0 * A)
    t2 = C / (A * t1) if t1 != 0.0 else 0.0
    ahead = [t for t in (t1, t2) if t > TANGENCY_EPS]
    if not ahead:
        return 0.0
    return min(ahead)


def advance(e, x):
    """One step of the billiard map: next bounce point, reflected direction.

    The next point is the root of the chord quadratic distinct from the
    current one; a tangent shot returns the same point unchanged.
    """
    t = _chord_exit(e, x.x, x.y, x.vx, x.vy)
    if t == 0.0:
        return x
    qx, qy = e.project_to_boundary(x.x + t * x.vx, x.y + t * x.vy)
    wx, wy = reflect(e, (qx, qy), (x.vx, x.vy))
    wx, wy = unit(wx, wy)
    return PhasePoint(qx, qy, wx, wy)


def first_hit(e, sh):
    """PhasePoint at the first boundary hit of a shot."""
    t = _chord_exit(e, sh.x, sh.y, sh.vx, sh.vy)
    if t == 0.0:
        # Already on the boundary moving tangentially.
        return PhasePoint(sh.x, sh.y, sh.vx, sh.vy)
    qx, qy = e.project_to_boundary(sh.x + t * sh.vx, sh.y + t * sh.vy)
    wx, wy = reflect(e, (qx, qy), (sh.vx, sh.vy))
    wx, wy = unit(wx, wy)
    return PhasePoint(qx, qy, wx, wy)


def simulate(e, sh, n):
    """Trajectory of n bounces; focal shots are tagged, not rejected."""
    if n < 1:
        raise ValueError("need at least one bounce")
    caustic = caustic_of_line(e, (sh.x, sh.y), slope_of(sh.vx, sh.vy))
    pts = [first_hit(e, sh)]
    for _ in range(n - 1):
        pts.append(advance(e, pts[-1]))
    return Trajectory(pts, caustic)


def phase_invariant(e, x):
    """(1 - c^2) x v1 + y v2; its square equals (1-c^2)(1-s)."""
    return e.b2 * x.x * x.vx + x.y * x.vy


def boundary_caustic_intersection(e, s):
    """The four points of C intersect C_s: (+-x0, +-y0).

    x0^2 = s/c^2 and y0^2 = (1-c^2)(c^2-s)/c^2; the points are real
    exactly for hyperbolic caustics, and come out with imaginary y0 for
    elliptic ones.  Order: (x0,y0), (-x0,y0), (x0,-y0), (-x0,-y0).
    """
    sv = s.s if isinstance(s, CausticParam) else s
    c2 = e.c2
    if abs(sv) < 1e-15 or abs(sv - c2) < 1e-15:
        raise ValueError("degenerate caustic has no four distinct points")
    x0 = math.sqrt(sv) / e.c
    y0sq = e.b2 * (c2 - sv) / c2
    if y0sq >= 0.0:
        y0 = math.sqrt(y0sq)
    else:
        y0 = 1j * math.sqrt(-y0sq)
    return (x0, y0), (-x0, y0), (x0, -y0), (-x0, -y0)


def z_of_point(x, y):
    """Rational boundary parameter z = y/(x - 1); (1,0) maps to inf."""
    if x == 1.0:
        return math.inf
    return y / (x - 1.0)


def point_of_z(e, z):
    """Inverse of z_of_point on the boundary."""
    if math.isinf(z):
        return 1.0, 0.0
    b2 = e.b2
    den = z * z + b2
    return (z * z - b2) / den, -2.0 * z * b2 / den


def _density_roots(e, s):
    """The two squared zeros A < B of the measure radicand."""
    sv = s.s if isinstance(s, CausticParam) else s
    c2 = e.c2
    x0 = math.sqrt(sv) / e.c
    y0sq = e.b2 * (c2 - sv) / c2
    A = y0sq / ((x0 + 1.0) ** 2)
    B = y0sq / ((x0 - 1.0) ** 2)
    return A, B


@lru_cache(maxsize=256)
def _density_norm(c, sv):
    """Total unnormalized measure of the admissible arc(s)."""
    e = Ellipse(c)
    A, B = _density_roots(e, sv)
    if A > 0.0:
        # Hyperbolic caustic: two arcs, z^2 in (A, B); substitution
        # z^2 = A + (B-A) sin^2(phi) removes both endpoint singularities.
        val, _ = quad(lambda ph: 1.0 / math.sqrt(A + (B - A) * math.sin(ph) ** 2),
                      0.0, math.pi / 2.0, epsabs=1e-13, epsrel=1e-13)
        return 2.0 * val
    # Elliptic caustic: the radicand is positive on all of R.
    f = lambda z: 1.0 / math.sqrt((z * z - A) * (z * z - B))
    val, _ = quad(f, -math.inf, math.inf, epsabs=1e-13, epsrel=1e-13)
    return val


def invariant_density(e, s, z):
    """Invariant boundary density in the parameter z, arc-normalized.

    rho(z) = |(z^2 - y0^2/(x0+1)^2)(z^2 - y0^2/(x0-1)^2)|^(-1/2) / Z with
    Z chosen so the admissible arc(s) carry total measure 1.
    """
    sv = s.s if isinstance(s, CausticParam) else s
    A, B = _density_roots(e, sv)
    r = (z * z - A) * (z * z - B)
    if abs(r) < 1e-30:
        raise ValueError("z at a singular endpoint of the invariant measure")
    return 1.0 / (math.sqrt(abs(r)) * _density_norm(e.c, sv))


def arc_measure(e, s, z_lo, z_hi):
    """Invariant measure of the z-interval [z_lo, z_hi]."""
    val, _ = quad(lambda z: invariant_density(e, s, z), z_lo, z_hi,
                  epsabs=1e-12, epsrel=1e-12, limit=200)
    return abs(val)


def chord_dual(q1, q2):
    """Dual coordinates (t, u) with t*x + u*y = 1 of the line q1 q2.

    Returns None when the chord passes through the origin, where the
    dual chart is singular.
    """
    x1, y1 = q1
    x2, y2 = q2
    det = x1 * y2 - x2 * y1
    if abs(det) < 1e-13 * max(1.0, abs(x1), abs(y1)):
        return None
    return (y2 - y1) / det, (x1 - x2) / det


def dual_tangency_residual(e, s, q1, q2):
    """|s t^2 + (s - c^2) u^2 - 1| for the chord q1 q2.

    Falls back to the slope form of the tangency condition for chords
    through the origin.
    """
    sv = s.s if isinstance(s, CausticParam) else s
    tu = chord_dual(q1, q2)
    if tu is None:
        xi = slope_of(q2[0] - q1[0], q2[1] - q1[1])
        s2 = caustic_of_line(e, q1, xi).s
        return abs(s2 - sv)
    t, u = tu
    return abs(sv * t * t + (sv - e.c2) * u * u - 1.0)


def tangent_slopes(e, p, s):
    """Slopes through p tangent to C_s: roots of the tangency quadratic.

    (s - a^2) xi^2 + 2 a b xi + (s - b^2 - c^2) = 0; a vanishing leading
    coefficient contributes the vertical line (slope inf).  Returns a
    list of 0, 1, or 2 slopes.
    """
    a, b = p
    sv = s.s if isinstance(s, CausticParam) else s
    qa = sv - a * a
    qb = 2.0 * a * b
    qc = sv - b * b - e.c2
    out = []
    if abs(qa) < 1e-14:
        out.append(math.inf)
        if abs(qb) > 1e-14:
            out.append(-qc / qb)
        return out
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return out
    sq = math.sqrt(disc)
    out.append((-qb + sq) / (2.0 * qa))
    out.append((-qb - sq) / (2.0 * qa))
    return out


def inward(e, p, slope):
    """Unit direction of given slope at boundary point p, oriented inward."""
    if math.isinf(slope):
        vx, vy = 0.0, 1.0
    else:
        vx, vy = unit(1.0, slope)
    g = p[0] * vx + p[1] * vy / e.b2
    if g > 0.0:
        vx, vy = -vx, -vy
    return vx, vy


def caustic_phase_point(e, s, theta, clockwise=True):
    """PhasePoint at boundary angle theta tangent to the caustic s.

    With clockwise=True the direction is chosen so the caustic lies to
    the right of the motion, which makes the induced circle map rotate
    clockwise; the other choice generates the inverse map.
    """
    p = e.boundary_point(theta)
    slopes = tangent_slopes(e, p, s)
    if not slopes:
        raise ValueError("caustic not reachable from this boundary point")
    best = None
    for xi in slopes:
        vx, vy = inward(e, p, xi)
        cross = p[0] * vy - p[1] * vx
        cand = (cross, PhasePoint(p[0], p[1], vx, vy))
        if clockwise == (cross < 0.0):
            return cand[1]
        best = cand[1]
    # Both tangents wind the same way only at degenerate configurations;
    # fall back to the last candidate reversed in time.
    return best
