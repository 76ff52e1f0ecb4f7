"""Periods of caustic curves, the Betti map, and rotation numbers.

The real and imaginary periods of Y^2 = X(X-1)(X-lambda) are
hypergeometric,

    omega2 = pi F(1/2,1/2;1;lambda) = integral over [1,inf) of dx/y,
    omega1 = i pi F(1/2,1/2;1;1-lambda),

and are evaluated here through the arithmetic-geometric mean, with
quadrature as an independent cross-check.  The billiard section B(lambda)
has Betti coordinates (beta1, beta2); beta2 is the ratio of an incomplete
period integral to omega2 and coincides with the rotation number of the
billiard circle map on elliptic caustics.  Both Gauss-Legendre operator
residuals (on omega2 itself and on the elliptic logarithm of B) are
provided as finite-difference checks; the second has the closed value
2c sqrt(1-c^2) (1-c^2 lambda)^(-3/2), which is nonzero and so certifies
that the section is non-torsion.
"""

import math
import warnings
from typing import NamedTuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .conics import CausticParam, CausticKind, advance, caustic_phase_point, classify_caustic

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


def _quad(f, a, b):
    """quad at tight tolerances with the roundoff warning silenced; the
    integrands have square-root endpoint behavior where the warning
    fires even though the achieved accuracy is ample."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(f, a, b, **_QUAD_OPTS)
    return val


class BettiCoords(NamedTuple):
    beta1: float
    beta2: float


class PeriodPair(NamedTuple):
    omega1: complex
    omega2: float


def _agm(a, b):
    for _ in range(60):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def omega2(lam):
    """Real period pi F(1/2,1/2;1;lambda) for 0 < lambda < 1, via AGM."""
    if not 0.0 < lam < 1.0:
        raise ValueError("omega2 needs lambda in (0, 1)")
    return math.pi / _agm(1.0, math.sqrt(1.0 - lam))


def omega1(lam):
    """Imaginary period i pi F(1/2,1/2;1;1-lambda) for 0 < lambda < 1."""
    if not 0.0 < lam < 1.0:
        raise ValueError("omega1 needs lambda in (0, 1)")
    return 1j * math.pi / _agm(1.0, math.sqrt(lam))


def period_pair(lam):
    return PeriodPair(omega1(lam), omega2(lam))


def omega2_quadrature(lam):
    """omega2 as the integral over [1, inf) of dx/y, by x = 1 + t^2.

    Independent of the AGM route; the two must agree to 1e-10.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("omega2 needs lambda in (0, 1)")

    def f(t):
        x = 1.0 + t * t
        return 2.0 * t / math.sqrt(x * (t * t) * (x - lam))

    val = _quad(f, 0.0, np.inf)
    return val


def omega1_quadrature(lam):
    """|omega1| as the integral over (-inf, 0] of dx/|y|, by x = -t^2."""
    if not 0.0 < lam < 1.0:
        raise ValueError("omega1 needs lambda in (0, 1)")

    def f(t):
        x = -t * t
        return 2.0 * t / math.sqrt(-x * (x - 1.0) * (x - lam))

    val = _quad(f, 0.0, np.inf)
    return val


def omega2_above_one(lam):
    """Real period for lambda > 1 through the 1/lambda isomorphism.

    omega2(lambda) = omega2(1/lambda)/sqrt(lambda) = pi/AGM(sqrt(lambda),
    sqrt(lambda-1)); equals the integral over [0,1] of dx/y, which
    omega2_above_one_quadrature evaluates independently.
    """
    if lam <= 1.0:
        raise ValueError("omega2_above_one needs lambda > 1")
    return math.pi / _agm(math.sqrt(lam), math.sqrt(lam - 1.0))


def omega2_above_one_quadrature(lam):
    """The equal-component integral over [0,1] of dx/y, by x = sin^2."""
    if lam <= 1.0:
        raise ValueError("omega2_above_one needs lambda > 1")

    def f(th):
        si = math.sin(th)
        return 2.0 / math.sqrt(lam - si * si)

    val = _quad(f, 0.0, 0.5 * math.pi)
    return val


def integral_I(u, lam):
    """I_u(lambda): integral over [u, inf) of dx/sqrt(x(x-1)(x-lambda)).

    The substitution x = u + t^2 removes the square-root endpoint
    singularity (in particular at u = 1, where the factor x - 1 supplies
    it); the infinite tail is left to adaptive quadrature.
    """
    if u < 1.0:
        raise ValueError("integral_I needs u >= 1")
    if lam >= u:
        raise ValueError("integral_I needs lambda < u")

    def f(t):
        x = u + t * t
        return 2.0 * t / math.sqrt(x * (x - 1.0) * (x - lam))

    val = _quad(f, 0.0, np.inf)
    return val


def elliptic_numerator(e, lam):
    """Integral over [lambda, 1/c^2] of dx/y, by x = lambda + t^2.

    Both the integrand and the upper limit are smooth in lambda on
    (1, 1/c^2), so this is the smooth branch used for the elliptic
    logarithm of the billiard section.
    """
    U = 1.0 / e.c2
    if not 1.0 < lam < U:
        raise ValueError("elliptic numerator needs lambda in (1, 1/c^2)")
    T = math.sqrt(U - lam)

    def f(t):
        x = lam + t * t
        return 2.0 / math.sqrt(x * (x - 1.0))

    val = _quad(f, 0.0, T)
    return val


def betti_billiard(e, lam):
    """Betti coordinates of the billiard section at parameter lambda.

    Hyperbolic branch (0 < lambda < 1): (1/2, 1/2 - I_{1/c^2}/(2 I_1));
    elliptic branch (1 < lambda < 1/c^2): (0, N/(2 omega2)) with N the
    incomplete integral from lambda to 1/c^2.  Both branches extend to
    the logarithmic regime near lambda = 1 (beta2 -> 1/2 from either
    side); lambda = 1 itself is degenerate and rejected.
    """
    U = 1.0 / e.c2
    if not 0.0 < lam < U:
        raise ValueError("betti_billiard needs lambda in (0, 1/c^2)")
    if lam == 1.0:
        raise ValueError("lambda = 1 is the focal degeneration")
    if lam < 1.0:
        b2 = 0.5 - integral_I(U, lam) / (2.0 * omega2(lam))
        return BettiCoords(0.5, b2)
    b2 = elliptic_numerator(e, lam) / (2.0 * omega2_above_one_quadrature(lam))
    return BettiCoords(0.0, b2)


class BettiModel:
    """Cached fast evaluator of beta2 across both branches.

    Writes beta2 = 1/2 - S(lambda)/(2 omega2(lambda)) with
    S(lambda) = I_{1/c^2}(lambda), valid on both branches since the
    incomplete elliptic numerator equals omega2 - S above lambda = 1.
    S has a square-root branch at lambda = 1/c^2, so it is tabulated on
    a cubic spline in sigma = sqrt(1/c^2 - lambda); omega2 stays on the
    microsecond AGM route.  Grid scans and direction root-finds go
    through this model; betti_billiard remains the direct-quadrature
    reference.
    """

    def __init__(self, e, nodes=481):
        self.e = e
        U = 1.0 / e.c2
        self.U = U
        sig_max = math.sqrt(U)
        sig = np.linspace(0.0, sig_max, nodes)
        vals = np.empty(nodes)
        vals[0] = math.pi / _agm(math.sqrt(U), math.sqrt(U - 1.0))
        for j in range(1, nodes):
            vals[j] = integral_I(U, U - sig[j] ** 2)
        self._spline = CubicSpline(sig, vals)

    def S(self, lam):
        if not -1e-12 <= self.U - lam <= self.U:
            raise ValueError("lambda outside the tabulated range")
        return float(self._spline(math.sqrt(max(0.0, self.U - lam))))

    def beta2(self, lam):
        if lam == 1.0:
            # Continuous limit from both sides (the period diverges).
            return 0.5
        if lam < 1.0:
            if lam <= 0.0:
                raise ValueError("lambda must be positive")
            w2 = omega2(lam)
        else:
            w2 = omega2_above_one(lam)
        return 0.5 - self.S(lam) / (2.0 * w2)

    def beta_coords(self, lam):
        return BettiCoords(0.5 if lam < 1.0 else 0.0, self.beta2(lam))


def betti_scan(e, lambdas):
    """Betti coordinates over an iterable of lambdas, in input order.

    Cells are independent; the reduction order is the input order, so
    output is deterministic under any evaluation schedule.
    """
    return [betti_billiard(e, lam) for lam in lambdas]


def lambda_for_beta2(e, target, xtol=1e-13):
    """Elliptic-caustic parameter lambda* with beta2(lambda*) = target.

    beta2 decreases from 1/2 to 0 as lambda runs over (1, 1/c^2), so any
    target in (0, 1/2) has a unique preimage, found by bracketed root
    finding on betti_billiard.
    """
    if not 0.0 < target < 0.5:
        raise ValueError("target beta2 must lie in (0, 1/2)")
    lo = 1.0 + 1e-12
    hi = 1.0 / e.c2 - 1e-12
    return brentq(lambda lam: betti_billiard(e, lam).beta2 - target,
                  lo, hi, xtol=xtol)


def rotation_number(e, s, n_iter):
    """Empirical winding number of the billiard circle map on an
    elliptic caustic, clockwise-tangent convention; converges to
    beta2(s/c^2) at rate O(1/n_iter)."""
    if n_iter < 1000:
        raise ValueError("rotation_number needs n_iter >= 1000")
    cp = s if isinstance(s, CausticParam) else classify_caustic(e, s)
    if cp.kind is not CausticKind.ELLIPTIC:
        raise ValueError("rotation number needs an elliptic caustic")
    x = caustic_phase_point(e, cp.s, 0.3)
    rb2 = math.sqrt(e.b2)
    th_prev = math.atan2(x.y / rb2, x.x)
    total = 0.0
    two_pi = 2.0 * math.pi
    for _ in range(n_iter):
        x = advance(e, x)
        th = math.atan2(x.y / rb2, x.x)
        d = math.fmod(th - th_prev, two_pi)
        if d > 0.0:
            d -= two_pi
        total += d
        th_prev = th
    return -total / (two_pi * n_iter)


def _gamma_operator(f, lam, h):
    """Signed Gauss-Legendre residual of f at lambda by central differences."""
    fp, fm, f0 = f(lam + h), f(lam - h), f(lam)
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    d1 = (fp - fm) / (2.0 * h)
    return lam * (1.0 - lam) * d2 + (1.0 - 2.0 * lam) * d1 - 0.25 * f0


def picard_fuchs_residual(lam, h=1e-4, richardson=True):
    """|Gamma omega2| at lambda by central differences.

    One Richardson level (steps h and h/2) cancels the O(h^2) term;
    with richardson=False the raw O(h^2) residual is returned.
    """
    if h > 1e-2:
        raise ValueError("step too large for the target tolerance")
    if not (0.0 < lam - 2.0 * h and lam + 2.0 * h < 1.0):
        raise ValueError("lambda +- 2h must stay inside (0, 1)")
    r1 = _gamma_operator(omega2, lam, h)
    if not richardson:
        return abs(r1)
    r2 = _gamma_operator(omega2, lam, 0.5 * h)
    return abs((4.0 * r2 - r1) / 3.0)


def manin_residual(e, lam, h=1e-3, richardson=True):
    """Distance of the Manin map of the billiard section from its closed
    value 2c sqrt(1-c^2) (1-c^2 lambda)^(-3/2).

    The logarithm branch is ell = (1/2) integral from lambda to 1/c^2 of
    dx/y, smooth across the elliptic range, and the Manin map in the
    normalization of the closed form equals 8 Gamma(ell): the factor 8
    between the bare Gauss-Legendre image and the corrected Manin map is
    constant in (c, lambda) and was pinned at 40-digit precision.  A
    nonzero value certifies the section is non-torsion.
    """
    U = 1.0 / e.c2
    if not (1.0 < lam - 2.0 * h and lam + 2.0 * h < U):
        raise ValueError("lambda +- 2h must stay inside (1, 1/c^2)")
    if h > 1e-2:
        raise ValueError("step too large for the target tolerance")

    def ell(t):
        v = 0.5 * elliptic_numerator(e, t)
        if not math.isfinite(v):
            raise ValueError("branch discontinuity in the elliptic logarithm")
        return v

    r1 = _gamma_operator(ell, lam, h)
    if richardson:
        r2 = _gamma_operator(ell, lam, 0.5 * h)
        r1 = (4.0 * r2 - r1) / 3.0
    expected = 2.0 * e.c * math.sqrt(e.b2) * (1.0 - e.c2 * lam) ** -1.5
    return abs(8.0 * r1 - expected)
