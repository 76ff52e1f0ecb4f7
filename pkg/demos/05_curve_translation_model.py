"""The billiard map as a translation on a cubic curve.

Chords tangent to the caustic s correspond to points of the Legendre
curve y^2 = x(x-1)(x-lambda) with lambda = s/c^2, and one bounce is the
addition of a fixed section point.  The script exercises the group law,
the decomposition of the bounce section into a universal point plus a
2-torsion shift, and the conjugation that makes the map a rotation.
"""

import math

import numpy as np

from caustica.conics import Ellipse, caustic_phase_point
from caustica.legendre import (ConjugationChecker, LegendrePoint, add,
                               billiard_section, j_invariant, lambda_of,
                               masser_point, mul, phase_to_legendre,
                               point_distance)
from caustica.periods import manin_residual, picard_fuchs_residual

e = Ellipse(0.6)
s = 0.62
L = lambda_of(e, s)
print(f"s = {s} -> lambda = {L.lam:.10f}, j = {j_invariant(L):.4f}")

# Group law sanity on the curve.
P = LegendrePoint(2.0, math.sqrt(2.0 * (2.0 - 1.0) * (2.0 - L.lam)))
Q = add(L, P, P)
print(f"2P = ({Q.X:.8f}, {Q.Y:.8f}), on-curve residual "
      f"{abs(Q.Y ** 2 - Q.X * (Q.X - 1) * (Q.X - L.lam)):.1e}")
print(f"3P via mul vs additions: "
      f"{point_distance(mul(L, 3, P), add(L, Q, P)):.1e}")

# One bounce = translation by the section point; the section splits as
# the universal point at X = 1/c^2 plus the 2-torsion point (lambda, 0).
B = billiard_section(e, L)
M = masser_point(e, L)
T = LegendrePoint(L.lam, 0.0)
print(f"\nsection X = {B.X:.8f}, universal X = {M.X:.8f} = 1/c^2 = "
      f"{1.0 / e.c2:.8f}")
print(f"decomposition distance |B + T - M| = "
      f"{point_distance(add(L, B, T), M):.1e}")

# A boundary phase point maps onto the curve, and conjugating the
# bounce by the period lattice turns it into a rigid rotation.
checker = ConjugationChecker(e, s)
worst = 0.0
for theta in np.linspace(0.3, 5.9, 12):
    x = caustic_phase_point(e, s, theta)
    Pt = phase_to_legendre(e, s, x)
    res = abs(Pt.Y ** 2 - Pt.X * (Pt.X - 1) * (Pt.X - L.lam))
    worst = max(worst, checker.defect(x), res)
print(f"worst conjugation defect / lift residual over 12 starts: "
      f"{worst:.1e}")

# The periods themselves: annihilated by the hypergeometric operator,
# with a closed-form residue for the section differential.
print(f"\nannihilator residual at lambda = 0.3: "
      f"{picard_fuchs_residual(0.3):.1e}")
print(f"residue gap at (c, lambda) = (0.6, 1.5): "
      f"{manin_residual(e, 1.5):.1e}")
