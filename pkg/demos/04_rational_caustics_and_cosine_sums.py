"""Rational rotation numbers, closing polygons and cosine sums.

Solving beta2(lambda) = p/q produces a caustic on which every orbit
closes after q bounces.  The sum of the cosines of the reflection
angles over one period is then the same for every start; off the
rational caustic it varies, and the symmetric window sum is a Moebius
function of the squared abscissa of tangency.
"""

import math

import numpy as np

from caustica.birkhoff import (birkhoff_sum, moebius_fit, symmetric_sum,
                               value_multiplicity)
from caustica.conics import Ellipse, caustic_phase_point
from caustica.orbits import closure_error
from caustica.periods import lambda_for_beta2

e = Ellipse(0.6)

lam_star = lambda_for_beta2(e, 1.0 / 7.0)
s_star = e.c2 * lam_star
print(f"beta2 = 1/7 at lambda* = {lam_star:.12f} (s* = {s_star:.12f})")

rng = np.random.default_rng(0)
thetas = rng.uniform(0.0, 2.0 * math.pi, 20)
errs = [closure_error(e, (x.x, x.y), (x.vx, x.vy), 7)
        for x in (caustic_phase_point(e, s_star, t) for t in thetas)]
print(f"worst 7-bounce closure over 20 random starts: {max(errs):.2e}")

sums = [birkhoff_sum(e, caustic_phase_point(e, s_star, t), 7)
        for t in thetas]
print(f"7-term cosine sum: mean {np.mean(sums):.10f}, "
      f"spread {np.ptp(sums):.2e}")

# On a generic caustic the same sum depends on the start.
s_gen = 0.62
gen = [birkhoff_sum(e, caustic_phase_point(e, s_gen, t), 7) for t in thetas]
print(f"\ngeneric caustic s = {s_gen}: spread {np.ptp(gen):.4f}")

# The symmetric 7-term window centered at caustic phase theta follows
# (a t + b) / (c t + d) in t = cos^2(theta).
fit = moebius_fit(e, s_gen, 7)
print(f"Moebius fit residual {fit.residual:.2e}, det {fit.det:.6f}")
print(f"window sum at the vertices: {fit(0.0):.6f} and {fit(1.0):.6f}")
theta = 1.1
direct = symmetric_sum(e, caustic_phase_point(e, s_gen, theta), 3)
print(f"spot check at theta = {theta}: window {direct:.8f}, "
      f"model {fit(math.cos(theta) ** 2):.8f}")

# Interior values are taken exactly twice per semi-ellipse.
for f in (0.25, 0.5, 0.75):
    v = fit(f)
    print(f"value {v:.6f}: multiplicity "
          f"{value_multiplicity(e, s_gen, 7, v)}")
