"""Extending a consistent family of measures to the master space, and the
commuting square with the density martingale."""
import random

from catprob import (
    isometry_report,
    kolmogorov_extend,
    make_dyadic,
    martingale_limit,
    restrict_measure,
    rn_derivative,
    rn_family,
    DyadicGround,
)
from catprob.sampling import rand_measure

diagram, _ = make_dyadic(DyadicGround.affine(0, 1), 4)
top = diagram.spaces[diagram.top]

rng = random.Random(11)
mu = rand_measure(rng, top, bound=2)
print("measure on the top space:", [str(m) for m in mu.mass[:4]], "...")

# restrict to every level, then extend back
family = restrict_measure(mu, diagram)
recovered = kolmogorov_extend(family)
assert recovered == mu
print("extension recovers the original measure exactly")

# the levelwise densities form a martingale whose limit is the density of
# the extension: both paths around the square give the same answer
mart = rn_family(family)
left = rn_derivative(kolmogorov_extend(family))
right = martingale_limit(mart)
assert left == right
print("density(extend(family)) == limit(density family)")

# limits are matched isometrically: the level sup equals the top distance
other = rand_measure(rng, top, bound=2)
other_mart = rn_family(restrict_measure(other, diagram))
report = isometry_report(
    mart, other_mart, martingale_limit(mart), martingale_limit(other_mart)
)
print("sup over levels:", report.sup_levels)
print("distance of limits:", report.limit_distance)
assert report.sup_levels == report.limit_distance
