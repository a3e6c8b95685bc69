"""Densities and measures on a finite space: the two directions of the
correspondence, the total variation metric, and why it is an isometry."""
from fractions import Fraction as F

from catprob import (
    base_measure,
    l1_distance,
    make_measure,
    make_rv,
    make_space,
    rho,
    rn_derivative,
    tv_distance,
)

space = make_space(["rain", "sun"], [F(1, 4), F(3, 4)])
print("space:", space)

# a measure dominated by the base weights
mu = make_measure(space, [F(1, 8), F(1, 2)])
print("mu =", list(mu.mass), " total:", mu.total())

# its density: atomwise mass / weight
g = rn_derivative(mu)
print("density dmu/dP =", list(g.values))

# multiplying back recovers the measure bit for bit
assert rho(g) == mu
print("rho(rn_derivative(mu)) == mu:", rho(g) == mu)

# distances agree on both sides of the correspondence
h = make_rv(space, [F(1, 2), F(1, 3)])
print("l1(g, h)              =", l1_distance(g, h))
print("tv(rho(g), rho(h))    =", tv_distance(rho(g), rho(h)))
assert tv_distance(rho(g), rho(h)) == l1_distance(g, h)

# total variation against the base measure
print("tv(mu, P) =", tv_distance(mu, base_measure(space)))
