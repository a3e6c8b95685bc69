"""Dyadic approximation of a function on [0,1]: the induced martingale, its
exact l1 convergence rate, second-moment gaps, and the convergence certificate."""
from fractions import Fraction as F

from catprob import (
    DyadicGround,
    cauchy_certificate,
    dyadic_error,
    make_dyadic,
    martingale_limit,
    second_moment,
    second_moment_gap,
)

ground = DyadicGround.affine(0, 1)  # f(t) = t
depth = 8
diagram, mart = make_dyadic(ground, depth)

print("depth | l1 error      | second moment | gap to previous")
prev = None
for n in range(depth + 1):
    err = dyadic_error(ground, n)
    mom = second_moment(mart.family[n])
    gap = "" if prev is None else str(mom - prev)
    print("%5d | %-13s | %-13s | %s" % (n, err, mom, gap))
    prev = mom
    assert err == F(1, 2 ** (n + 2))  # closed form for the affine ground

# the gaps telescope exactly
total = sum((second_moment_gap(mart, n, n + 1) for n in range(depth)), F(0))
assert total == second_moment(mart.family[depth]) - second_moment(mart.family[0])
print("gaps telescope to", total)

# from which level on is everything within 1/32 in l1?
cert = cauchy_certificate(mart, F(1, 32))
print("certificate index for eps=1/32:", cert.index)

# the top-level data is recovered from the family alone
limit = martingale_limit(mart)
assert limit == mart.family[depth]
print("martingale_limit reproduces the finest level exactly")
