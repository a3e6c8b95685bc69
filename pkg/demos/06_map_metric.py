"""The metric on measure-preserving maps: symmetric-difference suprema,
almost-sure equality, and how pushforward and conditional expectation
respond to moving the map."""
import random
from fractions import Fraction as F

from catprob import (
    as_equal,
    compose,
    cond_exp,
    l1_distance,
    make_map,
    map_distance,
    pushforward,
    tv_distance,
    uniform_space,
)
from catprob.sampling import rand_measure, rand_parallel_map, rand_quotient, rand_rv, rand_space

u4, u2 = uniform_space(4), uniform_space(2)
f = make_map(u4, u2, {w: w % 2 for w in range(4)})
g = make_map(u4, u2, {w: w // 2 for w in range(4)})

print("d(f, g) =", map_distance(f, g))
print("equal almost surely?", as_equal(f, g))
print("scaled by 3:", map_distance(f, g, scale=3))

# composition is jointly 1-Lipschitz; spot-check on random instances
rng = random.Random(2)
worst = F(0)
for _ in range(200):
    space = rand_space(rng)
    f1 = rand_quotient(rng, space, max_classes=5)
    f2 = rand_parallel_map(rng, f1)
    g1 = rand_quotient(rng, f1.dst, max_classes=5)
    g2 = rand_parallel_map(rng, g1)
    lhs = map_distance(compose(f1, g1), compose(f2, g2))
    rhs = map_distance(g1, g2) + map_distance(f1, f2)
    assert lhs <= rhs
    # bounded data moves at most proportionally to the map distance
    r = F(2)
    mu = rand_measure(rng, space, bound=r)
    slack = r * map_distance(f1, f2) - tv_distance(
        pushforward(mu, f1), pushforward(mu, f2)
    )
    assert slack >= 0
    x = rand_rv(rng, space, bound=r)
    assert l1_distance(cond_exp(x, f1), cond_exp(x, f2)) <= r * map_distance(f1, f2)
    worst = max(worst, lhs)
print("200 random composition/transport checks passed; largest distance seen:", worst)
