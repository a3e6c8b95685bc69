"""Conditional expectation along a measure-preserving map: the defining
integral property, the tower law, and the naturality square with densities."""
import itertools
from fractions import Fraction as F

from catprob import (
    compose,
    cond_exp,
    expectation,
    make_map,
    make_rv,
    pushforward,
    rho,
    uniform_space,
)

u4, u2, u1 = uniform_space(4), uniform_space(2), uniform_space(1)
pair = make_map(u4, u2, {0: 0, 1: 0, 2: 1, 3: 1})
collapse = make_map(u2, u1, {0: 0, 1: 0})

x = make_rv(u4, [0, 1, 2, 3])
cx = cond_exp(x, pair)
print("E[x | pairing] =", list(cx.values))

# defining property: integrals over pulled-back sets agree, subset by subset
for k in range(3):
    for combo in itertools.combinations(u2.atoms, k):
        lhs = sum(u2.weight(b) * cx.value(b) for b in combo)
        rhs = sum(
            u4.weight(a) * x.value(a) for a in u4.atoms if pair(a) in set(combo)
        )
        assert lhs == rhs
print("integral property holds on every target subset")

# tower law: conditioning in stages equals conditioning once
assert cond_exp(x, compose(pair, collapse)) == cond_exp(cond_exp(x, pair), collapse)
print("E[E[x|pair] | collapse] == E[x | collapse o pair]")

# expectations survive conditioning
assert expectation(cx) == expectation(x) == F(3, 2)

# naturality: pushing the density forward = density of the conditional expectation
assert pushforward(rho(x), pair) == rho(cond_exp(x, pair))
print("pushforward(rho(x), s) == rho(E[x|s])")
