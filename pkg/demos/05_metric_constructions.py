"""Finite pseudometric spaces: limits, colimits, the monoidal structure,
and currying.  Every construction re-validates the axioms on the way out."""
from fractions import Fraction as F

from catprob import (
    INF,
    FinPseudometricSpace,
    LipschitzMap,
    coequalizer,
    coproduct,
    curry,
    hom,
    metric_reflection,
    product,
    scale,
    tensor,
    uncurry,
)

narrow = FinPseudometricSpace(["p", "q"], [[0, 1], [1, 0]])
wide = FinPseudometricSpace(["p", "q"], [[0, 3], [3, 0]])

prod = product([narrow, wide])
print("product diagonal distance (sup):", prod.distance(("p", "p"), ("q", "q")))

tens = tensor(narrow, wide)
print("tensor diagonal distance (sum):", tens.distance(("p", "p"), ("q", "q")))

cop = coproduct([narrow, wide])
print("coproduct cross distance:", cop.distance((0, "p"), (1, "p")))
assert cop.distance((0, "p"), (1, "p")) == INF

# quotient: identify a ~ b; the chain metric routes through the cheap edge
y = FinPseudometricSpace(["a", "b", "c"], [[0, 2, 3], [2, 0, 1], [3, 1, 0]])
one = FinPseudometricSpace(["*"], [[0]])
res = coequalizer(
    LipschitzMap(one, y, {"*": "a"}), LipschitzMap(one, y, {"*": "b"})
)
print("quotient distance [a]->[c]:", res.space.distance(("a", "b"), ("c",)))

# a map out of the tensor curries to a 1-Lipschitz family, and back
h = LipschitzMap(tens, narrow, {pt: pt[0] for pt in tens.points})
curried = curry(h, narrow, wide)
assert uncurry(curried.per_point, narrow, wide).assign == h.assign
print("curry / uncurry roundtrip is exact")

# hom with the sup metric over a chosen family
hr = hom([curried.per_point["p"], curried.per_point["q"]])
print("hom distance between the two slices:", hr.space.dist[0][1])

# scaling and metric reflection
print("scaled gap:", scale(narrow, F(5, 2)).distance("p", "q"))
glued = FinPseudometricSpace(["a", "b", "c"], [[0, 0, 1], [0, 0, 1], [1, 1, 0]])
reflected, _ = metric_reflection(glued)
print("reflection collapses", glued.size, "points to", reflected.size)
