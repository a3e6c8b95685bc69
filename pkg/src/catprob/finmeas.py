"""Finite measures absolutely continuous w.r.t. a space's weights.

Total variation is the atomwise l1 sum (the atomic partition attains the
partition supremum on finite spaces; the brute-force supremum survives as a
test oracle).  `rho` and `rn_derivative` are the two directions of the
density correspondence between random variables and measures: multiply by
the weights / divide by the weights, atom by atom.
"""
from __future__ import annotations

from . import scalar
from .errors import NegativeValue, NotAbsolutelyContinuous, SpaceMismatch
from .finrv import FiniteRandomVariable


class FiniteMeasure:
    """Atom-indexed nonnegative masses; zero wherever the base weight is zero."""

    __slots__ = ("space", "mass")

    def __init__(self, space, mass):
        if isinstance(mass, dict):
            missing = [a for a in space.atoms if a not in mass]
            if missing:
                raise SpaceMismatch("mass missing for atoms %r" % (missing[:4],))
            raw = [mass[a] for a in space.atoms]
        else:
            raw = list(mass)
            if len(raw) != space.size:
                raise SpaceMismatch(
                    "%d masses for a %d-atom space" % (len(raw), space.size)
                )
        vals = []
        for a, m in zip(space.atoms, raw):
            m = scalar.coerce(m, space.backend)
            if m < 0:
                raise NegativeValue("mass at atom %r is %s < 0" % (a, m))
            if space.weight(a) == 0 and m != 0:
                raise NotAbsolutelyContinuous(
                    "atom %r has weight 0 but mass %s" % (a, m)
                )
            vals.append(m)
        self.space = space
        self.mass = tuple(vals)

    def mass_of(self, atom):
        return self.mass[self.space.index(atom)]

    def total(self):
        return sum(self.mass, self.space.zero)

    def __eq__(self, other):
        if not isinstance(other, FiniteMeasure):
            return NotImplemented
        return self.space == other.space and self.mass == other.mass

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self.space, self.mass))

    def __repr__(self):
        return "FiniteMeasure(%r)" % (list(self.mass),)


def make_measure(space, mass):
    return FiniteMeasure(space, mass)


def base_measure(space):
    """The space's own weights as a measure."""
    return FiniteMeasure(space, list(space.weights))


def zero_measure(space):
    return FiniteMeasure(space, [0] * space.size)


def tv_distance(mu, nu):
    """Atomwise sum of |mu_a - nu_a| (equals the partition supremum)."""
    if mu.space != nu.space:
        raise SpaceMismatch("measures live on different spaces")
    total = mu.space.zero
    for x, y in zip(mu.mass, nu.mass):
        total += x - y if x >= y else y - x
    return total


def pushforward(mu, s):
    """Image measure along s: each target atom collects its fiber's mass."""
    if mu.space != s.src:
        raise SpaceMismatch("measure does not live on the map's source")
    sums = {b: s.dst.zero for b in s.dst.atoms}
    for a in s.src.atoms:
        sums[s.assign[a]] += mu.mass_of(a)
    return FiniteMeasure(s.dst, [sums[b] for b in s.dst.atoms])


def bound_check(mu, r):
    """True iff mu_a <= r * p_a at every atom (atomwise suffices here)."""
    r = scalar.coerce(r, mu.space.backend)
    if r <= 0:
        raise ValueError("bound must be positive")
    tol = mu.space.tol
    for w, m in zip(mu.space.weights, mu.mass):
        if not scalar.le(m, r * w, tol):
            return False
    return True


def truncate_measure(mu, n):
    """Meet with n times the base weights: atomwise min(mu_a, n * p_a)."""
    n = scalar.coerce(n, mu.space.backend)
    if n <= 0:
        raise ValueError("truncation level must be positive")
    out = []
    for w, m in zip(mu.space.weights, mu.mass):
        cap = n * w
        out.append(m if m <= cap else cap)
    return FiniteMeasure(mu.space, out)


def rho(g):
    """Density to measure: mass_a = g_a * p_a."""
    space = g.space
    return FiniteMeasure(space, [v * w for v, w in zip(g.values, space.weights)])


def rn_derivative(mu):
    """Measure to density: g_a = mu_a / p_a, canonical 0 on null atoms.

    rho(rn_derivative(mu)) == mu holds exactly; absolute continuity is a type
    invariant of FiniteMeasure so no error case remains here.
    """
    space = mu.space
    out = []
    for w, m in zip(space.weights, mu.mass):
        out.append(space.zero if w == 0 else m / w)
    return FiniteRandomVariable(space, out)
