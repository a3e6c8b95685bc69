"""Seeded random instance generation for the check suites and tests.

Spaces have 2..8 atoms and rational weights with denominator at most 64
(exact backend), which keeps every enumeration oracle feasible and every
identity decidable.  Maps are sampled among valid measure-preserving
assignments: quotients by random grouping (always valid), and parallel
variants by weight-preserving relabelings plus rejection.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import scalar
from .diagram import FiltrationDiagram
from .errors import NotMeasurePreserving
from .finmeas import FiniteMeasure
from .finprob import FiniteProbSpace, MeasurePreservingMap
from .finrv import FiniteRandomVariable

_DENOMS = (4, 8, 16, 32, 64, 12, 24, 48, 60)


def rand_space(rng, min_atoms=2, max_atoms=8, backend=scalar.EXACT, allow_null=True):
    """Random space; roughly half the draws are uniform to seed weight collisions."""
    n = rng.randint(min_atoms, max_atoms)
    atoms = tuple(range(n))
    if rng.random() < 0.5:
        if backend == scalar.EXACT:
            return FiniteProbSpace(atoms, [Fraction(1, n)] * n, backend=backend)
        return FiniteProbSpace(atoms, [1.0 / n] * n, backend=backend)
    den = rng.choice(_DENOMS)
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    if not allow_null:
        while 0 in parts:
            i = parts.index(0)
            j = max(range(n), key=lambda t: parts[t])
            parts[i] += 1
            parts[j] -= 1
    if backend == scalar.EXACT:
        weights = [Fraction(p, den) for p in parts]
    else:
        weights = [p / den for p in parts]
    return FiniteProbSpace(atoms, weights, backend=backend)


def rand_rational(rng, max_den=64):
    den = rng.choice(_DENOMS)
    return Fraction(rng.randint(0, max_den), den)


def rand_rv(rng, space, bound=1):
    """Values in [0, bound] with small denominators; canonical on null atoms."""
    bound = scalar.coerce(bound, space.backend)
    vals = []
    for _ in range(space.size):
        if space.backend == scalar.EXACT:
            vals.append(bound * Fraction(rng.randint(0, 64), 64))
        else:
            vals.append(bound * rng.randint(0, 64) / 64.0)
    return FiniteRandomVariable(space, vals)


def rand_measure(rng, space, bound=1):
    """Measure below bound * weights (hence absolutely continuous)."""
    bound = scalar.coerce(bound, space.backend)
    mass = []
    for w in space.weights:
        if space.backend == scalar.EXACT:
            mass.append(bound * w * Fraction(rng.randint(0, 64), 64))
        else:
            mass.append(bound * w * rng.randint(0, 64) / 64.0)
    return FiniteMeasure(space, mass)


def rand_quotient(rng, src, max_classes=None):
    """Random grouping of the source atoms; the target weights are derived,
    so the resulting map is measure preserving by construction."""
    n = src.size
    k = rng.randint(1, max_classes or n)
    assign = {a: rng.randrange(k) for a in src.atoms}
    used = sorted(set(assign.values()))
    relabel = {c: t for t, c in enumerate(used)}
    assign = {a: relabel[c] for a, c in assign.items()}
    sums = {}
    for a in src.atoms:
        sums[assign[a]] = sums.get(assign[a], src.zero) + src.weight(a)
    dst = FiniteProbSpace(
        range(len(used)),
        [sums[t] for t in range(len(used))],
        backend=src.backend,
        tol=src.tol or None,
    )
    return MeasurePreservingMap(src, dst, assign)


def weight_classes(space):
    """Atoms grouped by equal weight (the orbits available to relabelings)."""
    groups = {}
    for a in space.atoms:
        groups.setdefault(space.weight(a), []).append(a)
    return [g for g in groups.values() if len(g) > 1]


def rand_automorphism(rng, space):
    """Weight-preserving permutation of the atoms (identity if none exists)."""
    perm = {a: a for a in space.atoms}
    for group in weight_classes(space):
        shuffled = group[:]
        rng.shuffle(shuffled)
        perm.update(dict(zip(group, shuffled)))
    return MeasurePreservingMap(space, space, perm)


def rand_parallel_map(rng, f, attempts=40):
    """Another measure-preserving map with the same endpoints as f.

    Tries compositions of f with source/target automorphisms, then rejection
    sampling of raw assignments; falls back to f itself (distance 0 is a
    legitimate sample).
    """
    choices = []
    tau = rand_automorphism(rng, f.src)
    choices.append({a: f.assign[tau.assign[a]] for a in f.src.atoms})
    sigma = rand_automorphism(rng, f.dst)
    choices.append({a: sigma.assign[f.assign[a]] for a in f.src.atoms})
    rng.shuffle(choices)
    for assign in choices:
        if assign != f.assign:
            return MeasurePreservingMap(f.src, f.dst, assign)
    for _ in range(attempts):
        assign = {a: rng.choice(f.dst.atoms) for a in f.src.atoms}
        try:
            return MeasurePreservingMap(f.src, f.dst, assign)
        except NotMeasurePreserving:
            continue
    return MeasurePreservingMap(f.src, f.dst, dict(f.assign))


def rand_refining_chain(rng, top_space, levels):
    """Chain diagram with the given top: repeated random coarsenings below it."""
    spaces = [top_space]
    steps = []
    current = top_space
    for _ in range(levels):
        q = rand_quotient(rng, current)
        steps.append(q)
        spaces.append(q.dst)
        current = q.dst
    spaces.reverse()
    steps.reverse()
    return FiltrationDiagram.chain(spaces, steps, top=True)


def rand_commuting_triangle(rng, omega):
    """Maps fine: omega -> A and coarse: omega -> B with step: A -> B closing it."""
    fine = rand_quotient(rng, omega)
    step = rand_quotient(rng, fine.dst)
    coarse = MeasurePreservingMap(
        omega, step.dst, {a: step.assign[fine.assign[a]] for a in omega.atoms}
    )
    return fine, coarse, step


# -- finite pseudometric sampling ---------------------------------------------------


def rand_metric_space(rng, max_points=4, max_den=8):
    """Random finite pseudometric space via the shortest-path closure of a
    random symmetric weight table (which always satisfies the axioms)."""
    from .metcat import INF, FinPseudometricSpace

    n = rng.randint(1, max_points)
    raw = [[None] * n for _ in range(n)]
    for i in range(n):
        raw[i][i] = Fraction(0)
        for j in range(i + 1, n):
            if rng.random() < 0.15:
                raw[i][j] = INF
            else:
                raw[i][j] = Fraction(rng.randint(0, 4 * max_den), max_den)
            raw[j][i] = raw[i][j]
    # Floyd-Warshall closure turns any symmetric table into a pseudometric
    for m in range(n):
        for i in range(n):
            if raw[i][m] == INF:
                continue
            for j in range(n):
                if raw[m][j] == INF:
                    continue
                alt = raw[i][m] + raw[m][j]
                if raw[i][j] == INF or alt < raw[i][j]:
                    raw[i][j] = alt
    return FinPseudometricSpace(range(n), raw)


def rand_lipschitz_map(rng, src, dst, attempts=60):
    """Random 1-Lipschitz assignment by rejection (constants always succeed)."""
    from .errors import NotLipschitz
    from .metcat import LipschitzMap

    for _ in range(attempts):
        assign = {p: rng.choice(dst.points) for p in src.points}
        try:
            return LipschitzMap(src, dst, assign)
        except NotLipschitz:
            continue
    q = rng.choice(dst.points)
    return LipschitzMap(src, dst, {p: q for p in src.points})
