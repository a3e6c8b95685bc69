"""Finite extended-pseudometric spaces and 1-Lipschitz maps.

Constructions: sup-metric product, equalizer subspace, infinity-separated
coproduct, chain-infimum coequalizer, sum-metric tensor, sup-metric hom over
a supplied family of maps, currying both ways, scaling, metric reflection.
Distances may be `math.inf`; addition and comparisons saturate there, so the
tables stay exact rationals everywhere else.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import scalar
from .errors import (
    DomainMismatch,
    InvalidMetric,
    NotLipschitz,
    NotParallel,
    ProductTooLarge,
)

INF = math.inf

#: Guard on product/tensor point counts.
MAX_PRODUCT_POINTS = 10 ** 6


def _coerce_dist(value, tol):
    if value == INF or (isinstance(value, str) and value.strip() == "inf"):
        return INF
    if isinstance(value, str):
        return scalar.parse_rational(value)
    if isinstance(value, float) and tol == 0:
        # exact tables hold Fractions; a finite float here is a type slip
        raise InvalidMetric("finite float %r in an exact distance table" % value)
    return value


class FinPseudometricSpace:
    """Ordered finite point set with a symmetric distance table.

    `tol` > 0 relaxes the axiom checks for float-valued tables; with the
    default tol=0 all checks are exact.
    """

    __slots__ = ("points", "dist", "tol")

    def __init__(self, points, dist, tol=0):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise InvalidMetric("duplicate point labels")
        n = len(points)
        rows = [list(r) for r in dist]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidMetric("distance table is not %d x %d" % (n, n))
        table = tuple(
            tuple(_coerce_dist(v, tol) for v in row) for row in rows
        )
        for i in range(n):
            if not scalar.eq(table[i][i], 0, tol):
                raise InvalidMetric("d(%r,%r) = %s != 0" % (points[i], points[i], table[i][i]))
            for j in range(n):
                if table[i][j] != INF and table[i][j] < 0:
                    raise InvalidMetric("negative distance at (%r,%r)" % (points[i], points[j]))
                if not _sym_eq(table[i][j], table[j][i], tol):
                    raise InvalidMetric(
                        "asymmetry at (%r,%r): %s vs %s"
                        % (points[i], points[j], table[i][j], table[j][i])
                    )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not _tri_ok(table[i][j], table[i][k], table[k][j], tol):
                        raise InvalidMetric(
                            "triangle violated: d(%r,%r) > d(%r,%r) + d(%r,%r)"
                            % (points[i], points[j], points[i], points[k], points[k], points[j])
                        )
        self.points = points
        self.dist = table
        self.tol = tol

    def distance(self, x, y):
        return self.dist[self.points.index(x)][self.points.index(y)]

    @property
    def size(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, FinPseudometricSpace):
            return NotImplemented
        return self.points == other.points and self.dist == other.dist

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((self.points, self.dist))

    def __repr__(self):
        return "FinPseudometricSpace(points=%r)" % (self.points,)


def _sym_eq(a, b, tol):
    if a == INF or b == INF:
        return a == b
    return scalar.eq(a, b, tol)


def _tri_ok(dij, dik, dkj, tol):
    if dik == INF or dkj == INF:
        return True
    if dij == INF:
        return False
    return scalar.le(dij, dik + dkj, tol)


class LipschitzMap:
    """Point assignment that never expands distances (1-Lipschitz)."""

    __slots__ = ("src", "dst", "assign")

    def __init__(self, src, dst, assign):
        assign = dict(assign)
        missing = [p for p in src.points if p not in assign]
        if missing:
            raise DomainMismatch("assignment missing points %r" % (missing[:4],))
        for p, q in assign.items():
            if q not in dst.points:
                raise DomainMismatch("image point %r not in target" % (q,))
        tol = max(src.tol, dst.tol)
        for i, x in enumerate(src.points):
            for j, y in enumerate(src.points):
                dxy = src.dist[i][j]
                fx = dst.points.index(assign[x])
                fy = dst.points.index(assign[y])
                dfxy = dst.dist[fx][fy]
                if dxy == INF:
                    continue
                if dfxy == INF or not scalar.le(dfxy, dxy, tol):
                    raise NotLipschitz(
                        "pair (%r,%r): image distance %s > source distance %s"
                        % (x, y, dfxy, dxy)
                    )
        self.src = src
        self.dst = dst
        self.assign = {p: assign[p] for p in src.points}

    def __call__(self, point):
        return self.assign[point]

    def __eq__(self, other):
        if not isinstance(other, LipschitzMap):
            return NotImplemented
        return (
            self.src == other.src
            and self.dst == other.dst
            and self.assign == other.assign
        )

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "LipschitzMap(%r)" % (self.assign,)


def identity_lipschitz(space):
    return LipschitzMap(space, space, {p: p for p in space.points})


def compose_lipschitz(f, g):
    """f first, then g."""
    if f.dst != g.src:
        raise DomainMismatch("maps do not compose")
    return LipschitzMap(f.src, g.dst, {p: g.assign[f.assign[p]] for p in f.src.points})


# -- limits ---------------------------------------------------------------------

def product(spaces):
    """Product with the sup metric; points are tuples of factor points."""
    spaces = list(spaces)
    if not spaces:
        raise ValueError("product of an empty family is not supported")
    count = 1
    for s in spaces:
        count *= s.size
        if count > MAX_PRODUCT_POINTS:
            raise ProductTooLarge("product would have more than %d points" % MAX_PRODUCT_POINTS)
    tol = max(s.tol for s in spaces)
    points = list(itertools.product(*(s.points for s in spaces)))
    idx = [
        {p: i for i, p in enumerate(s.points)} for s in spaces
    ]
    table = []
    for xs in points:
        row = []
        for ys in points:
            best = 0
            for s, lookup, x, y in zip(spaces, idx, xs, ys):
                d = s.dist[lookup[x]][lookup[y]]
                if d == INF:
                    best = INF
                    break
                if d > best:
                    best = d
            row.append(best)
        table.append(row)
    return FinPseudometricSpace(points, table, tol=tol)


def projection(prod_space, spaces, i):
    """The i-th projection out of a product built by `product`."""
    return LipschitzMap(prod_space, spaces[i], {p: p[i] for p in prod_space.points})


def equalizer(f, g):
    """Subspace where f and g agree, with its distance-preserving inclusion."""
    if f.src != g.src or f.dst != g.dst:
        raise NotParallel("equalizer needs a parallel pair")
    src = f.src
    keep = [p for p in src.points if f.assign[p] == g.assign[p]]
    pos = {p: src.points.index(p) for p in keep}
    table = [[src.dist[pos[x]][pos[y]] for y in keep] for x in keep]
    sub = FinPseudometricSpace(keep, table, tol=src.tol)
    incl = LipschitzMap(sub, src, {p: p for p in keep})
    return sub, incl


# -- colimits -------------------------------------------------------------------

def coproduct(spaces):
    """Disjoint union; points are (component index, point), cross distances inf."""
    spaces = list(spaces)
    if not spaces:
        raise ValueError("coproduct of an empty family is not supported")
    tol = max(s.tol for s in spaces)
    points = []
    for i, s in enumerate(spaces):
        points.extend((i, p) for p in s.points)
    table = []
    for (i, x) in points:
        row = []
        for (j, y) in points:
            if i != j:
                row.append(INF)
            else:
                s = spaces[i]
                row.append(s.dist[s.points.index(x)][s.points.index(y)])
        table.append(row)
    return FinPseudometricSpace(points, table, tol=tol)


@dataclass
class CoequalizerResult:
    space: FinPseudometricSpace
    projection: LipschitzMap
    #: class pairs where the single-intermediate formula exceeds the chain infimum
    one_step_gaps: tuple


def coequalizer(f, g):
    """Quotient of the target by the relation generated by f(x) ~ g(x).

    The quotient metric is the chain infimum: build the class graph with
    edge weight min over representatives of the target distance, then close
    under paths (all-pairs shortest path).  The one-step formula
    inf{d(y1',y) + d(y,y2')} is also evaluated; pairs where it is strictly
    larger than the chain value are reported in `one_step_gaps`.
    """
    if f.src != g.src or f.dst != g.dst:
        raise NotParallel("coequalizer needs a parallel pair")
    Y = f.dst
    parent = list(range(Y.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for x in f.src.points:
        union(Y.points.index(f.assign[x]), Y.points.index(g.assign[x]))
    roots = sorted({find(i) for i in range(Y.size)})
    class_of = {i: roots.index(find(i)) for i in range(Y.size)}
    members = [
        tuple(Y.points[i] for i in range(Y.size) if class_of[i] == c)
        for c in range(len(roots))
    ]
    k = len(members)
    base = [[(0 if i == j else INF) for j in range(k)] for i in range(k)]
    for i in range(Y.size):
        for j in range(Y.size):
            ci, cj = class_of[i], class_of[j]
            d = Y.dist[i][j]
            if ci == cj:
                continue
            if d != INF and (base[ci][cj] == INF or d < base[ci][cj]):
                base[ci][cj] = d
                base[cj][ci] = d
    chain = [row[:] for row in base]
    for m in range(k):
        for i in range(k):
            dim = chain[i][m]
            if dim == INF:
                continue
            for j in range(k):
                dmj = chain[m][j]
                if dmj == INF:
                    continue
                alt = dim + dmj
                if chain[i][j] == INF or alt < chain[i][j]:
                    chain[i][j] = alt
    # single-intermediate value, for the discrepancy report
    gaps = []
    for ci in range(k):
        for cj in range(ci + 1, k):
            one = INF
            for i in range(Y.size):
                if class_of[i] != ci:
                    continue
                for m in range(Y.size):
                    for j in range(Y.size):
                        if class_of[j] != cj:
                            continue
                        d1, d2 = Y.dist[i][m], Y.dist[m][j]
                        if d1 == INF or d2 == INF:
                            continue
                        v = d1 + d2
                        if v < one:
                            one = v
            if one != chain[ci][cj]:
                gaps.append((members[ci], members[cj], one, chain[ci][cj]))
    quot = FinPseudometricSpace(members, chain, tol=Y.tol)
    proj = LipschitzMap(Y, quot, {p: members[class_of[Y.points.index(p)]] for p in Y.points})
    return CoequalizerResult(quot, proj, tuple(gaps))


# -- monoidal structure -----------------------------------------------------------

def tensor(x_space, y_space):
    """Pair points with the sum metric."""
    count = x_space.size * y_space.size
    if count > MAX_PRODUCT_POINTS:
        raise ProductTooLarge("tensor would have more than %d points" % MAX_PRODUCT_POINTS)
    tol = max(x_space.tol, y_space.tol)
    points = list(itertools.product(x_space.points, y_space.points))
    table = []
    for (x1, y1) in points:
        i1, j1 = x_space.points.index(x1), y_space.points.index(y1)
        row = []
        for (x2, y2) in points:
            dx = x_space.dist[i1][x_space.points.index(x2)]
            dy = y_space.dist[j1][y_space.points.index(y2)]
            row.append(INF if dx == INF or dy == INF else dx + dy)
        table.append(row)
    return FinPseudometricSpace(points, table, tol=tol)


def hom_distance(f, g):
    """Sup over source points of the target distance, with a witness point."""
    if f.src != g.src or f.dst != g.dst:
        raise NotParallel("hom distance needs a parallel pair")
    best, witness = 0, None
    dst = f.dst
    for p in f.src.points:
        d = dst.dist[dst.points.index(f.assign[p])][dst.points.index(g.assign[p])]
        if witness is None or (best != INF and (d == INF or d > best)):
            best, witness = d, p
    if witness is None:  # empty source: all maps coincide
        return 0, None
    return best, witness


@dataclass
class HomResult:
    space: FinPseudometricSpace  # points are 0..n-1, positions in `maps`
    maps: tuple


def hom(maps):
    """Sup metric on a finite family of parallel 1-Lipschitz maps."""
    maps = tuple(maps)
    if not maps:
        raise ValueError("hom needs at least one map")
    for m in maps[1:]:
        if m.src != maps[0].src or m.dst != maps[0].dst:
            raise NotParallel("hom maps must share source and target")
    tol = max(maps[0].src.tol, maps[0].dst.tol)
    n = len(maps)
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d, _ = hom_distance(maps[i], maps[j])
            table[i][j] = d
            table[j][i] = d
    return HomResult(FinPseudometricSpace(range(n), table, tol=tol), maps)


@dataclass
class CurryResult:
    per_point: dict  # x -> LipschitzMap(Y, Z)
    hom_result: HomResult
    outer: LipschitzMap  # X -> hom space (indices aligned with X's point order)


def curry(h, x_space, y_space):
    """Split h: X tensor Y -> Z into a 1-Lipschitz family of maps Y -> Z.

    Requires h's source to be the tensor of the two given spaces.  Both the
    per-point maps and the outer assignment into the sup metric are validated
    1-Lipschitz (they are, by the sum-metric inequality).
    """
    if h.src != tensor(x_space, y_space):
        raise DomainMismatch("map source is not the tensor of the given spaces")
    per = {}
    for x in x_space.points:
        per[x] = LipschitzMap(
            y_space, h.dst, {y: h.assign[(x, y)] for y in y_space.points}
        )
    hr = hom([per[x] for x in x_space.points])
    outer = LipschitzMap(
        x_space, hr.space, {x: i for i, x in enumerate(x_space.points)}
    )
    return CurryResult(per, hr, outer)


def uncurry(per_point, x_space, y_space):
    """Inverse of curry: rebuild the map on the tensor from the family."""
    some = per_point[x_space.points[0]]
    assign = {}
    for x in x_space.points:
        m = per_point[x]
        if m.src != y_space or m.dst != some.dst:
            raise DomainMismatch("family members must be parallel maps from the second factor")
        for y in y_space.points:
            assign[(x, y)] = m.assign[y]
    return LipschitzMap(tensor(x_space, y_space), some.dst, assign)


# -- rescaling and reflection -------------------------------------------------------

def scale(space, r):
    """Multiply every distance by r > 0 (inf stays inf)."""
    if not (r > 0):
        raise ValueError("scale factor must be positive")
    table = [
        [INF if d == INF else d * r for d in row]
        for row in space.dist
    ]
    return FinPseudometricSpace(space.points, table, tol=space.tol)


def metric_reflection(space):
    """Collapse distance-0 pairs; on the result d = 0 implies equality.

    Distance 0 is an equivalence by the triangle inequality, and the induced
    table is well-defined on classes.  Applying the operation twice gives the
    same space (idempotence).
    """
    n = space.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if scalar.eq(space.dist[i][j], 0, space.tol):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(n)})
    class_of = {i: roots.index(find(i)) for i in range(n)}
    members = [
        tuple(space.points[i] for i in range(n) if class_of[i] == c)
        for c in range(len(roots))
    ]
    table = [
        [space.dist[roots[i]][roots[j]] for j in range(len(roots))]
        for i in range(len(roots))
    ]
    quot = FinPseudometricSpace(members, table, tol=space.tol)
    proj = LipschitzMap(
        space, quot, {p: members[class_of[space.points.index(p)]] for p in space.points}
    )
    return quot, proj


def completion(space):
    """Identity on finite spaces: every finite pseudometric space is complete."""
    return space
