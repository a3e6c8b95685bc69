"""Filtration diagrams of finite quotient spaces and the martingale engine.

A diagram is a finite directed poset of spaces with compatible connecting
maps (finer level -> coarser level).  An optional designated top element is
the master space; its maps to the levels induce martingales by conditional
expectation, and the engine inverts that construction: reconstructing the
top-level data from a consistent family (martingale limit / measure
extension), certifying convergence through second-moment gaps, and running
the dyadic ground-truth experiments where every quantity has a closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import scalar
from .errors import (
    BadSegments,
    DepthTooLarge,
    DiagramMismatch,
    DomainMismatch,
    GenerationFailure,
    Inconsistent,
    IndexMismatch,
    InvalidDiagram,
    InvariantViolation,
    NegativeValue,
    NoCertificate,
    NoTopElement,
    NotAChain,
    SpaceMismatch,
)
from .finmeas import FiniteMeasure, bound_check, pushforward, rn_derivative
from .finprob import MeasurePreservingMap, compose, identity_map
from .finrv import (
    FiniteRandomVariable,
    cond_exp,
    l1_distance,
    max_value,
    pullback,
    second_moment,
)

#: Atom-count guard for the dyadic constructor (2^depth atoms).
MAX_DYADIC_DEPTH = 24


def _closure(elements, pairs):
    """Reflexive-transitive closure of the declared order pairs."""
    leq = {(e, e) for e in elements}
    leq.update((i, j) for i, j in pairs)
    changed = True
    while changed:
        changed = False
        for (i, j) in list(leq):
            for (k, l) in list(leq):
                if j == k and (i, l) not in leq:
                    leq.add((i, l))
                    changed = True
    return frozenset(leq)


class FiltrationDiagram:
    """Poset of finite spaces with connecting maps f_ij: space_j -> space_i.

    `leq` may be any generating set of order pairs; the reflexive-transitive
    closure is taken.  `connect` may omit composite and reflexive pairs:
    reflexive entries are filled with identities, composites by composition
    (functoriality makes any path equivalent; `validate` cross-checks).
    """

    __slots__ = ("elements", "leq", "spaces", "connect", "top")

    def __init__(self, elements, leq, spaces, connect, top=None, check=True):
        elements = tuple(elements)
        if not elements:
            raise InvalidDiagram("a diagram needs at least one element")
        self.elements = elements
        self.leq = _closure(elements, leq)
        missing = [e for e in elements if e not in spaces]
        if missing:
            raise InvalidDiagram("no space for elements %r" % (missing[:4],))
        self.spaces = {e: spaces[e] for e in elements}
        table = dict(connect)
        for e in elements:
            if (e, e) not in table:
                table[(e, e)] = identity_map(self.spaces[e])
        # fill missing composites by composing along any available factorization
        rank = {e: t for t, e in enumerate(elements)}
        ordered = sorted(self.leq, key=lambda p: (rank[p[0]], rank[p[1]]))
        changed = True
        while changed:
            changed = False
            for (i, j) in ordered:
                if (i, j) in table:
                    continue
                for k in elements:
                    if k in (i, j):
                        continue
                    if (i, k) in self.leq and (k, j) in self.leq:
                        if (i, k) in table and (k, j) in table:
                            table[(i, j)] = compose(table[(k, j)], table[(i, k)])
                            changed = True
                            break
        self.connect = table
        self.top = top
        if check:
            report = validate(self)
            if not report.ok:
                raise InvalidDiagram("; ".join(report.problems[:6]))

    @classmethod
    def chain(cls, spaces_list, step_maps, labels=None, top=True, check=True):
        """Chain diagram: spaces coarse to fine, step_maps[t]: level t+1 -> level t."""
        n = len(spaces_list)
        if labels is None:
            labels = tuple(range(n))
        labels = tuple(labels)
        if len(labels) != n:
            raise InvalidDiagram("%d labels for %d spaces" % (len(labels), n))
        if len(step_maps) != n - 1:
            raise InvalidDiagram("a chain of %d spaces needs %d step maps" % (n, n - 1))
        leq = [(labels[t], labels[t + 1]) for t in range(n - 1)]
        connect = {(labels[t], labels[t + 1]): step_maps[t] for t in range(n - 1)}
        return cls(
            labels,
            leq,
            dict(zip(labels, spaces_list)),
            connect,
            top=labels[-1] if top else None,
            check=check,
        )

    def le(self, i, j):
        return (i, j) in self.leq

    def covering_pairs(self):
        """Pairs i < j with nothing strictly between."""
        out = []
        for (i, j) in sorted(self.leq, key=lambda p: (self.elements.index(p[0]), self.elements.index(p[1]))):
            if i == j:
                continue
            if any(
                k not in (i, j) and self.le(i, k) and self.le(k, j)
                for k in self.elements
            ):
                continue
            out.append((i, j))
        return tuple(out)

    def maximum(self):
        for m in self.elements:
            if all(self.le(i, m) for i in self.elements):
                return m
        return None

    def is_chain(self):
        return all(
            self.le(i, j) or self.le(j, i)
            for i in self.elements
            for j in self.elements
        )

    def chain_order(self):
        if not self.is_chain():
            raise NotAChain("the index poset is not totally ordered")
        return tuple(sorted(self.elements, key=lambda e: sum(1 for i in self.elements if self.le(i, e))))

    def to_top(self, i):
        """The map f_i from the master space onto level i."""
        if self.top is None:
            raise NoTopElement("diagram has no designated top element")
        return self.connect[(i, self.top)]

    def __eq__(self, other):
        if not isinstance(other, FiltrationDiagram):
            return NotImplemented
        return (
            self.elements == other.elements
            and self.leq == other.leq
            and self.spaces == other.spaces
            and self.connect == other.connect
            and self.top == other.top
        )

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "FiltrationDiagram(elements=%r, top=%r)" % (self.elements, self.top)


@dataclass
class DiagramReport:
    ok: bool
    problems: tuple


def validate(d):
    """Report every violated diagram invariant; empty problem list means valid."""
    problems = []
    els = d.elements
    rank = {e: t for t, e in enumerate(els)}
    # order axioms (closure gives reflexivity and transitivity for free)
    for (i, j) in sorted(d.leq, key=lambda p: (rank[p[0]], rank[p[1]])):
        if rank[i] < rank[j] and (j, i) in d.leq:
            problems.append("antisymmetry fails: %r <= %r <= %r" % (i, j, i))
    for i in els:
        for j in els:
            if rank[i] < rank[j] and not any(
                d.le(i, k) and d.le(j, k) for k in els
            ):
                problems.append("no upper bound for %r, %r" % (i, j))
    backends = {d.spaces[e].backend for e in els}
    if len(backends) > 1:
        problems.append("mixed numeric backends across levels")
    # connect coverage and endpoints
    for (i, j) in sorted(d.leq, key=lambda p: (els.index(p[0]), els.index(p[1]))):
        m = d.connect.get((i, j))
        if m is None:
            problems.append("missing connecting map for %r <= %r" % (i, j))
            continue
        if m.src != d.spaces[j] or m.dst != d.spaces[i]:
            problems.append("connecting map %r <= %r has wrong endpoints" % (i, j))
        if i == j and any(m.assign[a] != a for a in m.src.atoms):
            problems.append("reflexive connect at %r is not the identity" % (i,))
        # re-run the pushforward condition defensively
        pushed = {b: m.dst.zero for b in m.dst.atoms}
        for a in m.src.atoms:
            pushed[m.assign[a]] += m.src.weight(a)
        for b in m.dst.atoms:
            if not scalar.eq(pushed[b], m.dst.weight(b), m.dst.tol):
                problems.append(
                    "connect %r <= %r is not measure preserving at %r" % (i, j, b)
                )
                break
    # functoriality over all ordered triples
    for i in els:
        for j in els:
            if not d.le(i, j):
                continue
            for k in els:
                if not d.le(j, k):
                    continue
                mij = d.connect.get((i, j))
                mjk = d.connect.get((j, k))
                mik = d.connect.get((i, k))
                if mij is None or mjk is None or mik is None:
                    continue
                for a in d.spaces[k].atoms:
                    if mik.assign[a] != mij.assign[mjk.assign[a]]:
                        problems.append(
                            "functoriality fails at %r <= %r <= %r on atom %r"
                            % (i, j, k, a)
                        )
                        break
    if d.top is not None:
        if d.top not in els:
            problems.append("top %r is not an element" % (d.top,))
        elif not all(d.le(i, d.top) for i in els):
            problems.append("top %r is not the poset maximum" % (d.top,))
        elif not generation_ok(d):
            problems.append("level fibers do not separate the top atoms")
    return DiagramReport(ok=not problems, problems=tuple(problems))


def generation_ok(d):
    """Whether the join of the level-fiber partitions of the top space is discrete.

    Two top atoms fall in the same join block iff every level map sends them
    to the same atom; the join is discrete iff the signatures are distinct.
    """
    if d.top is None:
        return False
    top_space = d.spaces[d.top]
    seen = set()
    for a in top_space.atoms:
        sig = tuple(
            d.connect[(i, d.top)].assign[a]
            for i in d.elements
            if (i, d.top) in d.connect
        )
        if sig in seen:
            return False
        seen.add(sig)
    return True


# -- martingales -------------------------------------------------------------------


@dataclass
class MartingaleCheck:
    ok: bool
    residual: object
    worst_pair: object


def is_martingale(family, d):
    """Check the consistency condition on all covering pairs.

    Transitivity plus the tower property extends the check to every pair, so
    covering pairs suffice on a validated diagram.  Returns the maximal
    residual l1(E[X_j | f_ij], X_i) and the pair attaining it.
    """
    if set(family) != set(d.elements):
        raise IndexMismatch("family is not indexed by the diagram's elements")
    for i in d.elements:
        if family[i].space != d.spaces[i]:
            raise SpaceMismatch("family member at %r lives on the wrong space" % (i,))
    tol = max(d.spaces[e].tol for e in d.elements)
    zero = d.spaces[d.elements[0]].zero
    residual, worst = zero, None
    for (i, j) in d.covering_pairs():
        r = l1_distance(cond_exp(family[j], d.connect[(i, j)]), family[i])
        if r > residual:
            residual, worst = r, (i, j)
    return MartingaleCheck(ok=scalar.eq(residual, zero, tol), residual=residual, worst_pair=worst)


class Martingale:
    """Level-indexed random variables, consistent under conditional expectation."""

    __slots__ = ("diagram", "family", "bound")

    def __init__(self, diagram, family, bound=None, check=True):
        if set(family) != set(diagram.elements):
            raise IndexMismatch("family is not indexed by the diagram's elements")
        family = {i: family[i] for i in diagram.elements}
        if bound is None:
            bound = max(
                (max_value(family[i]) for i in diagram.elements),
                default=scalar.zero(diagram.spaces[diagram.elements[0]].backend),
            )
        else:
            bound = scalar.coerce(bound, diagram.spaces[diagram.elements[0]].backend)
        if bound < 0:
            raise NegativeValue("bound must be nonnegative")
        self.diagram = diagram
        self.family = family
        self.bound = bound
        if check:
            tol = max(diagram.spaces[e].tol for e in diagram.elements)
            for i in diagram.elements:
                if not scalar.le(max_value(family[i]), bound, tol):
                    raise Inconsistent("level %r exceeds the bound %s" % (i, bound))
            chk = is_martingale(family, diagram)
            if not chk.ok:
                raise Inconsistent(
                    "consistency fails at %r with residual %s" % (chk.worst_pair, chk.residual)
                )

    def level(self, i):
        return self.family[i]

    def __repr__(self):
        return "Martingale(levels=%r, bound=%s)" % (list(self.family), self.bound)


class ConsistentMeasureFamily:
    """Level-indexed measures, consistent under pushforward, all below bound*P."""

    __slots__ = ("diagram", "family", "bound")

    def __init__(self, diagram, family, bound=None, check=True):
        if set(family) != set(diagram.elements):
            raise IndexMismatch("family is not indexed by the diagram's elements")
        family = {i: family[i] for i in diagram.elements}
        backend = diagram.spaces[diagram.elements[0]].backend
        if bound is None:
            bound = scalar.zero(backend)
            for i in diagram.elements:
                mu, sp = family[i], diagram.spaces[i]
                for w, m in zip(sp.weights, mu.mass):
                    if w > 0 and m / w > bound:
                        bound = m / w
        else:
            bound = scalar.coerce(bound, backend)
        if bound < 0:
            raise NegativeValue("bound must be nonnegative")
        self.diagram = diagram
        self.family = family
        self.bound = bound
        if check:
            tol = max(diagram.spaces[e].tol for e in diagram.elements)
            for i in diagram.elements:
                if family[i].space != diagram.spaces[i]:
                    raise SpaceMismatch("family member at %r lives on the wrong space" % (i,))
                if bound > 0 and not bound_check(family[i], bound):
                    raise Inconsistent("level %r exceeds bound * base weights" % (i,))
            for (i, j) in diagram.covering_pairs():
                pushed = pushforward(family[j], diagram.connect[(i, j)])
                gap = sum(
                    (abs(x - y) for x, y in zip(pushed.mass, family[i].mass)),
                    scalar.zero(backend),
                )
                if not scalar.eq(gap, scalar.zero(backend), tol):
                    raise Inconsistent(
                        "restriction fails at %r <= %r with residual %s" % (i, j, gap)
                    )

    def level(self, i):
        return self.family[i]

    def __repr__(self):
        return "ConsistentMeasureFamily(levels=%r, bound=%s)" % (list(self.family), self.bound)


def induced_martingale(x, d, bound=None):
    """Condition a top-level random variable down every level: X_i = E[X | f_i]."""
    if d.top is None:
        raise NoTopElement("induced martingale needs a designated top element")
    if x.space != d.spaces[d.top]:
        raise SpaceMismatch("random variable does not live on the top space")
    family = {i: cond_exp(x, d.to_top(i)) for i in d.elements}
    if bound is None:
        bound = max_value(x)
    return Martingale(d, family, bound=bound)


def restrict_measure(mu, d, bound=None):
    """Push a top-level measure onto every level: the induced consistent family."""
    if d.top is None:
        raise NoTopElement("restriction needs a designated top element")
    if mu.space != d.spaces[d.top]:
        raise SpaceMismatch("measure does not live on the top space")
    family = {i: pushforward(mu, d.to_top(i)) for i in d.elements}
    return ConsistentMeasureFamily(d, family, bound=bound)


def second_moment_gap(m, i, j):
    """E[X_j^2] - E[X_i^2], cross-checked against E[(X_j - X_i o f_ij)^2].

    The two agree exactly for martingales and the gap is nonnegative; both
    facts are verified here rather than assumed.
    """
    d = m.diagram
    if not d.le(i, j):
        raise IndexMismatch("%r <= %r does not hold in the index poset" % (i, j))
    xi, xj = m.family[i], m.family[j]
    gap = second_moment(xj) - second_moment(xi)
    lifted = pullback(xi, d.connect[(i, j)])
    cross = xj.space.zero
    for w, a, b in zip(xj.space.weights, xj.values, lifted.values):
        diff = a - b
        cross += w * diff * diff
    tol = max(xi.space.tol, xj.space.tol)
    if not scalar.eq(gap, cross, tol):
        raise InvariantViolation(
            "second-moment gap %s differs from mean-square increment %s" % (gap, cross)
        )
    if not scalar.le(xj.space.zero, gap, tol):
        raise InvariantViolation("second-moment gap %s is negative" % (gap,))
    return gap


@dataclass
class CauchyCertificate:
    index: object
    #: (level, second moment, remaining gap toward the cap) per chain level
    table: tuple
    cap: object


def cauchy_certificate(m, eps):
    """Least chain index from which all later second-moment gaps are below eps^2.

    A gap bound of eps^2 certifies l1 closeness eps between the level and any
    finer level (the mean-square increment dominates the squared l1 distance).
    With a designated top the cap is the realized limit's second moment; on a
    topless chain only the r^2 bound from X <= r is available, and if even the
    last level leaves a larger tail the certificate honestly fails.
    """
    d = m.diagram
    order = d.chain_order()
    backend = d.spaces[order[0]].backend
    eps = scalar.coerce(eps, backend)
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    tol = max(d.spaces[e].tol for e in order)
    moments = [(i, second_moment(m.family[i])) for i in order]
    if d.top is not None:
        cap = moments[-1][1]
    else:
        cap = m.bound * m.bound
    table = tuple((i, g, cap - g) for i, g in moments)
    target = eps * eps
    for i, g in moments:
        if scalar.le(cap - g, target, tol):
            return CauchyCertificate(index=i, table=table, cap=cap)
    tail = cap - moments[-1][1]
    raise NoCertificate(
        "tail gap %s exceeds eps^2 = %s" % (tail, target), tail_gap=tail
    )


def martingale_limit(m):
    """The unique top-level random variable inducing the martingale.

    Requires a designated top whose level fibers jointly separate atoms; the
    finest level then has singleton fibers and the limit is its data pulled
    back along the finest map.  The full induced family is recomputed and
    compared level by level, so a forged input cannot slip through.
    """
    d = m.diagram
    if d.top is None:
        raise NoTopElement("martingale limit needs a designated top element")
    if not generation_ok(d):
        raise GenerationFailure("level fibers do not separate the top atoms")
    chk = is_martingale(m.family, d)
    if not chk.ok:
        raise Inconsistent("not a martingale: residual %s at %r" % (chk.residual, chk.worst_pair))
    finest = d.maximum()
    fm = d.connect.get((finest, d.top))
    if fm is None:
        raise GenerationFailure("no map from the top onto the finest level")
    fibers = {}
    for a in fm.src.atoms:
        fibers.setdefault(fm.assign[a], []).append(a)
    if any(len(v) > 1 for v in fibers.values()):
        raise GenerationFailure("finest level map has a non-singleton fiber")
    x = pullback(m.family[finest], fm)
    tol = max(d.spaces[e].tol for e in d.elements)
    for i in d.elements:
        gap = l1_distance(cond_exp(x, d.to_top(i)), m.family[i])
        if not scalar.eq(gap, x.space.zero, tol):
            raise Inconsistent("reconstructed limit misses level %r by %s" % (i, gap))
    return x


def kolmogorov_extend(fam):
    """The unique top-level measure restricting to every level of the family."""
    d = fam.diagram
    if d.top is None:
        raise NoTopElement("extension needs a designated top element")
    if not generation_ok(d):
        raise GenerationFailure("level fibers do not separate the top atoms")
    finest = d.maximum()
    fm = d.connect.get((finest, d.top))
    if fm is None:
        raise GenerationFailure("no map from the top onto the finest level")
    fibers = {}
    for a in fm.src.atoms:
        fibers.setdefault(fm.assign[a], []).append(a)
    if any(len(v) > 1 for v in fibers.values()):
        raise GenerationFailure("finest level map has a non-singleton fiber")
    mu_fine = fam.family[finest]
    mu = FiniteMeasure(
        d.spaces[d.top], [mu_fine.mass_of(fm.assign[a]) for a in fm.src.atoms]
    )
    backend = d.spaces[d.top].backend
    tol = max(d.spaces[e].tol for e in d.elements)
    for i in d.elements:
        pushed = pushforward(mu, d.to_top(i))
        gap = sum(
            (abs(x - y) for x, y in zip(pushed.mass, fam.family[i].mass)),
            scalar.zero(backend),
        )
        if not scalar.eq(gap, scalar.zero(backend), tol):
            raise Inconsistent("extension misses level %r by %s" % (i, gap))
    if fam.bound > 0 and not bound_check(mu, fam.bound):
        raise InvariantViolation("extension violates the family bound")
    return mu


def rn_family(fam):
    """Levelwise densities of a consistent measure family form a martingale."""
    family = {i: rn_derivative(fam.family[i]) for i in fam.diagram.elements}
    return Martingale(fam.diagram, family, bound=fam.bound)


@dataclass
class IsometryReport:
    sup_levels: object
    limit_distance: object
    tail_bound: object
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self):
        return self.lower_ok and self.upper_ok


def isometry_report(m1, m2, x1, x2, finest_map=None):
    """Compare the level-sup distance of two martingales with their limits' distance.

    s = max over levels of l1(X_i, Y_i) and d = l1(X, Y) satisfy s <= d, and
    d - s is bounded by how far each limit sits from its own finest-level
    conditional expectation.  When the limits live on the diagram's top the
    finest level is top itself, the bound is zero, and s = d exactly; when
    they live on a strictly finer space, pass `finest_map` from that space
    onto the diagram's finest level.
    """
    if m1.diagram != m2.diagram:
        raise DiagramMismatch("martingales live over different diagrams")
    if x1.space != x2.space:
        raise SpaceMismatch("limit candidates live on different spaces")
    d = m1.diagram
    sup = x1.space.zero
    for i in d.elements:
        v = l1_distance(m1.family[i], m2.family[i])
        if v > sup:
            sup = v
    dist = l1_distance(x1, x2)
    if finest_map is None:
        if d.top is None or x1.space != d.spaces[d.top]:
            raise DomainMismatch(
                "limits do not live on the diagram's top; pass finest_map explicitly"
            )
        finest_map = d.connect[(d.maximum(), d.top)]
    else:
        if finest_map.src != x1.space or finest_map.dst != d.spaces[d.maximum()]:
            raise DomainMismatch("finest_map must send the limits' space onto the finest level")
    bound = x1.space.zero
    for x in (x1, x2):
        bound += l1_distance(x, pullback(cond_exp(x, finest_map), finest_map))
    tol = max(x1.space.tol, max(d.spaces[e].tol for e in d.elements))
    return IsometryReport(
        sup_levels=sup,
        limit_distance=dist,
        tail_bound=bound,
        lower_ok=scalar.le(sup, dist, tol),
        upper_ok=scalar.le(dist, sup + bound, tol),
    )


# -- dyadic ground truth ---------------------------------------------------------


class DyadicGround:
    """Piecewise-affine nonnegative function on [0,1] with rational breakpoints.

    Every integral used by the engine (interval averages, absolute-error
    integrals, second moments) has a closed form in exact rationals, so the
    dyadic experiments are oracle-grade: no quadrature error anywhere.
    """

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints, values):
        bps = tuple(Fraction(b) for b in breakpoints)
        vals = tuple(Fraction(v) for v in values)
        if len(bps) < 2 or len(vals) != len(bps):
            raise BadSegments("need n >= 2 breakpoints with one value each")
        if bps[0] != 0 or bps[-1] != 1:
            raise BadSegments("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise BadSegments("breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise NegativeValue("ground function values must be nonnegative")
        self.breakpoints = bps
        self.values = vals

    @classmethod
    def affine(cls, v0, v1):
        return cls([0, 1], [v0, v1])

    @classmethod
    def constant(cls, c):
        return cls([0, 1], [c, c])

    def bound(self):
        """Least r with f <= r (affine pieces peak at breakpoints)."""
        return max(self.values)

    def value_at(self, x):
        x = Fraction(x)
        bps, vals = self.breakpoints, self.values
        for t in range(len(bps) - 1):
            if bps[t] <= x <= bps[t + 1]:
                lo, hi = bps[t], bps[t + 1]
                return vals[t] + (vals[t + 1] - vals[t]) * (x - lo) / (hi - lo)
        raise ValueError("argument %s outside [0,1]" % (x,))

    def _pieces(self, lo, hi):
        """Affine pieces covering [lo,hi]: (a, b, f(a), f(b)) per piece."""
        cuts = [lo]
        for b in self.breakpoints:
            if lo < b < hi:
                cuts.append(b)
        cuts.append(hi)
        return [
            (a, b, self.value_at(a), self.value_at(b))
            for a, b in zip(cuts, cuts[1:])
        ]

    def integral(self, lo, hi):
        """Exact integral of f over [lo,hi] (sum of trapezoids)."""
        lo, hi = Fraction(lo), Fraction(hi)
        total = Fraction(0)
        for a, b, fa, fb in self._pieces(lo, hi):
            total += (b - a) * (fa + fb) / 2
        return total

    def interval_average(self, lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        return self.integral(lo, hi) / (hi - lo)

    def abs_dev_integral(self, lo, hi, c):
        """Exact integral of |f - c| over [lo,hi], splitting each piece at its root."""
        lo, hi, c = Fraction(lo), Fraction(hi), Fraction(c)
        total = Fraction(0)
        for a, b, fa, fb in self._pieces(lo, hi):
            ea, eb = fa - c, fb - c
            if ea * eb >= 0:
                total += abs(ea + eb) * (b - a) / 2
            else:
                root = a + (b - a) * ea / (ea - eb)
                total += abs(ea) * (root - a) / 2 + abs(eb) * (b - root) / 2
        return total


def dyadic_space(depth):
    """2^depth equal-weight atoms labeled 0..2^depth-1."""
    from .finprob import FiniteProbSpace

    n = 1 << depth
    return FiniteProbSpace(range(n), [Fraction(1, n)] * n)


def make_dyadic(ground, depth):
    """Chain of dyadic quotients 0..depth with the ground function's averages.

    Level t has 2^t atoms; the step map halves indices; the martingale level
    t value at atom j is the exact average of the ground function over
    [j/2^t, (j+1)/2^t].  The top is the finest level.
    """
    if not isinstance(ground, DyadicGround):
        raise BadSegments("ground must be a DyadicGround")
    if depth < 0 or depth > MAX_DYADIC_DEPTH:
        raise DepthTooLarge("depth must lie in 0..%d" % MAX_DYADIC_DEPTH)
    spaces = [dyadic_space(t) for t in range(depth + 1)]
    steps = [
        MeasurePreservingMap(
            spaces[t + 1], spaces[t], {j: j >> 1 for j in spaces[t + 1].atoms}
        )
        for t in range(depth)
    ]
    diagram = FiltrationDiagram.chain(spaces, steps, top=True)
    family = {}
    for t in range(depth + 1):
        n = 1 << t
        vals = [ground.interval_average(Fraction(j, n), Fraction(j + 1, n)) for j in range(n)]
        family[t] = FiniteRandomVariable(spaces[t], vals)
    mart = Martingale(diagram, family, bound=ground.bound())
    return diagram, mart


def dyadic_error(ground, depth):
    """Exact l1 distance between the ground function and its depth-n averages."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    n = 1 << depth
    total = Fraction(0)
    for j in range(n):
        lo, hi = Fraction(j, n), Fraction(j + 1, n)
        total += ground.abs_dev_integral(lo, hi, ground.interval_average(lo, hi))
    return total


# -- second-moment identity suite ---------------------------------------------------


@dataclass
class SecondMomentIdentities:
    product_expansion: bool
    cross_moment: bool
    square_expansion: bool
    moment_values: bool
    moment_monotone: bool
    gap_identity: bool
    fine_moment: object
    coarse_moment: object
    mean_square_increment: object

    @property
    def ok(self):
        return (
            self.product_expansion
            and self.cross_moment
            and self.square_expansion
            and self.moment_values
            and self.moment_monotone
            and self.gap_identity
        )

    def items(self):
        return (
            ("product-expansion", self.product_expansion),
            ("cross-moment", self.cross_moment),
            ("square-expansion", self.square_expansion),
            ("moment-values", self.moment_values),
            ("moment-monotone", self.moment_monotone),
            ("gap-identity", self.gap_identity),
        )


def second_moment_identity_report(x, fine, coarse, step):
    """Verify the six second-moment identities for one commuting triangle.

    `fine` and `coarse` share x's space as source, `step` closes the triangle
    (step o fine = coarse, checked).  With c_f = E[x|fine] and c_g = E[x|coarse]
    lifted back to the source, the identities relate their products, squares,
    expectations, and the gap E[(lift_f)^2] - E[(lift_g)^2] to the mean-square
    increment.  Pointwise statements are checked on positive-weight atoms
    (values on null atoms are canonicalized to zero).
    """
    if fine.src != x.space or coarse.src != x.space:
        raise SpaceMismatch("maps must start at the random variable's space")
    if step.src != fine.dst or step.dst != coarse.dst:
        raise DomainMismatch("step map must close the triangle fine -> coarse")
    for a in x.space.atoms:
        if step.assign[fine.assign[a]] != coarse.assign[a]:
            raise DomainMismatch("triangle does not commute at atom %r" % (a,))
    omega = x.space
    tol = omega.tol
    c_f = cond_exp(x, fine)
    c_g = cond_exp(x, coarse)
    sf = pullback(c_f, fine)
    sg = pullback(c_g, coarse)
    a_atoms, b_atoms = fine.dst.atoms, coarse.dst.atoms

    def positive(atom):
        return omega.weight(atom) > 0

    # (product expansion) sf*sg as the literal double sum over coarse fibers
    product_ok = True
    for w_atom in omega.atoms:
        if not positive(w_atom):
            continue
        lhs = sf.value(w_atom) * sg.value(w_atom)
        rhs = omega.zero
        for b in b_atoms:
            inner = omega.zero
            for a in a_atoms:
                if step.assign[a] == b and fine.assign[w_atom] == a:
                    inner += c_f.value(a)
            rhs += c_g.value(b) * inner
        if not scalar.eq(lhs, rhs, tol):
            product_ok = False
            break
    # (cross moment) E[sf*sg] = sum of squared coarse values against coarse weights
    e_cross = omega.zero
    for w, vf, vg in zip(omega.weights, sf.values, sg.values):
        e_cross += w * vf * vg
    coarse_sq = omega.zero
    for b in b_atoms:
        coarse_sq += c_g.value(b) ** 2 * coarse.dst.weight(b)
    cross_ok = scalar.eq(e_cross, coarse_sq, tol)
    # (square expansion) pointwise squares expand over the fibers
    square_ok = True
    for w_atom in omega.atoms:
        if not positive(w_atom):
            continue
        if not scalar.eq(sg.value(w_atom) ** 2, c_g.value(coarse.assign[w_atom]) ** 2, tol):
            square_ok = False
            break
        if not scalar.eq(sf.value(w_atom) ** 2, c_f.value(fine.assign[w_atom]) ** 2, tol):
            square_ok = False
            break
    # (moment values) both second moments against the quotient weights
    fine_sq = omega.zero
    for a in a_atoms:
        fine_sq += c_f.value(a) ** 2 * fine.dst.weight(a)
    m_sf = second_moment(sf)
    m_sg = second_moment(sg)
    values_ok = scalar.eq(m_sg, coarse_sq, tol) and scalar.eq(m_sf, fine_sq, tol)
    # (monotonicity) coarse moment never exceeds fine moment
    mono_ok = scalar.le(m_sg, m_sf, tol)
    # (gap identity) moment gap equals the mean-square increment
    increment = omega.zero
    for w, vf, vg in zip(omega.weights, sf.values, sg.values):
        diff = vf - vg
        increment += w * diff * diff
    gap_ok = scalar.eq(m_sf - m_sg, increment, tol)
    return SecondMomentIdentities(
        product_expansion=product_ok,
        cross_moment=cross_ok,
        square_expansion=square_ok,
        moment_values=values_ok,
        moment_monotone=mono_ok,
        gap_identity=gap_ok,
        fine_moment=m_sf,
        coarse_moment=m_sg,
        mean_square_increment=increment,
    )
