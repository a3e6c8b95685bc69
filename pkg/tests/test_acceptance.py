"""Acceptance gate: each criterion runs at its stated tolerance and budget
and prints one pass/fail line (run with `pytest tests/test_acceptance.py -v -s`).
"""
import random
from fractions import Fraction as F
from time import perf_counter

from catprob import scalar
from catprob.diagram import (
    DyadicGround,
    dyadic_error,
    induced_martingale,
    kolmogorov_extend,
    make_dyadic,
    martingale_limit,
    restrict_measure,
    rn_family,
    second_moment_gap,
    second_moment_identity_report,
)
from catprob.finmeas import pushforward, rho, rn_derivative, tv_distance
from catprob.finprob import compose, identity_map, make_map, map_distance, uniform_space
from catprob.finrv import cond_exp, l1_distance, make_rv, second_moment
from catprob.metcat import (
    FinPseudometricSpace,
    LipschitzMap,
    coequalizer,
    coproduct,
    curry,
    product,
    tensor,
    uncurry,
)
from catprob.sampling import (
    rand_commuting_triangle,
    rand_lipschitz_map,
    rand_measure,
    rand_metric_space,
    rand_parallel_map,
    rand_quotient,
    rand_refining_chain,
    rand_rv,
    rand_space,
)

from oracles import tv_partition_supremum


def _finish(number, name, t0, budget, violations):
    elapsed = perf_counter() - t0
    ok = violations == 0 and elapsed < budget
    print(
        "[criterion %d] %s: %s (%.2fs, %d violations)"
        % (number, name, "PASS" if ok else "FAIL", elapsed, violations)
    )
    assert violations == 0, "%d violations in %s" % (violations, name)
    assert elapsed < budget, "%s took %.2fs (budget %s s)" % (name, elapsed, budget)


def test_criterion_1_density_roundtrip():
    rng = random.Random(101)
    t0 = perf_counter()
    bad = 0
    for _ in range(1000):
        space = rand_space(rng, max_atoms=8)
        mu = rand_measure(rng, space, bound=F(rng.randint(1, 4)))
        if rho(rn_derivative(mu)) != mu:
            bad += 1
    for _ in range(200):
        space = rand_space(rng, max_atoms=8, backend=scalar.FLOAT)
        mu = rand_measure(rng, space, bound=2)
        if tv_distance(rho(rn_derivative(mu)), mu) > 1e-12:
            bad += 1
    _finish(1, "finite density roundtrip", t0, 5.0, bad)


def test_criterion_2_density_isometry():
    rng = random.Random(202)
    t0 = perf_counter()
    bad = 0
    oracle_checked = 0
    for trial in range(1000):
        space = rand_space(rng, max_atoms=4 if trial % 2 else 8)
        f = rand_rv(rng, space, bound=2)
        g = rand_rv(rng, space, bound=2)
        if tv_distance(rho(f), rho(g)) != l1_distance(f, g):
            bad += 1
        if space.size <= 4:
            oracle_checked += 1
            if tv_distance(rho(f), rho(g)) != tv_partition_supremum(rho(f), rho(g)):
                bad += 1
    assert oracle_checked >= 400
    _finish(2, "density map is an isometry", t0, 10.0, bad)


def test_criterion_3_naturality_square():
    rng = random.Random(303)
    t0 = perf_counter()
    bad = 0
    for _ in range(1000):
        space = rand_space(rng, max_atoms=8)
        s = rand_quotient(rng, space)
        g = rand_rv(rng, space, bound=F(rng.randint(1, 3)))
        if pushforward(rho(g), s) != rho(cond_exp(g, s)):
            bad += 1
    _finish(3, "density naturality square", t0, 5.0, bad)


def test_criterion_4_second_moment_identities():
    rng = random.Random(404)
    t0 = perf_counter()
    bad = 0
    for _ in range(500):
        omega = rand_space(rng, max_atoms=8)
        fine, coarse, step = rand_commuting_triangle(rng, omega)
        x = rand_rv(rng, omega, bound=2)
        if not second_moment_identity_report(x, fine, coarse, step).ok:
            bad += 1
    # worked instance: uniform-4, pairing, X = (0,1,2,3)
    u4, u2 = uniform_space(4), uniform_space(2)
    pair = make_map(u4, u2, {0: 0, 1: 0, 2: 1, 3: 1})
    x = make_rv(u4, [0, 1, 2, 3])
    rep = second_moment_identity_report(x, identity_map(u4), pair, pair)
    if not (
        rep.ok
        and rep.fine_moment - rep.coarse_moment == F(1, 4)
        and rep.mean_square_increment == F(1, 4)
    ):
        bad += 1
    _finish(4, "second-moment identity suite", t0, 5.0, bad)


def test_criterion_5_dyadic_convergence_rate():
    t0 = perf_counter()
    bad = 0
    ground = DyadicGround.affine(0, 1)
    _, mart = make_dyadic(ground, 12)
    moments = [second_moment(mart.family[n]) for n in range(13)]
    for n in range(13):
        if dyadic_error(ground, n) != F(1, 2 ** (n + 2)):
            bad += 1
    telescoped = sum(
        (second_moment_gap(mart, n, n + 1) for n in range(12)), F(0)
    )
    if abs(telescoped - (moments[12] - moments[0])) > F(1, 10**12):
        bad += 1
    _finish(5, "dyadic convergence rate", t0, 10.0, bad)


def test_criterion_6_martingale_reconstruction():
    rng = random.Random(606)
    t0 = perf_counter()
    bad = 0
    for _ in range(500):
        top = uniform_space(1 << rng.randint(1, 6))
        d = rand_refining_chain(rng, top, rng.randint(1, 4))
        x = rand_rv(rng, top, bound=F(rng.randint(1, 3)))
        if martingale_limit(induced_martingale(x, d)) != x:
            bad += 1
    _finish(6, "martingale reconstruction", t0, 10.0, bad)


def test_criterion_7_extension_and_density_square():
    rng = random.Random(707)
    t0 = perf_counter()
    bad = 0
    for _ in range(500):
        top = uniform_space(1 << rng.randint(1, 5))
        d = rand_refining_chain(rng, top, rng.randint(1, 3))
        mu = rand_measure(rng, top, bound=F(rng.randint(1, 3)))
        fam = restrict_measure(mu, d)
        if kolmogorov_extend(fam) != mu:
            bad += 1
        if rn_derivative(kolmogorov_extend(fam)) != martingale_limit(rn_family(fam)):
            bad += 1
    _finish(7, "measure extension and density square", t0, 10.0, bad)


def test_criterion_8_lipschitz_estimates():
    rng = random.Random(808)
    t0 = perf_counter()
    bad = 0
    for _ in range(1000):
        space = rand_space(rng, max_atoms=8)
        r = F(rng.randint(1, 3), rng.choice((1, 2)))
        f1 = rand_quotient(rng, space, max_classes=6)
        f2 = rand_parallel_map(rng, f1)
        g1 = rand_quotient(rng, f1.dst, max_classes=6)
        g2 = rand_parallel_map(rng, g1)
        d_f = map_distance(f1, f2)
        if map_distance(compose(f1, g1), compose(f2, g2)) > map_distance(g1, g2) + d_f:
            bad += 1
        mu = rand_measure(rng, space, bound=r)
        if tv_distance(pushforward(mu, f1), pushforward(mu, f2)) > r * d_f:
            bad += 1
        x = rand_rv(rng, space, bound=r)
        if l1_distance(cond_exp(x, f1), cond_exp(x, f2)) > r * d_f:
            bad += 1
    _finish(8, "map-metric estimates", t0, 20.0, bad)


def test_criterion_9_metric_constructions():
    rng = random.Random(909)
    t0 = perf_counter()
    bad = 0
    # constructions re-validate the axioms on every build (full triple scan)
    for _ in range(60):
        x = rand_metric_space(rng, max_points=4)
        y = rand_metric_space(rng, max_points=4)
        product([x, y])
        tensor(x, y)
        coproduct([x, y])
        f = rand_lipschitz_map(rng, x, y)
        g = rand_lipschitz_map(rng, x, y)
        coequalizer(f, g)
    for _ in range(200):
        x = rand_metric_space(rng, max_points=4)
        y = rand_metric_space(rng, max_points=4)
        z = rand_metric_space(rng, max_points=4)
        h = rand_lipschitz_map(rng, tensor(x, y), z)
        if uncurry(curry(h, x, y).per_point, x, y).assign != h.assign:
            bad += 1
    # quotient metric worked example: identify a ~ b, then d([a],[c]) = 1
    yspace = FinPseudometricSpace(["a", "b", "c"], [[0, 2, 3], [2, 0, 1], [3, 1, 0]])
    one = FinPseudometricSpace(["*"], [[0]])
    fa = LipschitzMap(one, yspace, {"*": "a"})
    fb = LipschitzMap(one, yspace, {"*": "b"})
    res = coequalizer(fa, fb)
    if res.space.distance(("a", "b"), ("c",)) != F(1):
        bad += 1
    _finish(9, "metric construction suite", t0, 5.0, bad)
