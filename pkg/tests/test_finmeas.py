import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catprob import errors
from catprob.finmeas import (
    base_measure,
    bound_check,
    make_measure,
    pushforward,
    rho,
    rn_derivative,
    truncate_measure,
    tv_distance,
    zero_measure,
)
from catprob.finprob import compose, identity_map, make_map, make_space, uniform_space
from catprob.finrv import cond_exp, constant_rv, l1_distance, make_rv
from catprob.sampling import rand_measure, rand_quotient, rand_rv, rand_space

from oracles import tv_partition_supremum


@st.composite
def seeded_rng(draw):
    return random.Random(draw(st.integers(0, 2**32 - 1)))


SKEW = make_space(["a", "b"], [F(1, 4), F(3, 4)])


def test_absolute_continuity_enforced():
    s = make_space(["a", "n"], [1, 0])
    with pytest.raises(errors.NotAbsolutelyContinuous):
        make_measure(s, [F(1, 2), F(1, 8)])


class TestTV:
    def test_zero_on_equal(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        assert tv_distance(mu, mu) == 0

    def test_worked_example(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        assert tv_distance(mu, base_measure(SKEW)) == F(3, 8)

    def test_space_mismatch(self):
        with pytest.raises(errors.SpaceMismatch):
            tv_distance(zero_measure(SKEW), zero_measure(uniform_space(2)))

    @settings(max_examples=50, deadline=None)
    @given(seeded_rng())
    def test_equals_partition_supremum(self, rng):
        space = rand_space(rng, max_atoms=4)
        mu = rand_measure(rng, space, bound=2)
        nu = rand_measure(rng, space, bound=2)
        assert tv_distance(mu, nu) == tv_partition_supremum(mu, nu)


class TestPushforward:
    def test_identity(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        assert pushforward(mu, identity_map(SKEW)) == mu

    def test_pairing_example(self):
        u4 = uniform_space(4)
        pair = make_map(u4, uniform_space(2), {0: 0, 1: 0, 2: 1, 3: 1})
        mu = make_measure(u4, ["1/8", "1/8", "3/8", "3/8"])
        assert pushforward(mu, pair).mass == (F(1, 4), F(3, 4))

    def test_base_measure_goes_to_target_weights(self):
        u4 = uniform_space(4)
        skew = make_space(["x", "y"], [F(1, 4), F(3, 4)])
        m = make_map(u4, skew, {0: "x", 1: "y", 2: "y", 3: "y"})
        assert pushforward(base_measure(u4), m) == base_measure(skew)

    @settings(max_examples=50, deadline=None)
    @given(seeded_rng())
    def test_functorial(self, rng):
        space = rand_space(rng)
        f = rand_quotient(rng, space)
        g = rand_quotient(rng, f.dst)
        mu = rand_measure(rng, space, bound=2)
        assert pushforward(mu, compose(f, g)) == pushforward(pushforward(mu, f), g)

    @settings(max_examples=50, deadline=None)
    @given(seeded_rng())
    def test_contraction(self, rng):
        space = rand_space(rng)
        s = rand_quotient(rng, space)
        mu = rand_measure(rng, space, bound=2)
        nu = rand_measure(rng, space, bound=2)
        assert tv_distance(pushforward(mu, s), pushforward(nu, s)) <= tv_distance(mu, nu)

    @settings(max_examples=50, deadline=None)
    @given(seeded_rng())
    def test_preserves_total_and_bound(self, rng):
        space = rand_space(rng)
        s = rand_quotient(rng, space)
        mu = rand_measure(rng, space, bound=F(3, 2))
        out = pushforward(mu, s)
        assert out.total() == mu.total()
        assert bound_check(out, F(3, 2))


class TestBoundAndTruncate:
    def test_base_measure_bound_one(self):
        assert bound_check(base_measure(SKEW), 1)

    def test_worked_bound_examples(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        assert bound_check(mu, 1)
        assert not bound_check(mu, F(1, 4))

    def test_truncate_noop_when_bounded(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        assert truncate_measure(mu, 1) == mu

    def test_truncate_clips(self):
        u2 = uniform_space(2)
        mu = make_measure(u2, [2, 0])
        assert truncate_measure(mu, 1).mass == (F(1, 2), F(0))

    @settings(max_examples=50, deadline=None)
    @given(seeded_rng())
    def test_truncation_distance_identity(self, rng):
        # tv(mu, mu meet n*P) is exactly the lost total mass
        space = rand_space(rng)
        mu = rand_measure(rng, space, bound=3)
        n = F(rng.randint(1, 3))
        trunc = truncate_measure(mu, n)
        assert bound_check(trunc, n)
        assert tv_distance(mu, trunc) == mu.total() - trunc.total()

    @settings(max_examples=40, deadline=None)
    @given(seeded_rng())
    def test_truncation_converges_as_level_grows(self, rng):
        space = rand_space(rng)
        mu = rand_measure(rng, space, bound=3)
        errs = [tv_distance(mu, truncate_measure(mu, n)) for n in range(1, 6)]
        assert all(a >= b for a, b in zip(errs, errs[1:]))
        assert errs[-1] == 0  # masses are below 3 * weights, so level 5 dominates


class TestDensityCorrespondence:
    def test_unit_density_gives_base_measure(self):
        assert rho(constant_rv(SKEW, 1)) == base_measure(SKEW)

    def test_worked_example(self):
        g = make_rv(SKEW, ["1/2", "2/3"])
        assert rho(g).mass == (F(1, 8), F(1, 2))

    def test_zero_density(self):
        assert rho(constant_rv(SKEW, 0)) == zero_measure(SKEW)

    def test_derivative_of_base_is_one(self):
        assert rn_derivative(base_measure(SKEW)) == constant_rv(SKEW, 1)

    def test_derivative_worked_example(self):
        mu = make_measure(SKEW, [F(1, 8), F(1, 2)])
        g = rn_derivative(mu)
        assert g.values == (F(1, 2), F(2, 3))
        assert rho(g) == mu

    def test_null_atom_convention(self):
        s = make_space(["a", "n"], [1, 0])
        mu = make_measure(s, [F(1, 3), 0])
        assert rn_derivative(mu).value("n") == 0

    @settings(max_examples=60, deadline=None)
    @given(seeded_rng())
    def test_roundtrip_both_ways(self, rng):
        space = rand_space(rng)
        mu = rand_measure(rng, space, bound=2)
        assert rho(rn_derivative(mu)) == mu
        g = rand_rv(rng, space, bound=2)
        assert rn_derivative(rho(g)) == g  # canonical representatives on both sides

    @settings(max_examples=60, deadline=None)
    @given(seeded_rng())
    def test_isometry(self, rng):
        space = rand_space(rng)
        f = rand_rv(rng, space, bound=2)
        g = rand_rv(rng, space, bound=2)
        assert tv_distance(rho(f), rho(g)) == l1_distance(f, g)

    @settings(max_examples=60, deadline=None)
    @given(seeded_rng())
    def test_naturality_square(self, rng):
        space = rand_space(rng)
        s = rand_quotient(rng, space)
        g = rand_rv(rng, space, bound=2)
        assert pushforward(rho(g), s) == rho(cond_exp(g, s))

    @settings(max_examples=40, deadline=None)
    @given(seeded_rng())
    def test_bounded_density_gives_bounded_measure(self, rng):
        space = rand_space(rng)
        g = rand_rv(rng, space, bound=F(5, 4))
        assert bound_check(rho(g), F(5, 4))
