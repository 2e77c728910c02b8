"""The three inversion routes and the identities tying them together."""

import random
from fractions import Fraction

import pytest

from agcalc.errors import (
    ContractViolation,
    PreconditionError,
    TruncationError,
)
from agcalc.inversion import (
    ABHYANKAR_GURJAR,
    FIXED_POINT,
    LAMBDA_SERIES,
    ag_apply,
    ag_jacobian_identity,
    cross_method_results,
    f_from_h,
    invert_ag,
    invert_fixed_point,
    invert_lambda,
    jacobian_factor,
    lambda_compose,
    verify_phi_exponential,
    verify_round_trip,
    xi_moment_series,
)
from agcalc.poly import (
    MapTuple,
    SeriesTrunc,
    SparsePoly,
    VarSet,
    compose,
    det,
    exact_div,
    jacobian,
    xi_pairing,
)

Z1 = VarSet.z(1)
Z2 = VarSet.z(2)

CATALAN = [1, 1, 2, 5, 14, 42, 132]


def one_var_square():
    """H = z^2 in one variable; G is the Catalan generating series."""
    return MapTuple.exact((SparsePoly.monomial(Z1, (2,)),))


def catalan_series(bound):
    z = SparsePoly.z_var(Z1, 0)
    acc = SparsePoly.zero(Z1)
    for k in range(bound):
        acc = acc + z.power(k + 1).scale(CATALAN[k])
    return acc


def triangular_2d():
    """H = (z2^2, 0); the inverse is (z1 + z2^2, z2) exactly."""
    return MapTuple.exact((SparsePoly.monomial(Z2, (0, 2)), SparsePoly.zero(Z2)))


def random_h(rng, n, trunc=None, min_order=2, max_deg=4, terms=3):
    vs = VarSet.z(n)
    comps = []
    for _ in range(n):
        t = {}
        for _ in range(rng.randint(1, terms)):
            d = rng.randint(min_order, max_deg)
            exps = [0] * n
            for _ in range(d):
                exps[rng.randrange(n)] += 1
            c = rng.randint(-2, 2)
            if c:
                t[tuple(exps)] = t.get(tuple(exps), Fraction(0)) + Fraction(c)
        comps.append(SparsePoly(vs, t))
    if trunc is None:
        return MapTuple.exact(tuple(comps))
    return MapTuple.truncated(tuple(comps), trunc)


class TestFixedPoint:
    def test_catalan_to_degree_five(self):
        res = invert_fixed_point(one_var_square(), 5)
        assert res.G.components[0] == catalan_series(5)
        assert res.method == FIXED_POINT

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z1),))
        res = invert_fixed_point(h, 4)
        assert res.G == MapTuple.identity(Z1, 4)
        assert res.N.components[0].is_zero

    def test_triangular(self):
        res = invert_fixed_point(triangular_2d(), 4)
        expected = (SparsePoly.z_var(Z2, 0) + SparsePoly.monomial(Z2, (0, 2)),
                    SparsePoly.z_var(Z2, 1))
        assert res.G.components == expected

    def test_order_precondition(self):
        h = MapTuple.exact((SparsePoly.z_var(Z1, 0),))  # order 1
        with pytest.raises(PreconditionError):
            invert_fixed_point(h, 3)

    def test_trunc_precondition(self):
        h = MapTuple.truncated((SparsePoly.monomial(Z1, (2,)),), 3)
        with pytest.raises(TruncationError):
            invert_fixed_point(h, 4)


class TestDerivativeSumRoute:
    def test_hand_computed_degree_three(self):
        res = invert_ag(one_var_square(), 3)
        z = SparsePoly.z_var(Z1, 0)
        assert res.G.components[0] == z + z.power(2) + z.power(3).scale(2)

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        assert invert_ag(h, 3).G == MapTuple.identity(Z2, 3)

    def test_triangular_matches_oracle(self):
        res = invert_ag(triangular_2d(), 4)
        assert res.G == invert_fixed_point(triangular_2d(), 4).G

    def test_jacobian_factor(self):
        # H = z^2: JF = 1 - 2z
        jf = jacobian_factor(one_var_square(), 5)
        z = SparsePoly.z_var(Z1, 0)
        assert jf == SparsePoly.one(Z1) - z.scale(2)

    def test_series_needs_one_extra_degree(self):
        h = MapTuple.truncated((SparsePoly.monomial(Z1, (2,)),), 4)
        with pytest.raises(TruncationError):
            invert_ag(h, 4)
        assert invert_ag(h, 3).G.components[0] == catalan_series(3)

    def test_debug_mode_checks_discards(self):
        res = invert_ag(one_var_square(), 4, debug=True)
        assert res.checked_discards > 0
        assert res.G.components[0] == catalan_series(4)


class TestAgApply:
    def test_u_equals_z_reduces_to_inversion(self):
        got = ag_apply(SparsePoly.z_var(Z1, 0), one_var_square(), 4)
        assert got.poly == invert_ag(one_var_square(), 4).G.components[0]

    def test_square_of_catalan(self):
        # u = z^2 composed with G: z^2 + 2z^3 + 5z^4 mod degree > 4
        got = ag_apply(SparsePoly.monomial(Z1, (2,)), one_var_square(), 4)
        z = SparsePoly.z_var(Z1, 0)
        assert got.poly == z.power(2) + z.power(3).scale(2) + z.power(4).scale(5)

    def test_constants_fixed(self):
        got = ag_apply(SparsePoly.const(Z1, Fraction(3, 7)), one_var_square(), 4)
        assert got.poly == SparsePoly.const(Z1, Fraction(3, 7))

    def test_matches_oracle_composition(self):
        rng = random.Random(41)
        for _ in range(8):
            h = random_h(rng, 2, max_deg=3)
            u = SparsePoly.monomial(Z2, (1, 1)) + SparsePoly.z_var(Z2, 0)
            got = ag_apply(u, h, 5)
            oracle = invert_fixed_point(h, 5)
            assert got == compose(u, oracle.G, 5)

    def test_series_u_accepted_at_matching_trunc(self):
        u = SeriesTrunc.of(SparsePoly.z_var(Z1, 0) + SparsePoly.monomial(Z1, (3,)), 4)
        got = ag_apply(u, one_var_square(), 4)
        oracle = invert_fixed_point(one_var_square(), 4)
        assert got == compose(u, oracle.G, 4)
        with pytest.raises(TruncationError):
            ag_apply(SeriesTrunc.of(SparsePoly.z_var(Z1, 0), 3), one_var_square(), 4)


class TestAgJacobianIdentity:
    def test_central_binomials(self):
        # u = 1, H = z^2: both sides equal JG = 1 + 2z + 6z^2 + 20z^3
        rep = ag_jacobian_identity(SparsePoly.one(Z1), one_var_square(), 3)
        assert rep.passed
        z = SparsePoly.z_var(Z1, 0)
        expected = (SparsePoly.one(Z1) + z.scale(2) + z.power(2).scale(6)
                    + z.power(3).scale(20))
        assert rep.lhs == expected

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z1),))
        rep = ag_jacobian_identity(SparsePoly.one(Z1), h, 3)
        assert rep.passed and rep.lhs == SparsePoly.one(Z1)

    def test_triangular_with_u_z1(self):
        rep = ag_jacobian_identity(SparsePoly.z_var(Z2, 0), triangular_2d(), 4)
        assert rep.passed
        # JG = 1 for the triangular map, so the common value is G_1
        assert rep.lhs == SparsePoly.z_var(Z2, 0) + SparsePoly.monomial(Z2, (0, 2))

    def test_random_maps(self):
        rng = random.Random(43)
        for _ in range(6):
            h = random_h(rng, 2, max_deg=3)
            u = SparsePoly.z_var(Z2, 1) + SparsePoly.const(Z2, 2)
            assert ag_jacobian_identity(u, h, 4).passed


class TestLambdaSeriesRoute:
    def test_catalan(self):
        res = invert_lambda(one_var_square(), 3)
        z = SparsePoly.z_var(Z1, 0)
        assert res.G.components[0] == z + z.power(2) + z.power(3).scale(2)
        assert res.method == LAMBDA_SERIES

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z1),))
        assert invert_lambda(h, 4).G == MapTuple.identity(Z1, 4)

    def test_triangular(self):
        res = invert_lambda(triangular_2d(), 4)
        assert res.G == invert_fixed_point(triangular_2d(), 4).G

    def test_debug_discards(self):
        res = invert_lambda(one_var_square(), 5, debug=True)
        assert res.checked_discards > 0
        assert res.G.components[0] == catalan_series(5)


class TestLambdaCompose:
    def test_square_example(self):
        got = lambda_compose(SparsePoly.monomial(Z1, (2,)), one_var_square(), 4)
        z = SparsePoly.z_var(Z1, 0)
        assert got.poly == z.power(2) + z.power(3).scale(2) + z.power(4).scale(5)

    def test_constant(self):
        got = lambda_compose(SparsePoly.one(Z2), triangular_2d(), 4)
        assert got.poly == SparsePoly.one(Z2)

    def test_z1_on_triangular(self):
        got = lambda_compose(SparsePoly.z_var(Z2, 0), triangular_2d(), 4)
        assert got.poly == SparsePoly.z_var(Z2, 0) + SparsePoly.monomial(Z2, (0, 2))

    def test_agrees_with_oracle(self):
        rng = random.Random(47)
        for _ in range(6):
            h = random_h(rng, 2, max_deg=3)
            q = SparsePoly.monomial(Z2, (0, 2)) - SparsePoly.z_var(Z2, 0)
            oracle = invert_fixed_point(h, 5)
            assert lambda_compose(q, h, 5) == compose(q, oracle.G, 5)


class TestCrossMethod:
    def test_three_routes_coincide(self):
        rng = random.Random(53)
        cases = [one_var_square(), triangular_2d()]
        cases += [random_h(rng, 2, max_deg=3) for _ in range(4)]
        cases += [random_h(rng, 3, max_deg=3) for _ in range(2)]
        for h in cases:
            results = cross_method_results(h, 6)
            base = results[FIXED_POINT]
            assert results[ABHYANKAR_GURJAR].G == base.G
            assert results[LAMBDA_SERIES].G == base.G
            assert verify_round_trip(h, base).passed

    def test_series_truncated_input(self):
        rng = random.Random(59)
        h = random_h(rng, 2, trunc=8, max_deg=5)
        results = cross_method_results(h, 7)
        assert results[ABHYANKAR_GURJAR].G == results[FIXED_POINT].G
        assert results[LAMBDA_SERIES].G == results[FIXED_POINT].G

    def test_n_tail_order(self):
        rng = random.Random(61)
        for _ in range(5):
            h = random_h(rng, 2)
            res = invert_fixed_point(h, 5)
            assert res.N.order() >= 2

    def test_mutually_inverse_composition_collapses(self):
        # compose(compose(u, G, D), F, D) == u truncated at D
        h = triangular_2d()
        res = invert_fixed_point(h, 5)
        f_map = f_from_h(h)
        u = SparsePoly.monomial(Z2, (2, 1)) + SparsePoly.z_var(Z2, 1)
        inner = compose(u, res.G, 5)
        outer = compose(inner, f_map, 5)
        assert outer.poly == u.truncate_z(5)


class TestChainRule:
    def test_jf_of_g_times_jg_is_one(self):
        rng = random.Random(67)
        for h in [one_var_square(), triangular_2d(),
                  random_h(rng, 2, max_deg=3), random_h(rng, 3, max_deg=3)]:
            bound = 5
            oracle = invert_fixed_point(h, bound + 1)
            jf = jacobian_factor(h, bound)
            jf_of_g = compose(jf, oracle.G, bound).poly
            jg = det(jacobian(oracle.G), trunc=bound)
            prod = jf_of_g.mul(jg, trunc=bound)
            assert prod == SparsePoly.one(h.vars)


class TestXiMoments:
    def test_k0_reduces_to_compose(self):
        q = SparsePoly.z_var(Z2, 0)
        got = xi_moment_series(triangular_2d(), q, 0, 4)
        assert got.drop_xi() == lambda_compose(q, triangular_2d(), 4).poly

    def test_k1_reads_off_n(self):
        got = xi_moment_series(one_var_square(), SparsePoly.one(Z1), 1, 3)
        # equals xi * N(z) with N = z^2 + 2z^3 mod degree > 3
        oracle = invert_fixed_point(one_var_square(), 3)
        expected = xi_pairing(oracle.N)
        assert got == expected

    def test_k2_triangular(self):
        got = xi_moment_series(triangular_2d(), SparsePoly.one(Z2), 2, 4)
        xiz = VarSet.xiz(2)
        assert got == SparsePoly.monomial(xiz, (2, 0, 0, 4))

    def test_matches_oracle_product(self):
        rng = random.Random(71)
        for _ in range(4):
            h = random_h(rng, 2, max_deg=3)
            q = SparsePoly.one(Z2) + SparsePoly.z_var(Z2, 0)
            bound = 5
            for k in range(3):
                got = xi_moment_series(h, q, k, bound)
                oracle = invert_fixed_point(h, bound)
                target = VarSet.xiz(2)
                q_of_g = compose(q, oracle.G, bound).poly.lift(target)
                xi_n = xi_pairing(oracle.N)
                expected = q_of_g.mul(xi_n.power(k, trunc=bound), trunc=bound)
                assert got == expected

    def test_moment_consistency_by_exact_division(self):
        # result(k=2, q=1) * qG == result(k=1, q=1)^2 where qG = result(k=0, q=1)
        h = triangular_2d()
        bound = 6
        one = SparsePoly.one(Z2)
        m0 = xi_moment_series(h, one, 0, bound)
        m1 = xi_moment_series(h, one, 1, bound)
        m2 = xi_moment_series(h, one, 2, bound)
        # triangular inverse is polynomial of low degree, so this is exact
        assert m1.mul(m1) == m2.mul(m0)
        assert exact_div(m1.mul(m1), m2) == m0

    def test_negative_k_rejected(self):
        with pytest.raises(ContractViolation):
            xi_moment_series(triangular_2d(), SparsePoly.one(Z2), -1, 3)


class TestPhiExponential:
    def test_triangular_window(self):
        rep = verify_phi_exponential(triangular_2d(), SparsePoly.one(Z2), 2, 4)
        assert rep.passed
        xiz = VarSet.xiz(2)
        expected = (SparsePoly.one(xiz)
                    + SparsePoly.monomial(xiz, (1, 0, 0, 2))
                    + SparsePoly.monomial(xiz, (2, 0, 0, 4), Fraction(1, 2)))
        assert rep.lhs == expected

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        q = SparsePoly.z_var(Z2, 0) + SparsePoly.const(Z2, 3)
        rep = verify_phi_exponential(h, q, 2, 4)
        assert rep.passed
        assert rep.lhs == q.lift(VarSet.xiz(2))

    def test_nonunit_jacobian_path(self):
        # H = z^2 in one variable has JF = 1 - 2z
        rep = verify_phi_exponential(one_var_square(), SparsePoly.one(Z1), 1, 3)
        assert rep.passed

    def test_random_maps_and_series_q(self):
        rng = random.Random(73)
        for _ in range(4):
            h = random_h(rng, 2, max_deg=3)
            q = SeriesTrunc.of(SparsePoly.one(Z2) + SparsePoly.monomial(Z2, (1, 1)), 5)
            rep = verify_phi_exponential(h, q, 2, 5)
            assert rep.passed, rep.witness

    def test_xi_bound_capped_at_z_bound(self):
        rep = verify_phi_exponential(triangular_2d(), SparsePoly.one(Z2), 9, 3)
        assert "xi<=3" in rep.name
