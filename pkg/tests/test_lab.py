"""Nilpotency certificates, vanishing scans, deformation series, and the corpus."""

import pytest

from agcalc.errors import (
    ContractViolation,
    PreconditionError,
    TermCeilingExceeded,
)
from agcalc.inversion import cross_method_results, invert_fixed_point
from agcalc.lab import (
    CorpusSpec,
    check_equivalences,
    deformed_tail_components,
    gen_corpus,
    gt_jacobian_series,
    is_nilpotent,
    nt_pairing_series,
    standard_corpus,
    vanishing_scan,
    vanishing_scan_poly,
)
from agcalc.poly import MapTuple, SparsePoly, VarSet, xi_pairing

Z1 = VarSet.z(1)
Z2 = VarSet.z(2)
ZT2 = VarSet.zt(2)
XIZ2 = VarSet.xiz(2)


def triangular_2d():
    return MapTuple.exact((SparsePoly.monomial(Z2, (0, 2)), SparsePoly.zero(Z2)))


def diagonal_2d():
    return MapTuple.exact((SparsePoly.monomial(Z2, (2, 0)), SparsePoly.zero(Z2)))


class TestNilpotency:
    def test_triangular_is_nilpotent(self):
        cert = is_nilpotent(triangular_2d())
        assert cert.nilpotent
        assert cert.det_deformation == SparsePoly.one(ZT2)

    def test_diagonal_is_not(self):
        cert = is_nilpotent(diagonal_2d())
        assert not cert.nilpotent
        expected = SparsePoly.one(ZT2) - SparsePoly.monomial(ZT2, (1, 0, 1), 2)
        assert cert.det_deformation == expected

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        assert is_nilpotent(h).nilpotent

    def test_series_input_refused(self):
        h = MapTuple.truncated((SparsePoly.monomial(Z2, (0, 2)), SparsePoly.zero(Z2)), 6)
        with pytest.raises(PreconditionError):
            is_nilpotent(h)


class TestVanishingScan:
    def test_triangular_all_zero(self):
        rep = vanishing_scan(triangular_2d(), 0, 6)
        assert rep.all_zero
        assert [m for m, _ in rep.values] == [1, 2, 3, 4, 5, 6]

    def test_diagonal_first_witness(self):
        rep = vanishing_scan(diagonal_2d(), 0, 4)
        assert rep.first_nonzero == 1
        # lambda(P) = trace(JH) = 2 z1
        assert rep.value(1) == SparsePoly.monomial(XIZ2, (0, 0, 1, 0), 2)

    def test_zero_map_any_k(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        assert vanishing_scan(h, 0, 4).all_zero
        rep1 = vanishing_scan(h, 1, 4)
        assert rep1.all_zero  # base term P is itself zero

    def test_k1_base_term_is_pairing(self):
        rep = vanishing_scan(triangular_2d(), 1, 3)
        assert rep.values[0][0] == 0
        assert rep.values[0][1] == xi_pairing(triangular_2d())

    def test_general_poly_entry_point(self):
        # P = xi1*z1^2: not of pairing form restrictions, still scannable
        p = SparsePoly.monomial(XIZ2, (1, 0, 2, 0))
        rep = vanishing_scan_poly(p, 0, 3)
        assert rep.first_nonzero == 1

    def test_term_ceiling_guard(self):
        h = MapTuple.exact((
            SparsePoly.monomial(Z2, (0, 2)) + SparsePoly.monomial(Z2, (0, 3)),
            SparsePoly.monomial(Z2, (2, 0)),
        ))
        with pytest.raises(TermCeilingExceeded) as err:
            vanishing_scan(h, 0, 6, term_ceiling=5)
        partial = err.value.partial
        assert partial is not None and partial.mmax == 6

    def test_bad_arguments(self):
        with pytest.raises(ContractViolation):
            vanishing_scan(triangular_2d(), 2, 4)
        with pytest.raises(ContractViolation):
            vanishing_scan(triangular_2d(), 0, 0)


class TestGtJacobianSeries:
    def test_triangular_collapses_to_one(self):
        assert gt_jacobian_series(triangular_2d(), 4) == SparsePoly.one(ZT2)

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z1),))
        assert gt_jacobian_series(h, 3) == SparsePoly.one(VarSet.zt(1))

    def test_diagonal_catalan_derivative(self):
        # H = (z1^2, 0): series is 1 + 2 t z1 + 6 t^2 z1^2 + ...
        series = gt_jacobian_series(diagonal_2d(), 2)
        expected = (SparsePoly.one(ZT2)
                    + SparsePoly.monomial(ZT2, (1, 0, 1), 2)
                    + SparsePoly.monomial(ZT2, (2, 0, 2), 6))
        assert series == expected

    def test_one_var_square(self):
        h = MapTuple.exact((SparsePoly.monomial(Z1, (2,)),))
        series = gt_jacobian_series(h, 3)
        zt1 = VarSet.zt(1)
        expected = (SparsePoly.one(zt1)
                    + SparsePoly.monomial(zt1, (1, 1), 2)
                    + SparsePoly.monomial(zt1, (2, 2), 6)
                    + SparsePoly.monomial(zt1, (3, 3), 20))
        assert series == expected


class TestNtSeries:
    def test_triangular_t_independent(self):
        series = nt_pairing_series(triangular_2d(), 4)
        xizt = VarSet.xizt(2)
        assert series == SparsePoly.monomial(xizt, (1, 0, 0, 2, 0))

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        assert nt_pairing_series(h, 3).is_zero

    def test_triangular_cubic(self):
        h = MapTuple.exact((SparsePoly.monomial(Z2, (0, 3)), SparsePoly.zero(Z2)))
        series = nt_pairing_series(h, 4)
        xizt = VarSet.xizt(2)
        assert series == SparsePoly.monomial(xizt, (1, 0, 0, 3, 0))

    def test_non_nilpotent_refused(self):
        with pytest.raises(PreconditionError):
            nt_pairing_series(diagonal_2d(), 3)

    def test_components_recovered(self):
        n_t = deformed_tail_components(triangular_2d(), 4)
        zt = VarSet.zt(2)
        assert n_t.components == (SparsePoly.monomial(zt, (0, 2, 0)),
                                  SparsePoly.zero(zt))

    def test_genuinely_t_dependent_instance(self):
        # H = (z2^2, z3^2, 0): N_t picks up a t-linear correction
        z3 = VarSet.z(3)
        h = MapTuple.exact((SparsePoly.monomial(z3, (0, 2, 0)),
                            SparsePoly.monomial(z3, (0, 0, 2)),
                            SparsePoly.zero(z3)))
        series = nt_pairing_series(h, 4)
        assert series.max_t_degree() >= 1
        n_t = deformed_tail_components(h, 4)
        # cross-check against direct deformed inversion
        zt = VarSet.zt(3)
        t = SparsePoly.t_var(zt)
        th = MapTuple.exact(tuple(c.lift(zt).mul(t) for c in h.components))
        oracle = invert_fixed_point(th, 8, t_bound=5)
        for i in range(3):
            shifted = {e[:-1] + (e[-1] - 1,): c
                       for e, c in oracle.N.components[i].terms.items()}
            expect = SparsePoly(zt, shifted).truncate_t(4)
            assert n_t.components[i] == expect.truncate_z(int(series.degree()))


class TestEquivalences:
    def test_triangular_all_pass(self):
        rep = check_equivalences(triangular_2d(), 6, known_nt_degree=0)
        assert rep.nilpotent and rep.passed
        assert [c.status for c in rep.checks] == ["pass", "pass", "pass", "pass"]

    def test_diagonal_witness_path(self):
        rep = check_equivalences(diagonal_2d(), 6)
        assert not rep.nilpotent and rep.passed
        statuses = [c.status for c in rep.checks]
        assert statuses[0] == "pass" and "skip" in statuses

    def test_zero_map(self):
        h = MapTuple.exact((SparsePoly.zero(Z2), SparsePoly.zero(Z2)))
        rep = check_equivalences(h, 3, known_nt_degree=0)
        assert rep.passed

    def test_stabilization_index_mismatch_detected(self):
        # claiming t-degree 1 for the t-independent triangular map must fail
        rep = check_equivalences(triangular_2d(), 6, known_nt_degree=1)
        assert not rep.passed


class TestCorpus:
    def test_deterministic(self):
        a = gen_corpus(CorpusSpec(n=2, family="triangular", count=3, seed=5))
        b = gen_corpus(CorpusSpec(n=2, family="triangular", count=3, seed=5))
        assert [i.item_id for i in a] == [i.item_id for i in b]
        assert all(x.h == y.h for x, y in zip(a, b))
        c = gen_corpus(CorpusSpec(n=2, family="triangular", count=3, seed=6))
        assert any(x.h != y.h for x, y in zip(a, c))

    def test_canonical_members(self):
        tri = gen_corpus(CorpusSpec(n=2, family="triangular", count=1))
        assert tri[0].h == triangular_2d()
        ctl = gen_corpus(CorpusSpec(n=2, family="control", count=1))
        assert ctl[0].h == diagonal_2d()

    def test_triangular_metadata_is_true_inverse(self):
        for item in gen_corpus(CorpusSpec(n=3, family="triangular", count=3, seed=1)):
            res = invert_fixed_point(item.h, 8)
            for known, computed in zip(item.known_n.components, res.N.components):
                assert known.truncate_z(8) == computed

    def test_cubic_family_nilpotent_with_unit_certificate(self):
        for item in gen_corpus(CorpusSpec(n=3, family="cubic", count=3, seed=2)):
            cert = is_nilpotent(item.h)
            assert cert.nilpotent
            assert all(c.order() >= 2 or c.is_zero for c in item.h.components)
            res = invert_fixed_point(item.h, 7)
            for known, computed in zip(item.known_n.components, res.N.components):
                assert known.truncate_z(7) == computed

    def test_control_family_not_nilpotent(self):
        for item in gen_corpus(CorpusSpec(n=2, family="control", count=3, seed=3)):
            assert item.nilpotent is False
            assert not is_nilpotent(item.h).nilpotent

    def test_series_family_shape(self):
        for item in gen_corpus(CorpusSpec(n=2, family="series", count=2, seed=4)):
            assert not item.h.is_exact
            assert item.h.trunc == 12
            assert item.h.order() >= 2

    def test_invalid_descriptors(self):
        with pytest.raises(ContractViolation):
            CorpusSpec(n=0, family="triangular")
        with pytest.raises(ContractViolation):
            CorpusSpec(n=2, family="sporadic")
        with pytest.raises(ContractViolation):
            CorpusSpec(n=1, family="cubic")

    def test_standard_corpus_profile(self):
        items = standard_corpus()
        assert len(items) == 21
        assert {i.h.n for i in items} == {1, 2, 3}
        families = {i.family for i in items}
        assert families == {"triangular", "cubic", "control", "series"}
        assert len({i.item_id for i in items}) == 21

    def test_standard_corpus_inverts_everywhere(self):
        for item in standard_corpus():
            res = cross_method_results(item.h, 4)
            gs = [r.G for r in res.values()]
            assert gs[0] == gs[1] == gs[2]
