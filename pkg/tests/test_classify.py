import pytest

from dynstar import (QuasiUnitarityError, SpecError, build_casimir_tensor,
                     build_coefficients, build_lagrangian, build_root_system,
                     check_coefficient_conditions, check_in_M_Omega,
                     check_shift_form, chevalley_constants,
                     coefficients_to_tensor, make_spec, realize_lie_algebra,
                     recover_b_from_initial, recover_classification)
from dynstar.lie import Tensor2


def _fixture(ctx, family, rank, delta, U, t=None):
    rs = build_root_system(family, rank)
    table = chevalley_constants(rs)
    spec = make_spec(table, ctx, delta, U, t=t)
    return spec, table


FIXTURES = {
    "a2_u": ("A", 2, [(1, 0)], [(1, 0), (-1, 0)], None),
    "a2_generic": ("A", 2, [(1, 0)], [], None),
    "a3_mixed": ("A", 3, [(1, 0, 0), (0, 0, 1)], [(1, 0, 0), (-1, 0, 0)], None),
    "b2_generic": ("B", 2, [(1, 0)], [], None),
}


@pytest.fixture(scope="module", params=sorted(FIXTURES))
def fixture(request, ctx):
    fam, rank, delta, U, t = FIXTURES[request.param]
    spec, table = _fixture(ctx, fam, rank, delta, U, t)
    return request.param, spec, table


class TestConditions:
    def test_all_conditions_hold(self, fixture):
        name, spec, table = fixture
        fam = build_coefficients(spec)
        rep = check_coefficient_conditions(fam)
        assert rep["all_ok"], (name, rep)

    def test_shift_form(self, fixture):
        name, spec, table = fixture
        assert check_shift_form(build_coefficients(spec))

    def test_known_values_a2_u(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        # zero on U, +-1/2 outside the Levi set
        assert fam[(1, 0)].is_zero()
        assert fam[(0, 1)] == ctx("1/2")
        assert fam[(-1, -1)] == ctx("-1/2")

    def test_generic_coth_value(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [])
        fam = build_coefficients(spec)
        t1 = ctx.var("t1")
        assert fam[(1, 0)] == (t1 + 1) / (2 * (t1 - 1))
        assert fam[(-1, 0)] == -(t1 + 1) / (2 * (t1 - 1))

    def test_mutation_breaks_triple(self, ctx):
        # U empty, so triples avoiding U exist and constrain the family
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [])
        fam = build_coefficients(spec)
        fam.x[(0, 1)] = fam.x[(0, 1)] + 1
        fam.x[(0, -1)] = fam.x[(0, -1)] - 1
        rep = check_coefficient_conditions(fam)
        assert not rep["all_ok"]
        assert not rep["triple_product"]["ok"]
        assert rep["triple_product"]["witness"]

    def test_mutation_breaks_oddness(self, ctx):
        spec, table = _fixture(ctx, "B", 2, [(1, 0)], [])
        fam = build_coefficients(spec)
        fam.x[(1, 0)] = -fam.x[(1, 0)]
        rep = check_coefficient_conditions(fam)
        assert not rep["odd"]["ok"]

    def test_t_equal_one_outside_u_rejected(self, ctx):
        with pytest.raises(SpecError):
            _fixture(ctx, "A", 2, [(1, 0)], [], t={(1, 0): 1})


class TestTensorOracle:
    def test_membership(self, fixture):
        name, spec, table = fixture
        fam = build_coefficients(spec)
        g = realize_lie_algebra(table, spec.ctx, U=spec.U)
        b = coefficients_to_tensor(fam, g)
        assert check_in_M_Omega(b, g), name

    def test_quasi_unitarity_distinct_error(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        g = realize_lie_algebra(table, ctx, U=spec.U)
        b = coefficients_to_tensor(fam, g)
        broken = Tensor2(g, dict(b.coeffs))
        i = g.root_index[(0, 1)]
        j = g.root_index[(0, -1)]
        broken.coeffs[(i, j)] = broken.coeffs[(i, j)] + 1
        with pytest.raises(QuasiUnitarityError):
            check_in_M_Omega(broken, g)

    def test_cyb_failure_detected(self, ctx):
        # antisymmetric m (x) m perturbation that keeps quasi-unitarity but
        # breaks the quotient CYB equation
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        fam.x[(0, 1)] = fam.x[(0, 1)] + 1
        fam.x[(0, -1)] = fam.x[(0, -1)] - 1
        g = realize_lie_algebra(table, ctx, U=spec.U)
        b = coefficients_to_tensor(fam, g)
        assert check_in_M_Omega(b, g) is False

    def test_recover_b_from_initial(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        g = realize_lie_algebra(table, ctx, U=spec.U)
        b = coefficients_to_tensor(fam, g)
        # b is quasi-unitary and supported on m (x) m away from Omega/2, so
        # it serves as rho with vanishing initial bivector
        assert (recover_b_from_initial(Tensor2(g, {}), b) - b).is_zero()
        with pytest.raises(QuasiUnitarityError):
            recover_b_from_initial(Tensor2(g, {}), b.scale(2))


class TestRecovery:
    def test_round_trip(self, fixture):
        name, spec, table = fixture
        fam = build_coefficients(spec)
        wits = recover_classification(fam, spec.ctx, table)
        assert wits
        for w in wits:
            rebuilt = build_coefficients(w["spec"])
            assert all((rebuilt[a] - fam[a]).is_zero()
                       for a in spec.system.roots)

    def test_original_choice_among_witnesses(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        wits = recover_classification(fam, ctx, table)
        assert any(set(w["delta"]) == {(1, 0)} and
                   set(w["simple"]) == set(spec.simple) for w in wits)

    def test_invalid_family_rejected(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        fam = build_coefficients(spec)
        for a in fam.x:
            fam.x[a] = ctx("1/3")
        with pytest.raises(SpecError):
            recover_classification(fam, ctx, table)


class TestLagrangian:
    def test_a2_report(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        g = realize_lie_algebra(table, ctx, U=spec.U)
        lag, rep = build_lagrangian(spec, g)
        assert rep["dim"] == 8 == rep["dim_g"]
        assert rep["isotropic"]
        assert rep["bracket_closed"]
        assert rep["diag_intersection_dim"] == 4 == rep["dim_u"]
        assert rep["all_ok"]

    def test_generic_t_diagonal_intersection_shrinks(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [])
        g = realize_lie_algebra(table, ctx, U=spec.U)
        lag, rep = build_lagrangian(spec, g)
        assert rep["isotropic"] and rep["bracket_closed"]
        # only the Cartan is fixed by theta when t is generic
        assert rep["diag_intersection_dim"] == 2

    def test_membership_criterion(self, ctx):
        spec, table = _fixture(ctx, "A", 2, [(1, 0)], [(1, 0), (-1, 0)])
        g = realize_lie_algebra(table, ctx, U=spec.U)
        lag, rep = build_lagrangian(spec, g)
        for v in lag.basis:
            assert lag.contains(v)
        i = g.root_index[(1, 1)]
        assert not lag.contains(({i: ctx.one()}, {}))
