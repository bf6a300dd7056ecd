"""The augmented Koszul complex: boundaries, homotopies, quantum restriction."""

from fractions import Fraction
from itertools import combinations

import pytest

from qkoszul.exact import (
    AlgebraError,
    ContractViolationError,
    LambdaSeries,
    MultiPoly,
    gr,
)
from qkoszul.koszul import (
    KoszulChain,
    ReductionContext,
    adjoint_representation,
    ce_boundary,
    check_representation,
    classical_homotopy,
    insert_index,
    koszul_boundary,
    prolongation,
    quantum_homotopy,
    quantum_koszul_boundary,
    quantum_restriction,
    remove_index,
    restriction,
    verify_complex_identities,
)
from qkoszul.lie import LieAlgebraData, QuantumMomentumMap
from qkoszul.phase_space import PhaseSpace, StarProduct
from qkoszul.sampling import sample_polys

L = 4


def s1_context() -> ReductionContext:
    sp = PhaseSpace.of_dim(3)
    return ReductionContext.canonical(sp, [1, 2], StarProduct.weyl(sp), L)


class TestWedgeBookkeeping:
    def test_insert_signs(self):
        assert insert_index(1, (2, 3)) == (1, (1, 2, 3))
        assert insert_index(2, (1, 3)) == (-1, (1, 2, 3))
        assert insert_index(3, (1, 2)) == (1, (1, 2, 3))
        assert insert_index(2, (2,)) is None

    def test_remove_signs(self):
        assert remove_index((1, 2, 3), 0) == (1, (2, 3))
        assert remove_index((1, 2, 3), 1) == (-1, (1, 3))

    def test_insert_remove_inverse(self):
        sign_i, key = insert_index(2, (1, 3))
        pos = key.index(2)
        sign_r, back = remove_index(key, pos)
        assert back == (1, 3) and sign_i * sign_r == 1


class TestKoszulBoundary:
    def test_grade1_is_momentum_multiplication(self):
        ctx = s1_context()
        f = ctx.series(ctx.space.q(3))
        x = KoszulChain(ctx.gdim, 1, ctx.space.vars, L, {(1,): f})
        out = koszul_boundary(x, ctx)
        assert out.series() == ctx.series(ctx.space.q(3) * ctx.space.p(1))

    def test_squares_to_zero(self):
        ctx = s1_context()
        f = ctx.series(ctx.space.q(1) * ctx.space.p(3))
        x = KoszulChain(ctx.gdim, 2, ctx.space.vars, L, {(1, 2): f})
        assert koszul_boundary(koszul_boundary(x, ctx), ctx).is_zero()

    def test_grade0_rejected(self):
        ctx = s1_context()
        x = KoszulChain.of_series(ctx.gdim, ctx.series(ctx.space.q(1)))
        with pytest.raises(AlgebraError):
            koszul_boundary(x, ctx)


class TestQuantumBoundary:
    def test_reduces_to_classical_at_order0(self):
        ctx = s1_context()
        f = ctx.series(ctx.space.q(1) * ctx.space.q(1) * ctx.space.p(2))
        x = KoszulChain(ctx.gdim, 1, ctx.space.vars, L, {(2,): f})
        qb = quantum_koszul_boundary(x, ctx).series()
        cb = koszul_boundary(x, ctx).series()
        assert qb.coeffs[0] == cb.coeffs[0]

    def test_squares_to_zero(self):
        ctx = s1_context()
        f = ctx.series(ctx.space.p(1) * ctx.space.q(2))
        x = KoszulChain(ctx.gdim, 2, ctx.space.vars, L, {(1, 2): f})
        assert quantum_koszul_boundary(
            quantum_koszul_boundary(x, ctx), ctx).is_zero()


class TestChevalleyEilenberg:
    def test_heisenberg_adjoint_squares_to_zero(self):
        lie = LieAlgebraData.heisenberg()
        rep = adjoint_representation(lie)
        v = tuple(gr(Fraction(k, 3)) for k in (1, -2, 5))
        for grade in (2, 3):
            x = {key: v for key in combinations((1, 2, 3), grade)}
            once = ce_boundary(lie, rep, x, grade)
            assert ce_boundary(lie, rep, once, grade - 1) == {}

    def test_nonrepresentation_rejected(self):
        lie = LieAlgebraData.heisenberg()
        bad = [[[Fraction(1) if i == j else Fraction(0) for j in range(3)]
                for i in range(3)] for _ in range(3)]
        with pytest.raises(ContractViolationError):
            check_representation(lie, bad)

    def test_grade0_rejected(self):
        lie = LieAlgebraData.heisenberg()
        rep = adjoint_representation(lie)
        with pytest.raises(AlgebraError):
            ce_boundary(lie, rep, {(): (gr(1), gr(0), gr(0))}, 0)


class TestClassicalHomotopy:
    def test_explicit_value(self):
        # on a single translated direction the grade-0 homotopy divides by
        # the fiber coordinate: p1^2 |-> p1 ⊗ e_1
        sp = PhaseSpace.of_dim(2)
        ctx = ReductionContext.canonical(sp, [1], StarProduct.weyl(sp), L)
        x = KoszulChain.of_series(1, ctx.series(sp.p(1) * sp.p(1)))
        h = classical_homotopy(x, ctx)
        assert h.get((1,)) == ctx.series(sp.p(1))

    def test_homotopy_identity_grade1(self):
        ctx = s1_context()
        for f in sample_polys(23, ctx.space.vars, 3, 5):
            x = KoszulChain(ctx.gdim, 1, ctx.space.vars, L,
                            {(1,): ctx.series(f)})
            lhs = classical_homotopy(koszul_boundary(x, ctx), ctx) + \
                koszul_boundary(classical_homotopy(x, ctx), ctx)
            assert lhs == x

    def test_grade0_identity(self):
        ctx = s1_context()
        for f in sample_polys(29, ctx.space.vars, 3, 5):
            fs = ctx.series(f)
            x = KoszulChain.of_series(ctx.gdim, fs)
            recon = prolongation(restriction(fs, ctx), ctx) + \
                koszul_boundary(classical_homotopy(x, ctx), ctx).series()
            assert recon == fs


class TestRestrictionProlongation:
    def test_restriction_sets_fibers_to_zero(self):
        ctx = s1_context()
        sp = ctx.space
        f = ctx.series(sp.p(1) * sp.q(3) + sp.q(1))
        assert restriction(f, ctx) == ctx.constraint_series(
            MultiPoly.variable(ctx.cvars, "q1"))

    def test_prolongation_right_inverse(self):
        ctx = s1_context()
        g = ctx.constraint_series(MultiPoly.variable(ctx.cvars, "q3") *
                                  MultiPoly.variable(ctx.cvars, "p3"))
        assert restriction(prolongation(g, ctx), ctx) == g

    def test_prolongation_rejects_full_inputs(self):
        ctx = s1_context()
        with pytest.raises(AlgebraError):
            prolongation(ctx.series(ctx.space.p(1)), ctx)


class TestQuantumRestriction:
    def test_classical_limit(self):
        ctx = s1_context()
        for f in sample_polys(31, ctx.space.vars, 3, 5):
            fs = ctx.series(f)
            assert quantum_restriction(fs, ctx).coeffs[0] == \
                restriction(fs, ctx).coeffs[0]

    def test_kernel_contains_left_ideal(self):
        ctx = s1_context()
        for f in sample_polys(37, ctx.space.vars, 3, 5):
            for a in range(ctx.gdim):
                gen = ctx.star.eval(ctx.series(f), ctx.Jq.components[a])
                assert quantum_restriction(gen, ctx).is_zero()

    def test_nontrivial_correction_value(self):
        # hand-derived: the division operator gives q1^2, and
        # q1^2 * p1 - q1^2 ⋆ p1 = -iλ q1, which survives the restriction
        sp = PhaseSpace.of_dim(2)
        ctx = ReductionContext.canonical(sp, [1], StarProduct.weyl(sp), L)
        f = ctx.series(sp.q(1) * sp.q(1) * sp.p(1))
        expected = LambdaSeries.from_poly(
            MultiPoly.variable(ctx.cvars, "q1").scale(gr(0, -1)), L, shift=1)
        assert quantum_restriction(f, ctx) == expected
        assert restriction(f, ctx).is_zero()


class TestQuantumHomotopy:
    def test_identity_grade0_and_1(self):
        ctx = s1_context()
        for f in sample_polys(41, ctx.space.vars, 3, 4):
            fs = ctx.series(f)
            x0 = KoszulChain.of_series(ctx.gdim, fs)
            lhs = KoszulChain.of_series(
                ctx.gdim, prolongation(quantum_restriction(fs, ctx), ctx)
            ) + quantum_koszul_boundary(quantum_homotopy(x0, ctx), ctx)
            assert lhs == x0
            x1 = KoszulChain(ctx.gdim, 1, ctx.space.vars, L, {(2,): fs})
            lhs1 = quantum_homotopy(quantum_koszul_boundary(x1, ctx), ctx) + \
                quantum_koszul_boundary(quantum_homotopy(x1, ctx), ctx)
            assert lhs1 == x1


class TestFullSuite:
    def test_all_identities_on_s1(self):
        ctx = s1_context()
        samples = sample_polys(43, ctx.space.vars, 3, 4)
        checks = verify_complex_identities(ctx, samples)
        failing = [c for c in checks if c["status"] != "pass"]
        assert failing == []

    def test_suite_with_corrected_momentum_map(self):
        sp = PhaseSpace.of_dim(2)
        star = StarProduct.weyl(sp)
        base = ReductionContext.canonical(sp, [1], star, L)
        corrected = QuantumMomentumMap(base.Jq.lie, [
            base.Jq.components[0] +
            LambdaSeries.from_poly(
                MultiPoly.const(sp.vars, 1).scale(gr(0, Fraction(2, 5))), L, shift=1)
        ])
        ctx = ReductionContext.canonical(sp, [1], star, L, Jq=corrected)
        samples = sample_polys(47, sp.vars, 3, 4)
        failing = [c for c in verify_complex_identities(ctx, samples)
                   if c["status"] != "pass"]
        assert failing == []
