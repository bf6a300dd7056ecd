"""Reduced brackets and star products; the closed-form reduction; shifted
and magnetic scenarios."""

from fractions import Fraction

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
    classical_homotopy,
    koszul_boundary,
    quantum_koszul_boundary,
    restriction,
    verify_complex_identities,
)
from qkoszul.phase_space import PhaseSpace, StarProduct, check_star_axioms
from qkoszul.reduction import (
    CotangentSplit,
    ReducedAlgebra,
    build_shifted_context,
    delta_star,
    fiber_translate,
    fiber_translate_subst,
    function_to_symbol,
    hv_split,
    knp_reduced_star,
    r_i,
    reduced_poisson_bracket,
    reduced_star,
    symbol_to_function,
    symbol_vars,
)
from qkoszul.sampling import sample_pairs, sample_polys

L = 4


def s1_red() -> ReducedAlgebra:
    sp = PhaseSpace.of_dim(3)
    return ReducedAlgebra(
        ReductionContext.canonical(sp, [1, 2], StarProduct.weyl(sp), L))


def s1p_ctx() -> ReductionContext:
    sp = PhaseSpace.of_dim(2)
    return ReductionContext.canonical(sp, [1], StarProduct.weyl(sp), L)


def s2_ctx() -> ReductionContext:
    return build_shifted_context(s1p_ctx(), {1: (2, Fraction(1, 2))},
                                 {1: Fraction(3)})


class TestReducedBracket:
    def test_canonical_pair(self):
        red = s1_red()
        rs = red.space
        one = MultiPoly.const(rs.vars, 1)
        assert reduced_poisson_bracket(rs.q(3), rs.p(3), red) == one
        assert reduced_poisson_bracket(rs.q(3), rs.q(3), red).is_zero()

    def test_jacobi(self):
        red = s1_red()
        samples = sample_polys(53, red.space.vars, 3, 8)
        for i in range(len(samples) - 2):
            f, g, h = samples[i], samples[i + 1], samples[i + 2]
            jac = reduced_poisson_bracket(f, reduced_poisson_bracket(g, h, red), red) \
                + reduced_poisson_bracket(g, reduced_poisson_bracket(h, f, red), red) \
                + reduced_poisson_bracket(h, reduced_poisson_bracket(f, g, red), red)
            assert jac.is_zero()


class TestReducedStar:
    def test_matches_one_dim_weyl(self):
        red = s1_red()
        rs = red.space
        star_red = reduced_star(red)
        direct = StarProduct.weyl(PhaseSpace([3]))
        got = star_red.eval_poly(rs.q(3), rs.p(3), L)
        want = direct.eval_poly(direct.space.q(3), direct.space.p(3), L)
        assert got == want

    def test_unit(self):
        red = s1_red()
        star_red = reduced_star(red)
        one = MultiPoly.const(red.space.vars, 1)
        f = red.space.q(3) * red.space.p(3)
        assert star_red.eval_poly(one, f, L) == LambdaSeries.from_poly(
            f, L)

    def test_axiom_suite(self):
        red = s1_red()
        star_red = reduced_star(red)
        samples = sample_polys(59, red.space.vars, 3, 8)
        checks = check_star_axioms(star_red, samples, L)
        assert all(c["status"] == "pass" for c in checks)


class TestSymbolIso:
    def test_vector_field_symbol(self):
        sp = PhaseSpace.of_dim(2)
        sv = symbol_vars(sp)
        assert symbol_to_function(MultiPoly.variable(sv, "u1"), sp) == sp.p(1)

    def test_configuration_functions_fixed(self):
        sp = PhaseSpace.of_dim(2)
        sv = symbol_vars(sp)
        chi = MultiPoly.variable(sv, "q2") * MultiPoly.variable(sv, "q1")
        assert symbol_to_function(chi, sp) == sp.q(2) * sp.q(1)

    def test_ring_iso_roundtrip(self):
        sp = PhaseSpace.of_dim(2)
        sv = symbol_vars(sp)
        import random
        rng = random.Random(61)
        from qkoszul.sampling import random_poly
        for _ in range(6):
            a = random_poly(rng, sv, 3)
            b = random_poly(rng, sv, 3)
            assert symbol_to_function(a * b, sp) == \
                symbol_to_function(a, sp) * symbol_to_function(b, sp)
            assert function_to_symbol(symbol_to_function(a, sp), sp) == a


class TestHvSplit:
    def test_purely_vertical(self):
        ctx = s1p_ctx()
        sp = ctx.space
        F = sp.p(1) * sp.p(1)
        h, pv = hv_split(F, ctx)
        assert h.is_zero() and pv == F
        assert r_i(F, ctx, 1) == sp.p(1)

    def test_purely_horizontal(self):
        ctx = s1p_ctx()
        sp = ctx.space
        F = sp.q(1) * sp.q(2)
        h, pv = hv_split(F, ctx)
        assert h == F and pv.is_zero()
        assert r_i(F, ctx, 1).is_zero()

    def test_split_identity(self):
        ctx = ReductionContext.canonical(
            PhaseSpace.of_dim(3), [1, 2],
            StarProduct.weyl(PhaseSpace.of_dim(3)), L)
        split = CotangentSplit(ctx)
        for F in sample_polys(67, ctx.space.vars, 4, 10):
            recon = split.h(F)
            for i in range(1, ctx.gdim + 1):
                Ji = ctx.J.components[i - 1]
                recon = recon + split.r(i, F) * Ji
            assert recon == F
            # projections
            assert split.h(split.h(F)) == split.h(F)
            assert split.h(split.pv(F)).is_zero()

    def test_split_identity_shifted(self):
        # in the magnetic scenario the splitting runs along the shifted
        # momentum components, not the raw fiber coordinates
        ctx = s2_ctx()
        split = CotangentSplit(ctx)
        for F in sample_polys(71, ctx.space.vars, 3, 6):
            recon = split.h(F)
            for i in range(1, ctx.gdim + 1):
                recon = recon + split.r(i, F) * ctx.J.components[i - 1]
            assert recon == F

    def test_matches_classical_homotopy(self):
        ctx = s1p_ctx()
        split = CotangentSplit(ctx)
        for F in sample_polys(73, ctx.space.vars, 3, 6):
            h = classical_homotopy(
                KoszulChain.of_series(ctx.gdim, ctx.series(F)), ctx)
            assert h.get((1,)) == ctx.series(split.r(1, F))


class TestDeltaStar:
    def test_zero_on_horizontal(self):
        ctx = s1p_ctx()
        F = ctx.series(ctx.space.q(1) * ctx.space.p(2))
        assert delta_star(F, ctx).is_zero()

    def test_hand_value(self):
        # q1 p1: the division operator gives q1, and
        # q1·p1 - q1 ⋆ p1 = -(i/2)λ, so the quotient is the constant -1/2
        ctx = s1p_ctx()
        F = ctx.series(ctx.space.q(1) * ctx.space.p(1))
        expected = LambdaSeries.const(ctx.space.vars, Fraction(-1, 2), L)
        assert delta_star(F, ctx) == expected

    def test_agrees_with_boundary_route(self):
        # Δ⋆ equals the homotopy sandwiched between the two boundaries,
        # with the parameter divided out
        ctx = s1p_ctx()
        up = ReductionContext.canonical(ctx.space, [1], ctx.star, L + 1)
        for F in sample_polys(79, ctx.space.vars, 3, 6):
            Fs = ctx.series(F)
            via_op = delta_star(Fs, ctx)
            h = classical_homotopy(
                KoszulChain.of_series(up.gdim, up.series(F)), up)
            D = koszul_boundary(h, up).series() - \
                quantum_koszul_boundary(h, up).series()
            assert D.coeffs[0].is_zero()
            via_boundaries = LambdaSeries(D.coeffs[1:]).scale(gr(0, -1))
            assert via_op == via_boundaries

    def test_order0_remainder_rejected(self):
        ctx = s1p_ctx()
        # sabotage: a quantum momentum map whose λ⁰ differs from J breaks
        # the divisibility precondition at context construction already
        from qkoszul.lie import QuantumMomentumMap
        bad = QuantumMomentumMap(
            ctx.Jq.lie, [LambdaSeries.from_poly(ctx.space.q(1), L)])
        with pytest.raises(AlgebraError):
            ReductionContext(ctx.space, ctx.action, ctx.star, ctx.J, bad, L)


class TestKnpEquivalence:
    def test_s1p_pairs(self):
        ctx = s1p_ctx()
        red = ReducedAlgebra(ctx)
        star_red = reduced_star(red)
        knp = knp_reduced_star(red)
        for f, g in sample_pairs(83, red.space.vars, 3, 10):
            assert knp.eval_poly(f, g, L) == star_red.eval_poly(f, g, L)

    def test_s2_pairs(self):
        ctx = s2_ctx()
        red = ReducedAlgebra(ctx)
        star_red = reduced_star(red)
        knp = knp_reduced_star(red)
        for f, g in sample_pairs(89, red.space.vars, 3, 10):
            assert knp.eval_poly(f, g, L) == star_red.eval_poly(f, g, L)

    def test_unit_trivial(self):
        red = ReducedAlgebra(s1p_ctx())
        knp = knp_reduced_star(red)
        one = MultiPoly.const(red.space.vars, 1)
        f = red.space.q(2) * red.space.p(2)
        assert knp.eval_poly(one, f, L) == LambdaSeries.from_poly(f, L)


class TestFiberTranslation:
    def test_zero_is_identity(self):
        sp = PhaseSpace.of_dim(2)
        f = sp.series(sp.p(1) * sp.q(2), L)
        assert fiber_translate(f, sp, {1: MultiPoly.zero(sp.vars)}) == f

    def test_inverse(self):
        sp = PhaseSpace.of_dim(2)
        al = {1: sp.q(2).scale(Fraction(5, 3))}
        neg = {1: sp.q(2).scale(Fraction(-5, 3))}
        for f in sample_polys(97, sp.vars, 3, 6):
            fs = sp.series(f, L)
            assert fiber_translate(fiber_translate(fs, sp, al), sp, neg) == fs

    def test_momentum_dependence_rejected(self):
        sp = PhaseSpace.of_dim(2)
        with pytest.raises(AlgebraError):
            fiber_translate_subst(sp, {1: sp.p(2)})

    def test_straightens_magnetic_momentum(self):
        # substituting the shift into the plain fiber coordinate produces
        # the shifted magnetic momentum component
        sp = PhaseSpace.of_dim(2)
        al = {1: sp.q(2).scale(Fraction(1, 2)) - MultiPoly.const(sp.vars, 3)}
        subst, _ = fiber_translate_subst(sp, al)
        got = sp.p(1).substitute(subst)
        assert got == sp.p(1) + sp.q(2).scale(Fraction(1, 2)) \
            - MultiPoly.const(sp.vars, 3)


class TestShiftedContext:
    def test_trivial_shift_returns_base(self):
        base = s1p_ctx()
        assert build_shifted_context(base, {}, {}) is base
        assert build_shifted_context(base, {}, {1: Fraction(0)}) is base

    def test_momentum_map_components(self):
        ctx = s2_ctx()
        sp = ctx.space
        assert ctx.J.components[0] == sp.p(1) + sp.q(2).scale(Fraction(1, 2)) \
            - MultiPoly.const(sp.vars, 3)

    def test_complex_identities_pass(self):
        ctx = s2_ctx()
        samples = sample_polys(101, ctx.space.vars, 3, 4)
        failing = [c for c in verify_complex_identities(ctx, samples)
                   if c["status"] != "pass"]
        assert failing == []

    def test_restriction_is_conjugated(self):
        # i* in the shifted scenario = classical i* after undoing the shift
        base = s1p_ctx()
        ctx = s2_ctx()
        _, s_inv = fiber_translate_subst(
            ctx.space,
            {1: ctx.space.q(2).scale(Fraction(1, 2))
                - MultiPoly.const(ctx.space.vars, 3)})
        for f in sample_polys(103, ctx.space.vars, 3, 6):
            fs = ctx.series(f)
            direct = restriction(fs, ctx)
            conj = restriction(fs.map_coeffs(lambda c: c.substitute(s_inv)), base)
            assert direct == conj

    def test_invariance_guard(self):
        base = s1p_ctx()
        with pytest.raises(AlgebraError):
            build_shifted_context(base, {1: (1, Fraction(1))}, {})
        with pytest.raises(AlgebraError):
            build_shifted_context(base, {}, {2: Fraction(1)})
