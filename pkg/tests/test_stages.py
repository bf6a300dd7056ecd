"""Two-stage reduction: stage configuration, induced momentum maps,
compatible prolongations, and equality with one-step reduction."""

from fractions import Fraction

import pytest

from qkoszul.exact import AlgebraError, LambdaSeries, MultiPoly, gr
from qkoszul.koszul import ReductionContext
from qkoszul.lie import (
    LieAlgebraData,
    QuantumMomentumMap,
    TranslationAction,
    canonical_momentum_map,
    check_quantum_momentum_map,
)
from qkoszul.phase_space import PhaseSpace, StarProduct
from qkoszul.sampling import sample_pairs, sample_polys
from qkoszul.stages import (
    StageConfig,
    StagePipeline,
    build_compatible_prolongations,
    check_stage_equality,
    restrict_momentum_map,
    two_stage_reduce,
)

L = 4


def s1_ctx(Jq=None) -> ReductionContext:
    sp = PhaseSpace.of_dim(3)
    return ReductionContext.canonical(sp, [1, 2], StarProduct.weyl(sp), L, Jq=Jq)


class TestStageConfig:
    def test_partition(self):
        cfg = StageConfig(LieAlgebraData.abelian(3), [2])
        assert cfg.first == (2,) and cfg.second == (1, 3)

    def test_out_of_range_rejected(self):
        with pytest.raises(AlgebraError):
            StageConfig(LieAlgebraData.abelian(2), [3])

    def test_overlap_rejected(self):
        with pytest.raises(AlgebraError):
            StageConfig(LieAlgebraData.abelian(2), [1], [1, 2])

    def test_heisenberg_center_rejected(self):
        # the center is an ideal but has no invariant complement
        with pytest.raises(AlgebraError, match="complement is not invariant"):
            StageConfig(LieAlgebraData.heisenberg(), [3])

    def test_heisenberg_non_ideal_rejected(self):
        with pytest.raises(AlgebraError, match="not an ideal"):
            StageConfig(LieAlgebraData.heisenberg(), [1])


class TestRestrictedMomentumMap:
    def test_component_selection(self):
        ctx = s1_ctx()
        cfg = StageConfig(ctx.action.lie, [1])
        Jq1 = restrict_momentum_map(ctx.Jq, cfg)
        assert Jq1.components == (ctx.Jq.components[0],)

    def test_full_subalgebra_is_identity(self):
        ctx = s1_ctx()
        cfg = StageConfig(ctx.action.lie, [1, 2])
        assert restrict_momentum_map(ctx.Jq, cfg).components == ctx.Jq.components

    def test_quantum_identities_hold(self):
        ctx = s1_ctx()
        cfg = StageConfig(ctx.action.lie, [1])
        Jq1 = restrict_momentum_map(ctx.Jq, cfg)
        samples = sample_polys(107, ctx.space.vars, 3, 5)
        checks = {c["name"]: c
                  for c in check_quantum_momentum_map(ctx.star, Jq1, samples, L)}
        assert checks["quantum_hamiltonian_identity"]["status"] == "pass"


class TestInducedSecondStage:
    def test_plain_case(self):
        pipe = StagePipeline(s1_ctx(), StageConfig(LieAlgebraData.abelian(2), [1]))
        sp2 = pipe.red1.space
        assert pipe.Jq2.components == (
            LambdaSeries.from_poly(sp2.p(2), L),)

    def test_alpha_shift_clause(self):
        # with Jq = J + iλ·const the second-stage map picks up exactly the
        # complement part of the constant
        sp = PhaseSpace.of_dim(3)
        J = canonical_momentum_map(TranslationAction(sp, (1, 2)))
        consts = [Fraction(1, 3), Fraction(-2, 7)]
        Jq = QuantumMomentumMap(J.lie, [
            LambdaSeries.from_poly(c, L) +
            LambdaSeries.from_poly(
                MultiPoly.const(sp.vars, 1).scale(gr(0, a)), L, shift=1)
            for c, a in zip(J.components, consts)])
        pipe = StagePipeline(s1_ctx(Jq=Jq), StageConfig(J.lie, [1]))
        sp2 = pipe.red1.space
        want = LambdaSeries.from_poly(sp2.p(2), L) + LambdaSeries.from_poly(
            MultiPoly.const(sp2.vars, 1).scale(gr(0, consts[1])), L, shift=1)
        assert pipe.Jq2.components == (want,)

    def test_quantum_identities_for_induced_map(self):
        pipe = StagePipeline(s1_ctx(), StageConfig(LieAlgebraData.abelian(2), [1]))
        samples = sample_polys(109, pipe.red1.space.vars, 3, 5)
        checks = {c["name"]: c for c in check_quantum_momentum_map(
            pipe.star_red1, pipe.Jq2, samples, L)}
        assert checks["quantum_hamiltonian_identity"]["status"] == "pass"


class TestCompatibleProlongations:
    def test_all_identities(self):
        ctx = s1_ctx()
        pipe = StagePipeline(ctx, StageConfig(ctx.action.lie, [1]))
        samples = sample_polys(113, ctx.space.vars, 3, 6)
        checks = build_compatible_prolongations(pipe, samples)
        assert all(c["status"] == "pass" for c in checks)
        assert len(checks) == 7


class TestStageEquality:
    def test_thirty_pairs(self):
        ctx = s1_ctx()
        pipe = StagePipeline(ctx, StageConfig(ctx.action.lie, [1]))
        pairs = sample_pairs(127, pipe.red2.space.vars, 3, 30)
        checks = check_stage_equality(pipe, pairs)
        assert checks[0]["status"] == "pass"

    def test_swapped_stage_order(self):
        ctx = s1_ctx()
        pipe = StagePipeline(ctx, StageConfig(ctx.action.lie, [2]))
        pairs = sample_pairs(131, pipe.red2.space.vars, 3, 10)
        assert check_stage_equality(pipe, pairs)[0]["status"] == "pass"

    def test_unit_both_routes(self):
        ctx = s1_ctx()
        pipe = StagePipeline(ctx, StageConfig(ctx.action.lie, [1]))
        rs = pipe.red2.space
        one = MultiPoly.const(rs.vars, 1)
        f = rs.q(3) * rs.p(3)
        assert two_stage_reduce(one, f, pipe) == LambdaSeries.from_poly(f, L)
        assert pipe.star_red.eval_poly(one, f, L) == LambdaSeries.from_poly(f, L)

    def test_residual_variables_agree(self):
        ctx = s1_ctx()
        pipe = StagePipeline(ctx, StageConfig(ctx.action.lie, [1]))
        assert pipe.red2.space.vars == pipe.red.space.vars == ("q3", "p3")
