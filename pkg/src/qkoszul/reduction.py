"""Reduced algebras and reduced star products on flat cotangent scenarios.

The reduced phase space of a lifted translation action is again a flat
cotangent bundle, over the untranslated configuration directions.  Two
routes to the reduced star product are provided: the homological one through
the quantum restriction, and the closed-form one through the vertical
difference operator; they must agree exactly and the test suite holds them
to that.

Shifted and magnetic scenarios are assembled by pulling every piece of
homotopy data back along a fiber translation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import (
    GR_MINUS_I,
    AlgebraError,
    ContractViolationError,
    LambdaSeries,
    MultiPoly,
    gr,
    invert_unipotent,
    t_integral,
)
from .koszul import GoodTube, ReductionContext
from .lie import MomentumMap, QuantumMomentumMap, TranslationAction
from .phase_space import PhaseSpace, StarProduct, poisson_bracket_poly


def elevate_context(ctx: ReductionContext, order: int) -> ReductionContext:
    """The same scenario at a different truncation order.  Exact because the
    quantum momentum components are polynomial in the parameter."""
    if order == ctx.order:
        return ctx
    Jq = QuantumMomentumMap(ctx.Jq.lie,
                            [c.truncate(order) for c in ctx.Jq.components])
    tube = GoodTube(ctx.space, ctx.action.translated, ctx.J,
                    ctx.tube.s_subst, ctx.tube.s_inv)
    return ReductionContext(ctx.space, ctx.action, ctx.star, ctx.J, Jq, order, tube)


class ReducedAlgebra:
    """Polynomials on the reduced phase space, realized on the residual
    coordinate names so the identification with the invariant constraint
    polynomials is a variable inclusion."""

    def __init__(self, ctx: ReductionContext):
        self.ctx = ctx
        residual = tuple(c for c in ctx.space.coords if c not in ctx.action.translated)
        self.space = PhaseSpace(residual)
        self.translated_q = tuple(f"q{a}" for a in ctx.action.translated)
        self._by_order: Dict[int, ReductionContext] = {ctx.order: ctx}

    def ctx_at(self, order: int) -> ReductionContext:
        if order not in self._by_order:
            self._by_order[order] = elevate_context(self.ctx, order)
        return self._by_order[order]

    def lift(self, f: MultiPoly) -> MultiPoly:
        """The injection of reduced polynomials into the constraint algebra."""
        if f.vars != self.space.vars:
            raise AlgebraError("input does not live on the reduced algebra")
        return f.with_vars(self.ctx.cvars)

    def push_down(self, f: MultiPoly) -> MultiPoly:
        """Inverse of the injection on invariant constraint polynomials."""
        g = f.with_vars(self.ctx.cvars) if f.vars != self.ctx.cvars else f
        for qv in self.translated_q:
            if g.uses(qv):
                raise AlgebraError(
                    f"element is not translation invariant: depends on {qv}")
        return g.with_vars(self.space.vars)

    def push_down_series(self, f: LambdaSeries) -> LambdaSeries:
        return f.map_coeffs(self.push_down)


def reduced_poisson_bracket(f: MultiPoly, g: MultiPoly,
                            red: ReducedAlgebra) -> MultiPoly:
    """Bracket of the reduced symplectic structure, computed upstairs:
    prolong both, bracket, restrict, push down."""
    ctx = red.ctx
    F = ctx.tube.apply_s(red.lift(f).with_vars(ctx.space.vars))
    G = ctx.tube.apply_s(red.lift(g).with_vars(ctx.space.vars))
    br = poisson_bracket_poly(F, G, ctx.space)
    zero = {pa: MultiPoly.zero(ctx.space.vars) for pa in ctx.tube.constrained}
    restricted = ctx.tube.apply_s_inv(br).substitute(zero).with_vars(ctx.cvars)
    return red.push_down(restricted)


def reduced_star(red: ReducedAlgebra) -> StarProduct:
    """The reduced star product through the quantum restriction."""
    from .koszul import prolongation, quantum_restriction

    def ev(f: MultiPoly, g: MultiPoly, order: int) -> LambdaSeries:
        ctx = red.ctx_at(order)
        lf = prolongation(red.lift(f), ctx)
        lg = prolongation(red.lift(g), ctx)
        down = quantum_restriction(ctx.star.eval(lf, lg), ctx)
        return red.push_down_series(down)

    return StarProduct.custom(red.space, ev, hermitian=red.ctx.star.hermitian)


# ---------------------------------------------------------------------------
# symbol calculus on a flat configuration space
# ---------------------------------------------------------------------------

def symbol_vars(space: PhaseSpace) -> Tuple[str, ...]:
    """Variable list for symmetric-tensor symbols: configuration coordinates
    plus one commuting symbol per coordinate vector field."""
    return space.qvars + tuple(f"u{i}" for i in space.coords)


def symbol_to_function(T: MultiPoly, space: PhaseSpace) -> MultiPoly:
    """The universal momentum map on symbols: pair each vector-field symbol
    with the fiber coordinate.  A ring isomorphism onto the fiberwise
    polynomials."""
    if T.vars != symbol_vars(space):
        raise AlgebraError("input is not in symbol normal form")
    return T.substitute({f"u{i}": space.p(i) for i in space.coords})


def function_to_symbol(F: MultiPoly, space: PhaseSpace) -> MultiPoly:
    if F.vars != space.vars:
        raise AlgebraError("input does not live on the phase space")
    svars = symbol_vars(space)
    return F.substitute(
        {f"p{i}": MultiPoly.variable(svars, f"u{i}") for i in space.coords})


# ---------------------------------------------------------------------------
# horizontal/vertical splitting and the vertical difference operator
# ---------------------------------------------------------------------------

class CotangentSplit:
    """Horizontal/vertical decomposition of fiberwise polynomials with
    respect to the translated directions, transported along the scenario's
    fiber translation."""

    def __init__(self, ctx: ReductionContext):
        self.ctx = ctx
        self.vertical = ctx.action.translated
        self.horizontal = tuple(c for c in ctx.space.coords if c not in self.vertical)
        self._vert_pos = [ctx.space.vars.index(f"p{a}") for a in self.vertical]

    def _vertical_degree(self, exponent) -> int:
        return sum(exponent[i] for i in self._vert_pos)

    def h(self, F: MultiPoly) -> MultiPoly:
        """Projection to vertical degree zero (in straightened coordinates)."""
        G = self.ctx.tube.apply_s_inv(F)
        kept = {e: c for e, c in G.terms.items() if self._vertical_degree(e) == 0}
        return self.ctx.tube.apply_s(MultiPoly(self.ctx.space.vars, kept))

    def pv(self, F: MultiPoly) -> MultiPoly:
        return F - self.h(F)

    def r(self, i: int, F: MultiPoly) -> MultiPoly:
        """The i-th division operator (1-based over the vertical directions):
        the splitting coefficients along the momentum components."""
        ctx = self.ctx
        pa = f"p{self.vertical[i - 1]}"
        G = ctx.tube.apply_s_inv(F)
        g = G.diff(pa)
        if g.is_zero():
            return MultiPoly.zero(ctx.space.vars)
        vars_t = ctx.space.vars + ("t",)
        scale = {
            f"p{a}": MultiPoly.variable(vars_t, "t") * MultiPoly.variable(vars_t, f"p{a}")
            for a in self.vertical
        }
        integrated = t_integral(g.substitute(scale), "t").with_vars(ctx.space.vars)
        return ctx.tube.apply_s(integrated)


def hv_split(F: MultiPoly, ctx: ReductionContext) -> Tuple[MultiPoly, MultiPoly]:
    split = CotangentSplit(ctx)
    hF = split.h(F)
    return hF, F - hF


def r_i(F: MultiPoly, ctx: ReductionContext, i: int) -> MultiPoly:
    return CotangentSplit(ctx).r(i, F)


def _vertical_difference(F: LambdaSeries, ctx: ReductionContext,
                         split: Optional[CotangentSplit] = None) -> LambdaSeries:
    """Sum over vertical directions of r_i(F)·J_i - r_i(F) ⋆ Jq_i; vanishes
    at order zero in the parameter whenever the quantum momentum map deforms
    the classical one."""
    split = split or CotangentSplit(ctx)
    out = LambdaSeries.zero(ctx.space.vars, ctx.order)
    for i in range(1, ctx.gdim + 1):
        rF = F.map_coeffs(lambda c, i=i: split.r(i, c))
        if rF.is_zero():
            continue
        Ji = ctx.J.components[i - 1].with_vars(ctx.space.vars)
        Jqi = ctx.Jq.components[i - 1].truncate(ctx.order)
        out = out + rF.map_coeffs(lambda c, Ji=Ji: c * Ji) - ctx.star.eval(rF, Jqi)
    return out


def delta_star(F: LambdaSeries, ctx: ReductionContext) -> LambdaSeries:
    """The vertical difference operator divided exactly by i times the
    parameter.  The order-0 remainder must vanish; otherwise the scenario
    data is inconsistent."""
    L = F.order
    up = elevate_context(ctx, L + 1)
    D = _vertical_difference(F.truncate(L + 1), up)
    if not D.coeffs[0].is_zero():
        raise ContractViolationError(
            "vertical difference has an order-0 remainder; cannot divide")
    return LambdaSeries(D.coeffs[1:]).scale(GR_MINUS_I)


def knp_reduced_star(red: ReducedAlgebra) -> StarProduct:
    """Closed-form reduced star product: lift both factors horizontally,
    star-multiply, invert the unipotent vertical correction, project to the
    horizontal part and identify with the reduced algebra.  Agrees exactly
    with the homological reduced star product."""
    from .koszul import prolongation

    def ev(f: MultiPoly, g: MultiPoly, order: int) -> LambdaSeries:
        ctx = red.ctx_at(order)
        split = CotangentSplit(ctx)
        lf = prolongation(red.lift(f), ctx)
        lg = prolongation(red.lift(g), ctx)
        F = ctx.star.eval(lf, lg)

        def correction(G: LambdaSeries) -> LambdaSeries:
            return _vertical_difference(G, ctx, split)

        G = invert_unipotent(correction, order)(F)
        H = G.map_coeffs(lambda c: ctx.tube.apply_s_inv(split.h(c)))
        # the horizontal part of an invariant product is a reduced element
        zero = {pa: MultiPoly.zero(ctx.space.vars) for pa in ctx.tube.constrained}
        down = H.map_coeffs(lambda c: c.substitute(zero).with_vars(ctx.cvars))
        return red.push_down_series(down)

    return StarProduct.custom(red.space, ev, hermitian=red.ctx.star.hermitian)


# ---------------------------------------------------------------------------
# fiber translations and shifted/magnetic scenarios
# ---------------------------------------------------------------------------

def fiber_translate_subst(space: PhaseSpace, alpha: Mapping[int, MultiPoly]
                          ) -> Tuple[Dict[str, MultiPoly], Dict[str, MultiPoly]]:
    """Substitution pair for the fiber translation p_a -> p_a + alpha_a(q),
    together with its inverse (alpha -> -alpha)."""
    subst: Dict[str, MultiPoly] = {}
    inv: Dict[str, MultiPoly] = {}
    for a, al in alpha.items():
        al = al.with_vars(space.vars)
        for pv in space.pvars:
            if al.uses(pv):
                raise AlgebraError("translation coefficients must depend on q only")
        pa = MultiPoly.variable(space.vars, f"p{a}")
        subst[f"p{a}"] = pa + al
        inv[f"p{a}"] = pa - al
    return subst, inv


def fiber_translate(f: LambdaSeries, space: PhaseSpace,
                    alpha: Mapping[int, MultiPoly]) -> LambdaSeries:
    subst, _ = fiber_translate_subst(space, alpha)
    return f.map_coeffs(lambda c: c.substitute(subst))


def build_shifted_context(base: ReductionContext,
                          b: Mapping[int, Tuple[int, Fraction]],
                          mu: Mapping[int, Fraction]) -> ReductionContext:
    """Scenario with magnetic term and shifted momentum value, assembled by
    pulling every piece of the base scenario back along the fiber
    translation p_a -> p_a + b·q_c - mu_a.

    ``b`` maps a translated coordinate label to the pair (coupled label,
    coupling constant); the coupled coordinate must not itself be
    translated, so the magnetic potential is invariant.
    """
    space = base.space
    translated = base.action.translated
    alpha: Dict[int, MultiPoly] = {}
    for a in translated:
        term = MultiPoly.zero(space.vars)
        if a in b:
            c_label, b_val = b[a]
            if c_label in translated:
                raise AlgebraError(
                    f"magnetic coupling to translated coordinate {c_label} "
                    "breaks invariance")
            term = term + space.q(c_label).scale(Fraction(b_val))
        if a in mu:
            term = term - MultiPoly.const(space.vars, Fraction(mu[a]))
        alpha[a] = term
    for a in set(b) | set(mu):
        if a not in translated:
            raise AlgebraError(f"coordinate {a} is not translated")

    s_subst, s_inv = fiber_translate_subst(space, alpha)
    if not any(not al.is_zero() for al in alpha.values()):
        return base

    star = StarProduct.pullback(base.star, s_subst, s_inv)
    apply_s = lambda f: f.substitute(s_subst)
    J = MomentumMap(base.J.lie,
                    [apply_s(c.with_vars(space.vars)) for c in base.J.components])
    Jq = QuantumMomentumMap(base.Jq.lie,
                            [c.map_coeffs(apply_s) for c in base.Jq.components])
    tube = GoodTube(space, translated, J, s_subst, s_inv)
    return ReductionContext(space, base.action, star, J, Jq, base.order, tube)
