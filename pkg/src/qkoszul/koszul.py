"""The augmented (quantum) Koszul complex on a reduction scenario.

A scenario bundles a star product, momentum maps and a global good tube on a
flat cotangent bundle with a lifted translation action.  On such scenarios
the tube is total (trivial cutoff, no globalization data), the retraction is
a coordinate substitution, and every operator below is an exact polynomial
operation.

Shifted and magnetic scenarios carry a fiber-translation substitution; the
homotopy and restriction are the conjugates of the canonical ones by that
substitution, while the boundary operators use the context's momentum maps
directly (the two descriptions agree because the substitution is an algebra
morphism intertwining all data).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import (
    GR_I,
    AlgebraError,
    ContractViolationError,
    GaussianRational,
    LambdaSeries,
    MultiPoly,
    gr,
    invert_unipotent,
    t_integral,
)
from .lie import (
    LieAlgebraData,
    MomentumMap,
    QuantumMomentumMap,
    TranslationAction,
    canonical_momentum_map,
)
from .phase_space import PhaseSpace, StarProduct

IndexKey = Tuple[int, ...]


def insert_index(alpha: int, key: IndexKey) -> Optional[Tuple[int, IndexKey]]:
    """Wedge e_alpha onto a sorted basis key; None if alpha already occurs."""
    if alpha in key:
        return None
    pos = sum(1 for i in key if i < alpha)
    sign = -1 if pos % 2 else 1
    return sign, tuple(sorted(key + (alpha,)))


def remove_index(key: IndexKey, pos: int) -> Tuple[int, IndexKey]:
    """Insertion derivation against the pos-th factor (0-based)."""
    sign = -1 if pos % 2 else 1
    return sign, key[:pos] + key[pos + 1:]


class KoszulChain:
    """Graded element of (series) ⊗ Λ^k of the acting algebra, keyed by
    strictly increasing index tuples."""

    __slots__ = ("gdim", "grade", "order", "vars", "terms")

    def __init__(self, gdim: int, grade: int, vars: Sequence[str], order: int,
                 terms: Mapping[IndexKey, LambdaSeries]):
        self.gdim = gdim
        self.grade = grade
        self.vars = tuple(vars)
        self.order = order
        clean: Dict[IndexKey, LambdaSeries] = {}
        for key, s in terms.items():
            if len(key) != grade or list(key) != sorted(set(key)):
                raise AlgebraError(f"bad key {key} for grade {grade}")
            if any(i < 1 or i > gdim for i in key):
                raise AlgebraError(f"index out of range in {key}")
            if s.order != order or s.vars != self.vars:
                raise AlgebraError("series in chain disagree on order or variables")
            if not s.is_zero():
                clean[key] = s
        self.terms = clean

    @staticmethod
    def zero(gdim: int, grade: int, vars: Sequence[str], order: int) -> "KoszulChain":
        return KoszulChain(gdim, grade, vars, order, {})

    @staticmethod
    def of_series(gdim: int, f: LambdaSeries) -> "KoszulChain":
        """Grade-0 chain wrapping a single series."""
        return KoszulChain(gdim, 0, f.vars, f.order, {(): f})

    def series(self) -> LambdaSeries:
        """The unique entry of a grade-0 chain."""
        if self.grade != 0:
            raise AlgebraError("not a grade-0 chain")
        return self.terms.get((), LambdaSeries.zero(self.vars, self.order))

    def get(self, key: IndexKey) -> LambdaSeries:
        return self.terms.get(tuple(key), LambdaSeries.zero(self.vars, self.order))

    def __add__(self, other: "KoszulChain") -> "KoszulChain":
        if (self.grade, self.gdim, self.order, self.vars) != (
            other.grade, other.gdim, other.order, other.vars
        ):
            raise AlgebraError("chain shape mismatch")
        out = dict(self.terms)
        for k, s in other.terms.items():
            out[k] = out[k] + s if k in out else s
        return KoszulChain(self.gdim, self.grade, self.vars, self.order, out)

    def __sub__(self, other: "KoszulChain") -> "KoszulChain":
        return self + other.scale(-1)

    def scale(self, c) -> "KoszulChain":
        return KoszulChain(self.gdim, self.grade, self.vars, self.order,
                           {k: s.scale(c) for k, s in self.terms.items()})

    def map_series(self, fn: Callable[[LambdaSeries], LambdaSeries]) -> "KoszulChain":
        return KoszulChain(self.gdim, self.grade, self.vars, self.order,
                           {k: fn(s) for k, s in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def min_lambda_order(self):
        orders = [s.min_lambda_order() for s in self.terms.values()]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    def __eq__(self, other):
        return (isinstance(other, KoszulChain)
                and self.grade == other.grade
                and self.terms == other.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            label = "e_" + "^e_".join(str(i) for i in key) if key else "()"
            parts.append(f"[{label}] {self.terms[key].render()}")
        return " ; ".join(parts)


class GoodTube:
    """Global good tube of a flat translation scenario.

    The tube straightens the momentum map into the fiber coordinates of the
    translated directions.  ``s_subst``/``s_inv`` is the fiber-translation
    substitution relating the scenario to the canonical one (identity maps
    for the canonical scenario itself): the constrained fiber coordinate of
    each translated direction maps to the matching momentum component.
    """

    def __init__(self, space: PhaseSpace, translated: Sequence[int],
                 J: MomentumMap,
                 s_subst: Optional[Mapping[str, MultiPoly]] = None,
                 s_inv: Optional[Mapping[str, MultiPoly]] = None):
        self.space = space
        self.translated = tuple(translated)
        self.constrained = tuple(f"p{a}" for a in self.translated)
        self.cvars = tuple(v for v in space.vars if v not in self.constrained)
        self.s_subst = dict(s_subst) if s_subst else {}
        self.s_inv = dict(s_inv) if s_inv else {}
        # tube property: the momentum components straighten to the fiber
        # coordinates under the inverse substitution
        for pa, Ja in zip(self.constrained, J.components):
            straight = self.apply_s_inv(Ja.with_vars(space.vars))
            if straight != MultiPoly.variable(space.vars, pa):
                raise AlgebraError(
                    f"tube property violated: {Ja.render()} does not straighten to {pa}"
                )

    def apply_s(self, f: MultiPoly) -> MultiPoly:
        return f.substitute(self.s_subst) if self.s_subst else f

    def apply_s_inv(self, f: MultiPoly) -> MultiPoly:
        return f.substitute(self.s_inv) if self.s_inv else f

    def apply_s_series(self, f: LambdaSeries) -> LambdaSeries:
        return f.map_coeffs(self.apply_s) if self.s_subst else f

    def apply_s_inv_series(self, f: LambdaSeries) -> LambdaSeries:
        return f.map_coeffs(self.apply_s_inv) if self.s_inv else f


class ReductionContext:
    """Everything needed to run one reduction scenario: the star product,
    the classical and quantum momentum maps, the good tube and the
    prolongation.  Immutable after construction."""

    def __init__(self, space: PhaseSpace, action: TranslationAction,
                 star: StarProduct, J: MomentumMap, Jq: QuantumMomentumMap,
                 order: int, tube: Optional[GoodTube] = None):
        self.space = space
        self.action = action
        self.star = star
        self.J = J
        self.Jq = Jq
        self.order = order
        if Jq.classical_part().components != tuple(
            c.with_vars(space.vars) for c in J.components
        ):
            raise AlgebraError("quantum momentum map does not deform the classical one")
        self.tube = tube or GoodTube(space, action.translated, J)
        self.gdim = action.dim
        self._iqq = None

    @staticmethod
    def canonical(space: PhaseSpace, translated: Sequence[int], star: StarProduct,
                  order: int, Jq: Optional[QuantumMomentumMap] = None) -> "ReductionContext":
        action = TranslationAction(space, translated)
        J = canonical_momentum_map(action)
        if Jq is None:
            Jq = QuantumMomentumMap.from_classical(J, order)
        return ReductionContext(space, action, star, J, Jq, order)

    # -- convenience ----------------------------------------------------

    @property
    def cvars(self) -> Tuple[str, ...]:
        return self.tube.cvars

    def zero_chain(self, grade: int) -> KoszulChain:
        return KoszulChain.zero(self.gdim, grade, self.space.vars, self.order)

    def series(self, poly: MultiPoly) -> LambdaSeries:
        return LambdaSeries.from_poly(poly.with_vars(self.space.vars), self.order)

    def constraint_series(self, poly: MultiPoly) -> LambdaSeries:
        return LambdaSeries.from_poly(poly.with_vars(self.cvars), self.order)


# ---------------------------------------------------------------------------
# boundary operators
# ---------------------------------------------------------------------------

def koszul_boundary(x: KoszulChain, ctx: ReductionContext) -> KoszulChain:
    """Classical boundary: multiply by the momentum components against the
    insertion derivation."""
    if x.grade < 1:
        raise AlgebraError("boundary needs grade >= 1")
    out = ctx.zero_chain(x.grade - 1)
    for key, F in x.terms.items():
        for pos, idx in enumerate(key):
            sign, rest = remove_index(key, pos)
            Jp = ctx.J.components[idx - 1].with_vars(ctx.space.vars)
            contrib = F.map_coeffs(lambda c, Jp=Jp: c * Jp).scale(sign)
            out = out + KoszulChain(ctx.gdim, x.grade - 1, x.vars, x.order,
                                    {rest: contrib})
    return out


def _structure_term(x: KoszulChain, ctx: ReductionContext) -> KoszulChain:
    """Common structure-constant term: (1/2) c^g_{ab} F ⊗ e_g ∧ i(e^a)i(e^b)ξ."""
    lie = ctx.action.lie
    out = ctx.zero_chain(x.grade - 1)
    if lie.is_abelian():
        return out
    for key, F in x.terms.items():
        for pos_b, beta in enumerate(key):
            sign_b, key_b = remove_index(key, pos_b)
            for pos_a, alpha in enumerate(key_b):
                sign_a, key_ab = remove_index(key_b, pos_a)
                for gamma, c in lie.bracket_coeffs(alpha, beta).items():
                    ins = insert_index(gamma, key_ab)
                    if ins is None:
                        continue
                    sign_g, newkey = ins
                    w = Fraction(sign_b * sign_a * sign_g, 2) * c
                    out = out + KoszulChain(
                        ctx.gdim, x.grade - 1, x.vars, x.order,
                        {newkey: F.scale(w)})
    return out


def quantum_koszul_boundary(x: KoszulChain, ctx: ReductionContext) -> KoszulChain:
    """Quantum boundary: right star multiplication by the quantum momentum
    components plus the structure-constant correction at first order."""
    if x.grade < 1:
        raise AlgebraError("boundary needs grade >= 1")
    out = ctx.zero_chain(x.grade - 1)
    for key, F in x.terms.items():
        for pos, idx in enumerate(key):
            sign, rest = remove_index(key, pos)
            Jq = ctx.Jq.components[idx - 1].truncate(ctx.order)
            contrib = ctx.star.eval(F, Jq).scale(sign)
            out = out + KoszulChain(ctx.gdim, x.grade - 1, x.vars, x.order,
                                    {rest: contrib})
    correction = _structure_term(x, ctx).map_series(
        lambda s: s.scale(GR_I).lambda_shift(1))
    return out + correction


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg boundary on a matrix representation
# ---------------------------------------------------------------------------

Vector = Tuple[GaussianRational, ...]
CEElement = Dict[IndexKey, Vector]


def _mat_apply(m: Sequence[Sequence[Fraction]], v: Vector) -> Vector:
    return tuple(
        sum((gr(m[i][j]) * v[j] for j in range(len(v))), gr(0))
        for i in range(len(v))
    )


def _vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _vec_scale(v: Vector, c: Fraction) -> Vector:
    return tuple(x * gr(c) for x in v)


def check_representation(lie: LieAlgebraData, rep: Sequence[Sequence[Sequence[Fraction]]]) -> None:
    """Validate rho([a,b]) = rho(a)rho(b) - rho(b)rho(a) on basis pairs."""
    dimv = len(rep[0])

    def matmul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(dimv)) for j in range(dimv)]
                for i in range(dimv)]

    def matsub(A, B):
        return [[A[i][j] - B[i][j] for j in range(dimv)] for i in range(dimv)]

    for a in range(1, lie.dim + 1):
        for b in range(1, lie.dim + 1):
            comm = matsub(matmul(rep[a - 1], rep[b - 1]), matmul(rep[b - 1], rep[a - 1]))
            want = [[Fraction(0)] * dimv for _ in range(dimv)]
            for g, c in lie.bracket_coeffs(a, b).items():
                for i in range(dimv):
                    for j in range(dimv):
                        want[i][j] += c * rep[g - 1][i][j]
            if comm != want:
                raise ContractViolationError(
                    f"matrices do not represent the algebra at pair {(a, b)}")


def ce_boundary(lie: LieAlgebraData, rep: Sequence[Sequence[Sequence[Fraction]]],
                x: CEElement, grade: int) -> CEElement:
    """Lie algebra homology boundary for a finite-dimensional representation,
    written with the insertion derivations and structure constants."""
    if grade < 1:
        raise AlgebraError("boundary needs grade >= 1")
    check_representation(lie, rep)
    out: CEElement = {}

    def add(key: IndexKey, v: Vector):
        cur = out.get(key)
        out[key] = _vec_add(cur, v) if cur else v

    for key, v in x.items():
        # representation term
        for pos, alpha in enumerate(key):
            sign, rest = remove_index(key, pos)
            w = _mat_apply(rep[alpha - 1], v)
            add(rest, _vec_scale(w, Fraction(sign)))
        # structure-constant term, with the opposite sign of the quantum one
        for pos_b, beta in enumerate(key):
            sign_b, key_b = remove_index(key, pos_b)
            for pos_a, alpha in enumerate(key_b):
                sign_a, key_ab = remove_index(key_b, pos_a)
                for gamma, c in lie.bracket_coeffs(alpha, beta).items():
                    ins = insert_index(gamma, key_ab)
                    if ins is None:
                        continue
                    sign_g, newkey = ins
                    add(newkey, _vec_scale(v, Fraction(-sign_b * sign_a * sign_g, 2) * c))
    return {k: v for k, v in out.items() if any(not c.is_zero() for c in v)}


def adjoint_representation(lie: LieAlgebraData) -> List[List[List[Fraction]]]:
    d = lie.dim
    return [
        [[lie.c(a, b, g) for b in range(1, d + 1)] for g in range(1, d + 1)]
        for a in range(1, d + 1)
    ]


# ---------------------------------------------------------------------------
# homotopy, prolongation, restriction
# ---------------------------------------------------------------------------

def restriction(f: LambdaSeries, ctx: ReductionContext) -> LambdaSeries:
    """Classical restriction to the constraint set: undo the fiber
    translation, then set the constrained fiber coordinates to zero."""
    tube = ctx.tube
    zero = {pa: MultiPoly.zero(ctx.space.vars) for pa in tube.constrained}

    def on_poly(c: MultiPoly) -> MultiPoly:
        return tube.apply_s_inv(c).substitute(zero).with_vars(tube.cvars)

    return f.map_coeffs(on_poly)


def prolongation(f, ctx: ReductionContext) -> LambdaSeries:
    """Extension of a constraint-algebra element by the tube retraction; on
    a total tube this is the variable inclusion."""
    if isinstance(f, MultiPoly):
        f = LambdaSeries.from_poly(f, ctx.order)
    if f.vars != ctx.cvars:
        raise AlgebraError("prolongation input must live on the constraint algebra")
    return f.map_coeffs(lambda c: c.with_vars(ctx.space.vars))


def classical_homotopy(x: KoszulChain, ctx: ReductionContext) -> KoszulChain:
    """Contracting homotopy from the good tube: in straightened coordinates,
    differentiate along each fiber direction, scale the fiber by the
    integration parameter, and integrate it out."""
    tube = ctx.tube
    vars_t = ctx.space.vars + ("t",)
    k = x.grade
    scale_sub = {
        pa: MultiPoly.variable(vars_t, "t") * MultiPoly.variable(vars_t, pa)
        for pa in tube.constrained
    }
    tpow = MultiPoly.variable(vars_t, "t")
    tk = MultiPoly.const(vars_t, 1)
    for _ in range(k):
        tk = tk * tpow

    def h_poly(c: MultiPoly, pa: str) -> MultiPoly:
        g = tube.apply_s_inv(c).diff(pa)
        if g.is_zero():
            return g
        scaled = g.substitute(scale_sub) * tk
        return tube.apply_s(t_integral(scaled, "t").with_vars(ctx.space.vars))

    out = ctx.zero_chain(k + 1)
    for key, F in x.terms.items():
        for alpha, pa in enumerate(tube.constrained, start=1):
            ins = insert_index(alpha, key)
            if ins is None:
                continue
            sign, newkey = ins
            G = F.map_coeffs(lambda c, pa=pa: h_poly(c, pa)).scale(sign)
            if not G.is_zero():
                out = out + KoszulChain(ctx.gdim, k + 1, x.vars, x.order, {newkey: G})
    return out


def quantum_restriction(f: LambdaSeries, ctx: ReductionContext) -> LambdaSeries:
    """Deformed restriction: the classical one composed with the geometric
    series inverting the unipotent correction built from the difference of
    the two boundary operators and the homotopy."""
    return _quantum_restriction_op(ctx)(f)


def _quantum_restriction_op(ctx: ReductionContext) -> Callable[[LambdaSeries], LambdaSeries]:
    if ctx._iqq is None:
        def raiser(F: LambdaSeries) -> LambdaSeries:
            hF = classical_homotopy(KoszulChain.of_series(ctx.gdim, F), ctx)
            diff = quantum_koszul_boundary(hF, ctx) - koszul_boundary(hF, ctx)
            return diff.series().scale(-1)

        inv = invert_unipotent(raiser, ctx.order)

        def iqq(F: LambdaSeries) -> LambdaSeries:
            return restriction(inv(F), ctx)

        ctx._iqq = iqq
    return ctx._iqq


def quantum_homotopy(x: KoszulChain, ctx: ReductionContext) -> KoszulChain:
    """Quantum contracting homotopy at the chain's grade: the classical one
    composed with the inverse of (h ∂_q + ∂_q h), which deviates from the
    identity at order one in the parameter."""
    k = x.grade
    iqq = _quantum_restriction_op(ctx)

    def inner(y: KoszulChain) -> KoszulChain:
        if k == 0:
            lifted = KoszulChain.of_series(ctx.gdim, prolongation(iqq(y.series()), ctx))
        else:
            lifted = classical_homotopy(quantum_koszul_boundary(y, ctx), ctx)
        return lifted + quantum_koszul_boundary(classical_homotopy(y, ctx), ctx)

    def raiser(y: KoszulChain) -> KoszulChain:
        return y - inner(y)

    inv = invert_unipotent(raiser, ctx.order)
    return classical_homotopy(inv(x), ctx)


def quantum_homotopy_minus_one(f: LambdaSeries, ctx: ReductionContext) -> LambdaSeries:
    """At grade -1 the quantum homotopy collapses to the prolongation."""
    if f.vars != ctx.cvars:
        raise AlgebraError("grade -1 input lives on the constraint algebra")
    return prolongation(f, ctx)


# ---------------------------------------------------------------------------
# batch verification
# ---------------------------------------------------------------------------

def verify_complex_identities(ctx: ReductionContext,
                              samples: Sequence[MultiPoly]) -> List[dict]:
    """Run every classical and quantum complex identity on chains built from
    the samples.  Returns one pass/fail entry per identity."""
    checks: List[dict] = []
    gdim = ctx.gdim
    L = ctx.order

    def entry(name, ok, witness=None):
        e = {"name": name, "status": "pass" if ok else "fail"}
        if witness is not None:
            e["witness"] = witness
        checks.append(e)

    def chains_of_grade(k: int) -> List[KoszulChain]:
        from itertools import combinations
        keys = list(combinations(range(1, gdim + 1), k))
        out = []
        for i, f in enumerate(samples):
            terms = {}
            for j, key in enumerate(keys):
                poly = samples[(i + j) % len(samples)]
                terms[key] = ctx.series(poly)
            out.append(KoszulChain(gdim, k, ctx.space.vars, L, terms))
        return out

    # boundary squares to zero
    ok, wit = True, None
    for k in range(2, gdim + 1):
        for x in chains_of_grade(k):
            if not koszul_boundary(koszul_boundary(x, ctx), ctx).is_zero():
                ok, wit = False, {"grade": k, "chain": x.render()}
                break
    entry("koszul_d_squared_zero", ok, wit)

    ok, wit = True, None
    for k in range(2, gdim + 1):
        for x in chains_of_grade(k):
            if not quantum_koszul_boundary(quantum_koszul_boundary(x, ctx), ctx).is_zero():
                ok, wit = False, {"grade": k, "chain": x.render()}
                break
    entry("quantum_d_squared_zero", ok, wit)

    # restriction annihilates boundaries
    ok, wit = True, None
    for x in chains_of_grade(1):
        if not restriction(koszul_boundary(x, ctx).series(), ctx).is_zero():
            ok, wit = False, {"chain": x.render()}
            break
    entry("restriction_of_boundary_zero", ok, wit)

    ok, wit = True, None
    for x in chains_of_grade(1):
        if not quantum_restriction(quantum_koszul_boundary(x, ctx).series(), ctx).is_zero():
            ok, wit = False, {"chain": x.render()}
            break
    entry("quantum_restriction_of_quantum_boundary_zero", ok, wit)

    # classical homotopy identities
    ok, wit = True, None
    for k in range(1, gdim + 1):
        for x in chains_of_grade(k):
            lhs = classical_homotopy(koszul_boundary(x, ctx), ctx) + \
                koszul_boundary(classical_homotopy(x, ctx), ctx)
            if lhs != x:
                ok, wit = False, {"grade": k, "chain": x.render()}
                break
    entry("homotopy_identity_positive_grades", ok, wit)

    ok, wit = True, None
    for f in samples:
        fs = ctx.series(f)
        lhs = prolongation(restriction(fs, ctx), ctx) + \
            koszul_boundary(classical_homotopy(KoszulChain.of_series(gdim, fs), ctx), ctx).series()
        if lhs != fs:
            ok, wit = False, {"f": f.render()}
            break
    entry("homotopy_identity_grade_zero", ok, wit)

    ok, wit = True, None
    for f in samples:
        g = prolongation(restriction(ctx.series(f), ctx), ctx)
        if not classical_homotopy(KoszulChain.of_series(gdim, g), ctx).is_zero():
            ok, wit = False, {"f": f.render()}
            break
    entry("homotopy_kills_prolongations", ok, wit)

    # quantum restriction structure
    ok, wit = True, None
    for f in samples:
        fs = ctx.series(f)
        if quantum_restriction(fs, ctx).coeffs[0] != restriction(fs, ctx).coeffs[0]:
            ok, wit = False, {"f": f.render()}
            break
    entry("quantum_restriction_classical_limit", ok, wit)

    ok, wit = True, None
    for f in samples:
        g = restriction(ctx.series(f), ctx)
        if quantum_restriction(prolongation(g, ctx), ctx) != g:
            ok, wit = False, {"f": f.render()}
            break
    entry("quantum_restriction_right_inverse", ok, wit)

    ok, wit = True, None
    for f in samples:
        fs = ctx.series(f)
        proj = prolongation(quantum_restriction(fs, ctx), ctx)
        if prolongation(quantum_restriction(proj, ctx), ctx) != proj:
            ok, wit = False, {"f": f.render()}
            break
    entry("projection_idempotent", ok, wit)

    # kernel of the quantum restriction contains the left ideal generators
    ok, wit = True, None
    for f in samples:
        for a in range(gdim):
            gen = ctx.star.eval(ctx.series(f), ctx.Jq.components[a].truncate(L))
            if not quantum_restriction(gen, ctx).is_zero():
                ok, wit = False, {"f": f.render(), "generator": a + 1}
                break
        if not ok:
            break
    entry("kernel_contains_ideal_generators", ok, wit)

    # direct sum decomposition: complement lands in the kernel
    ok, wit = True, None
    for f in samples:
        fs = ctx.series(f)
        rest = fs - prolongation(quantum_restriction(fs, ctx), ctx)
        if not quantum_restriction(rest, ctx).is_zero():
            ok, wit = False, {"f": f.render()}
            break
    entry("direct_sum_complement_in_kernel", ok, wit)

    # quantum homotopy identity at low grades
    for k in range(0, min(gdim, 2) + 1):
        ok, wit = True, None
        for x in chains_of_grade(k):
            if k == 0:
                lhs = KoszulChain.of_series(
                    gdim, prolongation(quantum_restriction(x.series(), ctx), ctx)
                ) + quantum_koszul_boundary(quantum_homotopy(x, ctx), ctx)
            else:
                lhs = quantum_homotopy(quantum_koszul_boundary(x, ctx), ctx) + \
                    quantum_koszul_boundary(quantum_homotopy(x, ctx), ctx)
            if lhs != x:
                ok, wit = False, {"grade": k, "chain": x.render()}
                break
        entry(f"quantum_homotopy_identity_grade_{k}", ok, wit)

    return checks
