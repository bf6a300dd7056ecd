"""Flat symplectic phase spaces, the Poisson bracket and exact star
products given by terminating bidifferential series.

A phase space carries coordinates q_i, p_i indexed by a tuple of integer
labels (labels survive reduction, so reduced spaces keep the original
coordinate names).  Star products are evaluated by finite expansion: the
exponential series terminates because inputs are polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import (
    GR_I,
    GR_MINUS_I,
    GR_ONE,
    AlgebraError,
    GaussianRational,
    LambdaSeries,
    MultiPoly,
    VariableMismatchError,
    gr,
)


class PhaseSpace:
    """Cotangent bundle of a flat configuration space.

    ``coords`` are the configuration coordinate labels; the variable list is
    (q<i>..., p<i>...) in label order.  The fundamental matrix of
    dq^i ∧ dp_i has the q-block first; its exact inverse drives the Weyl
    exponent and the Poisson bracket.
    """

    def __init__(self, coords: Sequence[int]):
        self.coords = tuple(coords)
        self.n = len(self.coords)
        self.qvars = tuple(f"q{i}" for i in self.coords)
        self.pvars = tuple(f"p{i}" for i in self.coords)
        self.vars = self.qvars + self.pvars
        n = self.n
        # omega_ij for dq^i ∧ dp_i: [[0, I], [-I, 0]]
        self.omega_lower = [
            [Fraction(1) if (i < n and j == i + n) else
             Fraction(-1) if (i >= n and j == i - n) else Fraction(0)
             for j in range(2 * n)]
            for i in range(2 * n)
        ]
        # exact inverse: [[0, -I], [I, 0]]
        self.omega_upper = [
            [Fraction(-1) if (i < n and j == i + n) else
             Fraction(1) if (i >= n and j == i - n) else Fraction(0)
             for j in range(2 * n)]
            for i in range(2 * n)
        ]
        for i in range(2 * n):
            for j in range(2 * n):
                s = sum(self.omega_upper[i][k] * self.omega_lower[k][j] for k in range(2 * n))
                assert s == (1 if i == j else 0)

    @staticmethod
    def of_dim(n: int) -> "PhaseSpace":
        return PhaseSpace(range(1, n + 1))

    def q(self, i: int) -> MultiPoly:
        return MultiPoly.variable(self.vars, f"q{i}")

    def p(self, i: int) -> MultiPoly:
        return MultiPoly.variable(self.vars, f"p{i}")

    def zero_series(self, order: int) -> LambdaSeries:
        return LambdaSeries.zero(self.vars, order)

    def series(self, poly: MultiPoly, order: int) -> LambdaSeries:
        return LambdaSeries.from_poly(poly.with_vars(self.vars), order)


def poisson_bracket_poly(f: MultiPoly, g: MultiPoly, space: PhaseSpace) -> MultiPoly:
    if f.vars != space.vars or g.vars != space.vars:
        raise VariableMismatchError("arguments do not live on the phase space")
    out = MultiPoly.zero(space.vars)
    for qv, pv in zip(space.qvars, space.pvars):
        out = out + f.diff(qv) * g.diff(pv) - f.diff(pv) * g.diff(qv)
    return out


def poisson_bracket(f: LambdaSeries, g: LambdaSeries, space: PhaseSpace) -> LambdaSeries:
    """Canonical bracket, extended bilinearly over the formal parameter."""
    if f.order != g.order:
        raise AlgebraError("order mismatch")
    L = f.order
    out = space.zero_series(L)
    for r, a in enumerate(f.coeffs):
        if a.is_zero():
            continue
        for s, b in enumerate(g.coeffs):
            if r + s > L or b.is_zero():
                continue
            out = out + LambdaSeries.from_poly(
                poisson_bracket_poly(a, b, space), L, shift=r + s
            )
    return out


# A bidifferential pairing step maps one (left, right) polynomial pair to the
# list of derivative pairs with scalar weights.
PairList = List[Tuple[MultiPoly, MultiPoly, GaussianRational]]


def _expand_exponential(f: MultiPoly, g: MultiPoly, step, scalar_of_r, order: int,
                        vars: Tuple[str, ...]) -> LambdaSeries:
    """Evaluate mu ∘ exp(B) on a polynomial pair, where ``step`` applies B to
    a weighted pair list and ``scalar_of_r`` gives the order-r prefactor
    (including the 1/r!).  The loop terminates when B has killed every pair;
    contributions beyond the truncation order are dropped."""
    out = LambdaSeries.zero(vars, order)
    pairs: PairList = [(f, g, GR_ONE)]
    r = 0
    while pairs:
        if r <= order:
            c_r = scalar_of_r(r)
            total = MultiPoly.zero(vars)
            for a, b, w in pairs:
                total = total + (a * b).scale(w)
            if not total.is_zero():
                out = out + LambdaSeries.from_poly(total.scale(c_r), order, shift=r)
        else:
            break
        pairs = step(pairs)
        r += 1
    return out


class StarProduct:
    """An exact formal star product on a flat phase space.

    ``kind`` is one of ``weyl``, ``wick``, ``std``, ``pullback`` or
    ``custom``.  Evaluation is bilinear over Gaussian rationals and pure:
    the same inputs always give the same series.
    """

    def __init__(self, kind: str, space: PhaseSpace,
                 eval_poly: Optional[Callable[[MultiPoly, MultiPoly, int], LambdaSeries]] = None,
                 hermitian: Optional[bool] = None,
                 bracket_poly: Optional[Callable[[MultiPoly, MultiPoly], MultiPoly]] = None):
        self.kind = kind
        self.space = space
        self._eval_poly = eval_poly
        self.hermitian = hermitian
        # the classical bracket this product deforms: canonical by default,
        # transported for pulled-back products
        self.bracket_poly = bracket_poly or \
            (lambda f, g: poisson_bracket_poly(f, g, space))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def weyl(space: PhaseSpace) -> "StarProduct":
        n = space.n
        vars = space.vars
        half_minus_i = gr(0, Fraction(-1, 2))

        def step(pairs: PairList) -> PairList:
            out: PairList = []
            for a, b, w in pairs:
                for i in range(n):
                    qv, pv = space.qvars[i], space.pvars[i]
                    # omega^{q_i p_i} = -1, omega^{p_i q_i} = +1
                    aq, bp = a.diff(qv), b.diff(pv)
                    if not aq.is_zero() and not bp.is_zero():
                        out.append((aq, bp, -w))
                    ap, bq = a.diff(pv), b.diff(qv)
                    if not ap.is_zero() and not bq.is_zero():
                        out.append((ap, bq, w))
            return out

        def scalar_of_r(r: int) -> GaussianRational:
            c = GR_ONE
            for k in range(1, r + 1):
                c = c * half_minus_i * gr(Fraction(1, k))
            return c

        def ev(f, g, order):
            return _expand_exponential(f, g, step, scalar_of_r, order, vars)

        return StarProduct("weyl", space, ev, hermitian=True)

    @staticmethod
    def std(space: PhaseSpace) -> "StarProduct":
        vars = space.vars

        def step(pairs: PairList) -> PairList:
            out: PairList = []
            for a, b, w in pairs:
                for qv, pv in zip(space.qvars, space.pvars):
                    ap, bq = a.diff(pv), b.diff(qv)
                    if not ap.is_zero() and not bq.is_zero():
                        out.append((ap, bq, w))
            return out

        def scalar_of_r(r: int) -> GaussianRational:
            c = GR_ONE
            for k in range(1, r + 1):
                c = c * GR_MINUS_I * gr(Fraction(1, k))
            return c

        def ev(f, g, order):
            return _expand_exponential(f, g, step, scalar_of_r, order, vars)

        return StarProduct("std", space, ev, hermitian=False)

    @staticmethod
    def wick(space: PhaseSpace) -> "StarProduct":
        """Exponential of paired holomorphic/antiholomorphic derivatives,
        with z_k = q_k + i p_k fixed as the identification with complex
        coordinates."""
        vars = space.vars
        half = gr(Fraction(1, 2))
        half_i = gr(0, Fraction(1, 2))

        def dz(f: MultiPoly, k: int) -> MultiPoly:
            # d/dz = (d/dq - i d/dp) / 2
            return f.diff(space.qvars[k]).scale(half) - f.diff(space.pvars[k]).scale(half_i)

        def dzbar(f: MultiPoly, k: int) -> MultiPoly:
            # d/dzbar = (d/dq + i d/dp) / 2
            return f.diff(space.qvars[k]).scale(half) + f.diff(space.pvars[k]).scale(half_i)

        def step(pairs: PairList) -> PairList:
            out: PairList = []
            for a, b, w in pairs:
                for k in range(space.n):
                    az, bz = dz(a, k), dzbar(b, k)
                    if not az.is_zero() and not bz.is_zero():
                        out.append((az, bz, w))
            return out

        def scalar_of_r(r: int) -> GaussianRational:
            c = GR_ONE
            for k in range(1, r + 1):
                c = c * gr(Fraction(2, k))
            return c

        def ev(f, g, order):
            return _expand_exponential(f, g, step, scalar_of_r, order, vars)

        return StarProduct("wick", space, ev, hermitian=True)

    @staticmethod
    def pullback(base: "StarProduct", subst: Mapping[str, MultiPoly],
                 subst_inv: Mapping[str, MultiPoly]) -> "StarProduct":
        """The star product transported along a polynomial algebra
        automorphism: apply the inverse substitution to both factors,
        multiply with the base product, then substitute forward."""
        space = base.space

        def apply(s: Mapping[str, MultiPoly], f: MultiPoly) -> MultiPoly:
            return f.substitute(s) if s else f

        # generator round trip pins mutual invertibility
        for v in space.vars:
            x = MultiPoly.variable(space.vars, v)
            if apply(subst, apply(subst_inv, x)) != x or apply(subst_inv, apply(subst, x)) != x:
                raise AlgebraError(f"substitutions are not mutually inverse on {v!r}")

        def ev(f, g, order):
            res = base.eval_poly(apply(subst_inv, f), apply(subst_inv, g), order)
            return res.map_coeffs(lambda c: apply(subst, c))

        def bracket(f, g):
            return apply(subst,
                         base.bracket_poly(apply(subst_inv, f), apply(subst_inv, g)))

        return StarProduct("pullback", space, ev, hermitian=base.hermitian,
                           bracket_poly=bracket)

    @staticmethod
    def custom(space: PhaseSpace, eval_poly, hermitian=None) -> "StarProduct":
        return StarProduct("custom", space, eval_poly, hermitian=hermitian)

    # -- evaluation -------------------------------------------------------

    def eval_poly(self, f: MultiPoly, g: MultiPoly, order: int) -> LambdaSeries:
        return self._eval_poly(f, g, order)

    def eval(self, f: LambdaSeries, g: LambdaSeries) -> LambdaSeries:
        if f.order != g.order:
            raise AlgebraError("order mismatch")
        L = f.order
        out = LambdaSeries.zero(f.vars, L)
        for r, a in enumerate(f.coeffs):
            if a.is_zero():
                continue
            for s, b in enumerate(g.coeffs):
                if r + s > L or b.is_zero():
                    continue
                out = out + self.eval_poly(a, b, L - r - s).truncate(L).lambda_shift(r + s)
        return out

    def commutator(self, f: LambdaSeries, g: LambdaSeries) -> LambdaSeries:
        return self.eval(f, g) - self.eval(g, f)


def check_star_axioms(star: StarProduct, samples: Sequence[MultiPoly], order: int,
                      space: Optional[PhaseSpace] = None) -> List[dict]:
    """Exact order-by-order verification of the star product axioms on the
    sample set.  Failures are report entries carrying a witness, never
    exceptions."""
    space = space or star.space
    checks: List[dict] = []
    L = order

    def entry(name, ok, witness=None):
        e = {"name": name, "status": "pass" if ok else "fail"}
        if witness is not None:
            e["witness"] = witness
        checks.append(e)

    # associativity on consecutive triples
    ok, witness = True, None
    for i in range(len(samples) - 2):
        f, g, h = samples[i], samples[i + 1], samples[i + 2]
        fs, gs, hs = (space.series(x, L) for x in (f, g, h))
        lhs = star.eval(star.eval(fs, gs), hs)
        rhs = star.eval(fs, star.eval(gs, hs))
        if lhs != rhs:
            ok, witness = False, {"f": f.render(), "g": g.render(), "h": h.render(),
                                  "lhs": lhs.render(), "rhs": rhs.render()}
            break
    entry("associativity", ok, witness)

    # order-0 term is the pointwise product
    ok, witness = True, None
    for i in range(len(samples) - 1):
        f, g = samples[i], samples[i + 1]
        prod = star.eval_poly(f.with_vars(space.vars), g.with_vars(space.vars), L)
        if prod.coeffs[0] != f.with_vars(space.vars) * g.with_vars(space.vars):
            ok, witness = False, {"f": f.render(), "g": g.render(),
                                  "order0": prod.coeffs[0].render()}
            break
    entry("order0_pointwise", ok, witness)

    # first-order commutator reproduces i{.,.}
    ok, witness = True, None
    for i in range(len(samples) - 1):
        f, g = samples[i], samples[i + 1]
        fv, gv = f.with_vars(space.vars), g.with_vars(space.vars)
        comm = star.eval_poly(fv, gv, L) - star.eval_poly(gv, fv, L)
        expected = star.bracket_poly(fv, gv).scale(GR_I)
        if comm.coeffs[1] != expected:
            ok, witness = False, {"f": f.render(), "g": g.render(),
                                  "commutator_order1": comm.coeffs[1].render(),
                                  "i_bracket": expected.render()}
            break
    entry("order1_commutator_bracket", ok, witness)

    # Hermitian property (reported, not required by the axioms)
    ok, witness = True, None
    for i in range(len(samples) - 1):
        f, g = samples[i], samples[i + 1]
        fv, gv = f.with_vars(space.vars), g.with_vars(space.vars)
        lhs = star.eval_poly(fv, gv, L).conjugate()
        rhs = star.eval_poly(gv.conjugate(), fv.conjugate(), L)
        if lhs != rhs:
            ok, witness = False, {"f": f.render(), "g": g.render(),
                                  "conj_product": lhs.render(), "product_conj": rhs.render()}
            break
    entry("hermitian", ok, witness)

    # unit
    ok, witness = True, None
    one = MultiPoly.const(space.vars, 1)
    for f in samples:
        fv = f.with_vars(space.vars)
        left = star.eval_poly(one, fv, L)
        right = star.eval_poly(fv, one, L)
        want = LambdaSeries.from_poly(fv, L)
        if left != want or right != want:
            ok, witness = False, {"f": f.render()}
            break
    entry("unit", ok, witness)

    return checks
