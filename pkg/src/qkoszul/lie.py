"""Finite-dimensional Lie algebra data, lifted translation actions on flat
cotangent bundles, and classical/quantum momentum maps with their checkers.

Only lifted translation actions are realized as phase-space actions; general
(possibly nonabelian) algebras appear as abstract data for the boundary
operator tests.  The sign of the fundamental vector field is the one forced
by requiring the Hamiltonian generation identity for the canonical momentum
map: with J(e_a) = p_a the vector field of e_a acts on observables as
{f, p_a} = df/dq_a.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import (
    GR_I,
    AlgebraError,
    GaussianRational,
    LambdaSeries,
    MultiPoly,
    gr,
)
from .phase_space import PhaseSpace, StarProduct, poisson_bracket_poly


class LieAlgebraData:
    """Structure constants of a finite-dimensional Lie algebra in a fixed
    basis.  Antisymmetry and the Jacobi identity are validated exactly at
    construction."""

    def __init__(self, dim: int, structure: Dict[Tuple[int, int, int], Fraction]):
        self.dim = dim
        self.structure = {k: Fraction(v) for k, v in structure.items() if v != 0}
        self._validate()

    def c(self, alpha: int, beta: int, gamma: int) -> Fraction:
        """Structure constant for [e_alpha, e_beta] in direction e_gamma
        (1-based indices)."""
        return self.structure.get((alpha, beta, gamma), Fraction(0))

    def _validate(self) -> None:
        d = self.dim
        for a in range(1, d + 1):
            for b in range(1, d + 1):
                for g in range(1, d + 1):
                    if self.c(a, b, g) != -self.c(b, a, g):
                        raise AlgebraError(f"structure constants not antisymmetric at {(a, b, g)}")
        for a in range(1, d + 1):
            for b in range(1, d + 1):
                for cc in range(1, d + 1):
                    for e in range(1, d + 1):
                        s = Fraction(0)
                        for dd in range(1, d + 1):
                            s += self.c(a, b, dd) * self.c(dd, cc, e)
                            s += self.c(b, cc, dd) * self.c(dd, a, e)
                            s += self.c(cc, a, dd) * self.c(dd, b, e)
                        if s != 0:
                            raise AlgebraError(f"Jacobi identity fails at {(a, b, cc, e)}")

    def bracket_coeffs(self, alpha: int, beta: int) -> Dict[int, Fraction]:
        """[e_alpha, e_beta] as a map gamma -> coefficient."""
        out = {}
        for g in range(1, self.dim + 1):
            v = self.c(alpha, beta, g)
            if v != 0:
                out[g] = v
        return out

    def is_abelian(self) -> bool:
        return not self.structure

    @staticmethod
    def abelian(dim: int) -> "LieAlgebraData":
        return LieAlgebraData(dim, {})

    @staticmethod
    def heisenberg() -> "LieAlgebraData":
        """Three-dimensional algebra with [e1, e2] = e3 and central e3."""
        return LieAlgebraData(3, {(1, 2, 3): Fraction(1), (2, 1, 3): Fraction(-1)})


class TranslationAction:
    """Lifted action of a translation group on a flat cotangent bundle.

    ``translated`` lists the configuration coordinate labels being
    translated; the acting algebra is abelian of matching dimension and the
    lifted action fixes all momentum variables.
    """

    def __init__(self, space: PhaseSpace, translated: Sequence[int]):
        self.space = space
        self.translated = tuple(translated)
        for a in self.translated:
            if a not in space.coords:
                raise AlgebraError(f"coordinate {a} not on the phase space")
        if len(set(self.translated)) != len(self.translated):
            raise AlgebraError("duplicate translated coordinate")
        self.lie = LieAlgebraData.abelian(len(self.translated))

    @property
    def dim(self) -> int:
        return len(self.translated)

    def fundamental_derivative(self, alpha: int, f: MultiPoly) -> MultiPoly:
        """Action of basis element e_alpha (1-based) on an observable."""
        a = self.translated[alpha - 1]
        return f.diff(f"q{a}")


class MomentumMap:
    def __init__(self, lie: LieAlgebraData, components: Sequence[MultiPoly]):
        if len(components) != lie.dim:
            raise AlgebraError("component count does not match algebra dimension")
        self.lie = lie
        self.components = tuple(components)
        for J in self.components:
            if J != J.conjugate():
                raise AlgebraError("momentum map components must be real")

    def __eq__(self, other):
        return (isinstance(other, MomentumMap)
                and self.components == other.components)


class QuantumMomentumMap:
    def __init__(self, lie: LieAlgebraData, components: Sequence[LambdaSeries]):
        if len(components) != lie.dim:
            raise AlgebraError("component count does not match algebra dimension")
        self.lie = lie
        self.components = tuple(components)

    def classical_part(self) -> MomentumMap:
        return MomentumMap(self.lie, [c.coeffs[0] for c in self.components])

    @staticmethod
    def from_classical(J: MomentumMap, order: int) -> "QuantumMomentumMap":
        return QuantumMomentumMap(
            J.lie, [LambdaSeries.from_poly(c, order) for c in J.components]
        )

    def __eq__(self, other):
        return (isinstance(other, QuantumMomentumMap)
                and self.components == other.components)


def canonical_momentum_map(action: TranslationAction) -> MomentumMap:
    """Momentum map of the lifted translation action: the fiber pairing with
    the translation fields gives the conjugate momentum of each translated
    coordinate."""
    comps = [action.space.p(a) for a in action.translated]
    return MomentumMap(action.lie, comps)


def magnetic_momentum_map(action: TranslationAction, b: Fraction,
                          pair: Tuple[int, int]) -> MomentumMap:
    """Momentum map for the magnetically perturbed symplectic form
    b dq_a ∧ dq_c: the component of the translated direction a picks up the
    primitive b q_c.  Requires q_c untranslated so the primitive is
    invariant under the action."""
    a, c = pair
    if a not in action.translated:
        raise AlgebraError(f"coordinate {a} is not translated")
    if c in action.translated:
        raise AlgebraError(
            f"coordinate {c} is translated: the magnetic primitive would not be invariant"
        )
    if c not in action.space.coords:
        raise AlgebraError(f"coordinate {c} not on the phase space")
    b = Fraction(b)
    comps = []
    for t in action.translated:
        J = action.space.p(t)
        if t == a and b != 0:
            J = J + action.space.q(c).scale(b)
        comps.append(J)
    return MomentumMap(action.lie, comps)


def shift_momentum_map(J, mu: Sequence[Fraction]):
    """Subtract a constant momentum value componentwise.  Works on both the
    classical and the quantum kind; the quantum version shifts the
    order-zero coefficient."""
    mu = [Fraction(m) for m in mu]
    if len(mu) != len(J.components):
        raise AlgebraError("momentum value has wrong length")
    if isinstance(J, MomentumMap):
        comps = [c - MultiPoly.const(c.vars, m) for c, m in zip(J.components, mu)]
        return MomentumMap(J.lie, comps)
    if isinstance(J, QuantumMomentumMap):
        comps = []
        for c, m in zip(J.components, mu):
            shifted = [c.coeffs[0] - MultiPoly.const(c.vars, m)] + list(c.coeffs[1:])
            comps.append(LambdaSeries(shifted))
        return QuantumMomentumMap(J.lie, comps)
    raise TypeError("expected a classical or quantum momentum map")


def check_classical_equivariance(J: MomentumMap, space: PhaseSpace) -> List[dict]:
    """Verify {J(e_a), J(e_b)} = J([e_a, e_b]) for all basis pairs."""
    checks = []
    k = J.lie.dim
    for a in range(1, k + 1):
        for b in range(a + 1, k + 1):
            lhs = poisson_bracket_poly(
                J.components[a - 1].with_vars(space.vars),
                J.components[b - 1].with_vars(space.vars),
                space,
            )
            rhs = MultiPoly.zero(space.vars)
            for g, coeff in J.lie.bracket_coeffs(a, b).items():
                rhs = rhs + J.components[g - 1].with_vars(space.vars).scale(coeff)
            ok = lhs == rhs
            e = {"name": f"equivariance_e{a}_e{b}", "status": "pass" if ok else "fail"}
            if not ok:
                e["witness"] = {"bracket": lhs.render(), "image_of_bracket": rhs.render()}
            checks.append(e)
    return checks


def check_quantum_momentum_map(star: StarProduct, Jq: QuantumMomentumMap,
                               samples: Sequence[MultiPoly], order: int) -> List[dict]:
    """Verify the two defining identities of a quantum momentum map at the
    given truncation order, and report whether the classical map itself
    qualifies (strong invariance)."""
    space = star.space
    L = order
    checks = []
    J0 = Jq.classical_part()

    # generation identity: commutator with Jq reproduces the scaled bracket
    ok, witness = True, None
    for a in range(1, Jq.lie.dim + 1):
        Ja = Jq.components[a - 1].truncate(L)
        for f in samples:
            fs = space.series(f, L)
            lhs = star.eval(Ja, fs) - star.eval(fs, Ja)
            bracket = star.bracket_poly(
                J0.components[a - 1].with_vars(space.vars), f.with_vars(space.vars)
            )
            rhs = LambdaSeries.from_poly(bracket.scale(GR_I), L, shift=1)
            if lhs != rhs:
                ok, witness = False, {"generator": a, "f": f.render(),
                                      "commutator": lhs.render(), "expected": rhs.render()}
                break
        if not ok:
            break
    e = {"name": "quantum_hamiltonian_identity", "status": "pass" if ok else "fail"}
    if witness:
        e["witness"] = witness
    checks.append(e)

    # bracket compatibility on basis pairs
    ok, witness = True, None
    for a in range(1, Jq.lie.dim + 1):
        for b in range(a + 1, Jq.lie.dim + 1):
            Ja = Jq.components[a - 1].truncate(L)
            Jb = Jq.components[b - 1].truncate(L)
            lhs = star.eval(Ja, Jb) - star.eval(Jb, Ja)
            rhs = LambdaSeries.zero(space.vars, L)
            for g, coeff in Jq.lie.bracket_coeffs(a, b).items():
                rhs = rhs + Jq.components[g - 1].truncate(L).scale(coeff)
            rhs = rhs.scale(GR_I).lambda_shift(1)
            if lhs != rhs:
                ok, witness = False, {"pair": (a, b), "commutator": lhs.render(),
                                      "expected": rhs.render()}
    e = {"name": "quantum_bracket_compatibility", "status": "pass" if ok else "fail"}
    if witness:
        e["witness"] = witness
    checks.append(e)

    # reported property, not a requirement: the classical map may itself
    # already be a quantum momentum map
    strongly = Jq == QuantumMomentumMap.from_classical(J0, Jq.components[0].order)
    checks.append({"name": "strong_invariance", "status": "pass",
                   "info": "classical map is quantum" if strongly
                   else "quantum map carries corrections"})
    return checks
