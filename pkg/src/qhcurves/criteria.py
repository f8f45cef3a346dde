"""Quasihomogeneity criteria and the invariants ρ and ρ′.

``M_A`` is the A-module generated by ``t d/dt`` of the maximal ideal.  A
curve is tested for quasihomogeneity in three independent ways: whether
``t d/dt m_A`` is already a module (equal to ``M_A``), whether a unit of
``Ã`` carries ``m_A`` onto ``t d/dt m_A``, and whether ``ρ′ = 1``.  With
equations, the Jacobian ideal gives ``ρ``.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from math import gcd, lcm

from gmpy2 import mpq

from .algebra import (AlgebraModel, jacobian_generators, ring_model_from_window,
                      verify_equations)
from .errors import CriteriaDisagree, EquationsFailVerification, NoEquations
from .ideals import (FracIdeal, contains_ideal, dual_ideal, endo_ring, ideal_from_generators,
                     ideal_from_space, ideals_equal, length_quotient, maximal,
                     module_isomorphic, normalization, product_ideals, tdt_space,
                     unit_ideal)
from .linalg import SubspaceBasis, nullspace
from .semigroup import is_symmetric, semigroup_of_curve

log = logging.getLogger(__name__)


def subspace_tdt_m(model: AlgebraModel) -> SubspaceBasis:
    """``t d/dt`` applied to the maximal ideal, as a plain vector space."""
    return tdt_space(maximal(model).space)


def module_MA(model: AlgebraModel) -> FracIdeal:
    space = subspace_tdt_m(model)
    return ideal_from_space(model, space.rows(), space.lo, space.hi)


def _require_equations(model: AlgebraModel):
    spec = model.spec
    if spec is None or not spec.equations:
        raise NoEquations("the Jacobian ideal needs defining equations")
    if len(spec.equations) != spec.n - 1:
        raise NoEquations(
            f"expected {spec.n - 1} equations for a complete intersection in {spec.n} "
            f"variables, got {len(spec.equations)}")
    if not verify_equations(spec, max(model.moduli)):
        raise EquationsFailVerification("equations do not vanish on the parametrization")
    return spec


def jacobian_ideal(model: AlgebraModel) -> FracIdeal:
    """Ideal of maximal minors of the Jacobian matrix, restricted to the curve."""
    spec = _require_equations(model)
    order = max(model.moduli)
    while True:
        gens = jacobian_generators(spec, order)
        mu = [min((v for v in (g.valuation()[i] for g in gens) if isinstance(v, int)),
                  default=None) for i in range(model.r)]
        if all(m is not None for m in mu):
            need = max(m + d for m, d in zip(mu, model.delta))
            if need <= order:
                return ideal_from_generators(model, gens)
            order = need
        else:
            # every minor vanishes to this order on some branch
            if order > 8 * max(model.moduli):
                raise EquationsFailVerification(
                    "Jacobian minors vanish on a branch; the equations are not reduced there")
            order *= 2


def rho_invariant(model: AlgebraModel) -> int:
    """``ℓ(End(J^-1) / A)``."""
    if model.smooth:
        return 0
    jinv = dual_ideal(jacobian_ideal(model))
    return length_quotient(endo_ring(jinv), unit_ideal(model))


def rho_prime_invariant(model: AlgebraModel, gorenstein: bool | None = None) -> int:
    """``ℓ(End(M_A^-1) / A)``; on Gorenstein curves also equal to ``ℓ(End(M_A) / A)``."""
    if model.smooth:
        return 0
    A = unit_ideal(model)
    M = module_MA(model)
    value = length_quotient(endo_ring(dual_ideal(M)), A)
    if gorenstein is None:
        gorenstein = is_symmetric(semigroup_of_curve(model))
    if gorenstein:
        other = length_quotient(endo_ring(M), A)
        if other != value:
            raise CriteriaDisagree(
                f"End(M) and End(M^-1) have colengths {other} and {value} on a Gorenstein curve")
    return value


def _primitive(vec) -> tuple:
    den = lcm(*[int(mpq(v).denominator) for v in vec])
    ints = [int(mpq(v) * den) for v in vec]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints)


def detect_weights(equations, n: int) -> tuple | None:
    """Positive weights making each equation weighted homogeneous, if any exist.

    Only the given coordinates are tried; ``None`` says nothing about
    quasihomogeneity after a coordinate change.
    """
    relations = []
    for f in equations:
        exps = sorted(f.terms)
        for e in exps[1:]:
            relations.append([a - b for a, b in zip(e, exps[0])])
    columns = [{k: mpq(rel[j]) for k, rel in enumerate(relations) if rel[j]} for j in range(n)]
    kernel = nullspace(columns)
    if not kernel:
        return None
    basis = [[kv.get(j, mpq(0)) for j in range(n)] for kv in kernel]
    if len(basis) == 1:
        w = basis[0]
        if all(a > 0 for a in w) or all(a < 0 for a in w):
            return _primitive([abs(a) for a in w])
        return None
    return _positive_in_span(basis, relations, n)


def _positive_in_span(basis, relations, n):
    import numpy as np
    from scipy.optimize import linprog

    # w = sum c_k basis_k with every w_j >= 1, minimizing sum w
    B = np.array([[float(x) for x in row] for row in basis]).T
    res = linprog(c=B.sum(axis=0), A_ub=-B, b_ub=-np.ones(n), bounds=[(None, None)] * len(basis),
                  method="highs")
    if not res.success:
        return None
    from fractions import Fraction
    coeffs = [Fraction(float(c)).limit_denominator(10**6) for c in res.x]
    w = [sum(mpq(c) * row[j] for c, row in zip(coeffs, basis)) for j in range(n)]
    if all(a > 0 for a in w) and all(sum(r * a for r, a in zip(rel, w)) == 0 for rel in relations):
        return _primitive(w)
    return None


@dataclass
class InvariantReport:
    name: str
    r: int
    delta: tuple
    tau: tuple
    smooth: bool
    gorenstein: bool
    complete_intersection: bool
    qh_exact_differentials: bool
    qh_unit_multiplication: bool
    unit_witness: dict | None
    qh_rho_prime: bool | None
    qh_rho: bool | None
    rho: int | None
    rho_prime: int
    syntactic_weights: tuple | None
    quasihomogeneous: bool
    lengths: dict = field(default_factory=dict)
    gamma: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _check(cond: bool, message: str, checks: list) -> None:
    if not cond:
        raise CriteriaDisagree(message)
    checks.append(message)


def qh_report(model: AlgebraModel) -> InvariantReport:
    table = semigroup_of_curve(model)
    gamma = table.box()
    spec = model.spec
    has_eqs = bool(spec is not None and spec.equations)
    weights = detect_weights(spec.equations, spec.n) if has_eqs else None
    if model.smooth:
        return InvariantReport(
            name=model.name, r=model.r, delta=model.delta, tau=table.tau, smooth=True,
            gorenstein=True, complete_intersection=has_eqs,
            qh_exact_differentials=True, qh_unit_multiplication=True,
            unit_witness={(0, 0): mpq(1)}, qh_rho_prime=None, qh_rho=None,
            rho=0, rho_prime=0, syntactic_weights=weights, quasihomogeneous=True,
            lengths={"normalization": 0, "dual_maximal": 0, "end_MA": 0}, gamma=gamma,
            checks=["smooth: rho = rho' = 0"])
    checks: list = []
    A = unit_ideal(model)
    m = maximal(model)
    gorenstein = is_symmetric(table)
    tdt_m = subspace_tdt_m(model)
    M = module_MA(model)

    exact = ideals_equal(tdt_m, M)
    iso = module_isomorphic(m, tdt_m, require_unit_witness=True)
    unit = iso.isomorphic
    rho_p = rho_prime_invariant(model, gorenstein)
    end_m, end_M = endo_ring(m), endo_ring(M)
    lengths = {
        "normalization": length_quotient(normalization(model), A),
        "dual_maximal": length_quotient(dual_ideal(m), A),
        "end_MA": length_quotient(end_M, A),
    }
    _check(contains_ideal(end_M, end_m), "End(m) ⊆ End(M_A)", checks)
    _check(gorenstein == (lengths["dual_maximal"] == 1),
           "Gorenstein symmetry ⇔ ℓ(m^-1/A) = 1", checks)
    _check(not unit or exact, "unit isomorphism ⇒ t∂t m = M_A", checks)
    if gorenstein:
        _check(unit == exact, "unit isomorphism ⇔ t∂t m = M_A (Gorenstein)", checks)
        _check(exact == (rho_p == 1), "t∂t m = M_A ⇔ ρ' = 1 (Gorenstein)", checks)

    rho = None
    if has_eqs:
        rho = rho_invariant(model)
        _check(gorenstein, "complete intersection ⇒ Gorenstein", checks)
        _check(rho == rho_p, "ρ = ρ' (complete intersection)", checks)
        _check(exact == (rho == 1), "QH ⇔ ρ = 1 (complete intersection)", checks)
        if weights is not None:
            _check(exact, "weighted homogeneous equations ⇒ QH", checks)
    return InvariantReport(
        name=model.name, r=model.r, delta=model.delta, tau=table.tau, smooth=False,
        gorenstein=gorenstein, complete_intersection=has_eqs,
        qh_exact_differentials=exact, qh_unit_multiplication=unit,
        unit_witness=iso.witness if unit else None,
        qh_rho_prime=(rho_p == 1) if gorenstein else None,
        qh_rho=(rho == 1) if rho is not None else None,
        rho=rho, rho_prime=rho_p, syntactic_weights=weights,
        quasihomogeneous=unit, lengths=lengths, gamma=gamma, checks=checks)


def vasconcelos_step(model: AlgebraModel) -> AlgebraModel:
    """Replace ``A`` by ``End(J^-1)``; a smooth curve is returned unchanged."""
    J = jacobian_ideal(model)
    jinv = dual_ideal(J)
    E = endo_ring(jinv)
    A = unit_ideal(model)
    if E == A:
        return model
    if not ideals_equal(product_ideals(E, E), E):
        raise CriteriaDisagree("End(J^-1) is not closed under multiplication")
    if not ideals_equal(dual_ideal(product_ideals(J, jinv)), E):
        raise CriteriaDisagree("End(J^-1) differs from (J J^-1)^-1")
    return ring_model_from_window(E.space, model, name=f"{model.name}+step")


def ring_colength(bigger: AlgebraModel, model: AlgebraModel) -> int:
    """``ℓ(R / A)`` for a ring ``R`` produced from ``model``."""
    return length_quotient(FracIdeal(model, bigger.basis), unit_ideal(model))
