"""Fractional ideals of a curve algebra.

An ideal is stored as a canonical :class:`SubspaceBasis`: ``I = span(rows) +
t^hi Ã`` with ``lo`` the componentwise least valuation and ``hi`` the least
``c`` with ``t^c Ã ⊆ I``.  Homomorphism modules ``{x : x I ⊆ J}`` are kernels
of explicit finite linear maps on the window ``[lo_J - lo_I, hi_J - lo_I)``;
anything of higher valuation multiplies ``I`` into the tail of ``J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from gmpy2 import mpq

from .algebra import AlgebraModel, closure, maximal_ideal
from .errors import ContainmentViolation, NoNonZeroDivisor, NotContained
from .linalg import (Echelon, SubspaceBasis, by_branch, monomial, mul_truncated,
                     nullspace, truncate)
from .series import MultiSeries


@dataclass(frozen=True, eq=False)
class FracIdeal:
    model: AlgebraModel
    space: SubspaceBasis
    generators: tuple = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "space", self.space.canonical())

    @property
    def r(self) -> int:
        return self.model.r

    @property
    def lo(self) -> tuple:
        return self.space.lo

    @property
    def hi(self) -> tuple:
        return self.space.hi

    @property
    def shift(self) -> tuple:
        return self.space.shift

    @property
    def subspace(self) -> SubspaceBasis:
        return self.space

    def colength(self) -> int:
        """``dim t^lo Ã / I``."""
        return sum(h - l for h, l in zip(self.hi, self.lo)) - self.space.rank

    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"FracIdeal(lo={self.lo}, hi={self.hi}, rank={self.space.rank})"


def _vector(x, hi) -> dict:
    if isinstance(x, MultiSeries):
        return x.to_vector(hi)
    return truncate(x, hi)


def _valuations(x, r) -> list:
    if isinstance(x, MultiSeries):
        return [v if isinstance(v, int) else None for v in x.valuation()]
    out = [None] * r
    for e, i in x:
        if out[i] is None or e < out[i]:
            out[i] = e
    return out


def ideal_from_space(model: AlgebraModel, vectors, lo, hi) -> FracIdeal:
    """A-module closure of ``span(vectors) + t^hi Ã`` (the caller guarantees the tail)."""
    span = tuple(h - l for h, l in zip(hi, lo))
    space = closure(vectors, lo, hi, model.multipliers(span), model.r)
    return FracIdeal(model, space)


def ideal_from_generators(model: AlgebraModel, gens: Sequence) -> FracIdeal:
    """The A-module generated by ``gens`` (MultiSeries or sparse vectors)."""
    r = model.r
    mu = [None] * r
    for g in gens:
        for i, v in enumerate(_valuations(g, r)):
            if v is not None and (mu[i] is None or v < mu[i]):
                mu[i] = v
    if any(m is None for m in mu):
        raise NoNonZeroDivisor("generators vanish identically on some branch")
    # a generic combination g has ν(g) = mu, and g·t^δ Ã ⊆ I
    hi = tuple(m + d for m, d in zip(mu, model.delta))
    vectors = [_vector(g, hi) for g in gens]
    ideal = ideal_from_space(model, vectors, tuple(mu), hi)
    return FracIdeal(model, ideal.space, tuple(vectors))


def unit_ideal(model: AlgebraModel) -> FracIdeal:
    return FracIdeal(model, model.basis)


def normalization(model: AlgebraModel) -> FracIdeal:
    zero = (0,) * model.r
    return FracIdeal(model, SubspaceBasis(zero, zero))


def maximal(model: AlgebraModel) -> FracIdeal:
    return FracIdeal(model, maximal_ideal(model))


def principal(model: AlgebraModel, x) -> FracIdeal:
    return ideal_from_generators(model, [x])


def module_generators(ideal: FracIdeal) -> list:
    """Lifts of a basis of ``I / rad(A) I``: a minimal generating set."""
    model = ideal.model
    lift = tuple(h + max(d, 1) for h, d in zip(ideal.hi, model.delta))
    ext = ideal.space.extended(lift)
    span = tuple(h - l for h, l in zip(lift, ideal.lo))
    rows = ext.rows()
    ech = Echelon()
    for g in model.radical_multipliers(span):
        for v in rows:
            ech.add(mul_truncated(g, v, lift, model.r))
    gens = []
    for v in rows:
        if ech.add(v):
            gens.append(v)
    return gens


def is_principal(ideal: FracIdeal) -> bool:
    return len(module_generators(ideal)) == 1


def _hom_window(spanning: Sequence[dict], mu1: Sequence[int], target: SubspaceBasis,
                r: int) -> SubspaceBasis:
    """``{x : x s ∈ target for s in spanning}``, valuations of the spanning set ``>= mu1``.

    ``x`` is sought in the window ``[lo_T - mu1, hi_T - mu1)``; the tail above it
    maps into the tail of the target.
    """
    lo = tuple(a - b for a, b in zip(target.lo, mu1))
    hi = tuple(a - b for a, b in zip(target.hi, mu1))
    unknowns = [(e, i) for i in range(r) for e in range(lo[i], hi[i])]
    tech = target.ech
    split = [by_branch(g, r) for g in spanning]
    columns = []
    for e, i in unknowns:
        col = {}
        lim = target.hi[i]
        for gi, gb in enumerate(split):
            prod = {}
            for e2, c in gb[i]:
                k = e + e2
                if k >= lim:
                    break
                prod[(k, i)] = c
            if prod:
                for k, c in tech.reduce(prod).items():
                    col[(gi, k)] = c
        columns.append(col)
    vecs = []
    for kv in nullspace(columns):
        vecs.append({unknowns[j]: c for j, c in kv.items()})
    return SubspaceBasis.from_vectors(vecs, lo, hi)


def hom_ideals(I1: FracIdeal, I2: FracIdeal) -> FracIdeal:
    """``Hom_A(I1, I2) = {x in L : x I1 ⊆ I2}``."""
    gens = module_generators(I1)
    return FracIdeal(I1.model, _hom_window(gens, I1.lo, I2.space, I1.r))


def hom_into_space(ideal: FracIdeal, target: SubspaceBasis) -> SubspaceBasis:
    """``{x : x I ⊆ target}`` for a k-subspace ``target`` (not necessarily a module)."""
    lo_x = tuple(a - b for a, b in zip(target.lo, ideal.lo))
    spanning = ideal.space.rows()
    for i in range(ideal.r):
        for e in range(ideal.hi[i], target.hi[i] - lo_x[i]):
            spanning.append(monomial(e, i))
    return _hom_window(spanning, ideal.lo, target, ideal.r).canonical()


def dual_ideal(ideal: FracIdeal) -> FracIdeal:
    return hom_ideals(ideal, unit_ideal(ideal.model))


def endo_ring(ideal: FracIdeal) -> FracIdeal:
    """``End_A(I)``; always sandwiched between ``A`` and ``Ã``."""
    end = hom_ideals(ideal, ideal)
    if not (contains_ideal(end, unit_ideal(ideal.model))
            and contains_ideal(normalization(ideal.model), end)):
        raise ContainmentViolation(f"endomorphism ring {end} escapes A ⊆ End ⊆ Ã")
    return end


def contains_ideal(big: FracIdeal, small: FracIdeal) -> bool:
    return big.space.contains_space(small.space)


def length_quotient(big: FracIdeal, small: FracIdeal) -> int:
    """``ℓ(big / small)`` for ``small ⊆ big``."""
    if not contains_ideal(big, small):
        raise NotContained(f"{small} is not contained in {big}")
    H = tuple(max(a, b) for a, b in zip(big.hi, small.hi))
    return big.space.dim_below(H) - small.space.dim_below(H)


def gamma_box(space: SubspaceBasis, lo: Sequence[int], hi: Sequence[int]) -> frozenset:
    """Values of non-zerodivisors of the space in the box ``prod [lo_i, hi_i]``."""
    from itertools import product
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return frozenset(a for a in product(*ranges) if space.has_value(a))


def ideals_equal(I: FracIdeal | SubspaceBasis, J: FracIdeal | SubspaceBasis,
                 cross_check: bool = False) -> bool:
    """Equality of subspaces; optionally cross-checked against value sets on nested pairs."""
    a = I.space if isinstance(I, FracIdeal) else I.canonical()
    b = J.space if isinstance(J, FracIdeal) else J.canonical()
    equal = a == b
    if cross_check and (a.contains_space(b) or b.contains_space(a)):
        lo = tuple(min(x, y) for x, y in zip(a.lo, b.lo))
        hi = tuple(max(x, y) for x, y in zip(a.hi, b.hi))
        same_values = gamma_box(a, lo, hi) == gamma_box(b, lo, hi)
        if same_values != equal:
            raise ContainmentViolation("value sets disagree with the subspace comparison")
    return equal


def product_ideals(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    r = I.r
    lo = tuple(a + b for a, b in zip(I.lo, J.lo))
    hi = tuple(min(a + d, c + b) for a, b, c, d in zip(I.lo, J.lo, I.hi, J.hi))
    vecs = [mul_truncated(u, v, hi, r) for u in I.space.rows() for v in J.space.rows()]
    return FracIdeal(I.model, SubspaceBasis.from_vectors(vecs, lo, hi))


def valuation_of(x: dict, r: int) -> tuple:
    v = _valuations(x, r)
    return tuple(float("inf") if a is None else a for a in v)


def scale_space(x: dict, space: SubspaceBasis) -> SubspaceBasis:
    """``x · space`` for a non-zerodivisor ``x`` given exactly."""
    r = space.r
    nu = _valuations(x, r)
    if any(v is None for v in nu):
        raise NoNonZeroDivisor("scaling element is a zero divisor")
    lo = tuple(a + b for a, b in zip(space.lo, nu))
    hi = tuple(a + b for a, b in zip(space.hi, nu))
    vecs = [mul_truncated(x, v, hi, r) for v in space.rows()]
    return SubspaceBasis.from_vectors(vecs, lo, hi).canonical()


def scale(x, ideal: FracIdeal) -> FracIdeal:
    if isinstance(x, MultiSeries):
        nu = x.valuation()
        # terms of x at or above nu + (hi - lo) only meet the tail; keep the leading term
        span = tuple(v + max(h - l, 1) for v, h, l in zip(nu, ideal.hi, ideal.lo))
        x = x.to_vector(span)
    return FracIdeal(ideal.model, scale_space(x, ideal.space))


def tdt_space(space: SubspaceBasis) -> SubspaceBasis:
    """Image of a subspace of ``t Ã`` under ``t d/dt``.

    ``t d/dt`` maps ``t^hi Ã`` onto itself when ``hi >= 1``, so the tail is kept.
    """
    if any(l < 1 for l in space.lo):
        raise ValueError("t d/dt image is only tracked for subspaces of t Ã")
    vecs = [{(e, i): c * e for (e, i), c in row.items()} for row in space.rows()]
    return SubspaceBasis.from_vectors(vecs, space.lo, space.hi).canonical()


class Isomorphism(NamedTuple):
    isomorphic: bool
    witness: dict | None
    note: str


def _element_with_value(space: SubspaceBasis, alpha: Sequence[int]) -> dict | None:
    """A concrete element of valuation exactly ``alpha`` (all components finite), or None."""
    r = space.r
    if not space.has_value(alpha):
        return None
    rows = space.filtered(alpha)
    tail = [monomial(alpha[i], i) for i in range(r) if alpha[i] >= space.hi[i]]
    basis = rows + tail
    m = len(basis)
    for c in range(1, r * max(m - 1, 0) + 2):
        x: dict = {}
        for j, v in enumerate(basis):
            coeff = mpq(c) ** j
            for k, a in v.items():
                x[k] = x.get(k, 0) + coeff * a
        x = {k: a for k, a in x.items() if a}
        if all(x.get((alpha[i], i)) for i in range(r)):
            return x
    raise ContainmentViolation("value sweep failed; the value test and the sweep disagree")


def module_isomorphic(I: FracIdeal, J: FracIdeal | SubspaceBasis,
                      require_unit_witness: bool = False) -> Isomorphism:
    """Decide ``x I = J`` for some ``x`` in ``L`` and return a verified witness.

    If ``x I = J`` then ``ν(x) = lo_J - lo_I`` and multiplication by ``x``
    preserves colength inside the valuation lattice, so the question reduces
    to equal colengths plus that value occurring in ``{x : x I ⊆ J}``.
    """
    target = J.space if isinstance(J, FracIdeal) else J.canonical()
    nu = tuple(a - b for a, b in zip(target.lo, I.lo))
    colen_i = sum(h - l for h, l in zip(I.hi, I.lo)) - I.space.rank
    colen_j = sum(h - l for h, l in zip(target.hi, target.lo)) - target.rank
    if colen_i != colen_j:
        return Isomorphism(False, None, "colengths differ")
    if isinstance(J, FracIdeal):
        H = hom_ideals(I, J).space
    else:
        H = hom_into_space(I, target)
    x = _element_with_value(H, nu)
    if x is None:
        return Isomorphism(False, None, f"no element of valuation {nu} maps I into J")
    if scale_space(x, I.space) != target:
        raise ContainmentViolation("witness failed exact verification")
    if require_unit_witness and any(nu):
        return Isomorphism(False, x, "only non-unit witnesses (all witnesses share a valuation)")
    return Isomorphism(True, x, "verified")
