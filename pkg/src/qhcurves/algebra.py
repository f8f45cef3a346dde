"""The coordinate ring of a curve, realized inside its truncated normalization.

``A`` is spanned by the monomials in the branch parametrizations.  Modulo
``t^N`` these monomials span exactly ``(A + t^N Ã) / t^N Ã``, and the
conductor read off from that quotient is the true conductor as soon as
``N >= δ + m`` componentwise (``m`` the branch multiplicities): for a generic
linear form ``g`` in the coordinates, ``t^N Ã ⊆ g t^δ Ã`` and the tail can be
absorbed by successive approximation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence


from .errors import DegenerateInput, NoStabilization, OrderTooLow
from .linalg import Echelon, SubspaceBasis, constant_one, monomial, mul_truncated, truncate
from .polynomial import determinant
from .series import MultiSeries, TruncatedSeries, expand_rational_function, rational

log = logging.getLogger(__name__)

DEFAULT_ORDER = 16
DEFAULT_MAX_ORDER = 512


@dataclass(frozen=True)
class SeriesSource:
    """A coordinate function on one branch: ``num(t) / den(t)``, or a fixed truncated series."""

    num: tuple = ()
    den: tuple = (1,)
    fixed: TruncatedSeries | None = None

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(rational(c) for c in self.num))
        object.__setattr__(self, "den", tuple(rational(c) for c in self.den))
        if self.fixed is None:
            # validates den(0) != 0
            expand_rational_function((), self.den, 1)

    @classmethod
    def polynomial(cls, terms: dict):
        terms = {int(e): rational(c) for e, c in terms.items()}
        if any(e < 0 for e in terms):
            raise DegenerateInput("negative exponent in a parametrization")
        top = max(terms, default=-1)
        return cls(tuple(terms.get(e, 0) for e in range(top + 1)))

    @classmethod
    def from_series(cls, s: TruncatedSeries):
        if s.exact:
            return cls.polynomial(s.terms())
        return cls(fixed=s)

    @property
    def is_exact_polynomial(self) -> bool:
        return self.fixed is None and all(c == 0 for c in self.den[1:])

    def expand(self, order: int) -> TruncatedSeries:
        if self.fixed is not None:
            if self.fixed.order is not None and self.fixed.order < order:
                raise OrderTooLow(
                    f"parametrization known to order {self.fixed.order}, need {order}")
            return self.fixed.truncate(order) if self.fixed.order is not None else self.fixed
        if self.is_exact_polynomial:
            return expand_rational_function(self.num, self.den[:1], None)
        return expand_rational_function(self.num, self.den, order)


@dataclass(frozen=True)
class CurveSpec:
    """Branch parametrizations ``param[i][j]`` (branch ``i``, coordinate ``j``)."""

    param: tuple
    variables: tuple = ()
    equations: tuple | None = None
    name: str = "curve"

    def __post_init__(self):
        param = tuple(tuple(s if isinstance(s, SeriesSource) else SeriesSource.from_series(s)
                            for s in branch) for branch in self.param)
        object.__setattr__(self, "param", param)
        if not param or not param[0]:
            raise DegenerateInput("a curve needs at least one branch and one coordinate")
        n = len(param[0])
        if any(len(b) != n for b in param):
            raise DegenerateInput("every branch must define every coordinate")
        if not self.variables:
            names = ("x", "y", "z", "w") if n <= 4 else tuple(f"x{j}" for j in range(n))
            object.__setattr__(self, "variables", tuple(names[:n]))
        if self.equations is not None:
            object.__setattr__(self, "equations", tuple(self.equations))

    @classmethod
    def monomial_curve(cls, *exponents, name=None):
        """Single branch ``(t^a, t^b, ...)``."""
        branch = tuple(SeriesSource.polynomial({a: 1}) for a in exponents)
        return cls((branch,), name=name or "monomial" + "".join(f"_{a}" for a in exponents))

    @property
    def r(self) -> int:
        return len(self.param)

    @property
    def n(self) -> int:
        return len(self.param[0])

    def series(self, i: int, j: int, order: int) -> TruncatedSeries:
        return self.param[i][j].expand(order)

    def branch_point(self, i: int, order: int) -> list:
        return [self.series(i, j, order) for j in range(self.n)]

    def coordinate(self, j: int, order: Sequence[int]) -> MultiSeries:
        return MultiSeries(tuple(self.series(i, j, order[i]) for i in range(self.r)))

    def coordinate_vectors(self, span: Sequence[int]) -> list:
        return [self.coordinate(j, span).to_vector(span) for j in range(self.n)]


def verify_equations(spec: CurveSpec, order: int) -> bool:
    """Every equation vanishes on every branch modulo ``t^order``."""
    if not spec.equations:
        return False
    for i in range(spec.r):
        point = spec.branch_point(i, order)
        for f in spec.equations:
            value = f.evaluate(point)
            if any(e < order for e in value.terms()):
                return False
    return True


def closure(vectors, lo, hi, multipliers, r) -> SubspaceBasis:
    """Smallest subspace of the window containing ``vectors`` and stable under the multipliers."""
    ech = Echelon()
    work = []
    for v in vectors:
        w = ech.reduce(truncate(v, hi))
        if w:
            ech.add(w)
            work.append(w)
    while work:
        v = work.pop()
        for g in multipliers:
            w = ech.reduce(mul_truncated(g, v, hi, r))
            if w:
                ech.add(w)
                work.append(w)
    return SubspaceBasis(lo, hi, ech)


def _window_conductor(space: SubspaceBasis) -> tuple:
    return space.own_tail()


@dataclass(frozen=True)
class AlgebraModel:
    spec: CurveSpec | None
    moduli: tuple
    basis: SubspaceBasis
    delta: tuple
    smooth: bool
    stability_certified: bool
    multiplicity: tuple = ()
    ring_extra: tuple = field(default=(), repr=False)
    name: str = "curve"

    @property
    def r(self) -> int:
        return len(self.delta)

    @property
    def derived(self) -> bool:
        return self.spec is None

    @property
    def tau(self) -> tuple:
        return tuple(d - 1 for d in self.delta)

    def multipliers(self, span: Sequence[int]) -> list:
        """Elements whose products with a module's window generate its closure below ``span``."""
        span = tuple(max(s, 1) for s in span)
        if not self.derived:
            return [v for v in self.spec.coordinate_vectors(span) if v]
        gens = [truncate(v, span) for v in self.ring_extra]
        for i in range(self.r):
            for e in range(self.delta[i], span[i]):
                gens.append(monomial(e, i))
        return [g for g in gens if g]

    def radical_multipliers(self, span: Sequence[int]) -> list:
        """Generators of the Jacobson radical (the maximal ideal for curve models)."""
        if not self.derived:
            return self.multipliers(span)
        span = tuple(max(s, 1) for s in span)
        rad = self.basis.filtered((1,) * self.r)
        gens = [truncate(v, span) for v in rad]
        for i in range(self.r):
            for e in range(max(self.delta[i], 1), span[i]):
                gens.append(monomial(e, i))
        return [g for g in gens if g]


def _multiplicities(spec: CurveSpec, order: int) -> tuple | None:
    mult = []
    for i in range(spec.r):
        vals = []
        for j in range(spec.n):
            s = spec.series(i, j, order)
            v = s.valuation()
            if isinstance(v, int):
                if v < 1:
                    raise DegenerateInput(
                        f"coordinate {spec.variables[j]} on branch {i} has valuation {v}; "
                        "a parametrization must land in the maximal ideal")
                vals.append(v)
        if not vals:
            if all(spec.series(i, j, order).exact_zero for j in range(spec.n)):
                raise DegenerateInput(f"branch {i} parametrization is identically zero")
            return None
        mult.append(min(vals))
    return tuple(mult)


def _algebra_window(spec: CurveSpec, N: tuple) -> SubspaceBasis:
    gens = [v for v in spec.coordinate_vectors(N) if v]
    return closure([constant_one(spec.r)], (0,) * spec.r, N, gens, spec.r)


def _check_distinct(spec: CurveSpec, order: int) -> None:
    for i in range(spec.r):
        for k in range(i + 1, spec.r):
            if all(spec.series(i, j, order).terms() == spec.series(k, j, order).terms()
                   for j in range(spec.n)):
                raise DegenerateInput(
                    f"branches {i} and {k} agree up to order {order}")


def build_algebra(spec: CurveSpec, initial_order: int = DEFAULT_ORDER,
                  max_order: int = DEFAULT_MAX_ORDER, recheck: bool = True) -> AlgebraModel:
    """Compute ``A`` modulo a certified working modulus, and its conductor."""
    if initial_order < 2:
        raise ValueError("initial_order must be at least 2")
    r = spec.r
    if len(set(spec.param)) < r:
        raise DegenerateInput("two branches have identical parametrizations")
    order = initial_order
    while True:
        if order > max_order:
            raise NoStabilization(
                f"conductor not certified below order {max_order}; "
                "is the parametrization reduced and birational onto its image?")
        mult = _multiplicities(spec, order)
        if mult is not None:
            N = (order,) * r
            window = _algebra_window(spec, N)
            delta = _window_conductor(window)
            if all(d + m <= n for d, m, n in zip(delta, mult, N)):
                break
        log.debug("order %d insufficient, doubling", order)
        order *= 2
    _check_distinct(spec, order)
    max_val = max(mult)
    working = max(order, 2 * max(delta) + max_val + 2)
    if working != order:
        N = (working,) * r
        window = _algebra_window(spec, N)
        if _window_conductor(window) != delta:
            raise NoStabilization("conductor moved when enlarging the modulus")
    certified = True
    if recheck:
        N2 = (2 * working,) * r
        if 2 * working > max(max_order, working):
            log.debug("recheck modulus %d exceeds max order; checking anyway", 2 * working)
        window2 = _algebra_window(spec, N2)
        delta2 = _window_conductor(window2)
        cut = SubspaceBasis.from_vectors(window2.ech.rows.values(), (0,) * r, N)
        if delta2 != delta or cut != window:
            raise NoStabilization(
                f"doubled modulus changed the algebra (conductor {delta} vs {delta2})")
    smooth = r == 1 and delta == (0,)
    return AlgebraModel(spec=spec, moduli=N, basis=window, delta=delta, smooth=smooth,
                        stability_certified=certified, multiplicity=mult, name=spec.name)


def compute_conductor(model: AlgebraModel) -> tuple:
    """The conductor exponent ``δ`` with ``C_A = t^δ Ã``, re-read from the certified basis."""
    delta = _window_conductor(model.basis)
    if delta != model.delta:
        raise NoStabilization(f"stored conductor {model.delta} disagrees with basis {delta}")
    return delta


def contains(model: AlgebraModel, x: MultiSeries) -> bool:
    return model.basis.contains_vector(x.to_vector(model.moduli))


def maximal_ideal(model: AlgebraModel) -> SubspaceBasis:
    """Elements of ``A`` vanishing at the singular point on every branch."""
    r = model.r
    rows = model.basis.filtered((1,) * r)
    return SubspaceBasis.from_vectors(rows, (1,) * r, model.basis.hi)


def ring_model_from_window(window: SubspaceBasis, parent: AlgebraModel,
                           name: str = "derived") -> AlgebraModel:
    """An :class:`AlgebraModel` for a ring ``A ⊆ R ⊆ Ã`` given by its window."""
    canon = window.canonical()
    delta = canon.hi
    r = parent.r
    hi = tuple(max(a, b) for a, b in zip(parent.moduli, delta))
    basis = window.extended(hi) if window.hi != hi else window
    basis = SubspaceBasis.from_vectors(basis.ech.rows.values(), (0,) * r, hi)
    smooth = r == 1 and delta == (0,)
    return AlgebraModel(spec=None, moduli=hi, basis=basis, delta=delta, smooth=smooth,
                        stability_certified=parent.stability_certified,
                        multiplicity=(), ring_extra=tuple(canon.rows()), name=name)


def _cut(s: TruncatedSeries, order: int) -> TruncatedSeries:
    if s.order is None or s.order > order:
        return s.truncate(order)
    return s


def jacobian_generators(spec: CurveSpec, order: int) -> list:
    """Maximal minors of the Jacobian matrix, composed with the parametrization."""
    n = spec.n
    partials = [[f.derivative(j) for j in range(n)] for f in spec.equations]
    per_branch = []
    for i in range(spec.r):
        point = spec.branch_point(i, order)
        per_branch.append([[p.evaluate(point) for p in row] for row in partials])
    gens = []
    for skip in range(n):
        comps = []
        for matrix in per_branch:
            sub = [[row[j] for j in range(n) if j != skip] for row in matrix]
            comps.append(_cut(determinant(sub), order))
        gens.append(MultiSeries(tuple(comps)))
    return gens
