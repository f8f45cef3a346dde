"""Exact rationals, truncated Laurent series and multi-branch elements.

A :class:`TruncatedSeries` is ``sum(coeffs[k] * t**(low + k))`` known modulo
``t**order``.  ``order=None`` means the series is known exactly (it is a
Laurent polynomial); an exact series without coefficients is the exact zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import NonUnitDenominator, NotInvertible, OrderTooLow, SchemaError

Rational = type(mpq())

INFINITY = math.inf


class _Unknown:
    __slots__ = ()

    def __repr__(self):
        return "UNKNOWN"

    def __reduce__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()


def rational(value) -> Rational:
    """Coerce ints, Fractions, mpq and ``"a/b"`` strings to an exact rational.

    Floats are rejected: they have no place in exact input.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"not an exact rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "." in text or "e" in text.lower():
                raise ValueError
            num, _, den = text.partition("/")
            q = mpq(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not an exact rational: {value!r}") from None
        return q
    raise SchemaError(f"not an exact rational: {value!r}")


def format_rational(q) -> str:
    """``"a/b"``, or ``"a"`` when the denominator is 1."""
    return str(rational(q))


def _eff(order):
    return INFINITY if order is None else order


@dataclass(frozen=True)
class TruncatedSeries:
    low: int
    coeffs: tuple
    order: int | None = None

    def __post_init__(self):
        coeffs = [rational(c) for c in self.coeffs]
        low = self.low
        if self.order is not None:
            coeffs = coeffs[: max(0, self.order - low)]
        start = 0
        while start < len(coeffs) and not coeffs[start]:
            start += 1
        end = len(coeffs)
        while end > start and not coeffs[end - 1]:
            end -= 1
        coeffs = coeffs[start:end]
        low += start
        if not coeffs:
            low = 0 if self.order is None else self.order
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "low", low)

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, order=None):
        return cls(0, (), order)

    @classmethod
    def monomial(cls, exponent, coeff=1, order=None):
        return cls(exponent, (coeff,), order)

    @classmethod
    def from_dict(cls, terms: dict, order=None):
        terms = {int(e): rational(c) for e, c in terms.items() if rational(c)}
        if not terms:
            return cls.zero(order)
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(e, 0) for e in range(lo, hi + 1)), order)

    # queries ----------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.order is None

    @property
    def exact_zero(self) -> bool:
        return self.order is None and not self.coeffs

    @property
    def is_zero_to_order(self) -> bool:
        return not self.coeffs

    def valuation(self):
        if self.coeffs:
            return self.low
        return INFINITY if self.order is None else UNKNOWN

    def coefficient(self, exponent: int):
        if self.order is not None and exponent >= self.order:
            raise OrderTooLow(f"coefficient of t^{exponent} unknown (order {self.order})")
        k = exponent - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return mpq(0)

    def terms(self) -> dict:
        return {self.low + k: c for k, c in enumerate(self.coeffs) if c}

    def truncate(self, order: int) -> "TruncatedSeries":
        if self.order is not None and order > self.order:
            raise OrderTooLow(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.low, self.coeffs, order)

    def __repr__(self):
        parts = [f"{format_rational(c)}*t^{e}" for e, c in self.terms().items()]
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.order is None else f" + O(t^{self.order})"
        return f"<{body}{tail}>"

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        return series_arith(self, other, "add")

    def __sub__(self, other):
        return series_arith(self, other, "sub")

    def __mul__(self, other):
        return series_arith(self, other, "mul")

    def __neg__(self):
        return TruncatedSeries(self.low, tuple(-c for c in self.coeffs), self.order)

    def scale(self, c) -> "TruncatedSeries":
        c = rational(c)
        if not c:
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries(self.low, tuple(c * a for a in self.coeffs), self.order)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``t**k``."""
        order = None if self.order is None else self.order + k
        if not self.coeffs:
            return TruncatedSeries.zero(order)
        return TruncatedSeries(self.low + k, self.coeffs, order)


def _val_bound(s: TruncatedSeries):
    # a lower bound for the true valuation
    if s.coeffs:
        return s.low
    return _eff(s.order)


def _mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    if a.exact_zero or b.exact_zero:
        return TruncatedSeries.zero()
    order = min(_eff(a.order) + _val_bound(b), _eff(b.order) + _val_bound(a))
    if not a.coeffs or not b.coeffs:
        return TruncatedSeries.zero(order)
    low = a.low + b.low
    n = len(a.coeffs) + len(b.coeffs) - 1
    if order != INFINITY:
        n = min(n, order - low)
    out = [mpq(0)] * max(n, 0)
    bc = b.coeffs
    for i, x in enumerate(a.coeffs):
        if not x or i >= n:
            continue
        for j in range(min(len(bc), n - i)):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return TruncatedSeries(low, tuple(out), None if order == INFINITY else order)


def _addsub(a, b, sign) -> TruncatedSeries:
    order = min(_eff(a.order), _eff(b.order))
    terms = dict(a.terms())
    for e, c in b.terms().items():
        terms[e] = terms.get(e, 0) + sign * c
    if order != INFINITY:
        terms = {e: c for e, c in terms.items() if e < order}
        return TruncatedSeries.from_dict(terms, order)
    return TruncatedSeries.from_dict(terms)


def _invert(a: TruncatedSeries) -> TruncatedSeries:
    if not a.coeffs:
        raise NotInvertible("series has no known nonzero term")
    v = a.low
    if a.order is None and len(a.coeffs) == 1:
        return TruncatedSeries(-v, (1 / a.coeffs[0],))
    if a.order is None:
        raise NotInvertible("inverse of a non-monomial exact series needs an order; use invert_to")
    prec = a.order - v
    return TruncatedSeries(-v, _inverse_coeffs(a.coeffs, prec), -v + prec)


def _inverse_coeffs(u: Sequence, prec: int) -> tuple:
    u0 = u[0]
    inv0 = 1 / u0
    out = []
    for k in range(prec):
        acc = mpq(1) if k == 0 else mpq(0)
        for j in range(1, min(k, len(u) - 1) + 1):
            if u[j]:
                acc -= u[j] * out[k - j]
        out.append(acc * inv0)
    return tuple(out)


def invert_to(a: TruncatedSeries, order: int) -> TruncatedSeries:
    """Inverse of ``a`` known modulo ``t**order`` (``a`` may be exact)."""
    if not a.coeffs:
        raise NotInvertible("series has no known nonzero term")
    v = a.low
    prec = order + v
    if a.order is not None and a.order - v < prec:
        raise OrderTooLow(f"need order {prec + v} of the operand, have {a.order}")
    return TruncatedSeries(-v, _inverse_coeffs(a.coeffs, max(prec, 0)), order)


def series_arith(a: TruncatedSeries, b: TruncatedSeries | None, op: str) -> TruncatedSeries:
    """Exact truncated arithmetic; ``op`` is one of add, sub, mul, invert-unit."""
    if op == "add":
        return _addsub(a, b, 1)
    if op == "sub":
        return _addsub(a, b, -1)
    if op == "mul":
        return _mul(a, b)
    if op in ("invert-unit", "invert"):
        return _invert(a)
    raise ValueError(f"unknown operation {op!r}")


def series_tdt(a: TruncatedSeries) -> TruncatedSeries:
    """Euler derivation ``t d/dt``."""
    return TruncatedSeries(a.low, tuple((a.low + k) * c for k, c in enumerate(a.coeffs)), a.order)


def expand_rational_function(p: Sequence, q: Sequence, order: int | None) -> TruncatedSeries:
    """Expand ``p(t)/q(t)`` modulo ``t**order``; exact when ``q`` is constant."""
    p = [rational(c) for c in p]
    q = [rational(c) for c in q]
    while q and not q[-1]:
        q.pop()
    if not q or not q[0]:
        raise NonUnitDenominator("denominator must not vanish at t = 0")
    if not any(p):
        return TruncatedSeries.zero()
    if len(q) == 1:
        s = TruncatedSeries(0, tuple(c / q[0] for c in p))
        return s if order is None else s.truncate(order)
    if order is None:
        raise OrderTooLow("a non-polynomial rational function needs a truncation order")
    q0inv = 1 / q[0]
    out = []
    for k in range(max(order, 0)):
        acc = p[k] if k < len(p) else mpq(0)
        for j in range(1, min(k, len(q) - 1) + 1):
            if q[j]:
                acc -= q[j] * out[k - j]
        out.append(acc * q0inv)
    return TruncatedSeries(0, tuple(out), order)


@dataclass(frozen=True)
class MultiSeries:
    """An element of the product of the branch fraction fields."""

    branches: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))

    @classmethod
    def of(cls, *branches):
        return cls(tuple(branches))

    @property
    def r(self) -> int:
        return len(self.branches)

    def __getitem__(self, i):
        return self.branches[i]

    def __add__(self, other):
        return MultiSeries(tuple(a + b for a, b in zip(self.branches, other.branches)))

    def __sub__(self, other):
        return MultiSeries(tuple(a - b for a, b in zip(self.branches, other.branches)))

    def __mul__(self, other):
        return MultiSeries(tuple(a * b for a, b in zip(self.branches, other.branches)))

    def tdt(self):
        return MultiSeries(tuple(series_tdt(b) for b in self.branches))

    def valuation(self):
        return multivaluation(self)

    def is_nonzerodivisor(self) -> bool:
        return all(isinstance(v, int) for v in multivaluation(self))

    def to_vector(self, hi: Sequence[int]) -> dict:
        """Sparse coefficient vector ``{(exponent, branch): coeff}`` below ``hi``."""
        vec = {}
        for i, (s, h) in enumerate(zip(self.branches, hi)):
            if s.order is not None and s.order < h:
                raise OrderTooLow(f"branch {i} known to order {s.order}, need {h}")
            for e, c in s.terms().items():
                if e < h:
                    vec[(e, i)] = c
        return vec

    @classmethod
    def from_vector(cls, vec: dict, r: int, order: Sequence[int] | None = None):
        per = [dict() for _ in range(r)]
        for (e, i), c in vec.items():
            per[i][e] = c
        return cls(tuple(
            TruncatedSeries.from_dict(per[i], None if order is None else order[i])
            for i in range(r)))


def multivaluation(x: MultiSeries) -> tuple:
    return tuple(s.valuation() for s in x.branches)


def poly_mul(a: Sequence, b: Sequence) -> list:
    """Product of dense coefficient lists."""
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def series_sum(items: Iterable[TruncatedSeries]) -> TruncatedSeries:
    total = TruncatedSeries.zero()
    for s in items:
        total = total + s
    return total
