"""Sparse exact linear algebra on truncated multi-branch coefficient vectors.

Vectors are dicts ``{(exponent, branch): coeff}``.  The default monomial
order is exponent ascending, then branch ascending, and the pivot of a row is
its least key.

A :class:`SubspaceBasis` with window ``lo``/``hi`` stands for the k-space
``span(rows) + t^hi * Ã``; every key of a row satisfies ``e < hi[branch]``.
Fractional ideals always contain such a tail, so this finite datum
describes them exactly.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from gmpy2 import mpq


def axpy(v: dict, c, w: dict) -> None:
    """``v += c * w`` in place, dropping cancelled entries."""
    for k, x in w.items():
        y = v.get(k)
        if y is None:
            v[k] = c * x
        else:
            y = y + c * x
            if y:
                v[k] = y
            else:
                del v[k]


def truncate(v: dict, hi: Sequence[int]) -> dict:
    return {k: c for k, c in v.items() if k[0] < hi[k[1]]}


def by_branch(v: dict, r: int) -> list:
    out = [[] for _ in range(r)]
    for (e, i), c in v.items():
        out[i].append((e, c))
    for terms in out:
        terms.sort()
    return out


def mul_truncated(u: dict, v: dict, hi: Sequence[int], r: int) -> dict:
    """Product of two elements, dropping exponents ``>= hi``."""
    vb = by_branch(v, r)
    out: dict = {}
    for (e1, i), c1 in u.items():
        lim = hi[i] - e1
        for e2, c2 in vb[i]:
            if e2 >= lim:
                break
            k = (e1 + e2, i)
            y = out.get(k)
            if y is None:
                out[k] = c1 * c2
            else:
                y += c1 * c2
                if y:
                    out[k] = y
                else:
                    del out[k]
    return out


class Echelon:
    """Fully reduced row echelon basis.

    ``key`` orders the coordinates; by default the natural tuple order.
    Each pivot occurs in exactly one row, with coefficient 1.
    """

    __slots__ = ("rows", "key")

    def __init__(self, key: Callable | None = None):
        self.rows: dict = {}
        self.key = key

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "Echelon":
        other = Echelon(self.key)
        other.rows = {p: dict(row) for p, row in self.rows.items()}
        return other

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        rows = self.rows
        for p in [k for k in v if k in rows]:
            c = v.get(p)
            if c:
                axpy(v, -c, rows[p])
        return v

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        w = self.reduce(v)
        if not w:
            return False
        p = min(w, key=self.key) if self.key else min(w)
        c = w[p]
        if c != 1:
            inv = 1 / c
            w = {k: x * inv for k, x in w.items()}
        for row in self.rows.values():
            x = row.get(p)
            if x:
                axpy(row, -x, w)
        self.rows[p] = w
        return True

    def extend(self, vectors: Iterable[dict]) -> "Echelon":
        for v in vectors:
            self.add(v)
        return self

    def pivots(self) -> list:
        return sorted(self.rows, key=self.key) if self.key else sorted(self.rows)

    def frozen(self) -> frozenset:
        return frozenset((p, tuple(sorted(row.items()))) for p, row in self.rows.items())


def nullspace(columns: Sequence[dict]) -> list:
    """Kernel of the linear map whose ``j``-th column is ``columns[j]``.

    Returns kernel vectors as dicts ``{j: coeff}``.
    """
    ech = Echelon()
    for j, col in enumerate(columns):
        v = {(0, k): c for k, c in col.items()}
        v[(1, j)] = mpq(1)
        ech.add(v)
    out = []
    for p, row in ech.rows.items():
        if p[0] == 1:
            out.append({k[1]: c for k, c in row.items()})
    return out


class SubspaceBasis:
    """A k-subspace ``span(rows) + t^hi * Ã`` of ``t^lo * Ã``.

    Immutable by convention; all operations return new instances.
    """

    __slots__ = ("r", "lo", "hi", "ech", "_canonical", "_frozen")

    def __init__(self, lo: Sequence[int], hi: Sequence[int], ech: Echelon | None = None):
        self.r = len(hi)
        self.lo = tuple(lo)
        self.hi = tuple(hi)
        self.ech = ech if ech is not None else Echelon()
        self._canonical = False
        self._frozen = None

    @classmethod
    def from_vectors(cls, vectors: Iterable[dict], lo, hi) -> "SubspaceBasis":
        ech = Echelon()
        for v in vectors:
            ech.add(truncate(v, hi))
        return cls(lo, hi, ech)

    @classmethod
    def tail(cls, hi) -> "SubspaceBasis":
        """``t^hi * Ã``."""
        return cls(hi, hi)

    # --- basic queries ---------------------------------------------------
    @property
    def shift(self) -> tuple:
        return tuple(-x for x in self.lo)

    @property
    def rank(self) -> int:
        return len(self.ech)

    def rows(self) -> list:
        return [self.ech.rows[p] for p in self.ech.pivots()]

    def pivots(self) -> list:
        return self.ech.pivots()

    def valuations(self) -> tuple:
        """Componentwise least valuation of the space (``hi`` if no row reaches lower)."""
        mu = list(self.hi)
        for row in self.ech.rows.values():
            for e, i in row:
                if e < mu[i]:
                    mu[i] = e
        return tuple(mu)

    def contains_vector(self, v: dict) -> bool:
        return self.ech.contains(truncate(v, self.hi))

    def reduce(self, v: dict) -> dict:
        return self.ech.reduce(truncate(v, self.hi))

    def dim_below(self, H: Sequence[int]) -> int:
        """``dim (S + t^H Ã) / t^H Ã`` for ``H >= hi``."""
        return self.rank + sum(h - x for h, x in zip(H, self.hi))

    # --- window manipulation -----------------------------------------------
    def extended(self, hi: Sequence[int]) -> "SubspaceBasis":
        """Same space, explicit up to ``hi >= self.hi``."""
        hi = tuple(hi)
        if hi == self.hi:
            return self
        ech = self.ech.copy()
        for i in range(self.r):
            for e in range(self.hi[i], hi[i]):
                ech.add({(e, i): mpq(1)})
        return SubspaceBasis(tuple(min(a, b) for a, b in zip(self.lo, hi)), hi, ech)

    def own_tail(self) -> tuple:
        """Least ``c`` with ``t^c Ã`` inside the space."""
        c = list(self.hi)
        for i in range(self.r):
            while self.ech.contains({(c[i] - 1, i): mpq(1)}):
                c[i] -= 1
        return tuple(c)

    def canonical(self) -> "SubspaceBasis":
        """Tight window: ``lo`` = valuations, ``hi`` = own tail."""
        if self._canonical:
            return self
        c = self.own_tail()
        if c != self.hi:
            ech = Echelon()
            for row in self.ech.rows.values():
                ech.add(truncate(row, c))
        else:
            ech = self.ech
        out = SubspaceBasis(self.lo, c, ech)
        out.lo = out.valuations()
        out._canonical = True
        return out

    def frozen(self):
        if self._frozen is None:
            s = self.canonical()
            self._frozen = (s.lo, s.hi, s.ech.frozen())
        return self._frozen

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.frozen() == other.frozen()

    def __hash__(self):
        return hash(self.frozen())

    def __repr__(self):
        return f"SubspaceBasis(lo={self.lo}, hi={self.hi}, rank={self.rank})"

    # --- lattice operations ------------------------------------------------
    def contains_space(self, other: "SubspaceBasis") -> bool:
        """``other ⊆ self``."""
        for i in range(self.r):
            for e in range(other.hi[i], self.hi[i]):
                if not self.ech.contains({(e, i): mpq(1)}):
                    return False
        return all(self.contains_vector(row) for row in other.ech.rows.values())

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        lo = tuple(min(a, b) for a, b in zip(self.lo, other.lo))
        ech = Echelon()
        for row in list(self.ech.rows.values()) + list(other.ech.rows.values()):
            ech.add(truncate(row, hi))
        return SubspaceBasis(lo, hi, ech)

    def intersection(self, other: "SubspaceBasis") -> "SubspaceBasis":
        H = tuple(max(a, b) for a, b in zip(self.hi, other.hi))
        a = self.extended(H)
        b = other.extended(H)
        # kernel of (x, y) -> x - y on a ⊕ b
        cols = [row for row in a.rows()] + [{k: -c for k, c in row.items()} for row in b.rows()]
        kernel = nullspace(cols)
        arows = a.rows()
        vecs = []
        for kv in kernel:
            v: dict = {}
            for j, c in kv.items():
                if j < len(arows):
                    axpy(v, c, arows[j])
            vecs.append(v)
        lo = tuple(max(x, y) for x, y in zip(self.lo, other.lo))
        return SubspaceBasis.from_vectors(vecs, lo, H)

    def filtered(self, alpha: Sequence[int]) -> list:
        """Rows spanning ``{x in span(rows) : ν_i(x) >= alpha_i}`` (window part)."""
        def key(k):
            return (k[0] >= alpha[k[1]], k)
        ech = Echelon(key)
        for row in self.ech.rows.values():
            ech.add(row)
        return [row for p, row in ech.rows.items() if p[0] >= alpha[p[1]]]

    def has_value(self, alpha: Sequence[int]) -> bool:
        """Whether ``alpha`` is the multivaluation of a non-zerodivisor of the space."""
        r = self.r
        if any(a < l for a, l in zip(alpha, self.valuations())):
            return False
        if all(a >= h for a, h in zip(alpha, self.hi)):
            return True
        if r == 1:
            return (alpha[0], 0) in self.ech.rows
        rows = self.filtered(alpha)
        for i in range(r):
            if alpha[i] >= self.hi[i]:
                continue
            k = (alpha[i], i)
            if not any(k in row for row in rows):
                return False
        return True


def monomial(e: int, i: int) -> dict:
    return {(e, i): mpq(1)}


def constant_one(r: int) -> dict:
    return {(0, i): mpq(1) for i in range(r)}
