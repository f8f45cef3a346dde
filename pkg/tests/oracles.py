"""Independent reference computations used by the tests.

Everything here is dense and uses ``fractions.Fraction``: no code is shared
with the package's sparse mpq engine.  A space is a pair ``(rows, T)`` with
``rows`` dicts ``{(exponent, branch): Fraction}``; it stands for
``span(rows) + t^T Ã`` where ``T`` is a per-branch tuple.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


# ------------------------------------------------------------ numerical semigroups

def numerical_semigroup(generators, limit):
    """Elements below ``limit`` of the semigroup generated by ``generators``."""
    reach = [False] * limit
    reach[0] = True
    for n in range(1, limit):
        reach[n] = any(n >= g and reach[n - g] for g in generators)
    return {n for n in range(limit) if reach[n]}


def conductor_of(generators, limit=400):
    members = numerical_semigroup(generators, limit)
    c = limit
    while c - 1 in members:
        c -= 1
    return c


def brute_delta(alpha, i, window):
    return [b for b in product(*window)
            if b[i] == alpha[i] and all(b[j] > alpha[j] for j in range(len(alpha)) if j != i)]


# ------------------------------------------------------------ dense series

def power_series(num, den, T):
    """Coefficients of ``num/den`` below ``T`` by long division."""
    num = [Fraction(c) for c in num] + [Fraction(0)] * T
    den = [Fraction(c) for c in den]
    out = []
    rest = num[:T]
    for k in range(T):
        c = rest[k] / den[0]
        out.append(c)
        for j, d in enumerate(den):
            if k + j < T:
                rest[k + j] -= c * d
    return out


def vec_mul(u, v, T):
    out = {}
    for (e1, i1), a in u.items():
        for (e2, i2), b in v.items():
            if i1 == i2 and e1 + e2 < T[i1]:
                k = (e1 + e2, i1)
                out[k] = out.get(k, 0) + a * b
    return {k: c for k, c in out.items() if c}


def rref(rows, order):
    """Row-reduce dense rows (dicts) with pivots chosen along ``order``."""
    rank = {k: n for n, k in enumerate(order)}
    basis = []  # (pivot, row)
    for row in rows:
        row = dict(row)
        for p, b in basis:
            c = row.get(p)
            if c:
                for k, v in b.items():
                    row[k] = row.get(k, 0) - c * v
                row = {k: v for k, v in row.items() if v}
        if not row:
            continue
        p = min(row, key=rank.__getitem__)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        new = []
        for q, b in basis:
            c = b.get(p)
            if c:
                b = {k: b.get(k, 0) - c * row.get(k, 0) for k in set(b) | set(row)}
                b = {k: v for k, v in b.items() if v}
            new.append((q, b))
        basis = new + [(p, row)]
    return basis


def reduce(vec, basis):
    vec = dict(vec)
    for p, b in basis:
        c = vec.get(p)
        if c:
            for k, v in b.items():
                vec[k] = vec.get(k, 0) - c * v
            vec = {k: v for k, v in vec.items() if v}
    return vec


class Dense:
    """``span(rows) + t^T Ã`` with a reduced basis."""

    def __init__(self, rows, T):
        self.T = tuple(T)
        keys = [(e, i) for i in range(len(T)) for e in range(-60, T[i])]
        self.order = sorted(keys, key=lambda k: (k[0], k[1]))
        clean = [{k: Fraction(v) for k, v in r.items() if k[0] < T[k[1]] and v} for r in rows]
        self.basis = rref(clean, self.order)

    @property
    def r(self):
        return len(self.T)

    def rows(self):
        return [b for _, b in self.basis]

    def contains(self, vec):
        vec = {k: v for k, v in vec.items() if k[0] < self.T[k[1]]}
        return not reduce(vec, self.basis)

    def lo(self):
        out = list(self.T)
        for row in self.rows():
            for e, i in row:
                out[i] = min(out[i], e)
        return tuple(out)

    def raised(self, T):
        """Same space, truncated higher (tail monomials become explicit rows)."""
        extra = [{(e, i): Fraction(1)} for i in range(self.r) for e in range(self.T[i], T[i])]
        return Dense(self.rows() + extra, T)

    def dim_below(self, T):
        return len(self.raised(T).basis)

    def __eq__(self, other):
        T = tuple(max(a, b) for a, b in zip(self.T, other.T))
        a, b = self.raised(T), other.raised(T)
        return len(a.basis) == len(b.basis) and all(b.contains(v) for v in a.rows())

    def contains_space(self, other):
        T = tuple(max(a, b) for a, b in zip(self.T, other.T))
        a, b = self.raised(T), other.raised(T)
        return all(a.contains(v) for v in b.rows())

    def has_value(self, alpha):
        """Brute force: is there a row combination with valuation exactly alpha?"""
        T = tuple(max(t, a + 1) for t, a in zip(self.T, alpha))
        space = self.raised(T)
        keys = [(e, i) for i in range(self.r) for e in range(-60, alpha[i])]
        kill = set(keys)
        # elements with valuation >= alpha: kill the coordinates below alpha
        order = keys + [k for k in space.order if k not in kill]
        filt = [b for p, b in rref(space.rows(), order) if p not in kill]
        return all(any(b.get((alpha[i], i)) for b in filt) for i in range(self.r))


def coordinates(spec, T):
    """Dense coordinate functions of a CurveSpec, each truncated below ``T``."""
    coords = []
    for j in range(spec.n):
        vec = {}
        for i in range(spec.r):
            src = spec.param[i][j]
            num = [Fraction(int(c.numerator), int(c.denominator)) for c in src.num]
            den = [Fraction(int(c.numerator), int(c.denominator)) for c in src.den]
            for e, c in enumerate(power_series(num, den, T[i])):
                if c:
                    vec[(e, i)] = c
        coords.append(vec)
    return coords


def ring_and_maximal(spec, T):
    """``A`` and ``m_A`` modulo ``t^T``: spans of monomials in the coordinates."""
    coords = coordinates(spec, T)
    one = {(0, i): Fraction(1) for i in range(spec.r)}
    layer = [one]
    monomials = []
    seen = Dense([], T)
    for _ in range(max(T) + 1):
        nxt = []
        for m in layer:
            for x in coords:
                p = vec_mul(m, x, T)
                if p and not seen.contains(p):
                    seen = Dense(seen.rows() + [p], T)
                    nxt.append(p)
        monomials += nxt
        layer = nxt
        if not layer:
            break
    maximal = Dense(monomials, T)
    return Dense([one] + monomials, T), maximal


def module_closure(ring, rows, T):
    space = Dense(rows, T)
    while True:
        new = [vec_mul(a, v, T) for a in ring.rows() for v in space.rows()]
        grown = Dense(space.rows() + new, T)
        if len(grown.basis) == len(space.basis):
            return space
        space = grown


def tdt(space):
    return Dense([{(e, i): e * c for (e, i), c in row.items()} for row in space.rows()], space.T)


def hom(I, J):
    """``{x : x I ⊆ J}`` by one dense linear system."""
    r = I.r
    loI, loJ = I.lo(), J.lo()
    P = J.T
    lo = tuple(b - a for a, b in zip(loI, loJ))
    hi = tuple(p - a for p, a in zip(P, loI))
    unknowns = [(e, i) for i in range(r) for e in range(lo[i], hi[i])]
    gens = I.rows() + [{(e, i): Fraction(1)} for i in range(r)
                       for e in range(I.T[i], P[i] - lo[i])]
    jb = J.basis
    residual_keys = {}
    columns = []
    for u in unknowns:
        col = {}
        x = {u: Fraction(1)}
        for gi, g in enumerate(gens):
            for k, c in reduce(vec_mul(x, g, P), jb).items():
                col[(gi, k)] = c
                residual_keys.setdefault((gi, k), len(residual_keys))
        columns.append(col)
    # nullspace of the matrix with these columns
    eqs = [{} for _ in residual_keys]
    for j, col in enumerate(columns):
        for key, c in col.items():
            eqs[residual_keys[key]][j] = c
    order = list(range(len(unknowns)))
    basis = rref(eqs, order)
    pivots = {p for p, _ in basis}
    free = [j for j in order if j not in pivots]
    sols = []
    for f in free:
        x = {unknowns[f]: Fraction(1)}
        for p, b in basis:
            c = b.get(f)
            if c:
                x[unknowns[p]] = -c
        sols.append(x)
    return Dense(sols, hi)


def length(big, small):
    T = tuple(max(a, b) for a, b in zip(big.T, small.T))
    return big.dim_below(T) - small.dim_below(T)


def invariants(spec, T):
    """Reference lengths: normalization, dual of m, End(M_A), ρ′, and duals."""
    A, m = ring_and_maximal(spec, T)
    normal = Dense([], (0,) * spec.r)
    M = module_closure(A, tdt(m).rows(), T)
    end_M = hom(M, M)
    end_Mdual = hom(hom(M, A), hom(M, A))
    return {
        "normalization": length(normal, A),
        "dual_maximal": length(hom(m, A), A),
        "end_MA": length(end_M, A),
        "rho_prime": length(end_Mdual, A),
        "exact": tdt(m) == M,
    }
