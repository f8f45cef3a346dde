"""Value semigroups, Δ-sets and the symmetry (Gorenstein) test.

Membership outside the box ``prod [0, δ_i]`` is decided by capping each
coordinate at ``δ_i``: with ``t^δ Ã ⊆ A`` the component of a value that is
at least ``δ_i`` can be moved freely by adding ``e_i t^k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

from .algebra import AlgebraModel
from .errors import BoxExceedsModuli
from .linalg import SubspaceBasis


@dataclass(frozen=True)
class SemigroupTable:
    r: int
    delta: tuple
    members: frozenset

    @property
    def tau(self) -> tuple:
        return tuple(d - 1 for d in self.delta)

    def box(self) -> list:
        return sorted(self.members)

    def __contains__(self, alpha) -> bool:
        return capped_membership(self, alpha)


class DeltaQuery(NamedTuple):
    alpha: tuple
    i: int | None = None


def gamma_of_subspace(space: SubspaceBasis, lo: Sequence[int], hi: Sequence[int]) -> frozenset:
    """Values of non-zerodivisors of ``space`` inside ``prod [lo_i, hi_i]``."""
    if len(lo) != space.r or len(hi) != space.r or any(a > b for a, b in zip(lo, hi)):
        raise BoxExceedsModuli(f"malformed box {lo}..{hi} for {space.r} branches")
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return frozenset(alpha for alpha in product(*ranges) if space.has_value(alpha))


def semigroup_of_curve(model: AlgebraModel) -> SemigroupTable:
    zero = (0,) * model.r
    members = gamma_of_subspace(model.basis, zero, model.delta)
    return SemigroupTable(model.r, model.delta, members)


def cap(table: SemigroupTable, alpha: Sequence[int]) -> tuple:
    return tuple(min(a, d) for a, d in zip(alpha, table.delta))


def capped_membership(table: SemigroupTable, alpha: Sequence[int]) -> bool:
    if any(a < 0 for a in alpha):
        return False
    return cap(table, alpha) in table.members


def _meets_component(table: SemigroupTable, alpha: Sequence[int], i: int) -> bool:
    if alpha[i] < 0:
        return False
    ranges = []
    for j, (a, d) in enumerate(zip(alpha, table.delta)):
        if j == i:
            ranges.append((min(a, d),))
        else:
            start = max(a + 1, 0)
            ranges.append(range(min(start, d), d + 1))
    return any(beta in table.members for beta in product(*ranges))


def delta_set(alpha: Sequence[int], i: int, window: Sequence[range]):
    """Points of ``Δ_i(alpha)`` inside a finite window (for brute-force checks)."""
    for beta in product(*window):
        if beta[i] == alpha[i] and all(beta[j] > alpha[j] for j in range(len(alpha)) if j != i):
            yield beta


def delta_set_meets(table: SemigroupTable, query: DeltaQuery | Sequence[int],
                    i: int | None = None) -> bool:
    """Whether ``Δ(alpha)`` (or ``Δ_i(alpha)``) meets the semigroup."""
    if isinstance(query, DeltaQuery):
        alpha, i = query
    else:
        alpha = query
    alpha = tuple(alpha)
    if i is not None:
        return _meets_component(table, alpha, i)
    return any(_meets_component(table, alpha, k) for k in range(table.r))


def symmetry_violations(table: SemigroupTable, margin: int = 1) -> list:
    tau = table.tau
    ranges = [range(-margin, d + margin + 1) for d in table.delta]
    bad = []
    for alpha in product(*ranges):
        lhs = capped_membership(table, alpha)
        rhs = not delta_set_meets(table, tuple(t - a for t, a in zip(tau, alpha)))
        if lhs != rhs:
            bad.append(alpha)
    return bad


def is_symmetric(table: SemigroupTable, margin: int = 1) -> bool:
    """``alpha ∈ Γ  ⇔  Δ(τ - alpha) ∩ Γ = ∅`` on the box plus a margin."""
    return not symmetry_violations(table, margin)


def kunz_symmetric(table: SemigroupTable) -> bool:
    """Classical single-branch test on ``0..τ``."""
    if table.r != 1:
        raise ValueError("the classical test applies to a single branch")
    tau = table.tau[0]
    return all(capped_membership(table, (a,)) != capped_membership(table, (tau - a,))
               for a in range(0, tau + 1))
