"""Multivariate polynomials over the rationals, as ``{exponent tuple: coeff}``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import SchemaError
from .series import TruncatedSeries, rational


@dataclass(frozen=True)
class Polynomial:
    nvars: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != self.nvars or any(a < 0 for a in exp):
                raise ValueError(f"bad exponent {exp} for {self.nvars} variables")
            c = rational(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        """Parse ``"x^4 - y*(x+y)^4"`` style input (``^`` or ``**`` for powers)."""
        import sympy
        from sympy.parsing.sympy_parser import (
            convert_xor, parse_expr, standard_transformations)

        symbols = {v: sympy.Symbol(v) for v in variables}
        transformations = standard_transformations + (convert_xor,)
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=transformations,
                              evaluate=True)
            poly = sympy.Poly(sympy.expand(expr), *[symbols[v] for v in variables])
        except Exception as exc:  # sympy raises a zoo of exception types
            raise SchemaError(f"cannot parse polynomial {text!r}: {exc}") from None
        terms = {}
        for exp, c in poly.terms():
            if not c.is_Rational:
                raise SchemaError(f"non-rational coefficient {c} in {text!r}")
            terms[exp] = mpq(int(c.p), int(c.q))
        return cls(len(variables), terms)

    def derivative(self, j: int) -> "Polynomial":
        out = {}
        for exp, c in self.terms.items():
            if exp[j]:
                e = list(exp)
                e[j] -= 1
                out[tuple(e)] = c * exp[j]
        return Polynomial(self.nvars, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, values: Sequence[TruncatedSeries]) -> TruncatedSeries:
        """Substitute series for the variables (powers are cached)."""
        powers = [[TruncatedSeries.monomial(0)] for _ in range(self.nvars)]

        def power(j, k):
            pw = powers[j]
            while len(pw) <= k:
                pw.append(pw[-1] * values[j])
            return pw[k]

        total = TruncatedSeries.zero()
        for exp, c in sorted(self.terms.items()):
            term = TruncatedSeries.monomial(0, c)
            for j, k in enumerate(exp):
                if k:
                    term = term * power(j, k)
            total = total + term
        return total

    def format(self, variables: Sequence[str]) -> str:
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(variables, exp) if k)
            coeff = str(c)
            if not mono:
                parts.append(coeff)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def determinant(matrix: list) -> TruncatedSeries:
    """Laplace expansion; entries are truncated series."""
    n = len(matrix)
    if n == 0:
        return TruncatedSeries.monomial(0)
    if n == 1:
        return matrix[0][0]
    total = TruncatedSeries.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        total = total - term if j % 2 else total + term
    return total
