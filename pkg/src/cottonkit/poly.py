"""Multivariate polynomials with exact rational coefficients.

A PolyExpr is canonical: zero coefficients are never stored, so two equal
polynomials have identical term maps.  Variables are an ordered tuple of
coordinate names fixed at construction; arithmetic requires matching tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatchError

Monomial = tuple[int, ...]


class PolyExpr:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Mapping[Monomial, Fraction] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        clean: dict[Monomial, Fraction] = {}
        if terms:
            nvars = len(self.variables)
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ArityMismatchError(
                        f"monomial {mono} has {len(mono)} exponents for {nvars} variables")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in monomial {mono}")
                coeff = Fraction(coeff)
                if coeff != 0:
                    clean[tuple(mono)] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "PolyExpr":
        value = Fraction(value)
        if value == 0:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "PolyExpr":
        variables = tuple(variables)
        idx = variables.index(name)
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {mono: Fraction(1)})

    def with_variables(self, variables: Sequence[str]) -> "PolyExpr":
        """Re-express over a superset of variables, matching by name."""
        variables = tuple(variables)
        positions = []
        for name in self.variables:
            if name not in variables:
                raise ArityMismatchError(f"variable {name!r} missing from {variables}")
            positions.append(variables.index(name))
        terms: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            new = [0] * len(variables)
            for pos, e in zip(positions, mono):
                new[pos] = e
            terms[tuple(new)] = coeff
        return PolyExpr(variables, terms)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "PolyExpr") -> None:
        if self.variables != other.variables:
            raise ArityMismatchError(
                f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other: "PolyExpr") -> "PolyExpr":
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return PolyExpr(self.variables, terms)

    def __sub__(self, other: "PolyExpr") -> "PolyExpr":
        self._check(other)
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) - coeff
        return PolyExpr(self.variables, terms)

    def __neg__(self) -> "PolyExpr":
        return PolyExpr(self.variables, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "PolyExpr":
        if isinstance(other, (int, Fraction)):
            other = PolyExpr.constant(self.variables, other)
        self._check(other)
        terms: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(a + b for a, b in zip(ma, mb))
                terms[mono] = terms.get(mono, Fraction(0)) + ca * cb
        return PolyExpr(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PolyExpr":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = PolyExpr.constant(self.variables, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale_inverse(self, divisor: Fraction) -> "PolyExpr":
        """Divide every coefficient by a nonzero rational."""
        if divisor == 0:
            raise ZeroDivisionError("division by zero constant")
        return PolyExpr(self.variables, {m: c / divisor for m, c in self.terms.items()})

    def derivative(self, name: str) -> "PolyExpr":
        idx = self.variables.index(name)
        terms: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono[idx]
            if e == 0:
                continue
            new = list(mono)
            new[idx] = e - 1
            terms[tuple(new)] = coeff * e
        return PolyExpr(self.variables, terms)

    # -- evaluation and inspection ------------------------------------------

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != len(self.variables):
            raise ArityMismatchError(
                f"point has {len(point)} values for {len(self.variables)} variables")
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            value = coeff
            for p, e in zip(point, mono):
                if e:
                    value *= Fraction(p) ** e
            total += value
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in mono) for mono in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyExpr)
                and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- printing ------------------------------------------------------------

    def _format_monomial(self, mono: Monomial, coeff: Fraction) -> str:
        factors = []
        if abs(coeff) != 1 or all(e == 0 for e in mono):
            c = abs(coeff)
            factors.append(str(c.numerator) if c.denominator == 1
                           else f"{c.numerator}/{c.denominator}")
        for name, e in zip(self.variables, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return "*".join(factors)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # descending by total degree, then by exponent tuple: deterministic
        ordered = sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), kv[0]))
        pieces = []
        for i, (mono, coeff) in enumerate(ordered):
            sign = "-" if coeff < 0 else "+"
            body = self._format_monomial(mono, coeff)
            if i == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"PolyExpr({self.variables!r}, {self})"


def poly_matrix_str(rows: Iterable[Iterable[PolyExpr]]) -> str:
    return "\n".join("[" + ", ".join(str(p) for p in row) + "]" for row in rows)
