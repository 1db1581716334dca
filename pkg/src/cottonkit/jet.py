"""Order-truncated Taylor expansions (jets) of scalars at a point.

A Jet of order m in n variables stores coefficients c_alpha for multi-indices
|alpha| <= m, meaning sum c_alpha h^alpha; c_alpha equals the alpha-partial
derivative at the basepoint divided by alpha!.  Two scalar modes: "exact"
(Fraction coefficients, zero tolerance) and "float" (binary doubles).

The truncation order is part of the type: binary operations require matching
orders (truncate() deliberately, never silently), and taking a derivative of
an order-0 jet raises InsufficientJetOrderError instead of returning garbage.
The default order is 4, enough metric derivatives for the full pipeline:
connection coefficients consume 1 order, Ricci 2, Cotton 3, the covariant
derivative of Cotton 4.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .errors import (InsufficientJetOrderError, JetDivisionError,
                     JetMismatchError, ArityMismatchError)
from .poly import PolyExpr

DEFAULT_ORDER = 4

MultiIndex = tuple[int, ...]


def _zero(mode: str):
    return Fraction(0) if mode == "exact" else 0.0


class Jet:
    __slots__ = ("num_vars", "order", "mode", "coeffs")

    def __init__(self, num_vars: int, order: int, mode: str,
                 coeffs: Mapping[MultiIndex, object] | None = None):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown scalar mode {mode!r}")
        if order < 0:
            raise ValueError("jet order must be nonnegative")
        self.num_vars = num_vars
        self.order = order
        self.mode = mode
        clean: dict[MultiIndex, object] = {}
        if coeffs:
            for mono, c in coeffs.items():
                if len(mono) != num_vars:
                    raise ArityMismatchError(
                        f"multi-index {mono} has {len(mono)} entries for {num_vars} variables")
                if sum(mono) > order:
                    continue
                c = Fraction(c) if mode == "exact" else float(c)
                if c != 0:
                    clean[tuple(mono)] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, value, num_vars: int, order: int = DEFAULT_ORDER,
                 mode: str = "exact") -> "Jet":
        return cls(num_vars, order, mode, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, base_value, index: int, num_vars: int,
                 order: int = DEFAULT_ORDER, mode: str = "exact") -> "Jet":
        """Jet of the coordinate function x_index at the point: value + h."""
        coeffs = {(0,) * num_vars: base_value}
        if order >= 1:
            unit = tuple(1 if i == index else 0 for i in range(num_vars))
            coeffs[unit] = 1
        return cls(num_vars, order, mode, coeffs)

    # -- bookkeeping ----------------------------------------------------------

    def _check(self, other: "Jet") -> None:
        if not isinstance(other, Jet):
            raise TypeError(f"expected Jet, got {type(other).__name__}")
        if self.num_vars != other.num_vars:
            raise JetMismatchError(
                f"variable count mismatch: {self.num_vars} vs {other.num_vars}")
        if self.order != other.order:
            raise JetMismatchError(
                f"order mismatch: {self.order} vs {other.order} (truncate first)")
        if self.mode != other.mode:
            raise JetMismatchError(f"scalar mode mismatch: {self.mode} vs {other.mode}")

    def coefficient(self, mono: MultiIndex):
        return self.coeffs.get(tuple(mono), _zero(self.mode))

    def value(self):
        """Constant term: the scalar's value at the basepoint."""
        return self.coefficient((0,) * self.num_vars)

    def derivative_value(self, mono: MultiIndex):
        """The alpha-partial derivative at the basepoint (coefficient * alpha!)."""
        mono = tuple(mono)
        if sum(mono) > self.order:
            raise InsufficientJetOrderError(
                f"order-{self.order} jet does not carry derivative {mono}")
        scale = 1
        for e in mono:
            scale *= factorial(e)
        return self.coefficient(mono) * scale

    def truncated(self, order: int) -> "Jet":
        if order > self.order:
            raise InsufficientJetOrderError(
                f"cannot extend an order-{self.order} jet to order {order}")
        if order == self.order:
            return self
        return Jet(self.num_vars, order, self.mode, self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs(self):
        return max((abs(c) for c in self.coeffs.values()), default=_zero(self.mode))

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        coeffs = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            coeffs[mono] = coeffs.get(mono, _zero(self.mode)) + c
        return Jet(self.num_vars, self.order, self.mode, coeffs)

    def __sub__(self, other: "Jet") -> "Jet":
        self._check(other)
        coeffs = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            coeffs[mono] = coeffs.get(mono, _zero(self.mode)) - c
        return Jet(self.num_vars, self.order, self.mode, coeffs)

    def __neg__(self) -> "Jet":
        return Jet(self.num_vars, self.order, self.mode,
                   {m: -c for m, c in self.coeffs.items()})

    def scaled(self, scalar) -> "Jet":
        scalar = Fraction(scalar) if self.mode == "exact" else float(scalar)
        return Jet(self.num_vars, self.order, self.mode,
                   {m: c * scalar for m, c in self.coeffs.items()})

    def __mul__(self, other: "Jet") -> "Jet":
        self._check(other)
        order = self.order
        coeffs: dict[MultiIndex, object] = {}
        for ma, ca in self.coeffs.items():
            da = sum(ma)
            for mb, cb in other.coeffs.items():
                if da + sum(mb) > order:
                    continue
                mono = tuple(a + b for a, b in zip(ma, mb))
                prod = ca * cb
                if mono in coeffs:
                    coeffs[mono] += prod
                else:
                    coeffs[mono] = prod
        return Jet(self.num_vars, order, self.mode, coeffs)

    def inverse(self) -> "Jet":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.value()
        if c0 == 0:
            raise JetDivisionError("division by a jet with zero constant term")
        # 1/(c0 (1 + e)) = (1/c0) sum (-e)^k with e nilpotent mod truncation
        one = Jet.constant(1, self.num_vars, self.order, self.mode)
        scale = 1 / Fraction(c0) if self.mode == "exact" else 1.0 / c0
        e = self.scaled(scale) - one
        result = one
        power = one
        for k in range(self.order):
            power = power * e
            if power.is_zero():
                break
            result = result - power if k % 2 == 0 else result + power
        return result.scaled(scale)

    def __truediv__(self, other: "Jet") -> "Jet":
        self._check(other)
        return self * other.inverse()

    def derivative(self, index: int) -> "Jet":
        """Partial derivative with respect to variable `index`; consumes one order."""
        if self.order == 0:
            raise InsufficientJetOrderError(
                "cannot differentiate an order-0 jet")
        coeffs: dict[MultiIndex, object] = {}
        for mono, c in self.coeffs.items():
            e = mono[index]
            if e == 0:
                continue
            new = list(mono)
            new[index] = e - 1
            coeffs[tuple(new)] = c * e
        return Jet(self.num_vars, self.order - 1, self.mode, coeffs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Jet)
                and self.num_vars == other.num_vars
                and self.order == other.order
                and self.mode == other.mode
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.num_vars, self.order, self.mode,
                     frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        parts = ", ".join(f"{m}: {c}" for m, c in sorted(self.coeffs.items()))
        return f"Jet(order={self.order}, mode={self.mode}, {{{parts}}})"


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Dispatch form of the four ring operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def jet_eval(p: PolyExpr, point: Sequence, order: int,
             mode: str = "exact") -> Jet:
    """Jet of a polynomial at a point: expand p(point + h) truncated at `order`.

    Exact mode keeps every coefficient a Fraction, so the alpha-coefficient is
    exactly the alpha-partial at the point divided by alpha!.
    """
    nvars = len(p.variables)
    if len(point) != nvars:
        raise ArityMismatchError(
            f"point has {len(point)} values for {nvars} variables")
    if order < 0:
        raise ValueError("order must be nonnegative")
    if mode == "exact":
        values = [Fraction(v) for v in point]
    else:
        values = [float(v) for v in point]

    # cache (variable, exponent) -> jet of (x_i + h_i)^e
    power_cache: dict[tuple[int, int], Jet] = {}

    def var_power(i: int, e: int) -> Jet:
        key = (i, e)
        if key not in power_cache:
            base = Jet.variable(values[i], i, nvars, order, mode)
            power = Jet.constant(1, nvars, order, mode)
            for _ in range(e):
                power = power * base
            power_cache[key] = power
        return power_cache[key]

    total = Jet.constant(0, nvars, order, mode)
    for mono, coeff in p.terms.items():
        term = Jet.constant(coeff, nvars, order, mode)
        for i, e in enumerate(mono):
            if e:
                term = term * var_power(i, e)
        total = total + term
    return total
