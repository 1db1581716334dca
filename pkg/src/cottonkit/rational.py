"""Exact rational scalars and seeded rational sampling.

`Rational` is the stdlib `fractions.Fraction`: always in lowest terms,
denominator positive, arithmetic exact.  This module adds the parsing,
formatting, and random-draw helpers the rest of the toolkit needs.
"""

from __future__ import annotations

import random
from fractions import Fraction

Rational = Fraction

# Identity checks on polynomial quantities are done by exact evaluation at
# random rational points; a nonzero value at any point disproves the claimed
# identity.  Bounds below control the sample space.
IDENTITY_SAMPLE_POINTS = 20
IDENTITY_BOUND = 1000          # |numerator|, denominator <= 1000
CHART_SAMPLE_NUMERATOR = 100   # chart sampling: |p| <= 100, 1 <= q <= 10
CHART_SAMPLE_DENOMINATOR = 10


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", "p", or a decimal string into an exact Fraction."""
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    """Render as "p" or "p/q" (lowest terms, q > 1 only when needed)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def random_rational(rng: random.Random,
                    max_numerator: int = IDENTITY_BOUND,
                    max_denominator: int = IDENTITY_BOUND) -> Fraction:
    """Uniform draw of p/q with |p| <= max_numerator, 1 <= q <= max_denominator."""
    p = rng.randint(-max_numerator, max_numerator)
    q = rng.randint(1, max_denominator)
    return Fraction(p, q)


def random_chart_point(rng: random.Random, dim: int) -> tuple[Fraction, ...]:
    """One chart point with coordinates drawn per the chart sampling bounds."""
    return tuple(
        random_rational(rng, CHART_SAMPLE_NUMERATOR, CHART_SAMPLE_DENOMINATOR)
        for _ in range(dim)
    )
