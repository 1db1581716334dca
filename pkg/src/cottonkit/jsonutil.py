"""Canonical JSON rendering shared by the service and the CLI.

Rationals serialize as "p/q" strings (plain "p" for integers) so exact
results never pass through floats; floats use Python's shortest round-trip
repr.  `canonical_json` is deterministic: parsing its output and re-rendering
yields identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .rational import format_rational


def scalar_to_json(value):
    """Fractions render as "p/q" strings; everything else is already JSON-safe."""
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


def jsonable(obj):
    """Recursively convert Fractions/tuples into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return scalar_to_json(obj)


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2,
                      separators=(",", ": "), ensure_ascii=False)
