"""Pseudo-Riemannian metrics in a single coordinate chart.

A MetricChart holds the dimension, coordinate names, and the upper triangle
of the symmetric component matrix.  Components are either PolyExpr (exact
rational evaluation) or callables `(point, order) -> Jet` for metrics the
polynomial grammar cannot express.  Nondegeneracy is a per-point property,
checked where the inverse is actually taken, because polynomial metrics can
degenerate on thin sets while being fine at sample points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import yaml

from . import linalg
from .errors import (ArityMismatchError, DegenerateMetricError,
                     InsufficientJetOrderError, JetDivisionError,
                     JetMismatchError, SpecFileError)
from .exprparse import parse_expr
from .jet import Jet, jet_eval
from .poly import PolyExpr

Component = PolyExpr | Callable[[Sequence, int], Jet]

FLOAT_ZERO_PIVOT = 1e-12


@dataclass(frozen=True)
class Signature:
    positives: int
    negatives: int
    zeros: int

    @property
    def index(self) -> int:
        return self.negatives


class MetricChart:
    def __init__(self, coords: Sequence[str],
                 components: Mapping[tuple, Component],
                 mode: str = "exact"):
        if mode not in ("exact", "float"):
            raise SpecFileError(f"unknown mode {mode!r}")
        self.coords = tuple(coords)
        self.dim = len(self.coords)
        if self.dim < 2:
            raise SpecFileError("chart dimension must be at least 2")
        self.mode = mode
        self._cache: dict = {}   # (kind, point, order) -> computed jets; charts are immutable
        self._components: dict[tuple[int, int], Component] = {}
        for key, comp in components.items():
            i, j = (self._coord_index(k) if isinstance(k, str) else int(k)
                    for k in key)
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise SpecFileError(f"component index {key} out of range")
            i, j = min(i, j), max(i, j)
            existing = self._components.get((i, j))
            if existing is not None and existing != comp:
                raise SpecFileError(
                    f"conflicting entries for symmetric component pair "
                    f"({self.coords[i]},{self.coords[j]})")
            self._components[(i, j)] = comp

    def _coord_index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise SpecFileError(f"unknown coordinate {name!r}") from None

    def component(self, i: int, j: int) -> Component | None:
        return self._components.get((min(i, j), max(i, j)))

    def with_mode(self, mode: str) -> "MetricChart":
        return MetricChart(self.coords, dict(self._components), mode)

    def check_point(self, point: Sequence) -> tuple:
        if len(point) != self.dim:
            raise ArityMismatchError(
                f"point has {len(point)} values for dimension {self.dim}")
        if self.mode == "exact":
            return tuple(Fraction(v) for v in point)
        return tuple(float(v) for v in point)

    def __repr__(self) -> str:
        return f"MetricChart(coords={self.coords}, mode={self.mode!r})"


def metric_jets_at(chart: MetricChart, point: Sequence, order: int) -> list[list[Jet]]:
    """Symmetric matrix of order-`order` jets of the components at the point."""
    point = chart.check_point(point)
    key = ("metric", point, order)
    cached = chart._cache.get(key)
    if cached is not None:
        return cached
    n = chart.dim
    zero = Jet.constant(0, n, order, chart.mode)
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            comp = chart.component(i, j)
            if comp is None:
                continue
            if isinstance(comp, PolyExpr):
                jet = jet_eval(comp, point, order, chart.mode)
            else:
                jet = comp(point, order)
                if not isinstance(jet, Jet):
                    raise JetMismatchError(
                        f"component callable for ({i},{j}) returned {type(jet).__name__}")
                if jet.mode != chart.mode:
                    raise JetMismatchError(
                        f"component jet mode {jet.mode!r} does not match chart mode "
                        f"{chart.mode!r}")
                if jet.num_vars != n:
                    raise JetMismatchError(
                        f"component jet has {jet.num_vars} variables, chart has {n}")
                if jet.order < order:
                    raise InsufficientJetOrderError(
                        f"component ({chart.coords[i]},{chart.coords[j]}) supplied an "
                        f"order-{jet.order} jet where order {order} is needed")
                jet = jet.truncated(order)
            rows[i][j] = jet
            rows[j][i] = jet
    chart._cache[key] = rows
    return rows


def _jet_det(matrix: list[list[Jet]]) -> Jet:
    """Determinant by cofactor expansion inside the jet ring."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        entry = matrix[0][j]
        minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = entry * _jet_det(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def metric_det_jet_at(chart: MetricChart, point: Sequence, order: int) -> Jet:
    return _jet_det(metric_jets_at(chart, point, order))


def inverse_metric_jet_at(chart: MetricChart, point: Sequence,
                          order: int) -> list[list[Jet]]:
    """Inverse metric as jets, via adjugate over determinant.

    Stays inside the jet ring; fails with DegenerateMetricError exactly when
    the determinant's constant term vanishes at the point.
    """
    point = chart.check_point(point)
    key = ("inverse", point, order)
    cached = chart._cache.get(key)
    if cached is None:
        g = metric_jets_at(chart, point, order)
        cached = inverse_from_jets(g, point)
        chart._cache[key] = cached
    return cached


def inverse_from_jets(g: list[list[Jet]], point: Sequence) -> list[list[Jet]]:
    n = len(g)
    determinant = _jet_det(g)
    try:
        det_inv = determinant.inverse()
    except JetDivisionError:
        raise DegenerateMetricError(point) from None
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            minor = [[g[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = _jet_det(minor)
            if (i + j) % 2 == 1:
                cof = -cof
            entry = cof * det_inv   # adjugate of a symmetric matrix is symmetric
            inv[i][j] = entry
            inv[j][i] = entry
    return inv


def metric_values_at(chart: MetricChart, point: Sequence) -> list[list]:
    jets = metric_jets_at(chart, point, 0)
    return [[jet.value() for jet in row] for row in jets]


def _float_signature(values: list[list[float]]) -> tuple[int, int, int]:
    """Symmetric Gaussian reduction over floats with a scaled zero threshold."""
    n = len(values)
    a = [[float(x) for x in row] for row in values]
    scale = max(1.0, max(abs(x) for row in a for x in row))
    tol = FLOAT_ZERO_PIVOT * scale
    pos = neg = zero = 0
    for k in range(n):
        if abs(a[k][k]) <= tol:
            swap = max(range(k, n), key=lambda i: abs(a[i][i]))
            if abs(a[swap][swap]) > tol:
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = max(range(k + 1, n), key=lambda c: abs(a[k][c]), default=None)
                if j is None or abs(a[k][j]) <= tol:
                    zero += 1
                    continue
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        pivot = a[k][k]
        if pivot > tol:
            pos += 1
        elif pivot < -tol:
            neg += 1
        else:
            zero += 1
            continue
        for r in range(k + 1, n):
            factor = a[r][k] / pivot
            if factor == 0.0:
                continue
            for c in range(n):
                a[r][c] -= factor * a[k][c]
            for rr in range(n):
                a[rr][r] -= factor * a[rr][k]
    return pos, neg, zero


def signature_at(chart: MetricChart, point: Sequence) -> Signature:
    """Sylvester signature at the point via symmetric Gaussian reduction."""
    values = metric_values_at(chart, point)
    if chart.mode == "exact":
        pos, neg, zero = linalg.signature(values)
    else:
        pos, neg, zero = _float_signature(values)
    if zero:
        raise DegenerateMetricError(point)
    return Signature(pos, neg, zero)


# -- metric spec files ---------------------------------------------------------
#
# One YAML document per chart:
#
#   dim: 3
#   coords: [t, s, x]
#   mode: exact            # optional, default exact
#   components:
#     t,t: x^3 + t*x
#     t,s: 1/2
#     x,x: 1
#
# Unlisted component pairs default to 0.  Expression strings use the grammar
# in cottonkit.exprparse.

def load_metric_spec(text: str) -> MetricChart:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecFileError(f"not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecFileError("metric spec must be a mapping")
    try:
        dim = int(doc["dim"])
        coords = [str(c) for c in doc["coords"]]
    except KeyError as exc:
        raise SpecFileError(f"missing required field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"bad field value: {exc}") from None
    if dim != len(coords):
        raise SpecFileError(
            f"dim is {dim} but coords lists {len(coords)} names")
    if len(set(coords)) != dim:
        raise SpecFileError("coordinate names must be distinct")
    mode = str(doc.get("mode", "exact"))
    if mode not in ("exact", "float"):
        raise SpecFileError(f"mode must be 'exact' or 'float', got {mode!r}")
    raw = doc.get("components", {})
    if not isinstance(raw, dict):
        raise SpecFileError("components must be a mapping of 'i,j' to expression")
    components: dict[tuple[str, str], PolyExpr] = {}
    for key, source in raw.items():
        names = [part.strip() for part in str(key).split(",")]
        if len(names) != 2:
            raise SpecFileError(f"component key {key!r} must name a coordinate pair")
        for name in names:
            if name not in coords:
                raise SpecFileError(
                    f"component key {key!r} uses unknown coordinate {name!r}")
        expr = parse_expr(str(source), coords)
        components[(names[0], names[1])] = expr
    return MetricChart(coords, components, mode)


def dump_metric_spec(chart: MetricChart) -> str:
    components = {}
    for (i, j), comp in sorted(chart._components.items()):
        if not isinstance(comp, PolyExpr):
            raise SpecFileError("callable components cannot be serialized")
        components[f"{chart.coords[i]},{chart.coords[j]}"] = str(comp)
    doc = {
        "dim": chart.dim,
        "coords": list(chart.coords),
        "mode": chart.mode,
        "components": components,
    }
    return yaml.safe_dump(doc, sort_keys=False)


def parse_point(chart: MetricChart, values: Mapping[str, str]) -> tuple:
    """Point from a {coordinate: literal} mapping, e.g. from `--at t=0,x=2`."""
    missing = [c for c in chart.coords if c not in values]
    if missing:
        raise ArityMismatchError(f"point is missing coordinates {missing}")
    unknown = [k for k in values if k not in chart.coords]
    if unknown:
        raise ArityMismatchError(f"point names unknown coordinates {unknown}")
    out = []
    for c in chart.coords:
        text = str(values[c])
        try:
            out.append(Fraction(text) if chart.mode == "exact" else float(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ArityMismatchError(f"bad value for {c!r}: {exc}") from None
    return tuple(out)
