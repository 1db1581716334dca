"""The cubic pp-wave model family, chart classification, and the structural
identities tying curvature to the Cotton kernel.

The model chart is (t, s, x) with

    g_tt = x^3 + a(t) x,   g_ts = 1/2 (symmetric product),   g_xx = 1,

for a polynomial a(t); it is Lorentzian, scalar-flat, has parallel and
nowhere-vanishing Cotton tensor, and its Cotton kernel is spanned by the null
coordinate field d/ds at every point.  Classification verdicts here are
explicitly SAMPLED, chart-local statements: they aggregate per-point evidence
and make no global claim.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import curvature as cv
from .chart import MetricChart, metric_jets_at, metric_values_at
from .cotton_algebra import InnerProduct3, kernel
from .errors import (DegenerateMetricError, NotRankOneFormError,
                     PreconditionError)
from .exprparse import parse_expr
from .linalg import in_span
from .poly import PolyExpr
from .rational import random_chart_point

COTTON_ZERO_TOLERANCE = 1e-9       # float mode, scaled by metric magnitude
IDENTITY_TOLERANCE = 1e-9
MODEL_COORDS = ("t", "s", "x")
DEFAULT_SAMPLE_COUNT = 20


# -- the model family -----------------------------------------------------------

@dataclass(frozen=True)
class ModelSpec:
    """Coefficient function a(t) for the model's g_tt = x^3 + a(t) x."""
    a_poly: PolyExpr

    @classmethod
    def from_string(cls, source: str) -> "ModelSpec":
        return cls(parse_expr(source, ("t",)))

    def __post_init__(self):
        extra = [name for name in self.a_poly.variables if name != "t"]
        if extra and any(
                any(mono[self.a_poly.variables.index(n)] for n in extra)
                for mono in self.a_poly.terms):
            raise PreconditionError("a(t) must be univariate in t")


def build_model(spec: ModelSpec, mode: str = "exact") -> MetricChart:
    a = spec.a_poly.with_variables(MODEL_COORDS)
    x = PolyExpr.variable(MODEL_COORDS, "x")
    g_tt = x ** 3 + a * x
    components = {
        ("t", "t"): g_tt,
        ("t", "s"): PolyExpr.constant(MODEL_COORDS, Fraction(1, 2)),
        ("x", "x"): PolyExpr.constant(MODEL_COORDS, 1),
    }
    return MetricChart(MODEL_COORDS, components, mode)


# -- sampling ----------------------------------------------------------------------

def sample_points(chart: MetricChart, count: int, seed: int,
                  max_attempts: int = 1000) -> list[tuple]:
    """Seeded nondegenerate sample points with rational coordinates.

    Coordinates are p/q with |p| <= 100 and q <= 10 (floats of those in float
    mode); points where the metric degenerates are rejected and redrawn.
    """
    rng = random.Random(seed)
    points: list[tuple] = []
    attempts = 0
    while len(points) < count:
        if attempts >= max_attempts:
            raise DegenerateMetricError(
                message=f"could not find {count} nondegenerate points "
                        f"in {max_attempts} draws")
        attempts += 1
        candidate = random_chart_point(rng, chart.dim)
        if chart.mode == "float":
            candidate = tuple(float(v) for v in candidate)
        try:
            cv.inverse_metric_values_at(chart, candidate)
        except DegenerateMetricError:
            continue
        points.append(candidate)
    return points


# -- classification -------------------------------------------------------------------

class Verdict(str, enum.Enum):
    CONFORMALLY_FLAT = "ConformallyFlat"
    ECS = "ECS"
    COTTON_PARALLEL_ONLY = "CottonParallelOnly"
    NON_PARALLEL = "NonParallel"
    MIXED = "Mixed"


@dataclass
class PointEvidence:
    point: tuple
    cotton_norm: float
    nabla_cotton_norm: float
    cotton_zero: bool
    nabla_zero: bool
    skipped: bool = False


@dataclass
class ChartClassification:
    verdict: Verdict
    evidence: list[PointEvidence]
    sample_count: int
    mode: str
    witness: tuple | None = None    # first point with nonparallel Cotton
    disclaimer: str = "chart-local verdict"


def _metric_scale(chart: MetricChart, point) -> float:
    values = metric_values_at(chart, point)
    return max(1.0, max(abs(float(x)) for row in values for x in row))


def classify_chart(chart: MetricChart, points: Sequence[Sequence], *,
                   tolerance: float = COTTON_ZERO_TOLERANCE,
                   allow_skip: bool = False) -> ChartClassification:
    """Aggregate the Cotton / nabla-Cotton evidence at the sample points.

    NonParallel if nabla C != 0 somewhere; otherwise ConformallyFlat when C
    vanishes at every sample, ECS when it vanishes nowhere, and
    CottonParallelOnly when it vanishes at some samples only.  The verdict is
    a pure fold over the per-point records.
    """
    if not points:
        raise PreconditionError("classification needs at least one sample point")
    exact = chart.mode == "exact"
    evidence: list[PointEvidence] = []
    witness = None
    for point in points:
        try:
            cotton = cv.cotton_at(chart, point, order=0)
            nabla = cv.nabla_cotton_at(chart, point, order=0)
        except DegenerateMetricError:
            if not allow_skip:
                raise
            evidence.append(PointEvidence(tuple(point), 0.0, 0.0, True, True,
                                          skipped=True))
            continue
        c_norm = cotton.max_abs_value()
        n_norm = nabla.max_abs_value()
        if exact:
            c_zero = c_norm == 0
            n_zero = n_norm == 0
        else:
            cutoff = tolerance * _metric_scale(chart, point)
            c_zero = c_norm <= cutoff
            n_zero = n_norm <= cutoff
        if not n_zero and witness is None:
            witness = tuple(point)
        evidence.append(PointEvidence(tuple(point), float(c_norm), float(n_norm),
                                      c_zero, n_zero))

    live = [e for e in evidence if not e.skipped]
    if not live:
        raise PreconditionError("all sample points were skipped as degenerate")
    if any(not e.nabla_zero for e in live):
        verdict = Verdict.NON_PARALLEL
    elif all(e.cotton_zero for e in live):
        verdict = Verdict.CONFORMALLY_FLAT
    elif all(not e.cotton_zero for e in live):
        verdict = Verdict.ECS
    else:
        verdict = Verdict.COTTON_PARALLEL_ONLY
    return ChartClassification(verdict, evidence, len(evidence), chart.mode,
                               witness=witness)


# -- pointwise kernel distribution and Ricci image ---------------------------------------

def _inner_product_at(chart: MetricChart, point) -> InnerProduct3:
    if chart.dim != 3:
        raise PreconditionError("Cotton kernel analysis is specific to dimension 3")
    return InnerProduct3(metric_values_at(chart, point),
                         mode=chart.mode)


def distribution_D_at(chart: MetricChart, point: Sequence) -> list[list]:
    """Kernel of the pointwise Cotton tensor (basis list, dim 0, 1 or 3)."""
    cotton = cv.cotton_at(chart, point, order=0)
    return kernel(cotton.values(), _inner_product_at(chart, point))


def ricci_image_in_D_check(chart: MetricChart, point: Sequence,
                           tolerance: float = IDENTITY_TOLERANCE) -> bool:
    """Does the image of the Ricci endomorphism lie inside the Cotton kernel?"""
    n = chart.dim
    ric = cv.ricci_at(chart, point, order=0).values()
    ginv = cv.inverse_metric_values_at(chart, point)
    endo_columns = [[sum(ginv[i][k] * ric[k][j] for k in range(n))
                     for i in range(n)] for j in range(n)]
    basis = distribution_D_at(chart, point)
    if chart.mode == "exact":
        return all(in_span(basis, column) for column in endo_columns)
    if not basis:
        return all(abs(x) <= tolerance for col in endo_columns for x in col)
    b = np.array(basis, dtype=float).T
    for column in endo_columns:
        target = np.array(column, dtype=float)
        _, residual, *_ = np.linalg.lstsq(b, target, rcond=None)
        norm = float(np.linalg.norm(target))
        defect = float(np.sqrt(residual[0])) if len(residual) else 0.0
        if defect > tolerance * max(1.0, norm):
            return False
    return True


# -- the Ricci factorization and the gradient identity -------------------------------------

def extract_f_at(chart: MetricChart, point: Sequence, u: Sequence,
                 tolerance: float = IDENTITY_TOLERANCE):
    """Return f with Ric = -f (u-flat (x) u-flat) at the point.

    u is a tangent vector at the point; u-flat is its metric lowering.  Raises
    NotRankOneFormError when Ricci is not proportional to that rank-one form.
    """
    point = chart.check_point(point)
    if all(v == 0 for v in u):
        raise PreconditionError("u must be nonzero")
    n = chart.dim
    g = metric_values_at(chart, point)
    ub = [sum(g[i][j] * u[j] for j in range(n)) for i in range(n)]
    ric = cv.ricci_at(chart, point, order=0).values()
    b = [[ub[i] * ub[j] for j in range(n)] for i in range(n)]
    pivot = max(range(n), key=lambda i: abs(float(ub[i])))
    exact = chart.mode == "exact"
    if ub[pivot] == 0:
        raise PreconditionError("u-flat vanished; metric would be degenerate")
    f = -ric[pivot][pivot] / b[pivot][pivot]
    scale = max(1.0, max(abs(float(x)) for row in ric for x in row))
    defect = max(abs(ric[i][j] + f * b[i][j]) for i in range(n) for j in range(n))
    if exact:
        if defect != 0:
            raise NotRankOneFormError(
                f"Ricci is not a multiple of u-flat (x) u-flat (defect {defect})")
    elif defect > tolerance * scale:
        raise NotRankOneFormError(
            f"Ricci is not a multiple of u-flat (x) u-flat "
            f"(relative defect {float(defect) / scale})")
    return f


def verify_gradient_identity_at(chart: MetricChart, point: Sequence, u: Sequence,
                                tolerance: float = IDENTITY_TOLERANCE):
    """Check C = (u-flat ^ df) (x) u-flat with f the Ricci factor.

    f is extracted in jet arithmetic with u held constant in coordinates, so
    df is read off f's first-order jet coefficients.  Returns (holds, residual).
    """
    point = chart.check_point(point)
    n = chart.dim
    exact = chart.mode == "exact"
    g1 = metric_jets_at(chart, point, 1)
    u_vals = [Fraction(v) for v in u] if exact else [float(v) for v in u]
    if all(v == 0 for v in u_vals):
        raise PreconditionError("u must be nonzero")
    ub_jets = [None] * n
    for i in range(n):
        total = None
        for j in range(n):
            term = g1[i][j].scaled(u_vals[j])
            total = term if total is None else total + term
        ub_jets[i] = total
    ric = cv.ricci_at(chart, point, order=1)
    b_jets = [[ub_jets[i] * ub_jets[j] for j in range(n)] for i in range(n)]
    pivot = max(range(n), key=lambda i: abs(float(ub_jets[i].value())))
    if ub_jets[pivot].value() == 0:
        raise PreconditionError("u-flat vanished; metric would be degenerate")
    f_jet = -(ric.components[pivot][pivot] / b_jets[pivot][pivot])
    # rank-one factorization must hold as jets, not just values
    defect = None
    for i in range(n):
        for j in range(n):
            diff = ric.components[i][j] + f_jet * b_jets[i][j]
            m = diff.max_abs()
            defect = m if defect is None else max(defect, m)
    scale = max(1.0, float(ric.max_abs_value()))
    if exact:
        if defect != 0:
            raise NotRankOneFormError(
                f"jet-level Ricci factorization failed (defect {defect})")
    elif float(defect) > tolerance * scale:
        raise NotRankOneFormError(
            f"jet-level Ricci factorization failed (relative defect "
            f"{float(defect) / scale})")

    df = [f_jet.coefficient(tuple(1 if m == k else 0 for m in range(n)))
          for k in range(n)]
    ub = [jet.value() for jet in ub_jets]
    cotton = cv.cotton_at(chart, point, order=0).values()
    residual = max(
        abs(cotton[i][j][k] - (ub[i] * df[j] - df[i] * ub[j]) * ub[k])
        for i in range(n) for j in range(n) for k in range(n))
    c_scale = max(1.0, max(abs(float(cotton[i][j][k]))
                           for i in range(n) for j in range(n) for k in range(n)))
    holds = residual == 0 if exact else float(residual) <= tolerance * c_scale
    return holds, residual


def scalar_flat_check(chart: MetricChart, points: Sequence[Sequence],
                      tolerance: float = IDENTITY_TOLERANCE) -> bool:
    """s = 0 at every sample; when true, also asserts Schouten == Ricci there."""
    exact = chart.mode == "exact"
    for point in points:
        s = cv.scalar_curvature_at(chart, point, order=0).value()
        flat = s == 0 if exact else abs(float(s)) <= tolerance
        if not flat:
            return False
    for point in points:
        ric = cv.ricci_at(chart, point, order=0).values()
        p = cv.schouten_at(chart, point, order=0).values()
        n = chart.dim
        diff = max(abs(ric[i][j] - p[i][j]) for i in range(n) for j in range(n))
        if exact:
            assert diff == 0, "scalar-flat chart must have Schouten == Ricci"
        else:
            assert float(diff) <= tolerance, \
                "scalar-flat chart must have Schouten ~= Ricci"
    return True
