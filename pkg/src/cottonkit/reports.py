"""Report builders: plain JSON-able dicts consumed by the service and CLI.

Everything here is presentation plumbing over the core modules; tolerances
apply in float mode only, exact mode always demands exact zeros.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import curvature as cv
from . import geometry as geo
from .chart import MetricChart, metric_values_at, signature_at
from .cotton_algebra import (InnerProduct3, causal_character, check_cotton_like,
                             decompose)
from .curvature import PointTensor
from .errors import InputError, NotCottonLikeError
from .jsonutil import scalar_to_json

DEFAULT_FLOAT_TOLERANCE = 1e-9


def _point_map(chart: MetricChart, point) -> dict:
    return {name: scalar_to_json(value)
            for name, value in zip(chart.coords, point)}


def _tensor_map(tensor: PointTensor) -> dict:
    """Sparse components keyed by coordinate names, nonzero entries only."""
    entries = {}
    for idx in tensor.indices():
        value = tensor.value(*idx)
        if value != 0:
            key = ",".join(tensor.coords[i] for i in idx)
            entries[key] = scalar_to_json(value)
    return {
        "components": entries,
        "zero": not entries,
        "max_abs": float(tensor.max_abs_value()),
    }


def parse_at_values(chart: MetricChart, at: Sequence[dict]) -> list[tuple]:
    from .chart import parse_point
    return [parse_point(chart, mapping) for mapping in at]


def resolve_points(chart: MetricChart, at: Sequence[dict] | None,
                   samples: int | None, seed: int | None) -> list[tuple]:
    points: list[tuple] = []
    if at:
        points.extend(parse_at_values(chart, at))
    if samples:
        if seed is None:
            raise InputError("a seed is required whenever random sampling is used")
        points.extend(geo.sample_points(chart, samples, seed))
    if not points:
        raise InputError("no evaluation points: pass explicit points or a "
                         "sample count with a seed")
    return points


def curvature_report(chart: MetricChart, points: Sequence[Sequence],
                     tolerance: float = DEFAULT_FLOAT_TOLERANCE) -> dict:
    """Ric, s, P, C, nabla C, W at each point plus symmetry summaries."""
    exact = chart.mode == "exact"
    reports = []
    for point in points:
        point = chart.check_point(point)
        sig = signature_at(chart, point)
        ricci = cv.ricci_at(chart, point, order=0)
        s = cv.scalar_curvature_at(chart, point, order=0).value()
        schouten = cv.schouten_at(chart, point, order=0)
        cotton = cv.cotton_at(chart, point, order=0)
        nabla_c = cv.nabla_cotton_at(chart, point, order=0)
        weyl = cv.weyl_at(chart, point, order=0) if chart.dim >= 3 else None
        ginv = cv.inverse_metric_values_at(chart, point)
        residuals = cv.cotton_symmetry_residuals(cotton.values(), ginv)
        div_ok, div_residual = cv.div_schouten_check(chart, point, tolerance)
        if exact:
            sym_ok = all(r == 0 for r in residuals.values())
        else:
            scale = max(1.0, float(cotton.max_abs_value()))
            sym_ok = all(float(r) <= tolerance * scale for r in residuals.values())
        entry = {
            "point": _point_map(chart, point),
            "signature": {"positives": sig.positives, "negatives": sig.negatives},
            "ricci": _tensor_map(ricci),
            "scalar_curvature": scalar_to_json(s),
            "schouten": _tensor_map(schouten),
            "cotton": _tensor_map(cotton),
            "nabla_cotton": _tensor_map(nabla_c),
            "symmetry_checks": {
                "cotton_antisymmetry": scalar_to_json(residuals["antisymmetry"]),
                "cotton_cyclic": scalar_to_json(residuals["cyclic"]),
                "cotton_trace": scalar_to_json(residuals["trace"]),
                "ok": sym_ok,
                "div_schouten_equals_d_trace": bool(div_ok),
                "div_schouten_residual": scalar_to_json(div_residual),
            },
        }
        if weyl is not None:
            entry["weyl"] = _tensor_map(weyl)
        reports.append(entry)
    return {
        "mode": chart.mode,
        "coords": list(chart.coords),
        "dim": chart.dim,
        "points": reports,
    }


def classify_report(chart: MetricChart, points: Sequence[Sequence],
                    tolerance: float = geo.COTTON_ZERO_TOLERANCE,
                    allow_skip: bool = False,
                    seed: int | None = None) -> dict:
    result = geo.classify_chart(chart, points, tolerance=tolerance,
                                allow_skip=allow_skip)
    return {
        "verdict": result.verdict.value,
        "disclaimer": result.disclaimer,
        "mode": result.mode,
        "sample_count": result.sample_count,
        "seed": seed,
        "witness": _point_map(chart, result.witness) if result.witness else None,
        "evidence": [
            {
                "point": _point_map(chart, e.point),
                "cotton_norm": e.cotton_norm,
                "nabla_cotton_norm": e.nabla_cotton_norm,
                "cotton_zero": e.cotton_zero,
                "nabla_zero": e.nabla_zero,
                "skipped": e.skipped,
            }
            for e in result.evidence
        ],
    }


# -- the model verification bundle ----------------------------------------------------

def _check_model_ricci(chart, points, exact, tol):
    T, S, X = 0, 1, 2
    for point in points:
        ric = cv.ricci_at(chart, point, order=0)
        expected_tt = -3 * point[X]
        for idx in ric.indices():
            want = expected_tt if idx == (T, T) else 0
            got = ric.value(*idx)
            bad = (got != want) if exact else abs(float(got - want)) > tol
            if bad:
                return False, (f"Ric[{idx}] = {got} but -3x dt(x)dt needs {want} "
                               f"at point {tuple(map(str, point))}")
    return True, f"Ric == -3x dt(x)dt at {len(points)} samples"


def _check_model_cotton(chart, points, exact, tol):
    T, S, X = 0, 1, 2
    for point in points:
        cotton = cv.cotton_at(chart, point, order=0)
        for idx in cotton.indices():
            want = 3 if idx == (T, X, T) else (-3 if idx == (X, T, T) else 0)
            got = cotton.value(*idx)
            bad = (got != want) if exact else abs(float(got - want)) > tol
            if bad:
                return False, (f"C[{idx}] = {got} but 3 (dt^dx)(x)dt needs {want} "
                               f"at point {tuple(map(str, point))}")
    return True, f"C == 3 (dt^dx)(x)dt at {len(points)} samples"


def _check_model_parallel(chart, points, exact, tol):
    for point in points:
        nabla = cv.nabla_cotton_at(chart, point, order=0)
        norm = nabla.max_abs_value()
        bad = (norm != 0) if exact else float(norm) > tol
        if bad:
            return False, (f"nabla C has magnitude {norm} at point "
                           f"{tuple(map(str, point))}")
    return True, f"nabla C == 0 at {len(points)} samples"


def _check_model_scalar_flat(chart, points, exact, tol):
    if not geo.scalar_flat_check(chart, points,
                                 tolerance=tol if not exact else geo.IDENTITY_TOLERANCE):
        return False, "scalar curvature does not vanish at some sample"
    return True, f"s == 0 and Schouten == Ricci at {len(points)} samples"


def _check_model_kernel(chart, points, exact, tol):
    for point in points:
        basis = geo.distribution_D_at(chart, point)
        if len(basis) != 1:
            return False, (f"Cotton kernel has dimension {len(basis)} at point "
                           f"{tuple(map(str, point))}")
        vec = basis[0]
        if exact:
            ok = list(vec) == [0, 1, 0]
        else:
            scale = max(abs(float(x)) for x in vec)
            ok = (abs(float(vec[0])) <= tol * scale
                  and abs(float(vec[2])) <= tol * scale)
        if not ok:
            return False, (f"kernel generator {vec} is not the d/ds direction "
                           f"at point {tuple(map(str, point))}")
    return True, f"Cotton kernel == span(d/ds) at {len(points)} samples"


def _check_model_ricci_image(chart, points, exact, tol):
    for point in points:
        if not geo.ricci_image_in_D_check(chart, point):
            return False, (f"Ricci image escapes the Cotton kernel at point "
                           f"{tuple(map(str, point))}")
    return True, f"Ricci endomorphism image inside the kernel at {len(points)} samples"


def _check_model_gradient(chart, points, exact, tol):
    u = (0, 1, 0)
    for point in points:
        holds, residual = geo.verify_gradient_identity_at(chart, point, u)
        if not holds:
            return False, (f"C != (u ^ grad f)(x)u, residual {residual} at point "
                           f"{tuple(map(str, point))}")
    return True, f"C == (u ^ grad f)(x)u with u = d/ds at {len(points)} samples"


MODEL_CHECKS = [
    ("model-ricci", _check_model_ricci),
    ("model-cotton", _check_model_cotton),
    ("cotton-parallel", _check_model_parallel),
    ("scalar-flat", _check_model_scalar_flat),
    ("kernel-distribution", _check_model_kernel),
    ("ricci-image", _check_model_ricci_image),
    ("gradient-identity", _check_model_gradient),
]


def verify_model_report(a_source: str, samples: int = 20, seed: int = 0,
                        mode: str = "exact",
                        tolerance: float = DEFAULT_FLOAT_TOLERANCE) -> dict:
    """Build the model for a(t) and run the seven structural checks."""
    spec = geo.ModelSpec.from_string(a_source)
    chart = geo.build_model(spec, mode=mode)
    points = geo.sample_points(chart, samples, seed)
    exact = mode == "exact"
    checks = []
    all_passed = True
    for name, runner in MODEL_CHECKS:
        passed, detail = runner(chart, points, exact, tolerance)
        all_passed = all_passed and passed
        checks.append({"name": name, "passed": passed, "detail": detail})
    return {
        "a": a_source,
        "mode": mode,
        "samples": samples,
        "seed": seed,
        "passed": all_passed,
        "checks": checks,
    }


def decompose_report(components, ip: InnerProduct3,
                     tolerance: float | None = None) -> dict:
    symmetry = check_cotton_like(components, ip)
    if not symmetry.ok:
        raise NotCottonLikeError(symmetry.first_violation,
                                 symmetry.violation_indices)
    kwargs = {} if tolerance is None else {"tolerance": tolerance}
    result = decompose(components, ip, **kwargs)
    report = {
        "kind": result.kind,
        "kernel_dim": len(result.kernel_basis),
        "kernel_basis": [[scalar_to_json(x) for x in vec]
                         for vec in result.kernel_basis],
        "kernel_causal": list(result.kernel_causal) or [
            causal_character(vec, ip) for vec in result.kernel_basis
            if any(x != 0 for x in vec)],
        "index_q": ip.index_q,
        "mode": ip.mode,
    }
    if result.kind == "rank_one_kernel":
        report.update({
            "u": result.u,
            "v": result.v,
            "a": result.a,
            "residual": result.residual,
        })
        if result.certificate is not None:
            cert = result.certificate
            report["certificate"] = {
                "e1": [scalar_to_json(x) for x in cert.e1],
                "e2_raw": [scalar_to_json(x) for x in cert.e2_raw],
                "e3": [scalar_to_json(x) for x in cert.e3],
                "beta": scalar_to_json(cert.beta),
                "a_raw": scalar_to_json(cert.a_raw),
                "scale": scalar_to_json(cert.scale),
                "epsilon": cert.epsilon,
                "gram": [[scalar_to_json(x) for x in row] for row in cert.gram],
                "residual": scalar_to_json(cert.residual),
            }
    return report
