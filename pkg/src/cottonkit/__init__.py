"""cottonkit: pointwise curvature toolkit for pseudo-Riemannian charts.

Exact-rational (or float) jets of metric components drive the pipeline from
connection coefficients to the Cotton tensor and its covariant derivative;
a companion linear-algebra module classifies pointwise Cotton-like tensors
on 3-dimensional pseudo-Euclidean spaces.  The FastAPI service in
`cottonkit.service` and the CLI in `cottonkit.cli` expose the same five
operations: curvature, classify, verify-model, decompose, selftest.
"""

__version__ = "0.1.0"

from .chart import (MetricChart, Signature, dump_metric_spec,
                    inverse_metric_jet_at, load_metric_spec, metric_jets_at,
                    signature_at)
from .cotton_algebra import (CottonDecomposition, CottonLike, InnerProduct3,
                             causal_character, check_cotton_like,
                             cotton_like_space_basis, decompose, kernel,
                             load_tensor_spec, null_frame, reconstruct)
from .curvature import (PointTensor, christoffel_at, cotton_at,
                        covariant_derivative_at, div_schouten_check,
                        nabla_cotton_at, ricci_at, riemann_cov_at,
                        scalar_curvature_at, schouten_at, weyl_at)
from .errors import (CottonkitError, DegenerateMetricError, InputError,
                     InsufficientJetOrderError, NotCottonLikeError,
                     NotNullError, NotRankOneFormError, ParseError,
                     PreconditionError)
from .exprparse import parse_expr
from .geometry import (ChartClassification, ModelSpec, Verdict, build_model,
                       classify_chart, distribution_D_at, extract_f_at,
                       ricci_image_in_D_check, sample_points,
                       scalar_flat_check, verify_gradient_identity_at)
from .jet import Jet, jet_arith, jet_eval
from .poly import PolyExpr
from .rational import Rational, format_rational, parse_rational

__all__ = [
    "__version__",
    "MetricChart", "Signature", "dump_metric_spec", "inverse_metric_jet_at",
    "load_metric_spec", "metric_jets_at", "signature_at",
    "CottonDecomposition", "CottonLike", "InnerProduct3", "causal_character",
    "check_cotton_like", "cotton_like_space_basis", "decompose", "kernel",
    "load_tensor_spec", "null_frame", "reconstruct",
    "PointTensor", "christoffel_at", "cotton_at", "covariant_derivative_at",
    "div_schouten_check", "nabla_cotton_at", "ricci_at", "riemann_cov_at",
    "scalar_curvature_at", "schouten_at", "weyl_at",
    "CottonkitError", "DegenerateMetricError", "InputError",
    "InsufficientJetOrderError", "NotCottonLikeError", "NotNullError",
    "NotRankOneFormError", "ParseError", "PreconditionError",
    "parse_expr",
    "ChartClassification", "ModelSpec", "Verdict", "build_model",
    "classify_chart", "distribution_D_at", "extract_f_at",
    "ricci_image_in_D_check", "sample_points", "scalar_flat_check",
    "verify_gradient_identity_at",
    "Jet", "jet_arith", "jet_eval",
    "PolyExpr",
    "Rational", "format_rational", "parse_rational",
]
