from fractions import Fraction

import pytest

from cottonkit.chart import MetricChart
from cottonkit.exprparse import parse_expr
from cottonkit.geometry import ModelSpec, build_model
from cottonkit.jet import jet_eval

MODEL_COORDS = ("t", "s", "x")
T, S, X = 0, 1, 2


def model_chart(a_source: str = "0", mode: str = "exact") -> MetricChart:
    return build_model(ModelSpec.from_string(a_source), mode=mode)


def flat_chart(dim: int = 3, signs=None) -> MetricChart:
    coords = ("x1", "x2", "x3", "x4")[:dim]
    signs = signs or (1,) * dim
    comps = {(c, c): parse_expr(str(s), coords)
             for c, s in zip(coords, signs)}
    return MetricChart(coords, comps)


@pytest.fixture
def model():
    return model_chart("0")


@pytest.fixture
def model_generic():
    return model_chart("t^2 - 1")


@pytest.fixture
def flat3():
    return flat_chart(3)


def sphere2_chart() -> MetricChart:
    """Unit round 2-sphere, conformal patch g = 4/(1+x^2+y^2)^2 (dx^2+dy^2).

    Components are rational functions, supplied as exact-jet callables.
    """
    coords = ("x", "y")
    denom = parse_expr("(1 + x^2 + y^2)^2", coords)
    four = parse_expr("4", coords)

    def conf(point, order):
        return jet_eval(four, point, order) / jet_eval(denom, point, order)

    return MetricChart(coords, {("x", "x"): conf, ("y", "y"): conf})


def sphere3_chart() -> MetricChart:
    """Unit round 3-sphere patch: Einstein with Ric = 2g, s = 6."""
    coords = ("x", "y", "z")
    denom = parse_expr("(1 + x^2 + y^2 + z^2)^2", coords)
    four = parse_expr("4", coords)

    def conf(point, order):
        return jet_eval(four, point, order) / jet_eval(denom, point, order)

    return MetricChart(coords, {(c, c): conf for c in coords})


def kasner_like_chart() -> MetricChart:
    """g = z^4 dx^2 + z^-2 dy^2 + dz^2: rank-one Ricci along the spacelike
    d/dz with nonzero scalar curvature, so the Cotton-gradient identity fails.
    """
    coords = ("x", "y", "z")
    z4 = parse_expr("z^4", coords)
    z2 = parse_expr("z^2", coords)

    def inv_z2(point, order):
        return jet_eval(z2, point, order).inverse()

    return MetricChart(coords, {("x", "x"): z4,
                                ("y", "y"): inv_z2,
                                ("z", "z"): parse_expr("1", coords)})


def frac_point(*values) -> tuple:
    return tuple(Fraction(v) for v in values)
