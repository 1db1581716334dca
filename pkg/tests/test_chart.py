import random
from fractions import Fraction

import pytest

from cottonkit.chart import (MetricChart, dump_metric_spec,
                             inverse_metric_jet_at, load_metric_spec,
                             metric_jets_at, parse_point, signature_at)
from cottonkit.errors import (ArityMismatchError, DegenerateMetricError,
                              InsufficientJetOrderError, SpecFileError)
from cottonkit.exprparse import parse_expr
from cottonkit.jet import Jet
from cottonkit.rational import random_chart_point

from conftest import flat_chart, frac_point, model_chart

T, S, X = 0, 1, 2


def test_model_jets_at_unit_x(model):
    jets = metric_jets_at(model, frac_point(0, 0, 1), 2)
    g_tt = jets[T][T]
    assert g_tt.value() == 1
    assert g_tt.coefficient((0, 0, 1)) == 3
    assert jets[T][S].value() == Fraction(1, 2)
    assert jets[X][X].value() == 1
    assert jets[S][S].is_zero()


def test_euclidean_jets_constant(flat3):
    jets = metric_jets_at(flat3, frac_point(2, -3, 5), 4)
    for i in range(3):
        for j in range(3):
            expected = Jet.constant(1 if i == j else 0, 3, 4)
            assert jets[i][j] == expected


def test_symmetry_of_component_matrices(model_generic):
    point = frac_point(Fraction(1, 3), -2, Fraction(7, 5))
    jets = metric_jets_at(model_generic, point, 3)
    inv = inverse_metric_jet_at(model_generic, point, 3)
    for i in range(3):
        for j in range(3):
            assert jets[i][j] == jets[j][i]
            assert inv[i][j] == inv[j][i]


def test_inverse_of_involutive_diagonal():
    chart = flat_chart(3, signs=(1, 1, -1))
    inv = inverse_metric_jet_at(chart, frac_point(0, 0, 0), 2)
    for i in range(3):
        for j in range(3):
            expected = 0 if i != j else (1 if i < 2 else -1)
            assert inv[i][j].value() == expected


def test_model_inverse_closed_form(model_generic):
    # hand inversion of the 3x3: g^ss = -4 g_tt, g^ts = 2, g^xx = 1, g^tt = 0
    point = frac_point(Fraction(2, 3), 5, Fraction(-7, 4))
    g_tt = model_generic.component(T, T)(point)
    inv = inverse_metric_jet_at(model_generic, point, 0)
    assert inv[T][T].value() == 0
    assert inv[T][S].value() == 2
    assert inv[S][S].value() == -4 * g_tt
    assert inv[X][X].value() == 1
    assert inv[T][X].value() == 0 and inv[S][X].value() == 0


def test_model_inverse_matches_sympy_adjugate(model_generic):
    import sympy as sp
    from oracles import eval_at, to_sympy_matrix
    syms, g = to_sympy_matrix(model_generic)
    ginv = g.inv()
    point = frac_point(Fraction(1, 7), Fraction(-3, 2), Fraction(9, 5))
    inv = inverse_metric_jet_at(model_generic, point, 0)
    for i in range(3):
        for j in range(3):
            assert inv[i][j].value() == eval_at(ginv[i, j], syms, point)


def test_inverse_times_metric_is_identity_random_points():
    rng = random.Random(17)
    charts = [model_chart("t"), flat_chart(3, signs=(1, -1, 1))]
    for chart in charts:
        hits = 0
        while hits < 20:
            point = random_chart_point(rng, chart.dim)
            try:
                inv = inverse_metric_jet_at(chart, point, 2)
            except DegenerateMetricError:
                continue
            hits += 1
            g = metric_jets_at(chart, point, 2)
            n = chart.dim
            for i in range(n):
                for j in range(n):
                    entry = None
                    for k in range(n):
                        term = g[i][k] * inv[k][j]
                        entry = term if entry is None else entry + term
                    expected = Jet.constant(1 if i == j else 0, n, 2)
                    assert entry == expected


def test_degenerate_point_raises():
    coords = ("u", "v")
    chart = MetricChart(coords, {("u", "u"): parse_expr("u", coords),
                                 ("v", "v"): parse_expr("1", coords)})
    with pytest.raises(DegenerateMetricError):
        inverse_metric_jet_at(chart, frac_point(0, 1), 2)
    # fine at other points: degeneracy is per-point, not per-chart
    assert inverse_metric_jet_at(chart, frac_point(4, 1), 2)[0][0].value() == \
        Fraction(1, 4)


def test_signatures():
    assert signature_at(flat_chart(3), frac_point(0, 0, 0)).positives == 3
    lorentz = signature_at(model_chart("t"), frac_point(5, -2, Fraction(1, 3)))
    assert (lorentz.positives, lorentz.negatives) == (2, 1)
    neg = flat_chart(3, signs=(-1, -1, 1))
    assert signature_at(neg, frac_point(1, 1, 1)).negatives == 2


def test_signature_constant_on_model_grid():
    chart = model_chart("t^2 - 1")
    values = [-2, Fraction(-1, 2), 0, Fraction(1, 2), 2]
    for t in values:
        for x in values:
            sig = signature_at(chart, (Fraction(t), Fraction(0), Fraction(x)))
            assert (sig.positives, sig.negatives) == (2, 1)


def test_degenerate_signature_raises():
    coords = ("u", "v")
    chart = MetricChart(coords, {("u", "u"): parse_expr("u", coords),
                                 ("v", "v"): parse_expr("1", coords)})
    with pytest.raises(DegenerateMetricError):
        signature_at(chart, frac_point(0, 0))


def test_point_arity_checked(model):
    with pytest.raises(ArityMismatchError):
        metric_jets_at(model, frac_point(0, 0), 2)


def test_callable_component_order_validation():
    coords = ("u", "v")

    def low_order(point, order):
        return Jet.constant(1, 2, 1)   # always order 1, regardless of request

    chart = MetricChart(coords, {("u", "u"): low_order,
                                 ("v", "v"): parse_expr("1", coords)})
    assert metric_jets_at(chart, frac_point(0, 0), 1)[0][0].value() == 1
    with pytest.raises(InsufficientJetOrderError):
        metric_jets_at(chart, frac_point(0, 0), 3)


MODEL_SPEC_TEXT = """\
dim: 3
coords: [t, s, x]
mode: exact
components:
  t,t: x^3 + t*x
  t,s: 1/2
  x,x: 1
"""


def test_load_metric_spec_roundtrip():
    chart = load_metric_spec(MODEL_SPEC_TEXT)
    assert chart.dim == 3 and chart.coords == ("t", "s", "x")
    assert chart.mode == "exact"
    reference = model_chart("t")
    point = frac_point(Fraction(1, 2), 3, Fraction(-5, 4))
    assert [[j.value() for j in row] for row in metric_jets_at(chart, point, 0)] \
        == [[j.value() for j in row] for row in metric_jets_at(reference, point, 0)]
    # dump -> load preserves values
    again = load_metric_spec(dump_metric_spec(chart))
    assert [[j.value() for j in row] for row in metric_jets_at(again, point, 0)] \
        == [[j.value() for j in row] for row in metric_jets_at(chart, point, 0)]


def test_load_metric_spec_defaults_to_zero_components():
    chart = load_metric_spec(
        "dim: 2\ncoords: [a, b]\ncomponents:\n  a,a: 1\n  b,b: 1\n")
    assert chart.component(0, 1) is None


@pytest.mark.parametrize("text, message", [
    ("dim: 3\ncoords: [t, s]\ncomponents: {}", "coords lists"),
    ("coords: [t, s]\ncomponents: {}", "dim"),
    ("dim: 2\ncoords: [t, t]\ncomponents: {}", "distinct"),
    ("dim: 2\ncoords: [t, s]\nmode: wild\ncomponents: {}", "mode"),
    ("dim: 2\ncoords: [t, s]\ncomponents:\n  t,q: 1\n", "unknown coordinate"),
    ("dim: 2\ncoords: [t, s]\ncomponents:\n  t: 1\n", "pair"),
    ("dim: 2\ncoords: [t, s]\ncomponents: [1, 2]\n", "mapping"),
])
def test_load_metric_spec_errors(text, message):
    with pytest.raises(SpecFileError) as err:
        load_metric_spec(text)
    assert message in str(err.value)


def test_load_metric_spec_conflicting_symmetric_pair():
    text = ("dim: 2\ncoords: [t, s]\ncomponents:\n"
            "  t,s: 1\n  s,t: 2\n")
    with pytest.raises(SpecFileError) as err:
        load_metric_spec(text)
    assert "conflicting" in str(err.value)


def test_load_metric_spec_bad_expression_carries_position():
    from cottonkit.errors import ParseError
    with pytest.raises(ParseError):
        load_metric_spec("dim: 2\ncoords: [t, s]\ncomponents:\n  t,t: 'x^^3'\n")


def test_parse_point(model):
    point = parse_point(model, {"t": "1/2", "s": "0", "x": "-3"})
    assert point == (Fraction(1, 2), Fraction(0), Fraction(-3))
    with pytest.raises(ArityMismatchError):
        parse_point(model, {"t": "0", "s": "0"})
    with pytest.raises(ArityMismatchError):
        parse_point(model, {"t": "0", "s": "0", "x": "0", "w": "1"})


def test_float_mode_evaluation():
    chart = load_metric_spec(MODEL_SPEC_TEXT).with_mode("float")
    jets = metric_jets_at(chart, (0.0, 0.0, 2.0), 1)
    assert jets[T][T].value() == pytest.approx(8.0)
    assert jets[T][S].value() == pytest.approx(0.5)
    sig = signature_at(chart, (0.0, 0.0, 2.0))
    assert (sig.positives, sig.negatives) == (2, 1)
