from fractions import Fraction

import pytest

from cottonkit import geometry as geo
from cottonkit.chart import MetricChart
from cottonkit.errors import (DegenerateMetricError, NotRankOneFormError,
                              PreconditionError)
from cottonkit.exprparse import parse_expr
from cottonkit.geometry import ModelSpec, Verdict, build_model

from conftest import (flat_chart, frac_point, kasner_like_chart, model_chart,
                      sphere3_chart)

T, S, X = 0, 1, 2


def test_build_model_zero_a():
    chart = build_model(ModelSpec.from_string("0"))
    g_tt = chart.component(T, T)
    assert str(g_tt) == "x^3"
    assert chart.component(T, S).constant_value() == Fraction(1, 2)
    assert chart.component(X, X).constant_value() == 1
    assert chart.component(S, S) is None


def test_build_model_linear_a():
    chart = build_model(ModelSpec.from_string("t"))
    point = frac_point(2, 0, 3)
    assert chart.component(T, T)(point) == 27 + 2 * 3


def test_model_is_lorentzian_everywhere_sampled():
    from cottonkit.chart import signature_at
    chart = build_model(ModelSpec.from_string("t^2 - 1"))
    for point in geo.sample_points(chart, 10, seed=3):
        sig = signature_at(chart, point)
        assert (sig.positives, sig.negatives) == (2, 1)


def test_model_spec_rejects_wrong_variable():
    with pytest.raises(Exception):
        ModelSpec(parse_expr("x", ("x",)))


def test_sample_points_deterministic():
    chart = model_chart("t")
    a = geo.sample_points(chart, 10, seed=5)
    b = geo.sample_points(chart, 10, seed=5)
    assert a == b
    c = geo.sample_points(chart, 10, seed=6)
    assert a != c


def test_classify_model_is_ecs():
    for a_source in ("0", "t", "t^2", "t^2 - 1", "3*t^3 + t"):
        chart = model_chart(a_source)
        points = geo.sample_points(chart, 20, seed=7)
        result = geo.classify_chart(chart, points)
        assert result.verdict is Verdict.ECS
        assert all(e.nabla_zero and not e.cotton_zero for e in result.evidence)


def test_classify_flat_is_conformally_flat(flat3):
    points = geo.sample_points(flat3, 10, seed=11)
    result = geo.classify_chart(flat3, points)
    assert result.verdict is Verdict.CONFORMALLY_FLAT


def test_classify_x4_variant_nonparallel():
    coords = ("t", "s", "x")
    chart = MetricChart(coords, {
        ("t", "t"): parse_expr("x^4", coords),
        ("t", "s"): parse_expr("1/2", coords),
        ("x", "x"): parse_expr("1", coords),
    })
    points = geo.sample_points(chart, 10, seed=13)
    result = geo.classify_chart(chart, points)
    assert result.verdict is Verdict.NON_PARALLEL
    assert result.witness is not None


def test_classify_deterministic_given_inputs():
    chart = model_chart("t")
    points = geo.sample_points(chart, 10, seed=17)
    first = geo.classify_chart(chart, points)
    second = geo.classify_chart(chart, points)
    assert first.verdict == second.verdict
    assert [e.point for e in first.evidence] == [e.point for e in second.evidence]


def test_classify_requires_points():
    with pytest.raises(PreconditionError):
        geo.classify_chart(model_chart("0"), [])


def test_classify_degenerate_sample_raises_without_allow_skip():
    coords = ("u", "v")
    chart = MetricChart(coords, {("u", "u"): parse_expr("u", coords),
                                 ("v", "v"): parse_expr("1", coords)})
    with pytest.raises(DegenerateMetricError):
        geo.classify_chart(chart, [frac_point(0, 0), frac_point(1, 1)])
    result = geo.classify_chart(chart, [frac_point(0, 0), frac_point(1, 1)],
                                allow_skip=True)
    assert result.evidence[0].skipped and not result.evidence[1].skipped


def test_distribution_is_ds_span_constantly():
    chart = model_chart("t^2 - 1")
    for point in geo.sample_points(chart, 20, seed=19):
        assert geo.distribution_D_at(chart, point) == [[0, 1, 0]]


def test_distribution_generator_is_null():
    chart = model_chart("t")
    point = frac_point(1, 2, 3)
    from cottonkit.chart import metric_values_at
    from cottonkit.cotton_algebra import InnerProduct3, causal_character
    ip = InnerProduct3(metric_values_at(chart, point))
    generator = geo.distribution_D_at(chart, point)[0]
    assert causal_character(generator, ip) == "null"


def test_distribution_flat_is_full(flat3):
    assert len(geo.distribution_D_at(flat3, frac_point(1, 0, 2))) == 3


def test_ricci_image_in_kernel_on_model():
    chart = model_chart("3*t^3 + t")
    for point in geo.sample_points(chart, 10, seed=23):
        assert geo.ricci_image_in_D_check(chart, point)


def test_ricci_image_flat_vacuous(flat3):
    assert geo.ricci_image_in_D_check(flat3, frac_point(0, 0, 0))


def test_ricci_image_full_rank_ricci_zero_cotton():
    # Riemannian Einstein chart: Cotton == 0, kernel is everything,
    # membership holds vacuously even though Ricci has full rank
    chart = sphere3_chart()
    assert geo.ricci_image_in_D_check(chart, frac_point(Fraction(1, 3), 0, 0))


def test_extract_f_model():
    chart = model_chart("t^2 - 1")
    point = frac_point(Fraction(1, 2), -5, Fraction(3, 4))
    f = geo.extract_f_at(chart, point, (0, 1, 0))
    assert f == 12 * Fraction(3, 4)


def test_extract_f_zero_ricci(flat3):
    assert geo.extract_f_at(flat3, frac_point(1, 1, 1), (1, 2, 3)) == 0


def test_extract_f_rejects_full_rank_ricci():
    chart = sphere3_chart()
    with pytest.raises(NotRankOneFormError):
        geo.extract_f_at(chart, frac_point(0, Fraction(1, 2), 0), (1, 0, 0))


def test_extract_f_rejects_zero_u(flat3):
    with pytest.raises(PreconditionError):
        geo.extract_f_at(flat3, frac_point(0, 0, 0), (0, 0, 0))


def test_gradient_identity_on_models_scaling_invariant():
    for a_source in ("0", "t", "t^2 - 1"):
        chart = model_chart(a_source)
        for point in geo.sample_points(chart, 10, seed=29):
            for lam in (1, 2, -3, Fraction(5, 7)):
                holds, residual = geo.verify_gradient_identity_at(
                    chart, point, (0, lam, 0))
                assert holds and residual == 0


def test_gradient_identity_flat_trivial(flat3):
    holds, residual = geo.verify_gradient_identity_at(
        flat3, frac_point(0, 1, 2), (1, 1, 1))
    assert holds and residual == 0


def test_gradient_identity_fails_off_the_parallel_family():
    # rank-one Ricci along a spacelike direction: scalar-flatness fails and
    # the identity is genuinely false at this point
    chart = kasner_like_chart()
    holds, residual = geo.verify_gradient_identity_at(
        chart, frac_point(0, 0, 1), (0, 0, 1))
    assert not holds
    assert residual == 6


def test_gradient_identity_rejects_non_rank_one():
    coords = ("t", "s", "x")
    chart = MetricChart(coords, {
        ("t", "t"): parse_expr("x^3 + s*x", coords),
        ("t", "s"): parse_expr("1/2", coords),
        ("x", "x"): parse_expr("1", coords),
    })
    with pytest.raises(NotRankOneFormError):
        geo.verify_gradient_identity_at(chart, frac_point(0, 0, 1), (0, 1, 0))


def test_scalar_flat_check_model_and_flat(flat3):
    chart = model_chart("t")
    assert geo.scalar_flat_check(chart, geo.sample_points(chart, 10, seed=31))
    assert geo.scalar_flat_check(flat3, geo.sample_points(flat3, 5, seed=31))


def test_scalar_flat_check_positive_curvature_fails():
    chart = sphere3_chart()
    assert not geo.scalar_flat_check(chart, [frac_point(0, 0, 0)])


def test_model_curvature_independent_of_ts_normalization():
    # "dt ds" with g(dt,ds) = 1/2 versus 1: same Ricci and Cotton values
    from cottonkit import curvature as cv
    coords = ("t", "s", "x")
    point = frac_point(Fraction(1, 3), 2, Fraction(-5, 2))
    for pairing in (Fraction(1, 2), Fraction(1)):
        chart = MetricChart(coords, {
            ("t", "t"): parse_expr("x^3 + t*x", coords),
            ("t", "s"): parse_expr(str(pairing), coords),
            ("x", "x"): parse_expr("1", coords),
        })
        ric = cv.ricci_at(chart, point, order=0)
        assert ric.value(T, T) == -3 * point[X]
        assert all(ric.value(*idx) == 0 for idx in ric.indices()
                   if idx != (T, T))
        cotton = cv.cotton_at(chart, point, order=0)
        assert cotton.value(T, X, T) == 3
        assert cotton.value(X, T, T) == -3
