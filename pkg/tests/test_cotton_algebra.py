import itertools
import math
import random
from fractions import Fraction

import pytest

from cottonkit import curvature as cv
from cottonkit.chart import metric_values_at
from cottonkit.cotton_algebra import (CottonLike, InnerProduct3,
                                      causal_character, check_cotton_like,
                                      cotton_like_space_basis, decompose,
                                      kernel, load_tensor_spec, null_frame,
                                      random_cotton_like, reconstruct)
from cottonkit.errors import (KernelContainsNonNullError, NotCottonLikeError,
                              NotNullError, PreconditionError, SpecFileError)
from cottonkit.linalg import in_span

from conftest import frac_point, model_chart

LORENTZ = InnerProduct3([[1, 0, 0], [0, 1, 0], [0, 0, -1]])       # q = 1
ANTI_LORENTZ = InnerProduct3([[1, 0, 0], [0, -1, 0], [0, 0, -1]])  # q = 2
EUCLIDEAN = InnerProduct3([[1, 0, 0], [0, 1, 0], [0, 0, 1]])       # q = 0


def zero_tensor():
    return [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]


def model_value_pair(point=None):
    """(Cotton components, inner product) of the model at a point."""
    chart = model_chart("t")
    point = point or frac_point(Fraction(1, 2), -1, Fraction(4, 3))
    cotton = cv.cotton_at(chart, point, order=0).values()
    ip = InnerProduct3(metric_values_at(chart, point))
    return cotton, ip


# -- symmetry checking --------------------------------------------------------------

def test_model_cotton_value_is_cotton_like():
    cotton, ip = model_value_pair()
    assert check_cotton_like(cotton, ip).ok


def test_zero_tensor_is_cotton_like():
    assert check_cotton_like(zero_tensor(), LORENTZ).ok


def test_antisymmetry_violation_detected_and_named():
    t = zero_tensor()
    t[0][0][0] = Fraction(1)
    report = check_cotton_like(t, LORENTZ)
    assert not report.ok
    assert "antisymmetry" in report.first_violation
    with pytest.raises(NotCottonLikeError):
        CottonLike(t, LORENTZ)


def test_trace_violation_detected():
    # antisymmetric and cyclic-safe but with a nonzero first/third trace
    t = zero_tensor()
    t[0][1][0] = Fraction(1)
    t[1][0][0] = Fraction(-1)
    report = check_cotton_like(t, EUCLIDEAN)
    assert not report.ok
    assert "trace" in report.first_violation or "cyclic" in report.first_violation


# -- kernels ------------------------------------------------------------------------

def test_model_kernel_is_ds_direction():
    cotton, ip = model_value_pair()
    basis = kernel(cotton, ip)
    assert basis == [[0, 1, 0]]


def test_zero_tensor_kernel_is_everything():
    assert len(kernel(zero_tensor(), LORENTZ)) == 3


def test_generic_cotton_like_kernel_trivial():
    rng = random.Random(13)
    basis = cotton_like_space_basis(LORENTZ)
    trivial = 0
    for _ in range(50):
        tensor = random_cotton_like(rng, basis, LORENTZ)
        if not tensor.is_zero() and len(kernel(tensor, LORENTZ)) == 0:
            trivial += 1
    assert trivial >= 40    # random draws land in the open dense stratum


# -- causal characters ----------------------------------------------------------------

def test_causal_characters():
    assert causal_character((0, 1, 1), LORENTZ) == "null"
    assert causal_character((1, 0, 0), LORENTZ) == "spacelike"
    assert causal_character((0, 0, 1), LORENTZ) == "timelike"
    with pytest.raises(PreconditionError):
        causal_character((0, 0, 0), LORENTZ)


# -- null frames -------------------------------------------------------------------------

def gram_matrix(ip, vectors):
    return [[ip.inner(u, v) for v in vectors] for u in vectors]


def assert_penrose_relations(ip, frame, tol=1e-12):
    eps = frame.epsilon
    expected = [[0, 0, eps], [0, eps, 0], [eps, 0, 0]]
    gram = gram_matrix(ip, frame.vectors())
    for row, want in zip(gram, expected):
        for value, target in zip(row, want):
            assert abs(value - target) <= tol


def test_null_frame_q1_example():
    frame = null_frame(LORENTZ, (0, 1, 1))
    assert frame.epsilon == 1
    assert_penrose_relations(
        InnerProduct3([[1., 0, 0], [0, 1., 0], [0, 0, -1.]], mode="float"),
        frame)
    # exact certificate: the Gram matrix before normalization
    assert frame.gram_exact[0][2] == 1
    assert frame.beta > 0
    assert frame.e1_exact == [0, 1, 1]


def test_null_frame_q2_example():
    frame = null_frame(ANTI_LORENTZ, (1, 1, 0))
    assert frame.epsilon == -1
    assert frame.gram_exact[0][2] == -1       # <e1, e3> = -1
    assert frame.beta < 0                     # <e2raw, e2raw> negative
    assert_penrose_relations(
        InnerProduct3([[1., 0, 0], [0, -1., 0], [0, 0, -1.]], mode="float"),
        frame)


def test_null_frame_rejects_non_null():
    with pytest.raises(NotNullError):
        null_frame(LORENTZ, (1, 0, 0))
    with pytest.raises(NotNullError):
        null_frame(LORENTZ, (0, 0, 0))


def test_null_frame_rejects_definite_inner_product():
    with pytest.raises(PreconditionError):
        null_frame(EUCLIDEAN, (1, 0, 0))


def test_null_frame_e1_preserved_and_w_hint_respected():
    frame_a = null_frame(LORENTZ, (0, 2, 2))
    assert frame_a.e1_exact == [0, 2, 2]
    frame_b = null_frame(LORENTZ, (0, 2, 2), w_hint=(1, 1, 0))
    assert_penrose_relations(
        InnerProduct3([[1., 0, 0], [0, 1., 0], [0, 0, -1.]], mode="float"),
        frame_b)


def test_null_frame_gram_relations_random_null_vectors():
    # the five pairing relations hold exactly in the raw-frame certificate:
    # Gram(e1, e2raw, e3) = [[0,0,eps],[0,beta,0],[eps,0,0]] with sign(beta) = eps
    rng = random.Random(59)
    for q, ip in ((1, LORENTZ), (2, ANTI_LORENTZ)):
        for _ in range(25):
            p_par, q_par = rng.randint(-9, 9), rng.randint(-9, 9)
            if p_par == 0 and q_par == 0:
                continue
            if q == 1:
                u = (p_par ** 2 - q_par ** 2, 2 * p_par * q_par,
                     p_par ** 2 + q_par ** 2)
            else:
                u = (p_par ** 2 + q_par ** 2, p_par ** 2 - q_par ** 2,
                     2 * p_par * q_par)
            frame = null_frame(ip, u)
            eps = frame.epsilon
            gram = frame.gram_exact
            assert gram[0][0] == 0 and gram[2][2] == 0
            assert gram[0][1] == 0 and gram[1][2] == 0
            assert gram[0][2] == eps
            assert gram[1][1] == frame.beta
            assert (frame.beta > 0) == (eps > 0)
            assert frame.e1_exact == list(map(Fraction, u))


# -- reconstruct --------------------------------------------------------------------------

def test_reconstruct_null_orthogonal_is_cotton_like():
    u, v = (0, 1, 1), (1, 0, 0)
    t = reconstruct(u, v, LORENTZ)
    assert check_cotton_like(t, LORENTZ).ok
    # kernel is exactly the line through u
    basis = kernel(t, LORENTZ)
    assert len(basis) == 1 and in_span(basis, u)


def test_reconstruct_zero_u_gives_zero():
    t = reconstruct((0, 0, 0), (1, 2, 3), LORENTZ)
    assert all(t[i][j][k] == 0 for i, j, k in itertools.product(range(3), repeat=3))


def test_reconstruct_generic_uv_accepted_but_not_cotton_like():
    # spacelike u with <u,v> != 0: accepted by reconstruct, fails validation
    t = reconstruct((1, 0, 0), (1, 1, 0), LORENTZ)
    assert not check_cotton_like(t, LORENTZ).ok


# -- the solution space ----------------------------------------------------------------------

@pytest.mark.parametrize("ip", [EUCLIDEAN, LORENTZ, ANTI_LORENTZ])
def test_cotton_like_space_dimension_confirmed_by_solver(ip):
    basis = cotton_like_space_basis(ip)
    assert len(basis) == 5
    for element in basis:
        assert check_cotton_like(element.components, ip).ok


def test_random_combinations_stay_cotton_like():
    rng = random.Random(29)
    basis = cotton_like_space_basis(LORENTZ)
    for _ in range(20):
        tensor = random_cotton_like(rng, basis, LORENTZ)
        assert check_cotton_like(tensor.components, LORENTZ).ok


def test_model_cotton_value_ip_basis_dimension():
    _, ip = model_value_pair()
    assert len(cotton_like_space_basis(ip)) == 5


# -- kernel nullity (the classification theorem, part a) ---------------------------------------

@pytest.mark.parametrize("ip", [LORENTZ, ANTI_LORENTZ])
def test_kernel_vectors_of_nonzero_tensors_are_null(ip):
    rng = random.Random(37)
    basis = cotton_like_space_basis(ip)
    for _ in range(200):
        tensor = random_cotton_like(rng, basis, ip)
        if tensor.is_zero():
            continue
        vectors = kernel(tensor, ip)
        assert len(vectors) <= 1
        for vec in vectors:
            assert ip.inner(vec, vec) == 0


@pytest.mark.parametrize("ip", [LORENTZ, ANTI_LORENTZ])
def test_unit_kernel_vector_forces_zero_tensor(ip):
    # linear solve: no nonzero combination of the basis annihilates a unit vector
    from cottonkit.linalg import nullspace
    basis = cotton_like_space_basis(ip)
    for unit in ([1, 0, 0], [0, 0, 1]):
        assert causal_character(unit, ip) != "null"
        rows = []
        for j, k in itertools.product(range(3), repeat=2):
            rows.append([sum(Fraction(unit[i]) * b.components[i][j][k]
                             for i in range(3)) for b in basis])
        assert nullspace(rows) == []


# -- decomposition ------------------------------------------------------------------------------

def test_decompose_round_trip_simple():
    u, v = (0, 1, 1), (1, 0, 0)
    t = reconstruct(u, v, LORENTZ)
    result = decompose(t, LORENTZ)
    assert result.kind == "rank_one_kernel"
    assert result.certificate.residual == 0
    assert in_span([result.certificate.e1], u)
    uf = [float(x) for x in u]
    err = min(max(abs(a - b) for a, b in zip(result.u, uf)),
              max(abs(a + b) for a, b in zip(result.u, uf)))
    assert err <= 1e-12
    # v recovered modulo span(u) with sign consistent with the reconstruction
    float_ip = InnerProduct3([[1., 0, 0], [0, 1., 0], [0, 0, -1.]], mode="float")
    again = reconstruct(result.u, result.v, float_ip)
    assert max(abs(float(t[i][j][k]) - again[i][j][k])
               for i, j, k in itertools.product(range(3), repeat=3)) <= 1e-12


def test_decompose_zero_tensor():
    result = decompose(zero_tensor(), LORENTZ)
    assert result.kind == "zero"
    assert len(result.kernel_basis) == 3


def test_decompose_trivial_kernel():
    rng = random.Random(43)
    basis = cotton_like_space_basis(LORENTZ)
    for _ in range(20):
        tensor = random_cotton_like(rng, basis, LORENTZ)
        if tensor.is_zero() or len(kernel(tensor, LORENTZ)) != 0:
            continue
        assert decompose(tensor, LORENTZ).kind == "trivial_kernel"
        return
    pytest.fail("no trivial-kernel sample found")


def test_decompose_model_cotton_value():
    cotton, ip = model_value_pair()
    result = decompose(cotton, ip)
    assert result.kind == "rank_one_kernel"
    # kernel generator is the d/ds direction; u is a positive multiple of it
    assert result.kernel_basis == [[0, 1, 0]]
    assert result.kernel_causal == ["null"]
    assert result.u[0] == pytest.approx(0.0, abs=1e-12)
    assert result.u[2] == pytest.approx(0.0, abs=1e-12)
    assert result.u[1] > 0
    # exact certificate reconstructs the tensor with zero residual
    cert = result.certificate
    assert cert.residual == 0
    scaled = reconstruct(cert.e1, cert.e2_raw, ip)
    for i, j, k in itertools.product(range(3), repeat=3):
        assert cotton[i][j][k] == cert.scale * scaled[i][j][k]


def test_decompose_uniqueness_u_up_to_sign_v_modulo_kernel():
    # different frame choices (w hints) give the same u up to sign and
    # v up to adding multiples of u: reconstruct must agree exactly
    rng = random.Random(47)
    for q, ip in ((1, LORENTZ), (2, ANTI_LORENTZ)):
        for _ in range(10):
            p_par, q_par = rng.randint(1, 9), rng.randint(-9, 9)
            if q == 1:
                u = [p_par ** 2 - q_par ** 2, 2 * p_par * q_par,
                     p_par ** 2 + q_par ** 2]
                w = [2 * p_par * q_par, -(p_par ** 2 - q_par ** 2), 0]
            else:
                u = [p_par ** 2 + q_par ** 2, p_par ** 2 - q_par ** 2,
                     2 * p_par * q_par]
                w = [0, 2 * p_par * q_par, -(p_par ** 2 - q_par ** 2)]
            norm = p_par ** 2 + q_par ** 2
            v = [Fraction(x, norm) for x in w]
            if all(x == 0 for x in v):
                continue
            t = reconstruct(u, v, ip)
            result = decompose(t, ip)
            assert result.kind == "rank_one_kernel"
            uf = [float(x) for x in u]
            scale = max(abs(x) for x in uf)
            err = min(max(abs(a - b) for a, b in zip(result.u, uf)),
                      max(abs(a + b) for a, b in zip(result.u, uf)))
            assert err <= 1e-9 * scale
            # v' - sigma v lies in span(u): solve v' = sigma v + t u over floats
            import numpy as np
            basis_m = np.array([[float(x) for x in v],
                                [float(x) for x in u]]).T
            sol, residuals, *_ = np.linalg.lstsq(basis_m,
                                                 np.array(result.v), rcond=None)
            sigma = sol[0]
            assert abs(abs(sigma) - 1.0) <= 1e-9
            fit = basis_m @ sol
            assert max(abs(fit - np.array(result.v))) <= 1e-9


def test_decompose_rejects_non_null_kernel_by_theorem():
    # a tensor with non-null kernel cannot pass the Cotton-like constructor,
    # so fabricate the error path via decompose's kernel check directly:
    # reconstruct with null u but evaluate against a DIFFERENT inner product
    # under which u is not null and the tensor is not Cotton-like
    t = reconstruct((0, 1, 1), (1, 0, 0), LORENTZ)
    with pytest.raises((NotCottonLikeError, KernelContainsNonNullError)):
        decompose(t, EUCLIDEAN)


def test_decompose_roundtrip_float_mode():
    float_ip = InnerProduct3([[1., 0, 0], [0, 1., 0], [0, 0, -1.]], mode="float")
    u = [3.0, 4.0, 5.0]
    v0 = [4.0 / 5.0, -3.0 / 5.0, 0.0]
    t = reconstruct(u, v0, float_ip)
    result = decompose(t, float_ip)
    assert result.kind == "rank_one_kernel"
    assert result.residual <= 1e-12 * max(abs(t[i][j][k]) for i, j, k
                                          in itertools.product(range(3), repeat=3))


# -- tensor spec files -------------------------------------------------------------------------

def test_load_tensor_spec_roundtrip_document():
    text = """\
inner_product:
- [1, 0, 0]
- [0, 1, 0]
- [0, 0, -1]
tensor:
  2,1,2: 1
  1,2,2: -1
  2,1,3: "-1/2"
  1,2,3: "1/2"
"""
    comps, ip = load_tensor_spec(text)
    assert ip.mode == "exact" and ip.index_q == 1
    assert comps[1][0][1] == 1
    assert comps[1][0][2] == Fraction(-1, 2)
    assert comps[0][0][0] == 0


def test_load_tensor_spec_float_mode_inferred():
    text = """\
inner_product:
- [1.0, 0, 0]
- [0, 1, 0]
- [0, 0, -1]
tensor:
  2,1,2: 0.5
"""
    comps, ip = load_tensor_spec(text)
    assert ip.mode == "float"
    assert comps[1][0][1] == 0.5


@pytest.mark.parametrize("text", [
    "tensor: {}",
    "inner_product: [[1,0],[0,1]]\ntensor: {}",
    "inner_product:\n- [1,0,0]\n- [0,1,0]\n- [0,0,-1]\ntensor:\n  9,1,1: 1\n",
    "inner_product:\n- [1,0,0]\n- [0,1,0]\n- [0,0,-1]\ntensor:\n  a,b: 1\n",
])
def test_load_tensor_spec_errors(text):
    with pytest.raises(SpecFileError):
        load_tensor_spec(text)
