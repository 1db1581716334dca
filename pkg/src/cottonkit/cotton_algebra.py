"""Pointwise algebra of Cotton-like tensors on a 3D pseudo-Euclidean space.

A Cotton-like tensor is a 3x3x3 array satisfying, with respect to an inner
product: antisymmetry in the first two slots, the cyclic identity, and
tracelessness over the first and third slots.  This module classifies such
tensors: kernels, causal characters, null frames, and the rank-one
decomposition C = (u ^ v) (x) u with u null and v unit orthogonal to u.

Square roots force the (u, v) output into floats even for exact inputs, so
the exact path also returns a radical-free certificate: the kernel generator
e1, the unnormalized complement vector e2_raw, and an exact scale with
C = scale * reconstruct(e1, e2_raw) verifiable with zero tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import yaml

from . import linalg
from .errors import (DecompositionError, InconsistentKernelDimError,
                     KernelContainsNonNullError, NotCottonLikeError,
                     NotNullError, PreconditionError, SpecFileError)

SYMMETRY_TOLERANCE = 1e-10
KERNEL_SVD_RELATIVE = 1e-8     # documented: well below the test set's conditioning
RESIDUAL_TOLERANCE = 1e-12
CAUSAL_TOLERANCE = 1e-10

_RANGE3 = (0, 1, 2)


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


class InnerProduct3:
    """Nondegenerate symmetric bilinear form on a 3-dimensional space."""

    def __init__(self, matrix, mode: str | None = None):
        rows = [list(row) for row in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise PreconditionError("inner product must be a 3x3 matrix")
        flat = [x for row in rows for x in row]
        if mode is None:
            mode = "exact" if _is_exact(flat) else "float"
        self.mode = mode
        if mode == "exact":
            self.matrix = [[Fraction(x) for x in row] for row in rows]
            if any(self.matrix[i][j] != self.matrix[j][i] for i in _RANGE3 for j in _RANGE3):
                raise PreconditionError("inner product matrix must be symmetric")
            if linalg.det(self.matrix) == 0:
                raise PreconditionError("inner product matrix is degenerate")
            pos, neg, zero = linalg.signature(self.matrix)
        else:
            self.matrix = [[float(x) for x in row] for row in rows]
            arr = np.array(self.matrix)
            if not np.allclose(arr, arr.T):
                raise PreconditionError("inner product matrix must be symmetric")
            # scale-invariant degeneracy test: determinant against Hadamard bound
            hadamard = float(np.prod(np.linalg.norm(arr, axis=1)))
            if abs(np.linalg.det(arr)) <= 1e-12 * max(hadamard, 1e-300):
                raise PreconditionError("inner product matrix is degenerate")
            eigs = np.linalg.eigvalsh(arr)   # float path only; exact path never solves eigenvalues
            pos = int((eigs > 0).sum())
            neg = int((eigs < 0).sum())
        self.index_q = neg

    def inner(self, u, v):
        return sum(self.matrix[i][j] * u[i] * v[j] for i in _RANGE3 for j in _RANGE3)

    def lower(self, u):
        """Metric-dual covector of u, as a plain 3-sequence."""
        return [sum(self.matrix[i][j] * u[j] for j in _RANGE3) for i in _RANGE3]

    def inverse(self):
        if self.mode == "exact":
            det = linalg.det(self.matrix)
            m = self.matrix
            cof = [[(m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
                     - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
                    for j in _RANGE3] for i in _RANGE3]
            # cofactor expansion transposes to the adjugate; symmetric here
            return [[cof[j][i] / det for j in _RANGE3] for i in _RANGE3]
        return np.linalg.inv(np.array(self.matrix)).tolist()

    def scale(self) -> float:
        return max(1.0, max(abs(float(x)) for row in self.matrix for x in row))

    def __repr__(self):
        return f"InnerProduct3({self.matrix!r}, index_q={self.index_q})"


# -- Cotton-like validation ------------------------------------------------------

@dataclass
class SymmetryReport:
    ok: bool
    residuals: dict
    first_violation: str | None = None
    violation_indices: tuple | None = None


def check_cotton_like(components, ip: InnerProduct3,
                      tolerance: float = SYMMETRY_TOLERANCE) -> SymmetryReport:
    """Check the three Cotton symmetries; exact inputs demand exact zeros."""
    t = components
    exact = ip.mode == "exact"
    tol = 0 if exact else tolerance * max(1.0, _max_abs(t))

    first = None
    where = None
    anti = cyc = trace = 0
    for i, j, k in itertools.product(_RANGE3, repeat=3):
        r = abs(t[i][j][k] + t[j][i][k])
        if r > anti:
            anti = r
        if r > tol and first is None:
            first = "antisymmetry in the first two slots"
            where = (i, j, k)
    for i, j, k in itertools.product(_RANGE3, repeat=3):
        r = abs(t[i][j][k] + t[j][k][i] + t[k][i][j])
        if r > cyc:
            cyc = r
        if r > tol and first is None:
            first = "cyclic identity"
            where = (i, j, k)
    ginv = ip.inverse()
    for j in _RANGE3:
        r = abs(sum(ginv[i][k] * t[i][j][k] for i in _RANGE3 for k in _RANGE3))
        if r > trace:
            trace = r
        if r > tol and first is None:
            first = "trace over the first and third slots"
            where = (j,)
    report = SymmetryReport(
        ok=first is None,
        residuals={"antisymmetry": anti, "cyclic": cyc, "trace": trace},
        first_violation=first,
        violation_indices=where,
    )
    return report


def _max_abs(components) -> float:
    return max(abs(float(components[i][j][k]))
               for i, j, k in itertools.product(_RANGE3, repeat=3))


class CottonLike:
    """Validated Cotton-like tensor; construction rejects symmetry violators."""

    def __init__(self, components, ip: InnerProduct3,
                 tolerance: float = SYMMETRY_TOLERANCE):
        if ip.mode == "exact":
            self.components = [[[Fraction(components[i][j][k]) for k in _RANGE3]
                                for j in _RANGE3] for i in _RANGE3]
        else:
            self.components = [[[float(components[i][j][k]) for k in _RANGE3]
                                for j in _RANGE3] for i in _RANGE3]
        self.ip = ip
        report = check_cotton_like(self.components, ip, tolerance)
        if not report.ok:
            raise NotCottonLikeError(report.first_violation, report.violation_indices)

    def is_zero(self) -> bool:
        return all(self.components[i][j][k] == 0
                   for i, j, k in itertools.product(_RANGE3, repeat=3))

    def __getitem__(self, idx):
        i, j, k = idx
        return self.components[i][j][k]


# -- kernels and causal characters -------------------------------------------------

def kernel(tensor, ip: InnerProduct3) -> list[list]:
    """Basis of {u : C(u, ., .) = 0}; dim 2 for a nonzero tensor is an error."""
    comps = tensor.components if isinstance(tensor, CottonLike) else tensor
    rows = [[comps[i][j][k] for i in _RANGE3]
            for j, k in itertools.product(_RANGE3, repeat=2)]
    if ip.mode == "exact":
        basis = linalg.nullspace([[Fraction(x) for x in row] for row in rows])
    else:
        a = np.array(rows, dtype=float)
        _, sing, vt = np.linalg.svd(a)
        top = sing[0] if len(sing) and sing[0] > 0 else 1.0
        null_rows = [vt[r] for r in range(3)
                     if r >= len(sing) or sing[r] <= KERNEL_SVD_RELATIVE * top]
        basis = [_normalize_sign(list(v)) for v in null_rows]
    nonzero = any(comps[i][j][k] != 0
                  for i, j, k in itertools.product(_RANGE3, repeat=3))
    if nonzero and len(basis) == 2:
        raise InconsistentKernelDimError(
            "kernel of a nonzero Cotton-like tensor cannot be 2-dimensional; "
            "input or solver is inconsistent")
    return basis


def _normalize_sign(vec):
    lead = next((x for x in vec if abs(x) > 1e-14), None)
    if lead is not None and lead < 0:
        return [-x for x in vec]
    return list(vec)


def causal_character(w, ip: InnerProduct3,
                     tolerance: float = CAUSAL_TOLERANCE) -> str:
    """'spacelike', 'null', or 'timelike' from the sign of <w, w>."""
    if all(x == 0 for x in w):
        raise PreconditionError("the zero vector has no causal character")
    q = ip.inner(w, w)
    if ip.mode == "exact":
        q = Fraction(q)
        if q == 0:
            return "null"
        return "spacelike" if q > 0 else "timelike"
    scale = ip.scale() * max(abs(float(x)) for x in w) ** 2
    if abs(q) <= tolerance * max(1.0, scale):
        return "null"
    return "spacelike" if q > 0 else "timelike"


# -- null frames ----------------------------------------------------------------------

@dataclass
class NullFrame:
    """Basis (e1, e2, e3) with <e1,e2>=<e2,e3>=<e3,e3>=0 and
    <e1,e3>=<e2,e2>=epsilon, epsilon = (-1)^(q+1).

    e2 requires a square root, so the frame proper is float-valued; for exact
    inner products the radical-free data (e1, e2_raw, e3, beta=<e2_raw,e2_raw>)
    and their exact Gram matrix come along as a certificate.
    """
    e1: list[float]
    e2: list[float]
    e3: list[float]
    epsilon: int
    e1_exact: list | None = None
    e2_raw: list | None = None
    e3_exact: list | None = None
    beta: object | None = None
    gram_exact: list | None = None

    def vectors(self):
        return [self.e1, self.e2, self.e3]


def null_frame(ip: InnerProduct3, e1, w_hint=None) -> NullFrame:
    """Complete a null vector to a frame satisfying the five pairing relations.

    Construction: pick w with <e1,w> != 0 (exists by nondegeneracy), make
    e3 = w/<e1,w> - (<w,w>/(2<e1,w>^2)) e1 null with <e1,e3> = 1, flip its
    sign when the index is 2, then span the orthogonal complement of
    {e1, e3} with e2 and normalize.
    """
    if ip.index_q not in (1, 2):
        raise PreconditionError(
            f"null frames need an indefinite inner product of index 1 or 2, "
            f"got index {ip.index_q}")
    exact = ip.mode == "exact"
    if exact:
        e1 = [Fraction(x) for x in e1]
    else:
        e1 = [float(x) for x in e1]
    if all(x == 0 for x in e1):
        raise NotNullError("e1 must be nonzero")
    if causal_character(e1, ip) != "null":
        raise NotNullError(f"e1 is not null: <e1,e1> = {ip.inner(e1, e1)}")

    candidates = []
    if w_hint is not None:
        candidates.append(list(w_hint))
    candidates.extend([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    w = None
    pairing = None
    for cand in candidates:
        cand = [Fraction(x) for x in cand] if exact else [float(x) for x in cand]
        p = ip.inner(e1, cand)
        good = p != 0 if exact else abs(p) > 1e-12 * ip.scale() * max(
            abs(float(x)) for x in e1)
        if good:
            w, pairing = cand, p
            break
    if w is None:
        raise PreconditionError("no vector pairs nontrivially with e1; "
                                "inner product is degenerate")

    ww = ip.inner(w, w)
    half = Fraction(1, 2) if exact else 0.5
    coeff = half * ww / (pairing * pairing)
    e3 = [w[i] / pairing - coeff * e1[i] for i in _RANGE3]
    epsilon = 1 if ip.index_q == 1 else -1
    if epsilon == -1:
        e3 = [-x for x in e3]

    # orthogonal complement of span{e1, e3} is one-dimensional
    if exact:
        rows = [ip.lower(e1), ip.lower(e3)]
        basis = linalg.nullspace([[Fraction(x) for x in row] for row in rows])
        if len(basis) != 1:
            raise PreconditionError("complement of the null plane is not a line")
        e2_raw = basis[0]
        beta = ip.inner(e2_raw, e2_raw)
        if (beta > 0) != (epsilon > 0):
            raise DecompositionError(
                "complement norm sign disagrees with the index; "
                "inner product data is inconsistent")
        scale = 1.0 / math.sqrt(abs(float(beta)))
        e2 = [float(x) * scale for x in e2_raw]
        gram = [[ip.inner(u, v) for v in (e1, e2_raw, e3)] for u in (e1, e2_raw, e3)]
        return NullFrame(
            e1=[float(x) for x in e1], e2=e2, e3=[float(x) for x in e3],
            epsilon=epsilon, e1_exact=e1, e2_raw=e2_raw, e3_exact=e3,
            beta=beta, gram_exact=gram)

    rows = np.array([ip.lower(e1), ip.lower(e3)], dtype=float)
    _, sing, vt = np.linalg.svd(rows)
    e2_raw = _normalize_sign(list(vt[2]))
    beta = ip.inner(e2_raw, e2_raw)
    if (beta > 0) != (epsilon > 0):
        raise DecompositionError("complement norm sign disagrees with the index")
    scale = 1.0 / math.sqrt(abs(beta))
    e2 = [x * scale for x in e2_raw]
    return NullFrame(e1=list(e1), e2=e2, e3=list(e3), epsilon=epsilon,
                     e2_raw=e2_raw, beta=beta)


# -- reconstruction and decomposition ---------------------------------------------------

def reconstruct(u, v, ip: InnerProduct3) -> list:
    """Components of (u ^ v) (x) u, metric-lowered: any u, v accepted.

    The result is Cotton-like whenever <u,u> = 0 and <u,v> = 0.
    """
    ub = ip.lower(u)
    vb = ip.lower(v)
    return [[[(ub[i] * vb[j] - vb[i] * ub[j]) * ub[k] for k in _RANGE3]
             for j in _RANGE3] for i in _RANGE3]


@dataclass
class ExactCertificate:
    """Radical-free witness: tensor == scale * reconstruct(e1, e2_raw)."""
    e1: list
    e2_raw: list
    e3: list
    beta: Fraction
    a_raw: Fraction
    scale: Fraction
    epsilon: int
    gram: list
    residual: Fraction


@dataclass
class CottonDecomposition:
    kind: str                      # "zero" | "trivial_kernel" | "rank_one_kernel"
    kernel_basis: list = field(default_factory=list)
    kernel_causal: list = field(default_factory=list)
    u: list | None = None
    v: list | None = None
    a: float | None = None
    residual: float | None = None
    certificate: ExactCertificate | None = None


def _frame_components(comps, basis_vectors):
    return [[[sum(comps[i][j][k]
                  * basis_vectors[a][i] * basis_vectors[b][j] * basis_vectors[c][k]
                  for i in _RANGE3 for j in _RANGE3 for k in _RANGE3)
              for c in _RANGE3] for b in _RANGE3] for a in _RANGE3]


def decompose(tensor, ip: InnerProduct3,
              tolerance: float = RESIDUAL_TOLERANCE) -> CottonDecomposition:
    """Classify a Cotton-like tensor: zero, trivial kernel, or rank-one kernel.

    In the rank-one case returns u (null, canonical sign), v (unit, orthogonal
    to u) with tensor == reconstruct(u, v); exact inputs also get the
    radical-free certificate.
    """
    if not isinstance(tensor, CottonLike):
        tensor = CottonLike(tensor, ip)
    comps = tensor.components
    exact = ip.mode == "exact"

    if tensor.is_zero():
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        basis = [[one if i == j else zero for j in _RANGE3] for i in _RANGE3]
        return CottonDecomposition(kind="zero", kernel_basis=basis)

    basis = kernel(comps, ip)
    if len(basis) == 0:
        return CottonDecomposition(kind="trivial_kernel")
    if len(basis) != 1:
        raise InconsistentKernelDimError(
            f"nonzero tensor with kernel dimension {len(basis)}")
    generator = basis[0]
    if causal_character(generator, ip) != "null":
        raise KernelContainsNonNullError(
            f"kernel generator {generator} is not null; by the kernel-nullity "
            "theorem the tensor would have to vanish")

    frame = null_frame(ip, generator)
    if exact:
        fvecs = [frame.e1_exact, frame.e2_raw, frame.e3_exact]
    else:
        fvecs = [frame.e1, frame.e2_raw, frame.e3]
    f = _frame_components(comps, fvecs)

    # only components with index set {2,3} (0-based {1,2}) and distinct first
    # slots may survive; everything else must vanish, including F[1][2][1]
    scale_ref = max(_max_abs(f), 1.0)
    tol = 0 if exact else 1e-9 * scale_ref
    for a, b, c in itertools.product(_RANGE3, repeat=3):
        allowed = {a, b, c} == {1, 2} and a != b and (a, b, c) != (1, 2, 1) \
            and (a, b, c) != (2, 1, 1)
        # F[1][2][1] = -F[2][1][1] is the traced-away component
        if allowed:
            continue
        if abs(f[a][b][c]) > tol:
            raise DecompositionError(
                f"frame component {(a, b, c)} should vanish but is {f[a][b][c]}")

    a_raw = f[2][1][2]
    if (exact and a_raw == 0) or (not exact and abs(a_raw) <= tol):
        raise DecompositionError("surviving frame component vanished; "
                                 "tensor should then be zero")

    beta = frame.beta
    scale = a_raw / beta
    recon_raw = reconstruct(fvecs[0], fvecs[1], ip)
    if exact:
        residual_exact = max(abs(comps[i][j][k] - scale * recon_raw[i][j][k])
                             for i, j, k in itertools.product(_RANGE3, repeat=3))
    else:
        residual_exact = None

    abs_beta = abs(float(beta))
    a_value = float(a_raw) / math.sqrt(abs_beta)
    sign_a = 1.0 if a_value > 0 else -1.0
    u = [math.sqrt(abs(a_value)) * float(x) for x in fvecs[0]]
    v = [frame.epsilon * sign_a * x for x in frame.e2]
    recon_float = reconstruct(u, v, InnerProduct3(
        [[float(x) for x in row] for row in ip.matrix], mode="float"))
    float_scale = max(_max_abs(comps), 1.0)
    residual = max(abs(float(comps[i][j][k]) - recon_float[i][j][k])
                   for i, j, k in itertools.product(_RANGE3, repeat=3))
    if not exact and residual > tolerance * float_scale:
        raise DecompositionError(
            f"reconstruction residual {residual} exceeds tolerance")

    certificate = None
    if exact:
        if residual_exact != 0:
            raise DecompositionError(
                f"exact reconstruction residual is {residual_exact}, expected 0")
        certificate = ExactCertificate(
            e1=fvecs[0], e2_raw=fvecs[1], e3=fvecs[2], beta=beta,
            a_raw=a_raw, scale=scale, epsilon=frame.epsilon,
            gram=frame.gram_exact, residual=residual_exact)

    causal = [causal_character(generator, ip)]
    return CottonDecomposition(
        kind="rank_one_kernel", kernel_basis=[generator], kernel_causal=causal,
        u=u, v=v, a=a_value, residual=residual, certificate=certificate)


# -- the linear space of Cotton-like tensors ----------------------------------------

def cotton_like_space_basis(ip: InnerProduct3) -> list[CottonLike]:
    """Exact basis of the solution space of the three symmetry families.

    The dimension is whatever the solver finds (5 for every nondegenerate
    inner product in practice); callers should assert rather than assume.
    """
    if ip.mode != "exact":
        raise PreconditionError("the basis is computed exactly; "
                                "use an exact inner product")
    def flat(i, j, k):
        return 9 * i + 3 * j + k

    rows: list[list[Fraction]] = []
    for i, j, k in itertools.product(_RANGE3, repeat=3):
        if i <= j:
            row = [Fraction(0)] * 27
            row[flat(i, j, k)] += 1
            row[flat(j, i, k)] += 1
            rows.append(row)
    for i, j, k in itertools.product(_RANGE3, repeat=3):
        row = [Fraction(0)] * 27
        row[flat(i, j, k)] += 1
        row[flat(j, k, i)] += 1
        row[flat(k, i, j)] += 1
        rows.append(row)
    ginv = ip.inverse()
    for j in _RANGE3:
        row = [Fraction(0)] * 27
        for i, k in itertools.product(_RANGE3, repeat=2):
            row[flat(i, j, k)] += ginv[i][k]
        rows.append(row)

    basis_vectors = linalg.nullspace(rows)
    out = []
    for vec in basis_vectors:
        comps = [[[vec[flat(i, j, k)] for k in _RANGE3]
                  for j in _RANGE3] for i in _RANGE3]
        out.append(CottonLike(comps, ip))
    return out


def random_cotton_like(rng, basis: list[CottonLike], ip: InnerProduct3,
                       coefficient_bound: int = 9) -> CottonLike:
    """Integer-coefficient random combination of basis tensors."""
    while True:
        coeffs = [rng.randint(-coefficient_bound, coefficient_bound)
                  for _ in basis]
        if any(coeffs):
            break
    comps = [[[sum(c * b.components[i][j][k] for c, b in zip(coeffs, basis))
               for k in _RANGE3] for j in _RANGE3] for i in _RANGE3]
    return CottonLike(comps, ip)


# -- tensor spec files ---------------------------------------------------------------
#
# One YAML document per pointwise tensor:
#
#   inner_product:
#     - [1, 0, 0]
#     - [0, 1, 0]
#     - [0, 0, -1]
#   tensor:
#     1,3,1: 3        # 1-based indices; unlisted entries are 0
#     3,1,1: -3
#   mode: exact       # optional; float values force float mode

def _parse_number(text):
    if isinstance(text, bool):
        raise SpecFileError(f"bad numeric entry {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise SpecFileError(f"bad numeric entry {text!r}") from None


def load_tensor_spec(text: str) -> tuple[list, InnerProduct3]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecFileError(f"not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecFileError("tensor spec must be a mapping")
    try:
        ip_rows = doc["inner_product"]
        entries = doc["tensor"]
    except KeyError as exc:
        raise SpecFileError(f"missing required field {exc.args[0]!r}") from None
    if (not isinstance(ip_rows, list) or len(ip_rows) != 3
            or any(not isinstance(r, list) or len(r) != 3 for r in ip_rows)):
        raise SpecFileError("inner_product must be a 3x3 matrix")
    if not isinstance(entries, dict):
        raise SpecFileError("tensor must map '1-based i,j,k' labels to numbers")

    ip_values = [[_parse_number(x) for x in row] for row in ip_rows]
    comps = [[[Fraction(0) for _ in _RANGE3] for _ in _RANGE3] for _ in _RANGE3]
    floats = any(isinstance(x, float) for row in ip_values for x in row)
    for key, value in entries.items():
        parts = [p.strip() for p in str(key).split(",")]
        if len(parts) != 3:
            raise SpecFileError(f"tensor key {key!r} must be 'i,j,k'")
        try:
            idx = [int(p) - 1 for p in parts]
        except ValueError:
            raise SpecFileError(f"tensor key {key!r} must be 'i,j,k'") from None
        if any(not 0 <= p <= 2 for p in idx):
            raise SpecFileError(f"tensor key {key!r} out of range 1..3")
        number = _parse_number(value)
        floats = floats or isinstance(number, float)
        comps[idx[0]][idx[1]][idx[2]] = number

    mode = str(doc.get("mode", "float" if floats else "exact"))
    if mode not in ("exact", "float"):
        raise SpecFileError(f"mode must be 'exact' or 'float', got {mode!r}")
    if mode == "exact" and floats:
        raise SpecFileError("exact mode requires integer or 'p/q' entries")
    if mode == "float":
        comps = [[[float(comps[i][j][k]) for k in _RANGE3]
                  for j in _RANGE3] for i in _RANGE3]
        ip_values = [[float(x) for x in row] for row in ip_values]
    return comps, InnerProduct3(ip_values, mode=mode)
