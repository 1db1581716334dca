"""Pointwise curvature pipeline.

Everything is computed through jets of the metric at a single point, never
as global symbolic fields: exactness comes from rational jet arithmetic plus
random-point identity testing, not from a computer-algebra system.

Index conventions (pinned by reproducing the model metric's curvature and the
round sphere's positive scalar curvature):

    Gamma[k][i][j]   = Gamma^k_ij = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)
    Ric[i][j]        = d_k Gamma^k_ij - d_j Gamma^k_ik
                       + Gamma^k_kl Gamma^l_ij - Gamma^k_jl Gamma^l_ik
    Riem[i][j][k][l] = g(R(e_i, e_j) e_k, e_l)
    (nabla T)[i][j1..jk] = d_i T_{j1..jk} - sum_m Gamma^l_{i jm} T_{..l..}
    C[i][j][k]       = (nabla P)[i][j][k] - (nabla P)[j][i][k]

Jet-order accounting: each derivative consumes one order, so from order-4
metric jets the pipeline yields Gamma at order 3, Ricci/Schouten at 2, Cotton
at 1, and nabla-Cotton at 0.  Requesting more orders than a chart's component
jets carry raises InsufficientJetOrderError rather than truncating silently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chart import MetricChart, inverse_metric_jet_at, metric_jets_at
from .errors import PreconditionError
from .jet import Jet

DIV_IDENTITY_TOLERANCE = 1e-9

_HALF = Fraction(1, 2)


@dataclass
class PointTensor:
    """Fully indexed tensor at a point, components as jets.

    `covariant[m]` is True when slot m is a lower index.  Components are
    nested lists indexed in slot order.
    """
    coords: tuple[str, ...]
    covariant: tuple[bool, ...]
    components: list
    basepoint: tuple
    mode: str
    jet_order: int

    @property
    def rank(self) -> int:
        return len(self.covariant)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def component(self, *idx) -> Jet:
        node = self.components
        for i in idx:
            node = node[i]
        return node

    def value(self, *idx):
        return self.component(*idx).value()

    def values(self):
        """Nested lists of the components' values at the basepoint."""
        def strip(node):
            if isinstance(node, Jet):
                return node.value()
            return [strip(child) for child in node]
        return strip(self.components)

    def indices(self):
        return itertools.product(range(self.dim), repeat=self.rank)

    def max_abs_value(self):
        return max(abs(self.component(*idx).value()) for idx in self.indices())

    def is_zero_values(self) -> bool:
        return all(self.component(*idx).value() == 0 for idx in self.indices())


def _nested(dim: int, rank: int):
    if rank == 0:
        return None
    if rank == 1:
        return [None] * dim
    return [_nested(dim, rank - 1) for _ in range(dim)]


def _sum(jets) -> Jet:
    total = None
    for jet in jets:
        total = jet if total is None else total + jet
    if total is None:
        raise ValueError("empty sum")
    return total


def _truncate_matrix(rows: list[list[Jet]], order: int) -> list[list[Jet]]:
    return [[entry.truncated(order) for entry in row] for row in rows]


# -- connection ---------------------------------------------------------------

def christoffel_at(chart: MetricChart, point: Sequence, order: int = 3) -> PointTensor:
    """Levi-Civita connection coefficients Gamma^k_ij with order-`order` jets."""
    point = chart.check_point(point)
    n = chart.dim
    key = ("christoffel", point, order)
    comps = chart._cache.get(key)
    if comps is None:
        g = metric_jets_at(chart, point, order + 1)
        ginv = _truncate_matrix(inverse_metric_jet_at(chart, point, order + 1), order)
        dg = [[[g[i][j].derivative(k) for k in range(n)]
               for j in range(n)] for i in range(n)]
        comps = _nested(n, 3)
        for k in range(n):
            for i in range(n):
                for j in range(i, n):
                    gamma = _sum(
                        ginv[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
                        for l in range(n)
                    ).scaled(_HALF)
                    comps[k][i][j] = gamma
                    comps[k][j][i] = gamma
        chart._cache[key] = comps
    return PointTensor(chart.coords, (False, True, True), comps, point,
                       chart.mode, order)


# -- curvature tensors ----------------------------------------------------------

def ricci_at(chart: MetricChart, point: Sequence, order: int = 2) -> PointTensor:
    """Ricci tensor, sign fixed so round spheres have positive scalar curvature."""
    point = chart.check_point(point)
    n = chart.dim
    key = ("ricci", point, order)
    comps = chart._cache.get(key)
    if comps is None:
        gamma = christoffel_at(chart, point, order + 1).components
        # Gamma^k_ik, one jet per i
        trace = [_sum(gamma[k][i][k] for k in range(n)) for i in range(n)]
        comps = _nested(n, 2)
        for i in range(n):
            for j in range(i, n):
                total = _sum(gamma[k][i][j].derivative(k) for k in range(n))
                total = total - trace[i].derivative(j)
                quad = _sum(
                    trace[l].truncated(order) * gamma[l][i][j].truncated(order)
                    - _sum(gamma[k][j][l].truncated(order)
                           * gamma[l][i][k].truncated(order) for k in range(n))
                    for l in range(n)
                )
                comps[i][j] = total + quad
                comps[j][i] = comps[i][j]
        chart._cache[key] = comps
    return PointTensor(chart.coords, (True, True), comps, point, chart.mode, order)


def riemann_mixed_at(chart: MetricChart, point: Sequence, order: int = 2) -> PointTensor:
    """R^rho_{sigma mu nu}, indexed [rho][sigma][mu][nu]."""
    point = chart.check_point(point)
    n = chart.dim
    gamma = christoffel_at(chart, point, order + 1).components
    comps = _nested(n, 4)
    for rho in range(n):
        for sigma in range(n):
            for mu in range(n):
                for nu in range(n):
                    total = gamma[rho][nu][sigma].derivative(mu) \
                        - gamma[rho][mu][sigma].derivative(nu)
                    quad = _sum(
                        gamma[rho][mu][lam].truncated(order)
                        * gamma[lam][nu][sigma].truncated(order)
                        - gamma[rho][nu][lam].truncated(order)
                        * gamma[lam][mu][sigma].truncated(order)
                        for lam in range(n)
                    )
                    comps[rho][sigma][mu][nu] = total + quad
    return PointTensor(chart.coords, (False, True, True, True), comps, point,
                       chart.mode, order)


def riemann_cov_at(chart: MetricChart, point: Sequence, order: int = 2) -> PointTensor:
    """Fully covariant Riemann tensor, Riem[i][j][k][l] = g(R(e_i,e_j)e_k, e_l)."""
    point = chart.check_point(point)
    n = chart.dim
    mixed = riemann_mixed_at(chart, point, order).components
    g = metric_jets_at(chart, point, order)
    comps = _nested(n, 4)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    comps[i][j][k][l] = _sum(
                        g[l][rho] * mixed[rho][k][i][j] for rho in range(n))
    return PointTensor(chart.coords, (True,) * 4, comps, point, chart.mode, order)


def scalar_curvature_at(chart: MetricChart, point: Sequence, order: int = 2) -> Jet:
    """Scalar curvature s = g^{ij} R_ij as a jet."""
    point = chart.check_point(point)
    n = chart.dim
    ric = ricci_at(chart, point, order).components
    ginv = inverse_metric_jet_at(chart, point, order)
    return _sum(ginv[i][j] * ric[i][j] for i in range(n) for j in range(n))


def schouten_at(chart: MetricChart, point: Sequence, order: int = 2) -> PointTensor:
    """Schouten tensor P = Ric - s/(2(n-1)) g."""
    point = chart.check_point(point)
    n = chart.dim
    if n < 2:
        raise PreconditionError("Schouten tensor needs dimension >= 2")
    ric = ricci_at(chart, point, order)
    s = scalar_curvature_at(chart, point, order)
    g = metric_jets_at(chart, point, order)
    factor = Fraction(1, 2 * (n - 1))
    correction = s.scaled(factor)
    comps = _nested(n, 2)
    for i in range(n):
        for j in range(i, n):
            entry = ric.components[i][j] - correction * g[i][j]
            comps[i][j] = entry
            comps[j][i] = entry
    return PointTensor(chart.coords, (True, True), comps, point, chart.mode, order)


# -- covariant derivative --------------------------------------------------------

def covariant_derivative_at(chart: MetricChart, point: Sequence,
                            tensor: PointTensor) -> PointTensor:
    """(nabla T)_{i j1..jk} for a fully covariant T; consumes one jet order."""
    if not all(tensor.covariant):
        raise PreconditionError(
            "covariant derivative implemented for fully covariant tensors")
    point = chart.check_point(point)
    n = chart.dim
    out_order = tensor.jet_order - 1
    if out_order < 0:
        raise PreconditionError(
            "input tensor carries order-0 jets; one more order is required")
    gamma = christoffel_at(chart, point, out_order).components
    rank = tensor.rank
    comps = _nested(n, rank + 1)
    for idx in itertools.product(range(n), repeat=rank + 1):
        i, rest = idx[0], idx[1:]
        total = tensor.component(*rest).derivative(i)
        for m in range(rank):
            for l in range(n):
                gamma_jet = gamma[l][i][rest[m]]
                replaced = rest[:m] + (l,) + rest[m + 1:]
                total = total - gamma_jet * tensor.component(*replaced).truncated(out_order)
        node = comps
        for v in idx[:-1]:
            node = node[v]
        node[idx[-1]] = total
    return PointTensor(tensor.coords, (True,) + tensor.covariant, comps, point,
                       tensor.mode, out_order)


def metric_tensor_at(chart: MetricChart, point: Sequence, order: int) -> PointTensor:
    point = chart.check_point(point)
    g = metric_jets_at(chart, point, order)
    return PointTensor(chart.coords, (True, True), g, point, chart.mode, order)


# -- Cotton tensor and its derivative ---------------------------------------------

def cotton_at(chart: MetricChart, point: Sequence, order: int = 1) -> PointTensor:
    """Cotton tensor C_ijk, antisymmetric in (i, j) by construction."""
    point = chart.check_point(point)
    n = chart.dim
    schouten = schouten_at(chart, point, order + 1)
    nabla_p = covariant_derivative_at(chart, point, schouten).components
    comps = _nested(n, 3)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                comps[i][j][k] = nabla_p[i][j][k] - nabla_p[j][i][k]
    return PointTensor(chart.coords, (True,) * 3, comps, point, chart.mode, order)


def nabla_cotton_at(chart: MetricChart, point: Sequence, order: int = 0) -> PointTensor:
    """(nabla C)_{l i j k}; identically zero exactly when Cotton is parallel."""
    cotton = cotton_at(chart, point, order + 1)
    return covariant_derivative_at(chart, point, cotton)


# -- Weyl tensor -------------------------------------------------------------------

def weyl_at(chart: MetricChart, point: Sequence, order: int = 0) -> PointTensor:
    """Weyl tensor in the covariant Riemann layout; identically 0 in dim 3.

    W = Riem - 1/(n-2) * Q(P, g) with the Kulkarni-Nomizu-style completion
    Q(A,B)_{ijkl} = A_jk B_il + A_il B_jk - A_ik B_jl - A_jl B_ik, the sign
    matching Riem[i][j][k][l] = g(R(e_i,e_j)e_k, e_l).  The 1/(n-2) factor is
    1 in dimension 3; in higher dimensions it makes W the trace-free
    conformal curvature.
    """
    point = chart.check_point(point)
    n = chart.dim
    if n < 3:
        raise PreconditionError("Weyl tensor needs dimension >= 3")
    riem = riemann_cov_at(chart, point, order).components
    p = schouten_at(chart, point, order).components
    g = metric_jets_at(chart, point, order)
    factor = Fraction(1, n - 2)
    comps = _nested(n, 4)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    q = (p[j][k] * g[i][l] + p[i][l] * g[j][k]
                         - p[i][k] * g[j][l] - p[j][l] * g[i][k])
                    comps[i][j][k][l] = riem[i][j][k][l] - q.scaled(factor)
    return PointTensor(chart.coords, (True,) * 4, comps, point, chart.mode, order)


# -- identity checks -----------------------------------------------------------------

def inverse_metric_values_at(chart: MetricChart, point: Sequence) -> list[list]:
    inv = inverse_metric_jet_at(chart, point, 0)
    return [[entry.value() for entry in row] for row in inv]


def cotton_symmetry_residuals(cotton_values, inverse_values) -> dict:
    """Max-abs residuals of the three Cotton symmetries on plain components.

    Keys: "antisymmetry" (C_ijk + C_jik), "cyclic" (sum over cyclic
    permutations of all three slots), "trace" (g^{ik} C_ijk over first and
    third slots).
    """
    n = len(cotton_values)
    rng = range(n)
    anti = max(abs(cotton_values[i][j][k] + cotton_values[j][i][k])
               for i in rng for j in rng for k in rng)
    cyc = max(abs(cotton_values[i][j][k] + cotton_values[j][k][i]
                  + cotton_values[k][i][j])
              for i in rng for j in rng for k in rng)
    trace = max(abs(sum(inverse_values[i][k] * cotton_values[i][j][k]
                        for i in rng for k in rng))
                for j in rng)
    return {"antisymmetry": anti, "cyclic": cyc, "trace": trace}


def first_bianchi_residual(riemann_values) -> object:
    """Max-abs of Riem_ijkl + Riem_jkil + Riem_kijl."""
    n = len(riemann_values)
    rng = range(n)
    return max(abs(riemann_values[i][j][k][l] + riemann_values[j][k][i][l]
                   + riemann_values[k][i][j][l])
               for i in rng for j in rng for k in rng for l in rng)


def div_schouten_check(chart: MetricChart, point: Sequence,
                       tolerance: float = DIV_IDENTITY_TOLERANCE):
    """Verify div P = d(tr_g P) at the point.

    Returns (holds, residual).  Exact mode demands residual exactly zero;
    float mode compares against `tolerance`.
    """
    point = chart.check_point(point)
    n = chart.dim
    schouten = schouten_at(chart, point, 1)
    nabla_p = covariant_derivative_at(chart, point, schouten).components
    ginv = inverse_metric_jet_at(chart, point, 1)
    ginv_values = [[entry.value() for entry in row] for row in ginv]
    trace_jet = _sum(ginv[i][j] * schouten.components[i][j]
                     for i in range(n) for j in range(n))
    residual = None
    for k in range(n):
        lhs = sum(ginv_values[i][j] * nabla_p[i][j][k].value()
                  for i in range(n) for j in range(n))
        unit = tuple(1 if m == k else 0 for m in range(n))
        rhs = trace_jet.coefficient(unit)
        delta = abs(lhs - rhs)
        residual = delta if residual is None else max(residual, delta)
    holds = residual == 0 if chart.mode == "exact" else residual <= tolerance
    return holds, residual
