"""Connection and curvature kernel.

Everything here is a pure function of (spec, point).  Metric derivatives
come from exact expression trees evaluated pointwise; the tensor algebra
on top is plain dense numpy (dimensions in this engine are small, so
clarity beats symmetry-compressed storage).

Sign conventions, pinned once for the whole engine:

* curvature operator  R(U,V)W = \\nabla_U \\nabla_V W - \\nabla_V \\nabla_U W
  - \\nabla_[U,V] W
* lowered tensor      R[i,j,k,l] = g(R(e_i,e_j) e_l, e_k), which satisfies
  R_ijkl = -R_jikl = -R_ijlk = R_klij and the cyclic first-index identity
* sectional curvature K(plane) = g(R(u,v)v, u) / Q with
  Q = g(u,u)g(v,v) - g(u,v)^2

Under this pairing the round 2-sphere has K = +1; the gate test in the
suite holds the whole triple (sphere, Lorentz Hopf sphere, Hessian
identity) to a single convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .expr import Expr
from .manifold import (
    ManifoldSpec,
    TangentPlane,
    TangentVector,
    CausalCharacter,
    causal_character,
    riem_norm_sq,
    DegenerateMetricError,
    DEGENERACY_TOL,
)

# |Q| at or below this (Riemannianized) threshold routes to the
# degenerate-plane error; callers then use the null sectional curvature.
PLANE_Q_TOL = 1e-9
SYMMETRY_TOL = 1e-8


class DegeneratePlaneError(ValueError):
    """Plane discriminant too small for ordinary sectional curvature."""


class NullCurvatureInputError(ValueError):
    """Inputs violate the degenerate-plane preconditions."""


@dataclass(frozen=True)
class PointGeometry:
    """Evaluated metric and curvature data at one point."""

    point: np.ndarray
    metric: np.ndarray          # g_ij
    inverse: np.ndarray         # g^ij
    christoffel: np.ndarray     # gamma[k,i,j] = Gamma^k_ij
    riemann_up: np.ndarray      # up[a,i,j,k] = a-component of R(e_i,e_j) e_k
    riemann: np.ndarray         # lowered, R[i,j,k,l] = g(R(e_i,e_j)e_l, e_k)
    ricci: np.ndarray
    scalar: float


def _metric_or_raise(M: ManifoldSpec, p) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    g, dg, ddg = M.metric_derivs(p)
    scale = max(float(np.max(np.abs(g))), 1e-300)
    det = float(np.linalg.det(g))
    if abs(det) <= DEGENERACY_TOL * scale ** M.dim:
        raise DegenerateMetricError(f"metric degenerate at {np.asarray(p).tolist()}")
    return g, np.linalg.inv(g), dg, ddg


def christoffel_at(M: ManifoldSpec, p) -> np.ndarray:
    """Gamma^k_ij = g^kl (d_i g_jl + d_j g_il - d_l g_ij) / 2."""
    g, ginv, dg, _ = _metric_or_raise(M, p)
    # term[i,j,l] = d_i g_jl + d_j g_il - d_l g_ij
    term = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("al,ijl->aij", ginv, term)


def point_geometry(M: ManifoldSpec, p) -> PointGeometry:
    """Assemble connection and curvature tensors at one point."""
    p = M.wrap_point(p)
    g, ginv, dg, ddg = _metric_or_raise(M, p)
    m = M.dim

    # dg[k,i,j] = d_k g_ij ; ddg[l,k,i,j] = d_l d_k g_ij
    # term[i,j,l] = d_i g_jl + d_j g_il - d_l g_ij
    term = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    gamma = 0.5 * np.einsum("al,ijl->aij", ginv, term)

    dginv = -np.einsum("ac,bcd,dl->bal", ginv, dg, ginv)               # d_b g^al
    # dterm[b,i,j,l] = d_b term[i,j,l]
    dterm = ddg + ddg.transpose(0, 2, 1, 3) - ddg.transpose(0, 2, 3, 1)
    dgamma = 0.5 * (np.einsum("bal,ijl->baij", dginv, term)
                    + np.einsum("al,bijl->baij", ginv, dterm))         # d_b Gamma^a_ij

    # up[a,i,j,k]: a-component of R(e_i,e_j) e_k
    up = (np.einsum("iajk->aijk", dgamma)
          - np.einsum("jaik->aijk", dgamma)
          + np.einsum("aim,mjk->aijk", gamma, gamma)
          - np.einsum("ajm,mik->aijk", gamma, gamma))

    lowered = np.einsum("km,mijl->ijkl", g, up)
    ricci = np.einsum("mmjk->jk", up)
    scalar = float(np.einsum("jk,jk->", ginv, ricci))
    return PointGeometry(point=p, metric=g, inverse=ginv, christoffel=gamma,
                         riemann_up=up, riemann=lowered, ricci=ricci, scalar=scalar)


def riemann_at(M: ManifoldSpec, p) -> np.ndarray:
    """Lowered curvature tensor R[i,j,k,l] = g(R(e_i,e_j)e_l, e_k)."""
    return point_geometry(M, p).riemann


def ricci_at(M: ManifoldSpec, p) -> tuple[np.ndarray, float]:
    geo = point_geometry(M, p)
    return geo.ricci, geo.scalar


def sectional_numerator(geo: PointGeometry, u: np.ndarray, v: np.ndarray) -> float:
    """g(R(u,v)v, u), the curvature pairing of a spanning pair."""
    return float(np.einsum("ijkl,i,j,k,l->", geo.riemann, u, v, u, v))


def sectional_curvature(M: ManifoldSpec, pi: TangentPlane,
                        geo: PointGeometry | None = None) -> float:
    """K(plane) = g(R(u,v)v, u)/Q; basis independent, defined only away
    from degenerate planes (use the null sectional curvature there)."""
    if geo is None:
        geo = point_geometry(M, pi.point)
    g = geo.metric
    u, v = pi.u, pi.v
    guu, gvv, guv = float(u @ g @ u), float(v @ g @ v), float(u @ g @ v)
    q = guu * gvv - guv * guv
    nu, nv = riem_norm_sq(g, u), riem_norm_sq(g, v)
    if nu == 0.0 or nv == 0.0 or abs(q) <= PLANE_Q_TOL * nu * nv:
        raise DegeneratePlaneError(
            f"plane discriminant Q={q:e} is degenerate at {pi.point.tolist()}; "
            "use null_sectional_curvature")
    return sectional_numerator(geo, u, v) / q


def null_sectional_curvature(M: ManifoldSpec, p, x: TangentVector, v: TangentVector,
                             geo: PointGeometry | None = None) -> float:
    """Curvature of the degenerate plane span{v, x} with respect to the
    lightlike vector x:  g(R(v,x)x, v) / g(v,v).

    Independent of which non-lightlike v in the plane is used and of the
    sign of x.
    """
    p = M.wrap_point(p)
    if geo is None:
        geo = point_geometry(M, p)
    g = geo.metric
    xc, vc = x.components, v.components
    if causal_character(M, TangentVector(p, xc)) is not CausalCharacter.LIGHTLIKE:
        raise NullCurvatureInputError("reference vector is not lightlike")
    cv = causal_character(M, TangentVector(p, vc))
    if cv in (CausalCharacter.LIGHTLIKE, CausalCharacter.ZERO):
        raise NullCurvatureInputError("spanning vector must be non-lightlike")
    nx, nv = riem_norm_sq(g, xc), riem_norm_sq(g, vc)
    gram = np.array([[np.dot(xc, xc), np.dot(xc, vc)], [np.dot(xc, vc), np.dot(vc, vc)]])
    if np.linalg.det(gram) <= 1e-12 * np.dot(xc, xc) * np.dot(vc, vc):
        raise NullCurvatureInputError("spanning vectors are linearly dependent")
    gxv = float(xc @ g @ vc)
    if abs(gxv) > PLANE_Q_TOL * np.sqrt(nx * nv):
        raise NullCurvatureInputError(
            f"span{{v, x}} is not degenerate (g(v,x)={gxv:e}); use sectional_curvature")
    num = float(np.einsum("ijkl,i,j,k,l->", geo.riemann, vc, xc, vc, xc))
    return num / float(vc @ g @ vc)


class ScalarDerivs:
    """A scalar expression with its exact first and second derivative
    trees, differentiated once and reused across many points."""

    def __init__(self, M: ManifoldSpec, e: Expr):
        self.M = M
        self.expr = e
        names = M.coord_names()
        self.grad_trees = [ex.differentiate(e, n) for n in names]
        self.hess_trees = [[ex.differentiate(gi, n) for n in names] for gi in self.grad_trees]

    def value(self, p) -> float:
        return self.M.evaluate(self.expr, p)

    def gradient(self, p) -> np.ndarray:
        b = self.M.bindings(self.M.wrap_point(p))
        return np.array([ex.evaluate(t, b) for t in self.grad_trees])

    def coordinate_hessian(self, p) -> np.ndarray:
        b = self.M.bindings(self.M.wrap_point(p))
        m = self.M.dim
        h = np.empty((m, m))
        for i in range(m):
            for j in range(m):
                h[i, j] = ex.evaluate(self.hess_trees[i][j], b)
        return 0.5 * (h + h.T)


def _as_scalar_expr(M: ManifoldSpec, phi) -> Expr:
    if isinstance(phi, Expr):
        return phi
    if isinstance(phi, str):
        return M.scalars[phi]
    raise TypeError("phi must be a scalar-field name or an expression")


def hessian_scalar_at(M: ManifoldSpec, phi, p,
                      derivs: ScalarDerivs | None = None) -> np.ndarray:
    """Covariant Hessian (Hess phi)_ij = d_i d_j phi - Gamma^k_ij d_k phi."""
    if derivs is None:
        derivs = ScalarDerivs(M, _as_scalar_expr(M, phi))
    gamma = christoffel_at(M, p)
    grad = derivs.gradient(p)
    h = derivs.coordinate_hessian(p) - np.einsum("kij,k->ij", gamma, grad)
    return 0.5 * (h + h.T)


def shape_operator_at(M: ManifoldSpec, xname: str, p) -> np.ndarray:
    """Matrix of v -> -nabla_v X in the chart basis:
    A[i,j] = -(d_j X^i + Gamma^i_jk X^k)."""
    gamma = christoffel_at(M, p)
    X = M.field_eval(xname, p)
    dX = M.field_derivs(xname, p)       # dX[j,i] = d_j X^i
    return -(dX.T + np.einsum("ijk,k->ij", gamma, X))


def gradient_vector(M: ManifoldSpec, phi, p) -> np.ndarray:
    """grad phi = g^{ij} d_j phi as chart components."""
    e = _as_scalar_expr(M, phi)
    b = M.bindings(M.wrap_point(p))
    grad = np.array([ex.evaluate(ex.differentiate(e, n), b) for n in M.coord_names()])
    _, ginv, _, _ = _metric_or_raise(M, p)
    return ginv @ grad


def symmetry_residuals(geo: PointGeometry) -> dict[str, float]:
    """Max deviation from the curvature tensor symmetries and the cyclic
    first-Bianchi identity, relative to the tensor's magnitude."""
    R = geo.riemann
    scale = max(float(np.max(np.abs(R))), 1e-300)
    out = {
        "antisym_first": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))) / scale,
        "antisym_last": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))) / scale,
        "pair": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))) / scale,
        "bianchi": float(np.max(np.abs(
            R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))) / scale,
    }
    return out


def metric_compatibility_residual(M: ManifoldSpec, p) -> float:
    """Covariant derivative of g computed from Gamma; vanishes for the
    Levi-Civita connection."""
    g, _, dg, _ = _metric_or_raise(M, p)
    gamma = christoffel_at(M, p)
    # nabla_k g_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
    cov = dg - np.einsum("lki,lj->kij", gamma, g) - np.einsum("lkj,il->kij", gamma, g)
    scale = max(float(np.max(np.abs(g))), 1e-300)
    return float(np.max(np.abs(cov))) / scale
