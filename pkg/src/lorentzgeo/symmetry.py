"""Lie-derivative machinery and the skew operator A_X = -nabla X.

Classifies vector fields by how their flow deforms the metric
(isometric / homothetic / conformal), builds the restriction of A_X to
the orthogonal complement of X (or to the quotient of that complement
by X itself when X is lightlike), extracts kernel directions, and
cross-checks the Hessian identity

    Hess f (U,V) = -g(R(U,X)X, V) + g(A_X U, A_X V),   f = g(X,X)/2,

which ties the expression, curvature, and symmetry pipelines together.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .expr import Expr
from .curvature import (
    ScalarDerivs,
    hessian_scalar_at,
    point_geometry,
    shape_operator_at,
)
from .manifold import (
    CausalCharacter,
    ManifoldSpec,
    causal_character,
    field_energy_expr,
    riem_norm_sq,
)

CLASSIFY_TOL = 1e-8
KERNEL_REL_TOL = 1e-7
KERNEL_ABS_TOL = 1e-10
DEGENERATE_DIRECTION_TOL = 1e-9

_TINY = 1e-300


class FieldTag(enum.Enum):
    KILLING = "killing"
    HOMOTHETIC = "homothetic"
    CONFORMAL = "conformal"
    NONE = "none"


@dataclass(frozen=True)
class FieldClass:
    """Most specific symmetry tag whose residual passes tolerance."""

    tag: FieldTag
    lam: float | None
    sigma_samples: tuple[tuple[tuple[float, ...], float], ...] | None
    residual: float
    sample_count: int

    @property
    def is_homothetic_or_killing(self) -> bool:
        return self.tag in (FieldTag.KILLING, FieldTag.HOMOTHETIC)


class SubspaceError(ValueError):
    """A_X fails to preserve the requested subspace, or a basis direction
    is metrically degenerate."""


class KernelExtractionError(ValueError):
    """No near-kernel direction where one is guaranteed."""


def lie_derivative_metric_at(M: ManifoldSpec, xname: str, p) -> np.ndarray:
    """(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k."""
    g, dg, _ = M.metric_derivs(p)
    X = M.field_eval(xname, p)
    dX = M.field_derivs(xname, p)           # dX[j,i] = d_j X^i
    lead = np.einsum("k,kij->ij", X, dg)
    return lead + dX @ g + (dX @ g).T


def lie_derivative_metric_exprs(M: ManifoldSpec, xname: str) -> list[list[Expr]]:
    """The same Lie derivative as closed-form component expressions."""
    m = M.dim
    X = M.fields[xname]
    dX = M._dfields[xname]                  # dX[j][i] = d_j X^i tree
    out = [[ex.ZERO] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            total = ex.ZERO
            for k in range(m):
                total = ex.add(total, ex.mul(X[k], M._dg[k][i][j]))
                total = ex.add(total, ex.mul(M.metric[k][j], dX[i][k]))
                total = ex.add(total, ex.mul(M.metric[i][k], dX[j][k]))
            out[i][j] = total
    return out


def classify_field(M: ManifoldSpec, xname: str, samples=None,
                   tol: float = CLASSIFY_TOL, rng=None) -> FieldClass:
    """Fit L_X g against {0, lam*g, sigma(p)*g} over a sample set.

    lam comes from a joint least-squares fit; sigma is the pointwise
    trace(g^{-1} L)/m.  Residuals are max entrywise deviations after
    normalizing by the metric magnitude at each point, and the most
    specific tag under tolerance wins.
    """
    if samples is None:
        rng = rng or np.random.default_rng(0)
        samples = M.sample_points(24, rng)
    samples = np.asarray(samples, dtype=float)
    if len(samples) < 8:
        raise ValueError("need at least 8 sample points spread over the domain")

    ls, gs, scales, sigmas = [], [], [], []
    for p in samples:
        g = M.metric_eval(p)
        L = lie_derivative_metric_at(M, xname, p)
        scale = max(float(np.max(np.abs(g))), _TINY)
        ls.append(L)
        gs.append(g)
        scales.append(scale)
        sigmas.append(float(np.trace(np.linalg.inv(g) @ L)) / M.dim)

    r_killing = max(float(np.max(np.abs(L))) / s for L, s in zip(ls, scales))
    lam = sum(float(np.sum(L * g)) for L, g in zip(ls, gs)) / \
        max(sum(float(np.sum(g * g)) for g in gs), _TINY)
    r_homothetic = max(float(np.max(np.abs(L - lam * g))) / s
                       for L, g, s in zip(ls, gs, scales))
    r_conformal = max(float(np.max(np.abs(L - sig * g))) / s
                      for L, g, sig, s in zip(ls, gs, sigmas, scales))

    n = len(samples)
    sig_pairs = tuple((tuple(map(float, p)), sig) for p, sig in zip(samples, sigmas))
    if r_killing <= tol:
        return FieldClass(FieldTag.KILLING, 0.0, None, r_killing, n)
    if r_homothetic <= tol:
        return FieldClass(FieldTag.HOMOTHETIC, float(lam), None, r_homothetic, n)
    if r_conformal <= tol:
        return FieldClass(FieldTag.CONFORMAL, None, sig_pairs, r_conformal, n)
    return FieldClass(FieldTag.NONE, None, None,
                      min(r_killing, r_homothetic, r_conformal), n)


def skew_adjoint_residual(M: ManifoldSpec, xname: str, p) -> float:
    """max |g(A_X u, v) + g(u, A_X v)| over chart basis pairs, normalized
    by the operator's magnitude.  Zero exactly when X is Killing."""
    g = M.metric_eval(p)
    A = shape_operator_at(M, xname, p)
    sym = A.T @ g + g @ A                   # [u,v] slot: g(Au, v) + g(u, Av)
    denom = max(float(np.max(np.abs(g @ A))), float(np.max(np.abs(A.T @ g))), _TINY)
    return float(np.max(np.abs(sym))) / denom


# ---------------------------------------------------------------------------
# Bases of X-perp and the restricted / quotient operators
# ---------------------------------------------------------------------------

def _riem_inner(g: np.ndarray):
    w, V = np.linalg.eigh(g)
    aw = np.abs(w)

    def inner(a, b):
        ca, cb = V.T @ a, V.T @ b
        return float(np.sum(aw * ca * cb))

    return inner


def _span_basis(vectors: np.ndarray, rank: int) -> np.ndarray:
    """Euclidean-orthonormal basis (rows) of the span of the given rows."""
    u, s, vt = np.linalg.svd(vectors, full_matrices=False)
    return vt[:rank]


def orthogonal_complement_basis(M: ManifoldSpec, xname: str, p,
                                quotient: bool = False) -> np.ndarray:
    """g-orthonormal basis (rows) of X-perp at p.

    With ``quotient=True`` (lightlike X) the returned rows represent the
    quotient X-perp / span{X}: they span a complement of X inside X-perp
    and are orthonormal for the induced positive-definite product.
    Refuses metrically degenerate directions except for the X direction
    being quotiented away.
    """
    p = M.wrap_point(p)
    g = M.metric_eval(p)
    X = M.field_eval(xname, p)
    nX = riem_norm_sq(g, X)
    if nX == 0.0:
        raise SubspaceError("field vanishes at the base point")
    m = M.dim

    if not quotient:
        gX = g @ X
        gXX = float(X @ gX)
        if abs(gXX) <= DEGENERATE_DIRECTION_TOL * nX:
            raise SubspaceError("g(X,X) degenerate; use quotient mode for lightlike X")
        # rows: e_i - (g(e_i,X)/g(X,X)) X, the g-projection onto X-perp
        proj = np.eye(m) - np.outer(gX, X) / gXX
        candidates = _span_basis(proj, m - 1)
    else:
        gX = g @ X
        # X-perp = euclidean nullspace of the covector gX
        _, _, vt = np.linalg.svd(gX.reshape(1, -1))
        perp = vt[1:]                      # m-1 rows spanning X-perp
        # drop the X direction from the representatives
        reduced = perp - np.outer(perp @ X, X) / float(X @ X)
        candidates = _span_basis(reduced, m - 2)

    inner_r = _riem_inner(g)
    basis = []
    for cand in candidates:
        w = cand.astype(float)
        for e in basis:
            w = w - float(w @ g @ e) * e
        gww = float(w @ g @ w)
        if abs(gww) <= DEGENERATE_DIRECTION_TOL * max(inner_r(w, w), _TINY):
            raise SubspaceError("degenerate direction while building the basis")
        if gww < 0:
            raise SubspaceError("negative direction in what should be a spacelike basis")
        basis.append(w / np.sqrt(gww))
    return np.array(basis)


def restriction_matrix(M: ManifoldSpec, xname: str, p,
                       reps: np.ndarray) -> tuple[np.ndarray, float]:
    """Matrix of A_X in the given g-orthonormal representative basis,
    plus the residual of A_X leaking out of X-perp."""
    p = M.wrap_point(p)
    g = M.metric_eval(p)
    A = shape_operator_at(M, xname, p)
    X = M.field_eval(xname, p)
    n = len(reps)
    mat = np.empty((n, n))
    nrm_x = math.sqrt(max(riem_norm_sq(g, X), _TINY))
    images = [A @ reps[i] for i in range(n)]
    for i, img in enumerate(images):
        for k in range(n):
            mat[k, i] = float(reps[k] @ g @ img)
    # a vanishing operator preserves everything; floor its magnitude so
    # pure float noise does not masquerade as a leak
    opmag = max((math.sqrt(riem_norm_sq(g, img)) for img in images), default=0.0)
    floor = 1e-9 * (1.0 + nrm_x)
    leak = max((abs(float(img @ g @ X)) for img in images), default=0.0) / \
        (max(opmag, floor) * nrm_x)
    return mat, leak


@dataclass(frozen=True)
class RestrictedOperator:
    """A_X restricted to X-perp (mode 'orthogonal') or induced on
    X-perp / span{X} (mode 'quotient')."""

    mode: str
    point: np.ndarray
    basis: np.ndarray              # rows: representative vectors
    matrix: np.ndarray
    induced_metric: np.ndarray     # identity by construction
    invariance_residual: float
    skew_residual: float
    lam: float | None = None       # quotient mode: A_X(X) = -lam X
    eigen_residual: float | None = None


def restricted_operator(M: ManifoldSpec, xname: str, p,
                        mode: str = "orthogonal",
                        invariance_tol: float = 1e-6) -> RestrictedOperator:
    """Build the restriction of A_X appropriate to the causal character
    of X at p.

    Orthogonal mode requires X timelike (spacelike complement of
    dimension m-1); quotient mode requires X lightlike and works on the
    (m-2)-dimensional quotient with its positive-definite induced
    product.  A leak of A_X out of X-perp beyond ``invariance_tol``
    signals a non-homothetic input and raises :class:`SubspaceError`.
    """
    p = M.wrap_point(p)
    cc = causal_character(M, M.field_vector(xname, p))
    if mode == "orthogonal":
        if cc is not CausalCharacter.TIMELIKE:
            raise SubspaceError(f"orthogonal mode needs timelike X, got {cc.value}")
        reps = orthogonal_complement_basis(M, xname, p, quotient=False)
    elif mode == "quotient":
        if cc is not CausalCharacter.LIGHTLIKE:
            raise SubspaceError(f"quotient mode needs lightlike X, got {cc.value}")
        reps = orthogonal_complement_basis(M, xname, p, quotient=True)
    else:
        raise ValueError(f"unknown mode '{mode}'")

    mat, leak = restriction_matrix(M, xname, p, reps)
    if leak > invariance_tol:
        raise SubspaceError(
            f"A_X does not preserve the subspace (residual {leak:.3e}); "
            "the field is unlikely to be homothetic")
    scale = float(np.max(np.abs(mat)))
    skew = float(np.max(np.abs(mat + mat.T))) / scale if scale > 1e-12 else 0.0

    lam = None
    eig_res = None
    if mode == "quotient":
        g = M.metric_eval(p)
        A = shape_operator_at(M, xname, p)
        X = M.field_eval(xname, p)
        AX = A @ X
        lam = -float(AX @ X) / float(X @ X)
        denom = max(np.sqrt(riem_norm_sq(g, AX) * riem_norm_sq(g, X)),
                    np.sqrt(riem_norm_sq(g, X)), _TINY)
        eig_res = float(np.sqrt(riem_norm_sq(g, AX + lam * X))) / denom

    return RestrictedOperator(mode=mode, point=p, basis=reps, matrix=mat,
                              induced_metric=np.eye(len(reps)),
                              invariance_residual=leak, skew_residual=skew,
                              lam=lam, eigen_residual=eig_res)


def kernel_direction(matrix: np.ndarray, skew_tol: float = 1e-6) -> np.ndarray | None:
    """Unit kernel direction of a skew operator on an inner-product space.

    Odd dimension guarantees a kernel; failing to find one there raises
    :class:`KernelExtractionError`.  An even-dimensional operator with
    trivial kernel is a reported condition: the function returns None.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    scale = float(np.max(np.abs(matrix)))
    if scale > KERNEL_ABS_TOL and \
            float(np.max(np.abs(matrix + matrix.T))) / scale > skew_tol:
        raise KernelExtractionError("operator is not skew-adjoint within tolerance")
    if n == 1:
        return np.array([1.0])
    _, s, vt = np.linalg.svd(matrix)
    v = vt[-1]
    opnorm = float(s[0])
    resid = float(np.linalg.norm(matrix @ v))
    ok = resid <= KERNEL_REL_TOL * opnorm if opnorm > KERNEL_ABS_TOL \
        else resid <= KERNEL_ABS_TOL
    if ok:
        return v
    if n % 2 == 1:
        raise KernelExtractionError(
            f"odd-dimensional skew operator without a kernel direction "
            f"(|op v| = {resid:.3e}, |op| = {opnorm:.3e})")
    return None


# ---------------------------------------------------------------------------
# The Hessian identity
# ---------------------------------------------------------------------------

def hessian_identity_sides(M: ManifoldSpec, xname: str, p,
                           f_derivs: ScalarDerivs | None = None
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of Hess f = -g(R(.,X)X,.) + g(A_X ., A_X .) in the
    chart basis; valid when X is homothetic (Killing included)."""
    p = M.wrap_point(p)
    if f_derivs is None:
        f_derivs = ScalarDerivs(M, field_energy_expr(M, xname))
    lhs = hessian_scalar_at(M, f_derivs.expr, p, derivs=f_derivs)
    geo = point_geometry(M, p)
    X = M.field_eval(xname, p)
    A = shape_operator_at(M, xname, p)
    r_term = np.einsum("iajb,a,b->ij", geo.riemann, X, X)
    rhs = -r_term + A.T @ geo.metric @ A
    return lhs, rhs


def hessian_identity_residual(M: ManifoldSpec, xname: str, p,
                              f_derivs: ScalarDerivs | None = None) -> float:
    """Max entrywise mismatch of the Hessian identity, normalized by the
    larger side's magnitude (absolute when both sides are ~0)."""
    lhs, rhs = hessian_identity_sides(M, xname, p, f_derivs)
    denom = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    diff = float(np.max(np.abs(lhs - rhs)))
    if denom < 1e-12:
        return diff
    return diff / denom


# ---------------------------------------------------------------------------
# Conformal factor sigma with exact directional derivatives
# ---------------------------------------------------------------------------

class ConformalFactor:
    """sigma(p) = trace(g^{-1} L_X g)/m and its derivative along X,
    assembled from exact derivative trees (no finite differences)."""

    def __init__(self, M: ManifoldSpec, xname: str):
        self.M = M
        self.xname = xname
        self._l_trees = lie_derivative_metric_exprs(M, xname)
        names = M.coord_names()
        self._dl_trees = [
            [[ex.differentiate(self._l_trees[i][j], n) for j in range(M.dim)]
             for i in range(M.dim)]
            for n in names
        ]

    def sigma(self, p) -> float:
        g = self.M.metric_eval(p)
        L = lie_derivative_metric_at(self.M, self.xname, p)
        return float(np.trace(np.linalg.inv(g) @ L)) / self.M.dim

    def x_sigma(self, p) -> float:
        """X(sigma) at p via d_a sigma = tr(-G^-1 (d_a G) G^-1 L
        + G^-1 d_a L)/m contracted with X."""
        M = self.M
        p = M.wrap_point(p)
        b = M.bindings(p)
        m = M.dim
        g, dg, _ = M.metric_derivs(p)
        ginv = np.linalg.inv(g)
        L = lie_derivative_metric_at(M, self.xname, p)
        X = M.field_eval(self.xname, p)
        total = 0.0
        for a in range(m):
            dL = np.array([[ex.evaluate(self._dl_trees[a][i][j], b)
                            for j in range(m)] for i in range(m)])
            d_sigma = float(np.trace(-ginv @ dg[a] @ ginv @ L + ginv @ dL)) / m
            total += X[a] * d_sigma
        return total
