"""Chart data model: metrics, fields, and pointwise causal classification.

A :class:`ManifoldSpec` is a single chart: coordinate names with domain
intervals and periodicity flags, a symmetric matrix of metric component
expressions, optional real parameters, and named vector/scalar fields.
Specs are immutable after construction; every pointwise query is a pure
function, safe to call from many workers at once.

Charts load from a sectioned key-value text document::

    [manifold]
    dim = 2
    coords = x, y
    range.x = 0, 1
    range.y = 0, 1
    periodic = x, y
    signature = lorentzian

    [params]
    # name = decimal value

    [metric]
    g.0.1 = "1"
    g.1.1 = "2*(-1 + cos(2*pi*x)/4)"

    [field.X]
    components = "0", "1"

    [scalar.u]
    expr = "-(x^2 + 2*y^2)"

Metric entries not given are zero; ``g.i.j`` and ``g.j.i`` are
symmetrized at load time.  All numbers in the document are decimal.
"""

from __future__ import annotations

import configparser
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .expr import Expr

# Pointwise classification tolerances.  The causal tolerance is relative
# to a Riemannianized norm built from |eigenvalues| of g, so it is
# scale-free.
CAUSAL_EPS = 1e-9
PLANE_EPS = 1e-9
DEGENERACY_TOL = 1e-12
BOUNDARY_COLLAR = 1e-6
SAMPLING_COLLAR = 1e-3


class SpecError(ValueError):
    """Malformed chart document or inconsistent spec contents."""


class SignatureError(SpecError):
    """Sampled metric eigenvalues disagree with the declared signature."""


class DomainError(ValueError):
    """Point outside the chart domain (or hugging a non-periodic edge)."""


class DegenerateMetricError(ValueError):
    """|det g| below tolerance at the queried point."""


class CausalCharacter(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    ZERO = "zero"


class PlaneType(enum.Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Coordinate:
    name: str
    lo: float
    hi: float
    periodic: bool

    @property
    def period(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class TangentVector:
    point: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))


@dataclass(frozen=True)
class TangentPlane:
    """A base point plus two spanning tangent vectors at that point."""

    point: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))


class ManifoldSpec:
    """One chart with metric, parameters, and named fields.

    Derivative trees of the metric and of every field component are
    differentiated once, eagerly, so that downstream curvature work is
    pure array assembly.
    """

    def __init__(self, name: str, coords: list[Coordinate], signature: str,
                 metric: list[list[Expr]], params: dict[str, float] | None = None,
                 fields: dict[str, list[Expr]] | None = None,
                 scalars: dict[str, Expr] | None = None):
        if len(coords) < 2:
            raise SpecError("dimension must be at least 2")
        if signature not in ("lorentzian", "riemannian"):
            raise SpecError(f"unknown signature '{signature}'")
        self.name = name
        self.coords = list(coords)
        self.dim = len(coords)
        self.signature = signature
        self.params = dict(params or {})
        self.fields = {k: list(v) for k, v in (fields or {}).items()}
        self.scalars = dict(scalars or {})

        m = self.dim
        if len(metric) != m or any(len(row) != m for row in metric):
            raise SpecError(f"metric must be {m}x{m}")
        # symmetrize as expression trees at load time
        self.metric = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                a, b = metric[i][j], metric[j][i]
                if _same_tree(a, b):
                    g = a
                else:
                    g = ex.div(ex.add(a, b), ex.Const(2.0))
                self.metric[i][j] = g
                self.metric[j][i] = g

        declared = self.declared_names()
        for i in range(m):
            for j in range(m):
                bad = ex.free_names(self.metric[i][j]) - declared
                if bad:
                    raise SpecError(f"metric entry g.{i}.{j} uses undeclared names {sorted(bad)}")
        for fname, comps in self.fields.items():
            if len(comps) != m:
                raise SpecError(f"field '{fname}' must have {m} components")
            for c in comps:
                bad = ex.free_names(c) - declared
                if bad:
                    raise SpecError(f"field '{fname}' uses undeclared names {sorted(bad)}")
        for sname, e in self.scalars.items():
            bad = ex.free_names(e) - declared
            if bad:
                raise SpecError(f"scalar '{sname}' uses undeclared names {sorted(bad)}")

        names = [c.name for c in self.coords]
        self._dg = [[[ex.differentiate(self.metric[i][j], k) for j in range(m)]
                     for i in range(m)] for k in names]
        self._ddg = [[[[ex.differentiate(self._dg[ki][i][j], kl) for j in range(m)]
                      for i in range(m)] for ki in range(m)] for kl in names]
        self._dfields = {
            fname: [[ex.differentiate(comp, k) for comp in comps] for k in names]
            for fname, comps in self.fields.items()
        }

    # -- bookkeeping -------------------------------------------------------

    def declared_names(self) -> frozenset[str]:
        return frozenset([c.name for c in self.coords]) | frozenset(self.params)

    def coord_names(self) -> list[str]:
        return [c.name for c in self.coords]

    def bindings(self, p: np.ndarray) -> dict[str, float]:
        b = {c.name: float(x) for c, x in zip(self.coords, p)}
        b.update(self.params)
        return b

    def wrap_point(self, p, collar: float = BOUNDARY_COLLAR) -> np.ndarray:
        """Wrap periodic coordinates into the fundamental domain and
        refuse points within ``collar`` of a non-periodic boundary."""
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise DomainError(f"point must have {self.dim} coordinates, got {p.shape}")
        out = p.copy()
        for a, c in enumerate(self.coords):
            if c.periodic:
                out[a] = c.lo + math.fmod(out[a] - c.lo, c.period)
                if out[a] < c.lo:
                    out[a] += c.period
            else:
                if not (c.lo + collar <= out[a] <= c.hi - collar):
                    raise DomainError(
                        f"coordinate {c.name}={out[a]!r} outside ({c.lo}, {c.hi}) "
                        f"with collar {collar}")
        return out

    # -- pointwise evaluation ----------------------------------------------

    def evaluate(self, e: Expr, p) -> float:
        return ex.evaluate(e, self.bindings(self.wrap_point(p)))

    def metric_eval(self, p) -> np.ndarray:
        b = self.bindings(self.wrap_point(p))
        m = self.dim
        g = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                g[i, j] = g[j, i] = ex.evaluate(self.metric[i][j], b)
        return g

    def metric_derivs(self, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(g, dg, ddg) at p with dg[k,i,j] = d_k g_ij and
        ddg[l,k,i,j] = d_l d_k g_ij, all from exact trees."""
        b = self.bindings(self.wrap_point(p))
        m = self.dim
        g = np.empty((m, m))
        dg = np.empty((m, m, m))
        ddg = np.empty((m, m, m, m))
        for i in range(m):
            for j in range(m):
                g[i, j] = ex.evaluate(self.metric[i][j], b)
                for k in range(m):
                    dg[k, i, j] = ex.evaluate(self._dg[k][i][j], b)
                    for l in range(m):
                        ddg[l, k, i, j] = ex.evaluate(self._ddg[l][k][i][j], b)
        return g, dg, ddg

    def field_eval(self, name: str, p) -> np.ndarray:
        comps = self.fields[name]
        b = self.bindings(self.wrap_point(p))
        return np.array([ex.evaluate(c, b) for c in comps])

    def field_derivs(self, name: str, p) -> np.ndarray:
        """dX[j,i] = d_j X^i from exact trees."""
        b = self.bindings(self.wrap_point(p))
        dtrees = self._dfields[name]
        m = self.dim
        out = np.empty((m, m))
        for j in range(m):
            for i in range(m):
                out[j, i] = ex.evaluate(dtrees[j][i], b)
        return out

    def field_vector(self, name: str, p) -> TangentVector:
        p = self.wrap_point(p)
        return TangentVector(p, self.field_eval(name, p))

    # -- helpers for tests and scans ----------------------------------------

    def sample_points(self, n: int, rng: np.random.Generator,
                      collar: float = SAMPLING_COLLAR) -> np.ndarray:
        """n interior points, uniform per axis, respecting a sampling
        collar on non-periodic axes."""
        cols = []
        for c in self.coords:
            lo, hi = (c.lo, c.hi) if c.periodic else (c.lo + collar, c.hi - collar)
            cols.append(rng.uniform(lo, hi, size=n))
        return np.stack(cols, axis=1)


def _same_tree(a: Expr, b: Expr) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# Pointwise metric queries
# ---------------------------------------------------------------------------

def metric_at(M: ManifoldSpec, p) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    """Evaluated metric, its inverse, and the eigenvalue sign pattern at p.

    Raises :class:`DegenerateMetricError` when |det g| falls below the
    degeneracy tolerance relative to the metric's scale.
    """
    g = M.metric_eval(p)
    m = M.dim
    scale = max(float(np.max(np.abs(g))), 1e-300)
    det = float(np.linalg.det(g))
    if abs(det) <= DEGENERACY_TOL * scale ** m:
        raise DegenerateMetricError(f"metric degenerate at {np.asarray(p).tolist()}: det={det:e}")
    inv = np.linalg.inv(g)
    eigs = np.linalg.eigvalsh(g)
    signs = tuple(int(np.sign(w)) for w in eigs)
    return g, inv, signs


def riem_norm_sq(g: np.ndarray, v: np.ndarray) -> float:
    """Riemannianized squared norm: eigen-decompose g and use the
    absolute eigenvalues.  Positive definite away from degeneracy."""
    w, V = np.linalg.eigh(g)
    c = V.T @ v
    return float(np.sum(np.abs(w) * c * c))


def causal_character(M: ManifoldSpec, v: TangentVector,
                     eps: float = CAUSAL_EPS) -> CausalCharacter:
    """Classify a tangent vector, with a scale-free lightlike band.

    The zero vector gets its own tag rather than counting as spacelike;
    callers that need a genuinely causal vector must check for ZERO.
    """
    g = M.metric_eval(v.point)
    comp = v.components
    n2 = riem_norm_sq(g, comp)
    if n2 == 0.0:
        return CausalCharacter.ZERO
    gvv = float(comp @ g @ comp)
    if abs(gvv) <= eps * n2:
        return CausalCharacter.LIGHTLIKE
    return CausalCharacter.TIMELIKE if gvv < 0 else CausalCharacter.SPACELIKE


class DependentVectorsError(ValueError):
    """Spanning vectors of a plane are linearly dependent."""


def plane_discriminant(M: ManifoldSpec, pi: TangentPlane) -> float:
    """Q = g(u,u) g(v,v) - g(u,v)^2 for the plane's spanning pair."""
    g = M.metric_eval(pi.point)
    guu = float(pi.u @ g @ pi.u)
    gvv = float(pi.v @ g @ pi.v)
    guv = float(pi.u @ g @ pi.v)
    return guu * gvv - guv * guv


def plane_type(M: ManifoldSpec, pi: TangentPlane, eps: float = PLANE_EPS) -> PlaneType:
    """Classify a tangent plane by the sign of its discriminant Q."""
    g = M.metric_eval(pi.point)
    nu = riem_norm_sq(g, pi.u)
    nv = riem_norm_sq(g, pi.v)
    if nu == 0.0 or nv == 0.0:
        raise DependentVectorsError("zero spanning vector")
    w, V = np.linalg.eigh(g)
    aw = np.abs(w)
    cu, cv = V.T @ pi.u, V.T @ pi.v
    gram = np.array([
        [np.sum(aw * cu * cu), np.sum(aw * cu * cv)],
        [np.sum(aw * cu * cv), np.sum(aw * cv * cv)],
    ])
    if np.linalg.det(gram) <= 1e-12 * nu * nv:
        raise DependentVectorsError("spanning vectors are linearly dependent")
    q = plane_discriminant(M, pi)
    band = eps * nu * nv
    if q < -band:
        return PlaneType.TIMELIKE
    if q > band:
        return PlaneType.SPACELIKE
    return PlaneType.DEGENERATE


# ---------------------------------------------------------------------------
# Symbolic helpers shared by the symmetry and witness machinery
# ---------------------------------------------------------------------------

def metric_pairing_expr(M: ManifoldSpec, xname: str, yname: str) -> Expr:
    """g(X, Y) as a closed-form expression."""
    X, Y = M.fields[xname], M.fields[yname]
    total = ex.ZERO
    for i in range(M.dim):
        for j in range(M.dim):
            total = ex.add(total, ex.mul(M.metric[i][j], ex.mul(X[i], Y[j])))
    return total


def field_energy_expr(M: ManifoldSpec, xname: str) -> Expr:
    """f = g(X,X)/2 as a closed-form expression."""
    return ex.mul(ex.Const(0.5), metric_pairing_expr(M, xname, xname))


# ---------------------------------------------------------------------------
# Chart document loading and writing
# ---------------------------------------------------------------------------

def _parse_float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecError(f"{what}: '{text}' is not a decimal number")


def _strip_quotes(s: str) -> str:
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def load_spec(document: str, *, name: str = "", validate: bool = True,
              samples: int = 30, seed: int = 0) -> ManifoldSpec:
    """Parse a chart document and (optionally) spot-check its signature
    at ``samples`` interior points."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(document)
    except configparser.Error as e:
        raise SpecError(f"document parse error: {e}") from None

    if "manifold" not in cp:
        raise SpecError("missing [manifold] section")
    man = cp["manifold"]
    for key in ("dim", "coords", "signature"):
        if key not in man:
            raise SpecError(f"[manifold] missing '{key}'")
    dim = int(_parse_float(man["dim"], "dim"))
    names = [s.strip() for s in man["coords"].split(",") if s.strip()]
    if len(names) != dim:
        raise SpecError(f"dim={dim} but {len(names)} coordinate names given")
    periodic = set()
    if "periodic" in man:
        periodic = {s.strip() for s in man["periodic"].split(",") if s.strip()}
        unknown = periodic - set(names)
        if unknown:
            raise SpecError(f"periodic lists unknown coordinates {sorted(unknown)}")
    coords = []
    for n in names:
        key = f"range.{n}"
        if key not in man:
            raise SpecError(f"[manifold] missing '{key}'")
        parts = [s.strip() for s in man[key].split(",")]
        if len(parts) != 2:
            raise SpecError(f"{key} must be 'lo, hi'")
        lo = _parse_float(parts[0], key)
        hi = _parse_float(parts[1], key)
        if not hi > lo:
            raise SpecError(f"{key}: need lo < hi")
        coords.append(Coordinate(n, lo, hi, n in periodic))
    signature = man["signature"].strip().lower()

    params = {}
    if "params" in cp:
        for k, v in cp["params"].items():
            params[k] = _parse_float(v, f"param {k}")

    declared = frozenset(names) | frozenset(params)

    def parse(text: str, where: str) -> Expr:
        try:
            return ex.parse_expression(_strip_quotes(text), declared)
        except ex.ParseError as e:
            raise SpecError(f"{where}: {e}") from None

    metric = [[ex.ZERO] * dim for _ in range(dim)]
    given: set[tuple[int, int]] = set()
    if "metric" not in cp:
        raise SpecError("missing [metric] section")
    for key, val in cp["metric"].items():
        parts = key.split(".")
        if len(parts) != 3 or parts[0] != "g":
            raise SpecError(f"[metric] key '{key}' is not of the form g.i.j")
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise SpecError(f"[metric] key '{key}' has non-integer indices")
        if not (0 <= i < dim and 0 <= j < dim):
            raise SpecError(f"[metric] key '{key}' indices out of range for dim={dim}")
        metric[i][j] = parse(val, f"metric g.{i}.{j}")
        given.add((i, j))
    # g.i.j defines the symmetric pair unless g.j.i is given explicitly
    for i, j in list(given):
        if i != j and (j, i) not in given:
            metric[j][i] = metric[i][j]

    fields = {}
    scalars = {}
    for section in cp.sections():
        if section.startswith("field."):
            fname = section[len("field."):]
            if "components" not in cp[section]:
                raise SpecError(f"[{section}] missing 'components'")
            comps = [parse(s, f"field {fname}")
                     for s in cp[section]["components"].split(",")]
            if len(comps) != dim:
                raise SpecError(f"field '{fname}' has {len(comps)} components, want {dim}")
            fields[fname] = comps
        elif section.startswith("scalar."):
            sname = section[len("scalar."):]
            if "expr" not in cp[section]:
                raise SpecError(f"[{section}] missing 'expr'")
            scalars[sname] = parse(cp[section]["expr"], f"scalar {sname}")

    spec = ManifoldSpec(name=name or man.get("name", "chart"), coords=coords,
                        signature=signature, metric=metric, params=params,
                        fields=fields, scalars=scalars)
    if validate:
        validate_signature(spec, samples=samples, seed=seed)
    return spec


def validate_signature(M: ManifoldSpec, samples: int = 30, seed: int = 0) -> None:
    """Check the declared signature at sampled interior points.

    Lorentzian means exactly one negative eigenvalue; Riemannian means
    all positive.  Raises :class:`SignatureError` naming the violating
    point and its eigenvalues.
    """
    rng = np.random.default_rng(seed)
    for p in M.sample_points(samples, rng):
        g = M.metric_eval(p)
        eigs = np.linalg.eigvalsh(g)
        neg = int(np.sum(eigs < 0))
        zero = int(np.sum(np.abs(eigs) <= DEGENERACY_TOL * max(1.0, float(np.max(np.abs(eigs))))))
        if zero:
            raise SignatureError(f"degenerate metric at {p.tolist()}: eigenvalues {eigs.tolist()}")
        want = 1 if M.signature == "lorentzian" else 0
        if neg != want:
            raise SignatureError(
                f"declared {M.signature} but metric at {p.tolist()} has eigenvalues "
                f"{eigs.tolist()} ({neg} negative)")


def to_document(M: ManifoldSpec) -> str:
    """Serialize back to the chart document format (canonical printing)."""
    out = io.StringIO()
    out.write("[manifold]\n")
    out.write(f"name = {M.name}\n")
    out.write(f"dim = {M.dim}\n")
    out.write(f"coords = {', '.join(M.coord_names())}\n")
    for c in M.coords:
        out.write(f"range.{c.name} = {c.lo!r}, {c.hi!r}\n")
    per = [c.name for c in M.coords if c.periodic]
    if per:
        out.write(f"periodic = {', '.join(per)}\n")
    out.write(f"signature = {M.signature}\n")
    if M.params:
        out.write("\n[params]\n")
        for k, v in sorted(M.params.items()):
            out.write(f"{k} = {v!r}\n")
    out.write("\n[metric]\n")
    for i in range(M.dim):
        for j in range(i, M.dim):
            if M.metric[i][j] != ex.ZERO:
                out.write(f'g.{i}.{j} = "{ex.to_text(M.metric[i][j])}"\n')
    for fname in sorted(M.fields):
        out.write(f"\n[field.{fname}]\n")
        comps = ", ".join(f'"{ex.to_text(c)}"' for c in M.fields[fname])
        out.write(f"components = {comps}\n")
    for sname in sorted(M.scalars):
        out.write(f"\n[scalar.{sname}]\n")
        out.write(f'expr = "{ex.to_text(M.scalars[sname])}"\n')
    return out.getvalue()
