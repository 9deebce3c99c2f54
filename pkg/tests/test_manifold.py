"""Chart loading, pointwise metric queries, causal classification."""

import numpy as np
import pytest

from lorentzgeo.manifold import (
    CausalCharacter,
    DegenerateMetricError,
    DomainError,
    PlaneType,
    SignatureError,
    SpecError,
    TangentPlane,
    TangentVector,
    causal_character,
    load_spec,
    metric_at,
    plane_type,
    to_document,
    validate_signature,
)

MINK2 = """
[manifold]
dim = 2
coords = t, x
range.t = -1, 1
range.x = -1, 1
signature = lorentzian

[metric]
g.0.0 = "-1"
g.1.1 = "1"
"""

MINK3 = """
[manifold]
dim = 3
coords = t, x, y
range.t = -1, 1
range.x = -1, 1
range.y = -1, 1
signature = lorentzian

[metric]
g.0.0 = "-1"
g.1.1 = "1"
g.2.2 = "1"
"""


class TestLoadSpec:
    def test_minkowski_document(self):
        spec = load_spec(MINK2)
        assert spec.dim == 2
        g, inv, signs = metric_at(spec, [0.0, 0.0])
        assert np.allclose(g, np.diag([-1.0, 1.0]))
        assert np.allclose(inv, np.diag([-1.0, 1.0]))
        assert signs == (-1, 1)

    def test_torus_document_is_valid_lorentzian(self):
        doc = """
[manifold]
dim = 2
coords = x, y
range.x = 0, 1
range.y = 0, 1
periodic = x, y
signature = lorentzian

[metric]
g.0.1 = "1"
g.1.1 = "2*(-1 + cos(2*pi*x)/4)"
"""
        spec = load_spec(doc)
        validate_signature(spec, samples=100)
        g = spec.metric_eval([0.0, 0.0])
        assert g[0, 1] == 1.0 and g[1, 0] == 1.0
        assert g[1, 1] == pytest.approx(-1.5)

    def test_wrong_signature_declaration(self):
        doc = MINK2.replace('g.0.0 = "-1"', 'g.0.0 = "1"')
        with pytest.raises(SignatureError) as err:
            load_spec(doc)
        assert "eigenvalues" in str(err.value)

    def test_undeclared_name_in_metric(self):
        doc = MINK2.replace('g.1.1 = "1"', 'g.1.1 = "1 + q"')
        with pytest.raises(SpecError):
            load_spec(doc)

    def test_missing_sections(self):
        with pytest.raises(SpecError):
            load_spec("[manifold]\ndim = 2\n")

    def test_off_diagonal_entry_defines_symmetric_pair(self):
        doc = """
[manifold]
dim = 2
coords = u, v
range.u = -1, 1
range.v = -1, 1
signature = lorentzian

[metric]
g.0.1 = "1 + u^2"
"""
        spec = load_spec(doc)
        g = spec.metric_eval([0.5, 0.0])
        assert g[0, 1] == g[1, 0] == pytest.approx(1.25)

    def test_field_component_count_checked(self):
        doc = MINK2 + '\n[field.X]\ncomponents = "1"\n'
        with pytest.raises(SpecError):
            load_spec(doc)

    def test_document_round_trip(self):
        spec = load_spec(MINK3)
        again = load_spec(to_document(spec))
        rng = np.random.default_rng(0)
        for p in spec.sample_points(10, rng):
            assert np.allclose(spec.metric_eval(p), again.metric_eval(p))


class TestMetricAt:
    def test_inverse_accuracy(self, entry, rng):
        for name in ("torus_family", "hopf_lorentz_s3", "schwarzschild_exterior"):
            spec = entry(name).spec
            for p in spec.sample_points(10, rng):
                g, inv, _ = metric_at(spec, p)
                assert np.max(np.abs(g @ inv - np.eye(spec.dim))) < 1e-12

    def test_hopf_field_norm(self, hopf, rng):
        spec = hopf.spec
        for p in spec.sample_points(10, rng):
            g = spec.metric_eval(p)
            X = spec.field_eval("X", p)
            assert float(X @ g @ X) == pytest.approx(-1.0, abs=1e-12)

    def test_degenerate_metric_reported(self):
        doc = """
[manifold]
dim = 2
coords = x, y
range.x = -1, 1
range.y = -1, 1
signature = riemannian

[metric]
g.0.0 = "x"
g.1.1 = "1"
"""
        spec = load_spec(doc, validate=False)
        with pytest.raises(DegenerateMetricError):
            metric_at(spec, [0.0, 0.0])


class TestDomain:
    def test_periodic_wrap(self, torus):
        spec = torus.spec
        p = spec.wrap_point([1.25, -0.5])
        assert p[0] == pytest.approx(0.25)
        assert p[1] == pytest.approx(0.5)

    def test_boundary_collar_refused(self):
        spec = load_spec(MINK2)
        with pytest.raises(DomainError):
            spec.wrap_point([1.0, 0.0])
        with pytest.raises(DomainError):
            spec.wrap_point([0.0, -1.0 + 1e-9])

    def test_wrong_arity(self):
        spec = load_spec(MINK2)
        with pytest.raises(DomainError):
            spec.wrap_point([0.0, 0.0, 0.0])


class TestCausalCharacter:
    @pytest.mark.parametrize("v,want", [
        ((1.0, 0.0), CausalCharacter.TIMELIKE),
        ((1.0, 1.0), CausalCharacter.LIGHTLIKE),
        ((0.0, 1.0), CausalCharacter.SPACELIKE),
        ((0.0, 0.0), CausalCharacter.ZERO),
    ])
    def test_minkowski(self, v, want):
        spec = load_spec(MINK2)
        assert causal_character(spec, TangentVector([0.0, 0.0], v)) is want

    def test_torus_field_is_timelike(self, torus, rng):
        spec = torus.spec
        for p in spec.sample_points(10, rng):
            assert causal_character(spec, spec.field_vector("X", p)) \
                is CausalCharacter.TIMELIKE

    def test_sign_reversal_invariance(self, rng):
        spec = load_spec(MINK2)
        for _ in range(20):
            v = rng.normal(size=2)
            a = causal_character(spec, TangentVector([0.0, 0.0], v))
            b = causal_character(spec, TangentVector([0.0, 0.0], -v))
            assert a is b


class TestPlaneType:
    def test_minkowski_full_plane_is_timelike(self):
        spec = load_spec(MINK2)
        pi = TangentPlane([0.0, 0.0], [1.0, 0.0], [0.0, 1.0])
        assert plane_type(spec, pi) is PlaneType.TIMELIKE

    def test_minkowski3_degenerate_plane(self):
        spec = load_spec(MINK3)
        pi = TangentPlane([0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0])
        assert plane_type(spec, pi) is PlaneType.DEGENERATE

    def test_hopf_plane_with_field(self, hopf):
        spec = hopf.spec
        p = np.array([np.pi / 4, 0.5, 1.0])
        u = spec.field_eval("U", p)       # unit spacelike, orthogonal to X
        X = spec.field_eval("X", p)
        pi = TangentPlane(p, u, X)
        g = spec.metric_eval(p)
        q = float(u @ g @ u) * float(X @ g @ X) - float(u @ g @ X) ** 2
        assert q == pytest.approx(-1.0, abs=1e-12)
        assert plane_type(spec, pi) is PlaneType.TIMELIKE

    def test_dependent_vectors_rejected(self):
        spec = load_spec(MINK2)
        from lorentzgeo.manifold import DependentVectorsError
        with pytest.raises(DependentVectorsError):
            plane_type(spec, TangentPlane([0.0, 0.0], [1.0, 1.0], [2.0, 2.0]))

    def test_invariant_under_respanning(self, torus, rng):
        spec = torus.spec
        p = np.array([0.3, 0.2])
        u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        base = plane_type(spec, TangentPlane(p, u, v))
        for _ in range(20):
            A = rng.normal(size=(2, 2))
            if abs(np.linalg.det(A)) < 0.1:
                continue
            uu = A[0, 0] * u + A[0, 1] * v
            vv = A[1, 0] * u + A[1, 1] * v
            assert plane_type(spec, TangentPlane(p, uu, vv)) is base
