import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.geometry.line_space import (
    OrientedLine,
    Point3,
    SouthPoleError,
    UnitVec3,
    closest_point_orthogonality,
    dir_to_vec,
    direction,
    incidence,
    line_through,
    vec_to_dir,
)

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


@pytest.mark.parametrize("xi, h, v", [(0j, 0j, 1.0), (1 + 0j, 1 + 0j, 0.0), (1j, 1j, 0.0)])
def test_dir_to_vec_examples(xi, h, v):
    u = dir_to_vec(xi)
    assert u.h == pytest.approx(h, abs=1e-15)
    assert u.v == pytest.approx(v, abs=1e-15)


def test_vec_to_dir_examples():
    assert vec_to_dir(UnitVec3(0j, 1.0)) == 0
    assert vec_to_dir(UnitVec3(1 + 0j, 0.0)) == 1
    with pytest.raises(SouthPoleError):
        vec_to_dir(UnitVec3(0j, -1.0))


@pytest.mark.parametrize("xi, eta, r, z, t", [
    (0j, 0j, 5.0, 0j, 5.0),
    (0j, 1 + 0j, 0.0, 2 + 0j, 0.0),
    (1 + 0j, 1j, 1.0, 1 + 1j, 0.0),
])
def test_incidence_examples(xi, eta, r, z, t):
    p = incidence(OrientedLine(xi, eta), r)
    assert p.z == pytest.approx(z, abs=1e-15)
    assert p.t == pytest.approx(t, abs=1e-15)


@pytest.mark.parametrize("z, t, xi, eta, r", [
    (2 + 0j, 0.0, 0j, 1 + 0j, 0.0),
    (1 + 1j, 0.0, 1 + 0j, 1j, 1.0),
    (0j, 7.0, 0j, 0j, 7.0),
])
def test_line_through_examples(z, t, xi, eta, r):
    line, affine = line_through(Point3(z, t), xi)
    assert line.eta == pytest.approx(eta, abs=1e-15)
    assert affine == pytest.approx(r, abs=1e-15)


@pytest.mark.parametrize("xi, eta", [(0j, 1 + 0j), (1 + 0j, 1j), (1j, 0j)])
def test_closest_point_orthogonality_examples(xi, eta):
    assert closest_point_orthogonality(OrientedLine(xi, eta)) < 1e-15


def test_non_finite_line_is_rejected():
    with pytest.raises(SouthPoleError):
        OrientedLine(complex(math.inf, 0), 0j)


def test_random_lines_coordinate_model():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        xi = complex(*rng.normal(size=2))
        eta = complex(*rng.normal(scale=2.0, size=2))
        r1, r2 = rng.uniform(-5, 5, size=2)
        line = OrientedLine(xi, eta)

        p1, p2 = incidence(line, r1), incidence(line, r2)
        np.testing.assert_allclose(p2.as_array() - p1.as_array(), (r2 - r1) * direction(line).as_array(), atol=1e-12)

        back, r = line_through(p1, xi)
        assert abs(back.eta - eta) < 1e-12
        assert abs(r - r1) < 1e-12

        assert closest_point_orthogonality(line) < 1e-12


@given(complexes)
@settings(max_examples=200)
def test_dir_to_vec_is_unit_and_inverted_by_vec_to_dir(xi):
    u = dir_to_vec(xi)
    assert abs(u.h) ** 2 + u.v ** 2 == pytest.approx(1.0, abs=1e-12)
    assert abs(vec_to_dir(u) - xi) < 1e-12 * max(1.0, abs(xi) ** 2)


@given(complexes, complexes, finite)
@settings(max_examples=200)
def test_incidence_round_trip(xi, eta, r):
    p = incidence(OrientedLine(xi, eta), r)
    back, affine = line_through(p, xi)
    scale = max(1.0, abs(eta), abs(r))
    assert abs(back.eta - eta) < 1e-12 * scale * (1 + abs(xi)) ** 2
    assert abs(affine - r) < 1e-12 * scale * (1 + abs(xi)) ** 2


def test_point_and_vector_array_views():
    p = Point3.from_array([1.0, -2.0, 3.0])
    assert p.z == 1 - 2j and p.t == 3.0
    assert p.distance(Point3(1 - 2j, 0.0)) == pytest.approx(3.0)
    u = UnitVec3.from_array([0.0, 3.0, 4.0])
    assert u.h == pytest.approx(0.6j) and u.v == pytest.approx(0.8)
    assert u.dot(UnitVec3(1j, 0.0)) == pytest.approx(0.6)
