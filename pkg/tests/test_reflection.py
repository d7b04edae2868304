import numpy as np
import pytest

from src.geometry.line_space import GeometryError, Point3, SouthPoleError, dir_to_vec, line_through
from src.geometry.reflection import (
    InconsistentReflectionError,
    NotIncidentError,
    SourceRay,
    SurfaceFrame,
    intersection_residual,
    reflect_direction,
    reflect_line,
    reflect_oracle,
)

# Horizontal mirror x3 = 0 with upward normal, surface point (0, 1, 0)
HORIZONTAL = SurfaceFrame(0j, 0.5j, 0.0)


def test_frame_surface_point():
    p = HORIZONTAL.surface_point
    assert p.z == pytest.approx(1j) and p.t == pytest.approx(0.0)


@pytest.mark.parametrize("xi0, xi1, expected", [
    (0j, 0.5 + 0j, 2.0),
    (1 + 0j, 0j, 0.0),
    (1 + 0j, -1 + 0j, 1.0),
    (0j, 1 + 0j, 1.0),
])
def test_reflect_direction_examples(xi0, xi1, expected):
    f = SurfaceFrame(xi0, 0j, 0.0)
    assert reflect_direction(f, xi1) == pytest.approx(expected, abs=1e-15)


def test_reflect_direction_at_the_south_pole():
    with pytest.raises(SouthPoleError):
        reflect_direction(SurfaceFrame(0j, 0j, 0.0), 0j)


def test_intersection_residual_examples():
    assert abs(intersection_residual(HORIZONTAL, SourceRay(1 + 0j, 1j))) < 1e-15
    assert abs(intersection_residual(HORIZONTAL, SourceRay(1 + 0j, 5j))) > 1


def test_reflect_line_grazing_ray():
    line = reflect_line(HORIZONTAL, SourceRay(1 + 0j, 1j))
    assert line.xi == pytest.approx(1 + 0j, abs=1e-15)
    assert line.eta == pytest.approx(1j, abs=1e-15)


def test_reflect_line_rejects_a_ray_that_misses():
    with pytest.raises(NotIncidentError):
        reflect_line(HORIZONTAL, SourceRay(1 + 0j, 5j))


def test_reflect_line_rejects_drift_amplified_by_a_small_denominator():
    through, _ = line_through(HORIZONTAL.surface_point, 0.01 + 0j)
    assert reflect_line(HORIZONTAL, SourceRay(through.xi, through.eta)).xi == pytest.approx(100.0)

    drifted = SourceRay(through.xi, through.eta + 5e-10)
    assert abs(intersection_residual(HORIZONTAL, drifted)) < 1e-9
    with pytest.raises(InconsistentReflectionError):
        reflect_line(HORIZONTAL, drifted)


def test_reflect_oracle_grazing_ray():
    line = reflect_oracle(HORIZONTAL, SourceRay(1 + 0j, 1j))
    assert line.xi == pytest.approx(1 + 0j, abs=1e-12)
    assert line.eta == pytest.approx(1j, abs=1e-12)


def _random_cases(n: int, seed: int):
    """Random surface frames with an incident ray through their surface point"""
    rng = np.random.default_rng(seed)
    for _ in range(n):
        p = Point3.from_array(rng.uniform(-2, 2, size=3))
        xi0 = complex(*rng.uniform(-2, 2, size=2))
        xi1 = complex(*rng.uniform(-2, 2, size=2))
        frame = SurfaceFrame.from_point(p, xi0)
        ray_line, _ = line_through(p, xi1)
        yield frame, SourceRay(ray_line.xi, ray_line.eta)


def test_reflection_law_matches_the_vector_oracle():
    checked = 0
    for frame, ray in _random_cases(1000, seed=3):
        try:
            law = reflect_line(frame, ray)
        except GeometryError:
            continue
        if abs(law.xi) > 10:
            continue
        oracle = reflect_oracle(frame, ray)
        assert abs(law.xi - oracle.xi) < 1e-10 * max(1.0, abs(law.xi))
        assert abs(law.eta - oracle.eta) < 1e-9 * max(1.0, abs(law.eta))
        checked += 1
    assert checked > 900


def test_angle_of_reflection_equals_angle_of_incidence():
    for frame, ray in _random_cases(1000, seed=4):
        try:
            xi = reflect_direction(frame, ray.xi1)
        except GeometryError:
            continue
        if abs(xi) > 10:
            continue
        n = dir_to_vec(frame.xi0).as_array()
        d_in = dir_to_vec(ray.xi1).as_array()
        d_out = dir_to_vec(xi).as_array()
        assert abs(np.dot(d_in, n) + np.dot(d_out, n)) < 1e-12


def test_normal_incidence_reverses_the_ray():
    rng = np.random.default_rng(9)
    for _ in range(200):
        xi0 = complex(*rng.uniform(-2, 2, size=2))
        if abs(xi0) < 0.3:
            continue
        frame = SurfaceFrame(xi0, 0j, 0.0)
        antipode = -1 / xi0.conjugate()
        assert reflect_direction(frame, antipode) == pytest.approx(xi0, rel=1e-12, abs=1e-12)
        assert reflect_direction(frame, xi0) == pytest.approx(antipode, rel=1e-12, abs=1e-12)
