import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from src.geometry.congruence import (
    FocalBlowupError,
    FocalKind,
    Flatness,
    NonIntegrableError,
    OpticalScalars,
    ParametricCongruence,
    TwistedCongruenceError,
    classify_flatness,
    d_minus_eta,
    d_plus_eta,
    focal_distances,
    focal_set,
    integrate_wavefront,
    optical_scalars,
    sachs_denominator,
    sachs_evolve,
    sachs_residual,
)
from src.geometry.cylinder import CylinderParam, normal_congruence, normal_line_congruence, reflected_congruence
from src.geometry.line_space import Point3, line_through
from src.helpers.grid import make_grid

bounded = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


###################
# Derivatives and optical scalars
###################
def test_point_source_derivatives(point_source):
    mu = 0.3 + 0.4j
    assert d_plus_eta(point_source, mu, 2.0) == pytest.approx(2.0, abs=1e-8)
    assert abs(d_minus_eta(point_source, mu, 2.0)) < 1e-8


def test_cylinder_normal_derivatives(cylinder_normals):
    u, v, r = 0.3, 0.2, 1.5
    mu = complex(u, v)
    assert d_plus_eta(cylinder_normals, mu, r) == pytest.approx(0.5j * cmath.exp(1j * u) * (1 + r), abs=1e-8)
    assert d_minus_eta(cylinder_normals, mu, r) == pytest.approx(0.5j * cmath.exp(1j * u) * (r - 1), abs=1e-8)


def test_point_source_optical_scalars(point_source):
    s = optical_scalars(point_source, 0.5 + 0.5j, 2.0)
    assert s.rho == pytest.approx(-0.5, abs=1e-8)
    assert abs(s.sigma) < 1e-8
    assert s.kappa == pytest.approx(0.25, abs=1e-8)


def test_point_source_blows_up_at_the_source(point_source):
    with pytest.raises(FocalBlowupError):
        optical_scalars(point_source, 0.5 + 0.5j, 0.0)


def test_cylinder_normal_optical_scalars(cylinder_normals):
    s = optical_scalars(cylinder_normals, 0j, 1.0)
    assert s.rho == pytest.approx(-0.5, abs=1e-8)
    assert s.sigma == pytest.approx(0.5, abs=1e-8)
    assert abs(s.kappa) < 1e-8


def test_kappa_must_match_rho_and_sigma():
    with pytest.raises(ValueError):
        OpticalScalars(1.0 + 0j, 0j, 0.5)


###################
# Sachs evolution
###################
def test_sachs_evolution_examples():
    s = sachs_evolve(OpticalScalars.from_rho_sigma(-1.0, 0.0), 1.0)
    assert s.rho == pytest.approx(-0.5) and s.sigma == 0 and s.kappa == pytest.approx(0.25)

    assert sachs_evolve(OpticalScalars.from_rho_sigma(0.0, 0.0), 3.0).rho == 0

    s = sachs_evolve(OpticalScalars.from_rho_sigma(0.5, 0.5), 0.5)
    assert s.rho == pytest.approx(1.0) and s.sigma == pytest.approx(1.0)

    with pytest.raises(FocalBlowupError):
        sachs_evolve(OpticalScalars.from_rho_sigma(0.5, 0.5), 1.0)


def test_sachs_equations_hold_along_random_rays():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(100):
        rho = complex(*rng.uniform(-1, 1, size=2))
        sigma = complex(*rng.uniform(-1, 1, size=2))
        s0 = OpticalScalars.from_rho_sigma(rho, sigma)
        for r in rng.uniform(-1, 1, size=10):
            h = 1e-5
            if min(abs(sachs_denominator(s0, x)) for x in (r - h, r, r + h)) < 0.5:
                continue
            rho_residual, sigma_residual = sachs_residual(s0, r, h)
            assert rho_residual < 1e-6
            assert sigma_residual < 1e-6
            checked += 1
    assert checked > 100


###################
# Focal distances
###################
@pytest.mark.parametrize("rho, sigma, kind, roots", [
    (1.0, 0.0, FocalKind.DOUBLE, (1.0,)),
    (0.5, 0.5, FocalKind.FLAT_ONE, (1.0,)),
    (2.0, 1.0, FocalKind.TWO_REAL, (1.0 / 3.0, 1.0)),
    (1j, 0.0, FocalKind.NO_REAL, ()),
    (0.0, 0.0, FocalKind.FLAT_EMPTY, ()),
])
def test_focal_distance_examples(rho, sigma, kind, roots):
    solution = focal_distances(OpticalScalars.from_rho_sigma(rho, sigma))
    assert solution.kind is kind
    assert solution.roots == pytest.approx(roots)


@given(bounded, bounded, bounded, bounded)
@settings(max_examples=300)
def test_focal_distances_solve_the_quadratic(theta, twist, sigma_re, sigma_im):
    s0 = OpticalScalars.from_rho_sigma(complex(theta, twist), complex(sigma_re, sigma_im))
    discriminant = 4 * (abs(s0.sigma) ** 2 - twist ** 2)
    assume(abs(s0.kappa) > 1e-3)
    assume(abs(discriminant) > 1e-6)

    solution = focal_distances(s0)
    assert (solution.kind is FocalKind.TWO_REAL) == (discriminant > 0)
    for r in solution.roots:
        assert abs(sachs_denominator(s0, r)) < 1e-9 * max(1.0, abs(s0.kappa) * r * r, abs(theta * r))


def test_scalars_blow_up_exactly_at_the_focal_distances():
    rng = np.random.default_rng(5)
    checked = 0
    for _ in range(100):
        s0 = OpticalScalars.from_rho_sigma(complex(*rng.uniform(-2, 2, size=2)), complex(*rng.uniform(-2, 2, size=2)))
        solution = focal_distances(s0)
        if abs(s0.kappa) < 0.1 or solution.kind is not FocalKind.TWO_REAL:
            continue
        r1, r2 = solution.roots
        if r2 - r1 < 0.3:
            continue
        for r in (r1, r2):
            assert abs(sachs_denominator(s0, r)) < 1e-9 * max(1.0, abs(s0.kappa) * r * r)
            for nearby in (r - 0.1, r + 0.1):
                assert abs(sachs_denominator(s0, nearby)) > 1e-3
                sachs_evolve(s0, nearby)
        checked += 1
    assert checked > 5


###################
# Flatness and focal sets
###################
def test_cylinder_normals_are_flat(circle):
    assert classify_flatness(normal_line_congruence(circle), 0.4 + 0.2j) is Flatness.FLAT


def test_point_source_is_not_flat(point_source):
    assert classify_flatness(point_source, 0.4 + 0.2j) is Flatness.NON_FLAT


def test_parallel_beam_is_flat():
    beam = ParametricCongruence(lambda mu: (0.3 + 0.1j, mu))
    assert classify_flatness(beam, 0.4 + 0.2j) is Flatness.FLAT


def test_point_source_focal_set_is_the_source(point_source):
    grid = make_grid([0.2, 0.5, 0.8], [-0.3, 0.3])
    scan = focal_set(point_source, grid)
    assert not scan.diagnostics
    assert len(scan.points) == grid.size
    for focal in scan.points:
        assert focal.kind is FocalKind.DOUBLE
        assert focal.point.distance(Point3(0j, 0.0)) < 1e-6


def test_parallel_beam_has_no_focal_points():
    beam = ParametricCongruence(lambda mu: (0j, mu))
    scan = focal_set(beam, make_grid([0.0, 1.0], [0.0, 1.0]))
    assert scan.points == []
    assert scan.diagnostics == []


def test_cylinder_normals_focus_on_the_axis(circle):
    scan = focal_set(normal_line_congruence(circle), make_grid(np.linspace(0.2, 3.0, 5), [-0.5, 0.0, 0.7]))
    assert len(scan.points) == 15
    for focal in scan.points:
        assert focal.kind is FocalKind.FLAT_ONE
        assert abs(focal.point.z) < 1e-6
        assert focal.point.t == pytest.approx(focal.mu.imag, abs=1e-6)


def test_focal_set_preserves_grid_order_with_workers(circle):
    grid = make_grid(np.linspace(0.2, 3.0, 7), np.linspace(-0.5, 0.5, 3))
    c = reflected_congruence(circle)
    serial = focal_set(c, grid, workers=1)
    threaded = focal_set(c, grid, workers=4)
    assert [(f.mu, f.branch, f.r) for f in serial.points] == [(f.mu, f.branch, f.r) for f in threaded.points]


###################
# Wavefronts
###################
def test_point_source_wavefronts_are_spheres(point_source):
    grid = make_grid(np.linspace(0.2, 0.8, 4), np.linspace(0.2, 0.8, 4))
    surface = integrate_wavefront(point_source, complex(grid[0, 0]), 1.0, grid)
    np.testing.assert_allclose(surface.r, 1.0, atol=1e-9)
    assert surface.closure_residual < 1e-9


def test_cylinder_normal_wavefronts_are_coaxial_cylinders(circle):
    grid = make_grid(np.linspace(0.1, 2.0, 6), np.linspace(-1.0, 1.0, 5))
    surface = integrate_wavefront(normal_line_congruence(circle), complex(grid[0, 0]), 1.0, grid)
    np.testing.assert_allclose(surface.r, 1.0, atol=1e-9)


def test_twisted_congruence_has_no_wavefronts():
    twisted = ParametricCongruence(lambda mu: (mu, 0.1j * mu.conjugate()))
    grid = make_grid([0.45, 0.5, 0.55], [0.45, 0.5, 0.55])
    with pytest.raises(TwistedCongruenceError):
        integrate_wavefront(twisted, complex(grid[0, 0]), 0.0, grid)


def test_wavefront_start_must_be_a_grid_node(point_source):
    grid = make_grid([0.2, 0.4], [0.2, 0.4])
    with pytest.raises(ValueError):
        integrate_wavefront(point_source, 0.3 + 0.3j, 1.0, grid)


def test_reflected_circle_wavefronts_keep_optical_path_constant(circle):
    """From the source to the mirror and on to the wavefront, the path length is the same for every ray"""
    grid = make_grid(np.linspace(0.2, 0.6, 5), np.linspace(-0.2, 0.2, 41))
    c = reflected_congruence(circle)
    mu0 = complex(grid[0, 0])
    start = normal_congruence(circle, CylinderParam(mu0.real, mu0.imag)).surface_point
    _, r0 = line_through(start, c.line(mu0).xi)

    surface = integrate_wavefront(c, mu0, r0, grid, closure_tol=1e-3)
    length = np.sqrt(1 + grid.imag ** 2)
    expected = r0 + 2 / math.sqrt(1 + mu0.imag ** 2) - 2 / length
    np.testing.assert_allclose(surface.r, expected, atol=1e-4)


def test_non_integrable_gradient_is_reported():
    grid = make_grid(np.linspace(0.2, 0.8, 3), np.linspace(0.2, 0.8, 3))
    sheared = ParametricCongruence(lambda mu: (mu, 0.05 * mu.real * mu.imag))
    with pytest.raises(NonIntegrableError):
        integrate_wavefront(sheared, complex(grid[0, 0]), 1.0, grid, closure_tol=1e-12, twist_tol=1.0)
