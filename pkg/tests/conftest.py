import cmath
import json
import math

import numpy as np
import pytest

from src.geometry.congruence import ParametricCongruence
from src.profiles.circle_profile import CircleProfile
from src.profiles.ellipse_profile import EllipseProfile
from src.profiles.parabola_profile import ParabolaProfile
from src.profiles.polynomial_profile import PolynomialProfile


@pytest.fixture
def circle():
    return CircleProfile({"R": 1.0, "center": 0j}, (0.0, 2 * math.pi))


@pytest.fixture
def ellipse():
    return EllipseProfile({"a": 2.0, "b": 1.0}, (0.1, 1.4))


@pytest.fixture
def parabola():
    return ParabolaProfile({"f": 1.0, "vertex_offset": 0.0}, (-2.0, 2.0))


@pytest.fixture
def plane():
    """The mirror plane x2 = 0, z0 = u"""
    return PolynomialProfile({"coeffs": [0j, 1 + 0j]}, (-2.0, 2.0))


@pytest.fixture
def point_source():
    return ParametricCongruence(lambda mu: (mu, 0j))


@pytest.fixture
def cylinder_normals():
    """Normals of the unit circular cylinder, mu = u + iv, finite-difference derivatives"""
    return ParametricCongruence(lambda mu: (cmath.exp(1j * mu.real), -mu.imag * cmath.exp(1j * mu.real)))


def random_polynomial(rng: np.random.Generator, u_range=(-0.5, 0.5)) -> PolynomialProfile:
    """A gently curved polynomial profile well away from the source at the origin"""
    coeffs = [
        complex(1.5 + 0.5 * rng.random(), rng.normal(scale=0.3)),
        complex(rng.normal(scale=0.2), 1.0 + 0.3 * rng.random()),
        complex(rng.normal(scale=0.3), rng.normal(scale=0.3)),
        complex(rng.normal(scale=0.1), rng.normal(scale=0.1)),
    ]
    return PolynomialProfile({"coeffs": coeffs}, u_range)


@pytest.fixture
def random_polynomials():
    rng = np.random.default_rng(20240611)
    return [random_polynomial(rng) for _ in range(20)]


@pytest.fixture
def circle_config_file(tmp_path):
    def write(**overrides):
        document = {
            "profile": {"type": "circle", "R": 1.0, "center": 0},
            "u_range": [0.2, 2.2],
            "v_range": [-0.5, 0.5],
            "u_samples": 6,
            "v_samples": 5,
        }
        document.update(overrides)
        path = tmp_path / "circle.json"
        path.write_text(json.dumps(document))
        return path
    return write
