"""
Reflection of oriented lines off an oriented surface, in line-space coordinates.

A surface point is carried by a SurfaceFrame: the normal line (xi0, eta0)
together with the affine parameter r0 of the surface point on it. Incoming
rays are only reflected when they actually pass through that point.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.constants import TOLERANCES
from src.geometry.line_space import (
    GeometryError,
    OrientedLine,
    Point3,
    SouthPoleError,
    UnitVec3,
    dir_to_vec,
    incidence,
    line_through,
    vec_to_dir,
)

logger = logging.getLogger("geometry.reflection")


class NotIncidentError(GeometryError):
    """Raised when an incoming ray misses the surface point of the frame"""
    code = "not_incident"


class InconsistentReflectionError(GeometryError):
    """Raised when the two closed forms of the reflected fibre coordinate disagree"""
    code = "inconsistent_reflection"


@dataclass(frozen=True)
class SurfaceFrame:
    xi0: complex
    eta0: complex
    r0: float

    @classmethod
    def from_point(cls, p: Point3, xi0: complex) -> "SurfaceFrame":
        """The frame at surface point p with unit normal direction xi0"""
        normal, r0 = line_through(p, complex(xi0))
        return cls(normal.xi, normal.eta, r0)

    @property
    def normal(self) -> OrientedLine:
        return OrientedLine(self.xi0, self.eta0)

    @property
    def surface_point(self) -> Point3:
        return incidence(self.normal, self.r0)


@dataclass(frozen=True)
class SourceRay:
    xi1: complex
    eta1: complex

    @property
    def line(self) -> OrientedLine:
        return OrientedLine(self.xi1, self.eta1)


def _denominator(f: SurfaceFrame, xi1: complex) -> complex:
    xi0 = f.xi0
    return (1.0 - abs(xi0) ** 2) * xi1.conjugate() - 2.0 * xi0.conjugate()


def reflect_direction(f: SurfaceFrame, xi1: complex) -> complex:
    xi0 = complex(f.xi0)
    xi1 = complex(xi1)
    denominator = _denominator(f, xi1)
    if abs(denominator) <= TOLERANCES["SOUTH_POLE"] * max(1.0, abs(xi0) ** 2 * abs(xi1), abs(xi1), abs(xi0)):
        raise SouthPoleError(f"Ray xi1={xi1} reflects to the south pole off normal xi0={xi0}")
    return (2.0 * xi0 * xi1.conjugate() + 1.0 - abs(xi0) ** 2) / denominator


def intersection_residual(f: SurfaceFrame, ray: SourceRay) -> complex:
    """Zero exactly when the ray passes through the surface point of the frame"""
    xi0, eta0, r0 = complex(f.xi0), complex(f.eta0), f.r0
    xi1, eta1 = complex(ray.xi1), complex(ray.eta1)
    n = 1.0 + abs(xi0) ** 2
    on_surface = ((1.0 + xi0.conjugate() * xi1) ** 2 * eta0 - (xi0 - xi1) ** 2 * eta0.conjugate()) / n ** 2
    return eta1 - on_surface - (xi0 - xi1) * (1.0 + xi0.conjugate() * xi1) * r0 / n


def reflect_line(f: SurfaceFrame, ray: SourceRay) -> OrientedLine:
    """
    Reflect an incoming ray off the frame's surface point.

    The fibre coordinate is computed from the frame's normal line and, independently,
    from the incoming ray's own fibre coordinate; both must agree.

    Raises:
        NotIncidentError: if the ray does not meet the surface point
        InconsistentReflectionError: if the two forms of eta disagree
        SouthPoleError: if the reflected direction has no chart coordinate
    """
    xi0, eta0, r0 = complex(f.xi0), complex(f.eta0), f.r0
    xi1, eta1 = complex(ray.xi1), complex(ray.eta1)

    residual = intersection_residual(f, ray)
    if abs(residual) > TOLERANCES["INCIDENCE"] * max(1.0, abs(eta1), abs(r0)):
        raise NotIncidentError(f"Ray ({xi1}, {eta1}) misses the surface point (residual {abs(residual):.3g})")

    xi = reflect_direction(f, xi1)
    denominator = _denominator(f, xi1)
    n = 1.0 + abs(xi0) ** 2
    a = xi0.conjugate() - xi1.conjugate()
    b = 1.0 + xi0 * xi1.conjugate()

    eta_from_normal = (a ** 2 * eta0 - b ** 2 * eta0.conjugate() + a * b * n * r0) / denominator ** 2
    eta_from_ray = (-(n ** 2) * eta1.conjugate() + 2.0 * a * b * n * r0) / denominator ** 2

    # The forms differ by n^2 conj(residual) / denominator^2, which grows near grazing directions
    drift = eta_from_ray - eta_from_normal
    if abs(drift) > TOLERANCES["REFLECTION_FORMS"] * max(1.0, abs(eta0), abs(eta1), abs(r0)):
        raise InconsistentReflectionError(
            f"Reflected eta forms disagree by {abs(drift):.3g} for frame {f} and ray {ray}"
        )
    return OrientedLine(xi, eta_from_normal)


def reflect_oracle(f: SurfaceFrame, ray: SourceRay) -> OrientedLine:
    """Vector law of reflection d' = d - 2 (d.n) n through the surface point, as an oriented line"""
    d = dir_to_vec(complex(ray.xi1)).as_array()
    n = dir_to_vec(complex(f.xi0)).as_array()
    reflected = d - 2.0 * np.dot(d, n) * n
    line, _ = line_through(f.surface_point, vec_to_dir(UnitVec3.from_array(reflected)))
    return line
