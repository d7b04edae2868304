"""
Coordinates on the space of oriented affine lines in Euclidean 3-space.

A direction is the stereographic coordinate ``xi`` of a point on the unit
sphere, projected from the south pole. An oriented line is the pair
``(xi, eta)``, where ``eta`` is the fibre coordinate fixing the line among
all lines with direction ``xi``. Points are stored as ``z = x1 + i x2`` and
``t = x3``.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.constants import TOLERANCES

logger = logging.getLogger("geometry.line_space")

# Stereographic coordinate of a direction; finite by construction
DirCoord = complex


class GeometryError(Exception):
    """Base exception for the geometry kernels"""
    code = "geometry"


class SouthPoleError(GeometryError):
    """Raised when a direction is the south pole, which has no chart coordinate"""
    code = "south_pole"


@dataclass(frozen=True)
class Point3:
    z: complex
    t: float

    def as_array(self) -> np.ndarray:
        return np.array([self.z.real, self.z.imag, self.t])

    @classmethod
    def from_array(cls, x) -> "Point3":
        return cls(complex(float(x[0]), float(x[1])), float(x[2]))

    def distance(self, other: "Point3") -> float:
        return math.hypot(abs(self.z - other.z), self.t - other.t)


@dataclass(frozen=True)
class UnitVec3:
    h: complex
    v: float

    def as_array(self) -> np.ndarray:
        return np.array([self.h.real, self.h.imag, self.v])

    @classmethod
    def from_array(cls, x) -> "UnitVec3":
        x = np.asarray(x, dtype=float)
        x = x / np.linalg.norm(x)
        return cls(complex(x[0], x[1]), float(x[2]))

    def dot(self, other: "UnitVec3") -> float:
        return (self.h * other.h.conjugate()).real + self.v * other.v


@dataclass(frozen=True)
class OrientedLine:
    xi: DirCoord
    eta: complex

    def __post_init__(self):
        if not (cmath.isfinite(self.xi) and cmath.isfinite(self.eta)):
            raise SouthPoleError(f"Line coordinates must be finite, got xi={self.xi}, eta={self.eta}")


def dir_to_vec(xi: DirCoord) -> UnitVec3:
    """Unit vector of the direction with stereographic coordinate xi"""
    n = 1.0 + abs(xi) ** 2
    return UnitVec3(2.0 * xi / n, (1.0 - abs(xi) ** 2) / n)


def vec_to_dir(u: UnitVec3) -> DirCoord:
    """Stereographic coordinate of a unit vector, xi = h / (1 + v)"""
    if u.v + 1.0 <= TOLERANCES["SOUTH_POLE"]:
        raise SouthPoleError(f"Direction ({u.h}, {u.v}) is the south pole")
    return u.h / (1.0 + u.v)


def direction(line: OrientedLine) -> UnitVec3:
    return dir_to_vec(line.xi)


def incidence(line: OrientedLine, r: float) -> Point3:
    """The point at affine distance r from the foot of the line (its point closest to the origin)"""
    xi, eta = line.xi, line.eta
    n = 1.0 + xi * xi.conjugate()
    z = (2.0 * (eta - eta.conjugate() * xi ** 2) + 2.0 * xi * n * r) / n ** 2
    t = (-2.0 * (eta * xi.conjugate() + eta.conjugate() * xi) + (1.0 - (xi * xi.conjugate()) ** 2) * r) / n ** 2
    return Point3(complex(z), t.real)


def line_through(p: Point3, xi: DirCoord) -> Tuple[OrientedLine, float]:
    """The oriented line with direction xi through p, and the affine parameter of p on it"""
    z, t = p.z, p.t
    eta = 0.5 * (z - 2.0 * t * xi - z.conjugate() * xi ** 2)
    r = (xi.conjugate() * z + xi * z.conjugate() + (1.0 - abs(xi) ** 2) * t) / (1.0 + abs(xi) ** 2)
    return OrientedLine(xi, eta), r.real


def closest_point_orthogonality(line: OrientedLine) -> float:
    """|<foot point, direction>|, zero for every valid line"""
    foot = incidence(line, 0.0).as_array()
    return abs(float(np.dot(foot, direction(line).as_array())))
