"""
Cartesian ray tracing and caustic detection.

Nothing here uses line-space coordinates: rays are origin and unit direction
3-vectors, reflection is d' = d - 2 (d.n) n, and caustics are the zeros of the
Jacobian determinant of (u, v, r) -> origin + r dir.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, minimize_scalar
from scipy.spatial import cKDTree

from src.constants import DEFAULT_OPTIONS, TOLERANCES
from src.geometry.cylinder import SingularProfileError, SourceOnMirrorError
from src.geometry.line_space import Point3, UnitVec3
from src.helpers.grid import grid_map
from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("geometry.oracle")


@dataclass(frozen=True)
class Ray3:
    origin: Point3
    dir: UnitVec3

    def __post_init__(self):
        norm = abs(self.dir.h) ** 2 + self.dir.v ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Ray direction must be a unit vector, |dir|^2 = {norm}")

    def at(self, r: float) -> np.ndarray:
        return self.origin.as_array() + r * self.dir.as_array()


@dataclass(frozen=True)
class RayFamily:
    """
    A two-parameter family of rays (u, v) -> Ray3.

    Attributes:
        eval: the ray at parameter (u, v)
        scale: typical length of the scene, used for default scan windows
    """
    eval: Callable[[float, float], Ray3]
    scale: float = 1.0

    @classmethod
    def point_source(cls) -> "RayFamily":
        """Rays leaving the origin; u is the azimuth and v the elevation"""
        def ray(u: float, v: float) -> Ray3:
            direction = np.array([math.cos(v) * math.cos(u), math.cos(v) * math.sin(u), math.sin(v)])
            return Ray3(Point3(0j, 0.0), UnitVec3.from_array(direction))
        return cls(ray)

    @classmethod
    def parallel_beam(cls, direction: Sequence[float] = (0.0, 0.0, 1.0)) -> "RayFamily":
        """Parallel rays with the given direction, launched from the plane through the origin orthogonal to it"""
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = np.cross(d, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(d, e1)
        unit = UnitVec3.from_array(d)

        def ray(u: float, v: float) -> Ray3:
            return Ray3(Point3.from_array(u * e1 + v * e2), unit)
        return cls(ray)

    @classmethod
    def from_profile(cls, p: BaseProfile, orientation: float = 1.0) -> "RayFamily":
        """Rays from a source at the origin after one reflection in the cylinder over p"""
        return cls(lambda u, v: trace_reflect(p, u, v, orientation), scale=p.scale)

    def max_direction_jump(self, grid) -> float:
        """Largest angle in radians between the directions of adjacent grid samples"""
        grid = np.asarray(grid, dtype=complex)
        directions = np.array([[self.eval(mu.real, mu.imag).dir.as_array() for mu in row] for row in grid])
        worst = 0.0
        for axis in (0, 1):
            if directions.shape[axis] < 2:
                continue
            a = np.take(directions, range(directions.shape[axis] - 1), axis=axis)
            b = np.take(directions, range(1, directions.shape[axis]), axis=axis)
            cosines = np.clip(np.sum(a * b, axis=-1), -1.0, 1.0)
            worst = max(worst, float(np.max(np.arccos(cosines))))
        return worst


@dataclass(frozen=True)
class CausticPoint:
    u: float
    v: float
    r: float
    point: Point3


@dataclass
class CausticScan:
    points: List[CausticPoint] = field(default_factory=list)


def trace_reflect(p: BaseProfile, u: float, v: float, orientation: float = 1.0) -> Ray3:
    """Reflect the ray from the origin to the surface point (z0(u), v) off the cylinder's tangent plane there"""
    z0, dz = complex(p.z0(u)), complex(p.dz0(u))
    if abs(dz) < TOLERANCES["SINGULAR_PROFILE"]:
        raise SingularProfileError(f"Profile tangent vanishes at u={u}")
    surface = np.array([z0.real, z0.imag, v])
    distance_sq = float(np.dot(surface, surface))
    if distance_sq < TOLERANCES["SOURCE_ON_MIRROR"]:
        raise SourceOnMirrorError(f"Source lies on the mirror at u={u}, v={v}")

    d = surface / math.sqrt(distance_sq)
    normal_h = orientation * 1j * dz / abs(dz)
    n = np.array([normal_h.real, normal_h.imag, 0.0])
    reflected = d - 2.0 * np.dot(d, n) * n
    return Ray3(Point3(z0, float(v)), UnitVec3.from_array(reflected))


@dataclass(frozen=True)
class _RayJet:
    """A ray with its first derivatives in u and v; the Jacobian determinant is then cheap in r"""
    origin: np.ndarray
    dir: np.ndarray
    origin_u: np.ndarray
    dir_u: np.ndarray
    origin_v: np.ndarray
    dir_v: np.ndarray

    def det(self, r: float) -> float:
        return float(np.linalg.det(np.column_stack([
            self.origin_u + r * self.dir_u, self.origin_v + r * self.dir_v, self.dir,
        ])))

    def planar_det(self, r: float) -> float:
        x_u = self.origin_u + r * self.dir_u
        return float(x_u[0] * self.dir[1] - x_u[1] * self.dir[0])

    def point(self, r: float) -> Point3:
        return Point3.from_array(self.origin + r * self.dir)


def _jet(fam: RayFamily, u: float, v: float, h: Optional[float] = None) -> _RayJet:
    hu = h or DEFAULT_OPTIONS["FD_STEP"] * max(1.0, abs(u))
    hv = h or DEFAULT_OPTIONS["FD_STEP"] * max(1.0, abs(v))

    def arrays(ray: Ray3):
        return ray.origin.as_array(), ray.dir.as_array()

    origin, direction = arrays(fam.eval(u, v))
    ou_p, du_p = arrays(fam.eval(u + hu, v))
    ou_m, du_m = arrays(fam.eval(u - hu, v))
    ov_p, dv_p = arrays(fam.eval(u, v + hv))
    ov_m, dv_m = arrays(fam.eval(u, v - hv))
    return _RayJet(
        origin, direction,
        (ou_p - ou_m) / (2 * hu), (du_p - du_m) / (2 * hu),
        (ov_p - ov_m) / (2 * hv), (dv_p - dv_m) / (2 * hv),
    )


def jacobian_det(fam: RayFamily, u: float, v: float, r: float, h: Optional[float] = None) -> float:
    """det of the 3x3 Jacobian of (u, v, r) -> origin + r dir, by central differences"""
    return _jet(fam, u, v, h).det(r)


def planar_jacobian_det(fam: RayFamily, u: float, v: float, r: float, h: Optional[float] = None) -> float:
    """det of the 2x2 Jacobian of (u, r) -> (x1, x2), the caustic test inside a horizontal plane"""
    return _jet(fam, u, v, h).planar_det(r)


def _roots(f: Callable[[float], float], window: Tuple[float, float], samples: int) -> List[float]:
    rs = np.linspace(window[0], window[1], samples)
    values = np.array([f(r) for r in rs])
    roots = []

    for k in range(samples):
        if values[k] == 0.0:
            roots.append(float(rs[k]))
        elif k + 1 < samples and values[k] * values[k + 1] < 0:
            roots.append(float(bisect(f, rs[k], rs[k + 1], xtol=DEFAULT_OPTIONS["BISECTION_XTOL"])))

    # Tangential roots: a local minimum of |det| near zero without a sign change
    for k in range(1, samples - 1):
        if values[k - 1] * values[k] <= 0 or values[k] * values[k + 1] <= 0:
            continue
        if abs(values[k]) > abs(values[k - 1]) or abs(values[k]) > abs(values[k + 1]):
            continue
        res = minimize_scalar(
            lambda r: abs(f(r)), bounds=(rs[k - 1], rs[k + 1]), method="bounded",
            options=dict(xatol=DEFAULT_OPTIONS["BISECTION_XTOL"]),
        )
        if res.fun < DEFAULT_OPTIONS["DOUBLE_ROOT_DET"]:
            roots.append(float(res.x))

    return sorted(roots)


def caustic_scan(fam: RayFamily, grid: Iterable[complex], r_window: Optional[Tuple[float, float]] = None,
                 samples: int = DEFAULT_OPTIONS["SCAN_SAMPLES"], planar: bool = False,
                 workers: int = 1) -> CausticScan:
    """
    Caustic points of a ray family: for every (u, v) = mu in the grid, the affine
    parameters in r_window where the Jacobian determinant vanishes.

    With planar=True the in-plane (u, r) determinant is used instead, which is the
    caustic of the rays restricted to their horizontal plane.
    """
    if r_window is None:
        extent = DEFAULT_OPTIONS["SCAN_WINDOW_SCALE"] * fam.scale
        r_window = (-extent, extent)
    if not all(math.isfinite(x) for x in r_window):
        raise ValueError(f"Scan window must be finite, got {r_window}")

    def scan(mu: complex) -> List[CausticPoint]:
        jet = _jet(fam, mu.real, mu.imag)
        f = jet.planar_det if planar else jet.det
        return [CausticPoint(mu.real, mu.imag, r, jet.point(r)) for r in _roots(f, r_window, samples)]

    result = CausticScan()
    for points in grid_map(scan, [complex(mu) for mu in np.ravel(grid)], workers):
        result.points.extend(points)
    logger.debug(f"Caustic scan found {len(result.points)} points over window {r_window}")
    return result


def hausdorff(a, b, directed: bool = False, relative: bool = False) -> float:
    """
    Hausdorff distance between point clouds a and b (N x 3 arrays).

    directed=True gives sup over a of the distance to b only. relative=True divides
    by the size of the clouds, max(1, largest coordinate magnitude).
    """
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    if len(a) == 0 or len(b) == 0:
        return 0.0 if len(a) == len(b) or (directed and len(a) == 0) else math.inf

    distance = float(np.max(cKDTree(b).query(a)[0]))
    if not directed:
        distance = max(distance, float(np.max(cKDTree(a).query(b)[0])))
    if relative:
        distance /= max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return distance
