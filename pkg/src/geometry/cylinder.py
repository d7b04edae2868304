"""
Mirrors swept by translating a planar profile z0(u) along the x3-axis, lit by
a point source at the origin.

Surface parameters are (u, v): the profile parameter and the height. Two
orientation choices enter every construction, the sign of the normal direction
(sign0) and the orientation of the ray from the source (branch1).
"""
import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.constants import DEFAULT_OPTIONS, TOLERANCES
from src.geometry.congruence import (
    Diagnostic,
    FocalKind,
    ParametricCongruence,
    WirtingerDerivatives,
    focal_set,
)
from src.geometry.line_space import GeometryError, OrientedLine, Point3, SouthPoleError, dir_to_vec
from src.geometry.reflection import SourceRay, SurfaceFrame
from src.helpers.grid import grid_map
from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("geometry.cylinder")


class SingularProfileError(GeometryError):
    """Raised when the profile tangent vanishes"""
    code = "singular_profile"


class DegenerateFocalError(GeometryError):
    """Raised when the focal surface lies at infinity"""
    code = "degenerate_focal"


class SourceOnMirrorError(GeometryError):
    """Raised when the source sits on the mirror"""
    code = "source_on_mirror"


class Sign(str, Enum):
    PLUS = "Plus"
    MINUS = "Minus"

    @property
    def factor(self) -> float:
        return 1.0 if self is Sign.PLUS else -1.0


ALL_SIGNS: Tuple[Tuple[Sign, Sign], ...] = tuple(product(Sign, Sign))


@dataclass(frozen=True)
class CylinderParam:
    u: float
    v: float
    sign0: Sign = Sign.PLUS
    branch1: Sign = Sign.PLUS


@dataclass(frozen=True)
class NumericFocalPoint:
    u: float
    v: float
    sign0: Sign
    branch1: Sign
    branch: int
    r: float
    kind: FocalKind
    point: Point3
    virtual: bool


@dataclass
class NumericFocalScan:
    points: List[NumericFocalPoint]
    diagnostics: List[Diagnostic]


###################
# Normal congruence
###################
def _tangent(p: BaseProfile, u: float) -> complex:
    dz = complex(p.dz0(u))
    if abs(dz) < TOLERANCES["SINGULAR_PROFILE"]:
        raise SingularProfileError(f"Profile tangent vanishes at u={u}")
    return dz


def _orientation(p: BaseProfile) -> float:
    """+1 or -1, so that Plus is the principal root of -dz0/conj(dz0) at the left end of u_range"""
    u_start = p.u_range[0]
    dz = _tangent(p, u_start)
    phase = cmath.phase(dz)
    # principal argument of -dz/conj(dz) = exp(i(2 phase + pi)), folded into (-pi, pi]
    principal = cmath.exp(0.5j * (math.pi - (-2.0 * phase) % (2 * math.pi)))
    candidate = -1j * dz / abs(dz)
    return 1.0 if (candidate.conjugate() * principal).real > 0 else -1.0


def normal_direction(p: BaseProfile, u: float, sign0: Sign = Sign.PLUS) -> complex:
    """xi0(u), a square root of -dz0/conj(dz0) continued continuously along the profile"""
    dz = _tangent(p, u)
    return _orientation(p) * sign0.factor * (-1j) * dz / abs(dz)


def normal_congruence(p: BaseProfile, q: CylinderParam) -> SurfaceFrame:
    xi0 = normal_direction(p, q.u, q.sign0)
    return SurfaceFrame.from_point(Point3(complex(p.z0(q.u)), q.v), xi0)


def normal_line_congruence(p: BaseProfile, sign0: Sign = Sign.PLUS) -> ParametricCongruence:
    """The mirror's normal lines over mu = u + iv, with analytic Wirtinger derivatives"""
    epsilon = _orientation(p) * sign0.factor

    def evaluate(mu: complex) -> Tuple[complex, complex]:
        frame = normal_congruence(p, CylinderParam(mu.real, mu.imag, sign0))
        return frame.xi0, frame.eta0

    def derivs(mu: complex) -> WirtingerDerivatives:
        u, v = mu.real, mu.imag
        z, dz, ddz = complex(p.z0(u)), _tangent(p, u), complex(p.ddz0(u))
        speed = abs(dz)
        xi0 = epsilon * (-1j) * dz / speed
        xi0_u = epsilon * (-1j) * (ddz / speed - dz * (ddz * dz.conjugate()).real / speed ** 3)
        eta_u = 0.5 * (dz - 2 * v * xi0_u - dz.conjugate() * xi0 ** 2 - 2 * z.conjugate() * xi0 * xi0_u)
        eta_v = -xi0
        return WirtingerDerivatives(
            d_xi=0.5 * xi0_u,
            dbar_xi=0.5 * xi0_u,
            d_eta=0.5 * (eta_u - 1j * eta_v),
            dbar_eta=0.5 * (eta_u + 1j * eta_v),
        )

    return ParametricCongruence(evaluate, derivs)


###################
# Point source
###################
def source_ray(p: BaseProfile, q: CylinderParam) -> SourceRay:
    """
    The line through the source (origin) and the surface point (z0(u), v).

    Plus is oriented from the source toward the mirror. Of the two algebraically
    equal forms of each branch, the one without cancellation is used.
    """
    z0, v = complex(p.z0(q.u)), q.v
    length_sq = abs(z0) ** 2 + v * v
    if length_sq < TOLERANCES["SOURCE_ON_MIRROR"]:
        raise SourceOnMirrorError(f"Source lies on the mirror at u={q.u}, v={v}")
    length = math.sqrt(length_sq)

    toward_mirror = q.branch1 is Sign.PLUS
    # (L - v)/conj(z0) == z0/(L + v); the second form fails only at the south pole
    use_conjugate_form = (v < 0) if toward_mirror else (v > 0)
    if use_conjugate_form:
        if abs(z0) <= TOLERANCES["SOUTH_POLE"] * length:
            raise SouthPoleError(f"Source ray at u={q.u}, v={v} points to the south pole")
        xi1 = (length - v) / z0.conjugate() if toward_mirror else -(length + v) / z0.conjugate()
    else:
        xi1 = z0 / (length + v) if toward_mirror else -z0 / (length - v)
    return SourceRay(complex(xi1), 0j)


def reflected_point_source(p: BaseProfile, q: CylinderParam) -> OrientedLine:
    frame = normal_congruence(p, q)
    xi0, r0 = frame.xi0, frame.r0
    xi1 = source_ray(p, q).xi1
    xi = -(xi0 ** 2) * xi1.conjugate()
    eta = (xi0.conjugate() - xi0 * xi1.conjugate() ** 2) * xi0 ** 2 * r0
    return OrientedLine(xi, eta)


def reflected_congruence(p: BaseProfile, sign0: Sign = Sign.PLUS, branch1: Sign = Sign.PLUS) -> ParametricCongruence:
    """The reflected point-source congruence over mu = u + iv; derivatives by finite differences"""
    def evaluate(mu: complex) -> Tuple[complex, complex]:
        line = reflected_point_source(p, CylinderParam(mu.real, mu.imag, sign0, branch1))
        return line.xi, line.eta

    return ParametricCongruence(evaluate)


###################
# Closed-form focal set
###################
def focal_curve(p: BaseProfile, u: float) -> Point3:
    """The image of the source in the tangent plane at u"""
    z0, dz = complex(p.z0(u)), _tangent(p, u)
    return Point3((z0 * dz.conjugate() - z0.conjugate() * dz) / dz.conjugate(), 0.0)


def _surface_terms(p: BaseProfile, u: float):
    z0, dz, ddz = complex(p.z0(u)), _tangent(p, u), complex(p.ddz0(u))
    z0b, dzb, ddzb = z0.conjugate(), dz.conjugate(), ddz.conjugate()
    terms = (
        2 * ddz * dzb * z0 * z0b,
        -2 * ddzb * dz * z0 * z0b,
        -(dz ** 2) * dzb * z0b,
        dz * dzb ** 2 * z0,
    )
    return z0, dz, ddz, sum(terms), max(abs(t) for t in terms)


def focal_surface_margin(p: BaseProfile, u: float) -> float:
    """|denominator| / largest term of the focal-surface denominator; small means near-degenerate"""
    *_, denominator, scale = _surface_terms(p, u)
    return abs(denominator) / scale if scale > 0 else 0.0


def focal_surface(p: BaseProfile, u: float, v: float) -> Point3:
    z0, dz, ddz, denominator, scale = _surface_terms(p, u)
    if scale == 0 or abs(denominator) <= TOLERANCES["DEGENERATE_FOCAL"] * scale:
        raise DegenerateFocalError(f"Focal surface is at infinity at u={u}")

    z0b, dzb, ddzb = z0.conjugate(), dz.conjugate(), ddz.conjugate()
    numerator = (
        2 * ddz * dzb * z0 ** 2 * z0b
        - 2 * ddzb * dz * z0 ** 2 * z0b
        + dz ** 3 * z0b ** 2
        - 2 * dz ** 2 * dzb * z0 * z0b
        + dz * dzb ** 2 * z0 ** 2
    )
    t = 2 * v * z0 * z0b * (ddzb * dz - ddz * dzb) / denominator
    return Point3(numerator / denominator, t.real)


def is_virtual(p: BaseProfile, q: CylinderParam, point: Point3) -> bool:
    """True when point lies behind the mirror's tangent plane at q, on the side away from the source"""
    surface = np.array([p.z0(q.u).real, p.z0(q.u).imag, q.v])
    normal = dir_to_vec(normal_direction(p, q.u)).as_array()
    source_side = float(np.dot(-surface, normal))
    point_side = float(np.dot(point.as_array() - surface, normal))
    return source_side * point_side < 0


###################
# Numeric focal set
###################
def focal_set_numeric(p: BaseProfile, grid: Iterable[complex],
                      signs: Sequence[Tuple[Sign, Sign]] = ((Sign.PLUS, Sign.PLUS),),
                      rebase: float = DEFAULT_OPTIONS["REBASE"], workers: int = 1) -> NumericFocalScan:
    """
    Focal points of the reflected congruence, from its optical scalars.

    Output order is grid order, then sign combination, then root branch.
    """
    congruences = [(sign0, branch1, reflected_congruence(p, sign0, branch1)) for sign0, branch1 in signs]

    def solve(mu: complex):
        points, diagnostics = [], []
        for sign0, branch1, c in congruences:
            scan = focal_set(c, [mu], rebase=rebase)
            for focal in scan.points:
                q = CylinderParam(mu.real, mu.imag, sign0, branch1)
                points.append(NumericFocalPoint(
                    mu.real, mu.imag, sign0, branch1, focal.branch, focal.r, focal.kind,
                    focal.point, is_virtual(p, q, focal.point),
                ))
            diagnostics.extend(
                Diagnostic(d.mu, d.code, f"{sign0.value}{branch1.value}: {d.detail}") for d in scan.diagnostics
            )
        return points, diagnostics

    results = grid_map(solve, [complex(mu) for mu in np.ravel(grid)], workers)
    scan = NumericFocalScan([], [])
    for points, diagnostics in results:
        scan.points.extend(points)
        scan.diagnostics.extend(diagnostics)
    if scan.diagnostics:
        logger.debug(f"Numeric focal set: {len(scan.diagnostics)} grid points reported diagnostics")
    return scan
