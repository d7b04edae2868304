"""
Parametric line congruences: optical scalars, their evolution along the rays,
focal sets and orthogonal wavefronts.

A congruence is a map mu -> (xi, eta) on a complex parameter domain. All
first-order quantities are built from the Wirtinger derivatives
d = (d/du - i d/dv) / 2 and dbar = (d/du + i d/dv) / 2 of xi and eta.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from src.constants import DEFAULT_OPTIONS, TOLERANCES
from src.geometry.line_space import GeometryError, OrientedLine, Point3, incidence
from src.helpers.grid import grid_map

logger = logging.getLogger("geometry.congruence")


class DegenerateChartError(GeometryError):
    """Raised when a congruence leaves the coordinate chart"""
    code = "degenerate_chart"


class FocalBlowupError(GeometryError):
    """Raised when the optical scalars blow up, i.e. at a focal point"""
    code = "focal_blowup"


class TwistedCongruenceError(GeometryError):
    """Raised when wavefronts are requested for a congruence with twist"""
    code = "twisted"


class NonIntegrableError(GeometryError):
    """Raised when the wavefront equation fails its loop-closure test"""
    code = "non_integrable"


@dataclass(frozen=True)
class WirtingerDerivatives:
    d_xi: complex
    dbar_xi: complex
    d_eta: complex
    dbar_eta: complex


@dataclass(frozen=True)
class ParametricCongruence:
    """
    A 2-parameter family of oriented lines.

    Attributes:
        evaluate: mu -> (xi, eta)
        derivs: optional analytic Wirtinger derivatives at mu
        fd_step: finite-difference step; defaults to 1e-5 * max(1, |mu|)
    """
    evaluate: Callable[[complex], Tuple[complex, complex]]
    derivs: Optional[Callable[[complex], WirtingerDerivatives]] = None
    fd_step: Optional[float] = None

    def line(self, mu: complex) -> OrientedLine:
        xi, eta = self.evaluate(mu)
        if not (cmath.isfinite(xi) and cmath.isfinite(eta)):
            raise DegenerateChartError(f"Congruence leaves the chart at mu={mu}")
        return OrientedLine(complex(xi), complex(eta))


@dataclass(frozen=True)
class OpticalScalars:
    rho: complex
    sigma: complex
    kappa: float

    def __post_init__(self):
        expected = abs(self.rho) ** 2 - abs(self.sigma) ** 2
        scale = max(1.0, abs(self.rho) ** 2, abs(self.sigma) ** 2)
        if abs(expected - self.kappa) > TOLERANCES["IDENTITY"] * scale:
            raise ValueError(f"kappa={self.kappa} does not match |rho|^2 - |sigma|^2 = {expected}")

    @classmethod
    def from_rho_sigma(cls, rho: complex, sigma: complex) -> "OpticalScalars":
        rho, sigma = complex(rho), complex(sigma)
        return cls(rho, sigma, abs(rho) ** 2 - abs(sigma) ** 2)

    @property
    def theta(self) -> float:
        return self.rho.real

    @property
    def twist(self) -> float:
        return self.rho.imag

    @property
    def scale(self) -> float:
        return max(abs(self.rho), abs(self.sigma), 1.0)


class FocalKind(str, Enum):
    FLAT_EMPTY = "FlatEmpty"
    FLAT_ONE = "FlatOne"
    NO_REAL = "NoReal"
    DOUBLE = "Double"
    TWO_REAL = "TwoReal"


class Flatness(str, Enum):
    FLAT = "Flat"
    NON_FLAT = "NonFlat"


@dataclass(frozen=True)
class FocalSolution:
    kind: FocalKind
    roots: Tuple[float, ...] = ()

    def shifted(self, base: float) -> "FocalSolution":
        """Roots of a quadratic written about r = base, reported in the original parameter"""
        return FocalSolution(self.kind, tuple(r + base for r in self.roots))


@dataclass(frozen=True)
class Diagnostic:
    mu: complex
    code: str
    detail: str


@dataclass(frozen=True)
class FocalPoint:
    mu: complex
    branch: int
    r: float
    kind: FocalKind
    point: Point3


@dataclass
class FocalScan:
    points: List[FocalPoint] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)


@dataclass
class Wavefront:
    grid: np.ndarray
    r: np.ndarray
    closure_residual: float

    @property
    def samples(self) -> List[Tuple[complex, float]]:
        return [(complex(mu), float(r)) for mu, r in zip(self.grid.ravel(), self.r.ravel())]


###################
# Derivatives
###################
def wirtinger_derivatives(c: ParametricCongruence, mu: complex) -> WirtingerDerivatives:
    """Analytic derivatives when the congruence carries them, central differences otherwise"""
    if c.derivs is not None:
        return c.derivs(mu)

    h = c.fd_step or DEFAULT_OPTIONS["FD_STEP"] * max(1.0, abs(mu))
    xi_pu, eta_pu = _checked(c, mu + h)
    xi_mu, eta_mu = _checked(c, mu - h)
    xi_pv, eta_pv = _checked(c, mu + 1j * h)
    xi_mv, eta_mv = _checked(c, mu - 1j * h)

    xi_u, xi_v = (xi_pu - xi_mu) / (2 * h), (xi_pv - xi_mv) / (2 * h)
    eta_u, eta_v = (eta_pu - eta_mu) / (2 * h), (eta_pv - eta_mv) / (2 * h)
    return WirtingerDerivatives(
        d_xi=0.5 * (xi_u - 1j * xi_v),
        dbar_xi=0.5 * (xi_u + 1j * xi_v),
        d_eta=0.5 * (eta_u - 1j * eta_v),
        dbar_eta=0.5 * (eta_u + 1j * eta_v),
    )


def _checked(c: ParametricCongruence, mu: complex) -> Tuple[complex, complex]:
    line = c.line(mu)
    return line.xi, line.eta


def _plus_minus(line: OrientedLine, d: WirtingerDerivatives, r: float) -> Tuple[complex, complex]:
    xi, eta = line.xi, line.eta
    fibre = 2.0 * eta * xi.conjugate() / (1.0 + abs(xi) ** 2)
    d_plus = d.d_eta + r * d.d_xi - fibre * d.d_xi
    d_minus = d.dbar_eta + r * d.dbar_xi - fibre * d.dbar_xi
    return d_plus, d_minus


def d_plus_eta(c: ParametricCongruence, mu: complex, r: float) -> complex:
    return _plus_minus(c.line(mu), wirtinger_derivatives(c, mu), r)[0]


def d_minus_eta(c: ParametricCongruence, mu: complex, r: float) -> complex:
    return _plus_minus(c.line(mu), wirtinger_derivatives(c, mu), r)[1]


###################
# Optical scalars
###################
def _scalars(line: OrientedLine, d: WirtingerDerivatives, r: float) -> Tuple[Optional[OpticalScalars], float]:
    """Optical scalars at affine parameter r and the relative size of their denominator"""
    d_plus, d_minus = _plus_minus(line, d, r)
    denominator = abs(d_minus) ** 2 - abs(d_plus) ** 2
    scale = abs(d_minus) ** 2 + abs(d_plus) ** 2
    relative = abs(denominator) / scale if scale > 0 else 0.0
    if relative <= TOLERANCES["FOCAL_DENOMINATOR"]:
        return None, relative

    # d(conj xi) = conj(dbar xi) and dbar(conj xi) = conj(d xi)
    d_xibar, dbar_xibar = d.dbar_xi.conjugate(), d.d_xi.conjugate()
    rho = (d_plus * dbar_xibar - d_minus * d_xibar) / denominator
    sigma = (d_plus.conjugate() * d_xibar - d_minus.conjugate() * dbar_xibar) / denominator
    return OpticalScalars.from_rho_sigma(rho, sigma), relative


def optical_scalars(c: ParametricCongruence, mu: complex, r: float) -> OpticalScalars:
    scalars, relative = _scalars(c.line(mu), wirtinger_derivatives(c, mu), r)
    if scalars is None:
        raise FocalBlowupError(f"Optical scalars blow up at mu={mu}, r={r} (relative denominator {relative:.3g})")
    return scalars


def _rebased(line: OrientedLine, d: WirtingerDerivatives, rebase: float) -> Tuple[OpticalScalars, float]:
    scalars, relative = _scalars(line, d, 0.0)
    if scalars is not None and relative >= TOLERANCES["REBASE"]:
        return scalars, 0.0

    best = (scalars, relative, 0.0)
    for base in (rebase, -rebase, 2 * rebase, -2 * rebase):
        candidate, candidate_relative = _scalars(line, d, base)
        if candidate is not None and candidate_relative >= TOLERANCES["REBASE"]:
            logger.debug(f"Re-based optical scalars at r={base} (relative denominator at r=0: {relative:.3g})")
            return candidate, base
        if candidate_relative > best[1]:
            best = (candidate, candidate_relative, base)

    if best[0] is None:
        raise FocalBlowupError(f"No non-focal base point found on line {line}")
    return best[0], best[2]


def rebased_scalars(c: ParametricCongruence, mu: complex,
                    rebase: float = DEFAULT_OPTIONS["REBASE"]) -> Tuple[OpticalScalars, float]:
    """
    Optical scalars at r = 0, or at a substitute base point when r = 0 is focal.

    Returns:
        (scalars, base): the scalars and the affine parameter they were evaluated at
    """
    return _rebased(c.line(mu), wirtinger_derivatives(c, mu), rebase)


###################
# Sachs evolution
###################
def sachs_denominator(s0: OpticalScalars, r: float) -> float:
    return 1.0 - 2.0 * s0.theta * r + s0.kappa * r * r


def sachs_evolve(s0: OpticalScalars, r: float) -> OpticalScalars:
    """Closed-form solution of the Sachs equations started from s0 at r = 0"""
    denominator = sachs_denominator(s0, r)
    scale = max(1.0, abs(2.0 * s0.theta * r), abs(s0.kappa) * r * r)
    if abs(denominator) <= TOLERANCES["FOCAL_DENOMINATOR"] * scale:
        raise FocalBlowupError(f"Optical scalars blow up at r={r}")
    return OpticalScalars.from_rho_sigma((s0.rho - s0.kappa * r) / denominator, s0.sigma / denominator)


def sachs_residual(s0: OpticalScalars, r: float, h: float = DEFAULT_OPTIONS["FD_STEP"]) -> Tuple[float, float]:
    """Finite-difference residuals of d(rho)/dr = rho^2 + |sigma|^2 and d(sigma)/dr = (rho + conj rho) sigma"""
    ahead, behind, here = sachs_evolve(s0, r + h), sachs_evolve(s0, r - h), sachs_evolve(s0, r)
    d_rho = (ahead.rho - behind.rho) / (2 * h)
    d_sigma = (ahead.sigma - behind.sigma) / (2 * h)
    rho_residual = abs(d_rho - (here.rho ** 2 + abs(here.sigma) ** 2))
    sigma_residual = abs(d_sigma - (here.rho + here.rho.conjugate()) * here.sigma)
    return rho_residual, sigma_residual


###################
# Focal sets
###################
def focal_distances(s0: OpticalScalars) -> FocalSolution:
    """Real roots of 1 - 2 theta0 r + kappa r^2 = 0, classified"""
    theta, twist, kappa = s0.theta, s0.twist, s0.kappa
    scale = s0.scale

    if abs(kappa) < TOLERANCES["FLAT"] * scale ** 2:
        if abs(theta) < TOLERANCES["FLAT"] * scale:
            return FocalSolution(FocalKind.FLAT_EMPTY)
        return FocalSolution(FocalKind.FLAT_ONE, (1.0 / (2.0 * theta),))

    # Real roots need |sigma|^2 >= twist^2; the quadratic's discriminant decides
    discriminant = 4.0 * (abs(s0.sigma) ** 2 - twist ** 2)
    if abs(discriminant) < TOLERANCES["DOUBLE_ROOT"] * (1.0 + theta ** 2) ** 2:
        return FocalSolution(FocalKind.DOUBLE, (theta / kappa,))
    if discriminant < 0:
        return FocalSolution(FocalKind.NO_REAL)

    q = theta + math.copysign(math.sqrt(discriminant / 4.0), theta)
    return FocalSolution(FocalKind.TWO_REAL, tuple(sorted((q / kappa, 1.0 / q))))


def classify_flatness(c: ParametricCongruence, mu: complex,
                      rebase: float = DEFAULT_OPTIONS["REBASE"]) -> Flatness:
    line, d = c.line(mu), wirtinger_derivatives(c, mu)
    scalars, _ = _rebased(line, d, rebase)
    flat = abs(scalars.kappa) < TOLERANCES["FLAT"] * scalars.scale ** 2

    xi_u, xi_v = d.d_xi + d.dbar_xi, 1j * (d.d_xi - d.dbar_xi)
    jacobian = np.array([[xi_u.real, xi_v.real], [xi_u.imag, xi_v.imag]])
    rank = np.linalg.matrix_rank(jacobian, tol=1e-8 * max(1.0, float(np.abs(jacobian).max())))
    if flat != (rank < 2):
        logger.warning(f"Flatness at mu={mu}: kappa={scalars.kappa:.3g} disagrees with direction-map rank {rank}")

    return Flatness.FLAT if flat else Flatness.NON_FLAT


def focal_set(c: ParametricCongruence, grid: Iterable[complex],
              rebase: float = DEFAULT_OPTIONS["REBASE"], workers: int = 1) -> FocalScan:
    """Focal points of every line in the grid, in grid order; per-point failures become diagnostics"""
    def solve(mu: complex):
        try:
            line = c.line(mu)
            scalars, base = _rebased(line, wirtinger_derivatives(c, mu), rebase)
            solution = focal_distances(scalars).shifted(base)
            return [FocalPoint(mu, branch, r, solution.kind, incidence(line, r))
                    for branch, r in enumerate(solution.roots)], None
        except GeometryError as e:
            return [], Diagnostic(mu, e.code, str(e))

    scan = FocalScan()
    for points, diagnostic in grid_map(solve, [complex(mu) for mu in np.ravel(grid)], workers):
        scan.points.extend(points)
        if diagnostic is not None:
            scan.diagnostics.append(diagnostic)
    return scan


###################
# Wavefronts
###################
def _wavefront_gradient(c: ParametricCongruence, mu: complex, rebase: float, twist_tol: float) -> Tuple[float, float]:
    line, d = c.line(mu), wirtinger_derivatives(c, mu)
    scalars, _ = _rebased(line, d, rebase)
    if abs(scalars.twist) > twist_tol * scalars.scale:
        raise TwistedCongruenceError(f"Twist {scalars.twist:.3g} at mu={mu}: the congruence has no orthogonal surfaces")

    xi, eta = line.xi, line.eta
    # dbar r for the orthogonal surfaces; dbar(conj xi) = conj(d xi)
    f = (2 * eta * d.d_xi.conjugate() + 2 * eta.conjugate() * d.dbar_xi) / (1 + abs(xi) ** 2) ** 2
    return 2 * f.real, 2 * f.imag


def _step(ru: np.ndarray, rv: np.ndarray, grid: np.ndarray, a: Tuple[int, int], b: Tuple[int, int]) -> float:
    delta = grid[b] - grid[a]
    return 0.5 * ((ru[a] + ru[b]) * delta.real + (rv[a] + rv[b]) * delta.imag)


def integrate_wavefront(c: ParametricCongruence, mu0: complex, r0: float, grid,
                        rebase: float = DEFAULT_OPTIONS["REBASE"],
                        twist_tol: float = TOLERANCES["TWIST"],
                        closure_tol: float = TOLERANCES["CLOSURE"],
                        workers: int = 1) -> Wavefront:
    """
    Orthogonal surface r(mu) of a normal congruence through the point at r0 on the line mu0.

    The real gradient (dr/du, dr/dv) = (2 Re F, 2 Im F), with F the right side of the
    wavefront equation, is accumulated by the trapezoidal rule along the row of mu0 and
    then down every column. The largest loop sum around a grid cell is the closure residual.

    Raises:
        TwistedCongruenceError: if any node has twist
        NonIntegrableError: if the closure residual exceeds closure_tol
    """
    grid = np.asarray(grid, dtype=complex)
    if grid.ndim != 2 or min(grid.shape) < 2:
        raise ValueError("Wavefront grid must be a 2-D array with at least 2 nodes per axis")

    j0, i0 = np.unravel_index(np.argmin(np.abs(grid - mu0)), grid.shape)
    if abs(grid[j0, i0] - mu0) > 1e-9 * max(1.0, abs(mu0)):
        raise ValueError(f"Start parameter {mu0} is not a grid node")

    gradients = grid_map(lambda mu: _wavefront_gradient(c, mu, rebase, twist_tol), grid.ravel(), workers)
    ru = np.array([g[0] for g in gradients]).reshape(grid.shape)
    rv = np.array([g[1] for g in gradients]).reshape(grid.shape)

    rows, cols = grid.shape
    r = np.empty(grid.shape)
    r[j0, i0] = r0
    for i in range(i0 + 1, cols):
        r[j0, i] = r[j0, i - 1] + _step(ru, rv, grid, (j0, i - 1), (j0, i))
    for i in range(i0 - 1, -1, -1):
        r[j0, i] = r[j0, i + 1] + _step(ru, rv, grid, (j0, i + 1), (j0, i))
    for i in range(cols):
        for j in range(j0 + 1, rows):
            r[j, i] = r[j - 1, i] + _step(ru, rv, grid, (j - 1, i), (j, i))
        for j in range(j0 - 1, -1, -1):
            r[j, i] = r[j + 1, i] + _step(ru, rv, grid, (j + 1, i), (j, i))

    closure = 0.0
    for j in range(rows - 1):
        for i in range(cols - 1):
            loop = ((j, i), (j, i + 1), (j + 1, i + 1), (j + 1, i), (j, i))
            closure = max(closure, abs(sum(_step(ru, rv, grid, a, b) for a, b in zip(loop, loop[1:]))))

    if closure > closure_tol:
        raise NonIntegrableError(
            f"Wavefront loop-closure residual {closure:.3g} exceeds {closure_tol:.3g}; refine the grid or raise the tolerance"
        )
    logger.debug(f"Wavefront integrated over {grid.size} nodes, closure residual {closure:.3g}")
    return Wavefront(grid, r, closure)
