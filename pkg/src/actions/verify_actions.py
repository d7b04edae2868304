import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from src.action_handler import ActionResult, register_action
from src.constants import DEFAULT_OPTIONS, VERIFY_TOLERANCES
from src.geometry.congruence import rebased_scalars
from src.geometry.cylinder import (
    ALL_SIGNS,
    CylinderParam,
    Sign,
    focal_curve,
    focal_set_numeric,
    focal_surface,
    focal_surface_margin,
    normal_congruence,
    normal_line_congruence,
    reflected_point_source,
    source_ray,
)
from src.geometry.line_space import GeometryError, OrientedLine, dir_to_vec, incidence
from src.geometry.oracle import RayFamily, caustic_scan, hausdorff, trace_reflect
from src.geometry.reflection import intersection_residual, reflect_line
from src.helpers.grid import grid_map, make_grid

logger = logging.getLogger("actions.verify_actions")

VERIFY_COLUMNS = ["check", "max_residual", "tolerance", "passed"]


def _point_checks(p, mu: complex, scale: float, corrupt: bool):
    """Algebraic residuals at one surface parameter, over all four orientation choices"""
    u, v = mu.real, mu.imag
    worst = dict.fromkeys(
        ("unit_normal", "source_incidence", "closed_form_vs_law", "law_vs_oracle_point",
         "law_vs_oracle_direction", "angle_law", "normal_twist"), 0.0)
    diagnostics = []

    for sign0, branch1 in ALL_SIGNS:
        try:
            q = CylinderParam(u, v, sign0, branch1)
            frame = normal_congruence(p, q)
            ray = source_ray(p, q)
            law = reflect_line(frame, ray)
            closed = reflected_point_source(p, q)
            if corrupt:
                closed = OrientedLine(-closed.xi, closed.eta)

            worst["unit_normal"] = max(worst["unit_normal"], abs(abs(frame.xi0) - 1.0))
            worst["source_incidence"] = max(worst["source_incidence"], abs(intersection_residual(frame, ray)) / scale)
            worst["closed_form_vs_law"] = max(
                worst["closed_form_vs_law"],
                abs(closed.xi - law.xi) + abs(closed.eta - law.eta) / max(1.0, abs(law.eta)),
            )

            d_in = dir_to_vec(ray.xi1).as_array()
            d_out = dir_to_vec(law.xi).as_array()
            n = dir_to_vec(frame.xi0).as_array()
            worst["angle_law"] = max(worst["angle_law"], abs(np.dot(d_in, n) + np.dot(d_out, n)))

            # the Cartesian oracle always traces the ray oriented from the source to the mirror
            traced = trace_reflect(p, u, v)
            foot = incidence(law, 0.0).as_array()
            offset = traced.origin.as_array() - foot
            distance = np.linalg.norm(offset - np.dot(offset, d_out) * d_out)
            worst["law_vs_oracle_point"] = max(worst["law_vs_oracle_point"], distance / scale)
            worst["law_vs_oracle_direction"] = max(
                worst["law_vs_oracle_direction"],
                float(np.linalg.norm(d_out - branch1.factor * traced.dir.as_array())),
            )
        except GeometryError as e:
            diagnostics.append([u, v, e.code, f"{sign0.value}{branch1.value}: {e}"])

    for sign0 in Sign:
        try:
            scalars, _ = rebased_scalars(normal_line_congruence(p, sign0), mu)
            worst["normal_twist"] = max(worst["normal_twist"], abs(scalars.twist) / scalars.scale)
        except GeometryError as e:
            diagnostics.append([u, v, e.code, f"normal {sign0.value}: {e}"])

    return worst, diagnostics


def _scan_window(scene, closed_r: List[float]) -> Tuple[Tuple[float, float], int]:
    """
    The r window and sample count of the caustic scan.

    A configured r_window is used as given, so closed-form points outside it go
    unmatched. The default window is widened to reach every closed-form point, with
    proportionally more samples.
    """
    window, samples = scene.r_window, scene.config.scan_samples
    if scene.config.r_window is not None or not closed_r:
        return window, samples

    pad = 0.1 * scene.profile.scale
    lo, hi = min(window[0], min(closed_r) - pad), max(window[1], max(closed_r) + pad)
    widened = math.ceil(samples * (hi - lo) / (window[1] - window[0]))
    return (lo, hi), min(widened, DEFAULT_OPTIONS["SCAN_MAX_WIDENING"] * samples)


@register_action("verify")
def verify(scene, **kwargs):
    """
    Re-derive every closed form against the generic reflection law and the Cartesian oracle.

    The grid is made symmetric in v, since the closed-form focal surface at height v
    is the per-ray focal point at height -v. Cloud comparisons skip profile parameters
    where the focal-surface denominator is within the configured margin of degenerate.
    """
    p = scene.profile
    corrupt = kwargs.get("corrupt_reflection_sign", False)
    tolerances: Dict[str, float] = {**VERIFY_TOLERANCES, **scene.config.verify.tolerances}
    scale = p.scale
    grid = scene.grid(symmetric=True)

    result = ActionResult(VERIFY_COLUMNS)
    residuals = {"profile_derivatives": p.derivative_mismatch()}

    for worst, diagnostics in grid_map(lambda mu: _point_checks(p, complex(mu), scale, corrupt), grid.ravel(), scene.workers):
        for check, value in worst.items():
            residuals[check] = max(residuals.get(check, 0.0), value)
        result.diagnostics.extend(diagnostics)

    # focal clouds, away from focal-surface degeneracies
    kept_u = [u for u in scene.u_values if focal_surface_margin(p, float(u)) > scene.config.verify.margin]
    if len(kept_u) < len(scene.u_values):
        logger.info(f"Skipping {len(scene.u_values) - len(kept_u)} near-degenerate u samples in the focal comparisons")
    kept = make_grid(kept_u, np.unique(grid.imag)) if kept_u else np.empty((0, 0), dtype=complex)

    closed: List[np.ndarray] = []
    closed_r: List[float] = []
    for mu in kept.ravel():
        u, v = float(mu.real), float(mu.imag)
        # the curve point lies on the ray at height v, the surface point on the ray at height -v
        for point, height in ((focal_curve(p, u), v), (focal_surface(p, u, v), -v)):
            ray = trace_reflect(p, u, height)
            closed.append(point.as_array())
            closed_r.append(float(np.dot(point.as_array() - ray.origin.as_array(), ray.dir.as_array())))
    if not closed:
        logger.warning("⚠️ No grid point is far enough from a degeneracy to compare focal clouds")

    numeric = focal_set_numeric(p, kept.ravel(), rebase=scene.config.rebase, workers=scene.workers)
    result.diagnostics.extend([d.mu.real, d.mu.imag, d.code, d.detail] for d in numeric.diagnostics)
    numeric_cloud = [f.point.as_array() for f in numeric.points]
    residuals["focal_numeric_vs_closed"] = hausdorff(numeric_cloud, closed, directed=True, relative=True)
    residuals["closed_vs_numeric"] = hausdorff(closed, numeric_cloud, directed=True, relative=True)

    window, samples = _scan_window(scene, closed_r)
    caustics = caustic_scan(RayFamily.from_profile(p), kept.ravel(), window,
                            samples=samples, workers=scene.workers)
    caustic_cloud = [c.point.as_array() for c in caustics.points]
    residuals["caustic_vs_closed"] = hausdorff(caustic_cloud, closed, directed=True, relative=True)
    residuals["closed_vs_caustic"] = hausdorff(closed, caustic_cloud, directed=True, relative=True)

    by_ray: Dict[tuple, List[np.ndarray]] = {}
    for f in numeric.points:
        by_ray.setdefault((f.u, f.v), []).append(f.point.as_array())
    worst_match = 0.0
    for c in caustics.points:
        candidates = by_ray.get((c.u, c.v))
        if not candidates:
            worst_match = float("inf")
            break
        worst_match = max(worst_match, hausdorff([c.point.as_array()], candidates, directed=True, relative=True))
    residuals["caustic_vs_numeric"] = worst_match

    failed = False
    for check in VERIFY_TOLERANCES:
        residual, tolerance = residuals.get(check, 0.0), tolerances[check]
        passed = bool(residual <= tolerance)
        failed = failed or not passed
        result.report[check] = (residual, tolerance, passed)
        result.rows.append([check, float(residual), float(tolerance), passed])

    result.failed = failed
    return result
