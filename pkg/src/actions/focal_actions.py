import logging

from src.action_handler import ActionResult, register_action
from src.geometry.cylinder import CylinderParam, focal_curve, focal_set_numeric, focal_surface, is_virtual
from src.geometry.line_space import GeometryError
from src.helpers.grid import grid_map

logger = logging.getLogger("actions.focal_actions")

FOCAL_COLUMNS = ["u", "v", "branch", "virtual", "x1", "x2", "x3"]


@register_action("focal")
def focal(scene, **kwargs):
    """
    Closed-form focal curve and focal surface at every grid point and, with numeric=True,
    the focal points found from the optical scalars of the reflected congruence.
    """
    signs = scene.signs(kwargs.get("signs"))
    numeric = kwargs.get("numeric", False)
    tag_signs = len(signs) > 1
    p = scene.profile

    def closed_form(mu: complex):
        rows, diagnostics = [], []
        u, v = mu.real, mu.imag
        numeric_points = focal_set_numeric(p, [mu], signs, rebase=scene.config.rebase) if numeric else None

        for sign0, branch1 in signs:
            tag = [sign0.value + branch1.value] if tag_signs else []
            q = CylinderParam(u, v, sign0, branch1)
            for branch, construct in (("curve", lambda: focal_curve(p, u)), ("surface", lambda: focal_surface(p, u, v))):
                try:
                    point = construct()
                    rows.append([u, v, branch, is_virtual(p, q, point), point.z.real, point.z.imag, point.t] + tag)
                except GeometryError as e:
                    diagnostics.append([u, v, e.code, f"{branch}: {e}"])

            if numeric_points is not None:
                for focal_point in numeric_points.points:
                    if (focal_point.sign0, focal_point.branch1) != (sign0, branch1):
                        continue
                    point = focal_point.point
                    rows.append([u, v, f"numeric{focal_point.branch}", focal_point.virtual,
                                 point.z.real, point.z.imag, point.t] + tag)

        if numeric_points is not None:
            diagnostics.extend([d.mu.real, d.mu.imag, d.code, d.detail] for d in numeric_points.diagnostics)
        return rows, diagnostics

    result = ActionResult(FOCAL_COLUMNS + (["signs"] if tag_signs else []))
    for rows, diagnostics in grid_map(closed_form, scene.grid().ravel(), scene.workers):
        result.rows.extend(rows)
        result.diagnostics.extend(diagnostics)
    logger.debug(f"Focal set: {len(result.rows)} points, {len(result.diagnostics)} diagnostics")
    return result
