import logging

from src.action_handler import ActionResult, register_action
from src.geometry.cylinder import CylinderParam, normal_congruence, reflected_point_source
from src.geometry.line_space import GeometryError
from src.helpers.grid import grid_map

logger = logging.getLogger("actions.reflect_actions")

REFLECT_COLUMNS = ["u", "v", "xi_re", "xi_im", "eta_re", "eta_im", "x1", "x2", "x3"]


@register_action("reflect")
def reflect(scene, **kwargs):
    """Sample the reflected point-source congruence; the sample point is the reflection point on the mirror"""
    signs = scene.signs(kwargs.get("signs"))
    tag_signs = len(signs) > 1
    p = scene.profile

    def sample(mu: complex):
        rows, diagnostics = [], []
        u, v = mu.real, mu.imag
        for sign0, branch1 in signs:
            try:
                q = CylinderParam(u, v, sign0, branch1)
                line = reflected_point_source(p, q)
                point = normal_congruence(p, q).surface_point
            except GeometryError as e:
                diagnostics.append([u, v, e.code, f"{sign0.value}{branch1.value}: {e}"])
                continue
            row = [u, v, line.xi.real, line.xi.imag, line.eta.real, line.eta.imag,
                   point.z.real, point.z.imag, point.t]
            rows.append(row + [sign0.value + branch1.value] if tag_signs else row)
        return rows, diagnostics

    result = ActionResult(REFLECT_COLUMNS + (["signs"] if tag_signs else []))
    for rows, diagnostics in grid_map(sample, scene.grid().ravel(), scene.workers):
        result.rows.extend(rows)
        result.diagnostics.extend(diagnostics)
    logger.debug(f"Reflected {len(result.rows)} rays")
    return result
