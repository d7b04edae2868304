import logging

from src.action_handler import ActionResult, register_action
from src.geometry.congruence import integrate_wavefront
from src.geometry.cylinder import CylinderParam, normal_congruence, reflected_congruence
from src.geometry.line_space import incidence, line_through

logger = logging.getLogger("actions.wavefront_actions")

WAVEFRONT_COLUMNS = ["u", "v", "r", "x1", "x2", "x3"]


@register_action("wavefront")
def wavefront(scene, **kwargs):
    """
    Orthogonal surfaces of the reflected congruence.

    The reflected congruence of a point source is normal, so it has a one-parameter
    family of wavefronts; the one emitted passes through the reflection point of the
    first grid node.
    """
    signs = scene.signs(kwargs.get("signs"))
    tag_signs = len(signs) > 1
    p = scene.profile
    grid = scene.grid()
    mu0 = complex(grid[0, 0])

    result = ActionResult(WAVEFRONT_COLUMNS + (["signs"] if tag_signs else []))
    surfaces = []
    for sign0, branch1 in signs:
        c = reflected_congruence(p, sign0, branch1)
        start = normal_congruence(p, CylinderParam(mu0.real, mu0.imag, sign0, branch1)).surface_point
        _, r0 = line_through(start, c.line(mu0).xi)
        surface = integrate_wavefront(
            c, mu0, r0, grid,
            rebase=scene.config.rebase,
            closure_tol=scene.config.wavefront_closure_tol,
            workers=scene.workers,
        )
        logger.debug(f"{sign0.value}{branch1.value}: wavefront closure residual {surface.closure_residual:.3g}")
        surfaces.append((sign0.value + branch1.value, c, surface))

    for k, mu in enumerate(grid.ravel()):
        for tag, c, surface in surfaces:
            r = float(surface.r.ravel()[k])
            point = incidence(c.line(complex(mu)), r)
            row = [mu.real, mu.imag, r, point.z.real, point.z.imag, point.t]
            result.rows.append(row + [tag] if tag_signs else row)
    return result
