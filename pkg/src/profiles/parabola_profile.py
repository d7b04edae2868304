import logging
from typing import Any, Dict

from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("profiles.parabola_profile")


class ParabolaProfile(BaseProfile):
    """
    Parabola opening along +x2 with focal length f.

    With vertex_offset = 0 the focus is at the origin, where the source sits;
    the offset shifts the curve along x2.
    """

    @property
    def name(self) -> str:
        return "parabola"

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        if "f" not in config:
            raise ValueError("Missing required configuration field: f")
        if float(config["f"]) <= 0:
            raise ValueError("Focal length f must be positive")
        return {"f": float(config["f"]), "vertex_offset": float(config.get("vertex_offset", 0.0))}

    def z0(self, u: float) -> complex:
        f = self.config["f"]
        return complex(u, u * u / (4 * f) - f + self.config["vertex_offset"])

    def dz0(self, u: float) -> complex:
        return complex(1.0, u / (2 * self.config["f"]))

    def ddz0(self, u: float) -> complex:
        return complex(0.0, 1.0 / (2 * self.config["f"]))
