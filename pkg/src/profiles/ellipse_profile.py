import logging
import math
from typing import Any, Dict

from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("profiles.ellipse_profile")


class EllipseProfile(BaseProfile):
    """z0 = center + a cos u + i b sin u"""

    @property
    def name(self) -> str:
        return "ellipse"

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        missing = [field for field in ("a", "b") if field not in config]
        if missing:
            raise ValueError(f"Missing required configuration fields: {', '.join(missing)}")
        a, b = float(config["a"]), float(config["b"])
        if a <= 0 or b <= 0:
            raise ValueError("Semi-axes a and b must be positive")
        return {"a": a, "b": b, "center": complex(config.get("center", 0))}

    def _axes(self, u: float) -> complex:
        return complex(self.config["a"] * math.cos(u), self.config["b"] * math.sin(u))

    def z0(self, u: float) -> complex:
        return self.config["center"] + self._axes(u)

    def dz0(self, u: float) -> complex:
        return complex(-self.config["a"] * math.sin(u), self.config["b"] * math.cos(u))

    def ddz0(self, u: float) -> complex:
        return -self._axes(u)

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.config["center"]) + max(self.config["a"], self.config["b"]))
