import cmath
import logging
from typing import Any, Dict

from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("profiles.circle_profile")


class CircleProfile(BaseProfile):
    """z0 = center + R exp(iu)"""

    @property
    def name(self) -> str:
        return "circle"

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        if "R" not in config:
            raise ValueError("Missing required configuration field: R")
        if float(config["R"]) <= 0:
            raise ValueError("R must be positive")
        return {"R": float(config["R"]), "center": complex(config.get("center", 0))}

    def z0(self, u: float) -> complex:
        return self.config["center"] + self.config["R"] * cmath.exp(1j * u)

    def dz0(self, u: float) -> complex:
        return 1j * self.config["R"] * cmath.exp(1j * u)

    def ddz0(self, u: float) -> complex:
        return -self.config["R"] * cmath.exp(1j * u)

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.config["center"]) + self.config["R"])
