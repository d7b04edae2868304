import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

import numpy as np

from src.constants import DEFAULT_OPTIONS

logger = logging.getLogger("profiles.base_profile")


class BaseProfile(ABC):
    """
    A planar profile curve z0(u) = x1 + i x2, swept along the x3-axis to form a mirror.

    Subclasses supply z0 and, where they have them, analytic first and second
    derivatives. The defaults are central finite differences.
    """

    def __init__(self, config: Dict[str, Any], u_range: Tuple[float, float] = (0.0, 2 * math.pi)):
        try:
            # Dictionary to store the validated profile parameters
            self.config = self.validate_config(config)
            self.u_range = (float(u_range[0]), float(u_range[1]))
        except Exception as e:
            logging.error("Could not initialize the profile")
            raise e

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Validate profile parameters

        Args:
            config: dictionary containing the parameters of the profile family

        Returns:
            Dict[str, Any]: Returns the config if valid

        Raises:
            ValueError if the parameters do not describe a curve of this family
        """

    @abstractmethod
    def z0(self, u: float) -> complex:
        pass

    def _step(self, u: float) -> float:
        return DEFAULT_OPTIONS["FD_STEP"] * max(1.0, abs(u))

    def dz0(self, u: float) -> complex:
        h = self._step(u)
        return (self.z0(u + h) - self.z0(u - h)) / (2 * h)

    def ddz0(self, u: float) -> complex:
        h = 10 * self._step(u)
        return (self.z0(u + h) - 2 * self.z0(u) + self.z0(u - h)) / (h * h)

    @property
    def scale(self) -> float:
        """Typical distance of the mirror from the source"""
        samples = np.linspace(self.u_range[0], self.u_range[1], 9)
        return max(1.0, max(abs(self.z0(float(u))) for u in samples))

    def derivative_mismatch(self, samples: int = 16) -> float:
        """Largest relative gap between this profile's derivatives and central differences on u_range"""
        worst = 0.0
        for u in np.linspace(self.u_range[0], self.u_range[1], samples):
            u = float(u)
            h = self._step(u)
            fd_first = (self.z0(u + h) - self.z0(u - h)) / (2 * h)
            fd_second = (self.dz0(u + h) - self.dz0(u - h)) / (2 * h)
            for analytic, numeric in ((self.dz0(u), fd_first), (self.ddz0(u), fd_second)):
                worst = max(worst, abs(analytic - numeric) / max(1.0, abs(analytic)))
        return worst

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.config.items() if k != "type")
        return f"{self.name}({params})"
