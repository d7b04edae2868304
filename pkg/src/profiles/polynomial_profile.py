import logging
from typing import Any, Dict

import numpy as np
from numpy.polynomial import polynomial as P

from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("profiles.polynomial_profile")


class PolynomialProfile(BaseProfile):
    """z0(u) = sum_k c_k u^k with complex coefficients, lowest degree first"""

    @property
    def name(self) -> str:
        return "polynomial"

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        coeffs = config.get("coeffs")
        if not coeffs:
            raise ValueError("Polynomial profile needs at least one coefficient")
        coeffs = np.array([complex(c) for c in coeffs], dtype=complex)
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("Polynomial coefficients must be finite")
        self._first = P.polyder(coeffs, 1) if len(coeffs) > 1 else np.zeros(1, dtype=complex)
        self._second = P.polyder(coeffs, 2) if len(coeffs) > 2 else np.zeros(1, dtype=complex)
        return {"coeffs": coeffs}

    def z0(self, u: float) -> complex:
        return complex(P.polyval(u, self.config["coeffs"]))

    def dz0(self, u: float) -> complex:
        return complex(P.polyval(u, self._first))

    def ddz0(self, u: float) -> complex:
        return complex(P.polyval(u, self._second))

    def __repr__(self) -> str:
        return f"polynomial(coeffs={list(self.config['coeffs'])})"
