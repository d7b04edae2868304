import logging
from typing import Any, Callable, Dict, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from src.profiles.base_profile import BaseProfile

logger = logging.getLogger("profiles.tabulated_profile")


class TabulatedProfile(BaseProfile):
    """
    A profile known only by samples (or an opaque callable).

    Samples are interpolated by cubic splines in x1 and x2; derivatives always
    come from the finite-difference defaults of BaseProfile.
    """

    @classmethod
    def from_callable(cls, fn: Callable[[float], complex], u_range: Tuple[float, float]) -> "TabulatedProfile":
        return cls({"function": fn}, u_range)

    @property
    def name(self) -> str:
        return "tabulated"

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        if "function" in config:
            if not callable(config["function"]):
                raise ValueError("function must be callable")
            self._evaluate = config["function"]
            return {"function": config["function"]}

        u = np.asarray(config.get("u", []), dtype=float)
        z = np.asarray([complex(value) for value in config.get("z", [])], dtype=complex)
        if len(u) < 4 or len(u) != len(z):
            raise ValueError("Tabulated profile needs matching u and z samples, at least 4 of them")
        if np.any(np.diff(u) <= 0):
            raise ValueError("Tabulated u samples must be strictly increasing")
        x1, x2 = CubicSpline(u, z.real), CubicSpline(u, z.imag)
        self._evaluate = lambda s: complex(float(x1(s)), float(x2(s)))
        return {"u": u, "z": z}

    def z0(self, u: float) -> complex:
        return complex(self._evaluate(u))

    def __repr__(self) -> str:
        if "function" in self.config:
            return f"tabulated({getattr(self.config['function'], '__name__', 'callable')})"
        return f"tabulated({len(self.config['u'])} samples)"
