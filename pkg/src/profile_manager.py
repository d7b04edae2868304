import logging
from typing import Any, Dict, Optional, Tuple, Type

from src.profiles.base_profile import BaseProfile
from src.profiles.circle_profile import CircleProfile
from src.profiles.ellipse_profile import EllipseProfile
from src.profiles.parabola_profile import ParabolaProfile
from src.profiles.polynomial_profile import PolynomialProfile
from src.profiles.tabulated_profile import TabulatedProfile

logger = logging.getLogger("profile_manager")


class ProfileManager:
    @staticmethod
    def _class_name_to_type(class_name: str) -> Optional[Type[BaseProfile]]:
        if class_name == "circle":
            return CircleProfile
        elif class_name == "ellipse":
            return EllipseProfile
        elif class_name == "parabola":
            return ParabolaProfile
        elif class_name == "polynomial":
            return PolynomialProfile
        elif class_name == "tabulated":
            return TabulatedProfile
        return None

    @staticmethod
    def supported_profiles() -> Tuple[str, ...]:
        return ("circle", "ellipse", "parabola", "polynomial", "tabulated")

    def create_profile(self, config: Dict[str, Any], u_range: Tuple[float, float]) -> BaseProfile:
        """
        Create the profile curve described by a validated profile config

        Args:
            config: profile parameters, tagged by "type"
            u_range: parameter interval the profile is swept over

        Raises:
            ValueError: if the type is unknown or the parameters are invalid
        """
        name = config.get("type")
        profile_class = self._class_name_to_type(name)
        if profile_class is None:
            raise ValueError(f"Unknown profile type '{name}'. Supported: {', '.join(self.supported_profiles())}")
        try:
            profile = profile_class(config, u_range)
        except Exception as e:
            logger.error(f"Failed to initialize profile {name}: {e}")
            raise
        logger.debug(f"Created profile {profile!r} on u in {u_range}")
        return profile
