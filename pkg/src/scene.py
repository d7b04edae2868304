import logging
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from src.action_handler import ActionResult, execute_action
from src.config import ConfigError, load_config
from src.constants import DEFAULT_OPTIONS
from src.geometry.cylinder import ALL_SIGNS, Sign
from src.geometry.line_space import GeometryError
from src.helpers import print_h_bar
from src.helpers.export import format_rows, write_diagnostics, write_rows
from src.helpers.grid import make_grid, symmetric_values
from src.profile_manager import ProfileManager
from src.types import RunConfig
import src.actions.reflect_actions
import src.actions.focal_actions
import src.actions.wavefront_actions
import src.actions.verify_actions

logger = logging.getLogger("scene")

SCENES_DIR = Path("scenes")
COMMANDS = ("reflect", "focal", "wavefront", "verify")


class CatoptricaScene:
    """A validated run configuration together with the mirror profile it describes"""

    def __init__(self, config: RunConfig, name: str = "scene"):
        try:
            self.name = name
            self.config = config
            self.profile = ProfileManager().create_profile(config.profile.model_dump(), config.u_range)
            self.u_values = np.linspace(config.u_range[0], config.u_range[1], config.u_samples)
            self.v_values = np.linspace(config.v_range[0], config.v_range[1], config.v_samples)
        except Exception as e:
            logger.error("Could not load scene")
            raise e

    @classmethod
    def from_file(cls, scene_name: str, scenes_dir: Path = SCENES_DIR) -> "CatoptricaScene":
        return cls(load_config(Path(scenes_dir) / f"{scene_name}.json"), scene_name)

    @property
    def workers(self) -> int:
        return self.config.workers

    @property
    def r_window(self) -> Tuple[float, float]:
        if self.config.r_window is not None:
            return tuple(self.config.r_window)
        extent = DEFAULT_OPTIONS["SCAN_WINDOW_SCALE"] * self.profile.scale
        return (-extent, extent)

    def grid(self, symmetric: bool = False) -> np.ndarray:
        """mu = u + iv over the configured samples; symmetric adds the mirror image of every v"""
        v = symmetric_values(self.v_values) if symmetric else self.v_values
        return make_grid(self.u_values, v)

    def signs(self, override: Optional[str] = None) -> List[Tuple[Sign, Sign]]:
        choice = override or self.config.signs
        return list(ALL_SIGNS) if choice == "all" else [(Sign.PLUS, Sign.PLUS)]

    def perform(self, command: str, **kwargs) -> ActionResult:
        logger.info(f"\n🔍 Running {command} on {self.name} ({self.profile!r})")
        return execute_action(self, command, **kwargs)


def run(command: str, cfg: RunConfig, out: Optional[Path] = None, fmt: Optional[str] = None,
        numeric: bool = False, signs: Optional[str] = None,
        corrupt_reflection_sign: bool = False, name: str = "scene") -> int:
    """
    Run one command on a configuration and write its outputs

    Returns:
        int: exit status, 0 on success, 1 on a usage, config or runtime error,
            2 when verification fails
    """
    if command not in COMMANDS:
        logger.error(f"Unknown command '{command}'. Choose one of: {', '.join(COMMANDS)}")
        return 1

    options = {"signs": signs}
    if command == "focal":
        options["numeric"] = numeric
    if command == "verify":
        options["corrupt_reflection_sign"] = corrupt_reflection_sign

    try:
        scene = CatoptricaScene(cfg, name)
        result = scene.perform(command, **options)
        out = out or (Path(cfg.outputs.path) if cfg.outputs.path else None)
        fmt = fmt or cfg.outputs.format
        if out is not None:
            write_rows(out, result.columns, result.rows, fmt)
            diagnostics = write_diagnostics(out, result.diagnostics)
            logger.info(f"✅ Wrote {len(result.rows)} rows to {out} ({len(result.diagnostics)} diagnostics in {diagnostics})")
        else:
            for line in format_rows(result.columns, result.rows):
                logger.info(line)
            for diagnostic in result.diagnostics[:10]:
                logger.warning(f"Diagnostic at u={diagnostic[0]}, v={diagnostic[1]}: {diagnostic[2]} ({diagnostic[3]})")
    except (ConfigError, GeometryError, ValueError, KeyError, OSError) as e:
        logger.error(f"❌ {command} failed: {e}")
        return 1

    if result.report:
        print_h_bar()
        for check, (residual, tolerance, passed) in result.report.items():
            marker = "✅" if passed else "❌"
            logger.info(f"{marker} {check:<26} max residual {residual:.3e} (tolerance {tolerance:.1e})")
        print_h_bar()

    if result.failed:
        logger.error(f"❌ {command} failed verification")
        return 2
    return 0
