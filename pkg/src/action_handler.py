import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

logger = logging.getLogger("action_handler")


@dataclass
class ActionResult:
    """Rows of one command, in output order, plus the per-point diagnostics the sweep produced"""
    columns: List[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    diagnostics: List[Sequence[Any]] = field(default_factory=list)
    failed: bool = False
    report: Dict[str, Any] = field(default_factory=dict)


action_registry = {}


def register_action(action_name):
    def decorator(func):
        action_registry[action_name] = func
        return func
    return decorator


def execute_action(scene, action_name, **kwargs) -> ActionResult:
    if action_name not in action_registry:
        logger.error(f"Action {action_name} not found")
        raise KeyError(f"Unknown command: {action_name}. Available: {', '.join(sorted(action_registry))}")
    return action_registry[action_name](scene, **kwargs)
