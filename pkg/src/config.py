import json
import logging
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import ValidationError

from src.types import RunConfig

logger = logging.getLogger("config")


class ConfigError(Exception):
    """Raised when a run configuration cannot be read or validated"""

    def __init__(self, errors: List[Tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{loc}: {msg}" if loc else msg for loc, msg in errors))


def parse_config(text: Union[bytes, str]) -> RunConfig:
    """
    Parse and validate a JSON run configuration

    Raises:
        ConfigError: with one (location, message) pair per problem; JSON syntax
            errors are located by line and column
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ConfigError([("", f"config is not UTF-8: {e}")])

    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([(f"line {e.lineno}, column {e.colno}", e.msg)])

    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError([(".".join(str(part) for part in err["loc"]), err["msg"]) for err in e.errors()])


def load_config(path: Union[str, Path]) -> RunConfig:
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise ConfigError([(str(path), f"cannot read config: {e.strerror or e}")])
    config = parse_config(text)
    logger.debug(f"Loaded {config.profile.type} config from {path}")
    return config
