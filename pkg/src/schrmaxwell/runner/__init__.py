"""Config-driven experiment runner."""

from .config import ConfigError, ScenarioConfig, from_dict, load_config
from .presets import preset
from .run import RunResult, execute, run

__all__ = ["ConfigError", "RunResult", "ScenarioConfig", "execute", "from_dict", "load_config",
           "preset", "run"]
