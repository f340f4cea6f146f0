from pathlib import Path
from typing import Optional, Dict, Any, Union, Literal
import os
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator
from dotenv import load_dotenv

from depthkit.errors import ConfigError

# Environment variable (without prefix) -> config path
ENV_MAPPING = {
    "PRECISION": ("laurent", "precision"),
    "TRIALS": ("laurent", "trials"),
    "SEED": ("laurent", "seed"),
    "ENUMERATION_BUDGET": ("cohomology", "enumeration_budget"),
    "MAX_INDUCED_ORDER": ("cohomology", "max_induced_order"),
    "JOBS": ("cohomology", "jobs"),
    "OUTPUT_FORMAT": ("output", "format"),
    "LOG_LEVEL": ("logging", "level"),
    "LOG_FILE": ("logging", "file"),
}

# CLI option name -> config path
CLI_MAPPING = {
    "precision": ("laurent", "precision"),
    "trials": ("laurent", "trials"),
    "seed": ("laurent", "seed"),
    "budget": ("cohomology", "enumeration_budget"),
    "max_induced_order": ("cohomology", "max_induced_order"),
    "jobs": ("cohomology", "jobs"),
    "output_format": ("output", "format"),
    "log_level": ("logging", "level"),
    "log_file": ("logging", "file"),
}


class LaurentConfig(BaseModel):
    precision: int = Field(default=256, ge=8)
    trials: int = Field(default=50, ge=1)
    seed: int = Field(default=0, ge=0)


class CohomologyConfig(BaseModel):
    enumeration_budget: int = Field(default=10 ** 7, ge=1)
    max_induced_order: int = Field(default=729, ge=1)
    jobs: int = Field(default=1, ge=1)


class OutputConfig(BaseModel):
    format: Literal["text", "json"] = "text"


class LoggingConfig(BaseModel):
    level: str = Field(default="WARNING")
    file: Optional[str] = None

    @field_validator("level")
    def validate_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level {v!r}")
        return level

    @field_validator("file")
    def validate_log_file(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            path = Path(v)
            path.parent.mkdir(parents=True, exist_ok=True)
            if not os.access(path.parent, os.W_OK):
                raise ValueError(f"Log file directory {path.parent} is not writable")
        return v


class AppConfig(BaseModel):
    laurent: LaurentConfig = LaurentConfig()
    cohomology: CohomologyConfig = CohomologyConfig()
    output: OutputConfig = OutputConfig()
    logging: LoggingConfig = LoggingConfig()


class ConfigBuilder:
    """Builds configuration from YAML, environment and CLI, later sources winning"""

    def __init__(self):
        self.config: Dict[str, Any] = {}
        self.env_prefix = "DEPTHKIT_"

    def load_yaml(self, path: Union[str, Path]) -> None:
        """Load configuration from YAML file"""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")

        with open(path) as f:
            yaml_config = yaml.safe_load(f) or {}
        if not isinstance(yaml_config, dict):
            raise ConfigError(f"Config file {path} must contain a mapping")
        for section, values in yaml_config.items():
            if isinstance(values, dict):
                self.config.setdefault(section, {}).update(values)
            else:
                self.config[section] = values

    def load_env(self, path: Optional[Union[str, Path]] = None) -> None:
        """Load configuration from DEPTHKIT_* environment variables and an optional .env file"""
        if path:
            load_dotenv(path)

        for env_var, config_path in ENV_MAPPING.items():
            env_key = f"{self.env_prefix}{env_var}"
            if env_key in os.environ:
                self._set_nested_dict(self.config, config_path, os.environ[env_key])

    def update_from_cli(self, cli_args: Dict[str, Any]) -> None:
        """Update configuration with CLI arguments; None means not given"""
        for cli_arg, config_path in CLI_MAPPING.items():
            if cli_arg in cli_args and cli_args[cli_arg] is not None:
                self._set_nested_dict(self.config, config_path, cli_args[cli_arg])

    def _set_nested_dict(self, d: dict, keys: tuple, value: Any) -> None:
        """Set a value in a nested dictionary using a tuple of keys"""
        for key in keys[:-1]:
            d = d.setdefault(key, {})
        d[keys[-1]] = value

    def export_env(self, path: Union[str, Path]) -> None:
        """Export the effective configuration as a .env file that load_env reads back"""
        values = self.build().model_dump()
        env_vars = []
        for env_var, (section, key) in ENV_MAPPING.items():
            value = values[section][key]
            if value is not None:
                env_vars.append(f"{self.env_prefix}{env_var}={value}")

        with open(Path(path), "w") as f:
            f.write("\n".join(env_vars) + "\n")

    def export_yaml(self, path: Union[str, Path]) -> None:
        """Export the effective configuration to a YAML file"""
        with open(Path(path), "w") as f:
            yaml.safe_dump(self.build().model_dump(), f, default_flow_style=False, sort_keys=False)

    def build(self) -> AppConfig:
        """Build and validate the final configuration"""
        try:
            return AppConfig(**self.config)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e


def load_config(
    yaml_path: Optional[Path] = None,
    env_path: Optional[Path] = None,
    cli_args: Optional[Dict[str, Any]] = None,
) -> AppConfig:
    """
    Load configuration from all sources in order of precedence:
    CLI args > Environment variables > YAML config
    """
    builder = ConfigBuilder()

    if yaml_path:
        builder.load_yaml(yaml_path)

    builder.load_env(env_path)

    if cli_args:
        builder.update_from_cli(cli_args)

    return builder.build()
