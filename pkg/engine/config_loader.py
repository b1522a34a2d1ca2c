"""
Run configuration loader.

Discovers named configurations in the configs/ folder and loads them into a
RunConfig. Files are YAML mappings; anything else is read as key=value lines
with # comments.
"""

import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .errors import ConfigError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, sample counts and output settings for one invocation."""
    seed: int = 42
    tol_alg: float = 1e-9
    tol_fd: float = 1e-5
    fd_step: float = 1e-4
    samples: int = 256
    grid: int = 33
    hull_samples: int = 96
    width_starts: int = 64
    word_length: int = 6
    check_points: int = 200
    out_dir: str = "out"
    projection: Tuple[float, float, float] = (1.0, 0.4, 0.25)
    workers: int = 1

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """A copy with the non-None overrides applied and coerced."""
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **_coerce(clean))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["projection"] = list(self.projection)
        return data


def _coerce(raw: Dict[str, Any]) -> Dict[str, Any]:
    types = {f.name: f.type for f in fields(RunConfig)}
    defaults = RunConfig()
    out = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        if key not in types:
            raise ConfigError(f"unknown configuration key '{key}'")
        try:
            if key == "projection":
                if isinstance(value, str):
                    value = [p for p in value.replace("(", "").replace(")", "").split(",")]
                vec = tuple(float(v) for v in value)
                if len(vec) != 3:
                    raise ValueError("projection needs three components")
                out[key] = vec
            else:
                out[key] = type(getattr(defaults, key))(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad value for '{key}': {value!r} ({e})") from e
    if out.get("seed", 0) < 0:
        raise ConfigError("seed must be non-negative")
    for key in ("samples", "grid", "hull_samples", "width_starts", "word_length", "check_points", "workers"):
        if key in out and out[key] < 1:
            raise ConfigError(f"'{key}' must be at least 1")
    return out


def parse_key_values(text: str) -> Dict[str, str]:
    """key=value lines; blank lines and # comments are skipped."""
    result = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got '{line}'")
        key, value = line.split("=", 1)
        result[key.strip()] = value.strip()
    return result


class ConfigLoader:
    """Discovers and loads run configurations."""

    CONFIGS_DIR = "configs"
    SUFFIXES = (".yaml", ".conf")

    def __init__(self, base_path: Optional[str] = None):
        if base_path is None:
            base_path = Path(__file__).parent.parent
        self.base_path = Path(base_path)
        self.configs_path = self.base_path / self.CONFIGS_DIR

    def discover_configs(self) -> List[str]:
        """Names of the configurations shipped in configs/."""
        if not self.configs_path.exists():
            return []
        return sorted({p.stem for p in self.configs_path.iterdir() if p.suffix in self.SUFFIXES})

    def resolve(self, name_or_path: str) -> Path:
        candidate = Path(name_or_path)
        if candidate.exists():
            return candidate
        for suffix in self.SUFFIXES:
            named = self.configs_path / f"{name_or_path}{suffix}"
            if named.exists():
                return named
        raise FileNotFoundError(f"Configuration '{name_or_path}' not found")

    def load(self, name_or_path: Optional[str] = None, base: Optional[RunConfig] = None) -> RunConfig:
        """
        Load a configuration over `base` (defaults when omitted).

        Raises FileNotFoundError if not found, ConfigError on unknown keys or
        malformed values.
        """
        config = base or RunConfig()
        if name_or_path is None:
            return config
        path = self.resolve(name_or_path)
        text = path.read_text(encoding="utf-8")
        data = self._parse(text)
        log.debug("loaded %d settings from %s", len(data), path)
        return config.merged(data)

    def _parse(self, text: str) -> Dict[str, Any]:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError:
            data = None
        if data is None and not text.strip():
            return {}
        if isinstance(data, dict):
            return data
        return parse_key_values(text)
