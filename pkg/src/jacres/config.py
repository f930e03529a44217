"""Resource limits.

Limits are layered: dataclass defaults, then an optional YAML mapping
(``--config limits.yml``), then the ``JACRES_MAX_STEPS`` environment
variable. Every operation that can hit a cap takes a ``limits`` argument.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError

MAX_STEPS_ENV_VAR = "JACRES_MAX_STEPS"


@dataclass(frozen=True)
class ComputeLimits:
    """Caps on the exact computations."""
    max_steps: int = 1_000_000
    max_degree: int = 40
    radical_cap: int = 8
    mcap: int = 4
    order_cap: int = 12
    relative_precision: int = 6
    max_arc_weight: int = 3
    max_exponent: int = 256

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{f.name} must be a positive integer, got {value!r}")


DEFAULT_LIMITS = ComputeLimits()


def _parse_env_int(name: str, env: Mapping[str, str]) -> int | None:
    """Parse a positive integer from an environment variable."""
    raw = env.get(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def _read_limits_file(path: Path) -> dict[str, Any]:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read limits file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping of limit names to integers")
    known = {f.name for f in fields(ComputeLimits)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown limit(s): {', '.join(map(str, unknown))}")
    return data


def load_limits(
    path: Path | None = None,
    env: Mapping[str, str] | None = None,
) -> ComputeLimits:
    """Build the effective limits from defaults, a YAML file and the environment."""
    env = os.environ if env is None else env
    overrides: dict[str, Any] = {}
    if path is not None:
        overrides.update(_read_limits_file(path))
    max_steps = _parse_env_int(MAX_STEPS_ENV_VAR, env)
    if max_steps is not None:
        overrides["max_steps"] = max_steps
    return replace(DEFAULT_LIMITS, **overrides)
