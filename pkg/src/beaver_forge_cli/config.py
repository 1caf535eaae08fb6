"""CLI configuration: defaults, YAML file, environment, then flags.

Resolution order (later wins):

1. built-in defaults (the default parameter set, 3 servers)
2. a YAML file: ``--config PATH``, else ``$BEAVER_FORGE_CONFIG``
   (``.env`` is loaded first, so it may set the variable)
3. ``BEAVER_FORGE_<FIELD>`` environment variables, e.g. ``BEAVER_FORGE_SERVERS=5``
4. command-line flags

The resolved config is written as ``config.resolved.yaml`` next to the
outputs so every run can be repeated exactly.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Mapping

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beaver_forge.constants import (
    DEFAULT_N,
    DEFAULT_Q,
    DEFAULT_SIGMA,
    DEFAULT_T,
    DEFAULT_TAIL_BOUND,
)
from beaver_forge.errors import ParameterError
from beaver_forge.models.enums import MaskingMode
from beaver_forge.models.params import AheParams, RingParams
from beaver_forge.seeding import fresh_seed, format_seed, parse_seed

logger = logging.getLogger(__name__)

ENV_PREFIX = "BEAVER_FORGE_"
CONFIG_ENV_VAR = "BEAVER_FORGE_CONFIG"
RESOLVED_NAME = "config.resolved.yaml"


class Config(BaseModel):
    """Immutable run configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Scheme parameters
    n: int = DEFAULT_N
    q: int = DEFAULT_Q
    t: int = DEFAULT_T
    sigma: float = DEFAULT_SIGMA
    tail_bound: int = DEFAULT_TAIL_BOUND

    # Topology: m online parties (None -> one per server), l servers
    parties: int | None = None
    servers: int = Field(default=3)

    # Hex master seed; None draws a fresh one at resolution time
    seed: str | None = None

    out_dir: str = "out"
    workers: int = 1
    masking: MaskingMode = MaskingMode.AGGREGATE
    log_level: str = "INFO"

    @model_validator(mode="after")
    def _check(self) -> "Config":
        if self.servers < 2:
            raise ParameterError(f"servers must be >= 2, got {self.servers}")
        if self.parties is not None and self.parties < 2:
            raise ParameterError(f"parties must be >= 2, got {self.parties}")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        if self.seed is not None:
            parse_seed(self.seed)
        return self

    @property
    def params(self) -> AheParams:
        """Validated scheme parameters; raises ParameterError with the violated bound."""
        ring = RingParams(n=self.n, q=self.q, sigma=self.sigma, tail_bound=self.tail_bound)
        return AheParams(ring=ring, t=self.t)

    @property
    def master_seed(self) -> int:
        if self.seed is None:
            raise ParameterError("config has no seed; resolve it with load_config()")
        return parse_seed(self.seed)

    @property
    def online_parties(self) -> int:
        return self.parties if self.parties is not None else self.servers

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)


def _read_yaml(path: Path) -> dict[str, Any]:
    with path.open("r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: expected a mapping at the top level")
    # "seed: c0ffee" may parse as a string, "seed: 1234" as an int
    if "seed" in data and data["seed"] is not None:
        data["seed"] = str(data["seed"])
    return data


def _env_overrides() -> dict[str, str]:
    overrides = {}
    for name in Config.model_fields:
        value = os.getenv(ENV_PREFIX + name.upper())
        if value:
            overrides[name] = value
    return overrides


def load_config(
    config_path: str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> Config:
    """Resolve the run configuration (see module docstring for the order)."""
    load_dotenv()
    data: dict[str, Any] = {}

    path = config_path or os.getenv(CONFIG_ENV_VAR) or None
    if path:
        data.update(_read_yaml(Path(path)))
        logger.debug("loaded config file %s", path)

    data.update(_env_overrides())
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})

    if data.get("seed") is None:
        data["seed"] = format_seed(fresh_seed())
        logger.info("no seed given; using fresh seed %s", data["seed"])
    return Config.model_validate(data)


def write_resolved(config: Config, directory: Path | None = None) -> Path:
    """Dump the resolved config as YAML next to the outputs."""
    directory = Path(directory) if directory is not None else config.out_path
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / RESOLVED_NAME
    with path.open("w", encoding="utf-8") as fh:
        yaml.safe_dump(config.model_dump(mode="json"), fh, sort_keys=False)
    return path
