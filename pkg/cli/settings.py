"""
Runtime settings: defaults, optional JSON config file, environment, CLI flags
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

ENV_PREFIX = "ORBIFROB_"
DEFAULT_CACHE = str(Path.home() / ".cache" / "orbifrob" / "hurwitz.jsonl")


class Settings(BaseModel):
    """Resource caps, cache location and numeric tolerances shared by every verb"""
    cache_path: str = Field(DEFAULT_CACHE, description="JSON-lines Hurwitz cache")
    coefficient_bit_cap: int = Field(10 ** 6, ge=1, description="Bit cap on Groebner coefficients")
    max_character_degree: int = Field(30, ge=1, description="Largest degree for character tables")
    oracle_cap_genus0: int = Field(5, ge=1, description="Brute-force oracle degree cap over P1")
    oracle_cap_genus1: int = Field(4, ge=1, description="Brute-force oracle degree cap over an elliptic base")
    degree_cutoff: int = Field(12, ge=0, description="Q-degree cutoff for non-polynomial orbicurves")
    eigen_tol: float = Field(1e-9, gt=0, description="Residual tolerance for numeric eigenvalues")
    fourier_modes: int = Field(5, ge=1, description="Fourier truncation K for Seifert Hamiltonians")
    max_workers: int = Field(4, ge=1, description="Thread pool size")
    seed: int = Field(20240101, description="Seed for random sample points")
    log_level: str = Field("WARNING", description="Logging level for the CLI")


_ENV_FIELDS = {
    "CACHE": "cache_path",
    "LOG_LEVEL": "log_level",
    "MAX_WORKERS": "max_workers",
}


def _from_environment() -> Dict[str, Any]:
    values = {}
    for suffix, field_name in _ENV_FIELDS.items():
        value = os.getenv(ENV_PREFIX + suffix)
        if value:
            values[field_name] = value
    return values


def load_settings(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """
    Build the settings

    Args:
        config_path: optional JSON file with Settings fields
        overrides: explicit values from the command line (None entries are ignored)

    Returns:
        Settings, later sources winning: defaults, config file, .env/environment, overrides
    """
    load_dotenv()
    values: Dict[str, Any] = {}
    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ValueError(f"Unsupported config file: {config_path} does not exist")
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        unknown = sorted(set(data) - set(Settings.model_fields))
        if unknown:
            raise ValueError(f"Unsupported config keys: {unknown}")
        values.update(data)
    values.update(_from_environment())
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    settings = Settings(**values)
    logger.debug(f"Settings: {settings.model_dump()}")
    return settings
