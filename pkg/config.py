"""
Runtime settings for omlq.

Defaults < config file < OMLQ_COMMUTATOR_CAP < command-line flags.
"""

import json
import logging
import os
import threading
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

COMMUTATOR_CAP_ENV = 'OMLQ_COMMUTATOR_CAP'

PIVOT_ORDERS = ('decl', 'lex')


@dataclass(frozen=True)
class VerifySettings:
    """Defaults for `omlq verify`."""
    seed: int = 7
    max_len: int = 5
    samples: int = 100
    max_pump: int = 3
    zero_bias: float = 0.5
    workers: int = 4


@dataclass(frozen=True)
class Settings:
    impl: int = 3
    commutator_cap: int = 20
    max_states: int = 20000
    image_bound: int = 6
    pivot_order: str = 'decl'
    verify: VerifySettings = field(default_factory=VerifySettings)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


_settings = Settings()
_lock = threading.Lock()


def get_settings() -> Settings:
    """Return the process-wide settings."""
    return _settings


def configure(settings: Settings) -> Settings:
    """Install new process-wide settings and return them."""
    global _settings
    with _lock:
        _settings = settings
    return settings


def _check_int(section: str, key: str, value: Any, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"'{key}' in {section} configuration must be an integer")
    if value < minimum:
        raise ValueError(f"'{key}' in {section} configuration must be >= {minimum}")
    return value


def _parse_verify(raw: Dict[str, Any]) -> VerifySettings:
    if not isinstance(raw, dict):
        raise ValueError("'verify' configuration must be an object")

    known = {f.name for f in fields(VerifySettings)}
    for key in raw:
        if key not in known:
            raise ValueError(f"Unknown field in verify configuration: {key}")

    values = {}
    for key in ('seed', 'max_len', 'samples', 'max_pump', 'workers'):
        if key in raw:
            minimum = 1 if key in ('samples', 'workers') else 0
            values[key] = _check_int('verify', key, raw[key], minimum)

    if 'zero_bias' in raw:
        bias = raw['zero_bias']
        if not isinstance(bias, (int, float)) or isinstance(bias, bool) or not 0.0 <= bias <= 1.0:
            raise ValueError("'zero_bias' in verify configuration must be a number in [0, 1]")
        values['zero_bias'] = float(bias)

    return VerifySettings(**values)


def settings_from_dict(raw: Dict[str, Any]) -> Settings:
    """
    Build settings from a configuration dictionary.

    Args:
        raw: Parsed configuration document

    Returns:
        Settings with every omitted field at its default

    Raises:
        ValueError: On unknown fields or out-of-range values
    """
    if not isinstance(raw, dict):
        raise ValueError("Configuration must be a JSON object")

    known = {f.name for f in fields(Settings)}
    for key in raw:
        if key not in known:
            raise ValueError(f"Unknown field in config: {key}")

    values: Dict[str, Any] = {}
    if 'impl' in raw:
        impl = _check_int('top-level', 'impl', raw['impl'], 0)
        if impl > 5:
            raise ValueError("'impl' must be between 0 and 5")
        values['impl'] = impl
    for key in ('commutator_cap', 'max_states'):
        if key in raw:
            values[key] = _check_int('top-level', key, raw[key], 1)
    if 'image_bound' in raw:
        values['image_bound'] = _check_int('top-level', 'image_bound', raw['image_bound'], 0)
    if 'pivot_order' in raw:
        order = raw['pivot_order']
        if not isinstance(order, str) or not order:
            raise ValueError("'pivot_order' must be 'decl', 'lex' or a comma-separated state list")
        values['pivot_order'] = order
    if 'verify' in raw:
        values['verify'] = _parse_verify(raw['verify'])

    return Settings(**values)


def load_config(config_path: str) -> Settings:
    """
    Load settings from a JSON file.

    Args:
        config_path: Path to configuration file

    Returns:
        Parsed settings

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If the file is not valid JSON or a field is invalid
    """
    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_file, 'r') as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in {config_path}: {e}") from e

    return settings_from_dict(raw)


def apply_environment(settings: Settings, environ: Optional[Dict[str, str]] = None) -> Settings:
    """Apply OMLQ_COMMUTATOR_CAP if it is set."""
    environ = os.environ if environ is None else environ
    raw = environ.get(COMMUTATOR_CAP_ENV)
    if raw is None or raw == '':
        return settings
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{COMMUTATOR_CAP_ENV} must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError(f"{COMMUTATOR_CAP_ENV} must be >= 1")
    logger.debug(f"Commutator cap {cap} taken from {COMMUTATOR_CAP_ENV}")
    return replace(settings, commutator_cap=cap)
