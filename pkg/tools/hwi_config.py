#!/usr/bin/env python3
"""
Runtime settings for the hwi_* tools
====================================

Precedence (lowest first): built-in defaults, YAML config file,
environment (HWI_SEED, HWI_TOLERANCE, HWI_WORKERS), explicit CLI flags.
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from hwi_errors import ConfigError

log = logging.getLogger(__name__)

ENV_PREFIX = 'HWI_'


@dataclass(frozen=True)
class Settings:
    tolerance: float = 1e-9
    relative_tolerance: float = 1e-9
    seed: int = 0
    workers: int = 1
    # per-suite sample counts; 0 means "use the suite default"
    samples: int = 0
    plane_samples: int = 10_000


_ENV_KEYS = {
    'SEED': ('seed', int),
    'TOLERANCE': ('tolerance', float),
    'WORKERS': ('workers', int),
}

_current = Settings()


def get_settings() -> Settings:
    return _current


def use_settings(settings: Settings) -> Settings:
    """Install `settings` process-wide and return the previous value."""
    global _current
    previous = _current
    _current = settings
    return previous


def _coerce(values: Mapping[str, Any]) -> Dict[str, Any]:
    known = {f.name: f.type for f in fields(Settings)}
    out: Dict[str, Any] = {}
    for key, value in values.items():
        key = key.replace('-', '_')
        if key not in known:
            log.warning('ignoring unknown setting %r', key)
            continue
        caster = float if 'tolerance' in key else int
        try:
            out[key] = caster(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f'setting {key!r}: {e}') from e
    return out


def load_yaml(path: Path) -> Dict[str, Any]:
    try:
        payload = yaml.safe_load(path.read_text(encoding='utf-8')) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f'cannot read config {path}: {e}') from e
    if not isinstance(payload, dict):
        raise ConfigError(f'config {path} must be a mapping')
    return _coerce(payload)


def from_environment(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    environ = os.environ if environ is None else environ
    raw = {}
    for suffix, (name, _) in _ENV_KEYS.items():
        value = environ.get(ENV_PREFIX + suffix)
        if value not in (None, ''):
            raw[name] = value
    return _coerce(raw)


def resolve(config_path: Optional[Path] = None,
            overrides: Optional[Mapping[str, Any]] = None,
            environ: Optional[Mapping[str, str]] = None) -> Settings:
    settings = Settings()
    if config_path is not None:
        settings = replace(settings, **load_yaml(config_path))
    settings = replace(settings, **from_environment(environ))
    if overrides:
        settings = replace(settings, **_coerce({k: v for k, v in overrides.items() if v is not None}))
    log.debug('settings: %s', settings)
    return settings
