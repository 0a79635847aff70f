"""
Configuration management utilities for RMRPA system.

This module provides functions to load, validate, and manage system configuration
from the config.yaml file, and to turn configuration sections into the decoder
and sweep records of ``src.models``.
"""

import os
import yaml
from typing import Dict, Any, Optional, List
import logging

from ..models import (
    ChannelKind, DecoderConfig, DecoderVariant, ListConfig, SweepSpec
)

logger = logging.getLogger(__name__)


class ConfigError(Exception):
    """Exception raised for configuration-related errors."""
    pass


def load_config(config_path: str = "config.yaml") -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to the configuration file

    Returns:
        Dictionary containing configuration data

    Raises:
        ConfigError: If configuration file is missing or invalid
    """
    if not os.path.exists(config_path):
        raise ConfigError(f"Configuration file not found: {config_path}")

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in configuration file: {e}")
    except OSError as e:
        raise ConfigError(f"Error loading configuration: {e}")

    if not isinstance(config, dict):
        raise ConfigError(f"Configuration root must be a mapping: {config_path}")
    validate_config(config)
    return config


def validate_config(config: Dict[str, Any]) -> None:
    """
    Validate configuration structure and required fields.

    Args:
        config: Configuration dictionary to validate

    Raises:
        ConfigError: If configuration is invalid
    """
    required_sections = [
        'code',
        'decoder',
        'channel',
        'simulation'
    ]

    for section in required_sections:
        if section not in config:
            raise ConfigError(f"Missing required configuration section: {section}")

    # Validate code parameters
    code = config['code']
    m, r = code.get('m'), code.get('r')
    if not isinstance(m, int) or not isinstance(r, int):
        raise ConfigError("code.m and code.r must be integers")
    if not 0 <= r <= m <= 30 or m < 1:
        raise ConfigError(f"Invalid Reed-Muller parameters: m={m}, r={r}")

    # Validate decoder name and iteration settings
    decoder = config['decoder']
    try:
        DecoderVariant.from_name(decoder.get('name', 'rpa'))
    except ValueError as e:
        raise ConfigError(str(e))
    theta = decoder.get('theta', 0.05)
    if not isinstance(theta, (int, float)) or theta < 0:
        raise ConfigError(f"decoder.theta must be a non-negative number, got {theta}")
    n_max = decoder.get('n_max')
    if n_max is not None and (not isinstance(n_max, int) or n_max < 1):
        raise ConfigError(f"decoder.n_max must be a positive integer or null, got {n_max}")

    # Validate channel
    channel = config['channel']
    kind = channel.get('kind', 'bsc')
    if kind not in [k.value for k in ChannelKind]:
        raise ConfigError(f"Invalid channel kind: {kind}. Must be one of: bsc, awgn")
    grid = channel.get('grid', [])
    if not isinstance(grid, list) or not grid:
        raise ConfigError("channel.grid must be a nonempty list")
    if kind == 'bsc' and any(not 0 < p < 0.5 for p in grid):
        raise ConfigError("BSC crossover probabilities must lie strictly inside (0, 0.5)")

    # Validate simulation counters
    simulation = config['simulation']
    for key in ('trials', 'threads'):
        value = simulation.get(key, 1)
        if not isinstance(value, int) or value < 1:
            raise ConfigError(f"simulation.{key} must be a positive integer, got {value}")
    seed = simulation.get('seed', 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"simulation.seed must be a non-negative integer, got {seed}")

    # Validate list and outer code settings
    list_section = config.get('list', {})
    if list_section.get('l_max_mult', 2) not in (1, 2):
        raise ConfigError("list.l_max_mult must be 1 or 2")
    outer = config.get('outer', {})
    if outer.get('parities', 1) not in (1, 2):
        raise ConfigError("outer.parities must be 1 or 2")


def get_config_value(config: Dict[str, Any], key_path: str, default: Any = None) -> Any:
    """
    Get configuration value using dot notation.

    Args:
        config: Configuration dictionary
        key_path: Dot-separated path to the value (e.g., 'decoder.theta')
        default: Default value if key is not found

    Returns:
        Configuration value or default
    """
    keys = key_path.split('.')
    value = config

    try:
        for key in keys:
            value = value[key]
        return value
    except (KeyError, TypeError):
        return default


def update_config_value(config: Dict[str, Any], key_path: str, value: Any) -> None:
    """
    Update configuration value using dot notation.

    Args:
        config: Configuration dictionary to update
        key_path: Dot-separated path to the value
        value: New value to set
    """
    keys = key_path.split('.')
    current = config

    for key in keys[:-1]:
        if key not in current or current[key] is None:
            current[key] = {}
        current = current[key]

    current[keys[-1]] = value


def save_config(config: Dict[str, Any], config_path: str = "config.yaml") -> None:
    """
    Save configuration to YAML file.

    Args:
        config: Configuration dictionary to save
        config_path: Path to save the configuration file

    Raises:
        ConfigError: If unable to save configuration
    """
    try:
        with open(config_path, 'w', encoding='utf-8') as f:
            yaml.dump(config, f, default_flow_style=False, indent=2)
        logger.info(f"Configuration saved to {config_path}")
    except OSError as e:
        raise ConfigError(f"Error saving configuration: {e}")


def decoder_config_from(config: Dict[str, Any]) -> DecoderConfig:
    """Build a DecoderConfig from the ``decoder`` section."""
    section = config.get('decoder', {}) or {}
    voting_set: Optional[List[int]] = section.get('voting_set')
    try:
        return DecoderConfig(
            n_max=section.get('n_max'),
            theta=float(section.get('theta', 0.05)),
            voting_set=tuple(voting_set) if voting_set else None,
            voting_set_size=section.get('voting_set_size'),
            voting_seed=int(section.get('voting_seed', 0)),
            parallel_projections=bool(section.get('parallel_projections', False)),
            workers=section.get('workers'),
        )
    except ValueError as e:
        raise ConfigError(f"Invalid decoder configuration: {e}")


def list_config_from(config: Dict[str, Any]) -> ListConfig:
    """Build a ListConfig from the ``list`` section."""
    section = config.get('list', {}) or {}
    try:
        return ListConfig(t=int(section.get('t', 0)), l_max_mult=int(section.get('l_max_mult', 2)))
    except ValueError as e:
        raise ConfigError(f"Invalid list configuration: {e}")


def sweep_spec_from(config: Dict[str, Any]) -> SweepSpec:
    """Build a SweepSpec from a validated configuration dictionary."""
    try:
        return SweepSpec(
            m=config['code']['m'],
            r=config['code']['r'],
            decoder=DecoderVariant.from_name(get_config_value(config, 'decoder.name', 'rpa')),
            channel=ChannelKind(get_config_value(config, 'channel.kind', 'bsc')),
            grid=tuple(sorted(get_config_value(config, 'channel.grid'))),
            trials=get_config_value(config, 'simulation.trials', 1000),
            seed=get_config_value(config, 'simulation.seed', 0),
            decoder_config=decoder_config_from(config),
            list_config=list_config_from(config),
            parities=get_config_value(config, 'outer.parities', 1),
            outer_seed=get_config_value(config, 'outer.seed', 0),
            threads=get_config_value(config, 'simulation.threads', 1),
        )
    except (KeyError, ValueError) as e:
        raise ConfigError(f"Invalid sweep specification: {e}")


def load_sweep_spec(spec_path: str, base_config: Dict[str, Any]) -> SweepSpec:
    """
    Load a sweep YAML and merge it over the base configuration.

    Sections present in the sweep file replace keys of the matching base
    section; everything else is inherited.

    Args:
        spec_path: Path to the sweep YAML file
        base_config: Already loaded default configuration

    Returns:
        SweepSpec for the merged configuration

    Raises:
        ConfigError: If the file is missing or the merged configuration is invalid
    """
    if not os.path.exists(spec_path):
        raise ConfigError(f"Sweep specification not found: {spec_path}")
    try:
        with open(spec_path, 'r', encoding='utf-8') as f:
            overrides = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in sweep specification: {e}")

    merged = {key: dict(value) if isinstance(value, dict) else value
              for key, value in base_config.items()}
    for section, values in overrides.items():
        if isinstance(values, dict):
            merged.setdefault(section, {})
            merged[section].update(values)
        else:
            merged[section] = values

    validate_config(merged)
    logger.info(f"Loaded sweep specification from {spec_path}")
    return sweep_spec_from(merged)
