"""Flat INI config files for simulation and batch settings.

Two sections, [sim] and [batch], whose keys mirror the SimConfig and
BatchConfig field names. Missing keys keep their defaults; dumping and
re-parsing an effective config is lossless.
"""

from __future__ import annotations

import configparser
import dataclasses
import io

from .experiment import BatchConfig
from .model import SimConfig


class ConfigError(ValueError):
    """Malformed config file or override."""


def _parse_value(raw: str, default):
    raw = raw.strip()
    if raw.lower() == "none":
        return None
    if default is None:
        # Optional tuple field currently unset: parse as a float tuple.
        default = (0.0,)
    try:
        if isinstance(default, bool):
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            elem_type = type(default[0]) if default else float
            parts = [p for p in raw.replace(",", " ").split() if p]
            return tuple(elem_type(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad value {raw!r}: {exc}") from exc
    raise ConfigError(f"unsupported config value type for {raw!r}")


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _apply_section(obj, section: str, items) -> None:
    known = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    for key, raw in items:
        if key not in known:
            raise ConfigError(f"unknown key [{section}] {key}")
        setattr(obj, key, _parse_value(raw, known[key]))


def load_config(path: str | None = None) -> BatchConfig:
    """Build a BatchConfig from an INI file, or pure defaults without one."""
    batch = BatchConfig(sim=SimConfig())
    if path is None:
        return batch
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from exc
    for section in parser.sections():
        if section == "sim":
            _apply_section(batch.sim, section, parser.items(section))
        elif section == "batch":
            _apply_section(
                batch, section,
                [(k, v) for k, v in parser.items(section) if k != "sim"],
            )
        else:
            raise ConfigError(f"unknown config section [{section}]")
    return batch


def apply_override(batch: BatchConfig, key: str, raw: str) -> None:
    """Apply one `section.name=value` override on top of a loaded config."""
    if "." not in key:
        raise ConfigError(f"override key must be sim.NAME or batch.NAME: {key!r}")
    section, name = key.split(".", 1)
    if section == "sim":
        _apply_section(batch.sim, section, [(name, raw)])
    elif section == "batch":
        if name == "sim":
            raise ConfigError("cannot override batch.sim directly")
        _apply_section(batch, section, [(name, raw)])
    else:
        raise ConfigError(f"unknown config section {section!r}")


def dump_config(batch: BatchConfig) -> str:
    """Serialize the effective configuration; re-parsing reproduces it."""
    out = io.StringIO()
    out.write("[sim]\n")
    for f in dataclasses.fields(batch.sim):
        out.write(f"{f.name} = {_format_value(getattr(batch.sim, f.name))}\n")
    out.write("\n[batch]\n")
    for f in dataclasses.fields(batch):
        if f.name == "sim":
            continue
        out.write(f"{f.name} = {_format_value(getattr(batch, f.name))}\n")
    return out.getvalue()
