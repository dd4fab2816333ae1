"""Plain-text ``key = value`` configuration files."""

from __future__ import annotations

import dataclasses
import typing
from pathlib import Path

from .core import ConfigError

__all__ = ["parse_kv_text", "read_kv_file", "coerce", "build_dataclass"]


def parse_kv_text(text: str, source: str = "<string>") -> dict:
    """Parse ``key = value`` lines. ``#`` starts a comment; blank lines are skipped."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected 'key = value', got %r" % (source, lineno, raw))
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("%s:%d: empty key" % (source, lineno))
        if key in out:
            raise ConfigError("%s:%d: duplicate key %r" % (source, lineno, key))
        out[key] = value
    return out


def read_kv_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("cannot read config file %s: %s" % (path, exc.strerror or exc)) from exc
    return parse_kv_text(text, str(path))


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def coerce(value, typ):
    """Convert a raw string to ``typ`` (bool, int, float or str)."""
    if not isinstance(value, str):
        return value
    if typ is bool:
        v = value.lower()
        if v in _TRUE:
            return True
        if v in _FALSE:
            return False
        raise ConfigError("expected a boolean, got %r" % value)
    if typ is int:
        try:
            return int(value)
        except ValueError:
            f = float(value)
            if f != int(f):
                raise ConfigError("expected an integer, got %r" % value) from None
            return int(f)
    if typ is float:
        return float(value)
    return value


def build_dataclass(cls, values: dict, aliases: dict | None = None, base=None):
    """Instantiate dataclass ``cls`` from string or typed values.

    Unknown keys raise :class:`ConfigError`. ``base`` supplies defaults.
    """
    aliases = aliases or {}
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, raw in values.items():
        name = aliases.get(key, key)
        if name not in names:
            raise ConfigError(
                "unknown %s key %r (known: %s)" % (cls.__name__, key, ", ".join(sorted(names)))
            )
        typ = hints[name]
        if typing.get_origin(typ) is typing.Union:
            typ = next(a for a in typing.get_args(typ) if a is not type(None))
        try:
            kwargs[name] = coerce(raw, typ)
        except ValueError as exc:
            raise ConfigError("bad value for %r: %s" % (key, exc)) from exc
    if base is not None:
        return dataclasses.replace(base, **kwargs)
    return cls(**kwargs)
