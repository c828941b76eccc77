"""Server configuration: JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError

ENV_LISTEN = "TAXLAB_LISTEN"
ENV_STORAGE_PATH = "TAXLAB_STORAGE_PATH"
ENV_TOKEN_TTL_HOURS = "TAXLAB_TOKEN_TTL_HOURS"

DEFAULT_LISTEN = "127.0.0.1:8099"


@dataclass
class ServeConfig:
    storage_path: str
    listen: str = DEFAULT_LISTEN
    token_ttl_hours: float = 24.0

    @property
    def host(self) -> str:
        return parse_listen(self.listen)[0]

    @property
    def port(self) -> int:
        return parse_listen(self.listen)[1]


def parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port_text = (listen or "").rpartition(":")
    if not sep or not host:
        raise ConfigError("listen address must look like host:port", listen=listen)
    try:
        port = int(port_text)
    except ValueError:
        raise ConfigError("listen port must be an integer", listen=listen) from None
    if not (0 < port < 65536):
        raise ConfigError("listen port out of range", listen=listen)
    return host, port


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> ServeConfig:
    """Merge file values under environment overrides.

    The storage path must come from one of the two; everything else has
    defaults.
    """
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if path is not None:
        # OSError is allowed to escape: an unreadable file is an I/O
        # problem, not a configuration problem.
        raw = Path(path).read_text(encoding="utf-8")
        try:
            values = json.loads(raw)
        except ValueError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}", path=str(path))
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object", path=str(path))
        unknown = sorted(set(values) - {"listen", "storage_path", "token_ttl_hours"})
        if unknown:
            raise ConfigError("unknown config keys", keys=unknown)

    listen = env.get(ENV_LISTEN) or values.get("listen") or DEFAULT_LISTEN
    storage_path = env.get(ENV_STORAGE_PATH) or values.get("storage_path")
    ttl_raw = env.get(ENV_TOKEN_TTL_HOURS) or values.get("token_ttl_hours", 24.0)
    if not storage_path:
        raise ConfigError(
            "storage path is required (config 'storage_path' or "
            f"environment {ENV_STORAGE_PATH})"
        )
    try:
        ttl = float(ttl_raw)
    except (TypeError, ValueError):
        raise ConfigError("token_ttl_hours must be a number", value=ttl_raw) from None
    if ttl <= 0:
        raise ConfigError("token_ttl_hours must be positive", value=ttl)
    parse_listen(listen)
    return ServeConfig(storage_path=str(storage_path), listen=listen, token_ttl_hours=ttl)
