"""Runtime limits and defaults, overridable via TWCHECK_* environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

ENV_PREFIX = "TWCHECK_"

DEFAULT_STATE_CAP = 100_000
DEFAULT_ORDER_CAP = 50_000
DEFAULT_TABLE_CAP = 4_096
DEFAULT_BUDGET = 1_000_000_000
DEFAULT_SAMPLES = 100_000


@dataclass
class Config:
    """Knobs shared by the library and the CLI.

    Environment variables named TWCHECK_<FIELD> (upper case) override the
    built-in defaults; explicit CLI flags override both.
    """

    state_cap: int = DEFAULT_STATE_CAP
    order_cap: int = DEFAULT_ORDER_CAP
    table_cap: int = DEFAULT_TABLE_CAP
    budget: int = DEFAULT_BUDGET
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    threads: int = 1
    format: str = "json"
    cache_dir: str | None = None

    @classmethod
    def from_env(cls) -> "Config":
        kwargs = {}
        for f in fields(cls):
            raw = os.environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            if f.name in ("format", "cache_dir"):
                kwargs[f.name] = raw
            else:
                kwargs[f.name] = int(raw)
        return cls(**kwargs)

    def default_cache_dir(self) -> str:
        if self.cache_dir:
            return self.cache_dir
        base = os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache"))
        return os.path.join(base, "twcheck")
