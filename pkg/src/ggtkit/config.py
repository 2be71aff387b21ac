"""Run-wide configuration: resource caps, numeric mode, determinism knobs."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError

DEFAULT_BALL_CAP = 10**6
DEFAULT_BASIS_CAP = 10**4
DEFAULT_RADIUS_CAP = 64
DEFAULT_DELTA_MIN = Fraction(1, 4)
# Dominating-constant ceiling for the conjugacy-bound profiler fit.  A fit of
# degree d is accepted only when every record satisfies
# min_length <= A * (1 + input_length)**d with A <= this cap.
DEFAULT_FIT_CAP = Fraction(1)
DEFAULT_EXHAUSTIVE_QUADRUPLE_CAP = 200

CACHE_DIR_ENV = "GGTKIT_CACHE_DIR"


@dataclass
class Caps:
    """Hard resource limits; exceeding one raises ResourceCapError."""

    ball_size: int = DEFAULT_BALL_CAP
    basis_size: int = DEFAULT_BASIS_CAP
    radius: int = DEFAULT_RADIUS_CAP

    def validate(self) -> None:
        for name in ("ball_size", "basis_size", "radius"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"cap {name!r} must be positive")


@dataclass
class RunConfig:
    """Everything a reproducible run depends on besides the inputs themselves."""

    caps: Caps = field(default_factory=Caps)
    numeric_mode: str = "exact"  # "exact" | "float"
    seed: int = 0
    parallelism: int = 1
    output_format: str = "json"  # "json" | "csv"
    cache_dir: str | None = None
    delta_min: Fraction = DEFAULT_DELTA_MIN
    fit_cap: Fraction = DEFAULT_FIT_CAP

    def validate(self) -> None:
        self.caps.validate()
        if self.numeric_mode not in ("exact", "float"):
            raise ConfigError(f"numeric_mode must be 'exact' or 'float', got {self.numeric_mode!r}")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"output_format must be 'json' or 'csv', got {self.output_format!r}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.delta_min <= 0:
            raise ConfigError("delta_min must be positive")

    def resolved_cache_dir(self) -> str | None:
        return self.cache_dir or os.environ.get(CACHE_DIR_ENV)
