from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..shared.errors import ConfigError


@dataclass(frozen=True)
class BmcConfig:
    """Bounds and budgets of one bounded model checking run."""

    unroll_bound: int = 5
    inline_depth: int = 16
    bit_width: int = 16
    max_conflicts: int = 20000
    timeout: float = 30.0
    simulation_rounds: int = 256
    seed: int = 0
    unwinding_assertions: bool = False
    # worker threads for per-property queries; the SAT core is pure Python and
    # holds the GIL, so this overlaps DIMACS output more than it speeds up solving
    parallelism: int = 1
    # directory receiving one DIMACS file per solver query, if set
    cnf_dir: Optional[str] = None

    def __post_init__(self):
        if self.unroll_bound < 1:
            raise ConfigError("unroll_bound must be at least 1")
        if self.inline_depth < 1:
            raise ConfigError("inline_depth must be at least 1")
        if not 4 <= self.bit_width <= 32:
            raise ConfigError("bit_width must be between 4 and 32")
        if self.max_conflicts < 1 or self.timeout <= 0:
            raise ConfigError("solver budgets must be positive")
        if self.simulation_rounds < 0:
            raise ConfigError("simulation_rounds must not be negative")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")

    @classmethod
    def from_pipeline(cls, cfg, cnf_dir=None) -> "BmcConfig":
        return cls(
            unroll_bound=cfg.unroll_bound,
            inline_depth=cfg.inline_depth,
            bit_width=cfg.bit_width,
            max_conflicts=cfg.max_conflicts,
            timeout=cfg.timeout,
            simulation_rounds=cfg.simulation_rounds,
            seed=cfg.seed,
            unwinding_assertions=cfg.unwinding_assertions,
            parallelism=cfg.parallelism,
            cnf_dir=str(cnf_dir) if cnf_dir is not None else None,
        )

    def bounds(self, entry=None) -> dict:
        result = {"N": self.unroll_bound, "D": self.inline_depth, "W": self.bit_width}
        if entry is not None:
            result["entry"] = entry
        return result
