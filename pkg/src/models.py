"""
Data models for RMRPA system.

This module defines the configuration and result records used throughout the
system: decoder and list settings, sweep specifications, per-point trial
summaries and transition curves.
"""

import math
from dataclasses import dataclass, field, asdict
from typing import List, Dict, Any, Optional, Tuple
from enum import Enum

import numpy as np


class ChannelKind(Enum):
    """Enumeration for binary-input channel models."""
    BSC = "bsc"
    AWGN = "awgn"


class DecoderVariant(Enum):
    """Enumeration for decoder variants exposed by the harness and CLI."""
    REED = "reed"
    RPA_BSC = "rpa-bsc"
    RPA = "rpa"
    RPA_LIST = "rpa-list"
    RPA_LIST_CONCAT = "rpa-list-concat"
    ML = "ml"

    @classmethod
    def from_name(cls, name: str) -> "DecoderVariant":
        """Parse a decoder name, accepting both dashes and underscores."""
        normalized = name.strip().lower().replace('_', '-')
        for variant in cls:
            if variant.value == normalized:
                return variant
        valid = ', '.join(v.value for v in cls)
        raise ValueError(f"Unknown decoder '{name}'. Must be one of: {valid}")

    @property
    def needs_hard_input(self) -> bool:
        """Hard-decision decoders only look at the signs of the LLRs."""
        return self in (DecoderVariant.REED, DecoderVariant.RPA_BSC)


@dataclass(frozen=True)
class DecoderConfig:
    """Iteration control and voting-set selection for the RPA decoders."""
    n_max: Optional[int] = None  # None means ceil(m/2) at the top level
    theta: float = 0.05
    voting_set: Optional[Tuple[int, ...]] = None  # subspace positions, top level only
    voting_set_size: Optional[int] = None
    voting_seed: int = 0
    parallel_projections: bool = False
    workers: Optional[int] = None

    def __post_init__(self):
        """Validate iteration and voting-set settings."""
        if self.n_max is not None and self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.theta < 0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        if self.voting_set is not None:
            if len(self.voting_set) == 0:
                raise ValueError("voting_set must be nonempty when present")
            if any(int(i) < 0 for i in self.voting_set):
                raise ValueError(f"voting_set positions must be non-negative, got {self.voting_set}")
            object.__setattr__(self, 'voting_set', tuple(sorted(set(int(i) for i in self.voting_set))))
        if self.voting_set_size is not None and self.voting_set_size < 1:
            raise ValueError(f"voting_set_size must be >= 1, got {self.voting_set_size}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def resolved_n_max(self, m: int) -> int:
        """Iteration cap for a top-level decode of length 2^m."""
        if self.n_max is not None:
            return self.n_max
        return max(1, math.ceil(m / 2))

    @property
    def restricts_voting(self) -> bool:
        return self.voting_set is not None or self.voting_set_size is not None


@dataclass(frozen=True)
class ListConfig:
    """Chase list settings: 2^t candidates, L_max = l_max_mult * max|L|."""
    t: int = 0
    l_max_mult: int = 2

    def __post_init__(self):
        if self.t < 0 or self.t > 20:
            raise ValueError(f"List exponent t must be in [0, 20], got {self.t}")
        if self.l_max_mult not in (1, 2):
            raise ValueError(f"l_max_mult must be 1 or 2, got {self.l_max_mult}")

    @property
    def list_size(self) -> int:
        return 1 << self.t


@dataclass
class DecodeResult:
    """Decoded word plus the FAILURE flag raised by the concatenated decoder."""
    codeword: np.ndarray
    failure: bool = False


@dataclass(frozen=True)
class SweepSpec:
    """Complete description of one Monte-Carlo sweep."""
    m: int
    r: int
    decoder: DecoderVariant
    channel: ChannelKind
    grid: Tuple[float, ...]
    trials: int = 1000
    seed: int = 0
    decoder_config: DecoderConfig = field(default_factory=DecoderConfig)
    list_config: ListConfig = field(default_factory=ListConfig)
    parities: int = 1
    outer_seed: int = 0
    threads: int = 1

    def __post_init__(self):
        """Validate counts and the channel grid."""
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.grid:
            raise ValueError("Channel grid must be nonempty")
        grid = tuple(float(g) for g in self.grid)
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"Channel grid must be sorted ascending: {grid}")
        object.__setattr__(self, 'grid', grid)
        if self.parities not in (1, 2):
            raise ValueError(f"parities must be 1 or 2, got {self.parities}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


@dataclass
class PointSummary:
    """Counters for one grid point of a sweep."""
    m: int
    r: int
    decoder: str
    channel: str
    param: float
    trials: int
    block_errors: int = 0
    bit_errors: int = 0
    failures: int = 0
    ml_lb_errors: int = 0
    seed: int = 0
    wall_ms: float = 0.0

    def __post_init__(self):
        """Check the counter invariants."""
        if self.ml_lb_errors > self.block_errors:
            raise ValueError("ml_lb_errors cannot exceed block_errors")
        for name in ('block_errors', 'failures', 'ml_lb_errors'):
            if getattr(self, name) > self.trials:
                raise ValueError(f"{name} cannot exceed trials")

    @property
    def block_error_rate(self) -> float:
        return self.block_errors / self.trials

    @property
    def bit_error_rate(self) -> float:
        return self.bit_errors / (self.trials * (1 << self.m))

    def to_row(self) -> Dict[str, Any]:
        """Row dictionary in CSV column order."""
        return asdict(self)


@dataclass
class TrialSummary:
    """All grid points of one sweep, in grid order."""
    points: List[PointSummary] = field(default_factory=list)

    def rows(self) -> List[Dict[str, Any]]:
        return [p.to_row() for p in self.points]


@dataclass
class AuditSummary:
    """Outcome of the codeword-invariance audit."""
    trials: int
    indicator_mismatches: int = 0
    equivariance_failures: int = 0

    @property
    def passed(self) -> bool:
        return self.indicator_mismatches == 0


@dataclass(frozen=True)
class TransitionCurve:
    """Block-error probability as a function of the channel parameter."""
    eps: Tuple[float, ...]
    pe: Tuple[float, ...]

    def __post_init__(self):
        if len(self.eps) != len(self.pe):
            raise ValueError("eps and pe must have the same length")
        if len(self.eps) < 2:
            raise ValueError("A transition curve needs at least two points")
        if any(b < a for a, b in zip(self.eps, self.eps[1:])):
            raise ValueError("Curve points must be sorted by channel parameter")
        if any(not 0.0 <= p <= 1.0 for p in self.pe):
            raise ValueError("Error probabilities must lie in [0, 1]")
        object.__setattr__(self, 'eps', tuple(float(e) for e in self.eps))
        object.__setattr__(self, 'pe', tuple(float(p) for p in self.pe))
