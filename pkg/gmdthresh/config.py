"""Configuration: numeric tolerances, defaults and the run configuration."""

import math
from dataclasses import dataclass, asdict
from typing import Optional

from .errors import UsageError

# Root finding
THRESHOLD_XTOL = 1e-15  # bracket width on T at which bisection stops
RESIDUAL_TOL_1T = 1e-10  # |1/2 l_e - l_c| accepted for one threshold
RESIDUAL_TOL_ZT = 1e-8  # log-domain residuals accepted for z thresholds
GAP_EPS = 1e-9  # smallest spacing T_{i+1} - T_i searched by the chain solver

# Exact z-threshold sum: weak compositions of n into 2z+1 parts
ENUMERATION_LIMIT = 10**7

# General (all-SNR) single threshold minimization
GRID_STEP = 0.01  # coarse seeding grid on [0, 1]
GOLDEN_XTOL = 1e-6  # refinement tolerance on T

# Monte Carlo
SIM_BLOCK_TRIALS = 1 << 14  # trials per independently keyed random block
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20240601

# Output
DEFAULT_DIGITS = 12

# Figure 2 sweep defaults
SWEEP_SNR_MIN = 0.0
SWEEP_SNR_MAX = 20.0
SWEEP_STEP = 0.5
SWEEP_N = 127
SWEEP_D = 63

COMMANDS = ("thresholds", "goal", "prob", "sweep", "simulate", "gain")

# Commands that need a channel given as --sigma or --snr
_CHANNEL_COMMANDS = ("thresholds", "goal", "prob", "simulate")


@dataclass
class RunConfig:
    """One CLI invocation, validated before dispatch."""
    command: str
    sigma: Optional[float] = None
    snr_db: Optional[float] = None
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    z: int = 1
    thresholds: Optional[list[float]] = None
    analytic: bool = False
    balanced: bool = False
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = 1
    snr_min: float = SWEEP_SNR_MIN
    snr_max: float = SWEEP_SNR_MAX
    step: float = SWEEP_STEP
    sigma2: Optional[float] = None
    digits: int = DEFAULT_DIGITS
    output: Optional[str] = None
    progress: bool = False
    verbose: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(**data)

    def validate(self) -> "RunConfig":
        """Check every numeric range; raises UsageError on the first problem."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.digits < 1:
            raise UsageError("--digits must be at least 1")

        if self.sigma is not None and self.snr_db is not None:
            raise UsageError("give either --sigma or --snr, not both")
        if self.command in _CHANNEL_COMMANDS:
            if self.sigma is None and self.snr_db is None:
                raise UsageError(f"'{self.command}' needs --sigma or --snr")
        elif self.sigma is not None or self.snr_db is not None:
            raise UsageError(f"'{self.command}' takes no --sigma or --snr")
        if self.sigma is not None and not (math.isfinite(self.sigma) and self.sigma > 0):
            raise UsageError("--sigma must be a positive finite number")
        if self.snr_db is not None and not math.isfinite(self.snr_db):
            raise UsageError("--snr must be finite")

        if self.z < 1:
            raise UsageError("--z must be at least 1")
        if self.analytic and (self.z != 1 or self.command != "thresholds"):
            raise UsageError("--analytic only applies to 'thresholds' with --z 1")

        if self.command in ("goal",) and self.d is None:
            raise UsageError("'goal' needs --d")
        if self.command in ("prob", "simulate", "sweep"):
            if self.n is None or self.d is None:
                raise UsageError(f"'{self.command}' needs --n and --d")
        if self.d is not None and self.d < 1:
            raise UsageError("--d must be at least 1")
        if self.n is not None:
            if self.n < 1:
                raise UsageError("--n must be at least 1")
            if self.d is not None and self.d > self.n:
                raise UsageError("--d cannot exceed --n")
            if self.k is not None and not 1 <= self.k <= self.n:
                raise UsageError("--k must lie in [1, n]")

        if self.thresholds is not None:
            self._validate_thresholds()
        elif self.command == "goal":
            raise UsageError("'goal' needs at least one threshold (-T)")

        if self.command == "simulate":
            if self.trials < 1:
                raise UsageError("--trials must be at least 1")
            if self.seed < 0:
                raise UsageError("--seed must be non-negative")
            if self.workers < 1:
                raise UsageError("--workers must be at least 1")

        if self.command == "sweep":
            if not self.step > 0:
                raise UsageError("--step must be positive")
            if self.snr_min > self.snr_max:
                raise UsageError("--snr-min must not exceed --snr-max")

        if self.sigma2 is not None and not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise UsageError("--sigma2 must be a positive finite number")
        return self

    def _validate_thresholds(self):
        if not self.thresholds:
            raise UsageError("threshold list is empty")
        for t in self.thresholds:
            if not 0.0 <= t <= 1.0:
                raise UsageError(f"threshold {t} outside [0, 1]")
        # goal takes independent single thresholds; the others a ThresholdSet
        if self.command != "goal":
            if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
                raise UsageError("thresholds must be strictly increasing")
