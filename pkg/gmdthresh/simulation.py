"""Monte Carlo link simulation: BPSK over AWGN, quantize-and-erase, z BMD trials.

The decoder is idealized by its capability region: trial i succeeds iff
2*eps + tau < d for the errors/erasures it sees. The all-zero codeword is
sent (x_j = +1), so y_j = 1 + sigma * xi_j.

Randomness is counter based: the trial stream is cut into fixed blocks of
SIM_BLOCK_TRIALS and block b draws from Philox keyed by (seed, b). The noise
of trial t is therefore a pure function of (seed, t), independent of the
number of trials requested and of the worker count.
"""

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from tqdm import tqdm

from .config import SIM_BLOCK_TRIALS
from .error_prob import IntervalTally
from .gauss import Channel
from .multi_threshold import ThresholdSet
from .single_threshold import CodeShape, check_threshold

logger = logging.getLogger(__name__)


class QuantizedSymbol(IntEnum):
    """Output of the quantization-and-erasing map."""
    ZERO = 0
    ONE = 1
    ERASURE = 2


@dataclass(frozen=True)
class SimEstimate:
    """Error-event count over a number of simulated transmissions."""
    trials: int
    error_events: int

    @property
    def p_hat(self) -> float:
        return self.error_events / self.trials

    @property
    def std_err(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1.0 - p) / self.trials)

    def confidence_interval(self, k: float = 3.0) -> tuple[float, float]:
        return max(self.p_hat - k * self.std_err, 0.0), min(self.p_hat + k * self.std_err, 1.0)


def quantize(y: float, T: float) -> QuantizedSymbol:
    """1 below -T, 0 above T, erasure on the closed zone [-T, T]."""
    check_threshold(T)
    if y < -T:
        return QuantizedSymbol.ONE
    if y > T:
        return QuantizedSymbol.ZERO
    return QuantizedSymbol.ERASURE


def tally(y, ts: ThresholdSet) -> IntervalTally:
    """Count the symbols of y per interval.

    Boundaries follow the quantizer: |y_j| = T_i is an erasure for T_i, so
    gap i is T_i < |y| <= T_{i+1} and the center is |y| <= T_1.
    """
    y = np.asarray(y, dtype=float)
    # number of thresholds strictly below |y_j|
    level = np.searchsorted(np.asarray(ts.thresholds), np.abs(y), side="left")
    neg = y < 0
    z = ts.z
    outer = level == z
    return IntervalTally(
        t_l=int(np.count_nonzero(outer & neg)),
        t_c=int(np.count_nonzero(level == 0)),
        t_r=int(np.count_nonzero(outer & ~neg)),
        t_lower=tuple(int(np.count_nonzero((level == g) & neg)) for g in range(1, z)),
        t_upper=tuple(int(np.count_nonzero((level == g) & ~neg)) for g in range(1, z)),
    )


def bmd_success(eps: int, tau: int, d: int) -> bool:
    """Error/erasure BMD capability: 2*eps + tau < d."""
    return 2 * eps + tau < d


def gmd_error_event(tl: IntervalTally, d: int) -> bool:
    """True when every one of the z trials fails."""
    return not any(bmd_success(eps, tau, d) for eps, tau in tl.per_threshold_counts())


def error_events_from_noise(y: np.ndarray, ts: ThresholdSet, d: int) -> np.ndarray:
    """Batched gmd_error_event over the rows of y (shape trials x n)."""
    a = np.abs(y)
    failed = np.ones(y.shape[0], dtype=bool)
    for T in ts:
        eps = np.count_nonzero(y < -T, axis=1)
        tau = np.count_nonzero(a <= T, axis=1)
        failed &= 2 * eps + tau >= d
    return failed


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Philox stream for one block of trials."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(code: CodeShape, ch: Channel, ts: ThresholdSet, seed: int, block: int, size: int) -> int:
    noise = block_generator(seed, block).standard_normal((size, code.n))
    y = 1.0 + ch.sigma * noise
    return int(np.count_nonzero(error_events_from_noise(y, ts, code.d)))


def monte_carlo(
    code: CodeShape,
    ch: Channel,
    ts: ThresholdSet,
    trials: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
) -> SimEstimate:
    """Estimate the GMD decoding error probability from `trials` transmissions."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    blocks = [
        (b, min(SIM_BLOCK_TRIALS, trials - b * SIM_BLOCK_TRIALS))
        for b in range(math.ceil(trials / SIM_BLOCK_TRIALS))
    ]

    def run(job: tuple[int, int]) -> int:
        block, size = job
        return _simulate_block(code, ch, ts, seed, block, size)

    bar = tqdm(total=len(blocks), desc="simulate", unit="block", file=sys.stderr, disable=not progress)
    events = 0
    with bar:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for count in pool.map(run, blocks):
                    events += count
                    bar.update(1)
        else:
            for job in blocks:
                events += run(job)
                bar.update(1)
    logger.debug("n=%d d=%d sigma=%g ts=%s: %d/%d events", code.n, code.d, ch.sigma, ts.thresholds, events, trials)
    return SimEstimate(trials=trials, error_events=events)
