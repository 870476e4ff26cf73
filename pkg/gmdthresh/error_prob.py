"""Exact and approximate decoding error probabilities, and the all-SNR optimum.

Exact sums run over multinomial tallies in the log domain (coefficients via
gammaln, accumulation via logsumexp): for n=127 the probabilities drop far
below the double range long before 20 dB, so every evaluator has a -ln
twin and the probability form is just its exponential.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize, special, stats

from .config import ENUMERATION_LIMIT, GOLDEN_XTOL, GRID_STEP
from .errors import TooLargeError
from .gauss import INF, Channel, Interval, log_interval_prob
from .multi_threshold import ThresholdSet, interval_neg_logs
from .single_threshold import CodeShape, check_threshold, erasure_neg_log, error_neg_log, weighted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntervalTally:
    """Symbol counts per interval of one received vector.

    For z = 1 this is (errors, erasures, correct) = (t_l, t_c, t_r).
    """
    t_l: int
    t_c: int
    t_r: int
    t_lower: tuple[int, ...] = ()
    t_upper: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "t_lower", tuple(int(t) for t in self.t_lower))
        object.__setattr__(self, "t_upper", tuple(int(t) for t in self.t_upper))
        if len(self.t_lower) != len(self.t_upper):
            raise ValueError("t_lower and t_upper must have the same length")
        if min((self.t_l, self.t_c, self.t_r) + self.t_lower + self.t_upper) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def z(self) -> int:
        return len(self.t_lower) + 1

    @property
    def n(self) -> int:
        return self.t_l + self.t_c + self.t_r + sum(self.t_lower) + sum(self.t_upper)

    def per_threshold_counts(self) -> list[tuple[int, int]]:
        """(errors, erasures) seen by the decoding trial of each threshold T_1..T_z."""
        counts = []
        for i in range(self.z):
            eps = self.t_l + sum(self.t_lower[i:])
            tau = self.t_c + sum(self.t_lower[:i]) + sum(self.t_upper[:i])
            counts.append((eps, tau))
        return counts


@dataclass(frozen=True)
class ThresholdOptimum:
    """Minimizer of the exact single-threshold error probability."""
    threshold: float
    probability: float
    neg_log_probability: float


def _xlog(count: np.ndarray, log_p: float) -> np.ndarray:
    """count * log_p elementwise with 0 * (-inf) = 0."""
    if log_p == -INF:
        return np.where(count == 0, 0.0, -INF)
    return count * log_p


def _log_sum(log_terms: np.ndarray) -> float:
    if log_terms.size == 0:
        return -INF
    with np.errstate(divide="ignore"):
        return float(special.logsumexp(log_terms))


def _neg(log_p: float) -> float:
    return -log_p if log_p != 0.0 else 0.0


# --- one threshold ---------------------------------------------------------

@lru_cache(maxsize=32)
def _tally_grid_1t(n: int, d: int):
    """(tau, eps, rest, log multinomial) over the error region 2*eps + tau >= d."""
    tau, eps = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    rest = n - tau - eps
    t_tau = (d - tau + 1) // 2  # ceil((d - tau) / 2), kept in the exact sum
    mask = (rest >= 0) & (eps >= t_tau)
    tau, eps, rest = tau[mask], eps[mask], rest[mask]
    log_coef = special.gammaln(n + 1) - special.gammaln(tau + 1) - special.gammaln(eps + 1) - special.gammaln(rest + 1)
    for a in (tau, eps, rest, log_coef):
        a.setflags(write=False)
    return tau, eps, rest, log_coef


def exact_neg_log_error_1t(code: CodeShape, ch: Channel, T: float) -> float:
    """-ln P for one threshold: sum over tau erasures and eps >= ceil((d-tau)/2) errors."""
    check_threshold(T)
    log_px = log_interval_prob(ch, Interval(-T, T))
    log_pe = log_interval_prob(ch, Interval(-INF, -T))
    log_po = log_interval_prob(ch, Interval(T, INF))
    tau, eps, rest, log_coef = _tally_grid_1t(code.n, code.d)
    log_terms = log_coef + _xlog(tau, log_px) + _xlog(eps, log_pe) + _xlog(rest, log_po)
    return _neg(_log_sum(log_terms))


def exact_error_prob_1t(code: CodeShape, ch: Channel, T: float) -> float:
    return math.exp(-exact_neg_log_error_1t(code, ch, T))


def approx_neg_log_error_1t(code: CodeShape, ch: Channel, T: float) -> float:
    """min{(d/2) l_e, d l_c}: the goal function at its two extremal points."""
    check_threshold(T)
    return min(0.5 * code.d * error_neg_log(ch, T), code.d * erasure_neg_log(ch, T))


def integer_neg_log_error_1t(code: CodeShape, ch: Channel, T: float) -> float:
    """min over tau = 0..d of tau*l_x + ceil((d - tau)/2)*l_e (ceiling kept)."""
    check_threshold(T)
    l_x, l_e = erasure_neg_log(ch, T), error_neg_log(ch, T)
    return min(weighted(tau, l_x) + weighted((code.d - tau + 1) // 2, l_e) for tau in range(code.d + 1))


def errors_only_error_prob(code: CodeShape, ch: Channel) -> float:
    """Binomial errors-only BMD failure probability, P(2*eps >= d)."""
    p = math.exp(log_interval_prob(ch, Interval(-INF, 0.0)))
    return float(stats.binom.sf((code.d + 1) // 2 - 1, code.n, p))


def optimize_threshold_general(
    code: CodeShape,
    ch: Channel,
    seeds: Iterable[float] = (),
) -> ThresholdOptimum:
    """Minimize the exact probability over T in [0, 1].

    A GRID_STEP grid (plus any `seeds`) picks the basin, a bounded
    golden-section/Brent search refines it to GOLDEN_XTOL. Ties keep the
    smallest T.
    """
    steps = int(round(1.0 / GRID_STEP))
    grid = np.linspace(0.0, 1.0, steps + 1)
    candidates = sorted(set(float(t) for t in grid) | {float(t) for t in seeds})
    values = [exact_neg_log_error_1t(code, ch, t) for t in candidates]
    best = int(np.argmax(values))  # largest -ln P, first (smallest T) on ties
    best_t, best_value = candidates[best], values[best]

    i = int(np.searchsorted(grid, best_t))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, steps)]
    res = optimize.minimize_scalar(
        lambda t: -exact_neg_log_error_1t(code, ch, float(np.clip(t, 0.0, 1.0))),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": GOLDEN_XTOL},
    )
    if res.success and -res.fun > best_value:
        best_t, best_value = float(res.x), float(-res.fun)
    logger.debug("n=%d d=%d sigma=%g: general T=%.8g -lnP=%.8g", code.n, code.d, ch.sigma, best_t, best_value)
    return ThresholdOptimum(best_t, math.exp(-best_value), best_value)


# --- z thresholds ----------------------------------------------------------

def composition_count(n: int, z: int) -> int:
    """Number of tallies: weak compositions of n into 2z+1 parts."""
    return math.comb(n + 2 * z, 2 * z)


def _weak_compositions(total_max: int, parts: int) -> np.ndarray:
    """All non-negative integer rows of length `parts` with sum <= total_max."""
    rows = np.zeros((1, 0), dtype=np.int64)
    for _ in range(parts):
        reps = total_max - rows.sum(axis=1) + 1
        starts = np.cumsum(reps) - reps
        rows = np.repeat(rows, reps, axis=0)
        column = np.arange(rows.shape[0]) - np.repeat(starts, reps)
        rows = np.column_stack([rows, column])
    return rows


def condition_c(counts: np.ndarray, z: int, d: int) -> np.ndarray:
    """Rows that defeat every decoding trial.

    `counts` columns: t_l, t_c, t_lower_1..t_lower_{z-1}, t_upper_1..t_upper_{z-1}.
    """
    m = counts.shape[0]
    t_l, t_c = counts[:, 0], counts[:, 1]
    lower, upper = counts[:, 2:z + 1], counts[:, z + 1:]
    zero = np.zeros((m, 1), dtype=counts.dtype)
    # errors of trial i: t_l + sum_{nu >= i} t_lower_nu
    suffix = np.cumsum(lower[:, ::-1], axis=1)[:, ::-1]
    eps = t_l[:, None] + np.hstack([suffix, zero])
    # erasures of trial i: t_c + sum_{nu < i} (t_lower_nu + t_upper_nu)
    prefix = np.cumsum(lower + upper, axis=1)
    tau = t_c[:, None] + np.hstack([zero, prefix])
    return np.all(2 * eps + tau >= d, axis=1)


def _chunk_log_sum(n: int, d: int, z: int, t_l: int, log_p: np.ndarray, log_pr: float) -> float:
    """Log of the error-region mass over tallies with this t_l."""
    rest = _weak_compositions(n - t_l, 2 * z - 1)
    counts = np.column_stack([np.full(rest.shape[0], t_l, dtype=np.int64), rest])
    counts = counts[condition_c(counts, z, d)]
    if counts.shape[0] == 0:
        return -INF
    t_r = n - counts.sum(axis=1)
    log_terms = special.gammaln(n + 1) - special.gammaln(counts + 1).sum(axis=1) - special.gammaln(t_r + 1)
    for j in range(counts.shape[1]):
        log_terms = log_terms + _xlog(counts[:, j], log_p[j])
    log_terms = log_terms + _xlog(t_r, log_pr)
    return _log_sum(log_terms)


def exact_neg_log_error_zt(
    code: CodeShape,
    ch: Channel,
    ts: ThresholdSet,
    workers: int = 1,
    limit: int = ENUMERATION_LIMIT,
) -> float:
    """-ln P for z thresholds: all tallies where every trial has 2*eps + tau >= d.

    The enumeration is split by t_l; chunk results are combined in t_l
    order, so the value does not depend on `workers`.
    """
    n, d, z = code.n, code.d, ts.z
    terms = composition_count(n, z)
    if terms > limit:
        raise TooLargeError(terms, limit)
    logs = interval_neg_logs(ch, ts)
    log_p = -np.array((logs.l_l, logs.l_c) + logs.l_lower + logs.l_upper, dtype=float)
    log_pr = -logs.l_r

    def chunk(t_l: int) -> float:
        return _chunk_log_sum(n, d, z, t_l, log_p, log_pr)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, range(n + 1)))
    else:
        parts = [chunk(t_l) for t_l in range(n + 1)]
    return _neg(_log_sum(np.array(parts)))


def exact_error_prob_zt(code: CodeShape, ch: Channel, ts: ThresholdSet, workers: int = 1) -> float:
    return math.exp(-exact_neg_log_error_zt(code, ch, ts, workers=workers))


def max_form_terms(code: CodeShape, ch: Channel, ts: ThresholdSet) -> list[float]:
    """-ln of each max-form term: (d/2) l_l, d l_c, (d/2)(l_lower_i + l_upper_i)."""
    logs = interval_neg_logs(ch, ts)
    half = 0.5 * code.d
    return [half * logs.l_l, code.d * logs.l_c] + [half * g for g in logs.gap_sums()]


def approx_neg_log_error_zt(code: CodeShape, ch: Channel, ts: ThresholdSet) -> float:
    return min(max_form_terms(code, ch, ts))


def approx_error_prob_zt(code: CodeShape, ch: Channel, ts: ThresholdSet) -> float:
    """max{p_l^(d/2), p_c^d, (p_lower_i * p_upper_i)^(d/2)} evaluated in the log domain."""
    return math.exp(-approx_neg_log_error_zt(code, ch, ts))


def tally_probability(code: CodeShape, ch: Channel, ts: ThresholdSet, tally: IntervalTally) -> float:
    """Multinomial probability of one exact tally."""
    if tally.n != code.n or tally.z != ts.z:
        raise ValueError("tally does not match the code length or threshold count")
    logs = interval_neg_logs(ch, ts)
    counts: Sequence[int] = (tally.t_l, tally.t_c, tally.t_r) + tally.t_lower + tally.t_upper
    neg_logs = (logs.l_l, logs.l_c, logs.l_r) + logs.l_lower + logs.l_upper
    log_value = special.gammaln(code.n + 1) - sum(special.gammaln(c + 1) for c in counts)
    log_value -= sum(weighted(c, l) for c, l in zip(counts, neg_logs))
    return math.exp(log_value)
