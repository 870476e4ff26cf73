"""z erasure thresholds: interval probabilities, goal function and the optimal set.

Thresholds 0 <= T_1 < ... < T_z <= 1 cut the real line into 2z+1 intervals:
the error zone (-inf, -T_z), the central erasure zone around 0, the correct
zone beyond T_z, and z-1 gap pairs (-T_{i+1}, -T_i) / (T_i, T_{i+1}).
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import GAP_EPS, RESIDUAL_TOL_ZT
from .errors import NoRootError
from .gauss import INF, Channel, Interval, interval_prob, neg_log_prob
from .roots import bisect_root
from .single_threshold import erasure_neg_log, error_neg_log, weighted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThresholdSet:
    """Strictly increasing thresholds inside [0, 1]."""
    thresholds: tuple[float, ...]

    def __post_init__(self):
        ts = tuple(float(t) for t in self.thresholds)
        object.__setattr__(self, "thresholds", ts)
        if not ts:
            raise ValueError("a threshold set needs at least one threshold")
        if ts[0] < 0.0 or ts[-1] > 1.0:
            raise ValueError(f"thresholds {ts} not inside [0, 1]")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError(f"thresholds {ts} not strictly increasing")

    @classmethod
    def of(cls, *thresholds: float) -> "ThresholdSet":
        return cls(tuple(thresholds))

    @property
    def z(self) -> int:
        return len(self.thresholds)

    def __len__(self) -> int:
        return len(self.thresholds)

    def __iter__(self):
        return iter(self.thresholds)

    def __getitem__(self, i: int) -> float:
        return self.thresholds[i]


@dataclass(frozen=True)
class IntervalProbs:
    """Masses of the 2z+1 intervals; p_lower[i]/p_upper[i] belong to gap i+1."""
    p_l: float
    p_c: float
    p_r: float
    p_lower: tuple[float, ...] = ()
    p_upper: tuple[float, ...] = ()

    def total(self) -> float:
        return self.p_l + self.p_c + self.p_r + sum(self.p_lower) + sum(self.p_upper)


@dataclass(frozen=True)
class IntervalNegLogs:
    """-ln of each IntervalProbs entry, same layout."""
    l_l: float
    l_c: float
    l_r: float
    l_lower: tuple[float, ...] = ()
    l_upper: tuple[float, ...] = ()

    def gap_sums(self) -> list[float]:
        """l_lower_i + l_upper_i for each gap."""
        return [a + b for a, b in zip(self.l_lower, self.l_upper)]


def _intervals(ts: ThresholdSet) -> tuple[Interval, Interval, Interval, list[Interval], list[Interval]]:
    t = ts.thresholds
    lower = [Interval(-t[i + 1], -t[i]) for i in range(ts.z - 1)]
    upper = [Interval(t[i], t[i + 1]) for i in range(ts.z - 1)]
    return Interval(-INF, -t[-1]), Interval(-t[0], t[0]), Interval(t[-1], INF), lower, upper


def interval_probs(ch: Channel, ts: ThresholdSet) -> IntervalProbs:
    left, center, right, lower, upper = _intervals(ts)
    return IntervalProbs(
        p_l=interval_prob(ch, left),
        p_c=interval_prob(ch, center),
        p_r=interval_prob(ch, right),
        p_lower=tuple(interval_prob(ch, iv) for iv in lower),
        p_upper=tuple(interval_prob(ch, iv) for iv in upper),
    )


def interval_neg_logs(ch: Channel, ts: ThresholdSet) -> IntervalNegLogs:
    left, center, right, lower, upper = _intervals(ts)
    return IntervalNegLogs(
        l_l=neg_log_prob(ch, left),
        l_c=neg_log_prob(ch, center),
        l_r=neg_log_prob(ch, right),
        l_lower=tuple(neg_log_prob(ch, iv) for iv in lower),
        l_upper=tuple(neg_log_prob(ch, iv) for iv in upper),
    )


def goal_zt(ch: Channel, ts: ThresholdSet, t_l: float, t_c: float, t_lower: Sequence[float]) -> float:
    """g = t_l*l_l + t_c*l_c + sum_i t_lower_i*(l_lower_i + l_upper_i)."""
    if len(t_lower) != ts.z - 1:
        raise ValueError(f"expected {ts.z - 1} gap counts, got {len(t_lower)}")
    if t_l < 0 or t_c < 0 or any(t < 0 for t in t_lower):
        raise ValueError("counts must be non-negative")
    logs = interval_neg_logs(ch, ts)
    value = weighted(t_l, logs.l_l) + weighted(t_c, logs.l_c)
    for count, gap in zip(t_lower, logs.gap_sums()):
        value += weighted(count, gap)
    return value


def extremal_goal_values(ch: Channel, ts: ThresholdSet, d: int) -> list[float]:
    """Goal values at the z+1 extremal points of 2t_l + t_c + 2*sum(t_lower) = d."""
    zeros = [0.0] * (ts.z - 1)
    values = [goal_zt(ch, ts, d / 2.0, 0.0, zeros), goal_zt(ch, ts, 0.0, float(d), zeros)]
    for i in range(ts.z - 1):
        counts = list(zeros)
        counts[i] = d / 2.0
        values.append(goal_zt(ch, ts, 0.0, 0.0, counts))
    return values


def residuals_zt(ch: Channel, ts: ThresholdSet) -> list[float]:
    """Log-domain residuals of the optimality system, z entries:
    1/2 l_l - l_c, then l_c - 1/2 (l_lower_1 + l_upper_1), then the
    differences of consecutive gap sums."""
    logs = interval_neg_logs(ch, ts)
    gaps = logs.gap_sums()
    res = [0.5 * logs.l_l - logs.l_c]
    if gaps:
        res.append(logs.l_c - 0.5 * gaps[0])
    res.extend(a - b for a, b in zip(gaps, gaps[1:]))
    return res


def _gap_sum(ch: Channel, a: float, b: float) -> float:
    return neg_log_prob(ch, Interval(-b, -a)) + neg_log_prob(ch, Interval(a, b))


def _chain(ch: Channel, t1: float, z: int) -> Optional[list[float]]:
    """T_2..T_z for a given T_1, each gap pair matched to p_c^2.

    Returns None when the chain would need a threshold above 1.
    """
    target = 2.0 * erasure_neg_log(ch, t1)
    ts = [t1]
    for i in range(z - 1):
        a = ts[-1]
        lo = a + GAP_EPS
        if lo > 1.0:
            return None

        def gap_residual(b: float, a: float = a) -> float:
            return _gap_sum(ch, a, b) - target

        if gap_residual(1.0) > 0:
            return None
        if gap_residual(lo) <= 0:
            # gap pairs already heavier than the center: the chain collapses
            ts.append(lo)
            continue
        ts.append(bisect_root(gap_residual, lo, 1.0, f"T_{i + 2} (sigma={ch.sigma:g})"))
    return ts


def solve_thresholds(ch: Channel, z: int) -> ThresholdSet:
    """Optimal high-SNR set of z thresholds.

    Outer bisection on T_1; for each T_1 the chain fixes T_2..T_z, and the
    outer residual 1/2 l_l(T_z) - l_c(T_1) decides the direction. A chain
    that runs past 1 counts as T_1 too large.
    """
    if z < 1:
        raise ValueError(f"z must be at least 1, got {z}")

    def outer(t1: float) -> float:
        if t1 <= 0.0:
            return -INF
        chain = _chain(ch, t1, z)
        if chain is None:
            return INF
        return 0.5 * error_neg_log(ch, chain[-1]) - erasure_neg_log(ch, t1)

    t1 = bisect_root(outer, 0.0, 1.0, f"T_1 for z={z} (sigma={ch.sigma:g})")
    chain = _chain(ch, t1, z)
    if chain is None:
        raise NoRootError(f"sigma={ch.sigma:g}, z={z}: thresholds cannot be completed inside [0, 1]")
    ts = ThresholdSet(tuple(chain))
    worst = max(abs(r) for r in residuals_zt(ch, ts))
    if worst > RESIDUAL_TOL_ZT:
        raise NoRootError(
            f"sigma={ch.sigma:g}, z={z}: best thresholds {ts.thresholds} leave residual {worst:.3g}"
        )
    logger.debug("sigma=%g z=%d: %s (max residual %.3g)", ch.sigma, z, ts.thresholds, worst)
    return ts
