"""Single erasure threshold: goal function, high-SNR optimum, closed form and gain.

One error/erasure BMD trial erases every received symbol in [-T, T].
With p_x = p_sigma(-T, T) and p_e = p_sigma(-inf, -T), the high-SNR optimum
balances sqrt(p_e) = p_x. Everything is solved as 1/2 l_e = l_c in the
negative-log domain; at 20 dB both linear probabilities underflow.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .config import RESIDUAL_TOL_1T
from .errors import OutOfRegimeError
from .gauss import INF, Channel, Interval, interval_prob, neg_log_prob
from .roots import bisect_root

logger = logging.getLogger(__name__)

# sigma -> 0 limit of the optimal threshold
LIMIT_THRESHOLD = 3.0 - 2.0 * math.sqrt(2.0)
# sigma_1 / sigma_2 at equal error exponents, 2*sqrt(2)*(sqrt(2) - 1)
GAIN_FACTOR = 2.0 * math.sqrt(2.0) * (math.sqrt(2.0) - 1.0)


@dataclass(frozen=True)
class CodeShape:
    """Outer binary (n, k, d) code; k is carried as metadata only."""
    n: int
    d: int
    k: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got n={self.n}, d={self.d}")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}")


@dataclass(frozen=True)
class GoalPoint:
    """One point of the goal function: erasure count tau and its value."""
    tau: float
    value: float


def check_threshold(T: float):
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"threshold {T} outside [0, 1]")


def weighted(count: float, l: float) -> float:
    """count * l with the convention 0 * inf = 0."""
    return 0.0 if count == 0 else count * l


def erasure_neg_log(ch: Channel, T: float) -> float:
    """l_c = -ln p_sigma(-T, T)."""
    return neg_log_prob(ch, Interval(-T, T))


def error_neg_log(ch: Channel, T: float) -> float:
    """l_e = -ln p_sigma(-inf, -T)."""
    return neg_log_prob(ch, Interval(-INF, -T))


def goal_1t(ch: Channel, d: int, tau: float, T: float) -> float:
    """g_sigma(tau, T) = tau*l_c + (d - tau)/2 * l_e, affine in tau."""
    check_threshold(T)
    if not 0 <= tau <= d:
        raise ValueError(f"tau {tau} outside [0, {d}]")
    return weighted(tau, erasure_neg_log(ch, T)) + weighted((d - tau) / 2.0, error_neg_log(ch, T))


def goal_points(ch: Channel, d: int, T: float, taus: Optional[Iterable[float]] = None) -> list[GoalPoint]:
    """The goal function sampled at `taus` (default 0..d)."""
    if taus is None:
        taus = range(d + 1)
    return [GoalPoint(float(tau), goal_1t(ch, d, tau, T)) for tau in taus]


def residual_1t(ch: Channel, T: float) -> float:
    """1/2 l_e - l_c; zero exactly at the high-SNR optimal threshold."""
    return 0.5 * error_neg_log(ch, T) - erasure_neg_log(ch, T)


def solve_threshold_high_snr(ch: Channel) -> float:
    """Threshold with sqrt(p_e) = p_x, by bisection on [0, 1].

    The balance does not involve d: both sides of p_e^(d/2) = p_x^d carry
    the same power.
    """
    T = bisect_root(lambda t: residual_1t(ch, t), 0.0, 1.0, f"threshold (sigma={ch.sigma:g})")
    r = residual_1t(ch, T)
    # scaled by l_c: at tiny sigma both sides are of order 1/sigma^2
    if abs(r) > RESIDUAL_TOL_1T * max(1.0, erasure_neg_log(ch, T)):
        logger.warning("sigma=%g: threshold %.15g leaves residual %.3g", ch.sigma, T, r)
    logger.debug("sigma=%g: T=%.15g residual=%.3g", ch.sigma, T, r)
    return T


def analytic_threshold(ch: Channel) -> float:
    """Closed-form high-SNR threshold
    T = 3 + 3s^2 - sqrt(9s^4 + (18 - ln(2pi/s^2)) s^2 + 8).

    Built on the Erfc tail approximation, so only meaningful at high SNR;
    raises OutOfRegimeError instead of clamping.
    """
    s2 = ch.sigma * ch.sigma
    # ln(2pi/s^2) from ln(sigma): s2 may underflow to 0
    log_term = math.log(2.0 * math.pi) - 2.0 * math.log(ch.sigma)
    disc = 9.0 * s2 * s2 + (18.0 - log_term) * s2 + 8.0
    if disc < 0:
        raise OutOfRegimeError(f"sigma={ch.sigma:g}: negative discriminant {disc:.4g}")
    T = 3.0 + 3.0 * s2 - math.sqrt(disc)
    if not 0.0 <= T <= 1.0:
        raise OutOfRegimeError(f"sigma={ch.sigma:g}: closed form gives T={T:.6g} outside [0, 1]")
    return T


def asymptotic_gain_db() -> float:
    """High-SNR gain of one optimal erasure threshold over errors-only decoding."""
    return 20.0 * math.log10(GAIN_FACTOR)


def erasure_gain_identity(sigma2: float) -> tuple[float, float]:
    """Both sides of p_{s1}(-inf, -(3-2sqrt2)) = p_{s2}(-inf, 0), s1 = (4-2sqrt2)*s2."""
    sigma1 = GAIN_FACTOR * sigma2
    lhs = interval_prob(Channel(sigma1), Interval(-INF, -LIMIT_THRESHOLD))
    rhs = interval_prob(Channel(sigma2), Interval(-INF, 0.0))
    return lhs, rhs


def errors_only_exponent(code: CodeShape, ch: Channel) -> float:
    """(d/2) * l_sigma(-inf, 0): P_BMD ~ p_sigma(-inf, 0)^(d/2) in -ln form."""
    return 0.5 * code.d * error_neg_log(ch, 0.0)
