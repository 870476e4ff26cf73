"""Bracketed root finding for the threshold equations."""

import logging
import math
from typing import Callable

from scipy import optimize

from .config import THRESHOLD_XTOL
from .errors import NoRootError

logger = logging.getLogger(__name__)


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    what: str,
    xtol: float = THRESHOLD_XTOL,
) -> float:
    """Root of a monotone residual on [lo, hi].

    Infinite endpoint values are fine (they only contribute their sign);
    a missing sign change raises NoRootError naming `what`.
    """
    f_lo, f_hi = f(lo), f(hi)
    if math.isnan(f_lo) or math.isnan(f_hi):
        raise NoRootError(f"{what}: residual undefined at the bracket ends")
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoRootError(
            f"{what}: no sign change on [{lo:.6g}, {hi:.6g}] "
            f"(residuals {f_lo:.4g}, {f_hi:.4g})"
        )
    root = optimize.bisect(f, lo, hi, xtol=xtol, maxiter=200)
    logger.debug("%s: root %.15g on [%.6g, %.6g]", what, root, lo, hi)
    return float(root)
