"""Command-line interface: thresholds, goal, prob, sweep, simulate, gain.

Results go to stdout (or --output) as CSV or `key: value` reports;
diagnostics, logging and progress bars go to stderr.
"""

import argparse
import contextlib
import io
import logging
import math
import sys
from dataclasses import fields
from typing import Iterator, Optional, TextIO

from tqdm import tqdm

from . import __app_name__, __version__
from .config import (
    DEFAULT_DIGITS,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ENUMERATION_LIMIT,
    SWEEP_D,
    SWEEP_N,
    SWEEP_SNR_MAX,
    SWEEP_SNR_MIN,
    SWEEP_STEP,
    RunConfig,
)
from .error_prob import (
    approx_neg_log_error_1t,
    approx_neg_log_error_zt,
    composition_count,
    errors_only_error_prob,
    exact_neg_log_error_1t,
    exact_neg_log_error_zt,
    integer_neg_log_error_1t,
    max_form_terms,
    optimize_threshold_general,
)
from .errors import GmdError, NoRootError, OutOfRegimeError, TooLargeError, UsageError
from .gauss import Channel
from .multi_threshold import ThresholdSet, residuals_zt, solve_thresholds
from .output import fmt, write_csv, write_report
from .simulation import monte_carlo
from .single_threshold import (
    GAIN_FACTOR,
    LIMIT_THRESHOLD,
    CodeShape,
    analytic_threshold,
    asymptotic_gain_db,
    erasure_gain_identity,
    errors_only_exponent,
    goal_1t,
    residual_1t,
    solve_threshold_high_snr,
)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sigma", type=float, help="noise standard deviation")
    common.add_argument("--snr", dest="snr_db", type=float, help="SNR in dB, -10 log10(2 sigma^2)")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits in the output")
    common.add_argument("-o", "--output", help="write results to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    def thresholds_arg(p: argparse.ArgumentParser, help_text: str):
        p.add_argument("-T", "--thresholds", type=float, nargs="+", action="extend", help=help_text)

    parser = argparse.ArgumentParser(
        prog=__app_name__,
        description="Erasure thresholds and error probabilities for GMD decoding over AWGN/BPSK.",
    )
    parser.add_argument("--version", action="version", version=f"{__app_name__} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("thresholds", parents=[common], help="solve the high-SNR optimal thresholds")
    p.add_argument("--z", type=int, default=1, help="number of thresholds")
    p.add_argument("--analytic", action="store_true", help="closed-form threshold (z = 1 only)")

    p = sub.add_parser("goal", parents=[common], help="goal function over tau = 0..d, one column per T")
    p.add_argument("--d", type=int, help="minimum distance")
    thresholds_arg(p, "thresholds, one CSV column each")
    p.add_argument("--balanced", action="store_true", help="append a column for the solved threshold")

    p = sub.add_parser("prob", parents=[common], help="exact and approximate error probabilities")
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--d", type=int, help="minimum distance")
    p.add_argument("--k", type=int, help="dimension (reported only)")
    thresholds_arg(p, "threshold set; solved for --z when omitted")
    p.add_argument("--z", type=int, default=1, help="number of thresholds to solve for")

    p = sub.add_parser("sweep", parents=[common], help="numeric, analytic and general thresholds over SNR")
    p.add_argument("--n", type=int, default=SWEEP_N, help="code length")
    p.add_argument("--d", type=int, default=SWEEP_D, help="minimum distance")
    p.add_argument("--snr-min", type=float, default=SWEEP_SNR_MIN)
    p.add_argument("--snr-max", type=float, default=SWEEP_SNR_MAX)
    p.add_argument("--step", type=float, default=SWEEP_STEP)
    p.add_argument("--progress", action="store_true", help="progress bar on stderr")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of the GMD error probability")
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--d", type=int, help="minimum distance")
    thresholds_arg(p, "threshold set; solved for --z when omitted")
    p.add_argument("--z", type=int, default=1, help="number of thresholds to solve for")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1, help="simulation threads")
    p.add_argument("--progress", action="store_true", help="progress bar on stderr")

    p = sub.add_parser("gain", parents=[common], help="asymptotic single-threshold gain")
    p.add_argument("--sigma2", type=float, help="also check the Erfc identity at this sigma_2")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    return RunConfig.from_dict({k: v for k, v in vars(args).items() if k in known})


def _channel(cfg: RunConfig) -> Channel:
    if cfg.sigma is not None:
        return Channel(cfg.sigma)
    return Channel.from_snr_db(cfg.snr_db)


def _threshold_set(cfg: RunConfig, ch: Channel) -> ThresholdSet:
    if cfg.thresholds:
        return ThresholdSet(tuple(cfg.thresholds))
    if cfg.z == 1:
        return ThresholdSet.of(solve_threshold_high_snr(ch))
    return solve_thresholds(ch, cfg.z)


def cmd_thresholds(cfg: RunConfig, out: TextIO):
    ch = _channel(cfg)
    if cfg.z == 1:
        T = analytic_threshold(ch) if cfg.analytic else solve_threshold_high_snr(ch)
        ts, residuals = ThresholdSet.of(T), [residual_1t(ch, T)]
    else:
        ts = solve_thresholds(ch, cfg.z)
        residuals = residuals_zt(ch, ts)
    header = ["z"] + [f"T_{i + 1}" for i in range(ts.z)] + [f"residual_{i + 1}" for i in range(ts.z)]
    write_csv(out, header, [[ts.z, *ts.thresholds, *residuals]], cfg.digits)


def cmd_goal(cfg: RunConfig, out: TextIO):
    ch = _channel(cfg)
    columns = list(cfg.thresholds)
    if cfg.balanced:
        columns.append(solve_threshold_high_snr(ch))
    header = ["tau"] + [fmt(T, cfg.digits) for T in columns]
    rows = [[tau] + [goal_1t(ch, cfg.d, tau, T) for T in columns] for tau in range(cfg.d + 1)]
    write_csv(out, header, rows, cfg.digits)


def cmd_prob(cfg: RunConfig, out: TextIO):
    ch = _channel(cfg)
    code = CodeShape(cfg.n, cfg.d, cfg.k)
    z = len(cfg.thresholds) if cfg.thresholds else cfg.z
    if z > 1 and composition_count(code.n, z) > ENUMERATION_LIMIT:
        raise TooLargeError(composition_count(code.n, z), ENUMERATION_LIMIT)
    ts = _threshold_set(cfg, ch)
    if ts.z == 1:
        exact = exact_neg_log_error_1t(code, ch, ts[0])
        approx = approx_neg_log_error_1t(code, ch, ts[0])
    else:
        exact = exact_neg_log_error_zt(code, ch, ts)
        approx = approx_neg_log_error_zt(code, ch, ts)
    items = [
        ("sigma", ch.sigma),
        ("snr_db", ch.snr_db),
        ("n", code.n),
        ("d", code.d),
    ]
    if code.k is not None:
        items.append(("k", code.k))
    items += [
        ("thresholds", list(ts.thresholds)),
        ("exact_P", math.exp(-exact)),
        ("exact_neg_log_P", exact),
        ("approx_P", math.exp(-approx)),
        ("approx_neg_log_P", approx),
        ("max_form_terms", max_form_terms(code, ch, ts)),
    ]
    if ts.z == 1:
        items += [
            ("integer_neg_log_P", integer_neg_log_error_1t(code, ch, ts[0])),
            ("errors_only_P", errors_only_error_prob(code, ch)),
            ("errors_only_neg_log_approx", errors_only_exponent(code, ch)),
        ]
    write_report(out, items, cfg.digits)


def sweep_points(cfg: RunConfig) -> list[float]:
    """SNR grid snr_min, snr_min + step, ... up to snr_max inclusive."""
    count = math.floor((cfg.snr_max - cfg.snr_min) / cfg.step + 1e-9) + 1
    return [cfg.snr_min + i * cfg.step for i in range(count)]


def cmd_sweep(cfg: RunConfig, out: TextIO):
    code = CodeShape(cfg.n, cfg.d)
    rows = []
    for snr in tqdm(sweep_points(cfg), desc="sweep", unit="snr", file=sys.stderr, disable=not cfg.progress):
        ch = Channel.from_snr_db(snr)
        try:
            numeric: Optional[float] = solve_threshold_high_snr(ch)
        except NoRootError as e:
            logger.info("%s", e)
            numeric = None
        try:
            analytic: Optional[float] = analytic_threshold(ch)
        except OutOfRegimeError as e:
            logger.info("%s", e)
            analytic = None
        seeds = [t for t in (numeric, analytic) if t is not None]
        general = optimize_threshold_general(code, ch, seeds=seeds).threshold
        rows.append([snr, ch.sigma, numeric, analytic, general])
    write_csv(out, ["snr_db", "sigma", "T_numeric", "T_analytic", "T_general"], rows, cfg.digits)


def cmd_simulate(cfg: RunConfig, out: TextIO):
    ch = _channel(cfg)
    code = CodeShape(cfg.n, cfg.d)
    ts = _threshold_set(cfg, ch)
    est = monte_carlo(code, ch, ts, cfg.trials, cfg.seed, workers=cfg.workers, progress=cfg.progress)
    lo, hi = est.confidence_interval()
    write_report(out, [
        ("sigma", ch.sigma),
        ("snr_db", ch.snr_db),
        ("n", code.n),
        ("d", code.d),
        ("thresholds", list(ts.thresholds)),
        ("trials", est.trials),
        ("seed", cfg.seed),
        ("error_events", est.error_events),
        ("p_hat", est.p_hat),
        ("std_err", est.std_err),
        ("ci_low", lo),
        ("ci_high", hi),
    ], cfg.digits)


def cmd_gain(cfg: RunConfig, out: TextIO):
    items = [
        ("gain_db", asymptotic_gain_db()),
        ("sigma_ratio", GAIN_FACTOR),
        ("limit_threshold", LIMIT_THRESHOLD),
    ]
    if cfg.sigma2 is not None:
        lhs, rhs = erasure_gain_identity(cfg.sigma2)
        items += [
            ("sigma1", GAIN_FACTOR * cfg.sigma2),
            ("sigma2", cfg.sigma2),
            ("identity_lhs", lhs),
            ("identity_rhs", rhs),
            ("identity_abs_diff", abs(lhs - rhs)),
        ]
    write_report(out, items, cfg.digits)


HANDLERS = {
    "thresholds": cmd_thresholds,
    "goal": cmd_goal,
    "prob": cmd_prob,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "gain": cmd_gain,
}


@contextlib.contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as f:
        yield f


def run(cfg: RunConfig) -> int:
    cfg.validate()
    logger.debug("run config: %s", cfg.to_dict())
    # rendered in full first: a failing command leaves no partial --output file
    buffer = io.StringIO()
    HANDLERS[cfg.command](cfg, buffer)
    with _open_output(cfg.output) as out:
        out.write(buffer.getvalue())
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help / --version exit 0, bad flags exit 2
        return e.code if isinstance(e.code, int) else UsageError.exit_code

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return run(config_from_args(args))
    except GmdError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return UsageError.exit_code
    except OSError as e:
        print(f"error: cannot write {e.filename or args.output}: {e.strerror or e}", file=sys.stderr)
        return 1
