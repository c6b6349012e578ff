#!/usr/bin/env python3
"""
Command-line front end.

    python renorm.py fixed-point --alpha 2.0 --word doubling --degree 40 --tol 1e-12 --out fp.json
    python renorm.py cascade --alpha 2.0 --levels 10 --format csv --out cascade.csv

Reports go to --out (written atomically) or stdout; progress goes to stderr at
the level named by RENORM_LOG (quiet, info or debug).
"""

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from functools import singledispatch

import numpy as np
import pandas as pd

from combinatorics import CombSequence
from errors import ArgumentError, Errors, RenormException
from family_cascade import CascadeTable, Family, accumulation_parameter, cascade_table
from renorm_operator import RenormTower, renorm_tower
from skew_product import CoordChange, SkewConvergence, skew_convergence
from spectral import (CoeffVector, FixedPointResult, SpectralReport, StableRate,
                      analyse_fixed_point, continue_in_alpha, fixed_point, newton_fixed_point,
                      periodic_orbit, stable_convergence_rate)

logger = logging.getLogger("renorm")

COMMANDS = ("fixed-point", "spectrum", "cascade", "horseshoe", "stable", "skew", "tower")
FORMATS = ("json", "csv")
LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
COMMAND_LEVELS = {"stable": 8}


def configure_logging(environ=None):
    """Attach a stderr handler at the level named by RENORM_LOG."""
    environ = os.environ if environ is None else environ
    name = environ.get("RENORM_LOG", "info").lower()
    level = LOG_LEVELS.get(name, logging.INFO)
    logging.basicConfig(stream=sys.stderr, level=level, force=True,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if name not in LOG_LEVELS:
        logger.warning("unknown RENORM_LOG value %r, using info", name)


@dataclass(frozen=True)
class RunConfig:
    """Validated flags of one run."""
    command: str
    alpha: float = 2.0
    degree: int = 40
    tol: float = 1e-11
    levels: int = 10
    out: str = None
    format: str = "json"
    word: CombSequence = CombSequence.parse("doubling")
    seed_file: str = None
    jobs: int = 1
    radius: float = 0.1
    eps: float = 0.05
    m_max: int = 3

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise Errors.argument(f"unknown command {self.command!r}", command=self.command)
        if not self.alpha > 1.0:
            raise Errors.argument(f"--alpha must satisfy alpha > 1, got {self.alpha}",
                                  alpha=self.alpha)
        if not self.tol > 0.0:
            raise Errors.argument(f"--tol must be > 0, got {self.tol}", tol=self.tol)
        if self.degree < 16:
            raise Errors.argument(f"--degree must be >= 16, got {self.degree}", degree=self.degree)
        if self.format not in FORMATS:
            raise Errors.argument(f"--format must be one of {FORMATS}", format=self.format)
        if self.levels < 0 or self.jobs < 1 or not self.radius > 0.0:
            raise Errors.argument("--levels must be >= 0, --jobs >= 1 and --radius > 0")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=2.0, help="critical exponent (> 1)")
    common.add_argument("--degree", type=int, default=40, help="truncation degree D (>= 16)")
    common.add_argument("--tol", type=float, default=1e-11, help="fixed-point residual tolerance")
    common.add_argument("--levels", "--steps", dest="levels", type=int, default=None,
                        help="cascade levels, tower depth or convergence steps "
                             "(default 8 for stable, 10 otherwise)")
    common.add_argument("--word", default="doubling",
                        help="comma-separated symbol names (doubling, tripling)")
    common.add_argument("--word-perm", default=None,
                        help='explicit permutations, e.g. "1,2,0;0,1"')
    common.add_argument("--seed-file", default=None, help="fixed-point JSON used as Newton seed")
    common.add_argument("--jobs", type=int, default=1, help="threads for Jacobian columns")
    common.add_argument("--radius", type=float, default=0.1, help="neighborhood radius r")
    common.add_argument("--eps", type=float, default=0.05,
                        help="size of the coordinate-change perturbation (skew)")
    common.add_argument("--m-max", type=int, default=3, help="largest renormalization period")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="report path (stdout when omitted)")

    parser = argparse.ArgumentParser(prog="renorm", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


def parse_config(argv):
    args = build_parser().parse_args(argv)
    word = CombSequence.parse(args.word_perm if args.word_perm else args.word)
    levels = args.levels if args.levels is not None else COMMAND_LEVELS.get(args.command, 10)
    return RunConfig(command=args.command, alpha=args.alpha, degree=args.degree, tol=args.tol,
                     levels=levels, out=args.out, format=args.format, word=word,
                     seed_file=args.seed_file, jobs=args.jobs, radius=args.radius, eps=args.eps,
                     m_max=args.m_max)


def load_seed(path):
    """CoeffVector from a fixed-point report or a bare coefficient dump."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, ValueError) as e:
        raise Errors.argument(f"cannot read seed file {path}: {e}", path=path)
    return CoeffVector.from_dict(data.get("point", data))


def _fixed_point(config):
    if not config.seed_file:
        return fixed_point(config.alpha, config.word, config.degree, config.tol, jobs=config.jobs)
    seed = load_seed(config.seed_file)
    result = newton_fixed_point(seed.alpha, config.word, config.degree, config.tol, seed,
                                jobs=config.jobs)
    if seed.alpha != config.alpha:
        result = continue_in_alpha(result, config.alpha, tol=config.tol, jobs=config.jobs)
    return result


def _accumulation_map(config):
    fam = Family.standard(config.alpha)
    return fam.map_at(accumulation_parameter(fam, config.word).c_inf)


@dataclass(frozen=True)
class OrbitReport:
    """Periodic orbit of renormalization with per-point residuals."""
    alpha: float
    word: CombSequence
    orbit: list

    def to_dict(self):
        return {"alpha": self.alpha, "word": self.word.to_list(),
                "orbit": [{"point": point.to_dict(), "residual": res} for point, res in self.orbit]}


def run_command(config):
    """Dispatch a validated RunConfig to the engine and return its result object."""
    if config.command == "fixed-point":
        return _fixed_point(config)
    if config.command == "spectrum":
        return analyse_fixed_point(_fixed_point(config), jobs=config.jobs)
    if config.command == "cascade":
        return cascade_table(Family.standard(config.alpha), config.levels)
    if config.command == "horseshoe":
        pairs = periodic_orbit(config.alpha, config.word, config.degree, config.tol,
                               jobs=config.jobs)
        return OrbitReport(config.alpha, config.word, pairs)
    if config.command == "stable":
        g = _fixed_point(config)
        return stable_convergence_rate(_accumulation_map(config), g.point.to_map(), config.levels,
                                       config.radius, m_max=config.m_max,
                                       attractor_orbit=[g.point])
    if config.command == "skew":
        return skew_convergence(_accumulation_map(config), CoordChange.perturbed_identity(config.eps),
                                config.levels, config.radius, m_max=config.m_max)
    return renorm_tower(_accumulation_map(config), config.levels, config.m_max)


@singledispatch
def to_frame(result):
    raise Errors.argument(f"no CSV layout for {type(result).__name__}; use --format json")


@to_frame.register
def _(result: CascadeTable):
    return result.to_frame()


@to_frame.register
def _(result: FixedPointResult):
    return pd.DataFrame({"k": np.arange(result.point.coeffs.size), "coeff": result.point.coeffs})


@to_frame.register
def _(result: SpectralReport):
    values = np.asarray(result.eigenvalues)
    return pd.DataFrame({"k": np.arange(values.size), "re": values.real, "im": values.imag,
                         "modulus": np.abs(values)})


@to_frame.register
def _(result: RenormTower):
    return pd.DataFrame({
        "n": np.arange(1, len(result) + 1),
        "m": [step.data.m for step in result.steps],
        "mu": [step.data.mu for step in result.steps],
        "critical_value": [step.map.critical_value for step in result.steps],
        "refit_residual": [step.refit_residual for step in result.steps],
    })


@to_frame.register
def _(result: StableRate):
    return pd.DataFrame({"m": np.arange(len(result.distances)), "distance": result.distances})


@to_frame.register
def _(result: SkewConvergence):
    return pd.DataFrame({"j": np.arange(1, len(result.norms) + 1), "norm": result.norms})


@to_frame.register
def _(result: OrbitReport):
    return pd.DataFrame({"position": np.arange(len(result.orbit)),
                         "critical_value": [point.to_map().critical_value for point, _ in result.orbit],
                         "residual": [res for _, res in result.orbit]})


def emit_report(result, fmt="json"):
    """Serialize a module result: JSON with the module's field names or 17-digit CSV."""
    if fmt == "csv":
        text = to_frame(result).to_csv(index=False, float_format="%.17g", na_rep="",
                                       lineterminator="\n")
    elif fmt == "json":
        text = json.dumps(result.to_dict(), indent=2) + "\n"
    else:
        raise Errors.argument(f"unknown format {fmt!r}", format=fmt)
    return text.encode("utf-8")


def _current_umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_atomic(path, data):
    """Write bytes to path through a temporary file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".renorm-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        # mkstemp creates 0600; reports get the mode open() would give them
        os.chmod(tmp, 0o666 & ~_current_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv):
    """Run one command; returns the process exit code."""
    configure_logging()
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    except ArgumentError as e:
        logger.error("%s", e.message)
        return e.exit_code

    try:
        data = emit_report(run_command(config), config.format)
        if config.out:
            write_atomic(config.out, data)
            logger.info("report written to %s", config.out)
        else:
            sys.stdout.buffer.write(data)
    except RenormException as e:
        logger.error("%s [%s]", e.message, e.error_code)
        return e.exit_code
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
