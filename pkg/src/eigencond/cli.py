"""Command-line interface: one executable, subcommand per operation.

Subcommands: lattice, cond, perturb, asymptotics, optimize, reproduce.
All CSV output carries headers and uses shortest round-trip float formatting;
every run emits a one-line JSON manifest on stderr (and optionally to a
file).  Randomized subcommands take --seed, with the EIGENCOND_SEED
environment variable as fallback; a fixed seed reproduces output bit for bit.

Exit codes: 0 success, 1 usage error, 2 numerical ill-posedness.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .conditioning import (condition_report, condition_report_diagonal,
                           perturbation_experiment)
from .errors import NumericalError, UsageError
from .extremal import convergence_study, proposition_constant
from .lattice import (Configuration, enumerate_lattice_in_disk, first_n_sites,
                      first_n_lattice_points)
from .linalg import read_matrix
from .optimizer import OptimizerConfig, optimize

SEED_ENV_VAR = "EIGENCOND_SEED"


def _fmt(x) -> str:
    """Shortest decimal that round-trips the float exactly."""
    return repr(float(x))


@dataclass
class RunManifest:
    """Record of one invocation; rerunning it reproduces the primary outputs."""

    subcommand: str
    parameters: dict
    seed: int | None
    tool_version: str = __version__
    output_paths: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the declared contract is exit 1."""

    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="eigencond",
                     description="Eigenvalue/eigenvector conditioning and "
                                 "extremal spectral configurations.")
    parser.add_argument("--version", action="version", version=f"eigencond {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, seeded=False):
        p.add_argument("--output", metavar="PATH", help="write CSV here instead of stdout")
        p.add_argument("--manifest", metavar="PATH", help="also write the run manifest here")
        p.add_argument("--threads", type=_positive_int, default=1,
                       help="cap internal parallelism (the implementation is "
                            "single-threaded; 1 is the tested default)")
        if seeded:
            p.add_argument("--seed", type=_nonnegative_int, default=None,
                           help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")

    p = sub.add_parser("lattice", help="enumerate triangular-lattice points")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_positive_int, help="first n points by modulus")
    group.add_argument("--r", type=float, help="all points in the disk of radius r")
    p.add_argument("--open", action="store_true", dest="open_disk",
                   help="with --r: strict inequality |z| < r")
    common(p)
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("cond", help="condition-number report for a matrix")
    p.add_argument("matrix", nargs="?", help="matrix file (text format: n, then n*n 're im' lines)")
    p.add_argument("--diag", metavar="CSV",
                   help="treat a configuration CSV as a diagonal matrix (fast path)")
    common(p)
    p.set_defaults(func=_cmd_cond)

    p = sub.add_parser("perturb", help="empirical first-order perturbation ratios")
    p.add_argument("matrix", nargs="?", help="matrix file")
    p.add_argument("--diag", metavar="CSV", help="diagonal matrix from a configuration CSV")
    p.add_argument("--eps", type=float, required=True, help="relative perturbation size")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--norm", choices=("frob", "op"), default="frob")
    common(p, seeded=True)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("asymptotics", help="convergence of S_p toward its leading constant")
    p.add_argument("--p", type=float, required=True, help="exponent (inf allowed)")
    p.add_argument("--n-list", type=_n_list, required=True, metavar="N1,N2,...",
                   help="strictly increasing configuration sizes")
    p.add_argument("--generator", choices=("lattice", "file"), default="lattice")
    p.add_argument("--file", metavar="CSV",
                   help="with --generator file: configuration whose first n points are used")
    common(p)
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("optimize", help="search for low separation-functional configurations")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--restarts", type=_positive_int, default=1)
    p.add_argument("--init", choices=("lattice", "random", "file"), default="lattice")
    p.add_argument("--file", metavar="CSV", help="with --init file: starting configuration")
    p.add_argument("--max-iters", type=_positive_int, default=300)
    p.add_argument("--trace", metavar="PATH", help="write the JSON-lines objective trace here")
    common(p, seeded=True)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("reproduce", help="headline asymptotic constants at one n")
    p.add_argument("--n", type=_positive_int, required=True, help="configuration size (>= 100)")
    common(p)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def _resolve_seed(ns) -> int:
    seed = getattr(ns, "seed", None)
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is None:
        return 0
    try:
        seed = int(env)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    if seed < 0:
        raise UsageError(f"{SEED_ENV_VAR} must be nonnegative")
    return seed


def read_configuration_csv(path) -> Configuration:
    """Read a point configuration from CSV with 're' and 'im' header columns.

    Accepts both the two-column optimizer output and the six-column lattice
    output.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise UsageError(f"cannot read configuration file {path}: {exc}") from exc
    if not rows:
        raise UsageError(f"{path}: empty configuration file")
    header = [cell.strip().lower() for cell in rows[0]]
    if "re" not in header or "im" not in header:
        raise UsageError(f"{path}: header must contain 're' and 'im' columns")
    ire, iim = header.index("re"), header.index("im")
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            points.append(complex(float(row[ire]), float(row[iim])))
        except (ValueError, IndexError) as exc:
            raise UsageError(f"{path}: line {lineno}: malformed point row") from exc
    if not points:
        raise UsageError(f"{path}: no points")
    return Configuration(points)


def write_configuration_csv(fh, points) -> None:
    fh.write("re,im\n")
    for z in points:
        fh.write(f"{_fmt(z.real)},{_fmt(z.imag)}\n")


def _load_matrix_or_diag(ns) -> np.ndarray:
    if (ns.matrix is None) == (ns.diag is None):
        raise UsageError("provide exactly one of: a matrix file, or --diag CSV")
    if ns.matrix is not None:
        try:
            return read_matrix(ns.matrix)
        except OSError as exc:
            raise UsageError(f"cannot read matrix file {ns.matrix}: {exc}") from exc
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    config = read_configuration_csv(ns.diag)
    return np.diag(config.points)


def _emit(ns, manifest: RunManifest, text: str) -> None:
    """Write the primary CSV and the manifest."""
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(manifest.to_json(), file=sys.stderr)
    if ns.manifest:
        with open(ns.manifest, "w", encoding="utf-8") as fh:
            fh.write(manifest.to_json() + "\n")


def _manifest(ns, subcommand: str, parameters: dict, seed: int | None) -> RunManifest:
    outputs = [ns.output or "-"]
    if getattr(ns, "trace", None):
        outputs.append(ns.trace)
    return RunManifest(subcommand=subcommand, parameters=parameters, seed=seed,
                       output_paths=outputs)


def _cmd_lattice(ns) -> None:
    if ns.n is not None:
        sites = first_n_sites(ns.n)
        params = {"n": ns.n, "threads": ns.threads}
    else:
        if not math.isfinite(ns.r) or ns.r < 0.0:
            raise UsageError("--r must be finite and nonnegative")
        sites = enumerate_lattice_in_disk(ns.r, closed=not ns.open_disk)
        params = {"r": ns.r, "closed": not ns.open_disk, "threads": ns.threads}
    lines = ["index,a,b,re,im,modulus"]
    for idx, site in enumerate(sites):
        lines.append(f"{idx},{site.a},{site.b},{_fmt(site.z.real)},"
                     f"{_fmt(site.z.imag)},{_fmt(abs(site.z))}")
    _emit(ns, _manifest(ns, "lattice", params, None), "\n".join(lines) + "\n")


def _condition_rows(report) -> list[str]:
    lines = ["lambda_re,lambda_im,kappa_lambda,kappa_x"]
    for row in report.per_eigenpair:
        lines.append(f"{_fmt(row.eigenvalue.real)},{_fmt(row.eigenvalue.imag)},"
                     f"{_fmt(row.kappa_lambda)},{_fmt(row.kappa_x)}")
    lines.append(f"kappa_max,{_fmt(report.kappa_max_frob)},{_fmt(report.kappa_max_op)}")
    return lines


def _cmd_cond(ns) -> None:
    if ns.diag is not None and ns.matrix is None:
        report = condition_report_diagonal(read_configuration_csv(ns.diag))
        params = {"diag": ns.diag, "threads": ns.threads}
    else:
        report = condition_report(_load_matrix_or_diag(ns))
        params = {"matrix": ns.matrix, "threads": ns.threads}
    _emit(ns, _manifest(ns, "cond", params, None), "\n".join(_condition_rows(report)) + "\n")


def _cmd_perturb(ns) -> None:
    matrix = _load_matrix_or_diag(ns)
    seed = _resolve_seed(ns)
    if ns.eps <= 0.0 or not math.isfinite(ns.eps):
        raise UsageError("--eps must be positive and finite")
    result = perturbation_experiment(matrix, ns.eps, trials=ns.trials,
                                     norm_kind=ns.norm, seed=seed)
    lines = ["lambda_re,lambda_im,kappa_lambda,kappa_x,shift_ratio,angle_ratio"]
    for row in result.rows:
        lines.append(f"{_fmt(row.eigenvalue.real)},{_fmt(row.eigenvalue.imag)},"
                     f"{_fmt(row.kappa_lambda)},{_fmt(row.kappa_x)},"
                     f"{_fmt(row.shift_ratio)},{_fmt(row.angle_ratio)}")
    lines.append(f"excluded_trials,{result.excluded_trials}")
    params = {"matrix": ns.matrix, "diag": ns.diag, "eps": ns.eps,
              "trials": ns.trials, "norm": ns.norm, "threads": ns.threads}
    _emit(ns, _manifest(ns, "perturb", params, seed), "\n".join(lines) + "\n")


def _cmd_asymptotics(ns) -> None:
    if ns.generator == "file":
        if not ns.file:
            raise UsageError("--generator file requires --file")
        pool = read_configuration_csv(ns.file).points

        def generator(n: int) -> Configuration:
            if n > pool.size:
                raise UsageError(f"configuration file has {pool.size} points, need {n}")
            return Configuration(pool[:n])
    else:
        generator = None
    try:
        rows = convergence_study(ns.p, ns.n_list, generator)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    lines = ["n,raw,scale,ratio,target,margin"]
    for row in rows:
        lines.append(f"{row.n},{_fmt(row.raw)},{_fmt(row.scale)},{_fmt(row.ratio)},"
                     f"{_fmt(row.target)},{_fmt(row.ratio / row.target)}")
    params = {"p": ns.p, "n_list": ns.n_list, "generator": ns.generator,
              "file": ns.file, "threads": ns.threads}
    _emit(ns, _manifest(ns, "asymptotics", params, None), "\n".join(lines) + "\n")


def _cmd_optimize(ns) -> None:
    seed = _resolve_seed(ns)
    init_points = None
    if ns.init == "file":
        if not ns.file:
            raise UsageError("--init file requires --file")
        init_points = tuple(read_configuration_csv(ns.file).points)
    try:
        cfg = OptimizerConfig(n=ns.n, p=ns.p, restarts=ns.restarts,
                              max_iters=ns.max_iters, seed=seed, init=ns.init,
                              init_points=init_points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = optimize(cfg)
    out = []
    out.append("re,im")
    for z in result.best.points:
        out.append(f"{_fmt(z.real)},{_fmt(z.imag)}")
    if ns.trace:
        with open(ns.trace, "w", encoding="utf-8") as fh:
            for iteration, objective in result.trace:
                fh.write(json.dumps({"iteration": iteration,
                                     "objective": objective}) + "\n")
            fh.write(json.dumps({"event": "done", "objective": result.objective,
                                 "init_objective": result.init_objective}) + "\n")
    params = {"n": ns.n, "p": ns.p, "restarts": ns.restarts, "init": ns.init,
              "file": ns.file, "max_iters": ns.max_iters, "threads": ns.threads}
    _emit(ns, _manifest(ns, "optimize", params, seed), "\n".join(out) + "\n")


def reproduce_rows(n: int) -> list[dict]:
    """Measured kappa_max growth ratios against the leading-order constants.

    Builds the first-n lattice configuration, reads kappa_max_frob and
    kappa_max_op off the diagonal fast path, and normalizes by n and sqrt(n).
    """
    if n < 100:
        raise ValueError("reproduce needs n >= 100 (asymptotic regime)")
    config = first_n_lattice_points(n)
    report = condition_report_diagonal(config)
    rows = []
    for label, measured, scale, target in (
            ("frobenius", report.kappa_max_frob, float(n), proposition_constant(2.0)),
            ("operator", report.kappa_max_op, math.sqrt(float(n)),
             proposition_constant(math.inf))):
        ratio = measured / scale
        rows.append({"norm": label, "n": n, "measured_ratio": ratio,
                     "target": target, "rel_deviation": abs(ratio - target) / target})
    return rows


def _cmd_reproduce(ns) -> None:
    if ns.n < 100:
        raise UsageError("reproduce needs --n >= 100")
    rows = reproduce_rows(ns.n)
    lines = ["norm,n,measured_ratio,target,rel_deviation"]
    for row in rows:
        lines.append(f"{row['norm']},{row['n']},{_fmt(row['measured_ratio'])},"
                     f"{_fmt(row['target'])},{_fmt(row['rel_deviation'])}")
    params = {"n": ns.n, "threads": ns.threads}
    _emit(ns, _manifest(ns, "reproduce", params, None), "\n".join(lines) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        ns.func(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # library-level precondition violations are mathematical, not usage
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
