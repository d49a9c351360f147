"""
Command line interface: ``spectraltools approx``,
``subspace``, ``bench`` and ``generate``.

Exit codes are 0 on success, 2 for invalid arguments
or inputs, 3 when an estimator fails and 4 on I/O
errors.
"""

import argparse
import json
import logging
import pathlib
import sys

import numpy as np
from numpy.typing import ArrayLike
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from spectraltools.alternating_projection import alternating_projection
from spectraltools.bench import BenchReport, presets_to_specs, run_bench
from spectraltools.cmat import (
    read_cmat,
    read_text,
    read_vector,
    write_cmat,
    write_vector,
)
from spectraltools.constants import (
    BENCH_PRESETS,
    DEFAULT_BENCH_TRIALS,
    DEFAULT_MASTER_SEED,
    DEFAULT_RANK_THRESHOLD,
    VALID_KINDS,
)
from spectraltools.errors import (
    EstimationError,
    GeneratorInfeasibleError,
    IllConditionedError,
    InvalidArgumentError,
    NoSignalError,
)
from spectraltools.estimators import (
    fourier_subspace_estimate,
    hankel_estimate,
    toeplitz_estimate,
)
from spectraltools.gradient_music import SpectralParams, detect_rank
from spectraltools.instances import ProblemSpec, draw_instance
from spectraltools.structured_linalg import (
    OrthonormalBasis,
    fourier_matrix,
    hankel_from_params,
    reverse_columns,
    sin_theta,
    singular_values,
)
from spectraltools.torus import FrequencySet, matching_distance_inf

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ESTIMATION = 3
EXIT_IO = 4


def _pairs(values: ArrayLike) -> list[list[float]]:
    arr = np.asarray(values, dtype=np.complex128).reshape(-1)
    return [[float(v.real), float(v.imag)] for v in arr]


def _truth_path(out: pathlib.Path) -> pathlib.Path:
    return out.with_name(out.name + ".truth.json")


def _write_json(path: str | pathlib.Path, payload: dict) -> None:
    pathlib.Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _read_truth(path: str | pathlib.Path) -> tuple[str, SpectralParams]:
    """Kind and parameters from a ground-truth sidecar."""
    text = read_text(path)
    try:
        payload = json.loads(text)
        kind = payload["kind"]
        xs = [float(v) for v in payload["x"]]
        a = np.array([complex(re, im) for re, im in payload["a"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidArgumentError(f"Malformed truth file {path}: {e}") from e
    if kind not in VALID_KINDS:
        raise InvalidArgumentError(f"Truth file has unknown kind {kind!r}.")
    return kind, SpectralParams(FrequencySet.from_values(xs), a)


def _resolve_cli_rank(args: argparse.Namespace) -> int | str:
    return "auto" if args.rank is None else args.rank


def cmd_approx(args: argparse.Namespace) -> dict:
    observed = read_cmat(args.input)
    truth_params = None
    if args.truth is not None:
        kind, truth_params = _read_truth(args.truth)
        if kind != args.structure:
            raise InvalidArgumentError(
                f"Truth file describes a {kind} instance; approx ran with"
                f" --structure {args.structure}."
            )
    n = observed.shape[0]
    rank = _resolve_cli_rank(args)
    payload: dict = {"method": args.method, "structure": args.structure}
    if args.method == "gmusic":
        if args.structure == "hankel":
            result = hankel_estimate(observed, rank, theta=args.theta)
            payload["b_hat"] = _pairs(result.b_hat)
        else:
            result = toeplitz_estimate(observed, rank, theta=args.theta)
            payload["a_hat"] = _pairs(result.a_hat)
        payload["x_hat"] = [float(v) for v in result.x_hat.values]
        payload["rank"] = result.rank
        estimate = result.dense()
        x_hat = result.x_hat
    else:
        if rank == "auto":
            rank = detect_rank(singular_values(observed), float(n), args.theta)
            if rank == 0:
                raise NoSignalError(f"No singular value reaches {args.theta} * {n}.")
        if args.structure == "hankel":
            estimate = reverse_columns(
                alternating_projection(reverse_columns(observed), rank).dense()
            )
        else:
            estimate = alternating_projection(observed, rank).dense()
        payload["rank"] = rank
        x_hat = None
    if args.matrix_out is not None:
        write_cmat(args.matrix_out, estimate)
        payload["matrix"] = str(args.matrix_out)
    if truth_params is not None:
        if args.structure == "hankel":
            truth = hankel_from_params(n, truth_params.x, truth_params.a)
        else:
            truth = truth_params.toeplitz(n).dense()
        diff = estimate - truth
        errors = {
            "rel_error_fro": float(np.linalg.norm(diff) / np.linalg.norm(truth)),
            "rel_error_spec": float(np.linalg.norm(diff, 2) / np.linalg.norm(truth, 2)),
        }
        if x_hat is not None and len(x_hat) == truth_params.r:
            errors["freq_error"] = matching_distance_inf(truth_params.x, x_hat)
        payload["errors"] = errors
    _write_json(args.out, payload)
    logger.info("Wrote %s.", args.out)
    return payload


def cmd_subspace(args: argparse.Namespace) -> dict:
    y = read_vector(args.input)
    params = None
    if args.truth is not None:
        kind, params = _read_truth(args.truth)
        if kind != "subspace":
            raise InvalidArgumentError(
                f"Truth file describes a {kind} instance; subspace needs a subspace one."
            )
    result = fourier_subspace_estimate(y, _resolve_cli_rank(args), theta=args.theta)
    out = pathlib.Path(args.out)
    basis_path = (
        pathlib.Path(args.basis_out)
        if args.basis_out is not None
        else out.with_name(out.stem + ".basis.cmat")
    )
    write_cmat(basis_path, result.U_hat.basis)
    payload: dict = {
        "rank": len(result.x_hat),
        "x_hat": [float(v) for v in result.x_hat.values],
        "a_hat": _pairs(result.a_hat),
        "basis": str(basis_path),
    }
    if params is not None:
        truth_basis = OrthonormalBasis.from_columns(fourier_matrix(y.size, params.x))
        errors = {}
        if truth_basis.dim == result.U_hat.dim:
            spec_norm, fro_norm = sin_theta(truth_basis, result.U_hat)
            errors["sin_theta_spec"] = spec_norm
            errors["sin_theta_fro"] = fro_norm
            errors["freq_error"] = matching_distance_inf(params.x, result.x_hat)
        payload["errors"] = errors
    _write_json(out, payload)
    logger.info("Wrote %s and %s.", out, basis_path)
    return payload


def _summary_table(report: BenchReport) -> Table:
    table = Table(title="Bench summary")
    for column in ("method", "kind", "n", "r", "avg error", "max error", "avg time (s)", "failures"):
        table.add_column(column, justify="left" if column in ("method", "kind") else "right")
    for cell in report.summary().iter_rows(named=True):
        table.add_row(
            cell["method"],
            cell["kind"],
            str(cell["n"]),
            str(cell["r"]),
            "-" if cell["avg_error"] is None else f"{cell['avg_error']:.3g}",
            "-" if cell["max_error"] is None else f"{cell['max_error']:.3g}",
            f"{cell['avg_time']:.3g}",
            str(cell["failures"]),
        )
    return table


def cmd_bench(args: argparse.Namespace) -> dict:
    specs, methods = presets_to_specs(args.preset, trials=args.trials, master_seed=args.seed)
    report = run_bench(specs, methods, threads=args.threads, progress=not args.quiet)
    report.write_csv(args.csv)
    report.write_markdown(args.md)
    if not args.quiet and report.records:
        Console().print(_summary_table(report))
    for method, ratio in report.scaling_spread().items():
        logger.info("Scaling ratio max/min for %s: %.3g", method, ratio)
    logger.info("Wrote %s and %s.", args.csv, args.md)
    return {"records": len(report.records)}


def cmd_generate(args: argparse.Namespace) -> dict:
    spec = ProblemSpec(
        n=args.n,
        r=args.r,
        beta=args.beta,
        sigma=args.sigma,
        trials=1,
        master_seed=args.seed,
        kind=args.kind,
    )
    instance = draw_instance(spec)
    out = pathlib.Path(args.out)
    if spec.kind == "subspace":
        write_vector(out, instance.observed)
    else:
        write_cmat(out, instance.observed)
    truth = {
        "kind": spec.kind,
        "n": spec.n,
        "r": spec.r,
        "beta": spec.beta,
        "sigma": spec.sigma,
        "seed": spec.master_seed,
        "x": [float(v) for v in instance.params.x.values],
        "a": _pairs(instance.params.a),
    }
    _write_json(_truth_path(out), truth)
    logger.info("Wrote %s and %s.", out, _truth_path(out))
    return truth


def _add_rank_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--rank", type=int, default=None, help="Number of frequencies.")
    group.add_argument(
        "--auto-rank",
        action="store_const",
        const=None,
        dest="rank",
        help="Detect the rank by singular value thresholding (default).",
    )
    parser.add_argument(
        "--theta",
        type=float,
        default=DEFAULT_RANK_THRESHOLD,
        help="Rank detection threshold (default: %(default)s).",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectraltools",
        description="Gradient-MUSIC low-rank Toeplitz/Hankel approximation"
        " and Fourier subspace estimation.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging.")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings only.")
    commands = parser.add_subparsers(dest="command", required=True)

    approx = commands.add_parser("approx", help="Low-rank structured approximation of a matrix.")
    approx.add_argument("--input", required=True, help="CMAT file holding M.")
    _add_rank_arguments(approx)
    approx.add_argument("--method", choices=["gmusic", "altproj"], default="gmusic")
    approx.add_argument("--structure", choices=["toeplitz", "hankel"], default="toeplitz")
    approx.add_argument("--truth", help="Ground-truth sidecar to score against.")
    approx.add_argument("--matrix-out", help="Write the estimate as a CMAT file.")
    approx.add_argument("--out", required=True, help="JSON output path.")
    approx.set_defaults(handler=cmd_approx)

    subspace = commands.add_parser("subspace", help="Fourier subspace of a noisy signal.")
    subspace.add_argument("--input", required=True, help="Vector file of 're im' lines.")
    _add_rank_arguments(subspace)
    subspace.add_argument("--truth", help="Ground-truth sidecar to score against.")
    subspace.add_argument(
        "--basis-out", help="CMAT path for the basis (default: <out>.basis.cmat)."
    )
    subspace.add_argument("--out", required=True, help="JSON output path.")
    subspace.set_defaults(handler=cmd_subspace)

    bench = commands.add_parser("bench", help="Run an experiment preset.")
    bench.add_argument("--preset", required=True, choices=sorted(BENCH_PRESETS))
    bench.add_argument("--trials", type=int, default=DEFAULT_BENCH_TRIALS)
    bench.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--csv", required=True, help="Per-trial CSV output path.")
    bench.add_argument("--md", required=True, help="Markdown summary output path.")
    bench.set_defaults(handler=cmd_bench)

    generate = commands.add_parser("generate", help="Draw a random noisy instance.")
    generate.add_argument("--kind", choices=VALID_KINDS, default="toeplitz")
    generate.add_argument("--n", type=int, required=True)
    generate.add_argument("--r", type=int, required=True)
    generate.add_argument("--beta", type=float, default=4.0)
    generate.add_argument("--sigma", type=float, default=0.0)
    generate.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
    generate.add_argument("--out", required=True, help="CMAT or vector output path.")
    generate.set_defaults(handler=cmd_generate)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    logging.captureWarnings(True)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(verbose=args.verbose, quiet=args.quiet)
    try:
        args.handler(args)
    except (InvalidArgumentError, TypeError) as e:
        logger.error("Invalid argument: %s", e)
        return EXIT_INVALID
    except (EstimationError, IllConditionedError, GeneratorInfeasibleError) as e:
        logger.error("Estimation failed: %s", e)
        return EXIT_ESTIMATION
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
