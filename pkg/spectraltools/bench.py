"""
Seeded Monte Carlo trials comparing Gradient-MUSIC with
alternating projection, aggregated per (n, r) cell into
CSV records and markdown tables.
"""

import logging
import math
import pathlib
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import polars as pl
from tqdm import tqdm

from spectraltools.alternating_projection import alternating_projection
from spectraltools.constants import (
    BENCH_PRESETS,
    CSV_COLUMNS,
    DEFAULT_BENCH_TRIALS,
    DEFAULT_EXCLUSION_FACTOR,
    DEFAULT_MASTER_SEED,
    EPS_RANK_LEVELS,
    RNG_NAME,
    VALID_METHODS,
)
from spectraltools.errors import (
    EstimationError,
    GuaranteeRegimeWarning,
    IllConditionedError,
    InvalidArgumentError,
)
from spectraltools.estimators import (
    fourier_subspace_estimate,
    hankel_estimate,
    toeplitz_estimate,
)
from spectraltools.gradient_music import GradientMusicConfig
from spectraltools.instances import Instance, ProblemSpec, draw_instance
from spectraltools.structured_linalg import (
    OrthonormalBasis,
    eps_rank,
    fourier_matrix,
    reverse_columns,
    sin_theta,
    singular_values,
)
from spectraltools.torus import matching_distance_inf
from spectraltools.utils import (
    ensure_listlike,
    validate_input_type,
    validate_iter_has_expected_types,
)

logger = logging.getLogger(__name__)

CSV_SCHEMA: dict[str, pl.DataType] = {
    "method": pl.String,
    "kind": pl.String,
    "n": pl.Int64,
    "r": pl.Int64,
    "beta": pl.Float64,
    "sigma": pl.Float64,
    "trial": pl.Int64,
    "seed": pl.UInt64,
    "rel_error_fro": pl.Float64,
    "rel_error_spec": pl.Float64,
    "sin_theta_fro": pl.Float64,
    "time_sec": pl.Float64,
    "eps_rank_1e6": pl.Int64,
    "eps_rank_1e2": pl.Int64,
}

_CELL_KEYS = ["method", "kind", "n", "r", "beta", "sigma"]


@dataclass(frozen=True)
class TrialRecord:
    """
    Outcome of one trial. Fields that do not apply to
    the trial's kind (or that a failed method could not
    produce) are None.

    ``freq_error``, ``scaling_ratio`` and ``failure`` are
    kept in memory only and do not appear in the CSV.
    """

    method: str
    kind: str
    n: int
    r: int
    beta: float
    sigma: float
    trial: int
    seed: int
    rel_error_fro: float | None
    rel_error_spec: float | None
    sin_theta_fro: float | None
    time_sec: float
    eps_rank_1e6: int | None
    eps_rank_1e2: int | None
    freq_error: float | None = field(default=None, compare=False)
    scaling_ratio: float | None = field(default=None, compare=False)
    failure: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for name in ("rel_error_fro", "rel_error_spec", "sin_theta_fro", "time_sec"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidArgumentError(f"{name} must be nonnegative; got {value}.")

    def csv_row(self) -> tuple:
        return tuple(getattr(self, column) for column in CSV_COLUMNS)

    @property
    def failed(self) -> bool:
        return self.failure is not None


def harness_config(spec: ProblemSpec) -> GradientMusicConfig:
    """
    Gradient-MUSIC settings for a trial: the default
    exclusion radius, capped at half the guaranteed
    separation pi * beta / n.
    """
    m = math.ceil(spec.n / 2) if spec.kind == "subspace" else spec.n
    radius = min(DEFAULT_EXCLUSION_FACTOR / m, math.pi * spec.beta / spec.n)
    return GradientMusicConfig(exclusion_radius=radius)


def _relative(error: float, reference: float) -> float | None:
    return error / reference if reference > 0 else None


def _eps_ranks(sigma: np.ndarray) -> tuple[int, int]:
    low, high = EPS_RANK_LEVELS
    return eps_rank(sigma, low), eps_rank(sigma, high)


def _failed_record(base: dict, elapsed: float, error: Exception) -> TrialRecord:
    logger.debug("Trial %d (%s) failed: %s", base["trial"], base["method"], error)
    return TrialRecord(
        **base,
        rel_error_fro=None,
        rel_error_spec=None,
        sin_theta_fro=None,
        time_sec=elapsed,
        eps_rank_1e6=None,
        eps_rank_1e2=None,
        failure=f"{type(error).__name__}: {error}",
    )


def _matrix_trial(instance: Instance, method: str, base: dict) -> TrialRecord:
    spec = instance.spec
    truth = instance.truth
    observed = instance.observed
    cfg = harness_config(spec)
    x_hat = None
    start = time.perf_counter()
    try:
        if method == "gradient-music" and spec.kind == "hankel":
            result = hankel_estimate(observed, spec.r, cfg)
            estimate, x_hat = result.dense(), result.x_hat
        elif method == "gradient-music":
            result = toeplitz_estimate(observed, spec.r, cfg)
            estimate, x_hat = result.dense(), result.x_hat
        elif spec.kind == "hankel":
            estimate = reverse_columns(
                alternating_projection(reverse_columns(observed), spec.r).dense()
            )
        else:
            estimate = alternating_projection(observed, spec.r).dense()
    except (EstimationError, IllConditionedError) as e:
        return _failed_record(base, time.perf_counter() - start, e)
    elapsed = time.perf_counter() - start
    diff = estimate - truth
    spectral_error = float(np.linalg.norm(diff, 2))
    noise_norm = float(np.linalg.norm(instance.noise, 2))
    rank_1e6, rank_1e2 = _eps_ranks(singular_values(estimate))
    return TrialRecord(
        **base,
        rel_error_fro=_relative(float(np.linalg.norm(diff)), float(np.linalg.norm(truth))),
        rel_error_spec=_relative(spectral_error, float(np.linalg.norm(truth, 2))),
        sin_theta_fro=None,
        time_sec=elapsed,
        eps_rank_1e6=rank_1e6,
        eps_rank_1e2=rank_1e2,
        freq_error=None if x_hat is None else matching_distance_inf(instance.params.x, x_hat),
        scaling_ratio=_relative(spectral_error, math.sqrt(spec.r) * noise_norm),
    )


def _subspace_trial(instance: Instance, base: dict) -> TrialRecord:
    spec = instance.spec
    n = spec.n
    clean = instance.truth
    cfg = harness_config(spec)
    start = time.perf_counter()
    try:
        result = fourier_subspace_estimate(instance.observed, spec.r, cfg)
    except (EstimationError, IllConditionedError) as e:
        return _failed_record(base, time.perf_counter() - start, e)
    elapsed = time.perf_counter() - start
    truth_basis = OrthonormalBasis.from_columns(fourier_matrix(n, instance.params.x))
    _, sin_fro = sin_theta(truth_basis, result.U_hat)
    rank_1e6, rank_1e2 = _eps_ranks(singular_values(fourier_matrix(n, result.x_hat)))
    noise_norm = float(np.linalg.norm(instance.noise))
    return TrialRecord(
        **base,
        rel_error_fro=_relative(
            float(np.linalg.norm(result.signal() - clean)), float(np.linalg.norm(clean))
        ),
        rel_error_spec=None,
        sin_theta_fro=sin_fro,
        time_sec=elapsed,
        eps_rank_1e6=rank_1e6,
        eps_rank_1e2=rank_1e2,
        freq_error=matching_distance_inf(instance.params.x, result.x_hat),
        scaling_ratio=_relative(sin_fro, math.sqrt(spec.r / n) * noise_norm),
    )


def run_trial(spec: ProblemSpec, trial_index: int, method: str) -> TrialRecord:
    """
    Run one seeded trial.

    Draws the instance with :func:`draw_instance`, runs
    ``method`` and scores the output against the
    noiseless ground truth. Only the method call is
    timed.

    Parameters
    ----------
    spec
        The experiment cell.
    trial_index
        Index of the trial within the cell.
    method
        ``"gradient-music"`` or ``"alt-proj"``; subspace
        cells only accept ``"gradient-music"``.

    Returns
    -------
    TrialRecord
        Errors, timing and eps-ranks; estimation failures
        are recorded in ``failure`` rather than raised.
    """
    if method not in VALID_METHODS:
        raise InvalidArgumentError(
            f"method must be one of {VALID_METHODS}; got {method!r}."
        )
    if spec.kind == "subspace" and method != "gradient-music":
        raise InvalidArgumentError(
            f"Subspace trials only support 'gradient-music'; got {method!r}."
        )
    instance = draw_instance(spec, trial_index)
    base = dict(
        method=method,
        kind=spec.kind,
        n=spec.n,
        r=spec.r,
        beta=float(spec.beta),
        sigma=float(spec.sigma),
        trial=trial_index,
        seed=instance.seed,
    )
    if spec.kind == "subspace":
        return _subspace_trial(instance, base)
    return _matrix_trial(instance, method, base)


def _format_stat(value: float | int | None) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    if isinstance(value, int) or float(value).is_integer() and abs(value) < 1e6:
        return f"{value:g}"
    return f"{value:.3g}"


@dataclass
class BenchReport:
    """
    Trial records of a bench run, with per-cell
    aggregation, CSV and markdown output.
    """

    records: list[TrialRecord] = field(default_factory=list)
    rng_name: str = RNG_NAME

    def to_frame(self) -> pl.DataFrame:
        """Records as a frame with the CSV columns, in order."""
        return pl.DataFrame(
            [record.csv_row() for record in self.records],
            schema=CSV_SCHEMA,
            orient="row",
        )

    def _diagnostic_frame(self) -> pl.DataFrame:
        return self.to_frame().with_columns(
            pl.Series(
                "scaling_ratio",
                [record.scaling_ratio for record in self.records],
                dtype=pl.Float64,
            ),
            pl.Series(
                "freq_error",
                [record.freq_error for record in self.records],
                dtype=pl.Float64,
            ),
            pl.Series(
                "failed", [record.failed for record in self.records], dtype=pl.Boolean
            ),
        )

    def summary(self) -> pl.DataFrame:
        """
        Per-cell statistics: average and maximum error and
        time, median and maximum eps-ranks, failures.
        """
        frame = self._diagnostic_frame()
        return (
            frame.group_by(_CELL_KEYS, maintain_order=True)
            .agg(
                pl.len().alias("trials"),
                pl.col("failed").sum().alias("failures"),
                pl.col("rel_error_fro").mean().alias("avg_error"),
                pl.col("rel_error_fro").max().alias("max_error"),
                pl.col("rel_error_spec").mean().alias("avg_error_spec"),
                pl.col("sin_theta_fro").mean().alias("avg_sin_theta_fro"),
                pl.col("time_sec").mean().alias("avg_time"),
                pl.col("time_sec").max().alias("max_time"),
                pl.col("eps_rank_1e6").median().alias("median_eps_rank_1e6"),
                pl.col("eps_rank_1e6").max().alias("max_eps_rank_1e6"),
                pl.col("eps_rank_1e2").median().alias("median_eps_rank_1e2"),
                pl.col("eps_rank_1e2").max().alias("max_eps_rank_1e2"),
                pl.col("freq_error").mean().alias("avg_freq_error"),
                pl.col("scaling_ratio").mean().alias("avg_scaling_ratio"),
            )
            .sort(["method", "kind", "beta", "sigma", "n", "r"])
        )

    def scaling_spread(self) -> dict[str, float]:
        """
        Max over min of the per-cell average scaling
        ratio, per method; bounded values across growing
        n indicate the error rate holds.
        """
        spread = {}
        for (method,), cells in self.summary().group_by(["method"], maintain_order=True):
            ratios = cells.get_column("avg_scaling_ratio").drop_nulls().drop_nans()
            if ratios.len() > 0 and ratios.min() > 0:
                spread[method] = float(ratios.max() / ratios.min())
        return spread

    def to_markdown(self) -> str:
        """
        One markdown table per (method, kind) with a row
        per statistic and a column per (n, r) cell.
        """
        lines = [f"RNG: {self.rng_name}", ""]
        summary = self.summary()
        rows = [
            ("Average error", "avg_error"),
            ("Maximum error", "max_error"),
            ("Average sin-theta (F)", "avg_sin_theta_fro"),
            ("Average time (s)", "avg_time"),
            ("Maximum time (s)", "max_time"),
            ("Median 1e-6-rank", "median_eps_rank_1e6"),
            ("Maximum 1e-6-rank", "max_eps_rank_1e6"),
            ("Median 1e-2-rank", "median_eps_rank_1e2"),
            ("Maximum 1e-2-rank", "max_eps_rank_1e2"),
            ("Failures", "failures"),
        ]
        groups = summary.group_by(["method", "kind"], maintain_order=True)
        for (method, kind), cells in groups:
            if kind != "subspace":
                shown = [row for row in rows if row[1] != "avg_sin_theta_fro"]
            else:
                shown = rows
            table = {"": [label for label, _ in shown]}
            for cell in cells.iter_rows(named=True):
                header = (
                    f"(n, r) = ({cell['n']}, {cell['r']}),"
                    f" beta = {cell['beta']:g}, sigma = {cell['sigma']:g}"
                )
                table[header] = [_format_stat(cell[column]) for _, column in shown]
            with pl.Config(
                tbl_formatting="ASCII_MARKDOWN",
                tbl_hide_column_data_types=True,
                tbl_hide_dataframe_shape=True,
                tbl_rows=-1,
                tbl_cols=-1,
                fmt_str_lengths=120,
                tbl_width_chars=1000,
            ):
                lines += [f"### {method} ({kind})", "", str(pl.DataFrame(table)), ""]
        for method, ratio in self.scaling_spread().items():
            lines.append(f"Scaling ratio max/min ({method}): {ratio:.3g}")
        return "\n".join(lines).rstrip() + "\n"

    def write_csv(self, path: str | pathlib.Path) -> None:
        self.to_frame().write_csv(path)

    def write_markdown(self, path: str | pathlib.Path) -> None:
        pathlib.Path(path).write_text(self.to_markdown())


def records_from_frame(frame: pl.DataFrame) -> list[TrialRecord]:
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise InvalidArgumentError(f"Record frame lacks column(s) {missing}.")
    return [
        TrialRecord(**row)
        for row in frame.select(CSV_COLUMNS).cast(CSV_SCHEMA).iter_rows(named=True)
    ]


def read_csv(path: str | pathlib.Path) -> list[TrialRecord]:
    """Parse a bench CSV back into trial records."""
    return records_from_frame(pl.read_csv(path, schema=CSV_SCHEMA))


def compatible_methods(kind: str, methods: list[str] | None = None) -> list[str]:
    """The requested methods that apply to ``kind``."""
    if methods is None:
        methods = list(VALID_METHODS)
    unknown = [method for method in methods if method not in VALID_METHODS]
    if unknown:
        raise InvalidArgumentError(
            f"methods must be drawn from {VALID_METHODS}; got {unknown}."
        )
    if kind == "subspace":
        return [method for method in methods if method == "gradient-music"]
    return list(methods)


def run_bench(
    specs: list[ProblemSpec] | ProblemSpec,
    methods: list[str] | str | None = None,
    threads: int = 1,
    progress: bool = False,
) -> BenchReport:
    """
    Run every trial of every cell with every applicable
    method.

    Trials are independent and seeded from
    ``(master_seed, trial)``, so records do not depend on
    ``threads``. Records come back in cell, method, trial
    order.

    Parameters
    ----------
    specs
        Experiment cells, or a single cell.
    methods
        Method name or names to compare. Defaults to every
        method the cell's kind supports.
    threads
        Worker threads; 1 runs serially.
    progress
        Show a progress bar.

    Returns
    -------
    BenchReport
        All trial records.
    """
    specs = ensure_listlike(specs)
    validate_iter_has_expected_types(specs, ProblemSpec, "specs")
    if methods is not None:
        methods = ensure_listlike(methods)
        validate_iter_has_expected_types(methods, str, "methods")
    validate_input_type(threads, int, "threads")
    if threads < 1:
        raise InvalidArgumentError(f"threads must be at least 1; got {threads}.")
    tasks = [
        (spec, trial, method)
        for spec in specs
        for method in compatible_methods(spec.kind, methods)
        for trial in range(spec.trials)
    ]
    logger.info("Running %d trial(s) over %d cell(s).", len(tasks), len(specs))
    records: list[TrialRecord] = []
    progress_bar = tqdm(total=len(tasks), disable=not progress)
    # regime notices are expected for the harder presets
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GuaranteeRegimeWarning)
        try:
            if threads == 1:
                for task in tasks:
                    records.append(run_trial(*task))
                    progress_bar.update()
            else:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    for record in pool.map(lambda task: run_trial(*task), tasks):
                        records.append(record)
                        progress_bar.update()
        finally:
            progress_bar.close()
    failures = sum(record.failed for record in records)
    if failures:
        logger.warning("%d of %d trial(s) failed.", failures, len(records))
    return BenchReport(records=records)


def presets_to_specs(
    preset: str,
    trials: int = DEFAULT_BENCH_TRIALS,
    master_seed: int = DEFAULT_MASTER_SEED,
) -> tuple[list[ProblemSpec], list[str]]:
    """
    Cells and methods of a named experiment preset.

    Parameters
    ----------
    preset
        A key of ``BENCH_PRESETS``.
    trials
        Trials per cell.
    master_seed
        Master seed shared by all cells.

    Returns
    -------
    tuple[list[ProblemSpec], list[str]]
        The cells and the methods to run on them.
    """
    validate_input_type(preset, str, "preset")
    if preset not in BENCH_PRESETS:
        raise InvalidArgumentError(
            f"preset must be one of {sorted(BENCH_PRESETS)}; got {preset!r}."
        )
    settings = BENCH_PRESETS[preset]
    specs = [
        ProblemSpec(
            n=n,
            r=r,
            beta=settings["beta"],
            sigma=settings["sigma"],
            trials=trials,
            master_seed=master_seed,
            kind=settings["kind"],
            fix_noise_norm=settings["fix_noise_norm"],
        )
        for n, r in settings["cells"]
    ]
    return specs, list(settings["methods"])
