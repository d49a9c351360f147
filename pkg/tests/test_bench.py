"""
Test file for functions contained
within bench.py
"""

import dataclasses
import statistics

import polars as pl
import pytest

import spectraltools
from spectraltools.bench import CSV_SCHEMA, compatible_methods


@pytest.fixture
def small_specs():
    return [
        spectraltools.ProblemSpec(n=40, r=2, beta=4, sigma=0.05, trials=3, master_seed=9),
        spectraltools.ProblemSpec(
            n=40, r=2, beta=4, sigma=0.05, trials=2, master_seed=9, kind="hankel"
        ),
        spectraltools.ProblemSpec(
            n=64, r=2, beta=8, sigma=0.05, trials=2, master_seed=9, kind="subspace"
        ),
    ]


def without_time(records):
    return [dataclasses.replace(record, time_sec=0.0) for record in records]


@pytest.mark.parametrize("kind", ["toeplitz", "hankel"])
@pytest.mark.parametrize("method", ["gradient-music", "alt-proj"])
def test_run_trial_noiseless_is_exact(kind, method):
    spec = spectraltools.ProblemSpec(n=40, r=3, beta=4, sigma=0.0, master_seed=3, kind=kind)
    record = spectraltools.run_trial(spec, 0, method)
    assert not record.failed
    assert record.rel_error_fro <= 1e-8
    assert record.rel_error_spec <= 1e-8
    assert record.sin_theta_fro is None
    assert record.seed == spectraltools.trial_seed(3, 0)
    if method == "gradient-music":
        assert record.eps_rank_1e6 == 3
        assert record.freq_error <= 1e-8
    else:
        assert record.freq_error is None


def test_run_trial_subspace_record():
    spec = spectraltools.ProblemSpec(n=64, r=2, beta=8, sigma=0.0, kind="subspace")
    record = spectraltools.run_trial(spec, 1, "gradient-music")
    assert record.rel_error_spec is None
    assert record.sin_theta_fro <= 1e-8
    assert record.rel_error_fro <= 1e-8
    assert record.eps_rank_1e6 == 2


def test_run_trial_rejects_unknown_method():
    spec = spectraltools.ProblemSpec(n=40, r=2, beta=4, sigma=0.1)
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.run_trial(spec, 0, "cadzow")
    subspace = dataclasses.replace(spec, kind="subspace")
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.run_trial(subspace, 0, "alt-proj")


def test_harness_config_radius():
    spec = spectraltools.ProblemSpec(n=200, r=40, beta=2, sigma=1.0)
    # pi beta / n is tighter than 4 pi / n for beta < 4
    assert spectraltools.harness_config(spec).exclusion_radius == pytest.approx(
        3.141592653589793 * 2 / 200
    )
    wide = spectraltools.ProblemSpec(n=200, r=10, beta=8, sigma=0.1, kind="subspace")
    assert spectraltools.harness_config(wide).exclusion_radius == pytest.approx(
        4 * 3.141592653589793 / 100
    )


def test_compatible_methods():
    assert compatible_methods("toeplitz") == ["gradient-music", "alt-proj"]
    assert compatible_methods("subspace") == ["gradient-music"]
    assert compatible_methods("subspace", ["alt-proj"]) == []
    with pytest.raises(spectraltools.InvalidArgumentError):
        compatible_methods("toeplitz", ["music"])


def test_run_bench_order_and_threads(small_specs):
    """
    Records come back in cell, method, trial order and
    do not depend on the number of threads.
    """
    serial = spectraltools.run_bench(small_specs)
    keys = [(r.kind, r.method, r.trial) for r in serial.records]
    assert keys == [
        ("toeplitz", "gradient-music", 0),
        ("toeplitz", "gradient-music", 1),
        ("toeplitz", "gradient-music", 2),
        ("toeplitz", "alt-proj", 0),
        ("toeplitz", "alt-proj", 1),
        ("toeplitz", "alt-proj", 2),
        ("hankel", "gradient-music", 0),
        ("hankel", "gradient-music", 1),
        ("hankel", "alt-proj", 0),
        ("hankel", "alt-proj", 1),
        ("subspace", "gradient-music", 0),
        ("subspace", "gradient-music", 1),
    ]
    threaded = spectraltools.run_bench(small_specs, threads=4)
    assert without_time(threaded.records) == without_time(serial.records)


def test_run_bench_input_validation(small_specs):
    with pytest.raises(TypeError):
        spectraltools.run_bench(["not a spec"])
    with pytest.raises(TypeError):
        spectraltools.run_bench(small_specs, threads=2.0)
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.run_bench(small_specs, threads=0)


def test_run_bench_accepts_single_spec_and_method(small_specs):
    report = spectraltools.run_bench(small_specs[0], "alt-proj")
    assert [r.method for r in report.records] == ["alt-proj"] * 3


def test_empty_bench():
    report = spectraltools.run_bench([])
    assert report.records == []
    assert report.to_frame().columns == spectraltools.CSV_COLUMNS
    assert report.summary().height == 0
    assert report.to_markdown().startswith("RNG: ")


def test_csv_roundtrip(small_specs, tmp_path):
    report = spectraltools.run_bench(small_specs)
    path = tmp_path / "bench.csv"
    report.write_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == ",".join(spectraltools.CSV_COLUMNS)
    assert spectraltools.read_csv(path) == report.records


def test_records_from_frame_requires_columns():
    frame = pl.DataFrame({"method": ["alt-proj"]})
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.records_from_frame(frame)


def test_record_rejects_negative_error():
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.TrialRecord(
            method="alt-proj",
            kind="toeplitz",
            n=10,
            r=1,
            beta=4.0,
            sigma=0.1,
            trial=0,
            seed=1,
            rel_error_fro=-1.0,
            rel_error_spec=None,
            sin_theta_fro=None,
            time_sec=0.0,
            eps_rank_1e6=None,
            eps_rank_1e2=None,
        )


def test_summary_and_markdown(small_specs, tmp_path):
    report = spectraltools.run_bench(small_specs)
    summary = report.summary()
    assert summary.height == 5
    assert summary.get_column("trials").to_list() == [2, 3, 2, 2, 3]
    assert set(summary.get_column("failures").to_list()) == {0}
    markdown = report.to_markdown()
    assert markdown.startswith(f"RNG: {spectraltools.RNG_NAME}")
    assert "### gradient-music (toeplitz)" in markdown
    assert "### alt-proj (hankel)" in markdown
    assert "Median 1e-6-rank" in markdown
    assert "Average sin-theta (F)" in markdown
    assert "(n, r) = (40, 2)" in markdown
    path = tmp_path / "bench.md"
    report.write_markdown(path)
    assert path.read_text() == markdown


def test_presets_to_specs():
    specs, methods = spectraltools.presets_to_specs("table1", trials=5, master_seed=1)
    assert [(s.n, s.r) for s in specs] == [(200, 20), (500, 50), (1000, 100)]
    assert all(s.beta == 4 and s.sigma == 0.1 and s.trials == 5 for s in specs)
    assert methods == ["gradient-music", "alt-proj"]
    specs, _ = spectraltools.presets_to_specs("table2")
    assert [(s.n, s.r, s.beta, s.sigma) for s in specs] == [
        (200, 40, 2, 1),
        (500, 100, 2, 1),
        (1000, 200, 2, 1),
    ]
    with pytest.raises(spectraltools.InvalidArgumentError):
        spectraltools.presets_to_specs("table3")
    with pytest.raises(TypeError):
        spectraltools.presets_to_specs(1)


def test_csv_schema_matches_columns():
    assert list(CSV_SCHEMA) == spectraltools.CSV_COLUMNS


def cell_records(report, method):
    return [r for r in report.records if r.method == method]


@pytest.mark.slow
def test_first_experiment_cell():
    """
    (n, r) = (200, 20), beta = 4, sigma = 0.1: both
    methods land in [0.002, 0.02]; Gradient-MUSIC output
    has rank 20 while the stalled alternating projection
    iterate keeps a long tail of small singular values.
    """
    spec = spectraltools.ProblemSpec(n=200, r=20, beta=4, sigma=0.1, master_seed=2025)
    report = spectraltools.run_bench(spec)
    for method in ("gradient-music", "alt-proj"):
        errors = [r.rel_error_fro for r in cell_records(report, method)]
        assert 0.002 <= statistics.mean(errors) <= 0.02
    assert all(r.eps_rank_1e6 == 20 for r in cell_records(report, "gradient-music"))
    alt_ranks = [r.eps_rank_1e6 for r in cell_records(report, "alt-proj")]
    assert statistics.median(alt_ranks) > 2 * 20


@pytest.mark.slow
def test_second_experiment_cell():
    spec = spectraltools.ProblemSpec(n=200, r=40, beta=2, sigma=1.0, master_seed=2025)
    report = spectraltools.run_bench(spec)
    for method in ("gradient-music", "alt-proj"):
        errors = [r.rel_error_fro for r in cell_records(report, method)]
        assert 0.02 <= statistics.mean(errors) <= 0.20
    alt = cell_records(report, "alt-proj")
    assert statistics.median(r.eps_rank_1e2 for r in alt) >= 40
    assert statistics.median(r.eps_rank_1e6 for r in alt) > 40


@pytest.mark.slow
@pytest.mark.parametrize("preset", ["scaling-toeplitz", "scaling-subspace"])
def test_error_rate_holds_across_n(preset):
    specs, methods = spectraltools.presets_to_specs(preset, master_seed=2025)
    report = spectraltools.run_bench(specs, methods)
    assert report.scaling_spread()["gradient-music"] <= 5


@pytest.mark.slow
def test_gradient_music_outpaces_alternating_projection():
    spec = spectraltools.ProblemSpec(n=500, r=50, beta=4, sigma=0.1, trials=3, master_seed=2025)
    report = spectraltools.run_bench(spec)
    gm = sum(r.time_sec for r in cell_records(report, "gradient-music"))
    alt = sum(r.time_sec for r in cell_records(report, "alt-proj"))
    assert gm <= 0.5 * alt
