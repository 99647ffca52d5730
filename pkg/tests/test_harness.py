"""harness 모듈의 시행 실행, 스윕 계획, 결과 파일 저장을 테스트합니다."""

import json
import pickle
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from coexistence_sim import harness
from coexistence_sim.customerror import ExperimentError, InvalidConfigError, TrialError
from coexistence_sim.harness import (
    CSV_SCHEMA_VERSION,
    NO_SWEEP,
    ExperimentPlan,
    fixed_placement,
    parse_sweep,
    resolve_axis,
    run_experiment,
    run_trial,
)
from coexistence_sim.config import NetworkConfig
from coexistence_sim.metrics import CSV_COLUMNS, ROC_COLUMNS

DATA_DIR = Path(__file__).parent / "data"
CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def test_parse_sweep():
    assert parse_sweep("snr_e=-20,30") == ("snr_e", ["-20", "30"])
    assert parse_sweep("L = 8, 16,") == ("L", ["8", "16"])
    with pytest.raises(InvalidConfigError):
        parse_sweep("snr_e")


@pytest.mark.parametrize(
    "axis, field",
    [("snr_e", "snr_embb_db"), ("snr_n", "snr_mtd_db"), ("eps", "epsilon"), ("M", "antennas")],
)
def test_resolve_axis(axis, field):
    assert resolve_axis(axis) == field
    assert resolve_axis(field) == field


def test_resolve_axis_rejects_unknown():
    with pytest.raises(InvalidConfigError):
        resolve_axis("bandwidth")


def test_plan_points_convert_values(tiny_config):
    plan = ExperimentPlan(config=tiny_config, sweep_var="snr_e", values=["-20", "30"])
    points = plan.points()
    assert [value for value, _ in points] == [-20.0, 30.0]
    assert points[1][1].snr_embb_db == 30.0
    assert points[1][1].N == tiny_config.N


@pytest.mark.parametrize(
    "sweep_var, values",
    [("snr_e", []), ("L", ["12"]), ("E", ["8"]), ("bandwidth", ["1"])],
)
def test_plan_rejects_invalid_sweeps(tiny_config, sweep_var, values):
    with pytest.raises(InvalidConfigError):
        ExperimentPlan(config=tiny_config, sweep_var=sweep_var, values=values)


def test_plan_rejects_zero_jobs(tiny_config):
    with pytest.raises(InvalidConfigError):
        ExperimentPlan(config=tiny_config, jobs=0)


def test_run_trial_is_deterministic(tiny_config, tiny_codebook):
    first = run_trial(tiny_config, tiny_codebook, 3)
    second = run_trial(tiny_config, tiny_codebook, 3)
    np.testing.assert_array_equal(first.alpha_seq, second.alpha_seq)
    np.testing.assert_array_equal(first.xbar, second.xbar)
    np.testing.assert_array_equal(first.Hhat, second.Hhat)
    other = run_trial(tiny_config, tiny_codebook, 4)
    assert not np.array_equal(first.Hhat, other.Hhat)


def test_embb_outputs_do_not_depend_on_solver(tiny_config, tiny_codebook):
    greedy = run_trial(tiny_config, tiny_codebook, 1)
    bayesian = run_trial(tiny_config.replace(solver="sbl"), tiny_codebook, 1)
    np.testing.assert_array_equal(greedy.alpha_seq, bayesian.alpha_seq)
    np.testing.assert_array_equal(greedy.Hhat, bayesian.Hhat)
    np.testing.assert_array_equal(greedy.sinr, bayesian.sinr)
    np.testing.assert_array_equal(greedy.decoded_mask, bayesian.decoded_mask)
    assert greedy.nmse_embb == bayesian.nmse_embb


def test_trial_output_shapes(tiny_config, tiny_codebook):
    output = run_trial(tiny_config, tiny_codebook, 0)
    output.validate()
    assert output.xbar.shape == (tiny_config.n_sequences,)
    assert output.decoded_mask.shape == (tiny_config.E,)
    assert 0.0 <= output.p_out <= 1.0
    assert output.solver["solver"] == "somp"


def test_frozen_placement_is_shared(tiny_config):
    first = fixed_placement(tiny_config)
    second = fixed_placement(tiny_config)
    np.testing.assert_array_equal(first.gamma, second.gamma)


def test_regenerated_codebook_still_runs(tiny_config):
    output = run_trial(tiny_config.replace(regenerate_codebook=True), None, 2)
    assert output.xbar.shape == (tiny_config.n_sequences,)


def test_trial_error_survives_pickling():
    error = pickle.loads(pickle.dumps(TrialError("특이 행렬", 7)))
    assert error.trial_index == 7
    assert "trial 7" in str(error)


def test_run_experiment_writes_schema(tmp_path, tiny_config):
    plan = ExperimentPlan(config=tiny_config, out_dir=tmp_path, plot=True)
    result = run_experiment(plan)

    metrics = pd.read_csv(result.metrics_path)
    assert list(metrics.columns) == CSV_COLUMNS
    assert set(metrics["metric"]) == {
        "pmd", "pfa", "nmse_embb", "nmse_mtd", "p_out",
        "pmd@0.01", "pfa@0.01", "pmd@0.001", "pfa@0.001",
    }
    assert (metrics["sweep_var"] == NO_SWEEP).all()
    assert metrics["trials"].max() == tiny_config.trials
    probabilities = metrics[metrics["metric"].str.startswith(("pmd", "pfa", "p_out"))]
    assert probabilities["mean"].dropna().between(0, 1).all()

    roc = pd.read_csv(result.roc_path)
    assert list(roc.columns) == ROC_COLUMNS
    assert roc["pfa"].between(0, 1).all()

    sidecar = json.loads(result.sidecar_path.read_text(encoding="utf-8"))
    assert sidecar["schema_version"] == CSV_SCHEMA_VERSION
    assert sidecar["columns"]["metrics"] == CSV_COLUMNS
    assert sidecar["config"]["n_mtds"] == tiny_config.N
    assert sidecar["failures"] == 0
    assert "solver_time_s" in sidecar

    assert sorted(path.name for path in result.figures) == ["nmse.png", "pmd.png", "roc.png"]
    assert all(path.stat().st_size > 0 for path in result.figures)


def test_single_trial_leaves_interval_empty(tmp_path, tiny_config):
    plan = ExperimentPlan(config=tiny_config.replace(trials=1), out_dir=tmp_path)
    metrics = pd.read_csv(run_experiment(plan).metrics_path)
    assert metrics["ci95"].isna().all()


def test_sweep_writes_one_block_per_value(tmp_path, tiny_config):
    plan = ExperimentPlan(
        config=tiny_config.replace(trials=3),
        sweep_var="snr_e",
        values=["-10", "30"],
        out_dir=tmp_path,
    )
    result = run_experiment(plan)
    metrics = pd.read_csv(result.metrics_path)
    assert sorted(metrics["value"].unique()) == [-10.0, 30.0]
    assert (metrics["sweep_var"] == "snr_e").all()
    assert len(result.reports) == 2


def test_same_seed_gives_identical_csv(tmp_path, tiny_config):
    config = tiny_config.replace(trials=3)
    first = run_experiment(ExperimentPlan(config=config, out_dir=tmp_path / "a"))
    second = run_experiment(ExperimentPlan(config=config, out_dir=tmp_path / "b"))
    assert first.metrics_path.read_bytes() == second.metrics_path.read_bytes()
    assert first.roc_path.read_bytes() == second.roc_path.read_bytes()


def test_failed_trials_abort_experiment(tmp_path, tiny_config, monkeypatch):
    def broken(*args, **kwargs):
        raise np.linalg.LinAlgError("분해 실패")

    monkeypatch.setattr(harness, "decode", broken)
    plan = ExperimentPlan(config=tiny_config.replace(trials=2), out_dir=tmp_path)
    with pytest.raises(ExperimentError):
        run_experiment(plan)


@pytest.mark.slow
def test_parallel_run_matches_serial(tmp_path, tiny_config):
    config = tiny_config.replace(trials=8)
    serial = run_experiment(ExperimentPlan(config=config, out_dir=tmp_path / "serial"))
    parallel = run_experiment(ExperimentPlan(config=config, out_dir=tmp_path / "parallel", jobs=2))
    assert serial.metrics_path.read_bytes() == parallel.metrics_path.read_bytes()
    assert serial.roc_path.read_bytes() == parallel.roc_path.read_bytes()


def test_pilot_length_sweep_survives_unreachable_chi(tmp_path, tiny_config):
    config = tiny_config.replace(coherence_len=128, chi=1e-6, trials=2)
    plan = ExperimentPlan(
        config=config, sweep_var="L", values=["8", "16", "32", "64"], out_dir=tmp_path
    )
    result = run_experiment(plan)
    metrics = pd.read_csv(result.metrics_path)
    assert sorted(metrics["value"].unique()) == [8, 16, 32, 64]
    assert result.failures == 0
    assert len(result.reports) == 4


def test_output_files_match_golden_schema(tmp_path, tiny_config):
    plan = ExperimentPlan(
        config=tiny_config.replace(trials=3),
        sweep_var="snr_e",
        values=["-10", "30"],
        out_dir=tmp_path,
    )
    result = run_experiment(plan)
    golden_metrics = DATA_DIR / "metrics_golden.csv"
    golden_roc = DATA_DIR / "roc_golden.csv"

    def header(path):
        return path.read_text(encoding="utf-8").splitlines()[0]

    assert header(result.metrics_path) == header(golden_metrics)
    assert header(result.roc_path) == header(golden_roc)
    keys = ["sweep_var", "value", "metric"]
    pd.testing.assert_frame_equal(
        pd.read_csv(result.metrics_path)[keys],
        pd.read_csv(golden_metrics)[keys],
        check_dtype=False,
    )
    roc = pd.read_csv(result.roc_path)
    assert roc.groupby("value").size().index.tolist() == [-10, 30]


def _desk(**changes):
    """eMBB 체인만 보는 추세 테스트용 축소 시나리오. 복원은 한 번의 SOMP 단계로 줄입니다."""
    settings = dict(solver="somp", k_max=1, t_max=1, shared_messages=True, pool_cap=64)
    settings.update(changes)
    return NetworkConfig.from_file(CONFIG_DIR / "desk.conf").replace(**settings)


def _report(config):
    outputs, failures = harness.run_point(config)
    assert not failures
    return harness.aggregate(outputs, config)


@pytest.mark.slow
def test_channel_estimation_error_falls_with_snr_and_pilot_length():
    by_snr = [_report(_desk(snr_embb_db=snr)) for snr in (-10, 0, 10, 20, 30)]
    by_pilot = [_report(_desk(snr_embb_db=0, pilot_len=L)) for L in (8, 16, 32, 64)]
    for reports in (by_snr, by_pilot):
        values = [report.nmse_embb for report in reports]
        assert np.all(np.diff(values) < 0)
        first, last = reports[0], reports[-1]
        assert first.nmse_embb - first.ci["nmse_embb"] > last.nmse_embb + last.ci["nmse_embb"]


def _separation(high, low, metric):
    return (high.values[metric] - high.ci[metric]) - (low.values[metric] + low.ci[metric])


@pytest.mark.slow
def test_outage_grows_with_mtd_activity():
    gaps = []
    for snr in range(8, 21):
        quiet = _report(_desk(snr_embb_db=snr, epsilon=0.01, trials=500))
        busy = _report(_desk(snr_embb_db=snr, epsilon=0.1, trials=500))
        # 같은 시드에서 ε=0.1의 활성 집합은 ε=0.01의 활성 집합을 포함합니다.
        assert busy.p_out >= quiet.p_out
        gaps.append(_separation(busy, quiet, "p_out"))
    assert max(gaps) > 0


@pytest.mark.slow
def test_outage_grows_with_pilot_length():
    gaps = []
    for snr in range(8, 23):
        short = _report(_desk(snr_embb_db=snr, epsilon=0.1, coherence_len=256, pilot_len=16, trials=500))
        long = _report(_desk(snr_embb_db=snr, epsilon=0.1, coherence_len=256, pilot_len=128, trials=500))
        assert long.p_out >= short.p_out - (long.ci["p_out"] + short.ci["p_out"])
        gaps.append(_separation(long, short, "p_out"))
    assert max(gaps) > 0


def _detection(**changes):
    settings = dict(
        n_mtds=100,
        coherence_len=64,
        pilot_len=16,
        epsilon=0.05,
        solver="sbl",
        t_max=50,
        trials=100,
        shared_messages=True,
        pool_cap=64,
    )
    settings.update(changes)
    return _report(NetworkConfig.from_file(CONFIG_DIR / "desk.conf").replace(**settings))


@pytest.mark.slow
def test_undecoded_embb_degrades_detection_and_cancellation_restores_it():
    quiet = _detection(snr_embb_db=-60, bits=16)
    cancelled = _detection(snr_embb_db=30, bits=16)
    interfering = _detection(snr_embb_db=30, bits=100_000)
    assert cancelled.p_out == 0.0
    assert interfering.p_out == 1.0
    assert _separation(interfering, cancelled, "pmd@0.01") > 0
    assert _separation(interfering, quiet, "pmd@0.01") > 0


@pytest.mark.slow
@pytest.mark.parametrize("solver", ["sbl", "amp"])
def test_missed_detection_falls_with_antenna_count(solver):
    reports = [
        _detection(
            solver=solver,
            antennas=antennas,
            coherence_len=128,
            pilot_len=32,
            epsilon=0.1,
            snr_mtd_db=0,
            snr_embb_db=-60,
            t_max=200,
        )
        for antennas in (8, 16, 32)
    ]
    pmd = [report.values["pmd@0.001"] for report in reports]
    ci = [report.ci["pmd@0.001"] for report in reports]
    for index in range(2):
        assert pmd[index + 1] <= pmd[index] + ci[index] + ci[index + 1]
    assert _separation(reports[0], reports[-1], "pmd@0.001") > 0
