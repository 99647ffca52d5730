"""cli 모듈의 하위 명령과 종료 코드를 테스트합니다."""

import numpy as np
import pandas as pd
import pytest

from coexistence_sim.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, OUT_DIR_ENV, main
from coexistence_sim.metrics import CSV_COLUMNS
from coexistence_sim.waveform import load_codebook


@pytest.fixture
def config_file(tmp_path, tiny_config):
    path = tmp_path / "tiny.conf"
    path.write_text(tiny_config.replace(trials=2).to_text(), encoding="utf-8")
    return path


def test_codebook_command(tmp_path, config_file, tiny_config, capsys):
    assert main(["codebook", "--config", str(config_file), "--out", str(tmp_path / "cb")]) == EXIT_OK
    written = tmp_path / "cb.npz"
    assert capsys.readouterr().out.strip() == str(written)
    codebook = load_codebook(written)
    assert codebook.S.shape == (tiny_config.T, tiny_config.n_sequences)


def test_simulate_uses_environment_out_dir(tmp_path, config_file, monkeypatch, capsys):
    out_dir = tmp_path / "env-results"
    monkeypatch.setenv(OUT_DIR_ENV, str(out_dir))
    code = main(["simulate", "--config", str(config_file), "--sweep", "snr_n=0,10", "--solver", "somp"])
    assert code == EXIT_OK
    printed = capsys.readouterr().out.split()
    assert printed[:2] == [str(out_dir / "metrics.csv"), str(out_dir / "roc.csv")]
    metrics = pd.read_csv(out_dir / "metrics.csv")
    assert list(metrics.columns) == CSV_COLUMNS
    np.testing.assert_array_equal(sorted(metrics["value"].unique()), [0.0, 10.0])


def test_simulate_overrides_trials_and_plots(tmp_path, config_file):
    out_dir = tmp_path / "run"
    code = main(
        ["simulate", "--config", str(config_file), "--out", str(out_dir), "--trials", "1", "--plot"]
    )
    assert code == EXIT_OK
    assert pd.read_csv(out_dir / "metrics.csv")["trials"].max() == 1
    assert (out_dir / "roc.png").exists()


def test_plot_command(tmp_path, config_file):
    out_dir = tmp_path / "run"
    assert main(["simulate", "--config", str(config_file), "--out", str(out_dir)]) == EXIT_OK
    figure = tmp_path / "roc-figure.png"
    code = main(["plot", "--csv", str(out_dir / "roc.csv"), "--kind", "roc", "--out", str(figure)])
    assert code == EXIT_OK
    assert figure.exists()


def test_invalid_config_is_usage_error(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("pilot_len = 12\n", encoding="utf-8")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == EXIT_USAGE


def test_invalid_sweep_is_usage_error(tmp_path, config_file):
    code = main(["simulate", "--config", str(config_file), "--sweep", "L=", "--out", str(tmp_path)])
    assert code == EXIT_USAGE


def test_missing_config_file_is_failure(tmp_path):
    assert main(["codebook", "--config", str(tmp_path / "none.conf"), "--out", str(tmp_path)]) == EXIT_FAILURE


def test_schema_error_is_usage_error(tmp_path):
    path = tmp_path / "broken.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    assert main(["plot", "--csv", str(path), "--kind", "pmd"]) == EXIT_USAGE


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
