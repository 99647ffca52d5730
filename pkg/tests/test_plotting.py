"""plotting 모듈의 CSV 검사와 그림 저장을 테스트합니다."""

import pandas as pd
import pytest

from coexistence_sim.customerror import SchemaError
from coexistence_sim.plotting import plot


@pytest.fixture
def metrics_csv(tmp_path):
    rows = []
    for value in (-10.0, 0.0, 10.0):
        for metric, mean in (("pmd", 0.3), ("pmd@0.01", 0.4), ("nmse_embb", 0.05), ("nmse_mtd", 0.2)):
            rows.append(
                {
                    "sweep_var": "snr_e",
                    "value": value,
                    "metric": metric,
                    "mean": mean / (1 + abs(value)),
                    "ci95": None if value == 0 else 0.01,
                    "trials": 20,
                }
            )
    path = tmp_path / "metrics.csv"
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


@pytest.fixture
def roc_csv(tmp_path):
    frame = pd.DataFrame(
        {
            "sweep_var": ["snr_e"] * 4 + ["snr_e"] * 4,
            "value": [-10.0] * 4 + [30.0] * 4,
            "threshold": [float("inf"), 2.0, 1.0, 0.0] * 2,
            "pmd": [1.0, 0.5, 0.1, 0.0, 1.0, 0.2, 0.01, 0.0],
            "pfa": [0.0, 0.01, 0.1, 1.0, 0.0, 0.001, 0.05, 1.0],
        }
    )
    path = tmp_path / "roc.csv"
    frame.to_csv(path, index=False)
    return path


def test_default_output_path(metrics_csv):
    out = plot(metrics_csv, "nmse")
    assert out == metrics_csv.with_name("nmse.png")
    assert out.read_bytes().startswith(b"\x89PNG")


@pytest.mark.parametrize("kind", ["nmse", "pmd"])
def test_rerender_is_byte_identical(metrics_csv, tmp_path, kind):
    first = plot(metrics_csv, kind, tmp_path / "first.png")
    second = plot(metrics_csv, kind, tmp_path / "second.png")
    assert first.read_bytes() == second.read_bytes()


def test_roc_figure(roc_csv, tmp_path):
    out = plot(roc_csv, "roc", tmp_path / "curve.png")
    assert out.stat().st_size > 0


def test_missing_columns_raise_schema_error(tmp_path):
    path = tmp_path / "broken.csv"
    pd.DataFrame({"sweep_var": ["snr_e"], "value": [1.0], "mean": [0.1]}).to_csv(path, index=False)
    with pytest.raises(SchemaError, match="metric"):
        plot(path, "nmse")
    with pytest.raises(SchemaError):
        plot(path, "roc")


def test_empty_csv_raises_schema_error(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError):
        plot(path, "pmd")
    header_only = tmp_path / "header.csv"
    header_only.write_text("sweep_var,value,metric,mean,ci95,trials\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        plot(header_only, "pmd")


def test_unknown_kind(metrics_csv):
    with pytest.raises(SchemaError):
        plot(metrics_csv, "sinr")
