"""실험 CSV를 그림 파일로 그리는 함수를 정의합니다.

계산은 하지 않고 CSV에 있는 값만 그립니다. 같은 CSV를 다시 그리면 같은 바이트의 PNG가 나오도록
파일 메타데이터에서 버전 문자열을 뺍니다.
"""

import logging
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from .customerror import SchemaError  # noqa: E402
from .metrics import CSV_COLUMNS, ROC_COLUMNS  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_KINDS = ("roc", "nmse", "pmd")
NMSE_METRICS = ("nmse_embb", "nmse_mtd")


def _read(csv_path: Path, columns) -> pd.DataFrame:
    """CSV를 읽고 필요한 열이 모두 있는지 검사합니다."""
    try:
        frame = pd.read_csv(csv_path, keep_default_na=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise SchemaError(f"CSV를 읽을 수 없습니다: {csv_path} ({exc})") from exc
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise SchemaError(f"{csv_path}에 필요한 열이 없습니다: {', '.join(missing)}")
    if frame.empty:
        raise SchemaError(f"{csv_path}에 데이터 행이 없습니다.")
    return frame


def _label(sweep_var: str, value) -> str:
    return str(sweep_var) if pd.isna(value) else f"{sweep_var}={value}"


def _plot_roc(ax, frame: pd.DataFrame):
    for (sweep_var, value), curve in frame.groupby(["sweep_var", "value"], sort=False, dropna=False):
        curve = curve[(curve["pfa"] > 0) & (curve["pmd"] > 0)].sort_values("pfa")
        ax.loglog(curve["pfa"], curve["pmd"], marker=".", label=_label(sweep_var, value))
    ax.set_xlabel("PFA")
    ax.set_ylabel("PMD")


def _plot_metric(ax, frame: pd.DataFrame, metrics, ylabel: str, log: bool):
    for metric in metrics:
        rows = frame[frame["metric"] == metric].sort_values("value")
        if rows.empty:
            continue
        ci = rows["ci95"].fillna(0.0)
        ax.errorbar(rows["value"], rows["mean"], yerr=ci, marker="o", capsize=3, label=metric)
    if log:
        ax.set_yscale("log")
    ax.set_xlabel(str(frame["sweep_var"].iloc[0]))
    ax.set_ylabel(ylabel)


def plot(
    csv_path: Union[str, Path], figure_kind: str, out_path: Optional[Union[str, Path]] = None
) -> Path:
    """CSV를 읽어 ROC, NMSE, PMD 곡선을 PNG로 저장합니다.

    - roc: roc.csv에서 스윕 값마다 곡선 하나
    - nmse: metrics.csv의 nmse_embb, nmse_mtd를 스윕 값에 대해
    - pmd: metrics.csv의 pmd와 pmd@<pfa> 지표를 스윕 값에 대해

    Args:
        csv_path (Union[str, Path]): 입력 CSV
        figure_kind (str): roc, nmse, pmd 중 하나
        out_path (Optional[Union[str, Path]]): 출력 파일. None이면 CSV 옆에 <kind>.png

    Returns:
        Path: 저장한 그림 파일 경로

    Raises:
        SchemaError: 열이 빠졌거나 형식이 잘못된 CSV일 때
    """
    csv_path = Path(csv_path)
    if figure_kind not in FIGURE_KINDS:
        raise SchemaError(f"그림 종류는 {FIGURE_KINDS} 중 하나여야 합니다: {figure_kind}")
    out_path = Path(out_path) if out_path is not None else csv_path.with_name(f"{figure_kind}.png")

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    try:
        if figure_kind == "roc":
            _plot_roc(ax, _read(csv_path, ROC_COLUMNS))
        else:
            frame = _read(csv_path, CSV_COLUMNS)
            if figure_kind == "nmse":
                _plot_metric(ax, frame, NMSE_METRICS, "NMSE", log=True)
            else:
                names = sorted(name for name in frame["metric"].unique() if str(name).startswith("pmd"))
                _plot_metric(ax, frame, names, "PMD", log=False)
        ax.grid(True, which="both", alpha=0.3)
        if ax.get_legend_handles_labels()[0]:
            ax.legend()
        fig.tight_layout()
        fig.savefig(out_path, dpi=120, metadata={"Software": None})
    finally:
        plt.close(fig)
    logger.info("그림 저장: %s", out_path)
    return out_path
