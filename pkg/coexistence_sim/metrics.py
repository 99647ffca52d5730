"""Monte-Carlo 시행 결과를 지표로 집계하는 함수들을 정의합니다.

시퀀스 단위 PMD/PFA, ROC, 채널 추정 NMSE, eMBB 불능 확률과
정규 근사 95% 신뢰 구간을 계산합니다.

classes:
    - MetricsReport: 한 실험 지점의 집계 결과를 담는 클래스
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .base import BaseModel
from .customerror import DimensionMismatchError, EmptyPoolError, InvalidConfigError
from .validation import validate_int, validate_probability

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["sweep_var", "value", "metric", "mean", "ci95", "trials"]
ROC_COLUMNS = ["sweep_var", "value", "threshold", "pmd", "pfa"]

# 정규 근사 양측 95% 분위수
Z_95 = 1.959963984540054


def pmd_pfa(
    alpha_true: np.ndarray, alpha_hat: np.ndarray, K_count: Optional[int] = None
) -> Tuple[float, float]:
    """시퀀스 단위 미검출 확률과 오경보 확률을 계산합니다.

    pmd = Σ max(0, α_i − α̂_i)/|K|, pfa = Σ max(0, α̂_i − α_i)/(NQ − |K|).
    같은 장치의 다른 메시지를 감지하면 미검출 하나와 오경보 하나로 셉니다.
    |K| = 0 이면 pmd는 nan, NQ = |K| 이면 pfa는 nan입니다.

    Args:
        alpha_true (np.ndarray): (NQ,) 전송된 시퀀스
        alpha_hat (np.ndarray): (NQ,) 감지된 시퀀스
        K_count (Optional[int]): 전송된 시퀀스 수. None이면 alpha_true에서 셉니다.

    Returns:
        Tuple[float, float]: (pmd, pfa)
    """
    truth = np.asarray(alpha_true, dtype=bool)
    hat = np.asarray(alpha_hat, dtype=bool)
    if truth.shape != hat.shape:
        raise DimensionMismatchError(f"α {truth.shape}와 α̂ {hat.shape}의 길이가 다릅니다.")
    K = int(np.count_nonzero(truth)) if K_count is None else int(K_count)
    misses = int(np.count_nonzero(truth & ~hat))
    false_alarms = int(np.count_nonzero(hat & ~truth))
    pmd = misses / K if K > 0 else math.nan
    inactive = truth.size - K
    if inactive <= 0:
        logger.warning("모든 시퀀스가 전송되어 PFA를 정의할 수 없으므로 제외합니다.")
        pfa = math.nan
    else:
        pfa = false_alarms / inactive
    return pmd, pfa


class _DetectionBatch:
    """여러 시행의 점수를 장치 블록으로 묶어 문턱별 PMD/PFA를 빠르게 계산합니다."""

    def __init__(self, scores: np.ndarray, truths: np.ndarray, Q: int):
        """(시행 수, NQ) 점수와 정답을 장치 블록으로 나눕니다."""
        if scores.shape != truths.shape or scores.ndim != 2:
            raise DimensionMismatchError("점수와 정답은 같은 (시행 수, NQ) 모양이어야 합니다.")
        validate_int(Q, minimum=1)
        blocks = scores.reshape(scores.shape[0], -1, Q)
        best = np.argmax(blocks, axis=2)
        self.device_max = np.take_along_axis(blocks, best[:, :, None], axis=2)[:, :, 0]
        self.onehot = np.eye(Q, dtype=bool)[best]
        self.truths = truths.reshape(blocks.shape).astype(bool)
        K = self.truths.sum(axis=(1, 2))
        n_seq = scores.shape[1]
        self.pmd_denominator = np.where(K > 0, K, np.nan)
        self.pfa_denominator = np.where(n_seq - K > 0, n_seq - K, np.nan)
        if np.any(n_seq - K <= 0):
            logger.warning("모든 시퀀스가 전송된 시행 %d개를 PFA에서 제외합니다.", int(np.sum(n_seq - K <= 0)))

    def per_trial(self, zeta: float) -> Tuple[np.ndarray, np.ndarray]:
        """문턱 ζ에서 시행별 (pmd, pfa)를 반환합니다."""
        hat = self.onehot & (self.device_max >= zeta)[:, :, None]
        misses = np.sum(self.truths & ~hat, axis=(1, 2))
        false_alarms = np.sum(hat & ~self.truths, axis=(1, 2))
        return misses / self.pmd_denominator, false_alarms / self.pfa_denominator

    def mean(self, zeta: float) -> Tuple[float, float]:
        """문턱 ζ에서 시행 평균 (pmd, pfa)를 반환합니다."""
        pmd, pfa = self.per_trial(zeta)
        return _nanmean(pmd), _nanmean(pfa)


def _nanmean(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    if values.size == 0 or np.all(np.isnan(values)):
        return math.nan
    return float(np.nanmean(values))


def _stack(rows: Sequence[np.ndarray]) -> np.ndarray:
    if len(rows) == 0:
        raise EmptyPoolError("점수가 하나도 없어 ROC를 계산할 수 없습니다.")
    return np.vstack([np.asarray(row, dtype=float).reshape(1, -1) for row in rows])


def roc_curve(
    scores_per_trial: Sequence[np.ndarray],
    truth_per_trial: Sequence[np.ndarray],
    grid_size: int,
    Q: int,
) -> pd.DataFrame:
    """문턱 ζ를 바꿔 가며 ROC를 계산합니다.

    ζ 격자는 모든 시행의 장치별 최대 점수를 모은 분위수와 양 끝값 0, +∞ 입니다.
    각 ζ에서 detect_sequences와 같은 규칙으로 감지한 뒤 시행 평균 pmd/pfa를 구합니다.
    결과는 pfa 오름차순으로 정렬하고, pmd가 pfa에 대해 증가하지 않도록 정리합니다.

    Args:
        scores_per_trial (Sequence[np.ndarray]): 시행별 (NQ,) 행 노름 점수
        truth_per_trial (Sequence[np.ndarray]): 시행별 (NQ,) 전송 지시자
        grid_size (int): 분위수 격자 크기
        Q (int): 장치당 메시지 수

    Returns:
        pd.DataFrame: threshold, pmd, pfa 열을 가진 표

    Raises:
        EmptyPoolError: 점수가 없을 때
    """
    validate_int(grid_size, minimum=1)
    batch = _DetectionBatch(_stack(scores_per_trial), _stack(truth_per_trial), Q)
    pooled = batch.device_max.reshape(-1)
    if pooled.size == 0:
        raise EmptyPoolError("장치가 없어 ROC를 계산할 수 없습니다.")
    grid = np.quantile(pooled, np.linspace(0.0, 1.0, grid_size), method="higher")
    thresholds = np.unique(np.concatenate([[0.0], grid, [np.inf]]))
    points = [(zeta,) + batch.mean(zeta) for zeta in thresholds]
    roc = pd.DataFrame(points, columns=["threshold", "pmd", "pfa"])
    roc = roc.sort_values(["pfa", "threshold"], ascending=[True, False], kind="mergesort")
    roc["pmd"] = np.minimum.accumulate(roc["pmd"].fillna(1.0).to_numpy())
    return roc.reset_index(drop=True)


def calibrate_threshold(
    scores_per_trial: Sequence[np.ndarray],
    truth_per_trial: Sequence[np.ndarray],
    pfa_target: float,
) -> float:
    """비활성 행 점수를 모은 (1 − PFA 목표) 분위수를 문턱 ζ로 반환합니다.

    비활성 행이 없으면 +∞를 반환합니다.
    """
    validate_probability(pfa_target)
    scores = _stack(scores_per_trial)
    truths = _stack(truth_per_trial).astype(bool)
    inactive = scores[~truths]
    if inactive.size == 0:
        return math.inf
    return float(np.quantile(inactive, 1.0 - pfa_target, method="higher"))


def pmd_at_pfa(
    scores_per_trial: Sequence[np.ndarray],
    truth_per_trial: Sequence[np.ndarray],
    Q: int,
    pfa_target: float,
) -> Tuple[float, float, float]:
    """PFA 목표에 맞춘 문턱에서 (pmd, 실제 pfa, ζ)를 반환합니다."""
    zeta = calibrate_threshold(scores_per_trial, truth_per_trial, pfa_target)
    batch = _DetectionBatch(_stack(scores_per_trial), _stack(truth_per_trial), Q)
    pmd, pfa = batch.mean(zeta)
    return pmd, pfa, zeta


def nmse_terms(true_vecs: np.ndarray, est_vecs: np.ndarray) -> Tuple[np.ndarray, int]:
    """행별 상대 오차 ||h − ĥ||²/||h||²와 제외된 0 노름 행 수를 반환합니다."""
    truth = np.atleast_2d(np.asarray(true_vecs))
    estimate = np.atleast_2d(np.asarray(est_vecs))
    if truth.shape != estimate.shape:
        raise DimensionMismatchError(f"정답 {truth.shape}와 추정 {estimate.shape}의 모양이 다릅니다.")
    power = np.sum(np.abs(truth) ** 2, axis=1)
    keep = power > 0
    error = np.sum(np.abs(truth - estimate) ** 2, axis=1)
    return error[keep] / power[keep], int(np.count_nonzero(~keep))


def nmse(true_vecs: np.ndarray, est_vecs: np.ndarray) -> float:
    """장치 평균 NMSE를 계산합니다. 0 노름 정답 행은 제외하고 그 수를 경고로 남깁니다.

    Examples:
        >>> h = np.ones((2, 3))
        >>> nmse(h, np.zeros((2, 3)))
        1.0
    """
    ratios, excluded = nmse_terms(true_vecs, est_vecs)
    if excluded:
        logger.warning("정답 노름이 0인 행 %d개를 NMSE에서 제외했습니다.", excluded)
    return float(np.mean(ratios)) if ratios.size else math.nan


def outage_probability(decoded_masks: Sequence[np.ndarray]) -> float:
    """복호에 실패한 (시행, 장치) 쌍의 비율을 반환합니다. 장치가 없으면 nan입니다."""
    masks = [np.asarray(mask, dtype=bool).reshape(-1) for mask in decoded_masks]
    pooled = np.concatenate(masks) if masks else np.zeros(0, dtype=bool)
    if pooled.size == 0:
        return math.nan
    return float(np.mean(~pooled))


def ci95(samples: Sequence[float]) -> Optional[float]:
    """시행 표본 평균의 정규 근사 95% 신뢰 구간 반폭을 반환합니다.

    유효 표본이 2개 미만이면 None입니다.
    """
    values = np.asarray(samples, dtype=float)
    values = values[~np.isnan(values)]
    if values.size < 2:
        return None
    return float(Z_95 * np.std(values, ddof=1) / np.sqrt(values.size))


def format_pfa(target: float) -> str:
    """PFA 목표를 지표 이름에 쓰는 문자열로 바꿉니다 (예: 0.01 → '0.01')."""
    return f"{target:g}"


@dataclass
class MetricsReport(BaseModel):
    """한 실험 지점의 집계 지표입니다.

    Attributes:
        pmd (float): 문턱 zeta에서의 평균 미검출 확률
        pfa (float): 문턱 zeta에서의 평균 오경보 확률
        roc (pd.DataFrame): threshold, pmd, pfa 표
        nmse_embb (float): eMBB 채널 추정 NMSE
        nmse_mtd (float): 전송된 시퀀스 행의 MTD 유효 채널 NMSE
        p_out (float): eMBB 불능 확률
        trials (int): 시행 수
        zeta (float): pmd/pfa 계산에 쓴 문턱
        extra (Dict[str, float]): pmd@<pfa>, pfa@<pfa> 추가 지표
        ci (Dict[str, Optional[float]]): 지표별 95% 신뢰 구간 반폭
        counts (Dict[str, int]): 지표별 유효 시행 수
        solver_time_s (float): 시행 평균 복원 알고리즘 실행 시간 (초). CSV에는 쓰지 않습니다.
    """

    pmd: float
    pfa: float
    roc: pd.DataFrame
    nmse_embb: float
    nmse_mtd: float
    p_out: float
    trials: int
    zeta: float = 0.0
    extra: Dict[str, float] = field(default_factory=dict)
    ci: Dict[str, Optional[float]] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    solver_time_s: float = math.nan

    @property
    def values(self) -> Dict[str, float]:
        """지표 이름과 평균값을 CSV 순서로 반환합니다."""
        out = {
            "pmd": self.pmd,
            "pfa": self.pfa,
            "nmse_embb": self.nmse_embb,
            "nmse_mtd": self.nmse_mtd,
            "p_out": self.p_out,
        }
        out.update(self.extra)
        return out

    def validate(self):
        """확률 지표가 [0, 1] 안에 있는지 검사합니다."""
        probabilities = [self.pmd, self.pfa, self.p_out]
        probabilities += [value for key, value in self.extra.items() if "@" in key]
        for value in probabilities:
            if not math.isnan(value) and not 0.0 <= value <= 1.0:
                raise InvalidConfigError(f"확률 지표가 [0, 1]을 벗어났습니다: {value}")
        roc = self.roc[["pmd", "pfa"]].to_numpy()
        if roc.size and (np.nanmin(roc) < 0 or np.nanmax(roc) > 1):
            raise InvalidConfigError("ROC 값이 [0, 1]을 벗어났습니다.")

    def rows(self, sweep_var: str, value) -> List[Dict]:
        """metrics.csv 행 목록으로 변환합니다."""
        return [
            {
                "sweep_var": sweep_var,
                "value": value,
                "metric": metric,
                "mean": mean,
                "ci95": self.ci.get(metric),
                "trials": self.counts.get(metric, self.trials),
            }
            for metric, mean in self.values.items()
        ]

    def roc_rows(self, sweep_var: str, value) -> pd.DataFrame:
        """roc.csv 행으로 변환합니다."""
        roc = self.roc.copy()
        roc.insert(0, "value", value)
        roc.insert(0, "sweep_var", sweep_var)
        return roc[ROC_COLUMNS]

    def render(self) -> Dict:
        """지표 요약을 dict로 변환합니다."""
        return self.remove_none_item(
            {
                **{key: self.to_builtin(val) for key, val in self.values.items()},
                "trials": self.trials,
                "zeta": self.zeta,
                "solver_time_s": self.solver_time_s,
            }
        )


def summarize(
    per_trial: pd.DataFrame,
    scores_per_trial: Sequence[np.ndarray],
    truth_per_trial: Sequence[np.ndarray],
    Q: int,
    pfa_targets: Sequence[float],
    grid_size: int,
    zeta: Optional[float] = None,
) -> MetricsReport:
    """시행별 결과를 하나의 MetricsReport로 모읍니다.

    pmd/pfa는 zeta에서, zeta가 None이면 첫 번째 PFA 목표에 맞춘 문턱에서 계산합니다.
    각 PFA 목표마다 pmd@<pfa>와 실제 pfa@<pfa>를 추가로 보고합니다.

    Args:
        per_trial (pd.DataFrame): 시행별 nmse_embb, nmse_mtd, p_out 열.
            solver_time_s 열이 있으면 평균 실행 시간으로만 보고합니다.
        scores_per_trial (Sequence[np.ndarray]): 시행별 (NQ,) 점수
        truth_per_trial (Sequence[np.ndarray]): 시행별 (NQ,) 전송 지시자
        Q (int): 장치당 메시지 수
        pfa_targets (Sequence[float]): PFA 목표값
        grid_size (int): ROC 격자 크기
        zeta (Optional[float]): 고정 문턱

    Returns:
        MetricsReport: 집계 결과
    """
    batch = _DetectionBatch(_stack(scores_per_trial), _stack(truth_per_trial), Q)
    if zeta is None and pfa_targets:
        zeta = calibrate_threshold(scores_per_trial, truth_per_trial, pfa_targets[0])
    elif zeta is None:
        zeta = 0.0
    timing = per_trial.get("solver_time_s")
    samples = per_trial.drop(columns=["solver_time_s"], errors="ignore")
    samples["pmd"], samples["pfa"] = batch.per_trial(zeta)
    extra_samples = {}
    for target in pfa_targets:
        threshold = calibrate_threshold(scores_per_trial, truth_per_trial, target)
        pmd, pfa = batch.per_trial(threshold)
        extra_samples[f"pmd@{format_pfa(target)}"] = pmd
        extra_samples[f"pfa@{format_pfa(target)}"] = pfa
    for name, values in extra_samples.items():
        samples[name] = values

    means = samples.mean(skipna=True)
    counts = samples.notna().sum()
    ci = {name: ci95(samples[name]) for name in samples.columns}
    report = MetricsReport(
        pmd=float(means["pmd"]),
        pfa=float(means["pfa"]),
        roc=roc_curve(scores_per_trial, truth_per_trial, grid_size, Q),
        nmse_embb=float(means.get("nmse_embb", math.nan)),
        nmse_mtd=float(means.get("nmse_mtd", math.nan)),
        p_out=float(means.get("p_out", math.nan)),
        trials=len(samples),
        zeta=float(zeta),
        extra={name: float(means[name]) for name in extra_samples},
        ci=ci,
        counts={name: int(count) for name, count in counts.items()},
        solver_time_s=math.nan if timing is None else _nanmean(timing.to_numpy()),
    )
    report.validate()
    return report
