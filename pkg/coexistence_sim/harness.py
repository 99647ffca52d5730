"""Monte-Carlo 실험을 구성하고 실행하는 모듈입니다.

한 시행은 채널 생성 → 수신 블록 합성 → eMBB 추정/결합/SINR/불능 판정 → SIC →
희소 복원 → 감지 순서로 진행됩니다. 실험은 스윕 축의 각 값마다 코드북을 한 번 만들고
시행들을 작업자 풀에 나누어 실행한 뒤 시행 번호 순서대로 집계합니다.

classes:
    - ExperimentPlan: 기본 설정, 스윕 축과 값, 출력 경로, 병렬도
    - TrialOutput: 한 시행의 정답, 추정, 점수, 복호 결과
    - ExperimentResult: 실험 지점별 MetricsReport와 출력 파일 경로
"""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .base import BaseModel
from .config import DevicePlacement, NetworkConfig, draw_channels, place_devices
from .customerror import ExperimentError, InvalidConfigError, TrialError
from .metrics import CSV_COLUMNS, ROC_COLUMNS, MetricsReport, nmse, summarize
from .plotting import plot
from .receiver import (
    draw_payloads,
    process_embb,
    synthesize_received,
    transmission_rate,
)
from .solvers import SolverParams, decode
from .utils import STREAM_PLACEMENT, STREAM_STATE_EVOLUTION, codebook_rng, derive_rng, trial_rng
from .validation import validate_int
from .waveform import Codebook, build_codebook

logger = logging.getLogger(__name__)

CSV_SCHEMA_VERSION = 1
# 실패한 시행이 이 비율을 넘으면 실험 전체를 실패로 처리합니다.
MAX_FAILURE_RATE = 0.01

# 스윕 축 별칭 → 설정 필드
SWEEP_AXES = {
    "snr_e": "snr_embb_db",
    "snr_n": "snr_mtd_db",
    "L": "pilot_len",
    "M": "antennas",
    "Q": "q_messages",
    "E": "n_embb",
    "eps": "epsilon",
    "epsilon": "epsilon",
    "chi": "chi",
}

NO_SWEEP = "none"


def resolve_axis(axis: str) -> str:
    """스윕 축 별칭이나 설정 필드 이름을 설정 필드 이름으로 바꿉니다."""
    if axis in SWEEP_AXES:
        return SWEEP_AXES[axis]
    if axis in SWEEP_AXES.values():
        return axis
    raise InvalidConfigError(
        f"알 수 없는 스윕 축입니다: {axis} (가능한 값: {', '.join(SWEEP_AXES)})"
    )


def parse_sweep(text: str) -> Tuple[str, List[str]]:
    """'AXIS=v1,v2,...' 문자열을 (축, 값 목록)으로 파싱합니다.

    Examples:
        >>> parse_sweep("snr_e=-20,30")
        ('snr_e', ['-20', '30'])
    """
    if "=" not in text:
        raise InvalidConfigError(f"스윕은 AXIS=v1,v2 형식이어야 합니다: {text!r}")
    axis, values = (part.strip() for part in text.split("=", 1))
    return axis, [value.strip() for value in values.split(",") if value.strip()]


@dataclass
class ExperimentPlan(BaseModel):
    """실험 계획입니다.

    Attributes:
        config (NetworkConfig): 기본 설정
        sweep_var (str): 스윕 축 별칭 또는 필드 이름. 스윕이 없으면 "none"
        values (Sequence): 스윕 값 목록. 문자열이면 설정 파일 규칙으로 변환합니다.
        out_dir (Path): 출력 디렉터리
        plot (bool): 그림 파일 생성 여부
        jobs (int): 작업자 프로세스 수
        metrics (Tuple[str, ...]): CSV에 남길 지표. 비어 있으면 전부 남깁니다.
    """

    config: NetworkConfig
    sweep_var: str = NO_SWEEP
    values: Sequence = ()
    out_dir: Path = Path("results")
    plot: bool = False
    jobs: int = 1
    metrics: Tuple[str, ...] = ()

    def __post_init__(self):
        """출력 경로를 Path로 바꾸고 계획을 검사합니다."""
        self.out_dir = Path(self.out_dir)
        self.values = list(self.values)
        self.validate()

    def points(self) -> List[Tuple[object, NetworkConfig]]:
        """(스윕 값, 그 지점의 설정) 목록을 반환합니다."""
        if self.sweep_var == NO_SWEEP:
            return [("", self.config)]
        key = resolve_axis(self.sweep_var)
        out = []
        for raw in self.values:
            point = self.config.with_value(key, raw)
            out.append((getattr(point, key), point))
        return out

    def validate(self):
        """병렬도와 스윕 값이 올바른지 검사합니다.

        각 스윕 값으로 설정을 만들어 보므로 L이 2의 거듭제곱이 아니거나
        E ≥ L 같은 잘못된 값도 여기서 걸러집니다.

        Raises:
            InvalidConfigError: 스윕 값이 비었거나 올바르지 않을 때
        """
        validate_int(self.jobs, minimum=1)
        if self.sweep_var != NO_SWEEP:
            resolve_axis(self.sweep_var)
            if not self.values:
                raise InvalidConfigError(f"스윕 축 {self.sweep_var}의 값 목록이 비어 있습니다.")
            self.points()

    def render(self) -> Dict:
        """계획 요약을 dict로 변환합니다."""
        return {
            "sweep_var": self.sweep_var,
            "values": [self.to_builtin(value) for value, _ in self.points()],
            "jobs": self.jobs,
            "metrics": list(self.metrics),
        }


@dataclass
class TrialOutput(BaseModel):
    """한 시행의 결과입니다.

    Attributes:
        trial_index (int): 시행 번호
        alpha_seq (np.ndarray): (NQ,) 전송된 시퀀스
        xbar (np.ndarray): (NQ,) 행 노름 점수
        alpha_hat (np.ndarray): (NQ,) 감지 결과
        decoded_mask (np.ndarray): (E,) eMBB 복호 성공 여부
        sinr (np.ndarray): (E,) eMBB SINR
        Hhat (np.ndarray): (E, M) eMBB 채널 추정
        nmse_embb (float): eMBB 채널 추정 NMSE
        nmse_mtd (float): 전송된 시퀀스 행의 MTD 채널 NMSE
        solver (Dict): 복원 알고리즘 진단 정보
    """

    trial_index: int
    alpha_seq: np.ndarray
    xbar: np.ndarray
    alpha_hat: np.ndarray
    decoded_mask: np.ndarray
    sinr: np.ndarray
    Hhat: np.ndarray
    nmse_embb: float
    nmse_mtd: float
    solver: Dict = field(default_factory=dict)

    @property
    def p_out(self) -> float:
        """이 시행의 eMBB 불능 비율입니다. eMBB 장치가 없으면 nan입니다."""
        if self.decoded_mask.size == 0:
            return math.nan
        return float(np.mean(~self.decoded_mask))

    def validate(self):
        """점수와 지시자 길이가 같은지 검사합니다."""
        if not self.alpha_seq.shape == self.xbar.shape == self.alpha_hat.shape:
            raise InvalidConfigError("정답, 점수, 감지 결과의 길이가 같아야 합니다.")

    def render(self) -> Dict:
        """시행 요약을 dict로 변환합니다."""
        return {
            "trial_index": self.trial_index,
            "n_active": int(np.count_nonzero(self.alpha_seq)),
            "detected": int(np.count_nonzero(self.alpha_hat)),
            "decoded": self.decoded_mask.tolist(),
            "nmse_embb": self.nmse_embb,
            "nmse_mtd": self.nmse_mtd,
            **self.solver,
        }


@dataclass
class ExperimentResult:
    """실험 결과와 출력 파일 경로입니다."""

    reports: List[Tuple[object, MetricsReport]]
    metrics_path: Path
    roc_path: Path
    sidecar_path: Path
    failures: int = 0
    figures: List[Path] = field(default_factory=list)


def fixed_placement(config: NetworkConfig) -> DevicePlacement:
    """freeze_placement에서 모든 시행이 공유하는 배치를 만듭니다."""
    return place_devices(config, derive_rng(config.seed, STREAM_PLACEMENT, 0))


def point_codebook(config: NetworkConfig) -> Codebook:
    """실험 지점의 코드북을 만듭니다."""
    return build_codebook(config, codebook_rng(config.seed), seed=config.seed)


def run_trial(
    config: NetworkConfig,
    codebook: Optional[Codebook],
    trial_index: int,
    placement: Optional[DevicePlacement] = None,
) -> TrialOutput:
    """한 시행을 처음부터 끝까지 실행합니다.

    난수는 모두 (config.seed, trial_index)에서 분기하므로 실행 순서나 병렬도와 무관합니다.
    같은 실현값이라면 eMBB 쪽 결과는 복원 알고리즘 선택과 무관합니다.

    Args:
        config (NetworkConfig): 설정
        codebook (Optional[Codebook]): 코드북. None이거나 regenerate_codebook이면 시행마다 만듭니다.
        trial_index (int): 시행 번호
        placement (Optional[DevicePlacement]): 고정 배치. None이면 시행마다 뽑습니다.

    Returns:
        TrialOutput: 시행 결과

    Raises:
        TrialError: 시행 중 오류가 나면 시행 번호를 붙여 다시 던집니다.
    """
    try:
        if codebook is None or config.regenerate_codebook:
            codebook = build_codebook(
                config, codebook_rng(config.seed, trial_index + 1), seed=config.seed
            )
        if placement is None:
            placement = place_devices(config, derive_rng(config.seed, STREAM_PLACEMENT, trial_index))
        rng = trial_rng(config.seed, trial_index)
        realization = draw_channels(config, placement, rng)
        payloads = draw_payloads(rng, config.T, config.L, config.E)
        block = synthesize_received(realization, codebook, payloads, config.noise_w, rng)
        embb, block = process_embb(block, codebook, realization, transmission_rate(config))

        se_seed = int(derive_rng(config.seed, STREAM_STATE_EVOLUTION, trial_index).integers(2**32))
        params = SolverParams.from_config(config, realization.slab_variance, se_seed=se_seed)
        estimate = decode(config.solver, block.Y, codebook.S, params)

        active = realization.active_sequences
        return TrialOutput(
            trial_index=trial_index,
            alpha_seq=realization.alpha_seq,
            xbar=estimate.xbar,
            alpha_hat=estimate.alpha_hat,
            decoded_mask=block.decoded_mask,
            sinr=embb.sinr,
            Hhat=embb.Hhat,
            nmse_embb=nmse(realization.H, embb.Hhat) if config.E else math.nan,
            nmse_mtd=(
                nmse(realization.X[active], estimate.Xhat[active]) if active.size else math.nan
            ),
            solver=estimate.render(),
        )
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise TrialError(str(exc), trial_index) from exc


# 작업자 프로세스마다 한 번 받아 두는 실험 지점 상태
_WORKER_STATE: Dict[str, object] = {}


def _init_worker(config: NetworkConfig, codebook: Codebook, placement: Optional[DevicePlacement]):
    _WORKER_STATE.update(config=config, codebook=codebook, placement=placement)


def _run_indexed(trial_index: int) -> Union[TrialOutput, TrialError]:
    try:
        return run_trial(
            _WORKER_STATE["config"],
            _WORKER_STATE["codebook"],
            trial_index,
            _WORKER_STATE["placement"],
        )
    except TrialError as exc:
        return exc


def run_point(
    config: NetworkConfig, jobs: int = 1
) -> Tuple[List[TrialOutput], List[TrialError]]:
    """한 실험 지점의 모든 시행을 실행하고 시행 번호 순서로 반환합니다.

    Args:
        config (NetworkConfig): 지점 설정
        jobs (int): 작업자 프로세스 수. 1이면 현재 프로세스에서 실행합니다.

    Returns:
        tuple: (성공한 시행 결과 목록, 실패한 시행 오류 목록)
    """
    codebook = point_codebook(config)
    placement = fixed_placement(config) if config.freeze_placement else None
    indices = range(config.trials)
    if jobs == 1:
        _init_worker(config, codebook, placement)
        results = [_run_indexed(index) for index in indices]
    else:
        chunksize = max(1, config.trials // (4 * jobs))
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_worker,
            initargs=(config, codebook, placement),
        ) as executor:
            results = list(executor.map(_run_indexed, indices, chunksize=chunksize))
    outputs = [item for item in results if isinstance(item, TrialOutput)]
    failures = [item for item in results if isinstance(item, TrialError)]
    for failure in failures:
        logger.warning("시행 실패: %s", failure)
    return outputs, failures


def aggregate(outputs: Sequence[TrialOutput], config: NetworkConfig) -> MetricsReport:
    """시행 결과를 MetricsReport로 집계합니다."""
    if not outputs:
        raise ExperimentError("성공한 시행이 없어 지표를 계산할 수 없습니다.")
    per_trial = pd.DataFrame(
        {
            "nmse_embb": [item.nmse_embb for item in outputs],
            "nmse_mtd": [item.nmse_mtd for item in outputs],
            "p_out": [item.p_out for item in outputs],
            "solver_time_s": [item.solver.get("elapsed_s", math.nan) for item in outputs],
        }
    )
    return summarize(
        per_trial,
        [item.xbar for item in outputs],
        [item.alpha_seq for item in outputs],
        config.Q,
        config.pfa_targets,
        config.roc_grid,
        zeta=config.zeta,
    )


def _json_default(value):
    if isinstance(value, Path):
        return str(value)
    converted = BaseModel.to_builtin(value)
    if converted is value:
        raise TypeError(f"JSON으로 직렬화할 수 없는 값입니다: {type(value).__name__}")
    return converted


def write_outputs(
    plan: ExperimentPlan, reports: List[Tuple[object, MetricsReport]], failures: int
) -> Tuple[Path, Path, Path]:
    """metrics.csv, roc.csv, run.json을 씁니다.

    CSV에는 시드로 재현되는 값만 씁니다. 실행 시간은 run.json의 solver_time_s에만 남깁니다.
    """
    plan.out_dir.mkdir(parents=True, exist_ok=True)
    rows = [row for value, report in reports for row in report.rows(plan.sweep_var, value)]
    metrics = pd.DataFrame(rows, columns=CSV_COLUMNS)
    if plan.metrics:
        metrics = metrics[metrics["metric"].isin(plan.metrics)]
    roc = pd.concat(
        [report.roc_rows(plan.sweep_var, value) for value, report in reports], ignore_index=True
    )[ROC_COLUMNS]

    metrics_path = plan.out_dir / "metrics.csv"
    roc_path = plan.out_dir / "roc.csv"
    sidecar_path = plan.out_dir / "run.json"
    metrics.to_csv(metrics_path, index=False, float_format="%.10g")
    roc.to_csv(roc_path, index=False, float_format="%.10g")
    sidecar = {
        "schema_version": CSV_SCHEMA_VERSION,
        "columns": {"metrics": CSV_COLUMNS, "roc": ROC_COLUMNS},
        "plan": plan.render(),
        "config": plan.config.render(),
        "failures": failures,
        "zeta": {str(value): report.zeta for value, report in reports},
        "solver_time_s": {str(value): report.solver_time_s for value, report in reports},
    }
    sidecar_path.write_text(
        json.dumps(sidecar, indent=2, ensure_ascii=False, default=_json_default),
        encoding="utf-8",
    )
    return metrics_path, roc_path, sidecar_path


def run_experiment(plan: ExperimentPlan) -> ExperimentResult:
    """실험 계획의 모든 지점을 실행하고 결과 파일을 씁니다.

    Raises:
        ExperimentError: 한 지점에서 실패한 시행이 1%를 넘을 때
    """
    reports = []
    total_failures = 0
    for value, config in plan.points():
        logger.info("실험 지점 시작: %s=%s (시행 %d회)", plan.sweep_var, value, config.trials)
        outputs, failures = run_point(config, plan.jobs)
        total_failures += len(failures)
        if len(failures) > MAX_FAILURE_RATE * config.trials:
            raise ExperimentError(
                f"{plan.sweep_var}={value}에서 {len(failures)}/{config.trials} 시행이 실패했습니다."
            )
        report = aggregate(outputs, config)
        logger.info("실험 지점 완료: %s=%s %s", plan.sweep_var, value, report.render())
        reports.append((value, report))

    metrics_path, roc_path, sidecar_path = write_outputs(plan, reports, total_failures)
    logger.info("결과 저장: %s, %s", metrics_path, roc_path)
    result = ExperimentResult(
        reports=reports,
        metrics_path=metrics_path,
        roc_path=roc_path,
        sidecar_path=sidecar_path,
        failures=total_failures,
    )
    if plan.plot:
        result.figures = [
            plot(roc_path, "roc"),
            plot(metrics_path, "nmse"),
            plot(metrics_path, "pmd"),
        ]
    return result
