"""eMBB 장치와 MTD가 한 자원 블록을 공유하는 상향링크 셀의 링크 수준 시뮬레이터입니다.

Packages:
    waveform: eMBB 파일럿과 MTD 헤더/메시지 코드북 설계를 정의합니다.
    solvers: AMP, ADMM, EM-SBL, SOMP 희소 복원과 감지 함수를 정의합니다.

Modules:
    base: 기본 부모 클래스(BaseModel)와 설정 부모 클래스(ParentConfig)를 정의합니다.
    config: 시나리오 설정, 전력 제어, 채널과 활성 상태 생성을 정의합니다.
    receiver: eMBB 채널 추정, 결합, SINR, 불능 판정, SIC를 정의합니다.
    metrics: PMD/PFA, ROC, NMSE, 불능 확률 집계를 정의합니다.
    harness: 시행과 실험 실행, 결과 파일 저장을 정의합니다.
    plotting: 결과 CSV를 그림으로 그리는 함수를 정의합니다.
    cli: 명령행 진입점을 정의합니다.
    customerror: 사용자 정의 예외를 정의합니다.
    utils: dB 변환, 복소 가우시안 표본, 난수 스트림 분기를 정의합니다.
    validation: 유효성 검사 함수들을 정의합니다.
"""

from . import solvers, waveform
from .config import ChannelRealization, DevicePlacement, NetworkConfig
from .customerror import (
    DimensionMismatchError,
    EmptyPoolError,
    ExperimentError,
    InfeasibleCollisionError,
    InvalidConfigError,
    OutOfDomainError,
    SchemaError,
    TrialError,
    UnsupportedSizeError,
)
from .harness import ExperimentPlan, run_experiment, run_trial
from .metrics import MetricsReport

__all__ = [
    "solvers",
    "waveform",
    "ChannelRealization",
    "DevicePlacement",
    "NetworkConfig",
    "DimensionMismatchError",
    "EmptyPoolError",
    "ExperimentError",
    "InfeasibleCollisionError",
    "InvalidConfigError",
    "OutOfDomainError",
    "SchemaError",
    "TrialError",
    "UnsupportedSizeError",
    "ExperimentPlan",
    "MetricsReport",
    "run_experiment",
    "run_trial",
]
