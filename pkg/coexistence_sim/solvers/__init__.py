"""SIC 이후 잔여 신호에서 MTD 시퀀스를 찾는 희소 복원 알고리즘 패키지입니다.

modules:
    base: SolverParams, SparseEstimate와 행 노름 점수, 감지 함수를 정의합니다.
    amp: 근사 메시지 전달 복호를 정의합니다.
    admm: ℓ2,1 최소화 ADMM 복호를 정의합니다.
    sbl: EM 기반 희소 베이즈 학습 복호를 정의합니다.
    somp: 동시 직교 정합 추적 복호를 정의합니다.
"""

from typing import Callable, Dict

import numpy as np

from ..customerror import InvalidConfigError
from .admm import admm_l21
from .amp import amp_decode
from .base import (
    SolverParams,
    SparseEstimate,
    detect_sequences,
    device_scores,
    row_norms,
)
from .sbl import em_sbl
from .somp import somp

Solver = Callable[[np.ndarray, np.ndarray, SolverParams], SparseEstimate]

SOLVERS: Dict[str, Solver] = {
    "amp": amp_decode,
    "admm": admm_l21,
    "sbl": em_sbl,
    "somp": somp,
}


def decode(name: str, Y: np.ndarray, S: np.ndarray, params: SolverParams) -> SparseEstimate:
    """이름으로 알고리즘을 골라 실행합니다.

    Raises:
        InvalidConfigError: 알 수 없는 알고리즘 이름일 때
    """
    try:
        solver = SOLVERS[name]
    except KeyError:
        raise InvalidConfigError(
            f"알 수 없는 알고리즘입니다: {name} (가능한 값: {', '.join(SOLVERS)})"
        ) from None
    return solver(Y, S, params)


__all__ = [
    "SOLVERS",
    "SolverParams",
    "SparseEstimate",
    "admm_l21",
    "amp_decode",
    "decode",
    "detect_sequences",
    "device_scores",
    "em_sbl",
    "row_norms",
    "somp",
]
