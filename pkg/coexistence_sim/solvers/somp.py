"""동시 직교 정합 추적(SOMP) 복호를 정의합니다."""

import logging
import time
from typing import List, Optional

import numpy as np

from .base import (
    SOMP_CONDITION_LIMIT,
    SOMP_RIDGE,
    SolverParams,
    SparseEstimate,
    check_problem,
    finish_estimate,
    normalize_problem,
)

logger = logging.getLogger(__name__)

# 잔여 신호가 ||Y||의 이 비율 이하이면 완전히 설명된 것으로 봅니다.
EXACT_FIT_RATIO = 1e-10


def refit(S_sub: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """선택된 열들로 최소제곱 재추정을 합니다.

    부분 행렬의 조건수가 1e8을 넘으면 능형 계수 1e-10의 정규화 최소제곱으로 바꿉니다.
    """
    if np.linalg.cond(S_sub) > SOMP_CONDITION_LIMIT:
        gram = S_sub.conj().T @ S_sub + SOMP_RIDGE * np.eye(S_sub.shape[1])
        return np.linalg.solve(gram, S_sub.conj().T @ Y)
    return np.linalg.lstsq(S_sub, Y, rcond=None)[0]


def somp(
    Y: np.ndarray, S: np.ndarray, params: SolverParams, k_max: Optional[int] = None
) -> SparseEstimate:
    """SOMP로 행 희소 행렬 X를 복원합니다.

    매 단계 G = S^H R 에서 ||G_j||_1/||S_j||_2 가 가장 큰 열을 지지집합에 더하고,
    선택된 열로 X를 최소제곱 재추정한 뒤 R = Y − S X 를 다시 계산합니다.
    다음 중 하나가 성립하면 멈춥니다.

    - 잔여 신호가 ||Y||_F·1e-10 이하
    - 추정값의 상대 변화가 Δ 미만
    - 잔여 신호 노름이 줄지 않음
    - 지지집합 크기가 k_max

    Args:
        Y (np.ndarray): (T, M) SIC 이후 수신 신호
        S (np.ndarray): (T, NQ) 감지 행렬
        params (SolverParams): 하이퍼파라미터
        k_max (Optional[int]): 최대 지지집합 크기. None이면 params.k_max

    Returns:
        SparseEstimate: 복원 결과. history에는 단계별 잔여 노름이 담깁니다.
    """
    started = time.perf_counter()
    check_problem(Y, S, params)
    problem = normalize_problem(Y, S, params)
    limit = min(params.k_max if k_max is None else int(k_max), S.shape[0], S.shape[1])
    Yn = problem.Y
    n_seq = S.shape[1]
    column_norms = np.linalg.norm(S, axis=0)
    column_norms[column_norms == 0] = np.inf

    X = np.zeros((n_seq, Yn.shape[1]), dtype=complex)
    R = Yn.copy()
    residual = float(np.linalg.norm(R))
    floor = EXACT_FIT_RATIO * residual
    support: List[int] = []
    history = [residual]
    change = np.inf
    converged = residual == 0.0
    while not converged and len(support) < limit:
        scores = np.sum(np.abs(S.conj().T @ R), axis=1) / column_norms
        scores[support] = -np.inf
        support.append(int(np.argmax(scores)))

        X_new = np.zeros_like(X)
        X_new[support] = refit(S[:, support], Yn)
        R = Yn - S @ X_new
        new_residual = float(np.linalg.norm(R))
        change = float(np.linalg.norm(X_new - X) / max(np.linalg.norm(X_new), np.finfo(float).tiny))
        stagnated = new_residual >= residual
        X = X_new
        residual = new_residual
        history.append(residual)
        if residual <= floor or change < params.delta or stagnated:
            converged = True

    logger.debug("SOMP 지지집합 %s, 잔여 노름 %.3g", support, residual)
    return finish_estimate(
        X, problem, params, solver="somp", iterations=len(support), converged=converged,
        residual_norm=residual, started=started, history=history,
    )
