"""EM 기반 희소 베이즈 학습(EM-SBL) 복호를 정의합니다."""

import logging
import time
from typing import Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..customerror import InvalidConfigError
from .base import (
    PRUNE_THRESHOLD,
    SolverParams,
    SparseEstimate,
    check_problem,
    finish_estimate,
    normalize_problem,
)

logger = logging.getLogger(__name__)


def _posterior(
    Y: np.ndarray, S: np.ndarray, alpha: np.ndarray, sigma2: float
) -> Tuple[np.ndarray, np.ndarray, float]:
    """현재 하이퍼파라미터에서 사후 평균, 사후 분산 대각, Type-II 비용을 계산합니다.

    Σ_y = σ²I + S·diag(α)·S^H 를 한 번 분해해 다음 값을 모두 얻습니다.
        X = ΓS^H Σ_y^{-1} Y
        F_ii = α_i − α_i²·s_i^H Σ_y^{-1} s_i
        cost = M·log|Σ_y| + Tr(Σ_y^{-1} Y Y^H)
    """
    T, M = Y.shape
    Sigma_y = sigma2 * np.eye(T) + (S * alpha) @ S.conj().T
    factor = cho_factor(Sigma_y, lower=True)
    SiY = cho_solve(factor, Y)
    SiS = cho_solve(factor, S)
    X = alpha[:, None] * (S.conj().T @ SiY)
    quad = np.real(np.sum(S.conj() * SiS, axis=0))
    F = np.maximum(alpha - alpha**2 * quad, 0.0)
    logdet = 2.0 * float(np.sum(np.log(np.abs(np.diag(factor[0])))))
    cost = M * logdet + float(np.real(np.sum(Y.conj() * SiY)))
    return X, F, cost


def em_sbl(Y: np.ndarray, S: np.ndarray, params: SolverParams) -> SparseEstimate:
    """EM-SBL로 행 희소 행렬 X를 복원합니다.

    α를 1로 시작해 사후 평균 X와 사후 분산 대각 F를 구하고
    α_i ← ||x_i||²/M + F_ii 로 갱신합니다. 1e-12보다 작아진 α_i는 0으로 고정해
    해당 행을 제거합니다. α의 상대 변화가 Δ보다 작으면 멈춥니다.

    Args:
        Y (np.ndarray): (T, M) SIC 이후 수신 신호
        S (np.ndarray): (T, NQ) 감지 행렬
        params (SolverParams): 하이퍼파라미터. sigma2 > 0 이어야 합니다.

    Returns:
        SparseEstimate: 복원 결과. history에는 반복별 Type-II 비용이 담깁니다.

    Raises:
        InvalidConfigError: sigma2가 0일 때
    """
    started = time.perf_counter()
    check_problem(Y, S, params)
    if params.sigma2 <= 0:
        raise InvalidConfigError("EM-SBL은 잡음 전력 sigma2 > 0 이 필요합니다.")
    problem = normalize_problem(Y, S, params)
    M = Y.shape[1]
    Yn = problem.Y
    alpha = np.ones(S.shape[1])

    X, F, cost = _posterior(Yn, S, alpha, problem.sigma2)
    history = [cost]
    change = np.inf
    converged = False
    t = 0
    while t < params.t_max:
        t += 1
        alpha_new = np.sum(np.abs(X) ** 2, axis=1) / M + F
        alpha_new[alpha_new < PRUNE_THRESHOLD] = 0.0
        scale = float(np.linalg.norm(alpha))
        diff = float(np.linalg.norm(alpha_new - alpha))
        change = diff / scale if scale > 0 else 0.0
        alpha = alpha_new
        X, F, cost = _posterior(Yn, S, alpha, problem.sigma2)
        history.append(cost)
        if change < params.delta:
            converged = True
            break

    pruned = int(np.count_nonzero(alpha == 0))
    logger.debug("EM-SBL 반복 %d회, 제거된 행 %d개, 비용 %.6g", t, pruned, cost)
    return finish_estimate(
        X, problem, params, solver="sbl", iterations=t, converged=converged,
        residual_norm=change, started=started, history=history,
    )
