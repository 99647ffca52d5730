"""ℓ2,1 혼합 노름 최소화를 ADMM으로 푸는 복호를 정의합니다.

    minimize ½||Y − S Z||_F² + μ Σ_i ||x_i||_2   subject to  X = Z
"""

import logging
import time
from typing import Callable

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .base import (
    SolverParams,
    SparseEstimate,
    check_problem,
    finish_estimate,
    normalize_problem,
)

logger = logging.getLogger(__name__)

# 정규화 단위에서 자동 μ를 만들 때 쓰는 잡음 표준편차의 하한
MU_NOISE_FLOOR = 0.01


def default_mu(sigma2: float, n_sequences: int) -> float:
    """정규화 단위의 자동 μ = sqrt(2·log NQ)·max(σ, 0.01)를 반환합니다."""
    sigma = max(float(np.sqrt(sigma2)), MU_NOISE_FLOOR)
    return float(np.sqrt(2.0 * np.log(max(n_sequences, 2)))) * sigma


def l21_objective(Y: np.ndarray, S: np.ndarray, X: np.ndarray, mu: float) -> float:
    """½||Y − S X||_F² + μ·Σ||x_i||_2 를 계산합니다."""
    fit = 0.5 * float(np.linalg.norm(Y - S @ X) ** 2)
    return fit + mu * float(np.sum(np.linalg.norm(X, axis=1)))


def group_soft_threshold(C: np.ndarray, threshold: float) -> np.ndarray:
    """행마다 max{0, ||c|| − threshold}·c/||c|| 를 적용합니다."""
    norms = np.linalg.norm(C, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = np.where(norms > threshold, 1.0 - threshold / norms, 0.0)
    return gain * C


def _least_squares_step(S: np.ndarray, rho: float) -> Callable[[np.ndarray], np.ndarray]:
    """(S^H S + ρI)^{-1}b 를 푸는 함수를 만듭니다.

    T ≥ NQ 이면 NQ×NQ 행렬을 Cholesky 분해하고, 그렇지 않으면
    Woodbury 항등식으로 T×T 행렬만 분해합니다.
    """
    T, n_seq = S.shape
    if T >= n_seq:
        factor = cho_factor(S.conj().T @ S + rho * np.eye(n_seq))
        return lambda b: cho_solve(factor, b)

    factor = cho_factor(rho * np.eye(T) + S @ S.conj().T)

    def solve(b: np.ndarray) -> np.ndarray:
        return (b - S.conj().T @ cho_solve(factor, S @ b)) / rho

    return solve


def admm_l21(Y: np.ndarray, S: np.ndarray, params: SolverParams) -> SparseEstimate:
    """ADMM으로 ℓ2,1 정규화 문제를 풀어 X를 복원합니다.

    Z 갱신은 최소제곱 닫힌 형태 Z = (S^H S + ρI)^{-1}(S^H Y + ρX + Λ),
    X 갱신은 c = Z − Λ/ρ 에 대한 행 단위 그룹 soft-threshold(문턱 μ/ρ),
    쌍대 변수는 Λ ← Λ + ρ(X − Z)로 갱신합니다.
    ||Z^{t+1} − Z^t||_F < Δ 이면 멈추고, 행 희소성이 보장되는 X를 반환합니다.

    Args:
        Y (np.ndarray): (T, M) SIC 이후 수신 신호
        S (np.ndarray): (T, NQ) 감지 행렬
        params (SolverParams): 하이퍼파라미터. mu가 None이면 잡음 전력으로 정합니다.

    Returns:
        SparseEstimate: 복원 결과. 목적 함수가 가장 작았던 반복의 X를 반환하며,
            history에는 반복마다 그때까지의 최소 목적 함수 값이 담깁니다.
    """
    started = time.perf_counter()
    check_problem(Y, S, params)
    problem = normalize_problem(Y, S, params)
    n_seq = S.shape[1]
    M = Y.shape[1]
    rho = params.rho_admm
    mu = problem.mu if problem.mu is not None else default_mu(problem.sigma2, n_seq)
    Yn = problem.Y

    solve = _least_squares_step(S, rho)
    SY = S.conj().T @ Yn
    X = np.zeros((n_seq, M), dtype=complex)
    Z = np.zeros_like(X)
    Lam = np.zeros_like(X)
    best_X = X
    best_objective = l21_objective(Yn, S, X, mu)
    history = [best_objective]
    change = np.inf
    converged = False
    t = 0
    while t < params.t_max:
        t += 1
        Z_new = solve(SY + rho * X + Lam)
        X = group_soft_threshold(Z_new - Lam / rho, mu / rho)
        Lam = Lam + rho * (X - Z_new)
        change = float(np.linalg.norm(Z_new - Z))
        Z = Z_new
        objective = l21_objective(Yn, S, X, mu)
        if objective < best_objective:
            best_X, best_objective = X, objective
        history.append(best_objective)
        if change < params.delta:
            converged = True
            break

    if best_X is not X:
        logger.debug("ADMM 마지막 반복보다 목적 함수가 작은 이전 반복값을 반환합니다.")
    logger.debug("ADMM 반복 %d회, μ=%.3g (정규화 단위), 목적 함수 %.6g", t, mu, best_objective)
    return finish_estimate(
        best_X, problem, params, solver="admm", iterations=t, converged=converged,
        residual_norm=change, started=started, history=history,
    )
