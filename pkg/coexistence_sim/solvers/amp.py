"""근사 메시지 전달(AMP) 복호를 정의합니다.

행 단위 spike-and-slab 사전 분포에 대한 MMSE 잡음 제거 함수와 Onsager 보정을 사용합니다.
잡음 공분산 Σ는 기본적으로 잔여 신호의 경험적 공분산으로 갱신하며,
se_samples > 0 이면 사전 분포 표본으로 상태 진화식을 Monte-Carlo 추정합니다.
"""

import logging
import time
from typing import Tuple

import numpy as np
from scipy.special import expit, logit

from ..utils import STREAM_STATE_EVOLUTION, complex_normal, derive_rng
from .base import (
    SolverParams,
    SparseEstimate,
    check_problem,
    finish_estimate,
    normalize_problem,
)

logger = logging.getLogger(__name__)

# 정규화 단위에서 Σ 고유값의 하한. 가장 큰 고유값에 대한 상대 하한도 함께 적용합니다.
EIGEN_FLOOR = 1e-14
RELATIVE_EIGEN_FLOOR = 1e-10


def _eigen(Sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """에르미트 Σ = Q·diag(λ)·Q^H 분해를 하한을 적용해 반환합니다."""
    lam, Qmat = np.linalg.eigh((Sigma + Sigma.conj().T) / 2)
    floor = max(EIGEN_FLOOR, RELATIVE_EIGEN_FLOOR * float(lam.max(initial=0.0)))
    return np.maximum(lam, floor), Qmat


def denoise(
    V: np.ndarray, gamma: np.ndarray, Sigma: np.ndarray, xi: float
) -> Tuple[np.ndarray, np.ndarray]:
    """행 단위 spike-and-slab MMSE 잡음 제거 η(v)와 평균 야코비안을 계산합니다.

    각 행 v_i = x_i + e, e ~ CN(0, Σ)에서 x_i는 확률 ξ로 CN(0, γ_i I), 아니면 0입니다.
    η(v) = π(v)·γ(γI + Σ)^{-1}v 이고 π는 활성 사후 확률입니다.

    Args:
        V (np.ndarray): (NQ, M) 유효 관측
        gamma (np.ndarray): (NQ,) 행별 사전 분산
        Sigma (np.ndarray): (M, M) 유효 잡음 공분산
        xi (float): 사전 활성 확률 ξ

    Returns:
        Tuple[np.ndarray, np.ndarray]: (NQ, M) 추정값, (M, M) 행 평균 야코비안 ⟨η'⟩
    """
    lam, Qmat = _eigen(Sigma)
    W = V @ Qmat.conj()
    g = gamma[:, None]
    f = g / (g + lam)
    d = 1.0 / lam - 1.0 / (g + lam)
    llr = np.sum(np.abs(W) ** 2 * d, axis=1) - np.sum(np.log1p(g / lam), axis=1)
    pi = expit(logit(xi) + llr)
    X = pi[:, None] * ((W * f) @ Qmat.T)

    # 사후 확률의 v 의존성까지 포함한 야코비안을 고유 기저에서 평균합니다.
    c = pi * (1.0 - pi)
    A = c[:, None] * f * W
    B = d * W
    Jq = np.diag(np.mean(pi[:, None] * f, axis=0)) + A.T @ B.conj() / V.shape[0]
    return X, Qmat @ Jq @ Qmat.conj().T


def empirical_covariance(R: np.ndarray, shrinkage: float = 0.0) -> np.ndarray:
    """잔여 신호의 행 공분산 Σ = Σ_t r_t^T r_t^* / T 를 반환합니다.

    shrinkage > 0 이면 같은 대각합을 갖는 등방 행렬 쪽으로 그 비율만큼 당깁니다.
    """
    T, M = R.shape
    sample = R.T @ R.conj() / T
    if shrinkage == 0:
        return sample
    isotropic = np.trace(sample).real / M * np.eye(M)
    return (1.0 - shrinkage) * sample + shrinkage * isotropic


class _StateEvolution:
    """상태 진화식 Σ = σ²I + (NQ/T)·E[(η(x+ν)−x)(η(x+ν)−x)^H]의 Monte-Carlo 추정기입니다."""

    def __init__(
        self,
        gamma: np.ndarray,
        sigma2: float,
        xi: float,
        T: int,
        M: int,
        params: SolverParams,
    ):
        """정규화 단위의 사전 분산과 잡음 전력으로 전용 난수 스트림을 준비합니다."""
        self.gamma = gamma
        self.sigma2 = sigma2
        self.xi = xi
        self.ratio = gamma.size / T
        self.M = M
        self.samples = params.se_samples
        self.rng = derive_rng(params.se_seed, STREAM_STATE_EVOLUTION)

    def initial(self) -> np.ndarray:
        """X⁰ = 0 일 때의 Σ⁰를 반환합니다."""
        power = self.xi * float(np.mean(self.gamma))
        return (self.sigma2 + self.ratio * power) * np.eye(self.M)

    def step(self, Sigma: np.ndarray) -> np.ndarray:
        """현재 Σ에서 다음 Σ를 추정합니다."""
        rows = self.rng.integers(0, self.gamma.size, size=self.samples)
        active = self.rng.random(self.samples) < self.xi
        gamma = self.gamma[rows]
        X = active[:, None] * complex_normal(self.rng, (self.samples, self.M), gamma[:, None])
        lam, Qmat = _eigen(Sigma)
        root = Qmat * np.sqrt(lam)
        noise = complex_normal(self.rng, (self.samples, self.M)) @ root.T
        Xhat, _ = denoise(X + noise, gamma, Sigma, self.xi)
        error = Xhat - X
        return self.sigma2 * np.eye(self.M) + self.ratio * (error.T @ error.conj()) / self.samples


def amp_decode(Y: np.ndarray, S: np.ndarray, params: SolverParams) -> SparseEstimate:
    """AMP로 행 희소 행렬 X를 복원합니다.

    반복식:
        V = S^H R + X, X ← η(V), R ← Y − S X + (NQ/T)·R·⟨η'⟩^T

    ||R^{t+1} − R^t||_F < Δ 이거나 t_max에 도달하면 멈춥니다.
    t_max에 도달해도 예외를 던지지 않고 converged=False로 반환합니다.

    Args:
        Y (np.ndarray): (T, M) SIC 이후 수신 신호
        S (np.ndarray): (T, NQ) 감지 행렬
        params (SolverParams): 하이퍼파라미터

    Returns:
        SparseEstimate: 복원 결과
    """
    started = time.perf_counter()
    check_problem(Y, S, params)
    problem = normalize_problem(Y, S, params)
    T, M = Y.shape
    n_seq = S.shape[1]
    X = np.zeros((n_seq, M), dtype=complex)
    if not np.any(Y):
        return finish_estimate(
            X, problem, params, solver="amp", iterations=0, converged=True,
            residual_norm=0.0, started=started,
        )

    evolution = None
    if params.se_samples > 0:
        evolution = _StateEvolution(problem.gamma_priors, problem.sigma2, params.xi, T, M, params)
        Sigma = evolution.initial()

    Yn = problem.Y
    R = Yn.copy()
    history = []
    change = np.inf
    converged = False
    t = 0
    while t < params.t_max:
        t += 1
        if evolution is None:
            Sigma = empirical_covariance(R, params.amp_shrinkage)
        V = S.conj().T @ R + X
        X, jacobian = denoise(V, problem.gamma_priors, Sigma, params.xi)
        R_new = Yn - S @ X + (n_seq / T) * R @ jacobian.T
        change = float(np.linalg.norm(R_new - R))
        R = R_new
        history.append(float(np.linalg.norm(R)))
        if evolution is not None:
            Sigma = evolution.step(Sigma)
        if change < params.delta:
            converged = True
            break

    logger.debug("AMP 반복 %d회, 마지막 잔여 변화 %.3g", t, change)
    return finish_estimate(
        X, problem, params, solver="amp", iterations=t, converged=converged,
        residual_norm=change, started=started, history=history,
    )
