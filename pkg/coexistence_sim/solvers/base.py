"""희소 복원 알고리즘이 공유하는 자료형과 함수를 정의합니다.

Classes:
    - SolverParams: 알고리즘 하이퍼파라미터와 사전 정보를 담는 클래스
    - SparseEstimate: 복원된 행 희소 행렬과 점수, 감지 결과, 진단 정보를 담는 클래스
    - ScaledProblem: RMS 정규화된 (Y, 사전 분산, 잡음 전력) 묶음

Functions:
    - row_norms: 행별 ℓ2 노름 점수
    - detect_sequences: 장치당 최대 하나만 허용하는 문턱 감지
    - normalize_problem: Y의 RMS로 문제를 정규화합니다.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..base import BaseModel
from ..config import NetworkConfig
from ..customerror import DimensionMismatchError, InvalidConfigError
from ..validation import validate_int, validate_positive, validate_probability

logger = logging.getLogger(__name__)

# SBL 사전 분산이 이 값보다 작아지면 0으로 고정합니다.
PRUNE_THRESHOLD = 1e-12
# SOMP 부분 행렬이 이보다 나쁜 조건수를 가지면 능형 회귀로 다시 맞춥니다.
SOMP_CONDITION_LIMIT = 1e8
SOMP_RIDGE = 1e-10


@dataclass
class SolverParams(BaseModel):
    """희소 복원 알고리즘의 하이퍼파라미터입니다.

    mu와 gamma_priors, sigma2는 Y와 같은 절대 단위로 받습니다.
    알고리즘 내부에서는 Y의 RMS로 정규화한 단위로 바꿔 사용합니다.

    Attributes:
        delta (float): 수렴 허용 오차 Δ (정규화 단위)
        t_max (int): 최대 반복 횟수
        mu (Optional[float]): ℓ2,1 가중치. None이면 정규화 단위에서 자동 설정
        rho_admm (float): ADMM 벌점 계수 ρ
        xi (float): AMP 사전 밀도 ε/Q
        gamma_priors (np.ndarray): (NQ,) 시퀀스별 사전 분산 p_n·γ_n
        sigma2 (float): 잡음 전력
        se_samples (int): AMP 상태 진화 표본 수. 0이면 경험적 잔차 공분산을 씁니다.
        se_seed (int): 상태 진화 표본 전용 시드
        amp_shrinkage (float): AMP 경험적 공분산을 등방 행렬 쪽으로 당기는 비율, [0, 1)
        k_max (int): SOMP 최대 지지집합 크기
        zeta (float): 감지 문턱 ζ
        q_messages (int): 장치당 메시지 수 Q
    """

    delta: float = 1e-4
    t_max: int = 200
    mu: Optional[float] = None
    rho_admm: float = 1.0
    xi: float = 0.005
    gamma_priors: np.ndarray = field(default_factory=lambda: np.ones(1))
    sigma2: float = 1.0
    se_samples: int = 0
    se_seed: int = 0
    amp_shrinkage: float = 0.0
    k_max: int = 1
    zeta: float = 0.0
    q_messages: int = 1

    def __post_init__(self):
        """생성 직후 값을 검사합니다."""
        self.gamma_priors = np.asarray(self.gamma_priors, dtype=float)
        self.validate()

    @classmethod
    def from_config(
        cls, config: NetworkConfig, slab_variance: np.ndarray, se_seed: int = 0
    ) -> "SolverParams":
        """설정과 장치별 유효 채널 분산으로 파라미터를 만듭니다.

        Args:
            config (NetworkConfig): 시나리오 설정
            slab_variance (np.ndarray): (N,) p_n·γ_n
            se_seed (int): 상태 진화 표본 전용 시드
        """
        return cls(
            delta=config.tol,
            t_max=config.t_max,
            mu=config.mu,
            rho_admm=config.rho,
            xi=config.xi,
            gamma_priors=np.repeat(np.asarray(slab_variance, dtype=float), config.Q),
            sigma2=config.noise_w,
            se_samples=config.se_samples,
            se_seed=se_seed,
            amp_shrinkage=config.amp_shrinkage,
            k_max=config.somp_k_max,
            zeta=config.zeta if config.zeta is not None else 0.0,
            q_messages=config.Q,
        )

    def validate(self):
        """delta > 0, t_max ≥ 1, mu, rho > 0, 0 < xi < 1 을 검사합니다."""
        validate_positive(self.delta, self.rho_admm)
        validate_positive(self.sigma2, self.zeta, allow_zero=True)
        validate_int(self.t_max, self.k_max, self.q_messages, minimum=1)
        validate_int(self.se_samples, minimum=0)
        validate_probability(self.xi)
        if not 0.0 <= self.amp_shrinkage < 1.0:
            raise InvalidConfigError(f"amp_shrinkage는 [0, 1) 범위여야 합니다: {self.amp_shrinkage}")
        if self.mu is not None:
            validate_positive(self.mu)
        if np.any(self.gamma_priors < 0):
            raise InvalidConfigError("사전 분산은 음수가 될 수 없습니다.")

    def render(self) -> Dict:
        """파라미터 요약을 dict로 변환합니다."""
        return self.remove_none_item(
            {
                "delta": self.delta,
                "t_max": self.t_max,
                "mu": self.mu,
                "rho_admm": self.rho_admm,
                "xi": self.xi,
                "sigma2": self.sigma2,
                "se_samples": self.se_samples,
                "amp_shrinkage": self.amp_shrinkage,
                "k_max": self.k_max,
            }
        )


@dataclass
class SparseEstimate(BaseModel):
    """희소 복원 결과를 담는 클래스입니다.

    Attributes:
        Xhat (np.ndarray): (NQ, M) 복원된 행 희소 행렬 (Y와 같은 단위)
        xbar (np.ndarray): (NQ,) 행별 ℓ2 노름
        alpha_hat (np.ndarray): (NQ,) 감지된 시퀀스
        iterations (int): 반복 횟수
        converged (bool): 수렴 여부
        residual_norm (float): 마지막 정지 지표
        solver (str): 알고리즘 이름
        elapsed_s (float): 실행 시간 (초)
        history (List[float]): 반복별 목적 함수 값 (정규화 단위)
    """

    Xhat: np.ndarray
    xbar: np.ndarray
    alpha_hat: np.ndarray
    iterations: int
    converged: bool
    residual_norm: float
    solver: str = ""
    elapsed_s: float = 0.0
    history: List[float] = field(default_factory=list)

    def validate(self):
        """점수가 행 노름과 일치하는지 검사합니다."""
        if not np.allclose(self.xbar, row_norms(self.Xhat)):
            raise InvalidConfigError("xbar는 Xhat의 행 노름이어야 합니다.")

    def render(self) -> Dict:
        """진단 정보를 dict로 변환합니다."""
        return {
            "solver": self.solver,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual_norm": self.residual_norm,
            "elapsed_s": self.elapsed_s,
            "detected": int(np.count_nonzero(self.alpha_hat)),
        }


@dataclass
class ScaledProblem:
    """RMS 정규화된 문제입니다. scale은 원래 단위로 되돌릴 때 곱하는 값입니다."""

    Y: np.ndarray
    gamma_priors: np.ndarray
    sigma2: float
    mu: Optional[float]
    scale: float


def row_norms(Xhat: np.ndarray) -> np.ndarray:
    """각 행의 ℓ2 노름 x̄_i = ||x_i||_2 를 반환합니다."""
    return np.linalg.norm(Xhat, axis=1)


def detect_sequences(xbar: np.ndarray, zeta: float, Q: int) -> np.ndarray:
    """장치별 Q개 점수의 최댓값이 ζ 이상이면 그 위치 하나만 감지합니다.

    동점이면 가장 작은 q를 고릅니다. 한 장치에서 여러 점수가 ζ를 넘어도 하나만 감지합니다.

    Args:
        xbar (np.ndarray): (NQ,) 행 점수
        zeta (float): 문턱 (≥ 0)
        Q (int): 장치당 메시지 수

    Returns:
        np.ndarray: (NQ,) bool 감지 결과
    """
    validate_int(Q, minimum=1)
    if zeta < 0:
        raise InvalidConfigError(f"문턱 ζ는 0 이상이어야 합니다: {zeta}")
    blocks = np.asarray(xbar, dtype=float).reshape(-1, Q)
    best = np.argmax(blocks, axis=1)
    fired = blocks[np.arange(blocks.shape[0]), best] >= zeta
    alpha_hat = np.zeros(blocks.shape, dtype=bool)
    alpha_hat[np.flatnonzero(fired), best[fired]] = True
    return alpha_hat.reshape(-1)


def device_scores(xbar: np.ndarray, Q: int) -> np.ndarray:
    """장치별 Q개 점수의 최댓값 (N,)을 반환합니다."""
    return np.asarray(xbar, dtype=float).reshape(-1, Q).max(axis=1)


def check_problem(Y: np.ndarray, S: np.ndarray, params: SolverParams):
    """Y (T, M), S (T, NQ)와 사전 분산 길이가 맞는지 검사합니다."""
    if Y.ndim != 2 or S.ndim != 2 or Y.shape[0] != S.shape[0]:
        raise DimensionMismatchError(f"Y {Y.shape}와 S {S.shape}의 행 수가 맞지 않습니다.")
    if params.gamma_priors.size not in (1, S.shape[1]):
        raise DimensionMismatchError("사전 분산의 길이는 S의 열 수와 같아야 합니다.")


def normalize_problem(Y: np.ndarray, S: np.ndarray, params: SolverParams) -> ScaledProblem:
    """Y를 RMS c0 = ||Y||_F/sqrt(TM)로 나눈 문제를 만듭니다.

    사전 분산과 잡음 전력은 c0²로, μ는 c0로 나눕니다. Y = 0이면 c0 = 1입니다.
    """
    T, M = Y.shape
    scale = float(np.linalg.norm(Y) / np.sqrt(T * M))
    if scale == 0 or not np.isfinite(scale):
        scale = 1.0
    gamma = np.broadcast_to(params.gamma_priors, (S.shape[1],)) / scale**2
    return ScaledProblem(
        Y=Y / scale,
        gamma_priors=np.asarray(gamma, dtype=float),
        sigma2=params.sigma2 / scale**2,
        mu=None if params.mu is None else params.mu / scale,
        scale=scale,
    )


def finish_estimate(
    X_scaled: np.ndarray,
    problem: ScaledProblem,
    params: SolverParams,
    *,
    solver: str,
    iterations: int,
    converged: bool,
    residual_norm: float,
    started: float,
    history: Optional[List[float]] = None,
) -> SparseEstimate:
    """정규화 단위 결과를 원래 단위로 되돌리고 점수와 감지 결과를 채웁니다."""
    Xhat = X_scaled * problem.scale
    xbar = row_norms(Xhat)
    if not converged:
        logger.debug("%s가 %d회 안에 수렴하지 않았습니다 (정지 지표 %.3g)", solver, iterations, residual_norm)
    return SparseEstimate(
        Xhat=Xhat,
        xbar=xbar,
        alpha_hat=detect_sequences(xbar, params.zeta, params.q_messages),
        iterations=iterations,
        converged=converged,
        residual_norm=float(residual_norm),
        solver=solver,
        elapsed_s=time.perf_counter() - started,
        history=list(history or []),
    )
