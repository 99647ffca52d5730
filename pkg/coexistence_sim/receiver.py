"""eMBB 수신 체인을 정의합니다.

수신 블록 합성, 파일럿 상관, MMSE 채널 추정, MMSE 결합, SINR 계산, 불능(outage) 판정,
그리고 MTD 복호에 넘길 잔여 신호를 만드는 SIC를 담당합니다.

classes:
    - ReceivedBlock: 수신 블록과 SIC 이후 잔여 신호를 담는 클래스
    - EmbbEstimate: eMBB 채널 추정값, 오차 분산, 결합기, SINR을 담는 클래스
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import solve

from .base import BaseModel
from .config import ChannelRealization, NetworkConfig
from .customerror import DimensionMismatchError, InvalidConfigError
from .utils import complex_normal
from .validation import validate_positive
from .waveform import Codebook

logger = logging.getLogger(__name__)


@dataclass
class ReceivedBlock(BaseModel):
    """한 코히어런스 구간의 수신 블록을 담는 클래스입니다.

    Attributes:
        Ybar (np.ndarray): (T, M) 수신 블록
        pilot_len (int): 파일럿 길이 L
        noise_power (float): 잡음 전력 σ²
        embb_payload (np.ndarray): (T−L, E) eMBB 페이로드 심볼 φ_e
        noise (np.ndarray): (T, M) 실제 잡음. SINR 평가에만 사용합니다.
        Y (np.ndarray): (T, M) SIC 이후 잔여 신호
        decoded_mask (np.ndarray): (E,) 복호에 성공한 eMBB 장치
    """

    Ybar: np.ndarray
    pilot_len: int
    noise_power: float
    embb_payload: np.ndarray
    noise: np.ndarray
    Y: Optional[np.ndarray] = None
    decoded_mask: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    def __post_init__(self):
        """잔여 신호가 없으면 수신 블록으로 초기화합니다."""
        if self.Y is None:
            self.Y = self.Ybar.copy()
        if self.decoded_mask.size != self.embb_payload.shape[1]:
            self.decoded_mask = np.zeros(self.embb_payload.shape[1], dtype=bool)

    @property
    def Yp(self) -> np.ndarray:
        """파일럿 구간 Ȳ_p (L, M)를 반환합니다."""
        return self.Ybar[: self.pilot_len]

    def validate(self):
        """블록 차원을 검사합니다."""
        if self.Ybar.shape != self.Y.shape or self.Ybar.shape != self.noise.shape:
            raise DimensionMismatchError("Ybar, Y, noise의 모양이 같아야 합니다.")

    def render(self) -> Dict:
        """블록 요약을 dict로 변환합니다."""
        return {
            "received_energy": float(np.linalg.norm(self.Ybar) ** 2),
            "residual_energy": float(np.linalg.norm(self.Y) ** 2),
            "decoded": self.decoded_mask.tolist(),
        }


@dataclass
class EmbbEstimate(BaseModel):
    """eMBB 채널 추정과 결합 결과를 담는 클래스입니다.

    Attributes:
        Hhat (np.ndarray): (E, M) MMSE 채널 추정값
        Xi (np.ndarray): (E,) 안테나당 추정 오차 분산
        combiners (np.ndarray): (E, M) MMSE 결합기 ω_e
        sinr (np.ndarray): (E,) SINR Γ_e
    """

    Hhat: np.ndarray
    Xi: np.ndarray
    combiners: np.ndarray
    sinr: np.ndarray

    def validate(self):
        """오차 분산과 SINR이 음수가 아닌지 검사합니다."""
        if np.any(self.Xi < 0) or np.any(self.sinr < 0):
            raise InvalidConfigError("추정 오차 분산과 SINR은 음수가 될 수 없습니다.")

    def render(self) -> Dict:
        """추정 요약을 dict로 변환합니다."""
        return {"Xi": self.Xi.tolist(), "sinr": self.sinr.tolist()}


def draw_payloads(rng: np.random.Generator, T: int, L: int, E: int) -> np.ndarray:
    """심볼당 전력 1/T인 QPSK eMBB 페이로드 (T−L, E)를 뽑습니다."""
    bits = rng.integers(0, 2, size=(2, T - L, E))
    symbols = ((1 - 2 * bits[0]) + 1j * (1 - 2 * bits[1])) / np.sqrt(2.0)
    return symbols / np.sqrt(T)


def draw_noise(rng: np.random.Generator, T: int, M: int, sigma2: float) -> np.ndarray:
    """CN(0, σ²) 잡음 블록 (T, M)을 뽑습니다."""
    if sigma2 == 0:
        return np.zeros((T, M), dtype=complex)
    return complex_normal(rng, (T, M), sigma2)


def embb_sequences(codebook: Codebook, payloads: np.ndarray) -> np.ndarray:
    """eMBB 장치별 전체 송신 시퀀스 s_e = [ψ_e; φ_e] (T, E)를 반환합니다."""
    if payloads.shape != (codebook.T - codebook.L, codebook.E):
        raise DimensionMismatchError(
            f"페이로드 모양은 {(codebook.T - codebook.L, codebook.E)}이어야 합니다: {payloads.shape}"
        )
    return np.vstack([codebook.Psi, payloads])


def synthesize_received(
    realization: ChannelRealization,
    codebook: Codebook,
    payloads: np.ndarray,
    sigma2: float,
    rng: Optional[np.random.Generator] = None,
    noise: Optional[np.ndarray] = None,
) -> ReceivedBlock:
    """eMBB와 활성 MTD 신호, 잡음을 더해 수신 블록 Ȳ를 만듭니다.

    Ȳ = Σ_e sqrt(ρ_e)·s_e·h_e^T + S·X + N 입니다.

    Args:
        realization (ChannelRealization): 채널 실현값
        codebook (Codebook): 코드북
        payloads (np.ndarray): (T−L, E) eMBB 페이로드
        sigma2 (float): 잡음 전력. 0이면 잡음이 없습니다.
        rng (Optional[np.random.Generator]): 잡음용 난수 생성기
        noise (Optional[np.ndarray]): 미리 뽑은 잡음. 주어지면 rng를 쓰지 않습니다.

    Returns:
        ReceivedBlock: 수신 블록

    Raises:
        DimensionMismatchError: 채널, 코드북, 페이로드 차원이 맞지 않을 때
    """
    M = realization.G.shape[1]
    if realization.H.shape[0] != codebook.E or realization.G.shape[0] != codebook.N:
        raise DimensionMismatchError("채널 수와 코드북의 장치 수가 다릅니다.")
    if realization.H.shape[1] != M:
        raise DimensionMismatchError("eMBB와 MTD 채널의 안테나 수가 다릅니다.")
    if noise is None:
        if sigma2 > 0 and rng is None:
            raise InvalidConfigError("잡음을 뽑으려면 rng가 필요합니다.")
        noise = draw_noise(rng, codebook.T, M, sigma2)
    elif noise.shape != (codebook.T, M):
        raise DimensionMismatchError(f"잡음 모양은 {(codebook.T, M)}이어야 합니다.")
    s_embb = embb_sequences(codebook, payloads)
    amplitude = np.sqrt(realization.rho_ul)[:, None]
    Ybar = s_embb @ (amplitude * realization.H) + codebook.S @ realization.X + noise
    return ReceivedBlock(
        Ybar=Ybar,
        pilot_len=codebook.L,
        noise_power=float(sigma2),
        embb_payload=payloads,
        noise=noise,
    )


def correlate_pilot(Yp: np.ndarray, psi_e: np.ndarray) -> np.ndarray:
    """파일럿 구간과 ψ_e의 상관 y_e = Ȳ_p^T·ψ_e^*를 계산합니다.

    파일럿끼리, 그리고 파일럿과 MTD 헤더가 직교하므로 y_e에는 다른 장치의 간섭이 없습니다.
    """
    return Yp.T @ psi_e.conj()


def mmse_estimate(
    y_e: np.ndarray, rho_e: float, beta_e: float, sigma2: float, pilot_energy: float
) -> Tuple[np.ndarray, float]:
    """안테나별 LMMSE로 h_e를 추정합니다.

    y_e = a·h_e + w, a = sqrt(ρ_e)·||ψ_e||², w ~ CN(0, ||ψ_e||²σ²) 모형에서
    ĥ_e = a·β_e/(a²β_e + σ²_eff)·y_e, Ξ_e = β_e − a²β_e²/(a²β_e + σ²_eff) 입니다.

    Args:
        y_e (np.ndarray): (M,) 파일럿 상관 출력
        rho_e (float): 송신 전력
        beta_e (float): 대규모 페이딩 계수
        sigma2 (float): 잡음 전력
        pilot_energy (float): ||ψ_e||²

    Returns:
        tuple: (ĥ_e (M,), Ξ_e)
    """
    validate_positive(beta_e, pilot_energy)
    validate_positive(rho_e, sigma2, allow_zero=True)
    gain = np.sqrt(rho_e) * pilot_energy
    denominator = gain**2 * beta_e + pilot_energy * sigma2
    if denominator == 0:
        return np.zeros_like(y_e), float(beta_e)
    hhat = (gain * beta_e / denominator) * y_e
    xi = beta_e - gain**2 * beta_e**2 / denominator
    return hhat, float(min(max(xi, 0.0), beta_e))


def mmse_combiner(Hhat: np.ndarray, sigma2: float) -> np.ndarray:
    """MMSE 결합기 ω_e = (σ²I + Σ_{j≠e} ĥ_j ĥ_j^H)^{-1} ĥ_e 를 장치별로 계산합니다.

    Args:
        Hhat (np.ndarray): (E, M) 채널 추정값
        sigma2 (float): 잡음 전력 (> 0)

    Returns:
        np.ndarray: (E, M) 결합기
    """
    validate_positive(sigma2)
    E, M = Hhat.shape
    full = Hhat.T @ Hhat.conj()
    combiners = np.empty_like(Hhat, dtype=complex)
    for e in range(E):
        h = Hhat[e]
        covariance = sigma2 * np.eye(M) + full - np.outer(h, h.conj())
        combiners[e] = solve(covariance, h, assume_a="her")
    return combiners


def sinr(
    realization: ChannelRealization,
    Hhat: np.ndarray,
    combiners: np.ndarray,
    codebook: Codebook,
    block: ReceivedBlock,
) -> np.ndarray:
    """페이로드 구간의 SINR Γ_e를 계산합니다.

    분자는 ρ_e·Σ_k|ω^H ĥ_e s_e[k]|², 분모는 활성 MTD 간섭, 다른 eMBB 간섭,
    추정 오차 항 ρ_e·Σ_k|ω^H h̃_e s_e[k]|², 결합된 실제 잡음의 합입니다.
    시뮬레이터가 지표로 계산하므로 실제 송신 심볼과 잡음을 사용합니다.

    Args:
        realization (ChannelRealization): 채널 실현값
        Hhat (np.ndarray): (E, M) 채널 추정값
        combiners (np.ndarray): (E, M) 결합기
        codebook (Codebook): 코드북
        block (ReceivedBlock): 수신 블록

    Returns:
        np.ndarray: (E,) SINR
    """
    L = codebook.L
    rho = realization.rho_ul
    payload_energy = np.sum(np.abs(block.embb_payload) ** 2, axis=0)
    active = realization.active_sequences
    mtd_energy = np.sum(np.abs(codebook.S[L:, active]) ** 2, axis=0)
    G_active = realization.X[active]
    noise_payload = block.noise[L:]
    error = Hhat - realization.H
    out = np.empty(codebook.E)
    for e in range(codebook.E):
        w = combiners[e].conj()
        desired = rho[e] * np.abs(Hhat[e] @ w) ** 2 * payload_energy[e]
        mtd = np.sum(np.abs(G_active @ w) ** 2 * mtd_energy)
        others = np.abs(realization.H @ w) ** 2 * rho * payload_energy
        embb = np.sum(np.delete(others, e))
        estimation = rho[e] * np.abs(error[e] @ w) ** 2 * payload_energy[e]
        noise = np.sum(np.abs(noise_payload @ w) ** 2)
        denominator = mtd + embb + estimation + noise
        out[e] = desired / denominator if denominator > 0 else np.inf
    return out


def transmission_rate(config: NetworkConfig) -> float:
    """eMBB 전송률 r을 반환합니다.

    기본은 b/(T−L) bpcu이며, literal_rate가 켜져 있으면 b/((T−L)·Ts)를 사용합니다.

    Raises:
        InvalidConfigError: T = L이라 페이로드 구간이 없을 때
    """
    payload_len = config.T - config.L
    if payload_len <= 0:
        raise InvalidConfigError("페이로드 구간이 없어 전송률을 정의할 수 없습니다.")
    if config.literal_rate:
        return config.bits / (payload_len * config.symbol_s)
    return config.bits / payload_len


def outage_threshold(rate: float) -> float:
    """복호 성공 SINR 문턱 2^r − 1을 반환합니다."""
    validate_positive(rate, allow_zero=True)
    with np.errstate(over="ignore"):
        return float(np.expm1(rate * np.log(2.0)))


def outage_decision(gamma_e: np.ndarray, rate: float) -> np.ndarray:
    """Γ_e ≥ 2^r − 1 이면 복호 성공으로 판정합니다. 경계값은 성공입니다."""
    return np.asarray(gamma_e) >= outage_threshold(rate)


def sic(
    Ybar: np.ndarray,
    codebook: Codebook,
    payloads: np.ndarray,
    Hhat: np.ndarray,
    decoded_mask: np.ndarray,
    rho: np.ndarray,
) -> np.ndarray:
    """복호에 성공한 eMBB 장치의 재구성 신호를 모든 T 슬롯에서 뺍니다.

    Y = Ȳ − Σ_{e 성공} sqrt(ρ_e)·s_e·ĥ_e^T. 항상 Ȳ에서 다시 계산하므로 반복 적용해도 같습니다.

    Returns:
        np.ndarray: (T, M) 잔여 신호
    """
    decoded = np.asarray(decoded_mask, dtype=bool)
    if not np.any(decoded):
        return Ybar.copy()
    s_embb = embb_sequences(codebook, payloads)[:, decoded]
    reconstruction = s_embb @ (np.sqrt(rho[decoded])[:, None] * Hhat[decoded])
    return Ybar - reconstruction


def estimate_channels(
    block: ReceivedBlock,
    codebook: Codebook,
    realization: ChannelRealization,
    sigma2: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """모든 eMBB 장치의 채널을 파일럿 상관과 MMSE로 추정합니다.

    Returns:
        tuple: (Hhat (E, M), Xi (E,))
    """
    M = block.Ybar.shape[1]
    Hhat = np.zeros((codebook.E, M), dtype=complex)
    Xi = np.zeros(codebook.E)
    for e in range(codebook.E):
        psi = codebook.Psi[:, e]
        y_e = correlate_pilot(block.Yp, psi)
        Hhat[e], Xi[e] = mmse_estimate(
            y_e,
            realization.rho_ul[e],
            realization.beta[e],
            sigma2,
            float(np.vdot(psi, psi).real),
        )
    return Hhat, Xi


def process_embb(
    block: ReceivedBlock,
    codebook: Codebook,
    realization: ChannelRealization,
    rate: float,
) -> Tuple[EmbbEstimate, ReceivedBlock]:
    """추정, 결합, SINR, 불능 판정, SIC를 차례로 수행합니다.

    Args:
        block (ReceivedBlock): 수신 블록
        codebook (Codebook): 코드북
        realization (ChannelRealization): 채널 실현값
        rate (float): 전송률 r

    Returns:
        tuple: (EmbbEstimate, SIC가 반영된 ReceivedBlock)
    """
    sigma2 = block.noise_power
    Hhat, Xi = estimate_channels(block, codebook, realization, sigma2)
    if codebook.E == 0:
        estimate = EmbbEstimate(Hhat=Hhat, Xi=Xi, combiners=Hhat.copy(), sinr=np.zeros(0))
        return estimate, block
    combiners = mmse_combiner(Hhat, sigma2)
    gamma = sinr(realization, Hhat, combiners, codebook, block)
    decoded = outage_decision(gamma, rate)
    Y = sic(block.Ybar, codebook, block.embb_payload, Hhat, decoded, realization.rho_ul)
    estimate = EmbbEstimate(Hhat=Hhat, Xi=Xi, combiners=combiners, sinr=gamma)
    estimate.validate()
    logger.debug("eMBB SINR %s, 복호 %s", np.round(gamma, 3).tolist(), decoded.tolist())
    return estimate, replace(block, Y=Y, decoded_mask=decoded)
