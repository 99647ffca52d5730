"""시나리오 설정, 대규모 페이딩, 전력 제어, 시행별 채널/활성 상태 생성을 정의합니다.

classes:
    - NetworkConfig: 셀 시나리오의 모든 상수를 담는 설정 클래스
    - DevicePlacement: 장치 위치와 대규모 페이딩 계수, 전력 제어 결과를 담는 클래스
    - ChannelRealization: 한 시행의 소규모 페이딩 채널과 활성/메시지 지시자를 담는 클래스

functions:
    - path_loss_db, large_scale_coefficient, distance_for_coefficient
    - uplink_power_mtd, average_snr, required_coefficient
    - place_devices, draw_channels, draw_activity
"""

import dataclasses
import logging
import typing
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .base import BaseModel, ParentConfig
from .customerror import InvalidConfigError, OutOfDomainError
from .utils import complex_normal, db_to_linear, linear_to_db
from .validation import (
    validate_int,
    validate_positive,
    validate_power_of_two,
    validate_probability,
    validate_type,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# 경로 손실 모델 130 + 37.6·log10(d[km]) dB
PATH_LOSS_INTERCEPT_DB = 130.0
PATH_LOSS_SLOPE_DB = 37.6

SOLVERS = ("amp", "admm", "sbl", "somp")
CODEBOOK_KINDS = ("hadamard", "gaussian")

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}
_NONE_WORDS = {"", "none", "null", "auto"}


def _coerce(value, annotation):
    """설정 파일의 문자열 값을 필드 타입에 맞게 변환합니다."""
    origin = typing.get_origin(annotation)
    args = typing.get_args(annotation)
    if origin is Union and type(None) in args:
        if isinstance(value, str) and value.strip().lower() in _NONE_WORDS:
            return None
        if value is None:
            return None
        inner = next(arg for arg in args if arg is not type(None))
        return _coerce(value, inner)
    if origin in (tuple, Tuple):
        items = value.split(",") if isinstance(value, str) else list(value)
        return tuple(_coerce(item, args[0]) for item in items if str(item).strip())
    if not isinstance(value, str):
        if annotation is float and isinstance(value, (int, np.integer)):
            return float(value)
        return value
    text = value.strip()
    try:
        if annotation is bool:
            if text.lower() in _TRUE_WORDS:
                return True
            if text.lower() in _FALSE_WORDS:
                return False
            raise ValueError(text)
        if annotation is int:
            return int(text)
        if annotation is float:
            return float(text)
    except ValueError as exc:
        raise InvalidConfigError(f"'{text}'를 {annotation.__name__}로 변환할 수 없습니다.") from exc
    return text


@dataclass(frozen=True)
class NetworkConfig(BaseModel, ParentConfig):
    """셀 시나리오의 모든 상수를 담는 불변 설정 클래스입니다.

    필드 이름은 설정 파일의 key와 같습니다. 자주 쓰는 기호는 N, E, M, T, L, Q
    속성으로도 접근할 수 있습니다. 생성 시 validate()로 불변 조건을 검사합니다.

    Attributes:
        n_mtds (int): MTD 수 N
        n_embb (int): eMBB 장치 수 E
        antennas (int): 기지국 안테나 수 M
        coherence_len (int): 코히어런스 구간 길이 T (심볼)
        pilot_len (int): 파일럿 길이 L (심볼, 2의 거듭제곱)
        q_messages (int): MTD 당 메시지 수 Q
        epsilon (float): 코히어런스 구간 당 활성 확률
        kappa (int): 메시지 후보 알파벳 차수
        chi (float): 목표 헤더 충돌 확률
        p_max_w (float): MTD 최대 송신 전력 (W)
        rho_max_w (float): eMBB 최대 송신 전력 (W)
        noise_w (float): 잡음 전력 σ² (W)
        cell_radius_m (float): 셀 반경 (m)
        inner_radius_m (float): 배치 환형의 안쪽 반경 (m)
        bits (int): eMBB 페이로드 비트 수 b
        symbol_s (float): 심볼 시간 Ts (s)
        seed (int): 마스터 시드
        trials (int): Monte-Carlo 시행 수
        solver (str): amp, admm, sbl, somp 중 하나
        tol (float): 수렴 허용 오차 Δ
        t_max (int): 최대 반복 횟수
        mu (Optional[float]): ℓ2,1 정규화 가중치. None이면 자동 설정
        rho (float): ADMM 벌점 계수
        k_max (Optional[int]): SOMP 최대 지지집합 크기. None이면 ceil(2εN)
        se_samples (int): AMP 상태 진화 표본 수. 0이면 경험적 잔차 공분산 사용
        amp_shrinkage (float): AMP 경험적 잔차 공분산을 등방 행렬 쪽으로 당기는 비율. 기본 0
        snr_mtd_db (float): MTD 평균 수신 SNR (dB)
        snr_embb_db (float): eMBB 평균 수신 SNR (dB)
        pool_cap (int): 메시지 후보 집합 최대 크기
        shared_messages (bool): 모든 MTD가 같은 메시지 집합을 쓰는지 여부
        freeze_placement (bool): 시행마다 배치를 다시 뽑지 않을지 여부
        regenerate_codebook (bool): 시행마다 코드북을 다시 만들지 여부
        literal_rate (bool): 전송률에 Ts를 곱하는 문자 그대로의 식을 쓸지 여부
        codebook_kind (str): hadamard 또는 gaussian
        pfa_targets (Tuple[float, ...]): PMD를 보고할 PFA 목표값들
        roc_grid (int): ROC 임계값 격자 크기
        zeta (Optional[float]): 고정 감지 문턱 ζ. None이면 첫 PFA 목표에 맞춰 보정
    """

    n_mtds: int = 1000
    n_embb: int = 4
    antennas: int = 32
    coherence_len: int = 256
    pilot_len: int = 32
    q_messages: int = 2
    epsilon: float = 0.01
    kappa: int = 4
    chi: float = 1e-6
    p_max_w: float = 0.1
    rho_max_w: float = 0.1
    noise_w: float = 2e-13
    cell_radius_m: float = 250.0
    inner_radius_m: float = 35.0
    bits: int = 128
    symbol_s: float = 16e-6
    seed: int = 0
    trials: int = 1000
    solver: str = "sbl"
    tol: float = 1e-4
    t_max: int = 200
    mu: Optional[float] = None
    rho: float = 1.0
    k_max: Optional[int] = None
    se_samples: int = 0
    amp_shrinkage: float = 0.0
    snr_mtd_db: float = 5.0
    snr_embb_db: float = 25.0
    pool_cap: int = 4096
    shared_messages: bool = False
    freeze_placement: bool = False
    regenerate_codebook: bool = False
    literal_rate: bool = False
    codebook_kind: str = "hadamard"
    pfa_targets: Tuple[float, ...] = (1e-2, 1e-3)
    roc_grid: int = 200
    zeta: Optional[float] = None

    def __post_init__(self):
        """생성 직후 불변 조건을 검사합니다."""
        self.validate()

    @property
    def N(self) -> int:  # noqa: D102
        return self.n_mtds

    @property
    def E(self) -> int:  # noqa: D102
        return self.n_embb

    @property
    def M(self) -> int:  # noqa: D102
        return self.antennas

    @property
    def T(self) -> int:  # noqa: D102
        return self.coherence_len

    @property
    def L(self) -> int:  # noqa: D102
        return self.pilot_len

    @property
    def Q(self) -> int:  # noqa: D102
        return self.q_messages

    @property
    def n_sequences(self) -> int:
        """감지 대상 시퀀스 수 NQ를 반환합니다."""
        return self.n_mtds * self.q_messages

    @property
    def xi(self) -> float:
        """X의 행이 0이 아닐 확률 ε/Q를 반환합니다."""
        return self.epsilon / self.q_messages

    @property
    def somp_k_max(self) -> int:
        """SOMP 지지집합 상한. 지정하지 않으면 기대 활성 수의 두 배입니다."""
        if self.k_max is not None:
            return self.k_max
        return max(1, int(np.ceil(2.0 * self.epsilon * self.n_mtds)))

    def replace(self, **changes) -> "NetworkConfig":
        """일부 필드를 바꾼 새 설정을 반환합니다."""
        return dataclasses.replace(self, **changes)

    def with_value(self, key: str, raw) -> "NetworkConfig":
        """필드 하나를 설정 파일 형식의 값으로 바꾼 새 설정을 반환합니다.

        Raises:
            InvalidConfigError: 알 수 없는 key이거나 값을 변환할 수 없을 때
        """
        hints = typing.get_type_hints(type(self))
        if key not in {item.name for item in dataclasses.fields(self)}:
            raise InvalidConfigError(f"알 수 없는 설정 key입니다: {key}")
        return self.replace(**{key: _coerce(raw, hints[key])})

    def validate(self):
        """설정값의 불변 조건을 검사합니다.

        Raises:
            InvalidConfigError: E < L ≤ T, Q ≥ 1, 0 < ε < 1, 양의 전력 등의 조건을 어길 때
        """
        validate_int(self.n_mtds, self.antennas, self.q_messages, self.trials, minimum=1)
        validate_int(self.t_max, self.roc_grid, minimum=1)
        validate_int(self.n_embb, self.bits, self.se_samples, self.seed, minimum=0)
        validate_int(self.kappa, minimum=2)
        validate_int(self.coherence_len, self.pilot_len, minimum=1)
        validate_int(self.pool_cap, minimum=self.q_messages)
        validate_int(self.k_max, minimum=1, disallow_none=False)
        validate_power_of_two(self.pilot_len)
        if not self.n_embb < self.pilot_len <= self.coherence_len:
            raise InvalidConfigError(
                f"E < L ≤ T를 만족해야 합니다: E={self.n_embb}, L={self.pilot_len}, T={self.coherence_len}"
            )
        validate_probability(self.epsilon)
        validate_probability(self.chi, open_interval=False)
        for target in self.pfa_targets:
            validate_probability(target)
        validate_positive(
            self.p_max_w,
            self.rho_max_w,
            self.noise_w,
            self.cell_radius_m,
            self.inner_radius_m,
            self.symbol_s,
            self.tol,
            self.rho,
        )
        if self.mu is not None:
            validate_positive(self.mu)
        if self.zeta is not None:
            validate_positive(self.zeta, allow_zero=True)
        validate_type((int, float), self.amp_shrinkage, disallow_none=True)
        if not 0.0 <= self.amp_shrinkage < 1.0:
            raise InvalidConfigError(f"amp_shrinkage는 [0, 1) 범위여야 합니다: {self.amp_shrinkage}")
        if self.inner_radius_m >= self.cell_radius_m:
            raise InvalidConfigError("안쪽 반경은 셀 반경보다 작아야 합니다.")
        validate_type((int, float), self.snr_mtd_db, self.snr_embb_db, disallow_none=True)
        validate_type(bool, self.shared_messages, self.freeze_placement, disallow_none=True)
        validate_type(bool, self.regenerate_codebook, self.literal_rate, disallow_none=True)
        if self.solver not in SOLVERS:
            raise InvalidConfigError(f"solver는 {SOLVERS} 중 하나여야 합니다: {self.solver}")
        if self.codebook_kind not in CODEBOOK_KINDS:
            raise InvalidConfigError(
                f"codebook_kind는 {CODEBOOK_KINDS} 중 하나여야 합니다: {self.codebook_kind}"
            )

    def render(self) -> Dict:
        """설정을 key=value 파일 이름을 key로 갖는 dict로 변환합니다."""
        out = {}
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            out[item.name] = list(value) if isinstance(value, tuple) else value
        return out

    def to_text(self) -> str:
        """설정을 key=value 텍스트로 직렬화합니다. None 값은 생략합니다."""
        lines = []
        for key, value in self.remove_none_item(self.render()).items():
            if isinstance(value, list):
                value = ",".join(repr(item) for item in value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: Dict) -> "NetworkConfig":
        """딕셔너리에서 NetworkConfig 객체를 생성합니다.

        값이 문자열이면 필드 타입에 맞게 변환합니다. 알 수 없는 key는 허용하지 않습니다.

        Args:
            data (dict): 설정 딕셔너리

        Returns:
            NetworkConfig: 생성된 설정

        Raises:
            InvalidConfigError: 알 수 없는 key가 있거나 값을 변환할 수 없을 때
        """
        hints = typing.get_type_hints(cls)
        names = {item.name for item in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise InvalidConfigError(f"알 수 없는 설정 key입니다: {', '.join(unknown)}")
        kwargs = {key: _coerce(value, hints[key]) for key, value in data.items()}
        return cls(**kwargs)


def path_loss_db(d_km: ArrayLike) -> ArrayLike:
    """거리에 따른 경로 손실 130 + 37.6·log10(d)를 dB로 반환합니다.

    Args:
        d_km (ArrayLike): 기지국과의 거리 (km)

    Raises:
        OutOfDomainError: 거리가 0 이하일 때
    """
    d = np.asarray(d_km, dtype=float)
    if np.any(~(d > 0)):
        raise OutOfDomainError(f"거리는 0보다 커야 합니다: {d_km}")
    out = PATH_LOSS_INTERCEPT_DB + PATH_LOSS_SLOPE_DB * np.log10(d)
    return float(out) if out.ndim == 0 else out


def large_scale_coefficient(d_km: ArrayLike) -> ArrayLike:
    """거리에 따른 선형 대규모 페이딩 계수 10^(-PL/10)을 반환합니다."""
    out = db_to_linear(-np.asarray(path_loss_db(d_km)))
    return float(out) if np.ndim(out) == 0 else out


def distance_for_coefficient(coefficient: float) -> float:
    """대규모 페이딩 계수가 주어진 값이 되는 거리(km)를 반환합니다."""
    validate_positive(coefficient)
    loss_db = -float(linear_to_db(coefficient))
    return float(10.0 ** ((loss_db - PATH_LOSS_INTERCEPT_DB) / PATH_LOSS_SLOPE_DB))


def uplink_power_mtd(gamma_n: ArrayLike, gamma_min: float, p_max: float) -> ArrayLike:
    """전력 제어에 따른 송신 전력 p_max·γ_min/γ_n을 반환합니다.

    모든 장치의 평균 수신 전력 p_n·γ_n은 p_max·γ_min으로 같아집니다.
    eMBB 장치에도 (ρ_max, β_min)으로 같은 규칙을 적용합니다.

    Args:
        gamma_n (ArrayLike): 장치별 대규모 페이딩 계수
        gamma_min (float): 셀 가장자리 계수
        p_max (float): 최대 송신 전력 (W)

    Raises:
        InvalidConfigError: γ_n < γ_min 인 장치가 있을 때 (셀 밖 배치)
    """
    validate_positive(gamma_min, p_max)
    gamma = np.asarray(gamma_n, dtype=float)
    if np.any(gamma < gamma_min * (1.0 - 1e-9)):
        raise InvalidConfigError("셀 가장자리보다 약한 대규모 페이딩 계수를 가진 장치가 있습니다.")
    out = p_max * gamma_min / gamma
    return float(out) if out.ndim == 0 else out


def average_snr(p_max: float, gamma_min: float, sigma2: float) -> float:
    """평균 수신 SNR 10·log10(p_max·γ_min/σ²)를 dB로 반환합니다."""
    validate_positive(p_max, gamma_min, sigma2)
    return float(linear_to_db(p_max * gamma_min / sigma2))


def required_coefficient(snr_db: float, p_max: float, sigma2: float) -> float:
    """목표 SNR을 얻기 위한 셀 가장자리 계수 σ²·10^(SNR/10)/p_max를 반환합니다."""
    validate_positive(p_max, sigma2)
    return float(sigma2 * db_to_linear(snr_db) / p_max)


@dataclass
class DevicePlacement(BaseModel):
    """장치 위치, 대규모 페이딩 계수, 전력 제어 결과를 담는 클래스입니다.

    Attributes:
        d_embb_km (np.ndarray): eMBB 장치 거리 (E,)
        d_mtd_km (np.ndarray): MTD 거리 (N,)
        beta (np.ndarray): eMBB 대규모 페이딩 계수 β_e (E,)
        gamma (np.ndarray): MTD 대규모 페이딩 계수 γ_n (N,)
        gamma_min (float): MTD 셀 가장자리 계수
        beta_min (float): eMBB 셀 가장자리 계수
        p_ul (np.ndarray): MTD 송신 전력 (N,)
        rho_ul (np.ndarray): eMBB 송신 전력 (E,)
    """

    d_embb_km: np.ndarray
    d_mtd_km: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    gamma_min: float
    beta_min: float
    p_ul: np.ndarray
    rho_ul: np.ndarray

    @property
    def mtd_received_power(self) -> float:
        """모든 MTD에 공통인 평균 수신 전력 p_n·γ_n을 반환합니다."""
        return float(self.p_ul[0] * self.gamma[0]) if self.gamma.size else 0.0

    def validate(self):
        """계수가 모두 양수인지 검사합니다."""
        if np.any(self.beta <= 0) or np.any(self.gamma <= 0):
            raise InvalidConfigError("대규모 페이딩 계수는 모두 양수여야 합니다.")

    def render(self) -> Dict:
        """배치 요약을 dict로 변환합니다."""
        return {
            "gamma_min": self.gamma_min,
            "beta_min": self.beta_min,
            "mtd_received_power": self.mtd_received_power,
            "d_mtd_km_mean": float(self.d_mtd_km.mean()) if self.d_mtd_km.size else None,
            "d_embb_km_mean": float(self.d_embb_km.mean()) if self.d_embb_km.size else None,
        }


@dataclass
class ChannelRealization(BaseModel):
    """한 시행의 채널과 활성/메시지 지시자를 담는 클래스입니다.

    q_choice는 0부터 시작하는 메시지 번호이며 비활성 장치는 -1입니다.
    장치 n의 메시지 q는 평탄화 번호 n·Q + q에 대응합니다.

    Attributes:
        H (np.ndarray): eMBB 채널 (E, M)
        Gtilde (np.ndarray): MTD 소규모 페이딩 채널 (N, M)
        G (np.ndarray): MTD 유효 채널 sqrt(p_n)·g̃_n (N, M)
        alpha (np.ndarray): 장치 활성 여부 (N,) bool
        q_choice (np.ndarray): 활성 장치가 고른 메시지 번호 (N,) int
        alpha_seq (np.ndarray): 시퀀스 전송 지시자 (NQ,) bool
        rho_ul (np.ndarray): eMBB 송신 전력 (E,)
        beta (np.ndarray): eMBB 대규모 페이딩 계수 (E,)
        slab_variance (np.ndarray): MTD 유효 채널 분산 p_n·γ_n (N,)
    """

    H: np.ndarray
    Gtilde: np.ndarray
    G: np.ndarray
    alpha: np.ndarray
    q_choice: np.ndarray
    alpha_seq: np.ndarray
    rho_ul: np.ndarray = field(default_factory=lambda: np.zeros(0))
    beta: np.ndarray = field(default_factory=lambda: np.zeros(0))
    slab_variance: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n_active(self) -> int:
        """전송된 시퀀스 수 |K|를 반환합니다."""
        return int(np.count_nonzero(self.alpha))

    @property
    def active_sequences(self) -> np.ndarray:
        """전송된 시퀀스의 평탄화 번호를 반환합니다."""
        return np.flatnonzero(self.alpha_seq)

    @property
    def X(self) -> np.ndarray:
        """행 희소 행렬 X (NQ, M). 전송된 시퀀스 행에 g_n이 놓입니다."""
        n_seq = self.alpha_seq.size
        out = np.zeros((n_seq, self.G.shape[1]), dtype=complex)
        active = np.flatnonzero(self.alpha)
        q = n_seq // max(self.alpha.size, 1)
        out[active * q + self.q_choice[active]] = self.G[active]
        return out

    def validate(self):
        """시퀀스 지시자의 블록 구조를 검사합니다."""
        q = self.alpha_seq.size // max(self.alpha.size, 1)
        blocks = np.asarray(self.alpha_seq, dtype=int).reshape(-1, q).sum(axis=1)
        if np.any(blocks != np.asarray(self.alpha, dtype=int)):
            raise InvalidConfigError("장치마다 전송된 시퀀스는 활성일 때 정확히 하나여야 합니다.")

    def render(self) -> Dict:
        """시행 요약을 dict로 변환합니다."""
        return {"n_active": self.n_active, "active_sequences": self.active_sequences.tolist()}


def _annulus_distances(
    rng: np.random.Generator, count: int, inner_m: float, outer_m: float
) -> np.ndarray:
    """환형 영역에 면적 균일하게 놓인 장치의 거리(km)를 뽑습니다."""
    inner_m = min(inner_m, outer_m)
    radius_sq = rng.uniform(inner_m**2, outer_m**2, size=count)
    return np.sqrt(radius_sq) / 1000.0


def edge_radius_m(coefficient_min: float, cell_radius_m: float) -> float:
    """가장자리 계수가 정해졌을 때 배치에 사용할 바깥 반경(m)을 반환합니다.

    가장자리 계수가 셀 반경의 계수보다 크면 그 계수가 되는 거리로 줄입니다.
    """
    return min(cell_radius_m, 1000.0 * distance_for_coefficient(coefficient_min))


def place_devices(config: NetworkConfig, rng: np.random.Generator) -> DevicePlacement:
    """장치를 셀 안에 무작위로 배치하고 전력 제어를 적용합니다.

    γ_min과 β_min은 목표 SNR에서 역산하므로 수신 SNR 축이 설정값과 정확히 일치합니다.

    Args:
        config (NetworkConfig): 시나리오 설정
        rng (np.random.Generator): 난수 생성기

    Returns:
        DevicePlacement: 배치 결과
    """
    gamma_min = required_coefficient(config.snr_mtd_db, config.p_max_w, config.noise_w)
    beta_min = required_coefficient(config.snr_embb_db, config.rho_max_w, config.noise_w)
    mtd_edge = edge_radius_m(gamma_min, config.cell_radius_m)
    embb_edge = edge_radius_m(beta_min, config.cell_radius_m)
    d_mtd = _annulus_distances(rng, config.N, config.inner_radius_m, mtd_edge)
    d_embb = _annulus_distances(rng, config.E, config.inner_radius_m, embb_edge)
    gamma = np.maximum(np.asarray(large_scale_coefficient(d_mtd)).reshape(-1), gamma_min)
    beta = np.maximum(np.asarray(large_scale_coefficient(d_embb)).reshape(-1), beta_min)
    placement = DevicePlacement(
        d_embb_km=d_embb,
        d_mtd_km=d_mtd,
        beta=beta,
        gamma=gamma,
        gamma_min=gamma_min,
        beta_min=beta_min,
        p_ul=np.asarray(uplink_power_mtd(gamma, gamma_min, config.p_max_w)).reshape(-1),
        rho_ul=np.asarray(uplink_power_mtd(beta, beta_min, config.rho_max_w)).reshape(-1),
    )
    placement.validate()
    return placement


def draw_activity(
    config: NetworkConfig, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """MTD 활성 여부와 메시지 선택을 뽑습니다.

    Args:
        config (NetworkConfig): 시나리오 설정
        rng (np.random.Generator): 난수 생성기

    Returns:
        tuple: (alpha (N,) bool, q_choice (N,) int, alpha_seq (NQ,) bool)
    """
    alpha = rng.random(config.N) < config.epsilon
    q_choice = rng.integers(0, config.Q, size=config.N)
    q_choice = np.where(alpha, q_choice, -1)
    alpha_seq = np.zeros(config.n_sequences, dtype=bool)
    active = np.flatnonzero(alpha)
    alpha_seq[active * config.Q + q_choice[active]] = True
    return alpha, q_choice, alpha_seq


def draw_channels(
    config: NetworkConfig, placement: DevicePlacement, rng: np.random.Generator
) -> ChannelRealization:
    """한 시행의 채널 h_e ~ CN(0, β_e I), g̃_n ~ CN(0, γ_n I)와 활성 상태를 뽑습니다.

    Args:
        config (NetworkConfig): 시나리오 설정
        placement (DevicePlacement): 장치 배치
        rng (np.random.Generator): 시행 전용 난수 생성기

    Returns:
        ChannelRealization: 채널 실현값
    """
    H = complex_normal(rng, (config.E, config.M), placement.beta[:, None])
    Gtilde = complex_normal(rng, (config.N, config.M), placement.gamma[:, None])
    G = np.sqrt(placement.p_ul)[:, None] * Gtilde
    alpha, q_choice, alpha_seq = draw_activity(config, rng)
    realization = ChannelRealization(
        H=H,
        Gtilde=Gtilde,
        G=G,
        alpha=alpha,
        q_choice=q_choice,
        alpha_seq=alpha_seq,
        rho_ul=placement.rho_ul,
        beta=placement.beta,
        slab_variance=placement.p_ul * placement.gamma,
    )
    logger.debug("활성 MTD %d개, 전송 시퀀스 %s", realization.n_active, realization.active_sequences)
    return realization
