"""설정으로부터 전체 코드북을 만드는 조립 함수를 정의합니다."""

import logging
from typing import Optional

import numpy as np

from ..config import NetworkConfig
from ..customerror import InfeasibleCollisionError, InvalidConfigError
from ..utils import complex_normal
from .base import Codebook, assemble_codebook
from .messages import generate_messages
from .pilots import assign_pilots, build_headers, hadamard_complex, solve_z

logger = logging.getLogger(__name__)


def combination_size(config: NetworkConfig) -> int:
    """코드북에 사용할 조합 크기 z를 정합니다.

    χ를 달성할 수 없는 (L, E)에서는 실험을 멈추지 않고 충돌 확률이 가장 작은
    z = max(1, floor((L−E)/2))를 쓰고 경고를 남깁니다. 직접 호출한 solve_z는 그대로 예외를 던집니다.
    """
    try:
        return solve_z(config.L, config.E, config.chi)
    except InfeasibleCollisionError as exc:
        z = max(1, (config.L - config.E) // 2)
        logger.warning(
            "L=%d, E=%d에서 χ=%g를 달성할 수 없어 z=%d (충돌 확률 %.3g)을 사용합니다.",
            config.L,
            config.E,
            config.chi,
            z,
            exc.min_probability,
        )
        return z


def _message_sets(config: NetworkConfig, rng: np.random.Generator) -> np.ndarray:
    """장치별 메시지 집합 (N, Q, T−L)을 만듭니다.

    후보 집합을 전부 열거할 수 있으면 선택 결과가 결정적이므로 한 번만 계산해 공유합니다.
    """
    length = config.T - config.L
    if length < 1:
        raise InvalidConfigError("메시지 구간이 없으므로 T > L 이어야 합니다.")
    exhaustive = config.kappa**length <= config.pool_cap
    if config.shared_messages or exhaustive:
        messages = generate_messages(
            config.T, config.L, config.Q, config.kappa, config.pool_cap, rng
        )
        return np.broadcast_to(messages, (config.N,) + messages.shape).copy()
    return np.stack(
        [
            generate_messages(config.T, config.L, config.Q, config.kappa, config.pool_cap, rng)
            for _ in range(config.N)
        ]
    )


def hadamard_codebook(
    config: NetworkConfig, rng: np.random.Generator, seed: Optional[int] = None
) -> Codebook:
    """Hadamard 파일럿, 조합 헤더, 최소 상관 메시지로 코드북을 만듭니다.

    파일럿은 1/sqrt(T)로 배율을 맞춰 심볼당 전력이 1/T가 되게 합니다.

    Args:
        config (NetworkConfig): 시나리오 설정
        rng (np.random.Generator): 코드북 전용 난수 생성기
        seed (Optional[int]): 파일에 기록할 시드

    Returns:
        Codebook: 조립된 코드북
    """
    basis = hadamard_complex(config.L)
    Psi, B = assign_pilots(basis, config.E, scale=1.0 / np.sqrt(config.T))
    z = combination_size(config)
    V, pi, vartheta = build_headers(B, z, config.N, rng)
    messages = _message_sets(config, rng)
    codebook = assemble_codebook(
        Psi, V, messages, z=z, pi=pi, vartheta=vartheta, kappa=config.kappa, seed=seed
    )
    logger.info("Hadamard 코드북 생성: %s", codebook.render())
    return codebook


def gaussian_codebook(
    config: NetworkConfig, rng: np.random.Generator, seed: Optional[int] = None
) -> Codebook:
    """직교성을 설계하지 않은 Gaussian 파일럿과 시퀀스로 비교용 코드북을 만듭니다.

    파일럿 원소는 CN(0, 1/T)이고, MTD 시퀀스는 시퀀스마다 독립인 CN 표본을
    단위 노름으로 정규화한 것입니다. 같은 장치의 메시지도 헤더를 공유하지 않습니다.
    """
    n_seq = config.n_sequences
    Psi = complex_normal(rng, (config.L, config.E), 1.0 / config.T)
    raw = complex_normal(rng, (config.T, n_seq))
    S = raw / np.linalg.norm(raw, axis=0)
    codebook = Codebook(
        Psi=Psi,
        V=raw[: config.L, :: config.Q],
        U=raw[config.L :],
        S=S,
        z=0,
        pi=np.zeros((config.N, 0), dtype=int),
        vartheta=np.zeros((config.N, 0)),
        kappa=0,
        q_messages=config.Q,
        seed=seed,
        kind="gaussian",
    )
    codebook.validate()
    logger.info("Gaussian 비교 코드북 생성: %s", codebook.render())
    return codebook


def build_codebook(
    config: NetworkConfig, rng: np.random.Generator, seed: Optional[int] = None
) -> Codebook:
    """설정의 codebook_kind에 따라 코드북을 만듭니다."""
    if config.codebook_kind == "gaussian":
        return gaussian_codebook(config, rng, seed)
    return hadamard_codebook(config, rng, seed)
