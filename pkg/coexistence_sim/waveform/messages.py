"""MTD 메시지 후보 집합을 만들고 상호 상관이 작은 메시지를 고르는 함수들을 정의합니다."""

import itertools
import logging

import numpy as np

from ..customerror import EmptyPoolError
from ..validation import validate_int
from .base import CandidatePool

logger = logging.getLogger(__name__)


def psk_alphabet(kappa: int) -> np.ndarray:
    """단위 크기 κ-PSK 알파벳 exp(j2πk/κ)을 반환합니다. κ=2이면 {+1, −1}입니다."""
    validate_int(kappa, minimum=2)
    alphabet = np.exp(2j * np.pi * np.arange(kappa) / kappa)
    # 실수/허수축 위의 점은 정확한 값으로 맞춥니다.
    return np.round(alphabet.real, 15) + 1j * np.round(alphabet.imag, 15)


def candidate_pool(
    length: int, kappa: int, pool_cap: int, rng: np.random.Generator
) -> CandidatePool:
    """메시지 후보 행 Ũ와 상호 상관 Θ = |Ũ·Ũ^H|를 만듭니다.

    κ^length ≤ pool_cap 이면 알파벳 공간 전체를 사전순으로 열거하고,
    그렇지 않으면 pool_cap개의 서로 다른 행을 균일하게 비복원 추출합니다.
    Θ의 대각은 +∞로 가려 자기 자신과의 상관이 선택되지 않게 합니다.

    Args:
        length (int): 메시지 길이 T−L
        kappa (int): 알파벳 차수
        pool_cap (int): 후보 수 상한
        rng (np.random.Generator): 난수 생성기

    Returns:
        CandidatePool: 후보 집합
    """
    validate_int(length, pool_cap, minimum=1)
    alphabet = psk_alphabet(kappa)
    exhaustive = kappa**length <= pool_cap
    if exhaustive:
        indices = np.array(list(itertools.product(range(kappa), repeat=length)), dtype=int)
    else:
        indices = np.zeros((0, length), dtype=int)
        while indices.shape[0] < pool_cap:
            draw = rng.integers(0, kappa, size=(pool_cap - indices.shape[0], length))
            merged = np.vstack([indices, draw])
            _, first = np.unique(merged, axis=0, return_index=True)
            indices = merged[np.sort(first)]
    Utilde = alphabet[indices]
    Theta = np.abs(Utilde @ Utilde.conj().T)
    np.fill_diagonal(Theta, np.inf)
    return CandidatePool(Utilde=Utilde, Theta=Theta, exhaustive=bool(exhaustive))


def select_messages(pool: CandidatePool, Q: int) -> np.ndarray:
    """후보 집합에서 서로 상관이 작은 Q개의 행 번호를 고릅니다.

    첫 단계에서 i > j 인 쌍 중 Θ가 가장 작은 쌍(동률이면 사전순으로 가장 작은 (i, j))을 찾아
    i*를 먼저, j를 다음으로 배정합니다. 이후에는 이미 고른 행들과의 최대 상관이 가장 작은
    후보를 하나씩 더합니다. 고른 행은 후보에서 +∞로 가려 다시 선택되지 않습니다.

    Args:
        pool (CandidatePool): 후보 집합
        Q (int): 고를 메시지 수

    Returns:
        np.ndarray: 고른 행 번호 (Q,)

    Raises:
        EmptyPoolError: 후보 수가 Q보다 적을 때
    """
    validate_int(Q, minimum=1)
    if pool.size < Q:
        raise EmptyPoolError(f"후보 수 {pool.size}가 메시지 수 Q={Q}보다 적습니다.")
    if pool.size == 1:
        return np.zeros(1, dtype=int)
    lower = np.where(np.tri(pool.size, k=-1, dtype=bool), pool.Theta, np.inf)
    i_star, j_star = np.unravel_index(np.argmin(lower), lower.shape)
    chosen = [int(i_star), int(j_star)][:Q]
    masked = np.zeros(pool.size, dtype=bool)
    masked[chosen] = True
    while len(chosen) < Q:
        worst = np.max(pool.Theta[:, chosen], axis=1)
        worst[masked] = np.inf
        pick = int(np.argmin(worst))
        chosen.append(pick)
        masked[pick] = True
    return np.asarray(chosen, dtype=int)


def max_cross_correlation(pool: CandidatePool, chosen: np.ndarray) -> float:
    """고른 행들 사이의 최대 절댓값 상호 상관을 반환합니다."""
    if len(chosen) < 2:
        return 0.0
    block = pool.Theta[np.ix_(chosen, chosen)]
    return float(np.max(block[np.isfinite(block)]))


def generate_messages(
    T: int,
    L: int,
    Q: int,
    kappa: int,
    pool_cap: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """한 장치의 메시지 집합 {u^q}를 만듭니다.

    Args:
        T (int): 코히어런스 구간 길이
        L (int): 파일럿 길이
        Q (int): 메시지 수
        kappa (int): 알파벳 차수
        pool_cap (int): 후보 수 상한
        rng (np.random.Generator): 난수 생성기

    Returns:
        np.ndarray: (Q, T−L) 메시지 행렬. 각 행이 하나의 메시지입니다.
    """
    pool = candidate_pool(T - L, kappa, pool_cap, rng)
    chosen = select_messages(pool, Q)
    logger.debug(
        "메시지 %s 선택, 최대 상호 상관 %.3g",
        chosen.tolist(),
        max_cross_correlation(pool, chosen),
    )
    return pool.Utilde[chosen]
