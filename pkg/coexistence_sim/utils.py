"""시뮬레이터 전반에서 사용하는 유틸리티 함수들을 제공합니다.

dB 변환, 원형 대칭 복소 가우시안 표본 생성, 시행별 난수 스트림 분기를 담당합니다.
"""

from typing import Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

# 난수 스트림 용도 구분자. 같은 시드라도 용도가 다르면 서로 독립인 스트림을 받습니다.
STREAM_TRIAL = 0
STREAM_CODEBOOK = 1
STREAM_STATE_EVOLUTION = 2
STREAM_PLACEMENT = 3


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    """dB 값을 선형 배율로 변환합니다."""
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value: ArrayLike) -> ArrayLike:
    """선형 배율을 dB 값으로 변환합니다.

    Args:
        value (ArrayLike): 0보다 큰 선형 값

    Returns:
        ArrayLike: 10·log10(value)
    """
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def complex_normal(
    rng: np.random.Generator, shape: Tuple[int, ...], variance: ArrayLike = 1.0
) -> np.ndarray:
    """CN(0, variance) 분포를 따르는 복소 표본을 생성합니다.

    실수부와 허수부는 각각 분산 variance/2의 독립 정규분포를 따릅니다.
    variance는 shape에 브로드캐스트 가능한 배열이어도 됩니다.

    Args:
        rng (np.random.Generator): 난수 생성기
        shape (tuple): 출력 모양
        variance (ArrayLike): 원소별 분산

    Returns:
        np.ndarray: complex128 배열
    """
    scale = np.sqrt(np.asarray(variance, dtype=float) / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def derive_rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """마스터 시드에서 (용도, 번호)로 분기한 독립 난수 생성기를 반환합니다.

    SeedSequence의 spawn_key를 사용하므로 결과는 호출 순서와 무관하며,
    병렬 실행에서도 시행 번호만으로 같은 스트림을 재현할 수 있습니다.

    Args:
        seed (int): 마스터 시드
        stream (int): 용도 구분자 (STREAM_* 상수)
        index (int): 시행 번호 등 스트림 안의 번호

    Returns:
        np.random.Generator: 분기된 난수 생성기
    """
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(index)))
    return np.random.default_rng(sequence)


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """시행 번호에 해당하는 난수 생성기를 반환합니다."""
    return derive_rng(seed, STREAM_TRIAL, trial_index)


def codebook_rng(seed: int, index: int = 0) -> np.random.Generator:
    """코드북 생성용 난수 생성기를 반환합니다."""
    return derive_rng(seed, STREAM_CODEBOOK, index)


def frobenius_norm(matrix: np.ndarray) -> float:
    """행렬의 Frobenius 노름을 float으로 반환합니다."""
    return float(np.linalg.norm(matrix))
