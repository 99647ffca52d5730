"""복소 Hadamard 기저로 eMBB 파일럿과 MTD 헤더를 만드는 함수들을 정의합니다.

Functions:
    - hadamard_complex: 단위 크기 원소를 가진 복소 Hadamard 행렬
    - collision_probability / collision_curve / solve_z: 헤더 충돌 확률과 조합 크기 z
    - assign_pilots: 처음 E개 열을 파일럿으로, 나머지를 헤더 기저 B로 나눕니다.
    - build_headers: B의 무작위 z개 열을 음이 아닌 가중치로 결합해 헤더를 만듭니다.
"""

import logging
from typing import Tuple

import numpy as np
import pandas as pd
from scipy.linalg import hadamard
from scipy.special import comb

from ..customerror import InfeasibleCollisionError, InvalidConfigError, UnsupportedSizeError
from ..validation import validate_int, validate_power_of_two, validate_probability

logger = logging.getLogger(__name__)

# L=2 복소 Hadamard 블록. 원소는 QPSK 심볼이며 두 열은 직교합니다.
_BASE_2 = np.array([[1, 1], [1j, -1j]], dtype=complex)


def hadamard_complex(L: int) -> np.ndarray:
    """L×L 복소 Hadamard 행렬을 반환합니다.

    H_{L/2} ⊗ [[1, 1], [j, −j]] 로 만들며 원소는 단위 크기이고 H^H·H = L·I입니다.

    Args:
        L (int): 차수 (2의 거듭제곱)

    Raises:
        UnsupportedSizeError: L이 2의 거듭제곱이 아닐 때
    """
    validate_power_of_two(L, exception_type=UnsupportedSizeError)
    if L == 1:
        return np.ones((1, 1), dtype=complex)
    return np.kron(hadamard(L // 2).astype(complex), _BASE_2)


def collision_probability(L: int, E: int, z: int) -> float:
    """두 장치가 같은 헤더 기저 부분집합을 고를 확률 1/C(L−E, z)를 반환합니다."""
    validate_int(z, minimum=1)
    count = comb(L - E, z, exact=True)
    if count == 0:
        raise InvalidConfigError(f"z={z}는 남은 기저 수 {L - E}보다 클 수 없습니다.")
    return 1.0 / count


def meets_collision_target(probability: float, chi: float) -> bool:
    """충돌 확률이 목표 χ 이하인지 유효숫자 세 자리로 반올림해 비교합니다."""
    return float(f"{probability:.3g}") <= chi


def collision_curve(L: int, E: int) -> pd.DataFrame:
    """z = 1..L−E 에 대한 충돌 확률 표를 반환합니다.

    Returns:
        pd.DataFrame: z, collision_probability 열을 가진 표
    """
    z_values = np.arange(1, L - E + 1)
    return pd.DataFrame(
        {
            "z": z_values,
            "collision_probability": [collision_probability(L, E, int(z)) for z in z_values],
        }
    )


def solve_z(L: int, E: int, chi: float) -> int:
    """충돌 확률이 χ 이하가 되는 가장 작은 조합 크기 z를 찾습니다.

    C(L−E, z)는 z = (L−E)/2 에서 최대이므로 z ≤ floor((L−E)/2) 만 탐색합니다.

    Args:
        L (int): 파일럿 길이
        E (int): eMBB 장치 수
        chi (float): 목표 충돌 확률, (0, 1]

    Returns:
        int: 조합 크기 z

    Raises:
        InfeasibleCollisionError: 어떤 z로도 χ를 만족할 수 없을 때
    """
    validate_int(L, minimum=1)
    validate_int(E, minimum=0)
    validate_probability(chi, open_interval=False)
    if not L > E:
        raise InvalidConfigError(f"L > E 이어야 합니다: L={L}, E={E}")
    z_upper = max(1, (L - E) // 2)
    for z in range(1, z_upper + 1):
        if meets_collision_target(collision_probability(L, E, z), chi):
            return z
    smallest = collision_probability(L, E, z_upper)
    raise InfeasibleCollisionError(
        f"L={L}, E={E}에서 달성 가능한 최소 충돌 확률은 {smallest:.3g}로 χ={chi}보다 큽니다.",
        min_probability=smallest,
    )


def assign_pilots(
    hadamard_matrix: np.ndarray, E: int, scale: float = 1.0
) -> Tuple[np.ndarray, np.ndarray]:
    """처음 E개 열을 eMBB 파일럿으로, 나머지 L−E개 열을 헤더 기저 B로 나눕니다.

    Args:
        hadamard_matrix (np.ndarray): (L, L) 직교 기저
        E (int): eMBB 장치 수
        scale (float): 파일럿에 곱할 배율. 심볼당 전력 1/T를 맞출 때 1/sqrt(T)

    Returns:
        tuple: (Psi (L, E), B (L, L−E))

    Raises:
        InvalidConfigError: E ≥ L일 때
    """
    L = hadamard_matrix.shape[1]
    validate_int(E, minimum=0)
    if E >= L:
        raise InvalidConfigError(f"eMBB 장치 수 E={E}는 파일럿 길이 L={L}보다 작아야 합니다.")
    return scale * hadamard_matrix[:, :E], hadamard_matrix[:, E:]


def build_headers(
    B: np.ndarray, z: int, N: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """장치마다 B의 무작위 z개 열을 골라 음이 아닌 가중치로 결합합니다.

    가중치는 (0, 1]에서 균일하게 뽑으므로 모두 0이 되는 경우는 없습니다.
    헤더는 B가 펼치는 공간에 있으므로 모든 파일럿과 직교합니다.

    Args:
        B (np.ndarray): (L, L−E) 헤더 기저
        z (int): 조합 크기
        N (int): MTD 수
        rng (np.random.Generator): 난수 생성기

    Returns:
        tuple: (V (L, N), pi (N, z) 정렬된 기저 번호, vartheta (N, z) 가중치)

    Raises:
        InvalidConfigError: z가 1보다 작거나 B의 열 수보다 클 때
    """
    n_basis = B.shape[1]
    validate_int(z, minimum=1)
    if z > n_basis:
        raise InvalidConfigError(f"z={z}는 헤더 기저 수 {n_basis}보다 클 수 없습니다.")
    pi = np.sort(rng.random((N, n_basis)).argsort(axis=1)[:, :z], axis=1)
    vartheta = 1.0 - rng.random((N, z))
    V = np.einsum("lnz,nz->ln", B[:, pi], vartheta)
    return V, pi, vartheta
