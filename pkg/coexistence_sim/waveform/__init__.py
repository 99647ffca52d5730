"""eMBB 파일럿과 MTD 코드북을 함께 설계하는 패키지입니다.

modules:
    base: Codebook, CandidatePool 자료형과 감지 행렬 조립, 파일 입출력을 정의합니다.
    pilots: 복소 Hadamard 기저, 충돌 확률과 z 결정, 파일럿 배정과 헤더 결합을 정의합니다.
    messages: 메시지 후보 집합과 최소 상관 메시지 선택을 정의합니다.
    design: 설정으로부터 전체 코드북을 만드는 함수를 정의합니다.
"""

from .base import (
    CandidatePool,
    Codebook,
    assemble_codebook,
    load_codebook,
    save_codebook,
)
from .design import build_codebook, combination_size, gaussian_codebook, hadamard_codebook
from .messages import candidate_pool, generate_messages, psk_alphabet, select_messages
from .pilots import (
    assign_pilots,
    build_headers,
    collision_curve,
    collision_probability,
    hadamard_complex,
    solve_z,
)

__all__ = [
    "CandidatePool",
    "Codebook",
    "assemble_codebook",
    "assign_pilots",
    "build_codebook",
    "build_headers",
    "candidate_pool",
    "collision_curve",
    "collision_probability",
    "combination_size",
    "gaussian_codebook",
    "generate_messages",
    "hadamard_codebook",
    "hadamard_complex",
    "load_codebook",
    "psk_alphabet",
    "save_codebook",
    "select_messages",
    "solve_z",
]
