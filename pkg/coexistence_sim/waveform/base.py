"""코드북 자료형과 감지 행렬 조립, 파일 입출력을 정의합니다.

Classes:
    - CandidatePool: 메시지 후보 행과 상호 상관 행렬을 담는 클래스
    - Codebook: eMBB 파일럿, MTD 헤더와 메시지, 감지 행렬 S를 담는 불변 클래스

Functions:
    - assemble_codebook: 헤더와 메시지를 이어 붙이고 열을 정규화해 S를 만듭니다.
    - save_codebook / load_codebook: 코드북을 npz 파일로 저장하고 읽습니다.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from ..base import BaseModel
from ..customerror import DimensionMismatchError, InvalidConfigError
from ..validation import validate_shape

logger = logging.getLogger(__name__)

# 파일럿/헤더 직교성 검사 허용 오차
ORTHOGONALITY_TOL = 1e-10

CODEBOOK_FORMAT_VERSION = 1


@dataclass
class CandidatePool(BaseModel):
    """메시지 후보 행 Ũ와 행 사이의 절댓값 상호 상관 Θ를 담는 클래스입니다.

    Attributes:
        Utilde (np.ndarray): (P, T−L) 후보 행렬
        Theta (np.ndarray): (P, P) 대칭 상관 행렬. 대각은 +∞로 가립니다.
        exhaustive (bool): 알파벳 공간 전체를 열거했는지 여부
    """

    Utilde: np.ndarray
    Theta: np.ndarray
    exhaustive: bool = False

    @property
    def size(self) -> int:
        """후보 수 P를 반환합니다."""
        return self.Utilde.shape[0]

    def validate(self):
        """Θ가 대칭이고 음이 아닌지 검사합니다."""
        validate_shape(self.Theta, (self.size, self.size), "Theta")
        finite = np.where(np.isfinite(self.Theta), self.Theta, 0.0)
        if np.any(finite < 0) or not np.allclose(finite, finite.T):
            raise InvalidConfigError("Theta는 음이 아닌 대칭 행렬이어야 합니다.")

    def render(self) -> Dict:
        """후보 집합 요약을 dict로 변환합니다."""
        return {"size": self.size, "length": self.Utilde.shape[1], "exhaustive": self.exhaustive}


@dataclass(frozen=True)
class Codebook(BaseModel):
    """eMBB 파일럿과 MTD 코드북, 조립된 감지 행렬을 담는 불변 클래스입니다.

    감지 행렬 S의 열 n·Q+q는 장치 n의 q번째 메시지 시퀀스이며 단위 노름을 가집니다.
    모든 실험 시행이 읽기 전용으로 공유합니다.

    Attributes:
        Psi (np.ndarray): (L, E) eMBB 파일럿
        V (np.ndarray): (L, N) MTD 헤더
        U (np.ndarray): (T−L, NQ) MTD 메시지 본문
        S (np.ndarray): (T, NQ) 정규화된 감지 행렬
        z (int): 헤더 조합 크기
        pi (np.ndarray): (N, z) 장치별 헤더 기저 번호
        vartheta (np.ndarray): (N, z) 장치별 결합 가중치
        kappa (int): 메시지 알파벳 차수
        q_messages (int): 장치당 메시지 수 Q
        seed (Optional[int]): 생성에 사용한 시드
        kind (str): hadamard 또는 gaussian
    """

    Psi: np.ndarray
    V: np.ndarray
    U: np.ndarray
    S: np.ndarray
    z: int
    pi: np.ndarray
    vartheta: np.ndarray
    kappa: int
    q_messages: int
    seed: Optional[int] = None
    kind: str = "hadamard"

    @property
    def T(self) -> int:  # noqa: D102
        return self.S.shape[0]

    @property
    def L(self) -> int:  # noqa: D102
        return self.Psi.shape[0]

    @property
    def E(self) -> int:  # noqa: D102
        return self.Psi.shape[1]

    @property
    def N(self) -> int:  # noqa: D102
        return self.V.shape[1]

    @property
    def Q(self) -> int:  # noqa: D102
        return self.q_messages

    @property
    def header_block(self) -> np.ndarray:
        """S의 처음 L행(헤더 구간)을 반환합니다."""
        return self.S[: self.L]

    def header_pilot_leakage(self) -> float:
        """정규화된 헤더와 파일럿 사이 내적의 최댓값을 반환합니다."""
        if self.E == 0:
            return 0.0
        return float(np.max(np.abs(self.header_block.conj().T @ self.Psi)))

    def pilot_cross_correlation(self) -> float:
        """서로 다른 파일럿 사이 내적의 최댓값을 반환합니다."""
        if self.E < 2:
            return 0.0
        gram = self.Psi.conj().T @ self.Psi
        return float(np.max(np.abs(gram - np.diag(np.diag(gram)))))

    def validate(self):
        """차원, 열 정규화, 헤더–파일럿 직교성을 검사합니다.

        Gaussian 비교용 코드북은 직교성을 설계하지 않으므로 차원과 정규화만 검사합니다.

        Raises:
            DimensionMismatchError: 차원이 맞지 않을 때
            InvalidConfigError: 정규화나 직교성을 어길 때
        """
        n_seq = self.N * self.Q
        validate_shape(self.S, (self.L + self.U.shape[0], n_seq), "S")
        validate_shape(self.U, (None, n_seq), "U")
        if not np.allclose(np.sum(np.abs(self.S) ** 2, axis=0), 1.0, atol=1e-12):
            raise InvalidConfigError("감지 행렬의 모든 열은 단위 노름이어야 합니다.")
        if self.kind != "hadamard":
            return
        if self.header_pilot_leakage() > ORTHOGONALITY_TOL:
            raise InvalidConfigError("MTD 헤더가 eMBB 파일럿과 직교하지 않습니다.")
        if self.pilot_cross_correlation() > ORTHOGONALITY_TOL:
            raise InvalidConfigError("eMBB 파일럿끼리 직교하지 않습니다.")

    def render(self) -> Dict:
        """코드북 요약을 dict로 변환합니다."""
        return self.remove_none_item(
            {
                "kind": self.kind,
                "T": self.T,
                "L": self.L,
                "E": self.E,
                "N": self.N,
                "Q": self.Q,
                "z": self.z,
                "kappa": self.kappa,
                "seed": self.seed,
            }
        )


def assemble_codebook(
    Psi: np.ndarray,
    V: np.ndarray,
    messages: np.ndarray,
    *,
    z: int = 0,
    pi: Optional[np.ndarray] = None,
    vartheta: Optional[np.ndarray] = None,
    kappa: int = 0,
    seed: Optional[int] = None,
    kind: str = "hadamard",
) -> Codebook:
    """헤더와 메시지를 이어 붙여 감지 행렬 S를 조립합니다.

    각 시퀀스는 이어 붙인 뒤 단위 에너지로 정규화하므로 심볼당 평균 전력은 1/T입니다.
    메시지 노름이 다르면 같은 장치의 헤더도 양의 스칼라 배만큼 달라집니다.

    Args:
        Psi (np.ndarray): (L, E) 파일럿
        V (np.ndarray): (L, N) 헤더
        messages (np.ndarray): (N, Q, T−L) 장치별 메시지
        z (int): 헤더 조합 크기
        pi (np.ndarray): (N, z) 헤더 기저 번호
        vartheta (np.ndarray): (N, z) 결합 가중치
        kappa (int): 알파벳 차수
        seed (Optional[int]): 생성 시드
        kind (str): 코드북 종류

    Returns:
        Codebook: 조립된 코드북

    Raises:
        DimensionMismatchError: 차원이 맞지 않을 때
    """
    Psi = np.asarray(Psi, dtype=complex)
    V = np.asarray(V, dtype=complex)
    messages = np.asarray(messages, dtype=complex)
    if Psi.ndim != 2 or V.ndim != 2 or messages.ndim != 3:
        raise DimensionMismatchError("Psi와 V는 2차원, messages는 3차원이어야 합니다.")
    if Psi.shape[0] != V.shape[0]:
        raise DimensionMismatchError(
            f"파일럿 길이 {Psi.shape[0]}와 헤더 길이 {V.shape[0]}가 다릅니다."
        )
    n_mtds, q_messages, _ = messages.shape
    if n_mtds != V.shape[1]:
        raise DimensionMismatchError(
            f"헤더 수 {V.shape[1]}와 메시지 집합 수 {n_mtds}가 다릅니다."
        )
    headers = np.repeat(V, q_messages, axis=1)
    U = messages.reshape(n_mtds * q_messages, -1).T
    S = np.vstack([headers, U])
    norms = np.linalg.norm(S, axis=0)
    if np.any(norms == 0):
        raise InvalidConfigError("에너지가 0인 시퀀스는 정규화할 수 없습니다.")
    S = S / norms
    codebook = Codebook(
        Psi=Psi,
        V=V,
        U=U,
        S=S,
        z=int(z),
        pi=np.zeros((n_mtds, 0), dtype=int) if pi is None else np.asarray(pi),
        vartheta=np.zeros((n_mtds, 0)) if vartheta is None else np.asarray(vartheta),
        kappa=int(kappa),
        q_messages=q_messages,
        seed=seed,
        kind=kind,
    )
    codebook.validate()
    return codebook


def save_codebook(codebook: Codebook, path: Union[str, Path]) -> Path:
    """코드북을 압축된 npz 파일로 저장합니다.

    차원, 시드, 종류는 metadata 항목에 함께 기록합니다.

    Args:
        codebook (Codebook): 저장할 코드북
        path (Union[str, Path]): 저장 경로

    Returns:
        Path: 실제 저장된 경로
    """
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_suffix(".npz")
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = np.array(
        [
            CODEBOOK_FORMAT_VERSION,
            codebook.T,
            codebook.L,
            codebook.E,
            codebook.N,
            codebook.Q,
            codebook.z,
            codebook.kappa,
            -1 if codebook.seed is None else codebook.seed,
        ],
        dtype=np.int64,
    )
    np.savez_compressed(
        path,
        metadata=metadata,
        kind=np.array(codebook.kind),
        Psi=codebook.Psi,
        V=codebook.V,
        U=codebook.U,
        S=codebook.S,
        pi=codebook.pi,
        vartheta=codebook.vartheta,
    )
    logger.info("코드북을 저장했습니다: %s (%s)", path, codebook.render())
    return path


def load_codebook(path: Union[str, Path]) -> Codebook:
    """npz 파일에서 코드북을 읽고 검증합니다.

    Args:
        path (Union[str, Path]): 코드북 파일 경로

    Returns:
        Codebook: 읽어 들인 코드북

    Raises:
        InvalidConfigError: 형식 버전이 다르거나 기록된 차원과 배열이 다를 때
    """
    with np.load(Path(path), allow_pickle=False) as data:
        metadata = data["metadata"]
        version, T, L, E, N, Q, z, kappa, seed = (int(item) for item in metadata)
        if version != CODEBOOK_FORMAT_VERSION:
            raise InvalidConfigError(f"지원하지 않는 코드북 형식 버전입니다: {version}")
        codebook = Codebook(
            Psi=data["Psi"],
            V=data["V"],
            U=data["U"],
            S=data["S"],
            z=z,
            pi=data["pi"],
            vartheta=data["vartheta"],
            kappa=kappa,
            q_messages=Q,
            seed=None if seed < 0 else seed,
            kind=str(data["kind"]),
        )
    if (codebook.T, codebook.L, codebook.E, codebook.N) != (T, L, E, N):
        raise InvalidConfigError("코드북 파일의 기록된 차원과 배열 모양이 다릅니다.")
    codebook.validate()
    return codebook
