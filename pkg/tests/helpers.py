"""테스트에서 쓰는 행렬 생성 함수입니다."""

import numpy as np


def random_sensing(rng, T, n_seq):
    """열이 단위 노름인 복소 가우시안 감지 행렬."""
    raw = rng.standard_normal((T, n_seq)) + 1j * rng.standard_normal((T, n_seq))
    return raw / np.linalg.norm(raw, axis=0)


def row_sparse(rng, n_seq, M, support, variance=1.0):
    """지정한 행에만 CN(0, variance) 값을 갖는 행 희소 행렬."""
    X = np.zeros((n_seq, M), dtype=complex)
    scale = np.sqrt(variance / 2)
    X[support] = scale * (
        rng.standard_normal((len(support), M)) + 1j * rng.standard_normal((len(support), M))
    )
    return X
