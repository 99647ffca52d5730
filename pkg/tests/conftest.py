"""테스트 전반에서 공유하는 fixture를 정의합니다."""

import numpy as np
import pytest

from coexistence_sim.config import NetworkConfig
from coexistence_sim.utils import codebook_rng
from coexistence_sim.waveform import build_codebook


@pytest.fixture
def rng():
    """고정 시드 난수 생성기."""
    return np.random.default_rng(20240611)


@pytest.fixture
def tiny_config():
    """몇 초 안에 끝나는 작은 시나리오 설정."""
    return NetworkConfig(
        n_mtds=20,
        n_embb=2,
        antennas=4,
        coherence_len=32,
        pilot_len=8,
        q_messages=2,
        epsilon=0.1,
        kappa=2,
        chi=0.1,
        trials=6,
        solver="somp",
        t_max=50,
        pool_cap=64,
        roc_grid=20,
        seed=7,
    )


@pytest.fixture
def tiny_codebook(tiny_config):
    """tiny_config로 만든 Hadamard 코드북."""
    return build_codebook(tiny_config, codebook_rng(tiny_config.seed), seed=tiny_config.seed)
