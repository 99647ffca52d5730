"""waveform 패키지의 파일럿, 헤더, 메시지, 코드북 조립을 테스트합니다."""

import logging

import numpy as np
import pytest
from scipy.special import comb

from coexistence_sim.customerror import (
    DimensionMismatchError,
    EmptyPoolError,
    InfeasibleCollisionError,
    UnsupportedSizeError,
)
from coexistence_sim.utils import codebook_rng
from coexistence_sim.waveform import (
    CandidatePool,
    assemble_codebook,
    assign_pilots,
    build_codebook,
    build_headers,
    candidate_pool,
    collision_curve,
    collision_probability,
    combination_size,
    generate_messages,
    hadamard_complex,
    load_codebook,
    psk_alphabet,
    save_codebook,
    select_messages,
    solve_z,
)


@pytest.mark.parametrize("L", [1, 2, 8, 32])
def test_hadamard_complex_is_orthogonal(L):
    H = hadamard_complex(L)
    np.testing.assert_allclose(np.abs(H), 1.0)
    np.testing.assert_allclose(H.conj().T @ H, L * np.eye(L), atol=1e-12)


def test_hadamard_complex_rejects_other_sizes():
    with pytest.raises(UnsupportedSizeError):
        hadamard_complex(12)


def test_solve_z_reference_point():
    assert solve_z(32, 4, 2.65e-6) == 6


@pytest.mark.parametrize("L, E, chi", [(8, 2, 0.1), (16, 4, 1e-2), (32, 4, 1e-6), (64, 8, 1e-9)])
def test_solve_z_matches_brute_force(L, E, chi):
    expected = next(
        z for z in range(1, L - E + 1) if float(f"{1 / comb(L - E, z, exact=True):.3g}") <= chi
    )
    assert solve_z(L, E, chi) == expected


def test_solve_z_infeasible_reports_minimum():
    with pytest.raises(InfeasibleCollisionError) as info:
        solve_z(8, 4, 0.1)
    assert info.value.min_probability == pytest.approx(1 / 6)


def test_codebook_uses_least_colliding_z_when_chi_is_unreachable(tiny_config, caplog):
    config = tiny_config.replace(chi=1e-6)
    with pytest.raises(InfeasibleCollisionError):
        solve_z(config.L, config.E, config.chi)
    with caplog.at_level(logging.WARNING):
        codebook = build_codebook(config, codebook_rng(config.seed), seed=config.seed)
    assert combination_size(config) == 3
    assert codebook.z == 3
    assert "χ" in caplog.text
    np.testing.assert_allclose(np.linalg.norm(codebook.S, axis=0), 1.0)


@pytest.mark.parametrize("z", [2, 3])
def test_header_collision_rate_matches_formula(z, rng):
    _, B = assign_pilots(hadamard_complex(8), 2)
    _, pi, _ = build_headers(B, z, 40_000, rng)
    same = np.all(pi[0::2] == pi[1::2], axis=1)
    assert np.mean(same) == pytest.approx(collision_probability(8, 2, z), abs=0.01)


def test_collision_curve_values():
    curve = collision_curve(8, 2)
    assert curve["z"].tolist() == [1, 2, 3, 4, 5, 6]
    np.testing.assert_allclose(
        curve["collision_probability"], [1 / 6, 1 / 15, 1 / 20, 1 / 15, 1 / 6, 1.0]
    )
    assert curve["collision_probability"].min() == pytest.approx(collision_probability(8, 2, 3))


def test_headers_are_orthogonal_to_pilots(rng):
    L, E, z, N = 16, 3, 4, 40
    Psi, B = assign_pilots(hadamard_complex(L), E, scale=1 / np.sqrt(64))
    V, pi, vartheta = build_headers(B, z, N, rng)
    assert V.shape == (L, N)
    assert np.max(np.abs(V.conj().T @ Psi)) < 1e-10
    assert np.all(np.diff(pi, axis=1) > 0)
    assert np.all((vartheta > 0) & (vartheta <= 1))
    np.testing.assert_allclose(V[:, 0], B[:, pi[0]] @ vartheta[0])


def test_psk_alphabet_points():
    np.testing.assert_allclose(psk_alphabet(2), [1, -1])
    np.testing.assert_allclose(psk_alphabet(4), [1, 1j, -1, -1j], atol=1e-15)


def test_select_messages_pair_then_minmax():
    Theta = np.array(
        [
            [np.inf, 5.0, 4.0, 3.0],
            [5.0, np.inf, 1.0, 6.0],
            [4.0, 1.0, np.inf, 2.0],
            [3.0, 6.0, 2.0, np.inf],
        ]
    )
    pool = CandidatePool(Utilde=np.eye(4, dtype=complex), Theta=Theta)
    chosen = select_messages(pool, 3)
    # 최소 쌍 (2, 1), 그 다음은 max(Θ[0,{2,1}])=5, max(Θ[3,{2,1}])=6 이므로 0
    assert chosen.tolist() == [2, 1, 0]


def test_select_messages_needs_enough_candidates(rng):
    pool = candidate_pool(2, 2, 16, rng)
    assert pool.exhaustive and pool.size == 4
    with pytest.raises(EmptyPoolError):
        select_messages(pool, 5)


def test_generate_messages_exhaustive_picks_orthogonal_pair(rng):
    messages = generate_messages(4, 2, 2, 2, 64, rng)
    np.testing.assert_allclose(messages, [[1, -1], [1, 1]])
    assert abs(np.vdot(messages[0], messages[1])) == pytest.approx(0.0)


def test_sampled_pool_rows_are_distinct(rng):
    pool = candidate_pool(12, 4, 50, rng)
    assert not pool.exhaustive
    assert np.unique(pool.Utilde, axis=0).shape[0] == 50
    pool.validate()


def test_codebook_structure(tiny_config, tiny_codebook):
    cb = tiny_codebook
    assert cb.S.shape == (tiny_config.T, tiny_config.n_sequences)
    np.testing.assert_allclose(np.linalg.norm(cb.S, axis=0), 1.0)
    assert cb.header_pilot_leakage() < 1e-10
    assert cb.pilot_cross_correlation() < 1e-10
    assert cb.z == 2
    # 같은 장치의 메시지는 헤더 방향을 공유합니다.
    first, second = cb.header_block[:, 0], cb.header_block[:, 1]
    cosine = abs(np.vdot(first, second)) / (np.linalg.norm(first) * np.linalg.norm(second))
    assert cosine == pytest.approx(1.0)


def test_pilot_power_per_symbol(tiny_config, tiny_codebook):
    np.testing.assert_allclose(np.abs(tiny_codebook.Psi) ** 2, 1 / tiny_config.T)


def test_codebook_is_reproducible(tiny_config, tiny_codebook):
    again = build_codebook(tiny_config, codebook_rng(tiny_config.seed), seed=tiny_config.seed)
    np.testing.assert_array_equal(again.S, tiny_codebook.S)


def test_gaussian_codebook_is_normalized(tiny_config):
    config = tiny_config.replace(codebook_kind="gaussian")
    cb = build_codebook(config, codebook_rng(config.seed))
    assert cb.kind == "gaussian"
    np.testing.assert_allclose(np.linalg.norm(cb.S, axis=0), 1.0)


def test_assemble_rejects_mismatched_headers():
    with pytest.raises(DimensionMismatchError):
        assemble_codebook(np.ones((8, 2)), np.ones((8, 3)), np.ones((4, 2, 24)))


def test_save_and_load_codebook(tmp_path, tiny_codebook):
    path = save_codebook(tiny_codebook, tmp_path / "codebook")
    assert path.suffix == ".npz"
    loaded = load_codebook(path)
    np.testing.assert_array_equal(loaded.S, tiny_codebook.S)
    assert loaded.render() == tiny_codebook.render()
