"""config 모듈의 설정 파싱, 전력 제어, 채널 생성을 테스트합니다."""

from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from coexistence_sim.config import (
    DevicePlacement,
    NetworkConfig,
    average_snr,
    distance_for_coefficient,
    draw_activity,
    draw_channels,
    large_scale_coefficient,
    path_loss_db,
    place_devices,
    required_coefficient,
    uplink_power_mtd,
)
from coexistence_sim.customerror import InvalidConfigError, OutOfDomainError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.parametrize(
    "d_km, expected",
    [(1.0, 130.0), (0.25, 107.363), (0.1, 92.4)],
)
def test_path_loss_examples(d_km, expected):
    assert path_loss_db(d_km) == pytest.approx(expected, abs=1e-3)


def test_path_loss_rejects_non_positive_distance():
    with pytest.raises(OutOfDomainError):
        path_loss_db(0.0)
    with pytest.raises(OutOfDomainError):
        path_loss_db(np.array([0.1, -1.0]))


def test_distance_inverts_coefficient():
    coefficient = large_scale_coefficient(0.2)
    assert distance_for_coefficient(coefficient) == pytest.approx(0.2)


def test_uplink_power_equalizes_received_power():
    gamma = np.array([1e-11, 4e-11, 1e-10])
    power = uplink_power_mtd(gamma, gamma_min=1e-11, p_max=0.1)
    np.testing.assert_allclose(power * gamma, 0.1 * 1e-11)
    assert power[0] == pytest.approx(0.1)


def test_uplink_power_rejects_devices_beyond_edge():
    with pytest.raises(InvalidConfigError):
        uplink_power_mtd(np.array([1e-12]), gamma_min=1e-11, p_max=0.1)


def test_uplink_power_at_edge_tolerance_is_max_power():
    power = uplink_power_mtd(np.array([1e-11 * (1 - 1e-10), 4e-11]), gamma_min=1e-11, p_max=0.1)
    assert power[0] == pytest.approx(0.1, rel=1e-9)
    assert power[1] == pytest.approx(0.025)


def test_required_coefficient_round_trips_snr():
    gamma_min = required_coefficient(5.0, 0.1, 2e-13)
    assert gamma_min == pytest.approx(2e-13 * 10**0.5 / 0.1)
    assert average_snr(0.1, gamma_min, 2e-13) == pytest.approx(5.0)


def test_placement_matches_target_snr(tiny_config, rng):
    placement = place_devices(tiny_config, rng)
    received = placement.p_ul * placement.gamma
    np.testing.assert_allclose(received, received[0])
    snr = average_snr(tiny_config.p_max_w, placement.gamma_min, tiny_config.noise_w)
    assert snr == pytest.approx(tiny_config.snr_mtd_db)
    assert np.all(placement.p_ul <= tiny_config.p_max_w * (1 + 1e-12))
    assert np.all(placement.d_mtd_km * 1000 <= tiny_config.cell_radius_m + 1e-9)


def test_activity_statistics(tiny_config, rng):
    config = tiny_config.replace(n_mtds=20000, epsilon=0.05, q_messages=4)
    alpha, q_choice, alpha_seq = draw_activity(config, rng)
    expected = config.N * config.epsilon
    spread = np.sqrt(config.N * config.epsilon * (1 - config.epsilon))
    assert abs(alpha.sum() - expected) < 5 * spread
    assert np.all(q_choice[~alpha] == -1)
    assert set(np.unique(q_choice[alpha])) <= set(range(config.Q))
    assert alpha_seq.sum() == alpha.sum()
    blocks = alpha_seq.reshape(-1, config.Q).sum(axis=1)
    np.testing.assert_array_equal(blocks, alpha.astype(int))


def test_zero_coefficient_gives_zero_channel(tiny_config, rng):
    E, N = tiny_config.E, tiny_config.N
    placement = DevicePlacement(
        d_embb_km=np.full(E, 0.1),
        d_mtd_km=np.full(N, 0.1),
        beta=np.zeros(E),
        gamma=np.ones(N),
        gamma_min=1.0,
        beta_min=1.0,
        p_ul=np.ones(N),
        rho_ul=np.ones(E),
    )
    realization = draw_channels(tiny_config, placement, rng)
    assert np.all(realization.H == 0)
    assert realization.G.shape == (N, tiny_config.M)


def test_channels_are_reproducible(tiny_config):
    placement = place_devices(tiny_config, np.random.default_rng(1))
    first = draw_channels(tiny_config, placement, np.random.default_rng(5))
    second = draw_channels(tiny_config, placement, np.random.default_rng(5))
    np.testing.assert_array_equal(first.G, second.G)
    np.testing.assert_array_equal(first.alpha_seq, second.alpha_seq)


def test_realization_x_places_effective_channels(tiny_config, rng):
    config = tiny_config.replace(epsilon=0.5)
    placement = place_devices(config, rng)
    realization = draw_channels(config, placement, rng)
    realization.validate()
    X = realization.X
    active = np.flatnonzero(realization.alpha)
    rows = active * config.Q + realization.q_choice[active]
    np.testing.assert_array_equal(X[rows], realization.G[active])
    assert np.count_nonzero(np.linalg.norm(X, axis=1)) == active.size


def test_from_file_parses_comments_and_types(tmp_path):
    path = tmp_path / "small.conf"
    path.write_text(
        "# 축소 시나리오\n"
        "n_mtds = 50   # 장치 수\n"
        "pilot_len = 16\n"
        "epsilon = 0.02\n"
        "shared_messages = yes\n"
        "mu = auto\n"
        "pfa_targets = 0.1, 0.01\n",
        encoding="utf-8",
    )
    config = NetworkConfig.from_file(path)
    assert config.N == 50
    assert config.L == 16
    assert config.epsilon == pytest.approx(0.02)
    assert config.shared_messages is True
    assert config.mu is None
    assert config.pfa_targets == (0.1, 0.01)


def test_to_text_reloads_same_config(tmp_path, tiny_config):
    path = tmp_path / "dump.conf"
    path.write_text(tiny_config.to_text(), encoding="utf-8")
    assert NetworkConfig.from_file(path) == tiny_config


@pytest.mark.parametrize("name", ["desk.conf", "full.conf"])
def test_shipped_configs_load(name):
    config = NetworkConfig.from_file(CONFIG_DIR / name)
    assert config.E < config.L <= config.T


def test_unknown_key_is_rejected():
    with pytest.raises(InvalidConfigError):
        NetworkConfig.from_dict({"n_mtds": "10", "antenas": "4"})


def test_duplicate_key_is_rejected(tmp_path):
    path = tmp_path / "dup.conf"
    path.write_text("n_mtds = 10\nn_mtds = 20\n", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        NetworkConfig.from_file(path)


@pytest.mark.parametrize(
    "changes",
    [
        {"n_embb": 8, "pilot_len": 8},
        {"pilot_len": 12},
        {"pilot_len": 64, "coherence_len": 32},
        {"epsilon": 1.0},
        {"q_messages": 0},
        {"solver": "lasso"},
        {"noise_w": 0.0},
        {"amp_shrinkage": 1.0},
        {"amp_shrinkage": -0.1},
    ],
)
def test_invalid_configs_are_rejected(tiny_config, changes):
    with pytest.raises(InvalidConfigError):
        tiny_config.replace(**changes)


def test_with_value_coerces_and_checks_key(tiny_config):
    assert tiny_config.with_value("pilot_len", "16").L == 16
    assert tiny_config.with_value("snr_embb_db", "-20").snr_embb_db == -20.0
    with pytest.raises(InvalidConfigError):
        tiny_config.with_value("pilots", "16")
    with pytest.raises(InvalidConfigError):
        tiny_config.with_value("pilot_len", "sixteen")


@pytest.mark.slow
def test_channel_entries_are_circular_gaussian(tiny_config):
    config = tiny_config.replace(n_mtds=2000, n_embb=7, antennas=8)
    placement = place_devices(config, np.random.default_rng(3))
    realization = draw_channels(config, placement, np.random.default_rng(4))
    # 계수로 나누면 모든 원소가 CN(0, 1)이어야 합니다.
    unit_mtd = realization.Gtilde / np.sqrt(placement.gamma)[:, None]
    unit_embb = realization.H / np.sqrt(placement.beta)[:, None]
    assert np.mean(np.abs(unit_mtd) ** 2) == pytest.approx(1.0, rel=0.05)
    assert np.mean(np.abs(unit_embb) ** 2) == pytest.approx(1.0, rel=0.5)
    parts = np.concatenate([unit_mtd.real.ravel(), unit_mtd.imag.ravel()]) * np.sqrt(2.0)
    assert stats.kstest(parts, "norm").pvalue > 1e-3
    assert abs(np.mean(unit_mtd.real * unit_mtd.imag)) < 0.02
    np.testing.assert_allclose(
        np.mean(np.abs(realization.G) ** 2, axis=1).mean(),
        placement.mtd_received_power,
        rtol=0.05,
    )
