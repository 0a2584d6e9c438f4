"""Unit conversion, domain types and config ingestion."""

import dataclasses
import json
import math

import pytest

from gradmet.model import (
    ChainConfig,
    ConfigError,
    NoiseRates,
    PrecisionPoint,
    Scheme,
    config_from_mapping,
    load_config,
    noise_from_physical,
    omega_profile,
    parse_config_text,
    theta1_from_physical,
)

GAMMA_2PI_7GHZ = 2 * math.pi * 7e9


def make_cfg(**overrides):
    base = dict(n_atoms=4, spacing_d=1.0, gyro_gamma=1.0, gradient_G=1.0)
    base.update(overrides)
    return ChainConfig(**base)


class TestTheta1:
    def test_unit_inputs(self):
        assert theta1_from_physical(make_cfg()) == 1.0

    def test_product(self):
        cfg = make_cfg(gradient_G=2.0, gyro_gamma=3.0, spacing_d=0.5)
        assert theta1_from_physical(cfg) == 3.0

    def test_physical_scale(self):
        # 1 mT/m gradient, hyperfine-scale gyromagnetic ratio, micron spacing.
        cfg = make_cfg(gradient_G=1e-3, gyro_gamma=GAMMA_2PI_7GHZ, spacing_d=1e-6)
        assert theta1_from_physical(cfg) == pytest.approx(2 * math.pi * 7, rel=1e-15)

    def test_invalid_spacing(self):
        with pytest.raises(ConfigError):
            make_cfg(spacing_d=0.0)
        with pytest.raises(ConfigError):
            make_cfg(spacing_d=-1e-6)


class TestOmegaProfile:
    def test_origin_site(self):
        assert omega_profile(make_cfg(), 1) == 0.0

    def test_direct_arithmetic(self):
        cfg = make_cfg(base_omega0=5.0, ref_field_B1=2.0)
        assert omega_profile(cfg, 3) == pytest.approx(9.0, abs=1e-15)

    def test_linearity_equals_theta1(self):
        cfg = make_cfg(
            n_atoms=7, gradient_G=0.8, gyro_gamma=-2.5, spacing_d=0.3, base_omega0=11.0
        )
        theta1 = theta1_from_physical(cfg)
        for j in range(1, cfg.n_atoms):
            step = omega_profile(cfg, j + 1) - omega_profile(cfg, j)
            assert step == pytest.approx(theta1, rel=1e-12)

    def test_out_of_range(self):
        cfg = make_cfg()
        with pytest.raises(IndexError):
            omega_profile(cfg, 0)
        with pytest.raises(IndexError):
            omega_profile(cfg, 5)


class TestNoiseRates:
    def test_gamma_total_derived(self):
        noise = NoiseRates(gamma_p=0.3, gamma_d=0.4)
        assert noise.gamma_total == 0.4 + 2 * 0.3

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            NoiseRates(gamma_p=-0.1)
        with pytest.raises(ConfigError):
            NoiseRates(gamma_d=-0.1)

    def test_physical_conversion(self):
        cfg = make_cfg(gradient_G=2.0)  # theta1 = 2
        noise = noise_from_physical(cfg, gamma_p=0.5, gamma_d=1.0)
        assert noise.gamma_p == 0.25
        assert noise.gamma_d == 0.5

    def test_immutable(self):
        noise = NoiseRates(0.1, 0.2)
        with pytest.raises(dataclasses.FrozenInstanceError):
            noise.gamma_p = 0.5


class TestChainConfig:
    def test_n_atoms_minimum(self):
        with pytest.raises(ConfigError):
            make_cfg(n_atoms=1)

    def test_zero_gamma_rejected(self):
        with pytest.raises(ConfigError):
            make_cfg(gyro_gamma=0.0)

    def test_immutable(self):
        cfg = make_cfg()
        with pytest.raises(dataclasses.FrozenInstanceError):
            cfg.n_atoms = 9


class TestPrecisionPoint:
    def test_positivity_invariants(self):
        noise = NoiseRates()
        with pytest.raises(ConfigError):
            PrecisionPoint(Scheme.W_STATE, 3, noise, tau_opt=0.0, delta_min=0.1)
        with pytest.raises(ConfigError):
            PrecisionPoint(Scheme.W_STATE, 3, noise, tau_opt=1.0, delta_min=0.0)
        point = PrecisionPoint(Scheme.W_STATE, 3, noise, tau_opt=1.0, delta_min=0.1)
        assert point.eq23_value is None


CONFIG_TEXT = """
# chain geometry
n_atoms = 4
spacing_d = 1e-6
gyro_gamma = 2.0
gradient_G = 0.5e6   # makes theta1 = 1
gamma_p = 0.05
gamma_d = 0.1
"""


class TestConfigFiles:
    def test_flat_text(self):
        values = parse_config_text(CONFIG_TEXT)
        cfg, noise = config_from_mapping(values)
        assert cfg.n_atoms == 4
        assert theta1_from_physical(cfg) == pytest.approx(1.0)
        assert noise.gamma_p == pytest.approx(0.05)
        assert noise.gamma_d == pytest.approx(0.1)

    def test_json_alternative(self, tmp_path):
        payload = {
            "n_atoms": 3,
            "spacing_d": 1.0,
            "gyro_gamma": 1.0,
            "gradient_G": 1.0,
            "gamma_d": 0.2,
        }
        path = tmp_path / "chain.json"
        path.write_text(json.dumps(payload))
        cfg, noise = load_config(str(path))
        assert cfg.n_atoms == 3
        assert noise.gamma_d == pytest.approx(0.2)

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "chain.cfg"
        path.write_text(CONFIG_TEXT)
        cfg, noise = load_config(str(path), overrides={"n_atoms": 6, "gamma_p": 0.0})
        assert cfg.n_atoms == 6
        assert noise.gamma_p == 0.0
        assert noise.gamma_d == pytest.approx(0.1)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("n_atoms=3\nwavelength=780e-9\n")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError):
            config_from_mapping({"n_atoms": 3})

    def test_malformed_line(self):
        with pytest.raises(ConfigError):
            parse_config_text("n_atoms 3")
