"""Domain types and unit conversion for the gradient-estimation chain.

Physical inputs (field gradient, gyromagnetic ratio, lattice spacing) enter
here and are converted to the dimensionless units every other module works
in: times are measured as Theta = theta1 * t and decay rates as Gamma / theta1,
where theta1 = G * gamma * d is the per-site frequency increment of the chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional


class ConfigError(ValueError):
    """Raised for physically invalid or unparseable configuration."""


#: Keys accepted in configuration files (flat key=value text or JSON).
CONFIG_KEYS = (
    "n_atoms",
    "spacing_d",
    "gyro_gamma",
    "gradient_G",
    "ref_field_B1",
    "base_omega0",
    "gamma_p",
    "gamma_d",
)


@dataclass(frozen=True)
class ChainConfig:
    """Geometry and field parameters of an equally spaced atomic chain.

    The field seen by site j is B(x_j) = B1 + G * x_j with x_j = (j - 1) * d,
    so atom 1 sits at the reference field.  Immutable; safe to share across
    threads.
    """

    n_atoms: int
    spacing_d: float        # m
    gyro_gamma: float       # rad s^-1 T^-1
    gradient_G: float       # T m^-1
    ref_field_B1: float = 0.0   # T
    base_omega0: float = 0.0    # rad s^-1

    def __post_init__(self) -> None:
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 2:
            raise ConfigError(f"n_atoms must be an integer >= 2, got {self.n_atoms}")
        if not self.spacing_d > 0:
            raise ConfigError(f"spacing_d must be > 0, got {self.spacing_d}")
        if self.gyro_gamma == 0:
            raise ConfigError("gyro_gamma must be nonzero")


@dataclass(frozen=True)
class NoiseRates:
    """Dephasing and dissipation rates, in units of theta1.

    ``gamma_total`` is the combined decay rate Gamma = Gamma_d + 2 * Gamma_p
    governing two-site coherences; it is always derived, never stored.
    """

    gamma_p: float = 0.0
    gamma_d: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma_p < 0 or self.gamma_d < 0:
            raise ConfigError(
                f"noise rates must be >= 0, got gamma_p={self.gamma_p}, gamma_d={self.gamma_d}"
            )

    @property
    def gamma_total(self) -> float:
        return self.gamma_d + 2.0 * self.gamma_p

    @property
    def is_noiseless(self) -> bool:
        return self.gamma_p == 0.0 and self.gamma_d == 0.0


class Scheme(Enum):
    """The two probe strategies being compared."""

    W_STATE = "w_state"
    UNCORRELATED_PAIR = "uncorrelated_pair"


@dataclass(frozen=True)
class PrecisionPoint:
    """One optimized operating point: scheme, size, noise, best time, best uncertainty.

    ``eq23_value`` is only set for the uncorrelated scheme: it is the
    closed-form minimum at t = 1/Gamma, emitted alongside the numerically
    minimized envelope value (``delta_min``, attained at ``tau_opt``).
    """

    scheme: Scheme
    n_atoms: int
    noise: NoiseRates
    tau_opt: float
    delta_min: float
    eq23_value: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.tau_opt > 0:
            raise ConfigError(f"tau_opt must be > 0, got {self.tau_opt}")
        if not self.delta_min > 0:
            raise ConfigError(f"delta_min must be > 0, got {self.delta_min}")


def theta1_from_physical(cfg: ChainConfig) -> float:
    """Per-site frequency increment theta1 = G * gamma * d, in rad/s.

    This is the estimated parameter; all core modules work in units where
    theta1 = 1 (dimensionless time Theta = theta1 * t, rates as Gamma/theta1).
    """
    return cfg.gradient_G * cfg.gyro_gamma * cfg.spacing_d


def omega_profile(cfg: ChainConfig, j: int) -> float:
    """Transition frequency of site j (1-based): omega0 + gamma * (B1 + G * x_j).

    Site positions follow x_j = (j - 1) * d, so consecutive sites differ by
    exactly theta1.
    """
    if not 1 <= j <= cfg.n_atoms:
        raise IndexError(f"site index {j} outside 1..{cfg.n_atoms}")
    x_j = (j - 1) * cfg.spacing_d
    return cfg.base_omega0 + cfg.gyro_gamma * (cfg.ref_field_B1 + cfg.gradient_G * x_j)


def noise_from_physical(cfg: ChainConfig, gamma_p: float, gamma_d: float) -> NoiseRates:
    """Convert physical decay rates (rad/s) to theta1 units."""
    theta1 = theta1_from_physical(cfg)
    if theta1 == 0:
        raise ConfigError("theta1 is zero; cannot express rates in theta1 units")
    scale = abs(theta1)
    return NoiseRates(gamma_p=gamma_p / scale, gamma_d=gamma_d / scale)


def parse_config_text(text: str) -> dict:
    """Parse a configuration from flat ``key=value`` lines or a JSON object.

    Unknown keys are rejected; values are decimal numbers.  Blank lines and
    ``#`` comments are allowed in the flat format.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("JSON config must be an object")
        items = raw.items()
    else:
        items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            items.append((key.strip(), value.strip()))

    out: dict = {}
    for key, value in items:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = int(value) if key == "n_atoms" else float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key {key!r}: bad numeric value {value!r}") from exc
    return out


def config_from_mapping(values: dict) -> tuple[ChainConfig, NoiseRates]:
    """Build (ChainConfig, NoiseRates) from parsed config values.

    ``gamma_p``/``gamma_d`` in the file are physical rates (rad/s) and are
    converted to theta1 units here, at the unit boundary.
    """
    required = ("n_atoms", "spacing_d", "gyro_gamma", "gradient_G")
    missing = [k for k in required if k not in values]
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")
    cfg = ChainConfig(
        n_atoms=int(values["n_atoms"]),
        spacing_d=values["spacing_d"],
        gyro_gamma=values["gyro_gamma"],
        gradient_G=values["gradient_G"],
        ref_field_B1=values.get("ref_field_B1", 0.0),
        base_omega0=values.get("base_omega0", 0.0),
    )
    noise = noise_from_physical(cfg, values.get("gamma_p", 0.0), values.get("gamma_d", 0.0))
    return cfg, noise


def load_config(path: str, overrides: Optional[dict] = None) -> tuple[ChainConfig, NoiseRates]:
    """Load a config file; ``overrides`` (e.g. CLI flags) win over file values."""
    with open(path, "r", encoding="utf-8") as fh:
        values = parse_config_text(fh.read())
    if overrides:
        for key in overrides:
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
        values.update(overrides)
    return config_from_mapping(values)
