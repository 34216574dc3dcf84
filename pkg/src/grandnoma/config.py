"""Experiment configuration shared by the link simulator and the sweep harness."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .crc import CrcSpec
from .phy import ebn0_to_sigma2

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "DEFAULT_CRC",
    "SCENARIO_PURE",
    "SCENARIO_GRAND",
    "SCENARIO_GRAND_ASSIST",
    "SCENARIOS",
    "DECODER_GRAND",
    "DECODER_ORBGRAND",
    "DECODERS",
    "CHANNELS",
]

SCENARIO_PURE = "pure"
SCENARIO_GRAND = "grand"
SCENARIO_GRAND_ASSIST = "grand-assist"
SCENARIOS = (SCENARIO_PURE, SCENARIO_GRAND, SCENARIO_GRAND_ASSIST)

DECODER_GRAND = "grand"
DECODER_ORBGRAND = "orbgrand"
DECODERS = (DECODER_GRAND, DECODER_ORBGRAND)

CHANNELS = ("awgn", "rayleigh")

# CRC-12, Koopman 0x8f3, on 116-bit messages / 128-bit codewords
DEFAULT_CRC = CrcSpec(koopman=0x8F3, message_len=116, codeword_len=128)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulated operating point.

    `ebn0_db` is a single point; sweeps pass a list of values to
    `harness.run_sweep`, which re-instantiates the config per point.
    """

    scenario: str = SCENARIO_GRAND
    decoder: str = DECODER_GRAND
    channel: str = "awgn"
    ebn0_db: float = 10.0
    alpha1: float = 0.25
    power: float = 1.0
    d1: float = 1.0
    d2: float = 1.0
    xi: float = 2.0
    crc: CrcSpec = DEFAULT_CRC
    grand_max_weight: int = 4
    orb_max_logistic_weight: int | None = None
    orb_query_budget: int = 1_000_000
    min_block_errors: int = 100
    max_blocks: int = 10_000_000
    master_seed: int = 1
    workers: int = 1
    trials_per_batch: int = 256

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.decoder not in DECODERS:
            raise ConfigError(f"decoder must be one of {DECODERS}, got {self.decoder!r}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if not 0.0 < self.alpha1 < 1.0:
            raise ConfigError(f"alpha1 must lie in (0,1), got {self.alpha1}")
        if self.power <= 0:
            raise ConfigError(f"P must be positive, got {self.power}")
        if self.d1 <= 0 or self.d2 <= 0:
            raise ConfigError(f"d1/d2 must be > 0, got {self.d1}, {self.d2}")
        if self.grand_max_weight < 0 or self.grand_max_weight > self.crc.codeword_len:
            raise ConfigError(f"grand.max_weight out of range: {self.grand_max_weight}")
        if self.orb_query_budget < 1:
            raise ConfigError(f"orb.query_budget must be >= 1, got {self.orb_query_budget}")
        if self.min_block_errors < 1:
            raise ConfigError(f"min_block_errors must be >= 1, got {self.min_block_errors}")
        if self.max_blocks < 1:
            raise ConfigError(f"max_blocks must be >= 1, got {self.max_blocks}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.trials_per_batch < 1:
            raise ConfigError(f"trials_per_batch must be >= 1, got {self.trials_per_batch}")

    @property
    def alpha2(self) -> float:
        return 1.0 - self.alpha1

    @property
    def sigma2(self) -> float:
        return ebn0_to_sigma2(self.ebn0_db, self.crc.rate, self.power)

    def at(self, **changes) -> "ScenarioConfig":
        """Copy with fields replaced (sweep helper)."""
        return replace(self, **changes)
