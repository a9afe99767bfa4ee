"""Radio channel: frequency raster, propagation loss, noise, SNR, mobility penalty.

LTE links use free-space (Friis) propagation on the Band 1 uplink carrier.
The mmWave link uses a statistical line-of-sight model, PL = alpha +
10*beta*log10(d) + X, with log-normal shadowing X and a hard coverage limit,
plus an empirical beam-tracking outage model that degrades the link as UE
speed grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .engine import RngStream

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# 3GPP Band 1 raster anchors (TS 36.101 table 5.7.3-1).
_BAND1_DL_LOW_MHZ = 2110.0
_BAND1_DL_RANGE = (0, 599)
_BAND1_UL_LOW_MHZ = 1920.0
_BAND1_UL_OFFSET = 18000
_BAND1_UL_RANGE = (18000, 18599)

# NR global raster, 60 kHz step segment above 24.25 GHz (TS 38.101-2).
_NR_RASTER_START = 2016667
_NR_RASTER_END = 3279165
_NR_BASE_MHZ = 24250.08


class Rat(str, Enum):
    LTE = "lte"
    NR = "nr"


class OutOfCoverageError(Exception):
    """Link distance exceeds the configured mmWave coverage range."""

    def __init__(self, distance_m: float, max_range_m: float):
        super().__init__(
            f"distance {distance_m:.1f} m exceeds mmWave coverage range "
            f"{max_range_m:.1f} m")
        self.distance_m = distance_m
        self.max_range_m = max_range_m


def earfcn_to_freq_mhz(earfcn: int, direction: str = "downlink") -> float:
    """Band 1 EARFCN to carrier frequency, F = F_low + 0.1 * (N - N_offset)."""
    if direction == "downlink":
        lo, hi = _BAND1_DL_RANGE
        if not lo <= earfcn <= hi:
            raise ValueError(
                f"EARFCN {earfcn} outside Band 1 downlink range {lo}..{hi}")
        return _BAND1_DL_LOW_MHZ + (earfcn - lo) / 10
    if direction == "uplink":
        lo, hi = _BAND1_UL_RANGE
        if not lo <= earfcn <= hi:
            raise ValueError(
                f"EARFCN {earfcn} outside Band 1 uplink range {lo}..{hi}")
        return _BAND1_UL_LOW_MHZ + (earfcn - _BAND1_UL_OFFSET) / 10
    raise ValueError(f"direction must be 'downlink' or 'uplink', got {direction!r}")


def earfcn_direction(earfcn: int) -> str:
    """Infer downlink/uplink from the Band 1 EARFCN numbering ranges."""
    if _BAND1_DL_RANGE[0] <= earfcn <= _BAND1_DL_RANGE[1]:
        return "downlink"
    if _BAND1_UL_RANGE[0] <= earfcn <= _BAND1_UL_RANGE[1]:
        return "uplink"
    raise ValueError(f"EARFCN {earfcn} is not in Band 1 (DL 0..599, UL 18000..18599)")


def nr_arfcn_to_freq_mhz(nr_arfcn: int) -> float:
    """NR-ARFCN to frequency on the 60 kHz global raster segment above 24.25 GHz."""
    if not _NR_RASTER_START <= nr_arfcn <= _NR_RASTER_END:
        raise ValueError(
            f"NR-ARFCN {nr_arfcn} outside the mmWave raster segment "
            f"{_NR_RASTER_START}..{_NR_RASTER_END}")
    # (N - start) * 6 / 100 keeps the 0.06 MHz step free of binary round-off.
    return _NR_BASE_MHZ + (nr_arfcn - _NR_RASTER_START) * 6 / 100


def friis_rx_power(tx_power_w: float, gain_tx: float, gain_rx: float,
                   wavelength_m: float, distance_m: float,
                   system_loss: float = 1.0) -> float:
    """Free-space received power in watts, Pt*Gt*Gr*lambda^2 / ((4*pi)^2 d^2 L)."""
    if distance_m <= 0.0:
        raise ValueError(f"distance must be > 0, got {distance_m}")
    if system_loss < 1.0:
        raise ValueError(f"system loss must be >= 1, got {system_loss}")
    if gain_tx <= 0.0 or gain_rx <= 0.0:
        raise ValueError("linear antenna gains must be > 0")
    num = tx_power_w * gain_tx * gain_rx * wavelength_m * wavelength_m
    den = (4.0 * math.pi) ** 2 * distance_m * distance_m * system_loss
    return num / den


@dataclass(frozen=True)
class MmWavePathLossParams:
    """Line-of-sight power-law path loss with log-normal shadowing."""

    alpha_db: float = 61.4      # intercept at 1 m
    beta: float = 2.0           # path-loss exponent
    sigma_db: float = 5.8       # shadowing std-dev
    max_range_m: float = 200.0  # beyond this the link is in outage

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError("path-loss exponent must be > 0")
        if self.sigma_db < 0.0:
            raise ValueError("shadowing std-dev must be >= 0")
        if self.max_range_m <= 0.0:
            raise ValueError("coverage range must be > 0")


def mmwave_pathloss_db(distance_m: float, params: MmWavePathLossParams,
                       shadow_db: float = 0.0) -> float:
    """LOS mmWave path loss in dB; raises OutOfCoverageError past max range.

    The shadowing draw is supplied by the caller (from the shadowing RNG
    stream) so the function itself stays pure.  Distances below 1 m clamp to
    the 1 m intercept.
    """
    if distance_m > params.max_range_m:
        raise OutOfCoverageError(distance_m, params.max_range_m)
    d = max(distance_m, 1.0)
    return params.alpha_db + 10.0 * params.beta * math.log10(d) + shadow_db


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise floor: -174 dBm/Hz + 10*log10(B) + NF."""
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_hz}")
    return -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


@dataclass(frozen=True)
class RadioConfig:
    """Physical-layer parameters of one serving link (uplink direction)."""

    rat: Rat
    carrier_freq_hz: float
    bandwidth_hz: float
    tx_power_dbm: float
    tx_gain_dbi: float = 0.0
    rx_gain_dbi: float = 0.0
    system_loss: float = 1.0
    noise_figure_db: float = 9.0
    mmwave: Optional[MmWavePathLossParams] = None

    def __post_init__(self):
        if self.carrier_freq_hz <= 0.0:
            raise ValueError("carrier frequency must be > 0")
        if self.bandwidth_hz <= 0.0:
            raise ValueError("bandwidth must be > 0")
        if self.system_loss < 1.0:
            raise ValueError("system loss must be >= 1")
        if self.rat is Rat.NR and self.mmwave is None:
            object.__setattr__(self, "mmwave", MmWavePathLossParams())

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq_hz

    @property
    def noise_dbm(self) -> float:
        return noise_power_dbm(self.bandwidth_hz, self.noise_figure_db)


@dataclass(frozen=True, slots=True)
class ChannelSample:
    """One link-budget evaluation at a given distance."""

    distance_m: float
    pathloss_db: float
    rx_power_dbm: float
    noise_dbm: float
    penalties_db: float
    snr_db: float
    in_coverage: bool = True


def snr_db(cfg: RadioConfig, distance_m: float, penalties_db: float = 0.0,
           shadow_db: float = 0.0) -> ChannelSample:
    """Compose path loss, antenna gains and noise into an SNR sample.

    LTE uses Friis free-space loss (shadow ignored); NR uses the statistical
    LOS model.  Out-of-coverage propagates as a sample with snr = -inf rather
    than an exception so that the simulation treats it as outage.
    """
    if distance_m <= 0.0:
        raise ValueError(f"distance must be > 0, got {distance_m}")
    noise = cfg.noise_dbm
    if cfg.rat is Rat.LTE:
        rx_unit = friis_rx_power(1.0, 1.0, 1.0, cfg.wavelength_m, distance_m,
                                 cfg.system_loss)
        pathloss = -10.0 * math.log10(rx_unit)
    else:
        try:
            pathloss = mmwave_pathloss_db(distance_m, cfg.mmwave, shadow_db)
        except OutOfCoverageError:
            return ChannelSample(distance_m, math.inf, -math.inf, noise,
                                 penalties_db, -math.inf, in_coverage=False)
        pathloss += 10.0 * math.log10(cfg.system_loss)
    rx_power = cfg.tx_power_dbm + cfg.tx_gain_dbi + cfg.rx_gain_dbi - pathloss
    snr = rx_power - penalties_db - noise
    return ChannelSample(distance_m, pathloss, rx_power, noise, penalties_db, snr)


def nr_outage_probability(speed_kmh: float, v_mid_kmh: float = 45.0,
                          s_v_kmh: float = 4.0) -> float:
    """Probability that beam tracking loses the link for one slot at this speed."""
    if speed_kmh < 0.0:
        raise ValueError("speed must be >= 0")
    x = -(speed_kmh - v_mid_kmh) / s_v_kmh
    if x > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(x))


def velocity_penalty_db(rat: Rat, speed_kmh: float, rng: RngStream,
                        v_mid_kmh: float = 45.0, s_v_kmh: float = 4.0,
                        outage_penalty_db: float = 80.0,
                        lte_db_per_kmh: float = 0.02) -> float:
    """Per-slot mobility penalty.

    NR draws a beam-tracking outage with logistic probability in speed; an
    outage slot is penalised hard enough that the link is effectively broken.
    LTE sees only a small deterministic ramp.
    """
    if speed_kmh < 0.0:
        raise ValueError("speed must be >= 0")
    if rat is Rat.LTE:
        return lte_db_per_kmh * speed_kmh
    p = nr_outage_probability(speed_kmh, v_mid_kmh, s_v_kmh)
    return outage_penalty_db if rng.random() < p else 0.0
