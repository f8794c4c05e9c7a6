"""Excess-noise bookkeeping: channel/detector components, totals and chi terms.

Everything is expressed in shot-noise units (vacuum variance = 1). Channel
noise is referred to the channel input; detector noise to the detector
output. The daylight table constants reproduce the published break-down:
the three detector terms only bounded as "<1e-4" are pinned to 1e-4/3 each
so the detector total is exactly 0.0133.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "ChannelNoiseComponents",
    "DetectorNoiseComponents",
    "NoiseBudget",
    "assemble_channel_noise",
    "assemble_detector_noise",
    "total_excess_noise",
    "chi_channel",
    "chi_detector",
    "chi_total",
    "loss_db_to_transmissivity",
    "transmissivity_to_loss_db",
    "daylight_table_budget",
    "NIGHT_BACKGROUND",
]

NIGHT_BACKGROUND = 1e-7


@dataclass(frozen=True)
class ChannelNoiseComponents:
    """The six named channel excess-noise contributions (SNU)."""

    xi_ta: float = 0.006            # time-of-arrival fluctuations
    xi_rin_atmos: float = 0.01      # LO scintillation
    xi_rin_lo: float = 0.0018       # intrinsic LO RIN
    xi_mod: float = 0.0005          # modulation voltage noise
    xi_background: float = 0.0002   # daylight background photons
    xi_rin_signal: float = 0.0001   # signal RIN (table upper bound)

    def __post_init__(self):
        _check_nonnegative(self)

    @property
    def total(self) -> float:
        return assemble_channel_noise(self)


@dataclass(frozen=True)
class DetectorNoiseComponents:
    """The five named detector excess-noise contributions (SNU)."""

    v_el: float = 0.013             # electronic noise
    xi_adc: float = 0.0002          # ADC quantisation
    xi_overlap: float = 1e-4 / 3    # pulse overlap      (table: < 1e-4)
    xi_lo: float = 1e-4 / 3         # LO subtraction     (table: < 1e-4)
    xi_leak: float = 1e-4 / 3       # LO-signal leakage  (table: < 1e-4)

    def __post_init__(self):
        _check_nonnegative(self)

    @property
    def total(self) -> float:
        return assemble_detector_noise(self)


def _check_nonnegative(obj):
    for f in fields(obj):
        if getattr(obj, f.name) < 0:
            raise ValueError(f"{f.name} must be >= 0, got {getattr(obj, f.name)}")


@dataclass(frozen=True)
class NoiseBudget:
    """Channel + detector excess-noise break-down."""

    channel: ChannelNoiseComponents
    detector: DetectorNoiseComponents

    @property
    def xi_ch(self) -> float:
        return self.channel.total

    @property
    def xi_d(self) -> float:
        return self.detector.total

    def components(self) -> dict[str, float]:
        out = {f.name: getattr(self.channel, f.name) for f in fields(self.channel)}
        out.update({f.name: getattr(self.detector, f.name) for f in fields(self.detector)})
        return out


def assemble_channel_noise(c: ChannelNoiseComponents) -> float:
    """Sum of the six channel terms (fsum: exact and permutation-invariant)."""
    return math.fsum(getattr(c, f.name) for f in fields(c))


def assemble_detector_noise(d: DetectorNoiseComponents) -> float:
    """Sum of the five detector terms."""
    return math.fsum(getattr(d, f.name) for f in fields(d))


def daylight_table_budget(night: bool = False, **overrides: float) -> NoiseBudget:
    """Budget pinned to the published daylight table, with optional overrides.

    ``night=True`` replaces the background term by the night-time bound.
    Keyword overrides address any component by its field name.
    """
    channel = ChannelNoiseComponents()
    detector = DetectorNoiseComponents()
    if night:
        channel = replace(channel, xi_background=NIGHT_BACKGROUND)
    ch_names = {f.name for f in fields(channel)}
    det_names = {f.name for f in fields(detector)}
    for key, value in overrides.items():
        if key in ch_names:
            channel = replace(channel, **{key: value})
        elif key in det_names:
            detector = replace(detector, **{key: value})
        else:
            raise ValueError(f"unknown noise component {key!r}")
    return NoiseBudget(channel=channel, detector=detector)


def total_excess_noise(
    xi_ch: float, xi_d: float, multiplier: int, det_efficiency: float, transmissivity: float
) -> float:
    """Total excess noise xi = xi_ch + mu*xi_d/(eta_d*T), referred to input."""
    _check_mu_eta_t(multiplier, det_efficiency, transmissivity)
    return xi_ch + multiplier * xi_d / (det_efficiency * transmissivity)


def chi_channel(transmissivity: float, xi_ch: float) -> float:
    """Channel noise referred to input: chi_ch = (1-T)/T + xi_ch."""
    if not 0 < transmissivity <= 1:
        raise ValueError(f"transmissivity must be in (0, 1], got {transmissivity}")
    return (1.0 - transmissivity) / transmissivity + xi_ch


def chi_detector(multiplier: int, det_efficiency: float, xi_d: float) -> float:
    """Detector noise referred to output: chi_d = (mu-eta_d)/eta_d + mu*xi_d/eta_d."""
    _check_mu_eta_t(multiplier, det_efficiency, 1.0)
    return (multiplier - det_efficiency) / det_efficiency + multiplier * xi_d / det_efficiency


def chi_total(chi_ch: float, chi_d: float, transmissivity: float) -> float:
    """Total noise referred to channel input: chi = chi_ch + chi_d/T."""
    if not 0 < transmissivity <= 1:
        raise ValueError(f"transmissivity must be in (0, 1], got {transmissivity}")
    return chi_ch + chi_d / transmissivity


def _check_mu_eta_t(multiplier, det_efficiency, transmissivity):
    if multiplier not in (1, 2):
        raise ValueError(f"multiplier must be 1 or 2, got {multiplier}")
    if not 0 < det_efficiency <= 1:
        raise ValueError(f"det_efficiency must be in (0, 1], got {det_efficiency}")
    if not 0 < transmissivity <= 1:
        raise ValueError(f"transmissivity must be in (0, 1], got {transmissivity}")


def loss_db_to_transmissivity(loss_db: float) -> float:
    if loss_db < 0:
        raise ValueError(f"loss_db must be >= 0, got {loss_db}")
    return 10.0 ** (-loss_db / 10.0)


def transmissivity_to_loss_db(transmissivity: float) -> float:
    if not 0 < transmissivity <= 1:
        raise ValueError(f"transmissivity must be in (0, 1], got {transmissivity}")
    return -10.0 * math.log10(transmissivity) + 0.0  # +0.0 avoids -0.0 at T=1
