"""Turbulence-induced excess-noise terms for the downlink.

Covers aperture-averaged scintillation of the transmitted local oscillator,
intrinsic laser RIN, turbulent pulse broadening, and time-of-arrival noise
between signal and LO. Excess-noise values are in shot-noise units (SNU).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .atmosphere import AtmosphereModel, SlantPath, cn2_hv, integrate_altitude, outer_scale

__all__ = [
    "SPEED_OF_LIGHT",
    "OpticalPulse",
    "BroadeningResult",
    "LoRinSpec",
    "scintillation_index",
    "xi_rin_atmos",
    "xi_rin_lo",
    "pulse_broadening",
    "xi_time_of_arrival",
    "mean_intensity_far_field",
    "fresnel_parameter",
]

SPEED_OF_LIGHT = 299792458.0  # m/s


@dataclass(frozen=True)
class OpticalPulse:
    """Laser pulse parameters.

    carrier_omega  carrier angular frequency omega0 (rad/s)
    width_s        1/e pulse half-width tau0 (s)
    waist_m        beam waist W0 at the transmitter (m)
    rep_rate_hz    pulse repetition rate (Hz)
    """

    carrier_omega: float
    width_s: float
    waist_m: float
    rep_rate_hz: float

    def __post_init__(self):
        for name in ("carrier_omega", "width_s", "waist_m", "rep_rate_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.carrier_omega * self.width_s < 1e3:
            warnings.warn(
                "omega0*tau0 = %.3g is below 1e3; the quasi-monochromatic "
                "pulse model becomes questionable" % (self.carrier_omega * self.width_s),
                stacklevel=2,
            )

    @property
    def wavenumber(self) -> float:
        return self.carrier_omega / SPEED_OF_LIGHT


@dataclass(frozen=True)
class LoRinSpec:
    """Relative intensity noise of the local oscillator laser."""

    rin_density: float = 1.4e-7  # 1/Hz
    bandwidth_hz: float = 1e4

    def __post_init__(self):
        if self.rin_density <= 0 or self.bandwidth_hz <= 0:
            raise ValueError("rin_density and bandwidth_hz must be > 0")


@dataclass(frozen=True)
class BroadeningResult:
    """Turbulent pulse broadening summary.

    alpha  broadening coefficient (s^2)
    nu1    integral of Cn^2 * L0^(5/3) over altitude (m^2)
    tau1   broadened pulse width (s)
    ratio  tau0/tau1, attenuation factor of the received mean intensity
    """

    alpha: float
    nu1: float
    tau1: float
    ratio: float


def scintillation_index(
    aperture_m: float,
    path: SlantPath,
    wavenumber: float,
    model: AtmosphereModel = AtmosphereModel(),
    rel_tol: float = 1e-9,
):
    """Aperture-averaged scintillation index of the downlink plane wave.

    sigma_SI^2(D_R) = 8.70 k^(7/6) (H-h0)^(5/6) sec^(11/6)(zeta)
        * Re int_{h0}^{H} Cn^2(h) [ (a + i u(h))^(5/6) - a^(5/6) ] dh

    with u(h) = (h-h0)/(H-h0) the normalised path coordinate and ``a`` the
    receiver-aperture Fresnel parameter. The aperture parameter calibrated
    against the reported downlink values is a = k D_R / (16 L) with L the
    slant length; complex powers use the principal branch (the base always
    lies in the right half-plane).

    Returns (sigma_si2, error_bound).
    """
    if aperture_m <= 0:
        raise ValueError(f"aperture_m must be > 0, got {aperture_m}")
    if wavenumber <= 0:
        raise ValueError(f"wavenumber must be > 0, got {wavenumber}")

    h0 = path.receiver_altitude_m
    span = path.satellite_altitude_m - h0
    a = wavenumber * aperture_m / (16.0 * path.slant_length_m)
    a_pow = a ** (5.0 / 6.0)

    def bracket(h):
        # Re[(a + i u)^(5/6)] - a^(5/6) in polar form; the expm1/half-angle
        # split avoids catastrophic cancellation when u << a (large apertures)
        u = (h - h0) / span
        x = u / a
        radial = (5.0 / 12.0) * math.log1p(x * x)
        angle = (5.0 / 6.0) * math.atan(x)
        stable = math.expm1(radial) * math.cos(angle) - 2.0 * math.sin(angle / 2.0) ** 2
        return cn2_hv(h, model) * a_pow * stable

    integral = integrate_altitude(bracket, h0, path.satellite_altitude_m, rel_tol=rel_tol)
    prefactor = (
        8.70
        * wavenumber ** (7.0 / 6.0)
        * span ** (5.0 / 6.0)
        * path.sec_zenith ** (11.0 / 6.0)
    )
    return prefactor * integral.value, prefactor * integral.error


def xi_rin_atmos(sigma_si2: float, v_mod: float) -> float:
    """Excess noise from LO intensity scintillation: sigma_SI^2 * V_A (SNU)."""
    if sigma_si2 < 0:
        raise ValueError(f"sigma_si2 must be >= 0, got {sigma_si2}")
    if v_mod <= 0:
        raise ValueError(f"v_mod must be > 0, got {v_mod}")
    return sigma_si2 * v_mod


def xi_rin_lo(spec: LoRinSpec, v_mod: float) -> float:
    """Intrinsic LO relative-intensity noise: RIN * B_LO * V_A / 4 (SNU)."""
    if v_mod <= 0:
        raise ValueError(f"v_mod must be > 0, got {v_mod}")
    return 0.25 * spec.rin_density * spec.bandwidth_hz * v_mod


def pulse_broadening(
    pulse: OpticalPulse,
    path: SlantPath,
    model: AtmosphereModel = AtmosphereModel(),
    rel_tol: float = 1e-9,
) -> BroadeningResult:
    """Turbulent broadening of the pulse along the slant path.

    nu1 = int Cn^2(h) L0(h)^(5/3) dh, and

    alpha = 0.391 (1 + 0.171 delta^2 - 0.287 delta^(5/3)) nu1 sec(zeta) / c^2

    where delta is the inner-to-outer scale ratio l0/L0 (constant over
    altitude by construction). The broadened width is tau1 = sqrt(tau0^2 +
    8 alpha); the received mean intensity is attenuated by ratio = tau0/tau1.
    """
    integral = integrate_altitude(
        lambda h: cn2_hv(h, model) * outer_scale(h) ** (5.0 / 3.0),
        path.receiver_altitude_m,
        path.satellite_altitude_m,
        rel_tol=rel_tol,
    )
    nu1 = integral.value
    delta = model.inner_outer_ratio
    scale_factor = 1.0 + 0.171 * delta**2 - 0.287 * delta ** (5.0 / 3.0)
    alpha = 0.391 * scale_factor * nu1 * path.sec_zenith / SPEED_OF_LIGHT**2
    tau1 = math.sqrt(pulse.width_s**2 + 8.0 * alpha)
    return BroadeningResult(alpha=alpha, nu1=nu1, tau1=tau1, ratio=pulse.width_s / tau1)


def xi_time_of_arrival(v_mod: float, carrier_omega: float, rho_ta: float, tau1: float) -> float:
    """Excess noise from signal/LO time-of-arrival fluctuations (SNU).

    xi_ta = 2 V_A omega0^2 (1 - rho_ta) sigma_ta^2 with sigma_ta^2 = tau1^2/4,
    rho_ta being the timing correlation between signal and LO pulses.
    """
    if not 0 <= rho_ta <= 1:
        raise ValueError(f"rho_ta must be in [0, 1], got {rho_ta}")
    sigma_ta2 = tau1**2 / 4.0
    return 2.0 * v_mod * carrier_omega**2 * (1.0 - rho_ta) * sigma_ta2


def fresnel_parameter(pulse: OpticalPulse, distance_m: float) -> float:
    """Fresnel parameter Omega = omega0 W0^2 / (2 L c); far field when << 1."""
    if distance_m <= 0:
        raise ValueError(f"distance_m must be > 0, got {distance_m}")
    return pulse.carrier_omega * pulse.waist_m**2 / (2.0 * distance_m * SPEED_OF_LIGHT)


def mean_intensity_far_field(
    r_m: float,
    distance_m: float,
    t_s: float,
    pulse: OpticalPulse,
    tau1: float,
) -> float:
    """Temporal mean intensity of the broadened pulse in the far field.

    Unnormalised; ``r_m`` is the radial coordinate on the received wavefront
    and ``t_s`` the observation time. Warns when the geometry is not in the
    far-field regime (Fresnel parameter >= 0.2).
    """
    if fresnel_parameter(pulse, distance_m) >= 0.2:
        warnings.warn(
            "Fresnel parameter >= 0.2: far-field expression is unreliable here",
            stacklevel=2,
        )
    tau0 = pulse.width_s
    w = pulse.waist_m * r_m / (distance_m * SPEED_OF_LIGHT)  # (W0 r / L c), units s
    envelope = (
        (tau0**2 / tau1)
        * (pulse.waist_m**2 / (2.0 * distance_m * SPEED_OF_LIGHT)) ** 2
        * tau0**2
        * ((1.0 + pulse.carrier_omega**2 * tau0**2) + w**2)
        / (tau1 * (tau0**2 + w**2) ** 2.5)
    )
    chirp = math.exp(
        -pulse.carrier_omega**2 * tau0**2 * w**2 / (2.0 * (tau0**2 + w**2))
    )
    delay = t_s - distance_m / SPEED_OF_LIGHT - r_m**2 / (2.0 * distance_m * SPEED_OF_LIGHT)
    temporal = math.exp(-2.0 * delay**2 / tau1**2)
    return envelope * chirp * temporal
