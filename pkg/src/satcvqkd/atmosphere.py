"""Vertical turbulence profile models and slant-path integration primitives.

All altitudes are in metres above the ground station, all angles in radians.
The refractive-index structure profile is the Hufnagel-Valley model; the outer
scale follows the empirical Coulman-Vernin profile and the inner scale is a
fixed fraction of the outer scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from .errors import QuadratureError

__all__ = [
    "AtmosphereModel",
    "SlantPath",
    "IntegralResult",
    "cn2_hv",
    "outer_scale",
    "inner_scale",
    "fried_parameter",
    "phase_psd",
    "integrate_altitude",
]

_QUAD_LIMIT = 200


@dataclass(frozen=True)
class AtmosphereModel:
    """Turbulence profile constants.

    wind_rms          rms wind speed in m/s
    ground_cn2        nominal Cn^2 at the ground in m^(-2/3)
    inner_outer_ratio l0/L0, dimensionless
    ground_altitude   altitude of the profile origin in m
    """

    wind_rms: float = 21.0
    ground_cn2: float = 1.7e-14
    inner_outer_ratio: float = 0.005
    ground_altitude: float = 0.0

    def __post_init__(self):
        if self.wind_rms <= 0:
            raise ValueError(f"wind_rms must be > 0, got {self.wind_rms}")
        if self.ground_cn2 <= 0:
            raise ValueError(f"ground_cn2 must be > 0, got {self.ground_cn2}")
        if not 0 < self.inner_outer_ratio < 1:
            raise ValueError(
                f"inner_outer_ratio must be in (0, 1), got {self.inner_outer_ratio}"
            )


@dataclass(frozen=True)
class SlantPath:
    """Receiver-to-satellite geometry.

    receiver_altitude_m   ground station altitude h0 (m)
    satellite_altitude_m  satellite altitude H at zenith (m)
    zenith_rad            zenith angle (rad), < pi/2
    """

    receiver_altitude_m: float
    satellite_altitude_m: float
    zenith_rad: float

    def __post_init__(self):
        if not 0 <= self.receiver_altitude_m < self.satellite_altitude_m:
            raise ValueError(
                "require 0 <= receiver altitude < satellite altitude, got "
                f"h0={self.receiver_altitude_m}, H={self.satellite_altitude_m}"
            )
        if not 0 <= self.zenith_rad < math.pi / 2:
            raise ValueError(f"zenith angle must be in [0, pi/2), got {self.zenith_rad}")

    @property
    def sec_zenith(self) -> float:
        return 1.0 / math.cos(self.zenith_rad)

    @property
    def slant_length_m(self) -> float:
        """Geometric path length (H - h0) * sec(zenith)."""
        return (self.satellite_altitude_m - self.receiver_altitude_m) * self.sec_zenith


class IntegralResult(NamedTuple):
    value: complex | float
    error: float


def cn2_hv(h, model: AtmosphereModel = AtmosphereModel()):
    """Hufnagel-Valley refractive-index structure profile Cn^2(h) in m^(-2/3).

    Accepts a scalar altitude or an ndarray. The three terms model the
    high-altitude wind-driven layer, the tropopause background and the
    ground layer whose strength is ``model.ground_cn2``.
    """
    h = np.asarray(h, dtype=float)
    if np.any(h < 0):
        raise ValueError("altitude must be >= 0")
    v = model.wind_rms
    out = (
        0.00594 * (v / 27.0) ** 2 * (1e-5 * h) ** 10 * np.exp(-h / 1000.0)
        + 2.7e-16 * np.exp(-h / 1500.0)
        + model.ground_cn2 * np.exp(-h / 100.0)
    )
    return float(out) if out.ndim == 0 else out


def outer_scale(h):
    """Coulman-Vernin outer scale L0(h) in m; peaks at 4 m at h = 8500 m."""
    h = np.asarray(h, dtype=float)
    if np.any(h < 0):
        raise ValueError("altitude must be >= 0")
    out = 4.0 / (1.0 + ((h - 8500.0) / 2500.0) ** 2)
    return float(out) if out.ndim == 0 else out


def inner_scale(h, model: AtmosphereModel = AtmosphereModel()):
    """Inner scale l0(h) = inner_outer_ratio * L0(h), in m."""
    return model.inner_outer_ratio * outer_scale(h)


def integrate_altitude(
    f: Callable,
    h_lo: float,
    h_hi: float,
    rel_tol: float = 1e-9,
) -> IntegralResult:
    """Adaptive quadrature of ``f`` over the altitude interval [h_lo, h_hi].

    The integrand may return complex values; real and imaginary parts are
    integrated separately and recombined. Returns the estimate together with
    a conservative absolute error bound.

    Raises QuadratureError (carrying the best estimate and its error bound)
    when the adaptive scheme cannot reach the requested tolerance.
    """
    if not h_lo < h_hi:
        raise ValueError(f"require h_lo < h_hi, got [{h_lo}, {h_hi}]")
    if rel_tol <= 0:
        raise ValueError(f"rel_tol must be > 0, got {rel_tol}")

    probe = f(0.5 * (h_lo + h_hi))
    if np.iscomplexobj(probe) or isinstance(probe, complex):
        re, re_err = _quad_real(lambda h: f(h).real, h_lo, h_hi, rel_tol)
        im, im_err = _quad_real(lambda h: f(h).imag, h_lo, h_hi, rel_tol)
        return IntegralResult(re + 1j * im, re_err + im_err)
    value, err = _quad_real(f, h_lo, h_hi, rel_tol)
    return IntegralResult(value, err)


def _quad_real(f, a, b, rel_tol):
    out = integrate.quad(f, a, b, epsabs=0.0, epsrel=rel_tol,
                         limit=_QUAD_LIMIT, full_output=1)
    if len(out) == 4:
        value, err, _info, message = out
        raise QuadratureError(
            f"quadrature on [{a}, {b}] did not converge: {message} "
            f"(best estimate {value:.6e}, error bound {err:.2e})",
            estimate=value,
            error_bound=err,
        )
    value, err, _info = out
    return value, err


def fried_parameter(
    path: SlantPath,
    wavenumber: float,
    model: AtmosphereModel = AtmosphereModel(),
    rel_tol: float = 1e-9,
) -> float:
    """Fried parameter r0 (m) for propagation along ``path``.

    r0 = [0.423 k^2 sec(zeta) * integral of Cn^2 over [h0, H]]^(-3/5)
    """
    if wavenumber <= 0:
        raise ValueError(f"wavenumber must be > 0, got {wavenumber}")
    integral = integrate_altitude(
        lambda h: cn2_hv(h, model),
        path.receiver_altitude_m,
        path.satellite_altitude_m,
        rel_tol=rel_tol,
    )
    return (0.423 * wavenumber**2 * path.sec_zenith * integral.value) ** (-3.0 / 5.0)


def phase_psd(kappa: float, r0: float, l0: float, L0: float) -> float:
    """Phase power spectral density of refractive-index fluctuations.

    Modified von Karman form with Gaussian inner-scale cutoff at
    kappa_m = 5.92/l0 and outer-scale roll-off at kappa_0 = 2*pi/L0.
    Leaf utility: evaluated directly, no downstream consumer.
    """
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    if r0 <= 0:
        raise ValueError(f"r0 must be > 0, got {r0}")
    if not 0 < l0 < L0:
        raise ValueError(f"require 0 < l0 < L0, got l0={l0}, L0={L0}")
    kappa_m = 5.92 / l0
    kappa_0 = 2.0 * math.pi / L0
    return (
        0.49
        * r0 ** (-5.0 / 3.0)
        * math.exp(-(kappa**2) / kappa_m**2)
        / (kappa**2 + kappa_0**2) ** (11.0 / 6.0)
    )
