"""Asymptotic secret key rate for Gaussian-modulated coherent-state protocols.

Reverse reconciliation against general attacks in the infinite-key limit,
via the two-mode covariance formalism: K = beta*I_AB - S_BE, with the Holevo
bound S_BE evaluated from the symplectic spectra of the shared and the
measurement-conditioned covariance matrices. The detector is trusted: Eve
only accesses the channel noise chi_ch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import NumericalError
from .noise import NoiseBudget, chi_channel, chi_detector, chi_total

__all__ = [
    "ProtocolKind",
    "LinkParams",
    "CovarianceCoeffs",
    "KeyRateResult",
    "g_von_neumann",
    "covariance_coefficients",
    "mutual_information",
    "symplectic_ab",
    "symplectic_conditional",
    "holevo_bound",
    "key_rate_asymptotic",
]

# tolerances for roundoff guards on discriminants / eigenvalues
_DISC_REL_TOL = 1e-12
_EIGEN_TOL = 1e-9


class ProtocolKind(enum.Enum):
    HOMODYNE = "homodyne"
    HETERODYNE = "heterodyne"

    @property
    def multiplier(self) -> int:
        """mu = 1 for homodyne, 2 for heterodyne."""
        return 1 if self is ProtocolKind.HOMODYNE else 2


@dataclass(frozen=True)
class LinkParams:
    """Protocol and link parameters entering the key-rate formulas.

    v_mod           Alice's modulation variance V_A (SNU)
    transmissivity  channel transmissivity T in (0, 1]
    det_efficiency  detector quantum efficiency eta_d in (0, 1]
    rec_efficiency  reconciliation efficiency beta in (0, 1]
    """

    v_mod: float
    transmissivity: float
    det_efficiency: float
    rec_efficiency: float
    protocol: ProtocolKind

    def __post_init__(self):
        if self.v_mod <= 0:
            raise ValueError(f"v_mod must be > 0, got {self.v_mod}")
        for name in ("transmissivity", "det_efficiency", "rec_efficiency"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {value}")

    @property
    def multiplier(self) -> int:
        return self.protocol.multiplier


@dataclass(frozen=True)
class CovarianceCoeffs:
    """Coefficients of the two-mode covariance matrix [[aI, c sz], [c sz, bI]]."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("diagonal coefficients must be >= 1 (vacuum bound)")
        if self.a * self.b - self.c**2 < 1 - 1e-9:
            raise ValueError("unphysical covariance: a*b - c^2 < 1")


@dataclass(frozen=True)
class KeyRateResult:
    mutual_info: float          # I_AB, bits/pulse
    holevo: float               # S_BE, bits/pulse
    key_rate: float             # raw beta*I_AB - S_BE
    key_rate_clamped: float     # max(0, key_rate)
    eigenvalues: tuple[float, float, float, float, float]


def g_von_neumann(x: float) -> float:
    """Bosonic entropy function G(x) = (x+1)log2(x+1) - x log2(x), G(0)=0."""
    if x < 0:
        raise ValueError(f"g_von_neumann requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def covariance_coefficients(params: LinkParams, chi: float) -> CovarianceCoeffs:
    """Covariance coefficients of the effective two-mode state at measurement.

    a = V_A + 1,  b = (eta_d T / mu)(V_A + chi + 1),
    c = sqrt(eta_d T / mu) sqrt(V_A^2 + 2 V_A).
    """
    v, t = params.v_mod, params.transmissivity
    gain = params.det_efficiency * t / params.multiplier
    return CovarianceCoeffs(
        a=v + 1.0,
        b=gain * (v + chi + 1.0),
        c=math.sqrt(gain) * math.sqrt(v**2 + 2.0 * v),
    )


def mutual_information(params: LinkParams, chi: float) -> float:
    """Alice-Bob mutual information (bits/pulse).

    I_AB = (mu/2) log2[(V_A + 1 + chi) / (1 + chi)]
    """
    if chi < 0:
        raise ValueError(f"chi must be >= 0, got {chi}")
    v = params.v_mod
    return params.multiplier / 2.0 * math.log2((v + 1.0 + chi) / (1.0 + chi))


def _sqrt_clamped(value: float, scale: float, context: str) -> float:
    """sqrt with a tolerance for small negative roundoff relative to scale."""
    if value < 0:
        if value > -_DISC_REL_TOL * max(scale, 1.0):
            return 0.0
        raise NumericalError(f"{context}: negative discriminant {value:.3e}")
    return math.sqrt(value)


def _eig_pair(big: float, det: float, context: str) -> tuple[float, float]:
    """Solve lambda^2 = (big +- sqrt(big^2 - 4 det)) / 2 for both eigenvalues."""
    root = _sqrt_clamped(big * big - 4.0 * det, big * big, context)
    lam1 = _sqrt_clamped((big + root) / 2.0, big, context)
    lam2 = _sqrt_clamped((big - root) / 2.0, big, context)
    return lam1, lam2


def _ab_invariants(v_mod: float, transmissivity: float, chi_ch: float) -> tuple[float, float]:
    """A' and B' of the shared state before detection (Eve's purification).

    A' = (V_A+1)^2 (1-2T) + 2T + T^2 (V_A+1+chi_ch)^2
    B' = T^2 ((V_A+1) chi_ch + 1)^2
    """
    v = v_mod + 1.0
    t = transmissivity
    a_prime = v * v * (1.0 - 2.0 * t) + 2.0 * t + (t * (v + chi_ch)) ** 2
    b_prime = (t * (v * chi_ch + 1.0)) ** 2
    return a_prime, b_prime


def symplectic_ab(v_mod: float, transmissivity: float, chi_ch: float) -> tuple[float, float]:
    """Symplectic eigenvalues (lambda1, lambda2) of the shared two-mode state."""
    a_prime, b_prime = _ab_invariants(v_mod, transmissivity, chi_ch)
    return _eig_pair(a_prime, b_prime, "symplectic_ab")


def symplectic_conditional(
    protocol: ProtocolKind,
    v_mod: float,
    transmissivity: float,
    chi_ch: float,
    chi_d: float,
    chi: float,
) -> tuple[float, float, float]:
    """Symplectic eigenvalues (lambda3, lambda4, lambda5=1) after Bob's measurement."""
    v = v_mod + 1.0
    t = transmissivity
    a_prime, b_prime = _ab_invariants(v_mod, transmissivity, chi_ch)
    sqrt_b = math.sqrt(b_prime)
    if protocol is ProtocolKind.HOMODYNE:
        den = t * (v + chi)
        c_prime = (a_prime * chi_d + v * sqrt_b + t * (v + chi_ch)) / den
        d_prime = sqrt_b * (v + sqrt_b * chi_d) / den
    else:
        den = (t * (v + chi)) ** 2
        c_prime = (
            a_prime * chi_d**2
            + b_prime
            + 1.0
            + 2.0 * chi_d * (v * sqrt_b + t * (v + chi_ch))
            + 2.0 * t * (v_mod**2 + 2.0 * v_mod)
        ) / den
        d_prime = ((v + sqrt_b * chi_d) / (t * (v + chi))) ** 2
    lam3, lam4 = _eig_pair(c_prime, d_prime, "symplectic_conditional")
    return lam3, lam4, 1.0


def _entropy_terms(*eigenvalues: float) -> float:
    """Sum of G((lambda-1)/2), tolerating eigenvalues within roundoff below 1."""
    total = 0.0
    for lam in eigenvalues:
        x = (lam - 1.0) / 2.0
        if x < 0:
            if lam < 1.0 - _EIGEN_TOL:
                raise NumericalError(f"unphysical symplectic eigenvalue {lam!r}")
            x = 0.0
        total += g_von_neumann(x)
    return total


def holevo_bound(params: LinkParams, chi_ch: float, chi_d: float, chi: float) -> float:
    """Holevo bound S_BE on Eve's information about Bob's outcomes (bits/pulse).

    Trusted-detector model: Eve purifies the state after the channel (only
    chi_ch enters lambda1,2) while the detector noise shapes the conditional
    spectrum lambda3,4 only. Clamped at 0 (S(E) - S(E|B) can round below 0
    for a decoupled Eve).
    """
    lam1, lam2 = symplectic_ab(params.v_mod, params.transmissivity, chi_ch)
    lam3, lam4, lam5 = symplectic_conditional(
        params.protocol, params.v_mod, params.transmissivity, chi_ch, chi_d, chi
    )
    s_e = _entropy_terms(lam1, lam2)
    s_e_given_b = _entropy_terms(lam3, lam4, lam5)
    return max(0.0, s_e - s_e_given_b)


def key_rate_asymptotic(params: LinkParams, budget: NoiseBudget) -> KeyRateResult:
    """Asymptotic reverse-reconciliation key rate K = beta*I_AB - S_BE."""
    chi_ch = chi_channel(params.transmissivity, budget.xi_ch)
    chi_d = chi_detector(params.multiplier, params.det_efficiency, budget.xi_d)
    chi = chi_total(chi_ch, chi_d, params.transmissivity)

    i_ab = mutual_information(params, chi)
    lam1, lam2 = symplectic_ab(params.v_mod, params.transmissivity, chi_ch)
    lam3, lam4, lam5 = symplectic_conditional(
        params.protocol, params.v_mod, params.transmissivity, chi_ch, chi_d, chi
    )
    s_be = max(0.0, _entropy_terms(lam1, lam2) - _entropy_terms(lam3, lam4, lam5))
    key_rate = params.rec_efficiency * i_ab - s_be
    return KeyRateResult(
        mutual_info=i_ab,
        holevo=s_be,
        key_rate=key_rate,
        key_rate_clamped=max(0.0, key_rate),
        eigenvalues=(lam1, lam2, lam3, lam4, lam5),
    )
