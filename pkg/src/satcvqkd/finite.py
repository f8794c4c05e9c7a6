"""Finite-size epsilon-secure key rate for the heterodyne protocol.

Collective attacks at a composable failure probability epsilon, and general
attacks via the quartic reduction epsilon = 50*eps'/n^4. Parameter
estimation replaces the true channel parameters by confidence-interval
bounds (T_min, xi_max) inside the Holevo term only; the asymptotic-equipartition
correction Delta_AEP and a privacy-amplification log term are subtracted.

The transmittance estimator bounds the product eta_d*T, so the worst-case
channel transmissivity entering the trusted-detector formulas is
T_min/eta_d; as the estimation block grows this converges to the true T and
the finite rate approaches the asymptotic one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from scipy import special

from .errors import NumericalError, UnsupportedProtocolError
from .keyrate import (
    LinkParams,
    ProtocolKind,
    _entropy_terms,
    mutual_information,
    symplectic_ab,
    symplectic_conditional,
)
from .noise import NoiseBudget, chi_channel, chi_detector, chi_total

__all__ = [
    "SecurityBudget",
    "FiniteBlock",
    "EstimatorBounds",
    "FiniteKeyResult",
    "split_epsilon",
    "collective_epsilon_for_general",
    "kappa_exact",
    "tail_quantile",
    "estimator_expectations",
    "worst_case_bounds",
    "delta_aep",
    "key_rate_finite",
    "key_rate_general",
]

# below this the erfc inverse switches to the asymptotic-series Newton branch
_QUANTILE_SWITCH = 1e-12
_LOG_UNDERFLOW = math.log(1e-300)


@dataclass(frozen=True)
class SecurityBudget:
    """Total failure probability and its four-way split.

    epsilon = eps_ec + 2*eps_s + eps_pa + eps_pe. ``eps_prime`` records the
    general-attack target this budget was derived from, if any.
    """

    epsilon: float
    eps_ec: float
    eps_s: float
    eps_pa: float
    eps_pe: float
    eps_prime: float | None = None

    def __post_init__(self):
        for name in ("epsilon", "eps_ec", "eps_s", "eps_pa", "eps_pe"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must be in (0, 1), got {value}")
        total = self.eps_ec + 2.0 * self.eps_s + self.eps_pa + self.eps_pe
        if abs(total - self.epsilon) > 1e-9 * self.epsilon:
            raise ValueError(
                f"epsilon split inconsistent: {total} != {self.epsilon}"
            )


def split_epsilon(epsilon: float, eps_prime: float | None = None) -> SecurityBudget:
    """Equal split: each component epsilon/5, so EC + 2s + PA + PE = epsilon."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    part = epsilon / 5.0
    return SecurityBudget(
        epsilon=epsilon, eps_ec=part, eps_s=part, eps_pa=part, eps_pe=part,
        eps_prime=eps_prime,
    )


@dataclass(frozen=True)
class FiniteBlock:
    """Symbol accounting for a finite block.

    total_symbols       N
    estimation_symbols  n_e used for parameter estimation
    discretization      d, bits of precision per symbol
    """

    total_symbols: float
    estimation_symbols: float
    discretization: int = 5

    def __post_init__(self):
        if not 0 < self.estimation_symbols < self.total_symbols:
            raise ValueError(
                f"require 0 < n_e < N, got n_e={self.estimation_symbols}, "
                f"N={self.total_symbols}"
            )
        if self.discretization < 1 or self.discretization != int(self.discretization):
            raise ValueError(f"discretization must be an integer >= 1, got {self.discretization}")

    @property
    def key_symbols(self) -> float:
        """n = N - n_e."""
        return self.total_symbols - self.estimation_symbols

    @classmethod
    def equal_split(cls, n: float, discretization: int = 5) -> "FiniteBlock":
        """n_e = n, N = 2n (the usual n/N = 0.5 configuration)."""
        return cls(total_symbols=2.0 * n, estimation_symbols=n, discretization=discretization)


@dataclass(frozen=True)
class EstimatorBounds:
    """Expectations of the channel estimators and their worst-case bounds."""

    t_hat: float
    sigma2_hat: float
    t_min: float
    xi_max: float
    z_quantile: float


@dataclass(frozen=True)
class FiniteKeyResult:
    mutual_info: float            # I_AB at the true parameters
    holevo_wc: float              # S_BE at the worst-case (T_min, xi_max)
    key_rate: float               # raw finite-size rate, bits/pulse
    key_rate_clamped: float
    bounds: EstimatorBounds
    delta_aep: float
    eigenvalues_wc: tuple[float, float, float, float, float]


def collective_epsilon_for_general(eps_prime: float, n: float) -> float:
    """Collective-attack epsilon delivering eps'-security against general attacks.

    Uses the kappa ~ n shortcut of the Gaussian de Finetti reduction:
    epsilon = 50 * eps' / n^4. Guarded in log space against underflow; the
    exact kappa is available through kappa_exact for experimentation.
    """
    if not 0 < eps_prime < 1:
        raise ValueError(f"eps_prime must be in (0, 1), got {eps_prime}")
    if n <= 0:
        raise ValueError(f"n must be > 0, got {n}")
    log_eps = math.log(50.0) + math.log(eps_prime) - 4.0 * math.log(n)
    if log_eps >= 0:
        raise ValueError("mapped epsilon >= 1; n too small for the reduction")
    if log_eps < _LOG_UNDERFLOW:
        raise NumericalError(
            f"mapped epsilon underflows double precision (ln eps = {log_eps:.1f})"
        )
    return 50.0 * eps_prime / n**4


def kappa_exact(n: float, d_a: float, d_b: float, n_modes: float, epsilon: float) -> float:
    """Exact kappa of the general-attack reduction (needs mean photon numbers).

    kappa = max{1, n(d_A+d_B)(1 + 2 sqrt[ln(8/eps)/(2n)])
                 + (ln(8/eps)/n)(1 - 2 sqrt[ln(8/eps)/(2k)])}
    """
    if min(n, d_a, d_b, n_modes) <= 0 or not 0 < epsilon < 1:
        raise ValueError("kappa_exact requires positive arguments and epsilon in (0, 1)")
    ln_term = math.log(8.0 / epsilon)
    return max(
        1.0,
        n * (d_a + d_b) * (1.0 + 2.0 * math.sqrt(ln_term / (2.0 * n)))
        + (ln_term / n) * (1.0 - 2.0 * math.sqrt(ln_term / (2.0 * n_modes))),
    )


# odd double factorials (2k-1)!! for k = 0..8
_DOUBLE_FACTORIALS = (1.0, 1.0, 3.0, 15.0, 105.0, 945.0, 10395.0, 135135.0, 2027025.0)


def _mills_series(z: float) -> float:
    """Asymptotic series S(z) with ndtr(-z) = phi(z) S(z) / z, z >> 1."""
    z2 = z * z
    total, power = 0.0, 1.0
    for k, dfac in enumerate(_DOUBLE_FACTORIALS):
        total += (-1.0) ** k * dfac / power
        power *= z2
    return total


def _log_erfc_asymptotic(z: float) -> float:
    """ln erfc(z/sqrt(2)) for large z via the Mills-ratio expansion."""
    return (
        math.log(2.0)
        - 0.5 * z * z
        - math.log(z)
        - 0.5 * math.log(2.0 * math.pi)
        + math.log(_mills_series(z))
    )


def tail_quantile(eps_pe: float) -> float:
    """Solve 1 - erf(z/sqrt(2)) = eps_pe for z.

    Moderate tails use the library inverse; extreme tails (down to 1e-300,
    far below where erfc tables make sense) invert the asymptotic expansion
    of log-erfc by Newton iteration, which is stable in log space.
    """
    if not 0 < eps_pe < 1:
        raise ValueError(f"eps_pe must be in (0, 1), got {eps_pe}")
    if eps_pe >= _QUANTILE_SWITCH:
        return math.sqrt(2.0) * float(special.erfcinv(eps_pe))

    target = math.log(eps_pe)
    z = math.sqrt(-2.0 * target)  # crude seed, refined by Newton
    for _ in range(60):
        series = _mills_series(z)
        step = (_log_erfc_asymptotic(z) - target) * series / z
        z += step
        if abs(step) < 1e-13 * z:
            return z
    raise NumericalError(f"tail quantile did not converge for eps_pe={eps_pe!r}")


def estimator_expectations(params: LinkParams, budget: NoiseBudget) -> tuple[float, float]:
    """Expectation values of the transmittance and variance estimators.

    E[t_hat] = sqrt(eta_d T),  E[sigma2_hat] = T eta_d xi_ch + 1 + xi_d.
    """
    t_hat = math.sqrt(params.det_efficiency * params.transmissivity)
    sigma2_hat = (
        params.transmissivity * params.det_efficiency * budget.xi_ch + 1.0 + budget.xi_d
    )
    return t_hat, sigma2_hat


def worst_case_bounds(
    t_hat: float,
    sigma2_hat: float,
    v_mod: float,
    n_est: float,
    eps_pe: float,
    xi_d: float,
) -> EstimatorBounds:
    """Confidence-interval bounds T_min and xi_max at PE failure eps_pe.

    T_min = (t_hat - z sqrt(sigma2_hat/(n_e V_A)))^2
    xi_max = (sigma2_hat + z sigma2_hat sqrt(2)/sqrt(n_e) - 1 - xi_d) / t_hat^2
    """
    if n_est <= 0:
        raise ValueError(f"n_est must be > 0, got {n_est}")
    if t_hat == 0:
        raise ValueError("t_hat = 0: xi_max undefined")
    z = tail_quantile(eps_pe)
    lower = t_hat - z * math.sqrt(sigma2_hat / (n_est * v_mod))
    t_min = max(lower, 0.0) ** 2
    xi_max = (sigma2_hat + z * sigma2_hat * math.sqrt(2.0) / math.sqrt(n_est)
              - 1.0 - xi_d) / t_hat**2
    if xi_max < 0:
        warnings.warn(
            f"xi_max = {xi_max:.3e} < 0 (extreme eps_pe / tiny noise); "
            "worst-case bound kept as computed",
            stacklevel=2,
        )
    return EstimatorBounds(
        t_hat=t_hat, sigma2_hat=sigma2_hat, t_min=t_min, xi_max=xi_max, z_quantile=z
    )


def delta_aep(n: float, discretization: int, epsilon: float, eps_s: float) -> float:
    """Asymptotic-equipartition correction Delta_AEP(n).

    (d+1)^2 + 4(d+1) sqrt(log2(2/eps_s)) + 2 log2(2/(eps^2 eps_s))
    + 4 eps_s d / (eps sqrt(n))
    """
    if n <= 0:
        raise ValueError(f"n must be > 0, got {n}")
    d = discretization
    return (
        (d + 1.0) ** 2
        + 4.0 * (d + 1.0) * math.sqrt(math.log2(2.0 / eps_s))
        + 2.0 * math.log2(2.0 / (epsilon**2 * eps_s))
        + 4.0 * eps_s * d / (epsilon * math.sqrt(n))
    )


def key_rate_finite(
    params: LinkParams,
    budget: NoiseBudget,
    block: FiniteBlock,
    security: SecurityBudget,
) -> FiniteKeyResult:
    """Finite-size key rate for the heterodyne protocol.

    K = (n/N)[beta I_AB - S_BE^wc] - (sqrt(n)/N) Delta_AEP(n)
        - (2/N) log2(1/(2 epsilon))

    I_AB uses the true (T, xi_ch); only the Holevo term is evaluated at the
    worst-case (T_min, xi_max).
    """
    if params.protocol is not ProtocolKind.HETERODYNE:
        raise UnsupportedProtocolError(
            "finite-size security is only available for the heterodyne protocol"
        )
    t_hat, sigma2_hat = estimator_expectations(params, budget)
    bounds = worst_case_bounds(
        t_hat, sigma2_hat, params.v_mod, block.estimation_symbols,
        security.eps_pe, budget.xi_d,
    )
    if bounds.t_min <= 0.0:
        raise NumericalError(
            "parameter-estimation interval reaches zero transmissivity; "
            "increase n_e or eps_pe"
        )

    # t_hat estimates sqrt(eta_d T), so the worst-case channel transmissivity
    # is T_min/eta_d; detector parameters stay at their trusted values.
    t_wc = min(bounds.t_min / params.det_efficiency, 1.0)
    chi_d = chi_detector(params.multiplier, params.det_efficiency, budget.xi_d)
    chi_ch_wc = chi_channel(t_wc, bounds.xi_max)
    chi_wc = chi_total(chi_ch_wc, chi_d, t_wc)
    wc_params = replace(params, transmissivity=t_wc)
    lam1, lam2 = symplectic_ab(wc_params.v_mod, t_wc, chi_ch_wc)
    lam3, lam4, lam5 = symplectic_conditional(
        wc_params.protocol, wc_params.v_mod, t_wc, chi_ch_wc, chi_d, chi_wc
    )
    holevo_wc = max(0.0, _entropy_terms(lam1, lam2) - _entropy_terms(lam3, lam4, lam5))

    chi_ch = chi_channel(params.transmissivity, budget.xi_ch)
    chi = chi_total(chi_ch, chi_d, params.transmissivity)
    i_ab = mutual_information(params, chi)

    n = block.key_symbols
    big_n = block.total_symbols
    aep = delta_aep(n, block.discretization, security.epsilon, security.eps_s)
    key_rate = (
        n / big_n * (params.rec_efficiency * i_ab - holevo_wc)
        - math.sqrt(n) / big_n * aep
        - 2.0 / big_n * math.log2(1.0 / (2.0 * security.epsilon))
    )
    return FiniteKeyResult(
        mutual_info=i_ab,
        holevo_wc=holevo_wc,
        key_rate=key_rate,
        key_rate_clamped=max(0.0, key_rate),
        bounds=bounds,
        delta_aep=aep,
        eigenvalues_wc=(lam1, lam2, lam3, lam4, lam5),
    )


def key_rate_general(
    params: LinkParams,
    budget: NoiseBudget,
    block: FiniteBlock,
    eps_prime: float,
) -> FiniteKeyResult:
    """Finite-size rate that is eps'-secure against general attacks."""
    epsilon = collective_epsilon_for_general(eps_prime, block.key_symbols)
    security = split_epsilon(epsilon, eps_prime=eps_prime)
    return key_rate_finite(params, budget, block, security)
