"""Excess-noise budget and secret key rates for coherent-state CV-QKD over
the LEO satellite-to-Earth optical channel."""

from .atmosphere import (
    AtmosphereModel,
    SlantPath,
    cn2_hv,
    fried_parameter,
    inner_scale,
    integrate_altitude,
    outer_scale,
    phase_psd,
)
from .errors import NumericalError, QuadratureError, UnsupportedProtocolError, ValidationError
from .finite import (
    EstimatorBounds,
    FiniteBlock,
    FiniteKeyResult,
    SecurityBudget,
    collective_epsilon_for_general,
    delta_aep,
    estimator_expectations,
    kappa_exact,
    key_rate_finite,
    key_rate_general,
    split_epsilon,
    tail_quantile,
    worst_case_bounds,
)
from .keyrate import (
    CovarianceCoeffs,
    KeyRateResult,
    LinkParams,
    ProtocolKind,
    covariance_coefficients,
    g_von_neumann,
    holevo_bound,
    key_rate_asymptotic,
    mutual_information,
    symplectic_ab,
    symplectic_conditional,
)
from .noise import (
    ChannelNoiseComponents,
    DetectorNoiseComponents,
    NoiseBudget,
    assemble_channel_noise,
    assemble_detector_noise,
    chi_channel,
    chi_detector,
    chi_total,
    daylight_table_budget,
    loss_db_to_transmissivity,
    total_excess_noise,
    transmissivity_to_loss_db,
)
from .scenario import (
    Scenario,
    default_config,
    evaluate_scenario,
    impact_table,
    load_scenario,
    noise_breakdown_table,
    resolve_noise,
    sweep_scenario,
)
from .turbulence import (
    BroadeningResult,
    LoRinSpec,
    OpticalPulse,
    fresnel_parameter,
    mean_intensity_far_field,
    pulse_broadening,
    scintillation_index,
    xi_rin_atmos,
    xi_rin_lo,
    xi_time_of_arrival,
)

__version__ = "0.1.0"
