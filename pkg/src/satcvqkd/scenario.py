"""Scenario configuration and end-to-end evaluation.

A scenario bundles the link, pulse, geometry, atmosphere, noise sourcing and
security settings. Config files are YAML (JSON works too) with explicit unit
suffixes in key names; every field has a default reproducing the published
baseline system (1 m receiver, 500 km satellite at 60 deg zenith, 130 ps
pulses at 1550 nm, eta_d = beta = 0.95, V_A = 5, pinned daylight noise table).

Noise sourcing: ``pinned`` takes the daylight table constants (exact table
reproduction); ``computed`` derives the scintillation, time-of-arrival and
LO-RIN components from the turbulence models. Sweeps over physical axes
rescale pinned components by the model ratio between the swept point and the
baseline, so calibrated anchors follow the model physics.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path

import yaml

from .atmosphere import AtmosphereModel, SlantPath
from .errors import ValidationError
from .finite import (
    FiniteBlock,
    FiniteKeyResult,
    key_rate_finite,
    key_rate_general,
    split_epsilon,
)
from .keyrate import KeyRateResult, LinkParams, ProtocolKind, key_rate_asymptotic
from .noise import (
    ChannelNoiseComponents,
    DetectorNoiseComponents,
    NoiseBudget,
    chi_channel,
    chi_detector,
    chi_total,
    daylight_table_budget,
    loss_db_to_transmissivity,
    total_excess_noise,
    transmissivity_to_loss_db,
)
from .turbulence import (
    BroadeningResult,
    LoRinSpec,
    OpticalPulse,
    fresnel_parameter,
    pulse_broadening,
    scintillation_index,
    xi_rin_atmos,
    xi_rin_lo,
    xi_time_of_arrival,
)

__all__ = [
    "Scenario",
    "default_config",
    "load_scenario",
    "scenario_from_config",
    "resolve_noise",
    "evaluate_scenario",
    "sweep_scenario",
    "impact_table",
    "noise_breakdown_table",
    "figure_data",
    "SWEEP_AXES",
]

_CHANNEL_KEYS = tuple(f.name for f in fields(ChannelNoiseComponents))
_DETECTOR_KEYS = tuple(f.name for f in fields(DetectorNoiseComponents))

SWEEP_AXES = ("loss_db", "rx_aperture_m", "zenith_deg", "tau0_ps", "v_mod", "key_symbols")

_AXIS_ALIASES = {
    "loss_db": "loss_db",
    "d_r": "rx_aperture_m",
    "rx_aperture_m": "rx_aperture_m",
    "zenith": "zenith_deg",
    "zenith_deg": "zenith_deg",
    "tau0": "tau0_ps",
    "tau0_ps": "tau0_ps",
    "v_a": "v_mod",
    "v_mod": "v_mod",
    "n": "key_symbols",
    "key_symbols": "key_symbols",
}


def default_config() -> dict:
    """Baseline configuration (published system parameters, pinned noise)."""
    return {
        "system": {
            "protocol": "heterodyne",
            "v_mod": 5.0,
            "det_efficiency": 0.95,
            "rec_efficiency": 0.95,
            "loss_db": 20.0,
            "carrier_thz": 200.0,
            "tau0_ps": 130.0,
            "rep_rate_mhz": 100.0,
            "beam_waist_m": 0.15,
            "tx_aperture_m": 0.3,
            "rx_aperture_m": 1.0,
            "satellite_altitude_km": 500.0,
            "ground_altitude_km": 0.0,
            "zenith_deg": 60.0,
            "toa_decorrelation": 1e-13,
            "lo_rin_per_hz": 1.4e-7,
            "lo_bandwidth_khz": 10.0,
        },
        "atmosphere": {
            "wind_rms_mps": 21.0,
            "ground_cn2": 1.7e-14,
            "inner_outer_ratio": 0.005,
        },
        "noise": {
            "source": "pinned",
            "night": False,
            "overrides": {},
        },
        "security": {
            "eps_collective": 1e-9,
            "eps_general_prime": 1e-9,
            "key_symbols": 1e12,
            "estimation_symbols": 1e12,
            "discretization": 5,
        },
        "sweep": {
            "axis": "loss_db",
            "min": 0.0,
            "max": 35.0,
            "points": 71,
            "scale": "linear",
        },
    }


@dataclass(frozen=True)
class Scenario:
    """Fully resolved scenario (SI units throughout)."""

    link: LinkParams
    pulse: OpticalPulse
    path: SlantPath
    atmosphere: AtmosphereModel
    lo_rin: LoRinSpec
    rho_ta: float
    tx_aperture_m: float
    rx_aperture_m: float
    noise_source: str
    night: bool
    noise_overrides: dict
    eps_collective: float
    eps_general_prime: float
    block: FiniteBlock
    config: dict

    def to_config(self) -> dict:
        return copy.deepcopy(self.config)


def load_scenario(source: str | Path | dict | None = None) -> Scenario:
    """Build a scenario from a YAML/JSON file path, a dict, or the defaults."""
    if source is None:
        user: dict = {}
    elif isinstance(source, dict):
        user = copy.deepcopy(source)
    else:
        text = Path(source).read_text()
        user = yaml.safe_load(text) or {}
        if not isinstance(user, dict):
            raise ValidationError(f"config root must be a mapping, got {type(user).__name__}")
    return scenario_from_config(user)


def _merge_section(defaults: dict, user: dict, section: str, problems: list[str],
                   exclusive: tuple[tuple[str, str], ...] = ()) -> dict:
    base = dict(defaults[section])
    given = user.get(section, {})
    if given is None:
        given = {}
    if not isinstance(given, dict):
        problems.append(f"{section}: expected a mapping")
        return base
    for a, b in exclusive:
        if a in given and b in given:
            problems.append(f"{section}.{a} and {section}.{b} are mutually exclusive")
        elif b in given:
            base.pop(a, None)
    for key, value in given.items():
        if key not in defaults[section] and key not in {b for _, b in exclusive}:
            problems.append(f"{section}.{key}: unknown key")
        else:
            base[key] = value
    return base


def scenario_from_config(user: dict) -> Scenario:
    defaults = default_config()
    problems: list[str] = []
    for section in user:
        if section not in defaults:
            problems.append(f"{section}: unknown section")

    system = _merge_section(
        defaults, user, "system", problems,
        exclusive=(("loss_db", "transmissivity"), ("carrier_thz", "wavelength_nm")),
    )
    atmosphere_cfg = _merge_section(defaults, user, "atmosphere", problems)
    noise_cfg = _merge_section(defaults, user, "noise", problems)
    security = _merge_section(defaults, user, "security", problems)
    sweep_cfg = _merge_section(defaults, user, "sweep", problems)

    if problems:
        raise ValidationError(
            "invalid configuration:\n  " + "\n  ".join(problems), keys=problems
        )

    def numeric(section: dict, name: str, where: str) -> float:
        value = section.get(name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            problems.append(f"{where}.{name}: expected a number, got {value!r}")
            return float("nan")
        return float(value)

    if "transmissivity" in system:
        transmissivity = numeric(system, "transmissivity", "system")
    else:
        loss_db = numeric(system, "loss_db", "system")
        transmissivity = loss_db_to_transmissivity(loss_db) if not math.isnan(loss_db) else float("nan")

    if "wavelength_nm" in system:
        wavelength = numeric(system, "wavelength_nm", "system")
        carrier_omega = 2.0 * math.pi * 299792458.0 / (wavelength * 1e-9)
    else:
        carrier_omega = 2.0 * math.pi * numeric(system, "carrier_thz", "system") * 1e12

    protocol_name = str(system.get("protocol", "")).lower()
    try:
        protocol = ProtocolKind(protocol_name)
    except ValueError:
        problems.append(f"system.protocol: must be homodyne or heterodyne, got {system.get('protocol')!r}")
        protocol = ProtocolKind.HETERODYNE

    source = str(noise_cfg.get("source", "")).lower()
    if source not in ("pinned", "computed"):
        problems.append(f"noise.source: must be pinned or computed, got {noise_cfg.get('source')!r}")
    overrides = noise_cfg.get("overrides") or {}
    if not isinstance(overrides, dict):
        problems.append("noise.overrides: expected a mapping")
        overrides = {}
    for key in overrides:
        if key not in _CHANNEL_KEYS + _DETECTOR_KEYS:
            problems.append(f"noise.overrides.{key}: unknown component")

    axis_raw = str(sweep_cfg.get("axis", "")).lower()
    if axis_raw not in _AXIS_ALIASES:
        problems.append(f"sweep.axis: unknown axis {sweep_cfg.get('axis')!r}")
    if sweep_cfg.get("scale") not in ("linear", "log"):
        problems.append(f"sweep.scale: must be linear or log, got {sweep_cfg.get('scale')!r}")

    if problems:
        raise ValidationError(
            "invalid configuration:\n  " + "\n  ".join(problems), keys=problems
        )

    try:
        link = LinkParams(
            v_mod=numeric(system, "v_mod", "system"),
            transmissivity=transmissivity,
            det_efficiency=numeric(system, "det_efficiency", "system"),
            rec_efficiency=numeric(system, "rec_efficiency", "system"),
            protocol=protocol,
        )
        pulse = OpticalPulse(
            carrier_omega=carrier_omega,
            width_s=numeric(system, "tau0_ps", "system") * 1e-12,
            waist_m=numeric(system, "beam_waist_m", "system"),
            rep_rate_hz=numeric(system, "rep_rate_mhz", "system") * 1e6,
        )
        path = SlantPath(
            receiver_altitude_m=numeric(system, "ground_altitude_km", "system") * 1e3,
            satellite_altitude_m=numeric(system, "satellite_altitude_km", "system") * 1e3,
            zenith_rad=math.radians(numeric(system, "zenith_deg", "system")),
        )
        atmosphere = AtmosphereModel(
            wind_rms=numeric(atmosphere_cfg, "wind_rms_mps", "atmosphere"),
            ground_cn2=numeric(atmosphere_cfg, "ground_cn2", "atmosphere"),
            inner_outer_ratio=numeric(atmosphere_cfg, "inner_outer_ratio", "atmosphere"),
        )
        lo_rin = LoRinSpec(
            rin_density=numeric(system, "lo_rin_per_hz", "system"),
            bandwidth_hz=numeric(system, "lo_bandwidth_khz", "system") * 1e3,
        )
        block = FiniteBlock(
            total_symbols=numeric(security, "key_symbols", "security")
            + numeric(security, "estimation_symbols", "security"),
            estimation_symbols=numeric(security, "estimation_symbols", "security"),
            discretization=int(security["discretization"]),
        )
    except ValueError as exc:
        raise ValidationError(f"invalid configuration: {exc}") from exc

    if problems:
        raise ValidationError(
            "invalid configuration:\n  " + "\n  ".join(problems), keys=problems
        )

    resolved = {
        "system": system,
        "atmosphere": atmosphere_cfg,
        "noise": {"source": source, "night": bool(noise_cfg["night"]),
                  "overrides": dict(overrides)},
        "security": security,
        "sweep": dict(sweep_cfg),
    }
    return Scenario(
        link=link,
        pulse=pulse,
        path=path,
        atmosphere=atmosphere,
        lo_rin=lo_rin,
        rho_ta=1.0 - float(system["toa_decorrelation"]),
        tx_aperture_m=float(system["tx_aperture_m"]),
        rx_aperture_m=float(system["rx_aperture_m"]),
        noise_source=source,
        night=bool(noise_cfg["night"]),
        noise_overrides={k: float(v) for k, v in overrides.items()},
        eps_collective=float(security["eps_collective"]),
        eps_general_prime=float(security["eps_general_prime"]),
        block=block,
        config=resolved,
    )


@lru_cache(maxsize=256)
def _cached_scintillation(aperture_m: float, path: SlantPath, wavenumber: float,
                          model: AtmosphereModel) -> float:
    return scintillation_index(aperture_m, path, wavenumber, model)[0]


@lru_cache(maxsize=256)
def _cached_broadening(pulse: OpticalPulse, path: SlantPath,
                       model: AtmosphereModel) -> BroadeningResult:
    return pulse_broadening(pulse, path, model)


def resolve_noise(scenario: Scenario) -> tuple[NoiseBudget, dict]:
    """Noise budget for a scenario plus model diagnostics.

    Diagnostics always carry the model-derived quantities (scintillation
    index, broadening, Fresnel parameter) even when the budget itself is
    pinned to the table constants.
    """
    sigma_si2 = _cached_scintillation(
        scenario.rx_aperture_m, scenario.path, scenario.pulse.wavenumber,
        scenario.atmosphere,
    )
    broadening = _cached_broadening(scenario.pulse, scenario.path, scenario.atmosphere)
    diagnostics = {
        "sigma_si2": sigma_si2,
        "tau1_s": broadening.tau1,
        "broadening_ratio": broadening.ratio,
        "nu1_m2": broadening.nu1,
        "fresnel": fresnel_parameter(scenario.pulse, scenario.path.slant_length_m),
        "xi_ta_model": xi_time_of_arrival(
            scenario.link.v_mod, scenario.pulse.carrier_omega, scenario.rho_ta,
            broadening.tau1,
        ),
        "xi_rin_atmos_model": xi_rin_atmos(sigma_si2, scenario.link.v_mod),
        "xi_rin_lo_model": xi_rin_lo(scenario.lo_rin, scenario.link.v_mod),
    }
    if scenario.noise_source == "computed":
        computed = {
            "xi_ta": diagnostics["xi_ta_model"],
            "xi_rin_atmos": diagnostics["xi_rin_atmos_model"],
            "xi_rin_lo": diagnostics["xi_rin_lo_model"],
        }
        computed.update(scenario.noise_overrides)
        budget = daylight_table_budget(night=scenario.night, **computed)
    else:
        budget = daylight_table_budget(night=scenario.night, **scenario.noise_overrides)
    return budget, diagnostics


def _rates(scenario: Scenario, budget: NoiseBudget) -> dict:
    """Asymptotic plus finite-collective and finite-general rates."""
    asym = key_rate_asymptotic(scenario.link, budget)
    out: dict = {"asymptotic": asym, "finite_collective": None, "finite_general": None}
    if scenario.link.protocol is ProtocolKind.HETERODYNE:
        security = split_epsilon(scenario.eps_collective)
        out["finite_collective"] = key_rate_finite(scenario.link, budget, scenario.block, security)
        out["finite_general"] = key_rate_general(
            scenario.link, budget, scenario.block, scenario.eps_general_prime
        )
    return out


def evaluate_scenario(scenario: Scenario) -> dict:
    """Full report: noise budget with shares, chi values, all three key rates."""
    budget, diagnostics = resolve_noise(scenario)
    link = scenario.link
    chi_ch = chi_channel(link.transmissivity, budget.xi_ch)
    chi_d = chi_detector(link.multiplier, link.det_efficiency, budget.xi_d)
    chi = chi_total(chi_ch, chi_d, link.transmissivity)

    components = budget.components()
    # pie-chart convention: component shares of xi_ch + xi_d at T=1, eta_d=1
    reference_total = budget.xi_ch + budget.xi_d
    shares = {name: 100.0 * value / reference_total for name, value in components.items()}

    rates = _rates(scenario, budget)
    report = {
        "scenario": scenario.to_config(),
        "noise": {
            "components_snu": components,
            "xi_ch": budget.xi_ch,
            "xi_d": budget.xi_d,
            "shares_pct": shares,
            "night": scenario.night,
            "source": scenario.noise_source,
        },
        "turbulence": diagnostics,
        "chi": {
            "chi_ch": chi_ch,
            "chi_d": chi_d,
            "chi": chi,
            "xi_total": total_excess_noise(
                budget.xi_ch, budget.xi_d, link.multiplier,
                link.det_efficiency, link.transmissivity,
            ),
        },
        "link": {
            "transmissivity": link.transmissivity,
            "loss_db": transmissivity_to_loss_db(link.transmissivity),
            "protocol": link.protocol.value,
            "block_seconds": scenario.block.total_symbols / scenario.pulse.rep_rate_hz,
        },
        "rates": {
            "asymptotic": _asym_dict(rates["asymptotic"]),
            "finite_collective": _finite_dict(rates["finite_collective"]),
            "finite_general": _finite_dict(rates["finite_general"]),
        },
    }
    return report


def _asym_dict(result: KeyRateResult) -> dict:
    return {
        "mutual_info": result.mutual_info,
        "holevo": result.holevo,
        "key_rate_raw": result.key_rate,
        "key_rate": result.key_rate_clamped,
    }


def _finite_dict(result: FiniteKeyResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "mutual_info": result.mutual_info,
        "holevo_wc": result.holevo_wc,
        "key_rate_raw": result.key_rate,
        "key_rate": result.key_rate_clamped,
        "t_min": result.bounds.t_min,
        "xi_max": result.bounds.xi_max,
        "delta_aep": result.delta_aep,
    }


def _with_config(scenario: Scenario, **section_updates: dict) -> Scenario:
    cfg = scenario.to_config()
    for section, updates in section_updates.items():
        cfg[section].update(updates)
    return scenario_from_config(cfg)


def _scaled_pinned_overrides(base: Scenario, point: Scenario,
                             base_diag: dict, point_diag: dict,
                             axis: str) -> dict:
    """Rescale pinned model-derived components by the model ratio."""
    budget_base, _ = resolve_noise(base)
    comp = budget_base.components()
    out = dict(base.noise_overrides)

    def scale(name: str, ratio: float):
        out[name] = comp[name] * ratio

    if axis == "v_mod":
        ratio = point.link.v_mod / base.link.v_mod
        for name in ("xi_ta", "xi_rin_atmos", "xi_rin_lo"):
            scale(name, ratio)
    elif axis == "rx_aperture_m":
        scale("xi_rin_atmos", point_diag["sigma_si2"] / base_diag["sigma_si2"])
    elif axis == "zenith_deg":
        scale("xi_rin_atmos", point_diag["sigma_si2"] / base_diag["sigma_si2"])
        scale("xi_ta", (point_diag["tau1_s"] / base_diag["tau1_s"]) ** 2)
    elif axis == "tau0_ps":
        scale("xi_ta", (point_diag["tau1_s"] / base_diag["tau1_s"]) ** 2)
    return out


SWEEP_HEADER = (
    "axis_value",
    "loss_db",
    "transmissivity",
    "sigma_si2",
    "tau1_ps",
    "xi_ch_snu",
    "xi_d_snu",
    "k_asym_raw_bits",
    "k_asym_bits",
    "k_coll_raw_bits",
    "k_coll_bits",
    "k_gen_raw_bits",
    "k_gen_bits",
)


def sweep_scenario(scenario: Scenario, axis: str | None = None,
                   lo: float | None = None, hi: float | None = None,
                   points: int | None = None, scale: str | None = None
                   ) -> tuple[tuple[str, ...], list[list[float]]]:
    """Evaluate the scenario along one axis; returns (header, rows).

    Axis names accept both the config spellings and the short forms
    loss_dB / D_R / zenith / tau0 / V_A / n.
    """
    sweep_cfg = scenario.config["sweep"]
    axis_raw = (axis or sweep_cfg["axis"]).lower()
    if axis_raw not in _AXIS_ALIASES:
        raise ValidationError(f"unknown sweep axis {axis or sweep_cfg['axis']!r}")
    axis_name = _AXIS_ALIASES[axis_raw]
    lo = sweep_cfg["min"] if lo is None else lo
    hi = sweep_cfg["max"] if hi is None else hi
    points = int(sweep_cfg["points"]) if points is None else int(points)
    scale = (scale or sweep_cfg["scale"]).lower()
    if points < 2:
        raise ValidationError("sweep needs at least 2 points")
    if not lo < hi:
        raise ValidationError(f"sweep bounds must satisfy min < max, got [{lo}, {hi}]")
    if scale == "log":
        if lo <= 0:
            raise ValidationError("log-scale sweep requires min > 0")
        values = [lo * (hi / lo) ** (i / (points - 1)) for i in range(points)]
    elif scale == "linear":
        values = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    else:
        raise ValidationError(f"sweep scale must be linear or log, got {scale!r}")

    _, base_diag = resolve_noise(scenario)
    rows = []
    for value in values:
        point = _apply_axis(scenario, axis_name, value)
        budget, diag = resolve_noise(point)
        if scenario.noise_source == "pinned" and axis_name in (
            "v_mod", "rx_aperture_m", "zenith_deg", "tau0_ps"
        ):
            overrides = _scaled_pinned_overrides(scenario, point, base_diag, diag, axis_name)
            budget = daylight_table_budget(night=point.night, **overrides)
        rates = _rates(point, budget)
        asym = rates["asymptotic"]
        coll = rates["finite_collective"]
        gen = rates["finite_general"]
        rows.append([
            value,
            transmissivity_to_loss_db(point.link.transmissivity),
            point.link.transmissivity,
            diag["sigma_si2"],
            diag["tau1_s"] * 1e12,
            budget.xi_ch,
            budget.xi_d,
            asym.key_rate,
            asym.key_rate_clamped,
            coll.key_rate if coll else float("nan"),
            coll.key_rate_clamped if coll else float("nan"),
            gen.key_rate if gen else float("nan"),
            gen.key_rate_clamped if gen else float("nan"),
        ])
    return SWEEP_HEADER, rows


def _apply_axis(scenario: Scenario, axis_name: str, value: float) -> Scenario:
    if axis_name == "loss_db":
        cfg = scenario.to_config()
        cfg["system"].pop("transmissivity", None)
        cfg["system"]["loss_db"] = value
        return scenario_from_config(cfg)
    if axis_name == "rx_aperture_m":
        return _with_config(scenario, system={"rx_aperture_m": value})
    if axis_name == "zenith_deg":
        return _with_config(scenario, system={"zenith_deg": value})
    if axis_name == "tau0_ps":
        return _with_config(scenario, system={"tau0_ps": value})
    if axis_name == "v_mod":
        return _with_config(scenario, system={"v_mod": value})
    if axis_name == "key_symbols":
        return _with_config(scenario, security={"key_symbols": value,
                                                "estimation_symbols": value})
    raise ValidationError(f"unknown sweep axis {axis_name!r}")


# ---------------------------------------------------------------------------
# table and figure reproduction


def noise_breakdown_table(scenario: Scenario) -> tuple[tuple[str, ...], list[list]]:
    """Component table with percentage shares (pie-chart convention)."""
    budget, _ = resolve_noise(scenario)
    components = budget.components()
    total = budget.xi_ch + budget.xi_d
    header = ("component", "group", "value_snu", "share_pct")
    rows: list[list] = []
    for name in _CHANNEL_KEYS:
        rows.append([name, "channel", components[name], 100.0 * components[name] / total])
    rows.append(["xi_ch", "channel_total", budget.xi_ch, 100.0 * budget.xi_ch / total])
    for name in _DETECTOR_KEYS:
        rows.append([name, "detector", components[name], 100.0 * components[name] / total])
    rows.append(["xi_d", "detector_total", budget.xi_d, 100.0 * budget.xi_d / total])
    return header, rows


_IMPACT_ROWS = (
    # label, value, eta_d, channel xi, detector xi
    ("xi_ch", 0.0186, 1.0, 0.0186, 0.0),
    ("xi_ta", 0.006, 1.0, 0.006, 0.0),
    ("xi_rin_atmos", 0.01, 1.0, 0.01, 0.0),
    ("xi_background", 0.0002, 1.0, 0.0002, 0.0),
    ("eta_d", 0.95, 0.95, 0.0, 0.0),
    ("v_el", 0.013, 1.0, 0.0, 0.013),
)

_IMPACT_LOSSES_DB = (10.0, 20.0, 30.0)


def _lumped_budget(xi_channel: float, xi_detector: float) -> NoiseBudget:
    """Budget whose totals are exactly the given values (single-field lumps)."""
    zeros_ch = {name: 0.0 for name in _CHANNEL_KEYS}
    zeros_det = {name: 0.0 for name in _DETECTOR_KEYS}
    zeros_ch["xi_ta"] = xi_channel
    zeros_det["v_el"] = xi_detector
    return NoiseBudget(
        channel=ChannelNoiseComponents(**zeros_ch),
        detector=DetectorNoiseComponents(**zeros_det),
    )


def impact_table(n: float = 1e12, epsilon: float = 1e-9, v_mod: float = 5.0,
                 beta: float = 0.95) -> tuple[tuple[str, ...], list[list]]:
    """Per-noise-term impact K/K0 at 10/20/30 dB, finite-collective heterodyne.

    Each row enables a single nonideality (everything else ideal: eta_d = 1,
    other xi = 0); K0 is the fully ideal rate. Rates are clamped at zero; a
    ratio is NaN when the ideal rate itself is zero.
    """
    header = ("parameter", "value",
              "k_ratio_10db", "k_ratio_20db", "k_ratio_30db")
    block = FiniteBlock.equal_split(n)
    security = split_epsilon(epsilon)

    def clamped_rate(loss_db: float, eta_d: float, xi_ch: float, xi_d: float) -> float:
        params = LinkParams(
            v_mod=v_mod,
            transmissivity=loss_db_to_transmissivity(loss_db),
            det_efficiency=eta_d,
            rec_efficiency=beta,
            protocol=ProtocolKind.HETERODYNE,
        )
        result = key_rate_finite(params, _lumped_budget(xi_ch, xi_d), block, security)
        return result.key_rate_clamped

    rows = []
    for label, value, eta_d, xi_ch, xi_d in _IMPACT_ROWS:
        row: list = [label, value]
        for loss_db in _IMPACT_LOSSES_DB:
            k0 = clamped_rate(loss_db, 1.0, 0.0, 0.0)
            k = clamped_rate(loss_db, eta_d, xi_ch, xi_d)
            row.append(k / k0 if k0 > 0 else float("nan"))
        rows.append(row)
    return header, rows


def figure_data(scenario: Scenario, which: str) -> tuple[tuple[str, ...], list[list]]:
    """Data behind the published figures, as (header, rows)."""
    if which == "scintillation":
        header = ("rx_aperture_m", "sigma_si2_z0", "sigma_si2_z30", "sigma_si2_z60")
        rows = []
        apertures = [0.2 + 0.2 * i for i in range(25)]  # 0.2 .. 5.0 m
        for aperture in apertures:
            row = [aperture]
            for zenith_deg in (0.0, 30.0, 60.0):
                path = SlantPath(
                    receiver_altitude_m=scenario.path.receiver_altitude_m,
                    satellite_altitude_m=scenario.path.satellite_altitude_m,
                    zenith_rad=math.radians(zenith_deg),
                )
                row.append(_cached_scintillation(
                    aperture, path, scenario.pulse.wavenumber, scenario.atmosphere
                ))
            rows.append(row)
        return header, rows

    if which == "broadening":
        header = ("tau0_ps", "ratio_z0", "ratio_z30", "ratio_z60")
        rows = []
        n_pts = 61
        taus_ps = [1e-2 * (1e5) ** (i / (n_pts - 1)) for i in range(n_pts)]  # 0.01 .. 1000 ps
        for tau_ps in taus_ps:
            pulse = OpticalPulse(
                carrier_omega=scenario.pulse.carrier_omega,
                width_s=tau_ps * 1e-12,
                waist_m=scenario.pulse.waist_m,
                rep_rate_hz=scenario.pulse.rep_rate_hz,
            )
            row = [tau_ps]
            for zenith_deg in (0.0, 30.0, 60.0):
                path = SlantPath(
                    receiver_altitude_m=scenario.path.receiver_altitude_m,
                    satellite_altitude_m=scenario.path.satellite_altitude_m,
                    zenith_rad=math.radians(zenith_deg),
                )
                row.append(_cached_broadening(pulse, path, scenario.atmosphere).ratio)
            rows.append(row)
        return header, rows

    if which == "keyrate-asym":
        header = ("loss_db", "k_hom_xi0", "k_hom_table", "k_het_xi0", "k_het_table")
        table_budget = daylight_table_budget()
        zero_budget = _lumped_budget(0.0, 0.0)
        rows = []
        for i in range(71):
            loss_db = 35.0 * i / 70.0
            row = [loss_db]
            for protocol in (ProtocolKind.HOMODYNE, ProtocolKind.HETERODYNE):
                for budget in (zero_budget, table_budget):
                    params = LinkParams(
                        v_mod=scenario.link.v_mod,
                        transmissivity=loss_db_to_transmissivity(loss_db),
                        det_efficiency=scenario.link.det_efficiency,
                        rec_efficiency=scenario.link.rec_efficiency,
                        protocol=protocol,
                    )
                    row.append(key_rate_asymptotic(params, budget).key_rate_clamped)
            rows.append(row)
        return header, rows

    if which == "keyrate-finite":
        header = ("loss_db", "k_asym",
                  "k_coll_n1e10", "k_gen_n1e10", "k_coll_n1e12", "k_gen_n1e12")
        budget, _ = resolve_noise(scenario)
        rows = []
        for i in range(71):
            loss_db = 35.0 * i / 70.0
            params = LinkParams(
                v_mod=scenario.link.v_mod,
                transmissivity=loss_db_to_transmissivity(loss_db),
                det_efficiency=scenario.link.det_efficiency,
                rec_efficiency=scenario.link.rec_efficiency,
                protocol=ProtocolKind.HETERODYNE,
            )
            row = [loss_db, key_rate_asymptotic(params, budget).key_rate_clamped]
            for n in (1e10, 1e12):
                block = FiniteBlock.equal_split(n)
                coll = key_rate_finite(params, budget, block, split_epsilon(scenario.eps_collective))
                gen = key_rate_general(params, budget, block, scenario.eps_general_prime)
                row.extend([coll.key_rate_clamped, gen.key_rate_clamped])
            rows.append(row)
        return header, rows

    raise ValidationError(
        f"unknown figure {which!r}; expected scintillation, broadening, "
        "keyrate-asym or keyrate-finite"
    )
