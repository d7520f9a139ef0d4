"""Experiment configuration: INI parsing, strict validation, unit conversion.

All dB/dBm quantities are converted to linear/watts here, exactly once;
everything downstream works in SI units. Unknown sections or keys are
errors so that typos fail fast instead of silently running defaults.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import SPEED_OF_LIGHT, ScenarioGeometry, SurfaceSpec
from .optimizer import PgmSettings
from .schemes import SchemeId

SWEEP_VARIABLES = ("ris_size", "wall_distance", "ris_offset")

_KNOWN_KEYS = {
    "scenario": {"name"},
    "geometry": {
        "wall_distance_m",
        "ris_offset_m",
        "tx_height_m",
        "rx_height_m",
        "tx_elements",
        "rx_elements",
        "ris_elements",
        "frequency_hz",
        "tx_gain_dbi",
        "rx_gain_dbi",
    },
    "channel": {"rician_k", "direct_pathloss_exp", "direct_blocked", "master_seed", "trials"},
    "schemes": {"run"},
    "sweep": {"variable", "values"},
    "power": {"transmit_power_dbm", "noise_density_dbm_hz", "bandwidth_hz"},
    "optimizer": {
        "max_initial_step_theta",
        "max_initial_step_q",
        "contraction_theta",
        "contraction_q",
        "ascent_margin_theta",
        "ascent_margin_q",
        "max_iterations",
        "rel_tolerance",
        "max_backtracks",
    },
    "modes": {"count"},
}
_REQUIRED_SECTIONS = ("scenario", "geometry", "channel", "schemes", "power")


class ConfigError(Exception):
    """Raised for malformed or inconsistent experiment configs."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def dbi_to_linear(dbi: float) -> float:
    return 10.0 ** (dbi / 10.0)


def _parse_counts(text: str, where: str) -> tuple[int, int]:
    parts = text.lower().replace(" ", "").split("x")
    if len(parts) != 2:
        raise ConfigError(f"{where}: expected AxB element counts, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"{where}: non-integer element count in {text!r}") from exc
    if a < 1 or b < 1:
        raise ConfigError(f"{where}: element counts must be >= 1, got {text!r}")
    return a, b


def _parse_float(section: dict[str, str], section_name: str, key: str) -> float:
    try:
        return float(section[key])
    except KeyError as exc:
        raise ConfigError(f"[{section_name}] missing required key {key!r}") from exc
    except ValueError as exc:
        raise ConfigError(f"[{section_name}] {key}: not a number: {section[key]!r}") from exc


def _parse_int(section: dict[str, str], section_name: str, key: str, default: int | None = None) -> int:
    if key not in section:
        if default is None:
            raise ConfigError(f"[{section_name}] missing required key {key!r}")
        return default
    try:
        return int(section[key])
    except ValueError as exc:
        raise ConfigError(f"[{section_name}] {key}: not an integer: {section[key]!r}") from exc


def _parse_bool(section: dict[str, str], section_name: str, key: str) -> bool:
    raw = section.get(key)
    if raw is None:
        raise ConfigError(f"[{section_name}] missing required key {key!r}")
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"[{section_name}] {key}: expected a boolean, got {raw!r}")


def _parse_float_list(section: dict[str, str], section_name: str, key: str) -> list[float]:
    raw = section.get(key)
    if raw is None:
        raise ConfigError(f"[{section_name}] missing required key {key!r}")
    try:
        values = [float(tok) for tok in raw.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"[{section_name}] {key}: non-numeric entry in {raw!r}") from exc
    if not values:
        raise ConfigError(f"[{section_name}] {key}: empty list")
    return values


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, unit-converted experiment description."""

    scenario: str
    wall_distance: float
    ris_offset: float | None  # None means "half the wall distance"
    tx_height: float
    rx_height: float
    tx_counts: tuple[int, int]
    rx_counts: tuple[int, int]
    ris_counts: tuple[int, int]
    frequency: float
    tx_gain: float
    rx_gain: float
    k_values: tuple[float, ...]
    direct_pathloss_exp: float
    direct_blocked: bool
    master_seed: int
    trials: int  # 0 selects the per-K default policy
    schemes: tuple[SchemeId, ...]
    sweep_variable: str | None
    sweep_values: tuple[float, ...]
    power_budget: float
    noise_power: float
    optimizer_overrides: dict[str, float | int] = field(default_factory=dict)
    modes_count: int = 6

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def spacing(self) -> float:
        return self.wavelength / 2.0

    def resolved_ris_offset(self, wall_distance: float) -> float:
        return wall_distance / 2.0 if self.ris_offset is None else self.ris_offset

    def geometry_for(self, sweep_value: float | None = None) -> ScenarioGeometry:
        """Scene at one sweep point (or the base scene when no sweep applies)."""
        wall = self.wall_distance
        ris_counts = self.ris_counts
        offset = None
        if self.sweep_variable is not None and sweep_value is not None:
            if self.sweep_variable == "ris_size":
                side = int(round(sweep_value))
                ris_counts = (side, side)
            elif self.sweep_variable == "wall_distance":
                wall = float(sweep_value)
            elif self.sweep_variable == "ris_offset":
                offset = float(sweep_value)
        if offset is None:
            offset = self.resolved_ris_offset(wall)
        d = self.spacing
        return ScenarioGeometry(
            tx=SurfaceSpec(*self.tx_counts, d, self.tx_gain),
            rx=SurfaceSpec(*self.rx_counts, d, self.rx_gain),
            ris=SurfaceSpec(*ris_counts, d),
            wall_distance=wall,
            ris_offset=offset,
            tx_height=self.tx_height,
            rx_height=self.rx_height,
            wavelength=self.wavelength,
        )

    def trials_for(self, rician_k: float) -> int:
        """Configured trial count, or the default policy: 50 below K=1000
        (fading-dominated), 1 above (near-deterministic)."""
        if self.trials > 0:
            return self.trials
        return 50 if rician_k < 1000.0 else 1

    def pgm_settings(self) -> PgmSettings:
        ov = self.optimizer_overrides
        return PgmSettings(
            power_budget=self.power_budget,
            noise_power=self.noise_power,
            max_initial_steps=(
                float(ov.get("max_initial_step_theta", 1e3)),
                float(ov.get("max_initial_step_q", 1e3)),
            ),
            contraction=(
                float(ov.get("contraction_theta", 0.5)),
                float(ov.get("contraction_q", 0.5)),
            ),
            ascent_margins=(
                float(ov.get("ascent_margin_theta", 1e-5)),
                float(ov.get("ascent_margin_q", 1e-5)),
            ),
            max_iterations=int(ov.get("max_iterations", 1000)),
            rel_tolerance=float(ov.get("rel_tolerance", 1e-6)),
            max_backtracks=int(ov.get("max_backtracks", 60)),
        )


def load_config(path: str | Path) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    return parse_config(parser)


def loads_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_string(text)
    return parse_config(parser)


def parse_config(parser: configparser.ConfigParser) -> ExperimentConfig:
    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown key [{section}] {key}")
    for section in _REQUIRED_SECTIONS:
        if section not in parser:
            raise ConfigError(f"missing required section [{section}]")

    scen = dict(parser["scenario"])
    name = scen.get("name", "").strip()
    if not name:
        raise ConfigError("[scenario] missing required key 'name'")

    geo = dict(parser["geometry"])
    wall = _parse_float(geo, "geometry", "wall_distance_m")
    offset_raw = geo.get("ris_offset_m")
    if offset_raw is None:
        raise ConfigError("[geometry] missing required key 'ris_offset_m'")
    offset_token = offset_raw.strip().lower()
    offset: float | None
    if offset_token in ("half", "d/2"):
        offset = None
    else:
        try:
            offset = float(offset_token)
        except ValueError as exc:
            raise ConfigError(
                f"[geometry] ris_offset_m: expected a number or 'half', got {offset_raw!r}"
            ) from exc

    chan = dict(parser["channel"])
    k_values = tuple(_parse_float_list(chan, "channel", "rician_k"))
    if any(k < 0 for k in k_values):
        raise ConfigError("[channel] rician_k: values must be >= 0")

    schemes_sec = dict(parser["schemes"])
    run_raw = schemes_sec.get("run")
    if run_raw is None:
        raise ConfigError("[schemes] missing required key 'run'")
    scheme_ids = []
    for token in run_raw.replace(",", " ").split():
        try:
            scheme_ids.append(SchemeId(token))
        except ValueError as exc:
            valid = ", ".join(s.value for s in SchemeId)
            raise ConfigError(f"[schemes] run: unknown scheme {token!r} (valid: {valid})") from exc
    if not scheme_ids:
        raise ConfigError("[schemes] run: at least one scheme required")

    sweep_variable: str | None = None
    sweep_values: tuple[float, ...] = ()
    if "sweep" in parser:
        sweep = dict(parser["sweep"])
        sweep_variable = sweep.get("variable", "").strip()
        if sweep_variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"[sweep] variable: expected one of {SWEEP_VARIABLES}, got {sweep_variable!r}"
            )
        sweep_values = tuple(_parse_float_list(sweep, "sweep", "values"))

    power = dict(parser["power"])
    p_t = dbm_to_watts(_parse_float(power, "power", "transmit_power_dbm"))
    n0 = dbm_to_watts(_parse_float(power, "power", "noise_density_dbm_hz"))
    bw = _parse_float(power, "power", "bandwidth_hz")
    if bw <= 0:
        raise ConfigError("[power] bandwidth_hz must be positive")

    overrides: dict[str, float | int] = {}
    if "optimizer" in parser:
        for key, raw in parser["optimizer"].items():
            try:
                overrides[key] = int(raw) if key in ("max_iterations", "max_backtracks") else float(raw)
            except ValueError as exc:
                raise ConfigError(f"[optimizer] {key}: not a number: {raw!r}") from exc

    modes_count = 6
    if "modes" in parser:
        modes_count = _parse_int(dict(parser["modes"]), "modes", "count", default=6)
        if modes_count < 1:
            raise ConfigError("[modes] count must be >= 1")

    config = ExperimentConfig(
        scenario=name,
        wall_distance=wall,
        ris_offset=offset,
        tx_height=_parse_float(geo, "geometry", "tx_height_m"),
        rx_height=_parse_float(geo, "geometry", "rx_height_m"),
        tx_counts=_parse_counts(geo.get("tx_elements", ""), "[geometry] tx_elements"),
        rx_counts=_parse_counts(geo.get("rx_elements", ""), "[geometry] rx_elements"),
        ris_counts=_parse_counts(geo.get("ris_elements", ""), "[geometry] ris_elements"),
        frequency=_parse_float(geo, "geometry", "frequency_hz"),
        tx_gain=dbi_to_linear(_parse_float(geo, "geometry", "tx_gain_dbi")),
        rx_gain=dbi_to_linear(_parse_float(geo, "geometry", "rx_gain_dbi")),
        k_values=k_values,
        direct_pathloss_exp=_parse_float(chan, "channel", "direct_pathloss_exp"),
        direct_blocked=_parse_bool(chan, "channel", "direct_blocked"),
        master_seed=_parse_int(chan, "channel", "master_seed"),
        trials=_parse_int(chan, "channel", "trials", default=0),
        schemes=tuple(scheme_ids),
        sweep_variable=sweep_variable,
        sweep_values=sweep_values,
        power_budget=p_t,
        noise_power=n0 * bw,
        optimizer_overrides=overrides,
        modes_count=modes_count,
    )
    _validate_config(config)
    return config


def _validate_config(config: ExperimentConfig) -> None:
    if config.frequency <= 0:
        raise ConfigError("[geometry] frequency_hz must be positive")
    if config.wall_distance <= 0:
        raise ConfigError("[geometry] wall_distance_m must be positive")
    if config.tx_height <= 0 or config.rx_height <= 0:
        raise ConfigError("[geometry] surface heights must be positive")
    if config.direct_pathloss_exp < 2:
        raise ConfigError("[channel] direct_pathloss_exp must be >= 2")
    if config.master_seed < 0:
        raise ConfigError("[channel] master_seed must be >= 0")
    if config.trials < 0:
        raise ConfigError("[channel] trials must be >= 0")
    if config.sweep_variable == "ris_size":
        for v in config.sweep_values:
            if v < 1 or v != int(v):
                raise ConfigError(f"[sweep] values: ris_size entries must be positive integers, got {v}")
    elif config.sweep_variable == "wall_distance":
        for v in config.sweep_values:
            if v <= 0:
                raise ConfigError(f"[sweep] values: wall_distance entries must be positive, got {v}")
            if config.ris_offset is not None and not 0 < config.ris_offset < v:
                raise ConfigError(
                    f"[sweep] values: fixed ris_offset {config.ris_offset} falls outside (0, {v})"
                )
    elif config.sweep_variable == "ris_offset":
        for v in config.sweep_values:
            if not 0 < v < config.wall_distance:
                raise ConfigError(
                    f"[sweep] values: ris_offset {v} outside (0, wall_distance={config.wall_distance})"
                )
    if config.ris_offset is not None and not 0 < config.ris_offset < config.wall_distance:
        raise ConfigError(
            f"[geometry] ris_offset_m {config.ris_offset} outside (0, {config.wall_distance})"
        )
    # geometry invariants (element counts, spacing) are enforced on construction
    config.geometry_for(config.sweep_values[0] if config.sweep_values else None)
