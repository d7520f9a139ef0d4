"""Monte Carlo sweep harness: run schemes over a sweep grid, emit CSV.

Each (sweep point, K, trial) task is pure given its derived random streams,
so tasks may run in any order or in a thread pool; records are sorted
deterministically before writing. Given a fixed config and master seed the
CSV bytes are reproducible, which is why the wall_time_ms column is written
as zero: measured timings go to the run log instead of the data file.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import ChannelParams, build_channel_set, stream_rng
from .config import ConfigError, ExperimentConfig
from .geometry import Surface, element_positions
from .metrics import effective_rank, mode_fields
from .optimizer import RisPhaseProfile
from .schemes import (
    SchemeId,
    SchemeOutcome,
    scheme_far_field,
    scheme_location_focus,
    scheme_los_csi,
    scheme_perfect_csi,
)

log = logging.getLogger(__name__)

CSV_HEADER = "scenario,scheme,sweep_value,K,trial,rate_bpshz,erank_e2e,erank_dir,wall_time_ms"

STATUS_OK = "ok"
STATUS_MAX_ITER = "max_iter"


@dataclass(frozen=True)
class ExperimentRecord:
    """One Monte Carlo outcome."""

    scenario: str
    scheme: SchemeId
    sweep_value: float
    rician_k: float
    trial: int
    rate: float
    erank_e2e: float
    erank_dir: float
    wall_time_ms: float
    status: str = STATUS_OK

    def sort_key(self) -> tuple:
        return (self.scheme.value, self.sweep_value, self.rician_k, self.trial)


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def write_records_csv(records: list[ExperimentRecord], path: str | Path) -> bool:
    """Write sorted records; returns True when every record converged.

    On any non-converged record the schema variant with a trailing status
    column is emitted. Timing is zeroed to keep output a pure function of
    (config, seed).
    """
    ordered = sorted(records, key=ExperimentRecord.sort_key)
    all_ok = all(r.status == STATUS_OK for r in ordered)
    lines = [CSV_HEADER if all_ok else CSV_HEADER + ",status"]
    for r in ordered:
        row = ",".join(
            (
                r.scenario,
                r.scheme.value,
                _fmt(r.sweep_value),
                _fmt(r.rician_k),
                str(r.trial),
                _fmt(r.rate),
                _fmt(r.erank_e2e),
                _fmt(r.erank_dir),
                _fmt(0.0),
            )
        )
        if not all_ok:
            row += f",{r.status}"
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return all_ok


def run_scheme_on_trial(
    config: ExperimentConfig,
    scheme: SchemeId,
    sweep_value: float | None,
    rician_k: float,
    trial: int,
    init_theta: RisPhaseProfile | None = None,
) -> SchemeOutcome:
    """Build the trial's scene and channels, then run one scheme on them."""
    geom = config.geometry_for(sweep_value)
    params = ChannelParams(
        rician_k=rician_k,
        direct_pathloss_exp=config.direct_pathloss_exp,
        direct_blocked=config.direct_blocked,
        seed=config.master_seed,
    )
    channels = build_channel_set(geom, params, trial)
    settings = config.pgm_settings()
    if scheme is SchemeId.PERFECT_CSI:
        return scheme_perfect_csi(channels, settings, init_theta=init_theta)
    if scheme is SchemeId.LOS_CSI:
        return scheme_los_csi(channels, settings, init_theta=init_theta)
    if scheme is SchemeId.LOCATION_FOCUS:
        return scheme_location_focus(geom, channels, settings)
    return scheme_far_field(geom, channels, settings)


def _trial_init_theta(config: ExperimentConfig, trial: int, n_cells: int) -> RisPhaseProfile:
    rng = stream_rng(config.master_seed, trial, "theta0")
    return RisPhaseProfile(rng.uniform(-np.pi, np.pi, n_cells))


def _run_point(
    config: ExperimentConfig, sweep_value: float, rician_k: float, trial: int
) -> list[ExperimentRecord]:
    geom = config.geometry_for(sweep_value)
    params = ChannelParams(
        rician_k=rician_k,
        direct_pathloss_exp=config.direct_pathloss_exp,
        direct_blocked=config.direct_blocked,
        seed=config.master_seed,
    )
    channels = build_channel_set(geom, params, trial)
    settings = config.pgm_settings()
    # the iterative schemes of one trial share the same starting phases
    init_theta = _trial_init_theta(config, trial, geom.num_ris)
    erank_dir = 0.0 if config.direct_blocked else effective_rank(channels.h_dir)
    recorded_value = sweep_value
    if config.sweep_variable == "ris_size":
        recorded_value = float(geom.num_ris)

    records = []
    for scheme in config.schemes:
        start = time.perf_counter()
        if scheme is SchemeId.PERFECT_CSI:
            outcome = scheme_perfect_csi(channels, settings, init_theta=init_theta)
        elif scheme is SchemeId.LOS_CSI:
            outcome = scheme_los_csi(channels, settings, init_theta=init_theta)
        elif scheme is SchemeId.LOCATION_FOCUS:
            outcome = scheme_location_focus(geom, channels, settings)
        else:
            outcome = scheme_far_field(geom, channels, settings)
        elapsed_ms = (time.perf_counter() - start) * 1e3
        log.info(
            "%s scheme=%s sweep=%g K=%g trial=%d rate=%.4f took %.1f ms",
            config.scenario, scheme.value, recorded_value, rician_k, trial,
            outcome.rate, elapsed_ms,
        )
        records.append(
            ExperimentRecord(
                scenario=config.scenario,
                scheme=scheme,
                sweep_value=recorded_value,
                rician_k=rician_k,
                trial=trial,
                rate=outcome.rate,
                erank_e2e=effective_rank(outcome.end_to_end),
                erank_dir=erank_dir,
                wall_time_ms=elapsed_ms,
                status=STATUS_OK if outcome.converged else STATUS_MAX_ITER,
            )
        )
    return records


def _run_sweep(config: ExperimentConfig, expected_variable: str, threads: int = 1) -> list[ExperimentRecord]:
    if config.sweep_variable != expected_variable:
        raise ConfigError(
            f"this experiment requires [sweep] variable = {expected_variable}, "
            f"config has {config.sweep_variable!r}"
        )
    tasks = [
        (value, k, trial)
        for value in config.sweep_values
        for k in config.k_values
        for trial in range(config.trials_for(k))
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda t: _run_point(config, *t), tasks))
    else:
        chunks = [_run_point(config, *t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=ExperimentRecord.sort_key)
    return records


def run_rate_vs_ris_size(config: ExperimentConfig, threads: int = 1) -> list[ExperimentRecord]:
    """Rate against the number of reflecting cells (sweep variable ris_size)."""
    return _run_sweep(config, "ris_size", threads)


def run_dof_vs_distance(config: ExperimentConfig, threads: int = 1) -> list[ExperimentRecord]:
    """Effective rank against the wall separation (sweep variable wall_distance)."""
    return _run_sweep(config, "wall_distance", threads)


def run_dof_vs_ris_position(config: ExperimentConfig, threads: int = 1) -> list[ExperimentRecord]:
    """Effective rank against the surface position (sweep variable ris_offset)."""
    return _run_sweep(config, "ris_offset", threads)


def run_modes(config: ExperimentConfig) -> tuple[list[str], list[list[float]]]:
    """Per-cell magnitude and phase of the strongest end-to-end modes.

    Returns (header columns, rows); one row per reflecting cell carrying its
    (x, y) coordinates then |w_i| and arg(w_i)/pi for each requested mode.
    Runs on a single geometry point: the first scheme, K, and trial 0.
    """
    if config.sweep_variable is not None:
        raise ConfigError("the modes experiment takes no sweep; remove the [sweep] section")
    geom = config.geometry_for(None)
    rician_k = config.k_values[0]
    scheme = config.schemes[0]
    outcome = run_scheme_on_trial(
        config, scheme, None, rician_k, 0,
        init_theta=_trial_init_theta(config, 0, geom.num_ris),
    )
    params = ChannelParams(
        rician_k=rician_k,
        direct_pathloss_exp=config.direct_pathloss_exp,
        direct_blocked=config.direct_blocked,
        seed=config.master_seed,
    )
    channels = build_channel_set(geom, params, 0)
    count = min(config.modes_count, min(outcome.end_to_end.shape))
    fields = mode_fields(
        channels.h, outcome.end_to_end, config.power_budget, config.noise_power, count
    )
    cells = element_positions(geom, Surface.RIS)
    header = ["x", "y"]
    for f in fields:
        header += [f"abs_{f.mode_index + 1}", f"phase_{f.mode_index + 1}"]
    rows = []
    for i in range(geom.num_ris):
        row = [float(cells[i, 0]), float(cells[i, 1])]
        for f in fields:
            w = f.values[i]
            row += [float(np.abs(w)), float(np.angle(w) / np.pi) if w != 0 else 0.0]
        rows.append(row)
    return header, rows


def write_modes_csv(header: list[str], rows: list[list[float]], path: str | Path) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
