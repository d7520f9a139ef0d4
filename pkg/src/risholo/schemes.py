"""The four reflection-configuration strategies and the water-filling step.

Ordered by decreasing channel knowledge: full-knowledge joint optimization,
optimization on the deterministic channel components only, near-field
focusing from surface positions alone, and its far-field (linear phase
gradient) approximation. The last three share the water-filling covariance
step on the resulting end-to-end channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .channels import ChannelSet, ComplexMatrix
from .geometry import ScenarioGeometry, direct_path_distance, farfield_distances, focus_distances
from .optimizer import (
    PgmSettings,
    RisPhaseProfile,
    TransmitCovariance,
    _raw_objective,
    composite_channel,
    pgm_solve,
    wrap_phase,
)


class SchemeId(Enum):
    PERFECT_CSI = "perfect_csi"
    LOS_CSI = "los_csi"
    LOCATION_FOCUS = "location_focus"
    FAR_FIELD = "far_field"


@dataclass(frozen=True)
class SchemeOutcome:
    """Configured link: phases, covariance, end-to-end channel, and its rate.

    The rate is always evaluated on the trial's combined (true) channels,
    whatever knowledge the scheme used to pick the configuration.
    """

    theta: RisPhaseProfile
    q: TransmitCovariance
    end_to_end: ComplexMatrix
    rate: float
    converged: bool = True


def end_to_end_channel(channels: ChannelSet, theta: RisPhaseProfile) -> ComplexMatrix:
    """Combined direct-plus-reflected channel for the given phase profile."""
    return composite_channel(theta.reflection, channels.h_dir, channels.h, channels.g)


def waterfill_powers(
    singular_values: NDArray[np.float64], power_budget: float, noise_power: float
) -> NDArray[np.float64]:
    """Per-mode powers max(level - noise/sv^2, 0) summing to the budget.

    ``singular_values`` must be sorted descending (as returned by an SVD).
    The water level comes from the exact sorted-mode scan, not a bisection.
    """
    if power_budget <= 0.0 or noise_power <= 0.0:
        raise ValueError("power_budget and noise_power must be positive")
    s = np.asarray(singular_values, dtype=np.float64)
    positive = s > 0.0
    if not np.any(positive):
        raise ValueError("cannot allocate power over an all-zero channel")
    floors = noise_power / s[positive] ** 2  # ascending (s is descending)
    k = np.arange(1, floors.size + 1)
    levels = (power_budget + np.cumsum(floors)) / k
    # last k whose level clears its own floor; levels-vs-next-floor then holds
    valid = np.nonzero(levels > floors)[0]
    powers = np.zeros_like(s)
    if valid.size == 0:
        # level > floor holds for k=1 in reals but absorbs when the floor
        # dwarfs the budget; the strongest mode then takes everything
        powers[0] = power_budget
        return powers
    active = int(valid[-1]) + 1
    level = levels[active - 1]
    powers[:active] = level - floors[:active]
    return powers


def water_filling(
    h_eff: ComplexMatrix, power_budget: float, noise_power: float
) -> TransmitCovariance:
    """Capacity-achieving covariance for a known channel under a power budget.

    Decomposes the channel, pours ``power_budget`` over the eigenmodes, and
    rebuilds the covariance in the right-singular basis.
    """
    _, s, vh = np.linalg.svd(np.asarray(h_eff, dtype=np.complex128), full_matrices=False)
    powers = waterfill_powers(s, power_budget, noise_power)
    v = vh.conj().T
    q = (v * powers) @ v.conj().T
    return TransmitCovariance((q + q.conj().T) / 2.0)


def _rate_on_true(channels: ChannelSet, theta: RisPhaseProfile, q: TransmitCovariance, noise_power: float) -> float:
    return _raw_objective(theta.reflection, q.q, channels.h_dir, channels.h, channels.g, noise_power)


def scheme_perfect_csi(
    channels: ChannelSet,
    settings: PgmSettings,
    init_theta: RisPhaseProfile | None = None,
    init_q: TransmitCovariance | None = None,
    rng: np.random.Generator | None = None,
) -> SchemeOutcome:
    """Benchmark: joint optimization on the true combined channels."""
    res = pgm_solve(channels.h_dir, channels.h, channels.g, settings, init_theta, init_q, rng)
    theta, q = res.theta, res.q
    return SchemeOutcome(
        theta=theta,
        q=q,
        end_to_end=end_to_end_channel(channels, theta),
        rate=_rate_on_true(channels, theta, q, settings.noise_power),
        converged=res.trace.converged,
    )


def scheme_los_csi(
    channels: ChannelSet,
    settings: PgmSettings,
    init_theta: RisPhaseProfile | None = None,
    init_q: TransmitCovariance | None = None,
    rng: np.random.Generator | None = None,
) -> SchemeOutcome:
    """Optimize phases on the deterministic components only, then water-fill.

    The covariance produced by the joint solve is discarded; the one actually
    used comes from water-filling the true end-to-end channel.
    """
    res = pgm_solve(
        channels.h_dir_los, channels.h_los, channels.g_los, settings, init_theta, init_q, rng
    )
    theta = res.theta
    h_eff = end_to_end_channel(channels, theta)
    q = water_filling(h_eff, settings.power_budget, settings.noise_power)
    return SchemeOutcome(
        theta=theta,
        q=q,
        end_to_end=h_eff,
        rate=_rate_on_true(channels, theta, q, settings.noise_power),
        converged=res.trace.converged,
    )


def focusing_phases(geom: ScenarioGeometry) -> RisPhaseProfile:
    """Phases that co-phase every cell's cascade with the center direct path."""
    d1, d2 = focus_distances(geom)
    d_dir = direct_path_distance(geom)
    return RisPhaseProfile(wrap_phase(geom.wavenumber * (d_dir - d1 - d2)))


def farfield_phases(geom: ScenarioGeometry) -> RisPhaseProfile:
    """Far-field approximation of :func:`focusing_phases`: linear in the cell
    x-offset (anomalous reflection)."""
    d1, d2 = farfield_distances(geom)
    d_dir = direct_path_distance(geom)
    return RisPhaseProfile(wrap_phase(geom.wavenumber * (d_dir - d1 - d2)))


def _positional_scheme(
    theta: RisPhaseProfile, channels: ChannelSet, settings: PgmSettings
) -> SchemeOutcome:
    h_eff = end_to_end_channel(channels, theta)
    q = water_filling(h_eff, settings.power_budget, settings.noise_power)
    return SchemeOutcome(
        theta=theta,
        q=q,
        end_to_end=h_eff,
        rate=_rate_on_true(channels, theta, q, settings.noise_power),
    )


def scheme_location_focus(
    geom: ScenarioGeometry, channels: ChannelSet, settings: PgmSettings
) -> SchemeOutcome:
    """Near-field focusing from surface positions only; no iterative solve.

    The phase step reads nothing but the geometry; the channels enter only
    through the final end-to-end matrix, its water-filled covariance, and the
    reported rate.
    """
    return _positional_scheme(focusing_phases(geom), channels, settings)


def scheme_far_field(
    geom: ScenarioGeometry, channels: ChannelSet, settings: PgmSettings
) -> SchemeOutcome:
    """Anomalous-reflection variant of :func:`scheme_location_focus`."""
    return _positional_scheme(farfield_phases(geom), channels, settings)
