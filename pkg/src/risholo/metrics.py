"""Rate, effective rank, and per-cell communication-mode fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channels import ChannelSet, ComplexMatrix
from .optimizer import RisPhaseProfile, TransmitCovariance, objective
from .schemes import waterfill_powers

# singular values this far below the largest carry no entropy, only noise
_RANK_FLOOR = 1e-12


@dataclass(frozen=True)
class ModeField:
    """One communication mode observed over the reflecting surface."""

    mode_index: int
    values: NDArray[np.complex128]
    power: float


def achievable_rate(
    channels: ChannelSet,
    theta: RisPhaseProfile,
    q: TransmitCovariance,
    noise_power: float,
) -> float:
    """Rate of the configured link on the trial's combined channels."""
    return objective(theta, q, channels.h_dir, channels.h, channels.g, noise_power)


def effective_rank(matrix: ComplexMatrix) -> float:
    """Exponential of the entropy of the normalized singular-value profile.

    Lies in [1, min(rows, cols)]; equals the rank for matrices with equal
    nonzero singular values. Invariant to scaling and to unitary transforms
    on either side.
    """
    s = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        raise ValueError("effective rank of an all-zero matrix is undefined")
    s = s[s > _RANK_FLOOR * s[0]]
    p = s / s.sum()
    return float(np.exp(-np.sum(p * np.log(p))))


def mode_fields(
    h: ComplexMatrix,
    h_eff: ComplexMatrix,
    power_budget: float,
    noise_power: float,
    count: int,
) -> list[ModeField]:
    """Fields w_i = h v_i sqrt(P_i) at the reflecting surface for the ``count``
    strongest end-to-end modes, ordered by descending singular value.

    v_i are the right-singular vectors of ``h_eff`` and P_i the powers the
    water-filling step pours on them; depleted modes come back as zero fields.
    """
    n_modes = min(h_eff.shape)
    if not 1 <= count <= n_modes:
        raise ValueError(f"count must lie in [1, {n_modes}], got {count}")
    _, s, vh = np.linalg.svd(np.asarray(h_eff, dtype=np.complex128), full_matrices=False)
    powers = waterfill_powers(s, power_budget, noise_power)
    v = vh.conj().T
    fields = []
    for i in range(count):
        w = h @ v[:, i] * np.sqrt(float(powers[i]))
        fields.append(ModeField(mode_index=i, values=w, power=float(powers[i])))
    return fields
