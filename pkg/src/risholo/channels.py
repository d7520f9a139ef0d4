"""Line-of-sight, scattered, and Rician-combined channel matrices.

Every matrix entry couples one element pair through a spherical-wave
free-space response: amplitude from the projected-aperture power law,
phase accumulated over the exact element-to-element distance. The
scattered parts scale i.i.d. complex-normal draws by the line-of-sight
entry magnitudes, so the Rician combination preserves per-entry power.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .geometry import ScenarioGeometry, Surface, element_positions, pairwise_distances

ComplexMatrix = NDArray[np.complex128]

# stream tags for the per-matrix random sources
_STREAM_TAGS = {"h": 0, "g": 1, "h_dir": 2, "theta0": 3}


@dataclass(frozen=True)
class ChannelParams:
    """Fading and blockage parameters for one channel draw."""

    rician_k: float
    direct_pathloss_exp: float = 3.0
    direct_blocked: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rician_k < 0.0:
            raise ValueError(f"rician_k must be >= 0, got {self.rician_k}")
        if self.direct_pathloss_exp < 2.0:
            raise ValueError(f"direct_pathloss_exp must be >= 2, got {self.direct_pathloss_exp}")


def stream_rng(seed: int, trial: int, tag: str) -> np.random.Generator:
    """Independent random stream keyed by (master seed, trial, matrix tag).

    Streams are derived, not sequential, so trials may run in any order or
    concurrently and still reproduce bit-identically.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, trial, _STREAM_TAGS[tag])))


def los_tx_to_ris(geom: ScenarioGeometry) -> ComplexMatrix:
    """Deterministic tx-array to reflecting-surface matrix, shape (N, L).

    Entry (n, l) has squared magnitude G_t * S_c * cos(gamma) / (4 pi d^2)
    with cos(gamma) the tx element height over the exact distance d, and
    phase k0 * d.
    """
    tx = element_positions(geom, Surface.TX)
    ris = element_positions(geom, Surface.RIS)
    dist = pairwise_distances(ris, tx)
    cos_inc = tx[None, :, 2] / dist
    if np.any(cos_inc <= 0.0):
        raise ValueError("tx element at or below the reflecting-surface plane; model invalid")
    amp = np.sqrt(geom.tx.element_gain * geom.ris.element_area / (4.0 * np.pi) * cos_inc / dist**2)
    return amp * np.exp(1j * geom.wavenumber * dist)


def los_ris_to_rx(geom: ScenarioGeometry) -> ComplexMatrix:
    """Deterministic reflecting-surface to rx-array matrix, shape (M, N)."""
    rx = element_positions(geom, Surface.RX)
    ris = element_positions(geom, Surface.RIS)
    dist = pairwise_distances(rx, ris)
    cos_dep = rx[:, None, 2] / dist
    if np.any(cos_dep <= 0.0):
        raise ValueError("rx element at or below the reflecting-surface plane; model invalid")
    amp = np.sqrt(geom.rx.element_gain * geom.rx.element_area / (4.0 * np.pi) * cos_dep / dist**2)
    return amp * np.exp(1j * geom.wavenumber * dist)


def los_direct(geom: ScenarioGeometry, params: ChannelParams) -> ComplexMatrix:
    """Deterministic tx-to-rx matrix, shape (M, L); all-zero when blocked."""
    m, el = geom.num_rx, geom.num_tx
    if params.direct_blocked:
        return np.zeros((m, el), dtype=np.complex128)
    tx = element_positions(geom, Surface.TX)
    rx = element_positions(geom, Surface.RX)
    dist = pairwise_distances(rx, tx)
    gain = geom.tx.element_gain * geom.rx.element_gain
    amp = np.sqrt(gain * geom.wavelength**2 / ((4.0 * np.pi) ** 2 * dist**params.direct_pathloss_exp))
    return amp * np.exp(1j * geom.wavenumber * dist)


def draw_nlos(los: ComplexMatrix, rng: np.random.Generator) -> ComplexMatrix:
    """Scattered component: |los entry| times a unit-variance complex normal.

    The line-of-sight phase is discarded; only the magnitude scales the draw.
    """
    scale = np.abs(los)
    draw = (rng.standard_normal(los.shape) + 1j * rng.standard_normal(los.shape)) / np.sqrt(2.0)
    return scale * draw


def assemble_rician(los: ComplexMatrix, nlos: ComplexMatrix, rician_k: float) -> ComplexMatrix:
    """Power-preserving combination sqrt(K/(K+1)) los + sqrt(1/(K+1)) nlos."""
    if los.shape != nlos.shape:
        raise ValueError(f"shape mismatch: {los.shape} vs {nlos.shape}")
    if rician_k < 0.0:
        raise ValueError(f"rician_k must be >= 0, got {rician_k}")
    return np.sqrt(rician_k / (rician_k + 1.0)) * los + np.sqrt(1.0 / (rician_k + 1.0)) * nlos


@dataclass(frozen=True)
class ChannelSet:
    """The three link matrices of one trial plus their deterministic parts.

    h: (N, L) tx to reflecting surface; g: (M, N) reflecting surface to rx;
    h_dir: (M, L) direct. The ``*_los`` fields hold the deterministic
    components the Rician combination was built from.
    """

    h: ComplexMatrix
    g: ComplexMatrix
    h_dir: ComplexMatrix
    h_los: ComplexMatrix
    g_los: ComplexMatrix
    h_dir_los: ComplexMatrix

    def __post_init__(self) -> None:
        n, el = self.h.shape
        m, n2 = self.g.shape
        m2, el2 = self.h_dir.shape
        if n != n2 or m != m2 or el != el2:
            raise ValueError(
                f"inconsistent shapes: h {self.h.shape}, g {self.g.shape}, h_dir {self.h_dir.shape}"
            )
        for combined, los in ((self.h, self.h_los), (self.g, self.g_los), (self.h_dir, self.h_dir_los)):
            if combined.shape != los.shape:
                raise ValueError("combined and los variants must share shapes")

    def save(self, directory: str | Path) -> None:
        """Dump all six matrices as .cmx files into ``directory``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name in ("h", "g", "h_dir", "h_los", "g_los", "h_dir_los"):
            save_matrix(directory / f"{name}.cmx", getattr(self, name))


def build_channel_set(geom: ScenarioGeometry, params: ChannelParams, trial: int = 0) -> ChannelSet:
    """Draw the full channel set for one trial. Pure in (geom, params, trial)."""
    h_los = los_tx_to_ris(geom)
    g_los = los_ris_to_rx(geom)
    h_dir_los = los_direct(geom, params)
    h = assemble_rician(h_los, draw_nlos(h_los, stream_rng(params.seed, trial, "h")), params.rician_k)
    g = assemble_rician(g_los, draw_nlos(g_los, stream_rng(params.seed, trial, "g")), params.rician_k)
    h_dir = assemble_rician(
        h_dir_los, draw_nlos(h_dir_los, stream_rng(params.seed, trial, "h_dir")), params.rician_k
    )
    return ChannelSet(h=h, g=g, h_dir=h_dir, h_los=h_los, g_los=g_los, h_dir_los=h_dir_los)


# Matrix dump format (little-endian): two uint64 (rows, cols) followed by
# rows*cols*2 float64 in row-major order, real/imaginary interleaved.
_HEADER = struct.Struct("<QQ")


def save_matrix(path: str | Path, matrix: ComplexMatrix) -> None:
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim {m.ndim}")
    interleaved = np.empty((m.shape[0], m.shape[1] * 2), dtype="<f8")
    interleaved[:, 0::2] = m.real
    interleaved[:, 1::2] = m.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(m.shape[0], m.shape[1]))
        fh.write(interleaved.tobytes())


def load_matrix(path: str | Path) -> ComplexMatrix:
    with open(path, "rb") as fh:
        rows, cols = _HEADER.unpack(fh.read(_HEADER.size))
        payload = np.frombuffer(fh.read(), dtype="<f8")
    if payload.size != rows * cols * 2:
        raise ValueError(f"truncated dump: expected {rows * cols * 2} doubles, got {payload.size}")
    payload = payload.reshape(rows, cols * 2)
    return (payload[:, 0::2] + 1j * payload[:, 1::2]).astype(np.complex128)
