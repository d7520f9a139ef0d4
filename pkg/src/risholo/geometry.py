"""Surface layouts and link distances for a RIS-aided two-surface link.

The scenario places a transmitting and a receiving planar array on two
parallel walls separated by ``wall_distance`` and a reflecting surface on a
perpendicular wall. The reflecting surface spans the x-y plane at z = 0; the
arrays sit on the planes x = -ris_offset and x = wall_distance - ris_offset
at heights ``tx_height`` and ``rx_height``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

SPEED_OF_LIGHT = 299_792_458.0


class Surface(Enum):
    TX = "tx"
    RX = "rx"
    RIS = "ris"


@dataclass(frozen=True)
class SurfaceSpec:
    """Uniform rectangular surface.

    ``count_a`` and ``count_b`` are the element counts along the surface's
    first and second axis. For the transmit/receive arrays the first axis is
    y and the second is z; for the reflecting surface the first axis is x and
    the second is y. ``spacing`` is the center-to-center element pitch in
    meters (half a wavelength in all studied setups), ``element_gain`` the
    linear power gain of one element.
    """

    count_a: int
    count_b: int
    spacing: float
    element_gain: float = 1.0

    def __post_init__(self) -> None:
        if self.count_a < 1 or self.count_b < 1:
            raise ValueError(f"element counts must be >= 1, got {self.count_a}x{self.count_b}")
        if self.spacing <= 0.0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.element_gain <= 0.0:
            raise ValueError(f"element_gain must be positive, got {self.element_gain}")

    @property
    def size(self) -> int:
        return self.count_a * self.count_b

    @property
    def element_area(self) -> float:
        return self.spacing**2

    @classmethod
    def square(cls, side: int, spacing: float, element_gain: float = 1.0) -> "SurfaceSpec":
        return cls(side, side, spacing, element_gain)


@dataclass(frozen=True)
class ScenarioGeometry:
    """Full scene layout: three surfaces plus the wall/offset/height scalars."""

    tx: SurfaceSpec
    rx: SurfaceSpec
    ris: SurfaceSpec
    wall_distance: float
    ris_offset: float
    tx_height: float
    rx_height: float
    wavelength: float

    def __post_init__(self) -> None:
        if not 0.0 < self.ris_offset < self.wall_distance:
            raise ValueError(
                f"ris_offset must lie strictly inside (0, wall_distance); "
                f"got {self.ris_offset} with wall_distance {self.wall_distance}"
            )
        if self.tx_height <= 0.0 or self.rx_height <= 0.0:
            raise ValueError("surface heights must be positive")
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be positive")

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    @property
    def num_tx(self) -> int:
        return self.tx.size

    @property
    def num_rx(self) -> int:
        return self.rx.size

    @property
    def num_ris(self) -> int:
        return self.ris.size

    @property
    def tx_center(self) -> NDArray[np.float64]:
        return np.array([-self.ris_offset, 0.0, self.tx_height])

    @property
    def rx_center(self) -> NDArray[np.float64]:
        return np.array([self.wall_distance - self.ris_offset, 0.0, self.rx_height])

    @property
    def ris_center(self) -> NDArray[np.float64]:
        return np.zeros(3)


def linear_index(slow: int, fast: int, fast_count: int) -> int:
    """1-based linear index of a (slow, fast) 1-based grid pair."""
    return (slow - 1) * fast_count + fast


def grid_index(linear: int, fast_count: int) -> tuple[int, int]:
    """Inverse of :func:`linear_index`: 1-based linear index -> (slow, fast)."""
    slow, fast = divmod(linear - 1, fast_count)
    return slow + 1, fast + 1


def _centered_offsets(count: int, spacing: float) -> NDArray[np.float64]:
    # spacing*i - spacing*(count+1)/2 for i = 1..count; mean is exactly zero
    idx = np.arange(1, count + 1, dtype=np.float64)
    return spacing * idx - spacing * (count + 1) / 2.0


def element_positions(geom: ScenarioGeometry, surface: Surface) -> NDArray[np.float64]:
    """Coordinates of every element of ``surface``, shape (count, 3).

    Row ordering follows the linearized grid index with the second-listed
    axis varying fastest: the transmit/receive arrays iterate z slow and y
    fast, the reflecting surface iterates x slow and y fast.
    """
    d = None
    if surface is Surface.TX:
        spec, d = geom.tx, geom.tx.spacing
        y = _centered_offsets(spec.count_a, d)
        z = geom.tx_height + _centered_offsets(spec.count_b, d)
        zz, yy = np.meshgrid(z, y, indexing="ij")
        x = np.full(spec.size, -geom.ris_offset)
        return np.column_stack([x, yy.ravel(), zz.ravel()])
    if surface is Surface.RX:
        spec, d = geom.rx, geom.rx.spacing
        y = _centered_offsets(spec.count_a, d)
        z = geom.rx_height + _centered_offsets(spec.count_b, d)
        zz, yy = np.meshgrid(z, y, indexing="ij")
        x = np.full(spec.size, geom.wall_distance - geom.ris_offset)
        return np.column_stack([x, yy.ravel(), zz.ravel()])
    spec, d = geom.ris, geom.ris.spacing
    x = _centered_offsets(spec.count_a, d)
    y = _centered_offsets(spec.count_b, d)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    z = np.zeros(spec.size)
    return np.column_stack([xx.ravel(), yy.ravel(), z])


def exact_distance(p: NDArray[np.float64], q: NDArray[np.float64]) -> float:
    """Euclidean distance between two points."""
    return float(np.linalg.norm(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)))


def pairwise_distances(a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
    """Distance matrix of shape (len(a), len(b)) between two point sets."""
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def direct_path_distance(geom: ScenarioGeometry) -> float:
    """Center-to-center distance between the transmit and receive arrays."""
    return float(np.hypot(geom.wall_distance, geom.tx_height - geom.rx_height))


def _cell_xy(geom: ScenarioGeometry) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    cells = element_positions(geom, Surface.RIS)
    return cells[:, 0], cells[:, 1]


def focus_distances(
    geom: ScenarioGeometry, n: int | None = None
) -> tuple[NDArray[np.float64], NDArray[np.float64]] | tuple[float, float]:
    """Distances from the tx array center to each cell and cell to rx center.

    With ``n`` given (0-based cell index) returns the pair of floats for that
    cell; otherwise returns the two length-N arrays.
    """
    x, y = _cell_xy(geom)
    d1 = np.sqrt((-geom.ris_offset - x) ** 2 + y**2 + geom.tx_height**2)
    d2 = np.sqrt((geom.wall_distance - geom.ris_offset - x) ** 2 + y**2 + geom.rx_height**2)
    if n is None:
        return d1, d2
    if not 0 <= n < geom.num_ris:
        raise IndexError(f"cell index {n} out of range [0, {geom.num_ris})")
    return float(d1[n]), float(d2[n])


def farfield_distances(
    geom: ScenarioGeometry, n: int | None = None
) -> tuple[NDArray[np.float64], NDArray[np.float64]] | tuple[float, float]:
    """First-order far-field expansion of :func:`focus_distances` in the cell
    x-offset around the surface center distances."""
    x, _ = _cell_xy(geom)
    d1c = float(np.hypot(geom.ris_offset, geom.tx_height))
    d2c = float(np.hypot(geom.wall_distance - geom.ris_offset, geom.rx_height))
    d1 = d1c + geom.ris_offset * x / d1c
    d2 = d2c - (geom.wall_distance - geom.ris_offset) * x / d2c
    if n is None:
        return d1, d2
    if not 0 <= n < geom.num_ris:
        raise IndexError(f"cell index {n} out of range [0, {geom.num_ris})")
    return float(d1[n]), float(d2[n])
