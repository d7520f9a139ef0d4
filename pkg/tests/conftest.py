import numpy as np
import pytest

from risholo import ChannelParams, ScenarioGeometry, SurfaceSpec, build_channel_set

CARRIER_HZ = 3.5e9
WAVELENGTH = 299_792_458.0 / CARRIER_HZ
SPACING = WAVELENGTH / 2.0
GAIN_3DBI = 10.0 ** (3.0 / 10.0)
POWER_BUDGET_W = 1e-4  # -10 dBm
NOISE_POWER_W = 10.0 ** (-170.0 / 10.0) / 1000.0 * 20e6  # N0 * BW


def make_geometry(
    tx_side=8,
    rx_side=8,
    ris_side=8,
    wall_distance=15.0,
    ris_offset=7.5,
    tx_height=2.0,
    rx_height=2.0,
    wavelength=WAVELENGTH,
):
    d = wavelength / 2.0
    return ScenarioGeometry(
        tx=SurfaceSpec(tx_side, tx_side, d, GAIN_3DBI),
        rx=SurfaceSpec(rx_side, rx_side, d, GAIN_3DBI),
        ris=SurfaceSpec(ris_side, ris_side, d),
        wall_distance=wall_distance,
        ris_offset=ris_offset,
        tx_height=tx_height,
        rx_height=rx_height,
        wavelength=wavelength,
    )


@pytest.fixture
def paper_geometry():
    """The rate-figure scene at a small RIS size tests can afford."""
    return make_geometry()


def make_channels(geom, rician_k=100000.0, direct_blocked=True, seed=7, trial=0, alpha=3.0):
    params = ChannelParams(
        rician_k=rician_k,
        direct_pathloss_exp=alpha,
        direct_blocked=direct_blocked,
        seed=seed,
    )
    return build_channel_set(geom, params, trial)


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
