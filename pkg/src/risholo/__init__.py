"""Near-field link simulator for RIS-aided holographic MIMO systems."""

from .channels import (
    ChannelParams,
    ChannelSet,
    assemble_rician,
    build_channel_set,
    draw_nlos,
    load_matrix,
    los_direct,
    los_ris_to_rx,
    los_tx_to_ris,
    save_matrix,
    stream_rng,
)
from .config import ConfigError, ExperimentConfig, load_config, loads_config
from .experiments import (
    CSV_HEADER,
    ExperimentRecord,
    run_dof_vs_distance,
    run_dof_vs_ris_position,
    run_modes,
    run_rate_vs_ris_size,
    write_modes_csv,
    write_records_csv,
)
from .geometry import (
    SPEED_OF_LIGHT,
    ScenarioGeometry,
    Surface,
    SurfaceSpec,
    direct_path_distance,
    element_positions,
    exact_distance,
    farfield_distances,
    focus_distances,
    pairwise_distances,
)
from .metrics import ModeField, achievable_rate, effective_rank, mode_fields
from .optimizer import (
    PgmResult,
    PgmSettings,
    PgmTrace,
    RisPhaseProfile,
    TransmitCovariance,
    composite_channel,
    grad_q,
    grad_theta,
    objective,
    pgm_solve,
    project_q,
    project_theta,
    wrap_phase,
)
from .schemes import (
    SchemeId,
    SchemeOutcome,
    end_to_end_channel,
    farfield_phases,
    focusing_phases,
    scheme_far_field,
    scheme_location_focus,
    scheme_los_csi,
    scheme_perfect_csi,
    water_filling,
    waterfill_powers,
)

__version__ = "0.1.0"
