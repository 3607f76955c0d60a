"""Request and response models for the service endpoints.

Field defaults equal the reference operating point from :class:`RunConfig`,
so an empty request body reproduces the defaults the CLI uses.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..config import RunConfig

_DEFAULTS = RunConfig()

DEFAULT_POWER_GRID_MW = [2.0, 5.0, 9.0, 13.0, 17.0, 21.0, 25.0, 28.0]


class ModelRequest(BaseModel):
    mu: float = _DEFAULTS.mu
    eta: float = _DEFAULTS.eta
    powers_mw: list[float] = Field(default_factory=lambda: list(DEFAULT_POWER_GRID_MW))


class ModelPoint(BaseModel):
    power_mw: float
    squeezing_db: float
    antisqueezing_db: float


class ModelResponse(BaseModel):
    points: list[ModelPoint]


class DataRow(BaseModel):
    power_mw: float
    squeezing_db: float
    antisqueezing_db: float
    sigma_db: float = 0.05


class FitRequest(BaseModel):
    rows: list[DataRow]
    initial_mu: float | None = None
    initial_eta: float | None = None
    bound_eta: bool = True
    max_iterations: int = Field(default=200, ge=1)
    power_error_frac: float = Field(default=0.0, ge=0.0)


class FitResponse(BaseModel):
    mu: float
    eta: float
    sigma_mu: float
    sigma_eta: float
    correlation_mu_eta: float
    chi2: float
    n_dof: int
    converged: bool
    n_iterations: int


class TraceRequest(BaseModel):
    mu: float = _DEFAULTS.mu
    eta: float = _DEFAULTS.eta
    power_mw: float = Field(default=_DEFAULTS.power_mw, ge=0.0)
    ramp_period_s: float = _DEFAULTS.ramp_period_s
    duration_s: float = _DEFAULTS.duration_s
    rbw_hz: float = _DEFAULTS.rbw_hz
    vbw_hz: float = _DEFAULTS.vbw_hz
    analysis_freq_hz: float = _DEFAULTS.analysis_freq_hz
    sample_rate_hz: float = _DEFAULTS.sample_rate_hz
    phase_offset_rad: float = _DEFAULTS.phase_offset_rad
    seed: int = Field(default=_DEFAULTS.seed, ge=0)
    extrema_window_rad: float = _DEFAULTS.extrema_window_rad
    noise_floor_snr_db: float | None = None


class ExtremaModel(BaseModel):
    squeezing_db: float
    antisqueezing_db: float
    squeezing_se_db: float
    antisqueezing_se_db: float
    n_squeezing_samples: int
    n_antisqueezing_samples: int


class TraceResponse(BaseModel):
    times_s: list[float]
    phases_rad: list[float]
    power_db: list[float]
    shot_ref_db: float
    extrema: ExtremaModel


class BudgetRequest(BaseModel):
    eta_c: float = _DEFAULTS.eta_c
    eta_t: float = _DEFAULTS.eta_t
    eta_d: float = _DEFAULTS.eta_d
    snr_db: float = _DEFAULTS.snr_db
    alpha_wg_db_per_cm: float = _DEFAULTS.alpha_wg_db_per_cm
    length_cm: float = _DEFAULTS.length_cm
    effective_length_fraction: float = _DEFAULTS.effective_length_fraction
    measured_db: float = -1.83
    eta_fit: float | None = None


class BudgetResponse(BaseModel):
    eta_el: float
    eta_est: float
    waveguide_transmission: float
    eta_total: float
    measured_db: float
    inferred_source_db: float
    solved_alpha_db_per_cm: float | None


class DuanRequest(BaseModel):
    squeezing_db: float = Field(default=-1.83, le=0.0)
    antisqueezing_db: float | None = None
    bs_loss_db: float = Field(default=0.05, ge=0.0)


class DuanResponse(BaseModel):
    var_x_minus: float
    var_p_plus: float
    correlation_variance: float
    entangled: bool
    margin: float
