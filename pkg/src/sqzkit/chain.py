"""End-to-end model of the squeezing experiment chain.

Covers the pump power budget, the pump-to-squeezing mapping r = mu * sqrt(P),
the lossy quadrature-variance law

    V(theta) = eta * (e^{2r} cos^2(theta) + e^{-2r} sin^2(theta)) + 1 - eta,

and the inverse bookkeeping used to attribute losses: inferring the source
variance from a measured level, and solving the waveguide propagation loss
from the gap between the fitted and the component-budget efficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidParameterError, ModelValidityError
from .gaussian import from_db, to_db


def _require_unit_interval(name: str, value: float) -> None:
    if not math.isfinite(value) or value < 0.0 or value > 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class LossBudget:
    """Named transmissions of the detection chain plus waveguide loss parameters.

    ``alpha_wg_db_per_cm`` defaults to zero so that the total reduces to the
    product of the four component efficiencies; the waveguide factor is
    opt-in.  ``effective_length_fraction`` accounts for squeezing being
    generated distributed along the crystal, so it propagates through only
    part of the waveguide (default: half).
    """

    eta_c: float
    eta_t: float
    eta_d: float
    eta_el: float
    alpha_wg_db_per_cm: float = 0.0
    length_cm: float = 4.0
    effective_length_fraction: float = 0.5

    def __post_init__(self):
        _require_unit_interval("eta_c", self.eta_c)
        _require_unit_interval("eta_t", self.eta_t)
        _require_unit_interval("eta_d", self.eta_d)
        _require_unit_interval("eta_el", self.eta_el)
        if not math.isfinite(self.alpha_wg_db_per_cm) or self.alpha_wg_db_per_cm < 0.0:
            raise InvalidParameterError(
                f"alpha_wg_db_per_cm must be >= 0, got {self.alpha_wg_db_per_cm}")
        if not math.isfinite(self.length_cm) or self.length_cm <= 0.0:
            raise InvalidParameterError(f"length_cm must be > 0, got {self.length_cm}")
        frac = self.effective_length_fraction
        if not math.isfinite(frac) or frac <= 0.0 or frac > 1.0:
            raise InvalidParameterError(
                f"effective_length_fraction must lie in (0, 1], got {frac}")

    @property
    def waveguide_transmission(self) -> float:
        """Linear transmission of the effective propagation length."""
        loss_db = self.alpha_wg_db_per_cm * self.length_cm * self.effective_length_fraction
        return 10.0 ** (-loss_db / 10.0)


@dataclass(frozen=True)
class PumpSqueezeModel:
    """(mu, eta) pair: squeezing rate in mW^-1/2 and overall detection efficiency.

    mu = 0 is allowed as the degenerate no-squeezing model (every power maps
    to shot noise).
    """

    mu: float
    eta: float

    def __post_init__(self):
        if not math.isfinite(self.mu) or self.mu < 0.0:
            raise InvalidParameterError(f"mu must be finite and >= 0, got {self.mu}")
        _require_unit_interval("eta", self.eta)

    def squeeze_parameter(self, power_mw: float) -> float:
        """r = mu * sqrt(P) for a pump power in mW."""
        if not math.isfinite(power_mw) or power_mw < 0.0:
            raise InvalidParameterError(f"pump power must be >= 0 mW, got {power_mw}")
        return self.mu * math.sqrt(power_mw)


@dataclass(frozen=True)
class SourceSpecs:
    """Pump-stage and pair-generation figures of the source."""

    shg_efficiency_per_w: float = 20.0
    pump_coupling: float = 0.43
    spdc_rate_per_mw_ghz_s: float = 1.2e6
    bandwidth_ghz: float = 1.0e4

    def __post_init__(self):
        for name in ("shg_efficiency_per_w", "pump_coupling",
                     "spdc_rate_per_mw_ghz_s", "bandwidth_ghz"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(f"{name} must be > 0, got {value}")
        if self.pump_coupling > 1.0:
            raise InvalidParameterError(
                f"pump_coupling must be <= 1, got {self.pump_coupling}")


def eta_electronic(snr_db: float) -> float:
    """Loss-equivalent transmission of detector electronic noise: (S - 1) / S.

    ``snr_db`` is the shot-noise clearance above the electronic floor; it
    must be positive, otherwise there is no usable clearance.
    """
    if not math.isfinite(snr_db) or snr_db <= 0.0:
        raise InvalidParameterError(f"SNR must be > 0 dB, got {snr_db}")
    snr_linear = 10.0 ** (snr_db / 10.0)
    return (snr_linear - 1.0) / snr_linear


def eta_total(budget: LossBudget) -> float:
    """Overall transmission: waveguide factor times the four chain efficiencies."""
    return (budget.waveguide_transmission * budget.eta_c * budget.eta_t
            * budget.eta_d * budget.eta_el)


def measured_variance(model: PumpSqueezeModel, power_mw: float, theta: float) -> float:
    """Detected quadrature variance at pump power P and quadrature angle theta.

    Angle 0 reads the anti-squeezing, pi/2 the squeezing.  Agrees with the
    explicit state pipeline squeeze -> loss -> rotate -> variance.
    """
    r = model.squeeze_parameter(power_mw)
    cos2 = math.cos(theta) ** 2
    sin2 = math.sin(theta) ** 2
    bare = math.exp(2.0 * r) * cos2 + math.exp(-2.0 * r) * sin2
    return model.eta * bare + 1.0 - model.eta


def infer_source_variance(measured_db: float, eta: float) -> float:
    """Undo a known detection efficiency: variance at the source, in dB.

    Inverts V_m = eta * V + (1 - eta).  Raises if the measured level sits at
    or below the loss floor 1 - eta, where no physical source variance exists.
    """
    if not math.isfinite(eta) or eta <= 0.0 or eta > 1.0:
        raise InvalidParameterError(f"eta must lie in (0, 1], got {eta}")
    v_measured = from_db(measured_db)
    v_source = (v_measured - (1.0 - eta)) / eta
    if v_source <= 0.0:
        raise DomainError(
            f"measured variance {v_measured:.4g} is at or below the loss floor "
            f"{1.0 - eta:.4g}; no source variance can produce it through eta={eta}")
    return to_db(v_source)


def solve_waveguide_loss(eta_fit: float, eta_est: float, length_cm: float,
                         fraction: float = 0.5) -> float:
    """Propagation loss in dB/cm that explains eta_fit given the budget eta_est.

    Attributes the ratio eta_fit / eta_est entirely to propagation over
    ``length_cm * fraction`` centimetres.
    """
    if not math.isfinite(eta_fit) or eta_fit <= 0.0:
        raise InvalidParameterError(f"eta_fit must be > 0, got {eta_fit}")
    if not math.isfinite(eta_est) or eta_est <= 0.0 or eta_est > 1.0:
        raise InvalidParameterError(f"eta_est must lie in (0, 1], got {eta_est}")
    if eta_fit > eta_est:
        raise DomainError(
            f"eta_fit={eta_fit} exceeds the budget eta_est={eta_est}; "
            "the fitted efficiency cannot beat the component product")
    if not math.isfinite(length_cm) or length_cm <= 0.0:
        raise InvalidParameterError(f"length_cm must be > 0, got {length_cm}")
    if not math.isfinite(fraction) or fraction <= 0.0 or fraction > 1.0:
        raise InvalidParameterError(f"fraction must lie in (0, 1], got {fraction}")
    return -10.0 * math.log10(eta_fit / eta_est) / (length_cm * fraction)


def pump_budget(p_fundamental_w: float, specs: SourceSpecs) -> float:
    """Pump power coupled into the down-conversion stage, in mW.

    Quadratic (undepleted) frequency doubling followed by the fibre-to-
    waveguide coupling: P_coupled = coupling * shg_efficiency * P^2.  Raises
    once the result would exceed the fundamental input, where the quadratic
    model is no longer meaningful.
    """
    if not math.isfinite(p_fundamental_w) or p_fundamental_w < 0.0:
        raise InvalidParameterError(
            f"fundamental power must be >= 0 W, got {p_fundamental_w}")
    coupled_w = specs.pump_coupling * specs.shg_efficiency_per_w * p_fundamental_w ** 2
    if coupled_w > p_fundamental_w:
        raise ModelValidityError(
            f"coupled pump {coupled_w:.4g} W exceeds the {p_fundamental_w:.4g} W input; "
            "outside the undepleted doubling regime")
    return coupled_w * 1000.0


def pair_flux(power_mw: float, specs: SourceSpecs) -> float:
    """Mean generated pair rate in pairs/s over the full emission bandwidth."""
    if not math.isfinite(power_mw) or power_mw < 0.0:
        raise InvalidParameterError(f"pump power must be >= 0 mW, got {power_mw}")
    return specs.spdc_rate_per_mw_ghz_s * power_mw * specs.bandwidth_ghz
