"""Transport-agnostic handlers shared by the HTTP endpoints and the CLI.

Each handler maps a request model onto the core package and wraps the result
in the matching response model.  Domain failures surface as ToolkitError
subclasses; the HTTP layer and the CLI translate them independently.
"""

from __future__ import annotations

import math

from .. import chain, entangle, fitting, trace
from ..errors import InvalidParameterError
from ..gaussian import to_db
from . import schemas


def run_model(request: schemas.ModelRequest) -> schemas.ModelResponse:
    model = chain.PumpSqueezeModel(mu=request.mu, eta=request.eta)
    points = []
    for power in request.powers_mw:
        points.append(schemas.ModelPoint(
            power_mw=power,
            squeezing_db=to_db(chain.measured_variance(model, power, math.pi / 2.0)),
            antisqueezing_db=to_db(chain.measured_variance(model, power, 0.0)),
        ))
    return schemas.ModelResponse(points=points)


def run_fit(request: schemas.FitRequest) -> schemas.FitResponse:
    dataset = fitting.DataSet.from_rows(
        [(r.power_mw, r.squeezing_db, r.antisqueezing_db, r.sigma_db) for r in request.rows])
    initial = None
    if request.initial_mu is not None or request.initial_eta is not None:
        if request.initial_mu is None or request.initial_eta is None:
            raise InvalidParameterError("provide both initial_mu and initial_eta or neither")
        initial = (request.initial_mu, request.initial_eta)
    result = fitting.fit_squeezing_curve(
        dataset, initial, bound_eta=request.bound_eta,
        max_iterations=request.max_iterations,
        power_error_frac=request.power_error_frac)
    return schemas.FitResponse(**result.to_json_dict())


def run_trace(request: schemas.TraceRequest) -> schemas.TraceResponse:
    model = chain.PumpSqueezeModel(mu=request.mu, eta=request.eta)
    scan = trace.ScanConfig(
        ramp_period_s=request.ramp_period_s,
        duration_s=request.duration_s,
        rbw_hz=request.rbw_hz,
        vbw_hz=request.vbw_hz,
        analysis_freq_hz=request.analysis_freq_hz,
        sample_rate_hz=request.sample_rate_hz,
        phase_offset_rad=request.phase_offset_rad,
        seed=request.seed,
    )
    record = trace.synthesize_trace(model, request.power_mw, scan,
                                    noise_floor_snr_db=request.noise_floor_snr_db)
    extrema = trace.estimate_extrema(record, window_rad=request.extrema_window_rad)
    return schemas.TraceResponse(
        times_s=[float(t) for t in record.times_s],
        phases_rad=[float(p) for p in record.phases_rad],
        power_db=[float(p) for p in record.power_db],
        shot_ref_db=record.shot_ref_db,
        extrema=schemas.ExtremaModel(
            squeezing_db=extrema.squeezing_db,
            antisqueezing_db=extrema.antisqueezing_db,
            squeezing_se_db=extrema.squeezing_se_db,
            antisqueezing_se_db=extrema.antisqueezing_se_db,
            n_squeezing_samples=extrema.n_squeezing_samples,
            n_antisqueezing_samples=extrema.n_antisqueezing_samples,
        ),
    )


def run_budget(request: schemas.BudgetRequest) -> schemas.BudgetResponse:
    eta_el = chain.eta_electronic(request.snr_db)
    component_budget = chain.LossBudget(
        eta_c=request.eta_c, eta_t=request.eta_t, eta_d=request.eta_d, eta_el=eta_el,
        alpha_wg_db_per_cm=0.0, length_cm=request.length_cm,
        effective_length_fraction=request.effective_length_fraction)
    eta_est = chain.eta_total(component_budget)
    full_budget = chain.LossBudget(
        eta_c=request.eta_c, eta_t=request.eta_t, eta_d=request.eta_d, eta_el=eta_el,
        alpha_wg_db_per_cm=request.alpha_wg_db_per_cm, length_cm=request.length_cm,
        effective_length_fraction=request.effective_length_fraction)
    inferred = chain.infer_source_variance(request.measured_db, eta_est)
    solved = None
    if request.eta_fit is not None:
        solved = chain.solve_waveguide_loss(
            request.eta_fit, eta_est, request.length_cm,
            request.effective_length_fraction)
    return schemas.BudgetResponse(
        eta_el=eta_el,
        eta_est=eta_est,
        waveguide_transmission=full_budget.waveguide_transmission,
        eta_total=chain.eta_total(full_budget),
        measured_db=request.measured_db,
        inferred_source_db=inferred,
        solved_alpha_db_per_cm=solved,
    )


def run_duan(request: schemas.DuanRequest) -> schemas.DuanResponse:
    state = entangle.epr_from_two_squeezers(
        request.squeezing_db, request.bs_loss_db,
        antisqueezing_db=request.antisqueezing_db)
    report = entangle.duan_variance(state)
    return schemas.DuanResponse(**report.to_json_dict())
