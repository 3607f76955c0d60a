"""Command-line front end: a thin client over the service handlers.

Every subcommand builds the same request model the HTTP API accepts, runs it
in-process by default, and renders the response.  Pass ``--server URL`` to
route the identical request to a running service instance instead; outputs
are byte-for-byte the same either way.

Exit codes: 0 success (and "entangled" for duan), 2 configuration/usage/data
errors, 3 I/O errors, 4 fit did not converge, 5 separable state.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import httpx

from .config import RunConfig
from .errors import InvalidParameterError, ToolkitError
from .fitting import DataSet
from .service import handlers, schemas

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NO_CONVERGENCE = 4
EXIT_SEPARABLE = 5


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except httpx.HTTPError as exc:
        print(f"server error: {exc}", file=sys.stderr)
        return EXIT_IO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqzkit",
        description="Model, synthesize, fit and judge squeezed-light measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser(
        "model", help="squeezing / anti-squeezing levels versus pump power (CSV)")
    _add_common(p_model)
    p_model.add_argument(
        "--powers", default=None,
        help="comma list '2,5,9' or range 'start:stop:step' in mW "
             "(default: 2,5,9,13,17,21,25,28)")
    p_model.set_defaults(func=cmd_model)

    p_fit = sub.add_parser("fit", help="fit (mu, eta) to a squeezing dataset CSV")
    _add_common(p_fit)
    p_fit.add_argument("dataset", help="CSV with power_mw,squeezing_db,antisqueezing_db[,sigma_db]")
    p_fit.add_argument("--initial-mu", type=float, default=None)
    p_fit.add_argument("--initial-eta", type=float, default=None)
    p_fit.add_argument("--unbounded-eta", action="store_true",
                       help="fit eta without the [0,1] reparameterization")
    p_fit.add_argument("--max-iterations", type=int, default=200)
    p_fit.add_argument("--power-error-frac", type=float, default=0.0,
                       help="relative pump-power uncertainty folded into the weights")
    p_fit.set_defaults(func=cmd_fit)

    p_trace = sub.add_parser("trace", help="synthesize a phase-scanned noise trace (CSV)")
    _add_common(p_trace)
    p_trace.add_argument("--noise-floor-snr-db", type=float, default=None,
                         help="add an explicit electronic floor this far below shot noise")
    p_trace.set_defaults(func=cmd_trace)

    p_budget = sub.add_parser("budget", help="efficiency budget and loss attribution")
    _add_common(p_budget)
    p_budget.add_argument("--measured-db", type=float, default=-1.83,
                          help="measured squeezing level to correct back to the source")
    p_budget.add_argument("--eta-fit", type=float, default=None,
                          help="fitted overall efficiency; solves the waveguide loss")
    p_budget.set_defaults(func=cmd_budget)

    p_duan = sub.add_parser("duan", help="two-squeezer entanglement check")
    _add_common(p_duan)
    p_duan.add_argument("--squeezing-db", type=float, default=-1.83,
                        help="per-source squeezing level, must be < 0 dB")
    p_duan.add_argument("--antisqueezing-db", type=float, default=None,
                        help="per-source anti-squeezing (default: measured +2.79 dB)")
    p_duan.add_argument("--bs-loss-db", type=float, default=0.05,
                        help="excess loss of the combining splitter")
    p_duan.set_defaults(func=cmd_duan)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="key = value config file")
    parser.add_argument("--out", default=None, help="output file path")
    parser.add_argument("--json", action="store_true", help="print the response as JSON")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; requests go over HTTP")
    group = parser.add_argument_group("config overrides (flag > config file > default)")
    for field in dataclasses.fields(RunConfig):
        flag = "--" + field.name.replace("_", "-")
        kind = int if field.type in (int, "int") else float
        group.add_argument(flag, dest=field.name, type=kind, default=None,
                           help=argparse.SUPPRESS)


def _resolved_config(args) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {}
    for name in RunConfig.field_names():
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return config.with_overrides(overrides)


def _call(args, path: str, request, response_cls):
    """Run a request in-process, or POST it to --server."""
    if args.server:
        url = args.server.rstrip("/") + path
        reply = httpx.post(url, json=request.model_dump(mode="json"), timeout=120.0)
        if reply.status_code == 422:
            try:
                detail = reply.json().get("detail")
            except ValueError:
                detail = reply.text
            raise InvalidParameterError(str(detail))
        reply.raise_for_status()
        return response_cls.model_validate(reply.json())
    local = {
        "/model": handlers.run_model,
        "/fit": handlers.run_fit,
        "/trace": handlers.run_trace,
        "/budget": handlers.run_budget,
        "/duan": handlers.run_duan,
    }[path]
    return local(request)


def _emit(args, body: str | None, summary: str, json_text: str) -> None:
    """Route outputs: CSV body to --out or stdout, summary beside it, or JSON."""
    if args.out is not None and body is not None:
        Path(args.out).write_text(body, encoding="utf-8")
        print(json_text if args.json else summary)
    elif args.json:
        print(json_text)
    elif body is not None:
        sys.stdout.write(body)
        print(summary, file=sys.stderr)
    else:
        print(summary)


def _parse_powers(text: str) -> list[float]:
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError("range needs start:stop:step with step > 0")
            start, stop, step = parts
            values, current = [], start
            while current <= stop + 1e-9 * max(abs(stop), 1.0):
                values.append(current)
                current += step
            return values
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidParameterError(f"bad --powers value {text!r}: {exc}") from exc


def cmd_model(args) -> int:
    config = _resolved_config(args)
    powers = (_parse_powers(args.powers) if args.powers
              else list(schemas.DEFAULT_POWER_GRID_MW))
    request = schemas.ModelRequest(mu=config.mu, eta=config.eta, powers_mw=powers)
    response = _call(args, "/model", request, schemas.ModelResponse)

    lines = ["power_mw,squeezing_db,antisqueezing_db"]
    lines += [f"{p.power_mw!r},{p.squeezing_db!r},{p.antisqueezing_db!r}"
              for p in response.points]
    body = "\n".join(lines) + "\n"
    top = max(response.points, key=lambda p: p.power_mw)
    summary = (f"P = {top.power_mw:g} mW: squeezing {top.squeezing_db:.2f} dB, "
               f"anti-squeezing {top.antisqueezing_db:.2f} dB")
    _emit(args, body, summary, response.model_dump_json(indent=2))
    return EXIT_OK


def cmd_fit(args) -> int:
    _resolved_config(args)  # fit uses only its own flags, but a bad --config still fails
    dataset = DataSet.from_csv(args.dataset)
    rows = [schemas.DataRow(power_mw=float(p), squeezing_db=float(s),
                            antisqueezing_db=float(a), sigma_db=float(g))
            for p, s, a, g in zip(dataset.power_mw, dataset.squeezing_db,
                                  dataset.antisqueezing_db, dataset.sigma_db)]
    request = schemas.FitRequest(
        rows=rows, initial_mu=args.initial_mu, initial_eta=args.initial_eta,
        bound_eta=not args.unbounded_eta, max_iterations=args.max_iterations,
        power_error_frac=args.power_error_frac)
    response = _call(args, "/fit", request, schemas.FitResponse)

    report = _fit_text(response)
    json_text = response.model_dump_json(indent=2)
    if args.out:
        out = Path(args.out)
        json_path = out if out.suffix == ".json" else out.with_suffix(out.suffix + ".json")
        text_path = out.with_suffix(".txt") if out.suffix == ".json" else out
        text_path.write_text(report + "\n", encoding="utf-8")
        json_path.write_text(json_text + "\n", encoding="utf-8")
    print(json_text if args.json else report)
    return EXIT_OK if response.converged else EXIT_NO_CONVERGENCE


def _fit_text(response: schemas.FitResponse) -> str:
    lines = [
        f"mu                 = {response.mu:.6g} mW^-1/2",
        f"eta                = {response.eta:.6g}",
        f"sigma_mu           = {response.sigma_mu:.3g}",
        f"sigma_eta          = {response.sigma_eta:.3g}",
        f"correlation_mu_eta = {response.correlation_mu_eta:.4f}",
        f"chi2               = {response.chi2:.6g}",
        f"n_dof              = {response.n_dof}",
        f"converged          = {response.converged}",
        f"n_iterations       = {response.n_iterations}",
    ]
    return "\n".join(lines)


def cmd_trace(args) -> int:
    config = _resolved_config(args)
    request = schemas.TraceRequest(
        mu=config.mu, eta=config.eta, power_mw=config.power_mw,
        ramp_period_s=config.ramp_period_s, duration_s=config.duration_s,
        rbw_hz=config.rbw_hz, vbw_hz=config.vbw_hz,
        analysis_freq_hz=config.analysis_freq_hz,
        sample_rate_hz=config.sample_rate_hz,
        phase_offset_rad=config.phase_offset_rad, seed=config.seed,
        extrema_window_rad=config.extrema_window_rad,
        noise_floor_snr_db=args.noise_floor_snr_db)
    response = _call(args, "/trace", request, schemas.TraceResponse)

    lines = ["time_s,phase_rad,power_db"]
    lines += [f"{t!r},{phi!r},{p!r}" for t, phi, p in
              zip(response.times_s, response.phases_rad, response.power_db)]
    body = "\n".join(lines) + "\n"
    ext = response.extrema
    summary = (f"extrema: squeezing {ext.squeezing_db:.2f} "
               f"(se {ext.squeezing_se_db:.3f}) dB, "
               f"anti-squeezing {ext.antisqueezing_db:.2f} "
               f"(se {ext.antisqueezing_se_db:.3f}) dB")
    _emit(args, body, summary, response.model_dump_json(indent=2))
    return EXIT_OK


def cmd_budget(args) -> int:
    config = _resolved_config(args)
    request = schemas.BudgetRequest(
        eta_c=config.eta_c, eta_t=config.eta_t, eta_d=config.eta_d,
        snr_db=config.snr_db, alpha_wg_db_per_cm=config.alpha_wg_db_per_cm,
        length_cm=config.length_cm,
        effective_length_fraction=config.effective_length_fraction,
        measured_db=args.measured_db, eta_fit=args.eta_fit)
    response = _call(args, "/budget", request, schemas.BudgetResponse)

    lines = [
        f"eta_el (electronic)        = {response.eta_el:.4f}",
        f"eta_est (component chain)  = {response.eta_est:.4f}",
        f"waveguide transmission     = {response.waveguide_transmission:.4f}",
        f"eta_total (with waveguide) = {response.eta_total:.4f}",
        f"measured level             = {response.measured_db:.2f} dB",
        f"inferred source level      = {response.inferred_source_db:.2f} dB",
    ]
    if response.solved_alpha_db_per_cm is not None:
        lines.append(f"solved waveguide loss      = "
                     f"{response.solved_alpha_db_per_cm:.3f} dB/cm")
    summary = "\n".join(lines)
    json_text = response.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(json_text + "\n", encoding="utf-8")
    print(json_text if args.json else summary)
    return EXIT_OK


def cmd_duan(args) -> int:
    if args.squeezing_db >= 0.0:
        print("usage error: --squeezing-db must be negative "
              "(a squeezed level in dB below shot noise)", file=sys.stderr)
        return EXIT_CONFIG
    request = schemas.DuanRequest(
        squeezing_db=args.squeezing_db,
        antisqueezing_db=args.antisqueezing_db,
        bs_loss_db=args.bs_loss_db)
    response = _call(args, "/duan", request, schemas.DuanResponse)

    verdict = "entangled" if response.entangled else "separable"
    summary = "\n".join([
        f"var((x1-x2)/sqrt2)   = {response.var_x_minus:.6g}",
        f"var((p1+p2)/sqrt2)   = {response.var_p_plus:.6g}",
        f"correlation variance = {response.correlation_variance:.6g}",
        f"classical bound      = 1",
        f"verdict              = {verdict}",
    ])
    json_text = response.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(json_text + "\n", encoding="utf-8")
    print(json_text if args.json else summary)
    return EXIT_OK if response.entangled else EXIT_SEPARABLE


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
