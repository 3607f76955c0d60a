"""Weighted nonlinear least-squares recovery of (mu, eta) from squeezing data.

The data are rows of (pump power, squeezing dB, anti-squeezing dB, sigma dB).
Both branches of the chain model are fitted jointly in dB space with a damped
Gauss-Newton loop (Levenberg-Marquardt style multiplicative damping).  The
efficiency is kept inside [0, 1] through a logistic reparameterization so the
optimizer never sees the bound as a cliff; an unbounded mode exists for
comparison.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, InsufficientDataError, InvalidParameterError

DB_PER_NEPER = 10.0 / math.log(10.0)
DEFAULT_SIGMA_DB = 0.05

GRADIENT_TOL = 1e-10
STEP_TOL = 1e-12
DAMPING_START = 1e-3
DAMPING_GROW = 10.0
DAMPING_SHRINK = 10.0
DAMPING_MAX = 1e14

CSV_COLUMNS = ("power_mw", "squeezing_db", "antisqueezing_db", "sigma_db")


@dataclass(frozen=True, eq=False)
class DataSet:
    """(power, squeezing dB, anti-squeezing dB, sigma dB) rows as parallel arrays."""

    power_mw: np.ndarray
    squeezing_db: np.ndarray
    antisqueezing_db: np.ndarray
    sigma_db: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in CSV_COLUMNS:
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if arr.ndim != 1:
                raise InvalidParameterError(f"{name} must be one-dimensional")
            arrays[name] = arr
        n = arrays["power_mw"].size
        if any(arr.size != n for arr in arrays.values()):
            raise InvalidParameterError("dataset columns disagree in length")
        if n == 0:
            raise InvalidParameterError("dataset is empty")
        if not all(np.all(np.isfinite(arr)) for arr in arrays.values()):
            raise InvalidParameterError("dataset contains non-finite values")
        if np.any(arrays["power_mw"] <= 0.0):
            raise InvalidParameterError("pump powers must be > 0 mW")
        if np.any(arrays["sigma_db"] <= 0.0):
            raise InvalidParameterError("per-point sigma must be > 0 dB")
        bad = np.flatnonzero(arrays["antisqueezing_db"] < arrays["squeezing_db"])
        if bad.size:
            raise InvalidParameterError(
                f"row {bad[0]}: anti-squeezing is below squeezing")
        for arr in arrays.values():
            arr.setflags(write=False)
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.power_mw.size

    @classmethod
    def from_rows(cls, rows) -> "DataSet":
        """Build from (power, squeezing, antisqueezing[, sigma]) tuples."""
        rows = list(rows)
        powers, sq, anti, sigma = [], [], [], []
        for row in rows:
            if len(row) == 3:
                p, s, a = row
                g = DEFAULT_SIGMA_DB
            elif len(row) == 4:
                p, s, a, g = row
            else:
                raise InvalidParameterError(f"rows need 3 or 4 fields, got {len(row)}")
            powers.append(p), sq.append(s), anti.append(a), sigma.append(g)
        return cls(np.array(powers), np.array(sq), np.array(anti), np.array(sigma))

    @classmethod
    def from_csv(cls, source) -> "DataSet":
        """Parse ``power_mw,squeezing_db,antisqueezing_db[,sigma_db]`` CSV."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            with open(source, "r", encoding="utf-8") as handle:
                text = handle.read()
        lines = text.splitlines()
        if not lines:
            raise DataFormatError("line 1: empty dataset file")
        header = [h.strip() for h in lines[0].split(",")]
        if header not in (list(CSV_COLUMNS), list(CSV_COLUMNS[:3])):
            raise DataFormatError(
                f"line 1: expected header '{','.join(CSV_COLUMNS)}' "
                f"(sigma_db optional), got '{lines[0]}'")
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            fields = line.split(",")
            if len(fields) != len(header):
                raise DataFormatError(
                    f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
            try:
                rows.append(tuple(float(f) for f in fields))
            except ValueError as exc:
                raise DataFormatError(f"line {lineno}: {exc}") from exc
        if not rows:
            raise DataFormatError("line 2: no data rows")
        return cls.from_rows(rows)

    def to_csv(self, destination) -> None:
        if hasattr(destination, "write"):
            self._write_csv(destination)
        else:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                self._write_csv(handle)

    def _write_csv(self, handle) -> None:
        handle.write(",".join(CSV_COLUMNS) + "\n")
        for p, s, a, g in zip(self.power_mw, self.squeezing_db,
                              self.antisqueezing_db, self.sigma_db):
            handle.write(f"{float(p)!r},{float(s)!r},{float(a)!r},{float(g)!r}\n")

    def csv_text(self) -> str:
        buffer = io.StringIO()
        self._write_csv(buffer)
        return buffer.getvalue()


@dataclass(frozen=True)
class FitResult:
    """Fitted (mu, eta) with 1-sigma uncertainties and goodness-of-fit numbers."""

    mu: float
    eta: float
    sigma_mu: float
    sigma_eta: float
    correlation_mu_eta: float
    chi2: float
    n_dof: int
    converged: bool
    n_iterations: int

    def to_text(self) -> str:
        lines = [
            f"mu                 = {self.mu:.6g} mW^-1/2",
            f"eta                = {self.eta:.6g}",
            f"sigma_mu           = {self.sigma_mu:.3g}",
            f"sigma_eta          = {self.sigma_eta:.3g}",
            f"correlation_mu_eta = {self.correlation_mu_eta:.4f}",
            f"chi2               = {self.chi2:.6g}",
            f"n_dof              = {self.n_dof}",
            f"chi2_per_dof       = {self.chi2 / self.n_dof:.4g}",
            f"converged          = {self.converged}",
            f"n_iterations       = {self.n_iterations}",
        ]
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "eta": self.eta,
            "sigma_mu": self.sigma_mu,
            "sigma_eta": self.sigma_eta,
            "correlation_mu_eta": self.correlation_mu_eta,
            "chi2": self.chi2,
            "n_dof": self.n_dof,
            "converged": self.converged,
            "n_iterations": self.n_iterations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def model_db(mu: float, eta: float, power_mw, squeezed: bool):
    """dB level of one branch of the chain model; vectorized over power."""
    p = np.asarray(power_mw, dtype=float)
    r = mu * np.sqrt(p)
    bare = np.exp(-2.0 * r) if squeezed else np.exp(2.0 * r)
    with np.errstate(invalid="ignore", divide="ignore"):
        return 10.0 * np.log10(eta * bare + 1.0 - eta)


def _model_diff(data: DataSet, mu: float, eta: float) -> np.ndarray:
    """model - data in dB, squeezing rows first; no validation or weighting."""
    return np.concatenate([
        model_db(mu, eta, data.power_mw, squeezed=True) - data.squeezing_db,
        model_db(mu, eta, data.power_mw, squeezed=False) - data.antisqueezing_db,
    ])


def residuals(data: DataSet, mu: float, eta: float) -> np.ndarray:
    """Weighted residuals, squeezing rows first then anti-squeezing rows."""
    _check_params(mu, eta)
    return _model_diff(data, mu, eta) / np.concatenate([data.sigma_db, data.sigma_db])


def _jacobian_blocks(data: DataSet, mu: float, eta: float) -> np.ndarray:
    blocks = []
    for squeezed in (True, False):
        r = mu * np.sqrt(data.power_mw)
        bare = np.exp(-2.0 * r) if squeezed else np.exp(2.0 * r)
        dbare_dr = -2.0 * bare if squeezed else 2.0 * bare
        v = eta * bare + 1.0 - eta
        d_mu = DB_PER_NEPER * eta * dbare_dr * np.sqrt(data.power_mw) / v
        d_eta = DB_PER_NEPER * (bare - 1.0) / v
        blocks.append(np.column_stack([d_mu, d_eta]))
    return np.vstack(blocks)


def model_jacobian(data: DataSet, mu: float, eta: float) -> np.ndarray:
    """Analytic (2n x 2) derivatives of the dB model w.r.t. (mu, eta).

    Row order matches :func:`residuals`; rows are unweighted (no sigma).
    """
    _check_params(mu, eta)
    return _jacobian_blocks(data, mu, eta)


def model_power_derivative(data: DataSet, mu: float, eta: float) -> np.ndarray:
    """d(model dB)/d(power) for both branches, in residual row order."""
    blocks = []
    for squeezed in (True, False):
        sqrt_p = np.sqrt(data.power_mw)
        r = mu * sqrt_p
        bare = np.exp(-2.0 * r) if squeezed else np.exp(2.0 * r)
        dbare_dr = -2.0 * bare if squeezed else 2.0 * bare
        v = eta * bare + 1.0 - eta
        with np.errstate(divide="ignore"):
            dr_dp = np.where(sqrt_p > 0.0, mu / (2.0 * sqrt_p), 0.0)
        blocks.append(DB_PER_NEPER * eta * dbare_dr * dr_dp / v)
    return np.concatenate(blocks)


def generate_synthetic_dataset(mu: float, eta: float, powers, sigma_db: float = DEFAULT_SIGMA_DB,
                               seed: int = 0) -> DataSet:
    """Model evaluation at every power plus independent Gaussian dB noise.

    With ``sigma_db=0`` the rows are exact model values; the stored per-point
    sigma then falls back to the 0.05 dB default so the dataset stays usable
    as fit input (the fit location is invariant under a common sigma scale).
    """
    _check_params(mu, eta)
    p = np.atleast_1d(np.asarray(powers, dtype=float))
    if p.size == 0 or np.any(~np.isfinite(p)) or np.any(p <= 0.0):
        raise InvalidParameterError("powers must be a non-empty list of positive mW values")
    if not math.isfinite(sigma_db) or sigma_db < 0.0:
        raise InvalidParameterError(f"sigma_db must be >= 0, got {sigma_db}")
    sq = model_db(mu, eta, p, squeezed=True)
    anti = model_db(mu, eta, p, squeezed=False)
    if sigma_db > 0.0:
        rng = np.random.default_rng(int(seed))
        sq = sq + rng.normal(0.0, sigma_db, p.size)
        anti = anti + rng.normal(0.0, sigma_db, p.size)
    stored_sigma = sigma_db if sigma_db > 0.0 else DEFAULT_SIGMA_DB
    return DataSet(p, sq, anti, np.full(p.size, stored_sigma))


def fit_squeezing_curve(data: DataSet, initial=None, *, bound_eta: bool = True,
                        max_iterations: int = 200,
                        power_error_frac: float = 0.0) -> FitResult:
    """Jointly fit both branches of the chain model to a dataset.

    ``initial`` is an optional (mu0, eta0) pair; by default eta0 = 0.5 and
    mu0 comes from inverting the squeezing of the highest-power row.
    ``power_error_frac`` > 0 switches on effective-variance weighting that
    adds (d model/dP * frac * P)^2 to each point's variance, for data whose
    pump powers carry a relative uncertainty.  Non-convergence inside
    ``max_iterations`` is reported through the ``converged`` flag.
    """
    if len(data) < 3:
        raise InsufficientDataError(
            f"need at least 3 rows to fit 2 parameters, got {len(data)}")
    if max_iterations < 1:
        raise InvalidParameterError("max_iterations must be >= 1")
    if not math.isfinite(power_error_frac) or power_error_frac < 0.0:
        raise InvalidParameterError("power_error_frac must be >= 0")

    mu0, eta0 = _initial_guess(data) if initial is None else initial
    _check_params(mu0, eta0)
    if bound_eta:
        eta0 = min(max(eta0, 1e-6), 1.0 - 1e-6)
    z = np.array([mu0, _logit(eta0) if bound_eta else eta0])

    def unpack(zvec):
        mu = float(zvec[0])
        eta = float(_sigmoid(zvec[1])) if bound_eta else float(zvec[1])
        return mu, eta

    def weighted_sigma(mu, eta):
        if power_error_frac == 0.0:
            return np.concatenate([data.sigma_db, data.sigma_db])
        slope = model_power_derivative(data, mu, eta)
        extra = (slope * power_error_frac * np.concatenate([data.power_mw, data.power_mw])) ** 2
        return np.sqrt(np.concatenate([data.sigma_db, data.sigma_db]) ** 2 + extra)

    def weighted_residuals(zvec):
        mu, eta = unpack(zvec)
        return _model_diff(data, mu, eta) / weighted_sigma(mu, eta)

    def weighted_jacobian(zvec):
        mu, eta = unpack(zvec)
        jac = _jacobian_blocks(data, mu, eta) / weighted_sigma(mu, eta)[:, None]
        if bound_eta:
            jac[:, 1] *= eta * (1.0 - eta)
        return jac

    res = weighted_residuals(z)
    cost = 0.5 * float(res @ res)
    damping = DAMPING_START
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        jac = weighted_jacobian(z)
        gradient = jac.T @ res
        if np.linalg.norm(gradient) < GRADIENT_TOL:
            converged = True
            iterations -= 1
            break
        hessian = jac.T @ jac
        diag = np.diag(hessian).copy()
        diag = np.maximum(diag, 1e-12 * max(diag.max(), 1.0))

        stop = False
        while True:
            try:
                step = np.linalg.solve(hessian + damping * np.diag(diag), -gradient)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.linalg.norm(step) < STEP_TOL:
                converged = True
                stop = True
                break
            if step is not None:
                z_new = z + step
                res_new = weighted_residuals(z_new)
                cost_new = 0.5 * float(res_new @ res_new)
                if math.isfinite(cost_new) and cost_new < cost:
                    z, res, cost = z_new, res_new, cost_new
                    damping = max(damping / DAMPING_SHRINK, 1e-15)
                    break
            damping *= DAMPING_GROW
            if damping > DAMPING_MAX:
                stop = True
                break
        if stop:
            break

    mu_fit, eta_fit = unpack(z)
    chi2 = float(2.0 * cost)
    n_dof = 2 * len(data) - 2

    sigma = weighted_sigma(mu_fit, eta_fit)
    jac_orig = _jacobian_blocks(data, mu_fit, eta_fit) / sigma[:, None]
    normal = jac_orig.T @ jac_orig
    scale = chi2 / n_dof
    try:
        covariance = np.linalg.inv(normal) * scale
    except np.linalg.LinAlgError:
        covariance = np.linalg.pinv(normal) * scale
    var_mu = max(float(covariance[0, 0]), 0.0)
    var_eta = max(float(covariance[1, 1]), 0.0)
    sigma_mu, sigma_eta = math.sqrt(var_mu), math.sqrt(var_eta)
    if sigma_mu > 0.0 and sigma_eta > 0.0:
        correlation = float(covariance[0, 1]) / (sigma_mu * sigma_eta)
        correlation = min(max(correlation, -1.0), 1.0)
    else:
        correlation = 0.0

    return FitResult(mu=mu_fit, eta=eta_fit, sigma_mu=sigma_mu, sigma_eta=sigma_eta,
                     correlation_mu_eta=correlation, chi2=chi2, n_dof=n_dof,
                     converged=converged, n_iterations=iterations)


def _initial_guess(data: DataSet):
    """eta0 = 0.5; mu0 from the highest-power squeezing row inverted at eta0."""
    eta0 = 0.5
    idx = int(np.argmax(data.power_mw))
    v = 10.0 ** (data.squeezing_db[idx] / 10.0)
    x = (v - (1.0 - eta0)) / eta0
    if not 0.0 < x < 1.0:
        x = min(max(x, 0.05), 0.999)
    mu0 = -math.log(x) / (2.0 * math.sqrt(data.power_mw[idx]))
    return max(mu0, 1e-3), eta0


def _check_params(mu: float, eta: float) -> None:
    if not math.isfinite(mu) or mu < 0.0:
        raise InvalidParameterError(f"mu must be finite and >= 0, got {mu}")
    if not math.isfinite(eta) or eta < 0.0 or eta > 1.0:
        raise InvalidParameterError(f"eta must lie in [0, 1], got {eta}")


def _logit(x: float) -> float:
    return math.log(x / (1.0 - x))


def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)
