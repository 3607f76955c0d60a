"""Gaussian states of one or two bosonic modes and the maps the experiment
chain needs: squeezing, phase rotation, loss and balanced beam splitting.

Covariance matrices are vacuum normalized (shot noise = 1, i.e. 0 dB) over
the quadrature ordering (x1, p1, x2, p2).  All states are zero mean; means
never enter the noise-power bookkeeping done elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, InvalidStateError

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-12
UNCERTAINTY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for the (x1, p1, x2, p2) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, one value per mode.

    The eigenvalues of Omega @ cov come in +-(i nu) pairs for a symmetric
    positive-definite cov; the moduli give each nu twice.
    """
    n_modes = cov.shape[0] // 2
    eigs = np.linalg.eigvals(symplectic_form(n_modes) @ cov)
    moduli = np.sort(np.abs(eigs))
    return moduli[::2]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean Gaussian state held as a quadrature covariance matrix.

    The constructor validates symmetry, positive definiteness and the
    uncertainty relation (every symplectic eigenvalue >= 1), so any state
    that exists is physical.  Instances are immutable and safe to share.
    """

    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 != 0:
            raise InvalidStateError(f"covariance must be square 2n x 2n, got shape {cov.shape}")
        n_modes = cov.shape[0] // 2
        if n_modes not in (1, 2):
            raise InvalidStateError(f"only 1- and 2-mode states are supported, got {n_modes} modes")
        if not np.all(np.isfinite(cov)):
            raise InvalidStateError("covariance contains non-finite entries")
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
            raise InvalidStateError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if np.min(np.linalg.eigvalsh(cov)) <= 0.0:
            raise InvalidStateError("covariance is not positive definite")
        if np.min(symplectic_eigenvalues(cov)) < 1.0 - UNCERTAINTY_TOL:
            raise InvalidStateError("covariance violates the uncertainty relation")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def mode_block(self, mode: int) -> np.ndarray:
        """2x2 covariance block of one mode."""
        _check_mode(self, mode)
        return self.cov[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2]


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """A symplectic matrix together with a label naming what it implements."""

    matrix: np.ndarray
    label: str

    def __post_init__(self):
        s = np.array(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2 != 0:
            raise InvalidParameterError(f"symplectic matrix must be square 2n x 2n, got {s.shape}")
        omega = symplectic_form(s.shape[0] // 2)
        if np.max(np.abs(s @ omega @ s.T - omega)) > SYMPLECTIC_TOL:
            raise InvalidParameterError(f"matrix labelled {self.label!r} is not symplectic")
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


def vacuum(n_modes: int = 1) -> GaussianState:
    """Vacuum state: identity covariance (shot-noise limited in every quadrature)."""
    if n_modes not in (1, 2):
        raise InvalidParameterError(f"n_modes must be 1 or 2, got {n_modes}")
    return GaussianState(np.eye(2 * n_modes))


def rotation_op(theta: float, n_modes: int = 1, mode: int = 0) -> SymplecticOp:
    """Phase-space rotation by theta on one mode, identity elsewhere."""
    if mode < 0 or mode >= n_modes:
        raise InvalidParameterError(f"mode index {mode} out of range for {n_modes} modes")
    c, s = math.cos(theta), math.sin(theta)
    full = np.eye(2 * n_modes)
    full[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = [[c, s], [-s, c]]
    return SymplecticOp(full, "rotation")


def squeeze_op(r: float) -> SymplecticOp:
    """Single-mode squeezer diag(e^r, e^-r): stretches x, squashes p."""
    if not math.isfinite(r):
        raise InvalidParameterError("squeezing parameter must be finite")
    return SymplecticOp(np.diag([math.exp(r), math.exp(-r)]), "squeeze")


def beamsplitter_op() -> SymplecticOp:
    """Balanced two-mode beam splitter acting identically on x and p."""
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    eye2 = np.eye(2)
    top = np.hstack([eye2, eye2])
    bottom = np.hstack([-eye2, eye2])
    return SymplecticOp(inv_sqrt2 * np.vstack([top, bottom]), "beamsplitter")


def apply_symplectic(state: GaussianState, op: SymplecticOp) -> GaussianState:
    """Conjugate the covariance by a symplectic map: cov -> S cov S^T."""
    if op.n_modes != state.n_modes:
        raise InvalidParameterError(
            f"operation acts on {op.n_modes} modes but state has {state.n_modes}")
    return GaussianState(op.matrix @ state.cov @ op.matrix.T)


def squeezed_vacuum(r: float) -> GaussianState:
    """Single-mode squeezed vacuum with variances (e^{2r}, e^{-2r}).

    x is anti-squeezed and p squeezed, so quadrature angle 0 reads out the
    anti-squeezing and pi/2 the squeezing.
    """
    if not math.isfinite(r) or r < 0.0:
        raise InvalidParameterError(f"squeezing parameter must be finite and >= 0, got {r}")
    return apply_symplectic(vacuum(1), squeeze_op(r))


def apply_loss(state: GaussianState, eta) -> GaussianState:
    """Pure-loss channel: per mode, cov -> eta * cov + (1 - eta) * I.

    ``eta`` is a single transmission applied to every mode, or one
    transmission per mode.  Cross-mode covariance blocks pick up the
    geometric mean sqrt(eta_i * eta_j), as for independent vacuum admixture.
    """
    etas = np.atleast_1d(np.asarray(eta, dtype=float))
    if etas.size == 1 and state.n_modes > 1:
        etas = np.repeat(etas, state.n_modes)
    if etas.shape != (state.n_modes,):
        raise InvalidParameterError(
            f"expected 1 or {state.n_modes} transmissions, got {etas.size}")
    if not np.all(np.isfinite(etas)) or np.any(etas < 0.0) or np.any(etas > 1.0):
        raise InvalidParameterError(f"transmissions must lie in [0, 1], got {etas}")
    scale = np.repeat(np.sqrt(etas), 2)
    admix = np.repeat(1.0 - etas, 2)
    cov = scale[:, None] * state.cov * scale[None, :] + np.diag(admix)
    return GaussianState(cov)


def phase_rotation(state: GaussianState, theta: float, mode: int = 0) -> GaussianState:
    """Rotate one mode's quadratures so that angle 0 afterwards reads angle theta before."""
    _check_mode(state, mode)
    return apply_symplectic(state, rotation_op(theta, state.n_modes, mode))


def beam_splitter_50_50(a: GaussianState, b: GaussianState) -> GaussianState:
    """Mix two single-mode states on a balanced beam splitter into a 2-mode state."""
    if a.n_modes != 1 or b.n_modes != 1:
        raise InvalidParameterError("beam splitter inputs must both be single-mode states")
    joint = np.zeros((4, 4))
    joint[:2, :2] = a.cov
    joint[2:, 2:] = b.cov
    return apply_symplectic(GaussianState(joint), beamsplitter_op())


def quadrature_variance(state: GaussianState, theta: float, mode: int = 0) -> float:
    """Variance of the quadrature x*cos(theta) + p*sin(theta) of one mode."""
    block = state.mode_block(mode)
    u = np.array([math.cos(theta), math.sin(theta)])
    return float(u @ block @ u)


def to_db(v: float) -> float:
    """Linear variance to dB relative to shot noise."""
    if not math.isfinite(v) or v <= 0.0:
        raise InvalidParameterError(f"variance must be finite and > 0, got {v}")
    return 10.0 * math.log10(v)


def from_db(s: float) -> float:
    """dB relative to shot noise back to linear variance."""
    if not math.isfinite(s):
        raise InvalidParameterError(f"dB value must be finite, got {s}")
    return 10.0 ** (s / 10.0)


def _check_mode(state: GaussianState, mode: int) -> None:
    if not isinstance(mode, (int, np.integer)) or mode < 0 or mode >= state.n_modes:
        raise InvalidParameterError(
            f"mode index {mode} out of range for a {state.n_modes}-mode state")
