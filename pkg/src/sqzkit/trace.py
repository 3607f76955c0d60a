"""Synthesis of phase-scanned homodyne noise-power traces.

Models a zero-span spectrum analyzer record: the local-oscillator phase ramps
linearly in time, the mean band power at each instant follows the chain model,
and the displayed sample fluctuates with the statistics of an average over
N = RBW/VBW independent noise periodograms.  Each periodogram of a Gaussian
photocurrent is exponentially distributed, so the averaging factor is
chi^2 with 2N degrees of freedom scaled to unit mean; its relative standard
deviation is sqrt(1/N), i.e. (10/ln10)*sqrt(1/N) dB per displayed sample.

The sweep rate and record length of a real scan are instrument settings with
no single natural value; the defaults here (one 2*pi ramp per 0.5 s, 2.5 s
records at 1 kHz) are arbitrary and exist to be overridden.
"""

from __future__ import annotations

import dataclasses
import io
import math
from dataclasses import dataclass

import numpy as np

from .chain import PumpSqueezeModel, measured_variance
from .errors import InsufficientDataError, InvalidParameterError
from .gaussian import to_db

DB_PER_NEPER = 10.0 / math.log(10.0)


@dataclass(frozen=True)
class ScanConfig:
    """Phase-ramp and analyzer settings for one synthesized scan."""

    ramp_period_s: float = 0.5
    duration_s: float = 2.5
    rbw_hz: float = 300e3
    vbw_hz: float = 30.0
    analysis_freq_hz: float = 2e6
    sample_rate_hz: float = 1000.0
    phase_offset_rad: float = 0.0
    seed: int = 12345

    def __post_init__(self):
        for name in ("ramp_period_s", "duration_s", "rbw_hz", "vbw_hz", "sample_rate_hz"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(f"{name} must be > 0, got {value}")
        if self.vbw_hz > self.rbw_hz:
            raise InvalidParameterError(
                f"vbw_hz={self.vbw_hz} must not exceed rbw_hz={self.rbw_hz}")
        if self.sample_rate_hz < 2.0 * self.vbw_hz:
            raise InvalidParameterError(
                f"sample_rate_hz={self.sample_rate_hz} must be >= 2 * vbw_hz")
        if not math.isfinite(self.phase_offset_rad):
            raise InvalidParameterError("phase_offset_rad must be finite")
        if int(self.seed) < 0:
            raise InvalidParameterError(f"seed must be a non-negative integer, got {self.seed}")

    @property
    def n_averages(self) -> int:
        """Effective number of averaged periodograms per displayed sample."""
        return max(1, int(round(self.rbw_hz / self.vbw_hz)))

    @property
    def n_samples(self) -> int:
        return max(1, int(round(self.duration_s * self.sample_rate_hz)))


@dataclass(frozen=True, eq=False)
class Trace:
    """One synthesized scan: sample times, LO phases and noise power in dB."""

    times_s: np.ndarray
    phases_rad: np.ndarray
    power_db: np.ndarray
    config: ScanConfig
    shot_ref_db: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.times_s, dtype=float)
        phases = np.asarray(self.phases_rad, dtype=float)
        power = np.asarray(self.power_db, dtype=float)
        if not (times.ndim == phases.ndim == power.ndim == 1):
            raise InvalidParameterError("trace columns must be one-dimensional")
        if not (times.size == phases.size == power.size):
            raise InvalidParameterError(
                f"trace columns disagree in length: {times.size}, {phases.size}, {power.size}")
        if times.size == 0:
            raise InvalidParameterError("trace is empty")
        if np.any(np.diff(times) <= 0.0):
            raise InvalidParameterError("sample times must be strictly increasing")
        for arr in (times, phases, power):
            arr.setflags(write=False)
        object.__setattr__(self, "times_s", times)
        object.__setattr__(self, "phases_rad", phases)
        object.__setattr__(self, "power_db", power)

    def __len__(self) -> int:
        return self.times_s.size

    def to_csv(self, destination) -> None:
        """Write ``time_s,phase_rad,power_db`` rows at full double precision.

        ``destination`` is a path or a writable text stream.
        """
        if hasattr(destination, "write"):
            _write_csv(self, destination)
        else:
            with open(destination, "w", encoding="utf-8", newline="") as handle:
                _write_csv(self, handle)

    def csv_text(self) -> str:
        buffer = io.StringIO()
        _write_csv(self, buffer)
        return buffer.getvalue()


def _write_csv(trace: Trace, handle) -> None:
    handle.write("time_s,phase_rad,power_db\n")
    for t, phi, p in zip(trace.times_s, trace.phases_rad, trace.power_db):
        handle.write(f"{float(t)!r},{float(phi)!r},{float(p)!r}\n")


@dataclass(frozen=True)
class ExtremaEstimate:
    """Squeezing / anti-squeezing levels read off a trace, with standard errors."""

    squeezing_db: float
    antisqueezing_db: float
    squeezing_se_db: float
    antisqueezing_se_db: float
    n_squeezing_samples: int
    n_antisqueezing_samples: int


def synthesize_trace(model: PumpSqueezeModel, power_mw: float, config: ScanConfig,
                     noise_floor_snr_db: float | None = None) -> Trace:
    """Generate one phase-scanned noise-power record.

    Each sample's mean linear power is the chain-model variance at the
    instantaneous LO phase; the displayed value multiplies it by a unit-mean
    chi^2(2N)/2N averaging factor with N = RBW/VBW.  Identical inputs and
    seed reproduce the trace bit for bit.

    ``noise_floor_snr_db`` optionally adds a flat electronic floor that many
    analyzers would show at -SNR dB relative to shot noise; by default the
    electronics are assumed already folded into the model's eta.
    """
    if not math.isfinite(power_mw) or power_mw < 0.0:
        raise InvalidParameterError(f"pump power must be >= 0 mW, got {power_mw}")
    n = config.n_samples
    times = np.arange(n) / config.sample_rate_hz
    phases = config.phase_offset_rad + 2.0 * math.pi * times / config.ramp_period_s

    r = model.squeeze_parameter(power_mw)
    means = (model.eta * (math.exp(2.0 * r) * np.cos(phases) ** 2
                          + math.exp(-2.0 * r) * np.sin(phases) ** 2)
             + 1.0 - model.eta)
    if noise_floor_snr_db is not None:
        if not math.isfinite(noise_floor_snr_db) or noise_floor_snr_db <= 0.0:
            raise InvalidParameterError(
                f"noise_floor_snr_db must be > 0, got {noise_floor_snr_db}")
        means = means + 10.0 ** (-noise_floor_snr_db / 10.0)

    n_avg = config.n_averages
    rng = np.random.default_rng(int(config.seed))
    averaging = rng.gamma(shape=float(n_avg), scale=1.0 / n_avg, size=n)
    power_db = 10.0 * np.log10(means * averaging)
    return Trace(times, phases, power_db, config)


def video_filter(trace: Trace, vbw_hz: float) -> Trace:
    """Single-pole low-pass smoothing of the linear power with -3 dB at vbw_hz."""
    fs = trace.config.sample_rate_hz
    if not math.isfinite(vbw_hz) or vbw_hz <= 0.0:
        raise InvalidParameterError(f"vbw_hz must be > 0, got {vbw_hz}")
    if vbw_hz > fs / 2.0:
        raise InvalidParameterError(
            f"vbw_hz={vbw_hz} exceeds the Nyquist rate {fs / 2.0} of the trace")
    pole = math.exp(-2.0 * math.pi * vbw_hz / fs)
    gain = 1.0 - pole
    linear = 10.0 ** (trace.power_db / 10.0)
    filtered = np.empty_like(linear)
    acc = linear[0]
    filtered[0] = acc
    for i in range(1, linear.size):
        acc = gain * linear[i] + pole * acc
        filtered[i] = acc
    new_config = dataclasses.replace(trace.config, vbw_hz=min(vbw_hz, trace.config.vbw_hz))
    return Trace(trace.times_s, trace.phases_rad, 10.0 * np.log10(filtered), new_config,
                 trace.shot_ref_db)


def estimate_extrema(trace: Trace, window_rad: float = 0.05,
                     curvature_correction: bool = True) -> ExtremaEstimate:
    """Read squeezing and anti-squeezing levels off a phase-scanned trace.

    Locates the minimum / maximum phase (mod pi) from the per-period extremes
    of a lightly smoothed linear-power series, then averages the raw linear
    samples whose phase lies within ``window_rad`` of those locations.  The
    window mean of the underlying A + B*cos(2*phi) profile is attenuated by
    sin(2w)/(2w); ``curvature_correction`` undoes that attenuation exactly,
    at the price of mixing a small amount of the opposite window's noise in.
    """
    if not math.isfinite(window_rad) or window_rad <= 0.0 or window_rad > 0.5:
        raise InvalidParameterError(f"window_rad must lie in (0, 0.5], got {window_rad}")
    phases = trace.phases_rad
    span = phases[-1] - phases[0]
    samples_per_period = trace.config.ramp_period_s * trace.config.sample_rate_hz
    dphi = 2.0 * math.pi / samples_per_period
    if span + dphi < 2.0 * math.pi:
        raise InsufficientDataError(
            f"trace spans {span:.3f} rad of LO phase; a full 2*pi period is required")

    linear = 10.0 ** (trace.power_db / 10.0)
    # Smooth only for locating the extremes; levels are estimated from raw samples.
    box = max(1, int(round(samples_per_period / 25.0)))
    if box > 1:
        kernel = np.ones(box) / box
        smoothed = np.convolve(linear, kernel, mode="same")
    else:
        smoothed = linear

    n_periods = int((span + 0.5 * dphi) // (2.0 * math.pi))
    per_period = max(1, int(round(samples_per_period)))
    min_phases, max_phases = [], []
    for k in range(n_periods):
        lo, hi = k * per_period, min((k + 1) * per_period, linear.size)
        if hi - lo < 2:
            continue
        segment = smoothed[lo:hi]
        min_phases.append(phases[lo + int(np.argmin(segment))])
        max_phases.append(phases[lo + int(np.argmax(segment))])

    phi_min = _circular_mean_mod_pi(np.asarray(min_phases))
    phi_max = _circular_mean_mod_pi(np.asarray(max_phases))

    sel_min = _window_mask(phases, phi_min, window_rad)
    sel_max = _window_mask(phases, phi_max, window_rad)
    m_min, se_min, n_min = _window_stats(linear, sel_min, phases, phi_min)
    m_max, se_max, n_max = _window_stats(linear, sel_max, phases, phi_max)

    if curvature_correction:
        attenuation = math.sin(2.0 * window_rad) / (2.0 * window_rad)
        mid = 0.5 * (m_max + m_min)
        half = 0.5 * (m_max - m_min) / attenuation
        corrected_min, corrected_max = mid - half, mid + half
        if corrected_min > 0.0:
            m_min, m_max = corrected_min, corrected_max

    return ExtremaEstimate(
        squeezing_db=to_db(m_min),
        antisqueezing_db=to_db(m_max),
        squeezing_se_db=DB_PER_NEPER * se_min / m_min,
        antisqueezing_se_db=DB_PER_NEPER * se_max / m_max,
        n_squeezing_samples=n_min,
        n_antisqueezing_samples=n_max,
    )


def _circular_mean_mod_pi(angles: np.ndarray) -> float:
    """Mean of angles that are only defined modulo pi."""
    doubled = np.exp(2j * angles)
    return float(np.angle(doubled.mean()) / 2.0)


def _window_mask(phases: np.ndarray, center: float, window: float) -> np.ndarray:
    distance = np.abs((phases - center + math.pi / 2.0) % math.pi - math.pi / 2.0)
    return distance <= window


def _window_stats(linear: np.ndarray, mask: np.ndarray, phases: np.ndarray,
                  center: float):
    if not np.any(mask):
        # Window narrower than the sample spacing: fall back to the nearest sample.
        distance = np.abs((phases - center + math.pi / 2.0) % math.pi - math.pi / 2.0)
        mask = distance <= distance.min()
    values = linear[mask]
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, se, int(values.size)
