"""Linear propagation of probe pulses through a homogeneous dressed slab.

For a slab of cooperativity C = n0 (lambda/2pi)^2 L the envelope spectrum is
multiplied by

    H(Omega) = exp(2 pi i C chi(carrier + Omega))

which solves the one-dimensional slowly-varying propagation equation
exactly; the vacuum transit phase is dropped so delays are relative to
vacuum. Transforms use the e^{+i Omega t} forward kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgument, WindowTooSmallError
from .scheme import SchemeInstance
from .susceptibility import DopplerConfig, chi_at, chi_doppler

EDGE_INPUT = 1e-6
EDGE_OUTPUT = 1e-4


@dataclass(frozen=True)
class MediumConfig:
    """Homogeneous slab. ``susceptibility`` overrides the scheme with any chi(delta_bar)."""

    cooperativity: float
    scheme: Optional[SchemeInstance] = None
    control: object = None
    model: Optional[str] = None
    doppler: Optional[DopplerConfig] = None
    atom_mass: Optional[float] = None
    susceptibility: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.cooperativity) and self.cooperativity >= 0):
            raise InvalidArgument("cooperativity must be finite and >= 0")
        if self.scheme is None and self.susceptibility is None and self.cooperativity > 0:
            raise InvalidArgument("medium needs a scheme or a susceptibility function")

    def chi(self, delta_bar):
        if self.susceptibility is not None:
            return np.broadcast_to(np.asarray(self.susceptibility(delta_bar), dtype=complex),
                                   np.shape(delta_bar))
        if self.scheme is None:
            return np.zeros(np.shape(delta_bar), dtype=complex)
        if self.doppler is not None and self.doppler.enabled:
            return chi_doppler(delta_bar, self.scheme, self.control, self.model, self.doppler)
        return chi_at(delta_bar, self.scheme, self.control, self.model)

    def group_delay(self, carrier_detuning, step=1e-4):
        """2 pi C d(Re chi)/d(delta_bar) at the carrier, by central difference."""
        x = np.array([carrier_detuning - step, carrier_detuning + step])
        re = np.real(self.chi(x))
        return 2 * np.pi * self.cooperativity * (re[1] - re[0]) / (2 * step)


@dataclass(frozen=True)
class PulseProfile:
    t: np.ndarray
    envelope: np.ndarray
    carrier_detuning: float = 0.0

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        env = np.asarray(self.envelope, dtype=complex)
        if t.ndim != 1 or t.shape != env.shape or len(t) < 4:
            raise InvalidArgument("t and envelope must be 1D arrays of equal length >= 4")
        dt = np.diff(t)
        if not (dt[0] > 0 and np.allclose(dt, dt[0], rtol=1e-9, atol=0)):
            raise InvalidArgument("time grid must be uniform and increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "envelope", env)

    @property
    def dt(self):
        return self.t[1] - self.t[0]

    @property
    def energy(self):
        return float(np.sum(np.abs(self.envelope) ** 2) * self.dt)

    def check_edges(self, level=EDGE_INPUT):
        a = np.abs(self.envelope)
        peak = a.max()
        if not peak > 0:
            raise InvalidArgument("pulse has zero energy")
        return max(a[0], a[-1]) <= level * peak


def gaussian_pulse(fwhm, carrier_detuning=0.0, n_samples=2 ** 14, window=None,
                   delay_allowance=0.0, amplitude=1.0):
    """Gaussian envelope whose intensity |e|^2 has full width ``fwhm`` (1/gamma).

    The pulse peaks at t = 0; the window spans 8 fwhm before and
    8 fwhm + ``delay_allowance`` after the peak unless ``window`` = (t0, t1).
    """
    if not fwhm > 0:
        raise InvalidArgument("fwhm must be > 0")
    if window is None:
        window = (-8.0 * fwhm, 8.0 * fwhm + max(0.0, delay_allowance))
    t = np.linspace(window[0], window[1], int(n_samples), endpoint=False)
    env = amplitude * np.exp(-2 * np.log(2) * (t / fwhm) ** 2)
    return PulseProfile(t, env.astype(complex), float(carrier_detuning))


def spectral_grid(n, dt):
    """Angular frequency offsets Omega matching the e^{+i Omega t} transform."""
    return 2 * np.pi * np.fft.fftfreq(n, dt)


def transfer_function(omega_grid, medium: MediumConfig, carrier_detuning):
    """H(Omega) = exp(2 pi i C chi(carrier + Omega))."""
    omega = np.asarray(omega_grid, dtype=float)
    if medium.cooperativity == 0:
        return np.ones(omega.shape, dtype=complex)
    chi = medium.chi(carrier_detuning + omega)
    return np.exp(2j * np.pi * medium.cooperativity * chi)


def to_spectrum(envelope, dt):
    """e(Omega) = int dt e^{i Omega t} e(t) on the grid of :func:`spectral_grid` (origin at t[0])."""
    return len(envelope) * dt * np.fft.ifft(envelope)


def from_spectrum(spectrum, dt):
    return np.fft.fft(spectrum) / (len(spectrum) * dt)


def propagate_pulse(pulse: PulseProfile, medium: MediumConfig, pad_factor=2) -> PulseProfile:
    """Output envelope after the slab, on the input time grid.

    The envelope is zero-padded by ``pad_factor`` before transforming so that
    slowly ringing responses are not folded back into the window. Raises
    :class:`WindowTooSmallError` if the output still has appreciable
    amplitude at the window edges or beyond them.
    """
    if not pulse.check_edges(EDGE_INPUT):
        raise InvalidArgument("input pulse does not decay to 1e-6 of its peak at the window edges")
    n = len(pulse.t)
    m = n * max(1, int(pad_factor))
    padded = np.zeros(m, dtype=complex)
    padded[:n] = pulse.envelope
    H = transfer_function(spectral_grid(m, pulse.dt), medium, pulse.carrier_detuning)
    out = from_spectrum(to_spectrum(padded, pulse.dt) * H, pulse.dt)
    a = np.abs(out)
    peak = a[:n].max()
    if peak == 0:
        return replace(pulse, envelope=out[:n])
    spill = a[n:].max() if m > n else 0.0
    if max(a[0], a[n - 1], spill) > EDGE_OUTPUT * peak:
        raise WindowTooSmallError(
            "output pulse reaches the edge of the time window; increase the window "
            "(delay allowance) or the pulse duration")
    return replace(pulse, envelope=out[:n])


@dataclass(frozen=True)
class PulseMetrics:
    transmission: float
    centroid_delay: float
    fwhm_in: float
    fwhm_out: float
    fractional_delay: float
    proxy_efficiency: float

    def as_dict(self):
        return {k: float(v) for k, v in self.__dict__.items()}


def _centroid(t, p):
    return float(np.sum(t * p) / np.sum(p))


def intensity_fwhm(t, envelope):
    """Full width at half maximum of |e|^2 around its highest sample."""
    p = np.abs(envelope) ** 2
    i = int(np.argmax(p))
    half = 0.5 * p[i]
    lo = i
    while lo > 0 and p[lo - 1] >= half:
        lo -= 1
    hi = i
    while hi < len(p) - 1 and p[hi + 1] >= half:
        hi += 1
    if lo == 0 or hi == len(p) - 1:
        return float("nan")
    left = t[lo - 1] + (t[lo] - t[lo - 1]) * (half - p[lo - 1]) / (p[lo] - p[lo - 1])
    right = t[hi] + (t[hi + 1] - t[hi]) * (p[hi] - half) / (p[hi] - p[hi + 1])
    return float(right - left)


def pulse_metrics(inp: PulseProfile, out: PulseProfile) -> PulseMetrics:
    """Transmission, centroid delay and widths of a propagated pulse.

    proxy_efficiency = T * clip(centroid_delay / fwhm_in, 0, 1): full credit
    once the pulse is delayed by its own width.
    """
    if inp.t.shape != out.t.shape or not np.allclose(inp.t, out.t):
        raise InvalidArgument("input and output pulses must share one time grid")
    pin = np.abs(inp.envelope) ** 2
    pout = np.abs(out.envelope) ** 2
    if not pin.sum() > 0:
        raise InvalidArgument("input pulse has zero energy")
    T = float(pout.sum() / pin.sum())
    if pout.sum() > 0:
        delay = _centroid(out.t, pout) - _centroid(inp.t, pin)
        fwhm_out = intensity_fwhm(out.t, out.envelope)
    else:
        delay, fwhm_out = float("nan"), float("nan")
    fwhm_in = intensity_fwhm(inp.t, inp.envelope)
    frac = delay / fwhm_in
    proxy = T * min(1.0, max(0.0, frac)) if np.isfinite(frac) else 0.0
    return PulseMetrics(T, delay, fwhm_in, fwhm_out, frac, proxy)


@dataclass(frozen=True)
class SweepRow:
    carrier_detuning: float
    fwhm: float
    transmission: float
    centroid_delay: float
    fractional_delay: float
    proxy_efficiency: float
    window: float


def run_pulse(medium: MediumConfig, carrier, fwhm, n_samples=2 ** 14, max_doublings=4):
    """Propagate a Gaussian pulse, widening the window until nothing wraps around.

    Returns ``(input, output, metrics)``.
    """
    allowance = 0.0
    if medium.cooperativity > 0:
        allowance = min(64.0 * fwhm, max(0.0, 2 * medium.group_delay(carrier)))
    window = 16.0 * fwhm + allowance
    samples = int(n_samples)
    for attempt in range(max_doublings + 1):
        pulse = gaussian_pulse(fwhm, carrier, samples, window=(-8.0 * fwhm, window - 8.0 * fwhm))
        try:
            out = propagate_pulse(pulse, medium)
        except WindowTooSmallError:
            if attempt == max_doublings:
                raise
            window *= 2
            samples *= 2
            continue
        return pulse, out, pulse_metrics(pulse, out)


def sweep_operating_points(medium: MediumConfig, carriers, fwhms, n_samples=2 ** 14):
    """Grid search over carrier detuning and pulse duration.

    Rows whose output cannot be contained in the time window are skipped.
    """
    rows = []
    for fwhm in fwhms:
        for carrier in carriers:
            try:
                pulse, _, m = run_pulse(medium, float(carrier), float(fwhm), n_samples)
            except WindowTooSmallError:
                continue
            rows.append(SweepRow(float(carrier), float(fwhm), m.transmission, m.centroid_delay,
                                 m.fractional_delay, m.proxy_efficiency,
                                 float(pulse.t[-1] - pulse.t[0] + pulse.dt)))
    return rows


def best_operating_point(rows, transmission_range=None):
    """Row with the largest proxy efficiency, optionally within a transmission range."""
    pool = rows
    if transmission_range is not None:
        lo, hi = transmission_range
        pool = [r for r in rows if lo <= r.transmission <= hi]
    if not pool:
        return None
    return max(pool, key=lambda r: (r.proxy_efficiency, r.fractional_delay))
