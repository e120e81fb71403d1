"""Probe susceptibility of the dressed medium.

chi is dimensionless, in units of n0 (lambda/2pi)^3, and is normalized so
that a closed two-level transition of unit strength has a resonant value of
1.5i (the resonant cross section 3 lambda^2 / 2pi):

    chi(dbar) = -K gamma sum_{n1 n2} conj(c_n1) c_n2 G_{n1 n2}(E_n + dbar),   K = 3/4
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.signal
from scipy.optimize import minimize_scalar
from scipy.special import wofz

from .dressed import contract, control_frequency, green_matrix
from .errors import InvalidArgument, NotFoundError
from .scheme import FULL, LAMBDA, SchemeInstance

CHI_SCALE = 0.75
THREADS_ENV = "ATDRESS_THREADS"


@dataclass(frozen=True)
class DopplerConfig:
    """One-dimensional thermal velocity spread; ``thermal_width`` is the rms of k.v in gamma units."""

    enabled: bool = False
    thermal_width: float = 0.0
    quadrature_order: int = 64
    copropagating: bool = True

    def __post_init__(self):
        if not self.thermal_width >= 0:
            raise InvalidArgument("thermal_width must be >= 0")


def _model(scheme, model):
    model = scheme.model if model is None else model
    if model not in (FULL, LAMBDA):
        raise InvalidArgument(f"unknown model {model!r}")
    return model


def _probe(scheme, model):
    return (scheme.c_n, scheme.c_np) if model == FULL else (scheme.c_n, 0j)


def _chi_cold(delta_bar, scheme, control, model, probe_shift=0.0, control_shift=0.0):
    E = scheme.E_n + np.asarray(delta_bar, dtype=float) - probe_shift
    g = green_matrix(E, scheme, control, control_shift, model)
    return -CHI_SCALE * scheme.gamma * contract(g, *_probe(scheme, model))


def chi_at(delta_bar, scheme: SchemeInstance, control=None, model=None):
    """Cold-atom susceptibility at probe detuning(s) ``delta_bar`` from the m -> n line."""
    out = _chi_cold(delta_bar, scheme, control, _model(scheme, model))
    return out[()] if np.ndim(out) == 0 else out


@lru_cache(maxsize=None)
def gauss_hermite(order: int):
    """Nodes and weights for averaging over a unit normal variable; weights sum to 1."""
    if int(order) != order or order < 1:
        raise InvalidArgument(f"quadrature order must be an integer >= 1, got {order!r}")
    x, w = np.polynomial.hermite_e.hermegauss(int(order))
    w = w / w.sum()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _pole_expansion(delta_bar, scheme, control, model, slope):
    """Poles lam_k and residues r_k with chi(x) = sum_k r_k / (lam_k - x).

    x is the probe Doppler shift k.v and ``slope`` the ratio of control to
    probe shift (+1 copropagating, -1 counterpropagating). chi is a proper
    rational function of x, so this expansion is exact up to round-off.
    """
    db = np.atleast_1d(np.asarray(delta_bar, dtype=float))
    V_n, V_np = (scheme.V_n, scheme.V_np) if model == FULL else (scheme.V_n, 0j)
    c = np.array(_probe(scheme, model), dtype=complex)
    v = np.array([V_n, V_np], dtype=complex)
    g = scheme.gamma
    E = scheme.E_n + db
    # M(x) = M0 - x diag(1, 1, 1 - slope) with M0 = E - H_eff at zero velocity
    top = np.zeros(db.shape + (2, 2), dtype=complex)
    top[..., 0, 0] = E - scheme.E_n + 0.5j * g
    top[..., 1, 1] = E - scheme.E_np + 0.5j * g
    two_photon = E - scheme.E_mp - control_frequency(scheme, control)
    d = 1.0 - slope
    if d == 0:
        vv = np.outer(v, np.conj(v))
        if np.all(v == 0):
            A = top
        else:
            safe = np.where(two_photon == 0, 1.0, two_photon)
            A = top - vv / safe[..., None, None]
            dark = two_photon == 0
            A[dark] = top[dark]
        left, right = np.conj(c), c
        lam, R = np.linalg.eig(A)
        Rinv = np.linalg.inv(R)
        res = -CHI_SCALE * g * np.einsum("i,...ik->...k", left, R) * np.einsum("...ki,i->...k", Rinv, right)
        if not np.all(v == 0) and np.any(dark):
            # exact two-photon resonance: only the component orthogonal to v survives
            p = np.array([-np.conj(v[1]), np.conj(v[0])]) / np.linalg.norm(v)
            lam_d = np.einsum("i,...ij,j->...", np.conj(p), top[dark], p)
            lam[dark] = lam_d[:, None]
            res[dark] = 0
            res[dark, 0] = -CHI_SCALE * g * abs(np.vdot(p, c)) ** 2
        return lam, res
    else:
        if d < 0:
            raise InvalidArgument("control/probe Doppler slope must be <= 1")
        A = np.zeros(db.shape + (3, 3), dtype=complex)
        A[..., :2, :2] = top
        A[..., 0, 2] = A[..., 2, 0] = 0
        s = 1 / np.sqrt(d)
        A[..., 0, 2] = -v[0] * s
        A[..., 1, 2] = -v[1] * s
        A[..., 2, 0] = -np.conj(v[0]) * s
        A[..., 2, 1] = -np.conj(v[1]) * s
        A[..., 2, 2] = two_photon / d
        left = np.append(np.conj(c), 0)
        right = np.append(c, 0)
    lam, R = np.linalg.eig(A)
    Rinv = np.linalg.inv(R)
    res = -CHI_SCALE * g * np.einsum("i,...ik->...k", left, R) * np.einsum("...ki,i->...k", Rinv, right)
    return lam, res


def _gauss_resolvent(lam, sigma):
    """<1 / (lam - x)> for x ~ N(0, sigma^2) and Im lam > 0."""
    scale = np.sqrt(2.0) * sigma
    return -1j * np.sqrt(np.pi) / scale * wofz(lam / scale)


def chi_doppler(delta_bar, scheme: SchemeInstance, control=None, model=None,
                doppler: DopplerConfig = DopplerConfig(enabled=True)):
    """Susceptibility averaged over a 1D Gaussian velocity distribution.

    The integrand is split into its pole expansion, averaged in closed form
    with the Faddeeva function, plus a remainder averaged by Gauss-Hermite
    quadrature of ``doppler.quadrature_order`` nodes. The remainder vanishes
    analytically, so the quadrature only mops up round-off in the expansion;
    plain quadrature of the Lorentzian-like integrand would need thousands of
    nodes once the thermal width exceeds the natural width.
    """
    model = _model(scheme, model)
    x, w = gauss_hermite(doppler.quadrature_order)
    sigma = float(doppler.thermal_width)
    if sigma < 0:
        raise InvalidArgument("thermal_width must be >= 0")
    if sigma == 0:
        return chi_at(delta_bar, scheme, control, model)
    slope = 1.0 if doppler.copropagating else -1.0
    db = np.asarray(delta_bar, dtype=float)
    lam, res = _pole_expansion(db, scheme, control, model, slope)
    out = np.sum(res * _gauss_resolvent(lam, sigma), axis=-1)
    # quadrature of the (ideally zero) remainder
    shifts = sigma * x
    flat = np.atleast_1d(db)[:, None]
    exact = _chi_cold(flat, scheme, control, model, shifts, slope * shifts)
    approx = np.sum(res[:, None, :] / (lam[:, None, :] - shifts[None, :, None]), axis=-1)
    out = out + (exact - approx) @ w
    return out.reshape(db.shape)[()] if db.ndim == 0 else out.reshape(db.shape)


def _threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class SusceptibilitySpectrum:
    detunings: np.ndarray
    chi: np.ndarray
    metadata: dict = field(default_factory=dict)

    def violations(self, tol=1e-12):
        out = []
        if len(self.detunings) != len(self.chi):
            out.append("length-mismatch")
        if np.any(np.diff(self.detunings) <= 0):
            out.append("detunings-not-increasing")
        if np.any(self.chi.imag < -tol):
            out.append("active-medium")
        return out


def parse_grid(grid):
    """Accept ``(min, max, count)``, a dict with those keys, or ``'min:max:count'``."""
    if isinstance(grid, str):
        parts = grid.split(":")
        if len(parts) != 3:
            raise InvalidArgument(f"grid must be min:max:count, got {grid!r}")
        try:
            grid = (float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise InvalidArgument(f"bad grid {grid!r}") from exc
    elif isinstance(grid, dict):
        grid = (grid["min"], grid["max"], grid["count"])
    lo, hi, count = grid
    if int(count) != count or count < 2:
        raise InvalidArgument("grid count must be an integer >= 2")
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise InvalidArgument("grid needs finite min < max")
    return float(lo), float(hi), int(count)


def spectrum(grid, scheme: SchemeInstance, control=None, model=None, doppler=None,
             workers=None) -> SusceptibilitySpectrum:
    """Susceptibility on a uniform probe-detuning grid, with full metadata."""
    lo, hi, count = parse_grid(grid)
    model = _model(scheme, model)
    control = scheme.control if control is None else control
    x = np.linspace(lo, hi, count)
    use_doppler = doppler is not None and doppler.enabled

    def evaluate(chunk):
        if use_doppler:
            return chi_doppler(chunk, scheme, control, model, doppler)
        return np.atleast_1d(chi_at(chunk, scheme, control, model))

    workers = _threads() if workers is None else workers
    chunk = 2048 if use_doppler else 65536
    pieces = [x[i:i + chunk] for i in range(0, count, chunk)]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(workers) as pool:
            chi = np.concatenate(list(pool.map(evaluate, pieces)))
    else:
        chi = np.concatenate([evaluate(p) for p in pieces])
    meta = {
        "model": model,
        "control_detuning_gamma": control.detuning,
        "rabi_gamma": control.rabi,
        "hyperfine_splitting_gamma": scheme.E_np - scheme.E_n,
        "c_n": [scheme.c_n.real, scheme.c_n.imag],
        "c_np": [scheme.c_np.real, scheme.c_np.imag] if model == FULL else [0.0, 0.0],
        "V_n": [scheme.V_n.real, scheme.V_n.imag],
        "V_np": [scheme.V_np.real, scheme.V_np.imag] if model == FULL else [0.0, 0.0],
        "doppler": None if not use_doppler else {
            "thermal_width_gamma": doppler.thermal_width,
            "quadrature_order": doppler.quadrature_order,
            "copropagating": doppler.copropagating,
        },
        "grid": [lo, hi, count],
        "chi_units": "n0 (lambda/2pi)^3",
    }
    return SusceptibilitySpectrum(x, chi, meta)


class Peak(NamedTuple):
    position: float
    height: float
    fwhm: float


def _half_crossing(x, y, i, half, step):
    j = i
    while 0 <= j + step < len(y):
        if y[j + step] < half:
            k = j + step
            return x[j] + (x[k] - x[j]) * (y[j] - half) / (y[j] - y[k])
        j += step
    return np.nan


def find_peaks(spec: SusceptibilitySpectrum, prominence=None, rel_prominence=1e-3):
    """Absorption (Im chi) maxima, refined with a parabola through three samples.

    ``prominence`` is absolute; if omitted it is ``rel_prominence`` times the
    largest |Im chi| of the spectrum. FWHM is measured between interpolated
    half-maximum crossings (NaN when a side never drops to half maximum).
    """
    x = np.asarray(spec.detunings, dtype=float)
    y = np.asarray(spec.chi).imag
    if len(x) < 3 or len(x) != len(y) or not np.all(np.isfinite(y)):
        raise InvalidArgument("spectrum too short or malformed for peak finding")
    scale = np.max(np.abs(y))
    if scale == 0:
        return []
    if prominence is None:
        prominence = rel_prominence * scale
    idx, _ = scipy.signal.find_peaks(y, prominence=prominence)
    peaks = []
    for i in idx:
        pos, height = x[i], y[i]
        if 0 < i < len(x) - 1:
            y0, y1, y2 = y[i - 1], y[i], y[i + 1]
            curv = y0 - 2 * y1 + y2
            if curv < 0:
                off = 0.5 * (y0 - y2) / curv
                h = x[i + 1] - x[i]
                pos = x[i] + off * h
                height = y1 - 0.25 * (y0 - y2) * off
        half_max = 0.5 * height
        lo = _half_crossing(x, y, i, half_max, -1)
        hi = _half_crossing(x, y, i, half_max, +1)
        peaks.append(Peak(float(pos), float(height), float(hi - lo)))
    return sorted(peaks)


class Extremum(NamedTuple):
    position: float
    value: float


def eit_minimum(scheme: SchemeInstance, control=None, model=None, search_window=None,
                n_scan=4001, doppler=None):
    """Minimum of Im chi near two-photon resonance: grid scan, then golden section.

    ``search_window`` defaults to the control detuning +- 5 gamma.
    """
    control = scheme.control if control is None else control
    model = _model(scheme, model)
    if search_window is None:
        search_window = (control.detuning - 5.0, control.detuning + 5.0)
    lo, hi = map(float, search_window)
    if not lo < hi:
        raise InvalidArgument("search window needs lo < hi")

    def f(d):
        if doppler is not None and doppler.enabled:
            return float(np.imag(chi_doppler(d, scheme, control, model, doppler)))
        return float(np.imag(chi_at(d, scheme, control, model)))

    x = np.linspace(lo, hi, n_scan)
    if doppler is not None and doppler.enabled:
        y = np.imag(chi_doppler(x, scheme, control, model, doppler))
    else:
        y = np.imag(chi_at(x, scheme, control, model))
    i = int(np.argmin(y))
    if i == 0 or i == n_scan - 1:
        raise NotFoundError("no interior absorption minimum inside the search window")
    if y[i] == y[i - 1] and y[i] == y[i + 1]:
        return Extremum(float(x[i]), float(y[i]))
    res = minimize_scalar(f, bracket=(x[i - 1], x[i], x[i + 1]), method="golden",
                          options={"xtol": 1e-12})
    if res.fun > y[i]:
        return Extremum(float(x[i]), float(y[i]))
    return Extremum(float(res.x), float(res.fun))


def kramers_kronig_real(detunings, chi_imag, pad=2):
    """Reconstruct Re chi from Im chi on a uniform grid via the Hilbert transform.

    Uses Re chi(x) = (1/pi) P int Im chi(y) / (y - x) dy, valid for a response
    analytic in the upper half-plane and vanishing at infinity. The data are
    zero-padded by ``pad`` times their length to suppress wrap-around.
    """
    x = np.asarray(detunings, dtype=float)
    y = np.asarray(chi_imag, dtype=float)
    step = np.diff(x)
    if len(x) < 3 or not np.allclose(step, step[0], rtol=1e-6, atol=0):
        raise InvalidArgument("Kramers-Kronig reconstruction needs a uniform grid")
    n = len(y)
    total = int(2 ** np.ceil(np.log2(n * (1 + pad))))
    padded = np.zeros(total)
    start = (total - n) // 2
    padded[start:start + n] = y
    analytic = scipy.signal.hilbert(padded)
    return -analytic.imag[start:start + n]
