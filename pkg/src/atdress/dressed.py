"""Dressed excited-state Green functions of the four-state scheme.

Each excited sublevel, taken alone with the control-coupled ground sublevel
m', forms a two-level dressed pair with quasi-energies E_{n+-}. The retarded
Green functions of the coupled pair (n, n') are built from those pairs; all
four entries share one denominator, the determinant of E - H over
{n, n', m'+control photon}.

Green matrices are returned as complex arrays of shape ``E.shape + (2, 2)``
with index 0 = n and 1 = n'. ``velocity_shift`` is the control Doppler shift
k.v; probe Doppler shifts are applied by the caller to ``E``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument, PoleError
from .scheme import FULL, LAMBDA, SchemeInstance

N, NP = 0, 1


class QuasiEnergyPair(NamedTuple):
    e_plus: complex
    e_minus: complex


def control_frequency(scheme: SchemeInstance, control=None) -> float:
    """Control photon frequency in the scheme's frame (omega = E_n - E_m' + detuning)."""
    control = scheme.control if control is None else control
    return scheme.E_n - scheme.E_mp + control.detuning


def _couplings(scheme, model):
    model = scheme.model if model is None else model
    if model == FULL:
        return scheme.V_n, scheme.V_np
    if model == LAMBDA:
        return scheme.V_n, 0j
    raise InvalidArgument(f"unknown model {model!r}")


def _level(level):
    if level in ("n", N):
        return N
    if level in ("np", "n'", NP):
        return NP
    raise InvalidArgument(f"level must be 'n' or 'np', got {level!r}")


def _pair(E_level, V, omega, E_mp, gamma):
    """Roots of (x - A)(x - B) = |V|^2 with A = E_level - i gamma/2, B = E_mp + omega.

    The larger root comes from the half-sum plus the discriminant with a
    matching sign, the other from the product, so neither suffers from
    cancellation when one root is much smaller than the other.
    """
    A = E_level - 0.5j * gamma
    B = E_mp + omega
    half_sum = 0.5 * (A + B)
    root = np.sqrt(abs(V) ** 2 + 0.25 * (A - B) ** 2)
    flip = (np.conj(half_sum) * root).real < 0
    root = np.where(flip, -root, root)
    big = half_sum + root
    product = A * B - abs(V) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.where(big == 0, half_sum - root, product / big)
    return big, small


def quasi_energies(level, scheme: SchemeInstance, control=None, velocity_shift=0.0,
                   model=None) -> QuasiEnergyPair:
    """Quasi-energies of ``level`` ('n' or 'np') dressed by the control field.

    Branches are labeled so that Re(e_plus) >= Re(e_minus) (ties: larger Im
    first). Their sum is omega + omega_{level,m'} - i gamma/2 (+ 2 E_m').
    """
    idx = _level(level)
    V = _couplings(scheme, model)[idx]
    E_lvl = scheme.E_n if idx == N else scheme.E_np
    omega = control_frequency(scheme, control) - np.asarray(velocity_shift, dtype=float)
    a, b = _pair(E_lvl, V, omega, scheme.E_mp, scheme.gamma)
    swap = (a.real < b.real) | ((a.real == b.real) & (a.imag < b.imag))
    plus, minus = np.where(swap, b, a), np.where(swap, a, b)
    if plus.ndim == 0:
        return QuasiEnergyPair(complex(plus), complex(minus))
    return QuasiEnergyPair(plus, minus)


def _partner_det(E, idx, scheme, control, velocity_shift, model):
    """(E - E_+)(E - E_-) for the partner level's dressed pair.

    Evaluated as (E - A)(E - B) - |V|^2, which equals the quasi-energy product
    identically but keeps full relative accuracy when E sits close to the
    control photon energy far from the partner level.
    """
    other = NP if idx == N else N
    V = _couplings(scheme, model)[other]
    E_lvl = scheme.E_n if other == N else scheme.E_np
    omega = control_frequency(scheme, control) - np.asarray(velocity_shift, dtype=float)
    return (E - E_lvl + 0.5j * scheme.gamma) * (E - scheme.E_mp - omega) - abs(V) ** 2


def self_energy(level, E, scheme: SchemeInstance, control=None, velocity_shift=0.0, model=None):
    """Dressing correction of ``level`` through m', itself dressed by the partner level.

    For the lambda model and level n this is |V_n|^2 / (E - omega).
    """
    idx = _level(level)
    E = np.asarray(E, dtype=complex)
    V_n, V_np = _couplings(scheme, model)
    V, E_other = (V_n, scheme.E_np) if idx == N else (V_np, scheme.E_n)
    det = _partner_det(E, idx, scheme, control, velocity_shift, model)
    if np.any(det == 0):
        raise PoleError("self-energy evaluated on a partner quasi-energy")
    out = abs(V) ** 2 * (E - E_other + 0.5j * scheme.gamma) / det
    return out[()] if out.ndim == 0 else out


def green_matrix(E, scheme: SchemeInstance, control=None, velocity_shift=0.0, model=None):
    """Retarded Green matrix G_{n1 n2}(E) of the dressed excited pair.

    Evaluated through the quasi-energy factorization; multiplying numerator
    and denominator by the partner determinant keeps every entry finite at the
    dark-state point where the self-energy itself diverges.
    """
    model = scheme.model if model is None else model
    E = np.asarray(E, dtype=complex)
    if scheme.E_n != 0:
        # work relative to E_n so that a common frame offset cancels before any rounding
        E = E - scheme.E_n
        scheme = scheme.shifted(-scheme.E_n)
    V_n, V_np = _couplings(scheme, model)
    g = scheme.gamma
    if V_n == 0 and V_np == 0:
        # control off: the photon state decouples and both factored forms are 0/0 at its energy
        bare = np.stack([E - scheme.E_n + 0.5j * g, E - scheme.E_np + 0.5j * g])
        if np.any(bare == 0):
            raise PoleError("Green matrix evaluated on a pole")
        out = np.zeros(E.shape + (2, 2), dtype=complex)
        out[..., N, N] = 1 / bare[0]
        out[..., NP, NP] = 1 / bare[1]
        return out
    det_n = _partner_det(E, NP, scheme, control, velocity_shift, model)    # (E-E_n+)(E-E_n-)
    det_np = _partner_det(E, N, scheme, control, velocity_shift, model)    # (E-E_n'+)(E-E_n'-)
    Ea = E - scheme.E_n + 0.5j * g
    Eb = E - scheme.E_np + 0.5j * g
    den_n = Ea * det_np - abs(V_n) ** 2 * Eb
    den_np = Eb * det_n - abs(V_np) ** 2 * Ea
    if np.any(den_n == 0) or np.any(den_np == 0) or not (
            np.all(np.isfinite(den_n)) and np.all(np.isfinite(den_np))):
        raise PoleError("Green matrix evaluated on a pole")
    out = np.empty(E.shape + (2, 2), dtype=complex)
    out[..., N, N] = det_np / den_n
    out[..., NP, N] = V_np * np.conj(V_n) / den_n
    out[..., NP, NP] = det_n / den_np
    out[..., N, NP] = V_n * np.conj(V_np) / den_np
    if model == LAMBDA:
        out[..., N, NP] = out[..., NP, N] = 0
    return out


def effective_hamiltonian(scheme: SchemeInstance, control=None, velocity_shift=0.0, model=None):
    """Non-Hermitian Hamiltonian on (n, n', m'+photon) whose resolvent gives the Green matrix."""
    V_n, V_np = _couplings(scheme, model)
    g = scheme.gamma
    w = scheme.E_mp + control_frequency(scheme, control) - velocity_shift
    return np.array([
        [scheme.E_n - 0.5j * g, 0, V_n],
        [0, scheme.E_np - 0.5j * g, V_np],
        [np.conj(V_n), np.conj(V_np), w],
    ], dtype=complex)


def green_poles(scheme: SchemeInstance, control=None, velocity_shift=0.0, model=None):
    """Poles of G_nn, sorted by real part.

    These are the eigenvalues of the effective Hamiltonian; in the lambda
    model the decoupled n' eigenvalue does not appear in G_nn and is dropped.
    """
    model = scheme.model if model is None else model
    H = effective_hamiltonian(scheme, control, velocity_shift, model)
    if model == LAMBDA:
        H = H[np.ix_([0, 2], [0, 2])]
    poles = np.linalg.eigvals(H)
    return poles[np.lexsort((poles.imag, poles.real))]


def contract(green, c_n, c_np):
    """sum_{n1 n2} conj(c_n1) c_n2 G_{n1 n2}."""
    c = np.array([c_n, c_np], dtype=complex)
    return np.einsum("i,...ij,j->...", np.conj(c), green, c)
