"""Autler-Townes dressing of an alkali D1 hyperfine doublet: probe susceptibility and slow-light pulses."""

__version__ = "0.1.0"

from .angular import HalfInt, dipole_amplitude, half, relative_line_strength, wigner3j, wigner6j
from .dressed import green_matrix, green_poles, quasi_energies, self_energy
from .errors import (InvalidArgument, NotFoundError, PoleError, SchemeError,
                     WindowTooSmallError)
from .propagation import (MediumConfig, PulseMetrics, PulseProfile, gaussian_pulse,
                          propagate_pulse, pulse_metrics, sweep_operating_points,
                          transfer_function)
from .scheme import FULL, LAMBDA, ControlField, LevelConfig, SchemeInstance, build_scheme, validate
from .susceptibility import (DopplerConfig, SusceptibilitySpectrum, chi_at, chi_doppler,
                             eit_minimum, find_peaks, kramers_kronig_real, spectrum)

__all__ = [
    "HalfInt", "dipole_amplitude", "half", "relative_line_strength", "wigner3j", "wigner6j",
    "green_matrix", "green_poles", "quasi_energies", "self_energy",
    "InvalidArgument", "NotFoundError", "PoleError", "SchemeError", "WindowTooSmallError",
    "MediumConfig", "PulseMetrics", "PulseProfile", "gaussian_pulse", "propagate_pulse",
    "pulse_metrics", "sweep_operating_points", "transfer_function",
    "FULL", "LAMBDA", "ControlField", "LevelConfig", "SchemeInstance", "build_scheme", "validate",
    "DopplerConfig", "SusceptibilitySpectrum", "chi_at", "chi_doppler", "eit_minimum", "find_peaks",
    "kramers_kronig_real", "spectrum",
]
