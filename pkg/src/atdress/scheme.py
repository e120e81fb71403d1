"""The four-state excitation scheme on an alkali D1 line.

States (Cs defaults in brackets):

* ``m``  - populated ground sublevel (F, M=F)            [F=4, M=4]
* ``mp`` - empty ground sublevel (F, M=F-2)              [F=4, M=2]
* ``n``  - excited sublevel (F'_low, M'=F-1)             [F'=3, M'=3]
* ``np`` - excited sublevel (F'_high, M'=F-1)            [F'=4, M'=3]

The sigma+ control couples ``mp`` to ``n`` and ``np``; the sigma- probe
couples ``m`` to the same two excited sublevels. Units: gamma = hbar = 1,
energies in the rotating frame with E_m = E_mp = E_n = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .angular import HalfInt, dipole_amplitude, half
from .errors import InvalidArgument, SchemeError

FULL = "full"
LAMBDA = "lambda"
MODELS = (FULL, LAMBDA)

# Cs 6P1/2 hyperfine splitting and natural linewidth (MHz)
CS_D1_HYPERFINE_MHZ = 1167.68
CS_D1_LINEWIDTH_MHZ = 4.575
CS_D1_SPLITTING = CS_D1_HYPERFINE_MHZ / CS_D1_LINEWIDTH_MHZ


@dataclass(frozen=True)
class LevelConfig:
    nuclear_spin: HalfInt = HalfInt(7)
    ground_F: HalfInt = HalfInt(8)
    excited_F_low: HalfInt = HalfInt(6)
    excited_F_high: HalfInt = HalfInt(8)
    hyperfine_splitting: float = CS_D1_SPLITTING
    Jg: HalfInt = HalfInt(1)
    Je: HalfInt = HalfInt(1)
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("nuclear_spin", "ground_F", "excited_F_low", "excited_F_high", "Jg", "Je"):
            object.__setattr__(self, name, half(getattr(self, name)))
        if self.excited_F_low >= self.excited_F_high:
            raise SchemeError("excited_F_low must be below excited_F_high")
        lo = abs(self.Je.twice_value - self.nuclear_spin.twice_value)
        hi = self.Je.twice_value + self.nuclear_spin.twice_value
        for F in (self.excited_F_low, self.excited_F_high):
            if not lo <= F.twice_value <= hi or (F.twice_value - lo) % 2:
                raise SchemeError(f"excited F={F} is not in the J'+I manifold")
        lo = abs(self.Jg.twice_value - self.nuclear_spin.twice_value)
        hi = self.Jg.twice_value + self.nuclear_spin.twice_value
        if not lo <= self.ground_F.twice_value <= hi or (self.ground_F.twice_value - lo) % 2:
            raise SchemeError(f"ground F={self.ground_F} is not in the J+I manifold")
        if not self.hyperfine_splitting >= 0:
            raise InvalidArgument("hyperfine_splitting must be >= 0")
        if self.gamma != 1.0:
            raise InvalidArgument("energies are in units of gamma; gamma is fixed to 1")


@dataclass(frozen=True)
class ControlField:
    """Control field: detuning from the m' -> n transition and Rabi frequency 2|V_n|."""

    detuning: float = 0.0
    rabi: float = 15.0
    polarization: str = "sigma+"

    def __post_init__(self):
        if not math.isfinite(self.detuning):
            raise InvalidArgument("control detuning must be finite")
        if not (math.isfinite(self.rabi) and self.rabi >= 0):
            raise InvalidArgument("Rabi frequency must be finite and >= 0")
        if self.polarization != "sigma+":
            raise InvalidArgument("only sigma+ control polarization is supported")


@dataclass(frozen=True)
class SchemeInstance:
    """Energies and couplings of the four-state scheme (immutable)."""

    level: LevelConfig
    control: ControlField
    model: str
    V_n: complex
    V_np: complex
    c_n: complex
    c_np: complex
    E_m: float = 0.0
    E_mp: float = 0.0
    E_n: float = 0.0
    E_np: float = 0.0
    gamma: float = 1.0
    # bare angular amplitudes (control from mp, probe from m) used to derive the above
    amplitudes: dict = field(default_factory=dict, compare=False)

    @property
    def strengths(self):
        return abs(self.c_n) ** 2, abs(self.c_np) ** 2

    def shifted(self, offset: float) -> "SchemeInstance":
        """Same physics with every energy moved by ``offset`` (frame change)."""
        return replace(self, E_m=self.E_m + offset, E_mp=self.E_mp + offset,
                       E_n=self.E_n + offset, E_np=self.E_np + offset)


class Violation(NamedTuple):
    code: str
    message: str


def _sublevels(level: LevelConfig):
    F = level.ground_F
    m = (F, F)
    mp = (F, HalfInt(F.twice_value - 4))
    Me = HalfInt(F.twice_value - 2)
    return m, mp, Me


def scheme_amplitudes(level: LevelConfig) -> dict:
    """Angular amplitudes of the four transitions used by the scheme."""
    (Fg, Mm), (_, Mmp), Me = _sublevels(level)
    if Mmp.twice_value < -Fg.twice_value:
        raise SchemeError(f"ground F={Fg} has no M=F-2 sublevel")
    for Fe in (level.excited_F_low, level.excited_F_high):
        if abs(Fe.twice_value - Fg.twice_value) > 2:
            raise SchemeError(f"ground F={Fg} cannot reach excited F'={Fe} (triangle rule)")
        if abs(Me.twice_value) > Fe.twice_value:
            raise SchemeError(f"excited F'={Fe} has no sublevel M'={Me}")
    kw = dict(I=level.nuclear_spin, Jg=level.Jg, Je=level.Je)
    amps = {
        "probe_n": dipole_amplitude(Fg, Mm, level.excited_F_low, Me, -1, **kw),
        "probe_np": dipole_amplitude(Fg, Mm, level.excited_F_high, Me, -1, **kw),
        "control_n": dipole_amplitude(Fg, Mmp, level.excited_F_low, Me, +1, **kw),
        "control_np": dipole_amplitude(Fg, Mmp, level.excited_F_high, Me, +1, **kw),
    }
    if amps["control_n"] == 0.0:
        raise SchemeError("control transition m' -> n is dipole forbidden")
    if amps["probe_n"] == 0.0:
        raise SchemeError("probe transition m -> n is dipole forbidden")
    return amps


def build_scheme(level: LevelConfig = LevelConfig(), control: ControlField = ControlField(),
                 model: str = FULL) -> SchemeInstance:
    """Derive all scheme energies and couplings from the level and control settings.

    V_n = rabi/2 exactly; V_np carries the angular ratio of the two sigma+
    amplitudes out of m'. Probe amplitudes are the bare sigma- amplitudes out
    of m. The lambda model drops the second excited sublevel.
    """
    if model not in MODELS:
        raise InvalidArgument(f"unknown model {model!r}; expected one of {MODELS}")
    amps = scheme_amplitudes(level)
    V_n = complex(control.rabi / 2)
    ratio = amps["control_np"] / amps["control_n"]
    if model == FULL:
        V_np, c_np = V_n * ratio, complex(amps["probe_np"])
    else:
        V_np, c_np = 0j, 0j
    return SchemeInstance(level=level, control=control, model=model,
                          V_n=V_n, V_np=V_np, c_n=complex(amps["probe_n"]), c_np=c_np,
                          E_np=float(level.hyperfine_splitting), gamma=level.gamma,
                          amplitudes=amps)


def validate(scheme: SchemeInstance) -> list:
    """Return the list of invariant violations (empty when the scheme is sound)."""
    out = []
    if scheme.model not in MODELS:
        out.append(Violation("unknown-model", f"model {scheme.model!r}"))
    if scheme.model == LAMBDA and (scheme.V_np != 0 or scheme.c_np != 0):
        out.append(Violation("lambda-coupling-violation",
                             "lambda model must not couple the second excited sublevel"))
    if scheme.model == FULL and scheme.E_np - scheme.E_n <= 0:
        out.append(Violation("degenerate-excited-manifold",
                             "full model needs a positive excited hyperfine splitting"))
    if scheme.E_m != scheme.E_mp:
        out.append(Violation("ground-nondegenerate", "m and m' must share one energy"))
    if not scheme.gamma > 0:
        out.append(Violation("nonpositive-linewidth", "gamma must be > 0"))
    probes = [("c_n", scheme.c_n)] + ([("c_np", scheme.c_np)] if scheme.model == FULL else [])
    for name, c in probes:
        if not 0 < abs(c) ** 2 <= 1:
            out.append(Violation("probe-strength-range", f"|{name}|^2 = {abs(c) ** 2:g}"))
    try:
        ref = build_scheme(scheme.level, scheme.control, scheme.model) \
            if scheme.model in MODELS else None
    except (SchemeError, InvalidArgument) as exc:
        out.append(Violation("invalid-level-config", str(exc)))
        ref = None
    if ref is not None:
        derived = (ref.V_n, ref.V_np, ref.c_n, ref.c_np)
        actual = (scheme.V_n, scheme.V_np, scheme.c_n, scheme.c_np)
        if scheme.model == LAMBDA:
            # n' couplings are covered by lambda-coupling-violation
            derived, actual = derived[::2], actual[::2]
        # a common rephasing of n or n' is allowed; compare magnitudes and the invariant product
        if any(not math.isclose(abs(a), abs(b), rel_tol=1e-12, abs_tol=1e-15)
               for a, b in zip(actual, derived)):
            out.append(Violation("coupling-mismatch",
                                 "couplings are not reproducible from level and control"))
        elif not math.isclose(abs(scheme.control.rabi / 2), abs(scheme.V_n), rel_tol=1e-12):
            out.append(Violation("coupling-mismatch", "|V_n| differs from rabi/2"))
    Ftop = scheme.level.excited_F_high.twice_value
    if scheme.level.ground_F.twice_value + 2 <= Ftop:
        out.append(Violation("control-couples-populated-state",
                             "sigma+ control can excite the populated sublevel m"))
    return out


CONFIG_KEYS = {
    "nuclear_spin": ("level", "nuclear_spin", half),
    "ground_F": ("level", "ground_F", half),
    "excited_F_low": ("level", "excited_F_low", half),
    "excited_F_high": ("level", "excited_F_high", half),
    "hyperfine_splitting_gamma": ("level", "hyperfine_splitting", float),
    "control_detuning_gamma": ("control", "detuning", float),
    "rabi_gamma": ("control", "rabi", float),
    "model": ("model", None, str),
}


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments) into a dict of raw strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise InvalidArgument(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def resolve_config(*layers: dict):
    """Merge config layers (later wins) over Cs defaults.

    Returns ``(LevelConfig, ControlField, model)``. Values may be strings (from
    a config file) or already-typed (from command-line flags); ``None`` values
    are ignored.
    """
    level_kw, control_kw, model = {}, {}, FULL
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key not in CONFIG_KEYS:
                raise InvalidArgument(f"unknown configuration key {key!r}")
            target, name, conv = CONFIG_KEYS[key]
            try:
                value = conv(value)
            except (TypeError, ValueError) as exc:
                raise InvalidArgument(f"bad value for {key}: {value!r}") from exc
            if target == "level":
                level_kw[name] = value
            elif target == "control":
                control_kw[name] = value
            else:
                model = value
    if model not in MODELS:
        raise InvalidArgument(f"unknown model {model!r}")
    return LevelConfig(**level_kw), ControlField(**control_kw), model


def config_dict(level: LevelConfig, control: ControlField, model: str) -> dict:
    """Flat, JSON-friendly record of a resolved configuration."""
    return {
        "nuclear_spin": str(level.nuclear_spin),
        "ground_F": str(level.ground_F),
        "excited_F_low": str(level.excited_F_low),
        "excited_F_high": str(level.excited_F_high),
        "hyperfine_splitting_gamma": level.hyperfine_splitting,
        "control_detuning_gamma": control.detuning,
        "rabi_gamma": control.rabi,
        "model": model,
    }
