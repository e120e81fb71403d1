"""Angular momentum algebra for hyperfine dipole couplings.

Wigner 3j and 6j symbols are evaluated with the Racah sum formula in exact
integer/rational arithmetic and converted to ``float`` only at the very end.
All angular quantum numbers are carried as :class:`HalfInt`, which stores
twice the value so that spins like 7/2 are represented exactly.

Dipole amplitudes follow the Wigner-Eckart convention

    <Fe Me| d_q |Fg Mg> = (-1)^(Fe-Me) (Fe 1 Fg; -Me q Mg) <Fe||d||Fg>

    <Fe||d||Fg> = (-1)^(Je+I+Fg+1) sqrt((2Fe+1)(2Fg+1)) {Je Fe I; Fg Jg 1} <Je||d||Jg>

with <Je||d||Jg> = sqrt(2Je+1), so that every excited sublevel has unit
total dipole strength summed over all ground sublevels and polarizations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt

from .errors import InvalidArgument

__all__ = [
    "HalfInt",
    "half",
    "wigner3j",
    "wigner6j",
    "clebsch_gordan",
    "dipole_amplitude",
    "relative_line_strength",
    "WIGNER_CONVENTION",
]

WIGNER_CONVENTION = (
    "(-1)^(Fe-Me) 3j(Fe,1,Fg;-Me,q,Mg) <Fe||d||Fg>; "
    "<Fe||d||Fg> = (-1)^(Je+I+Fg+1) sqrt((2Fe+1)(2Fg+1)) 6j{Je,Fe,I;Fg,Jg,1} sqrt(2Je+1)"
)


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer stored as twice its value."""

    twice_value: int

    def __post_init__(self):
        if not isinstance(self.twice_value, int) or isinstance(self.twice_value, bool):
            raise InvalidArgument(f"twice_value must be an int, got {self.twice_value!r}")

    @property
    def value(self) -> float:
        return self.twice_value / 2

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __add__(self, other):
        return HalfInt(self.twice_value + half(other).twice_value)

    def __sub__(self, other):
        return HalfInt(self.twice_value - half(other).twice_value)

    def __float__(self):
        return self.value

    def __str__(self):
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(x) -> HalfInt:
    """Coerce ``x`` (HalfInt, int, float, Fraction or '7/2'-style str) to HalfInt."""
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, str):
        try:
            x = Fraction(x.strip())
        except ValueError as exc:
            raise InvalidArgument(f"cannot parse angular momentum {x!r}") from exc
    if isinstance(x, bool):
        raise InvalidArgument("booleans are not angular momenta")
    if isinstance(x, int):
        return HalfInt(2 * x)
    if isinstance(x, Fraction):
        tw = 2 * x
    else:
        try:
            tw = 2 * float(x)
        except (TypeError, ValueError) as exc:
            raise InvalidArgument(f"cannot interpret {x!r} as an angular momentum") from exc
        if tw != tw or abs(tw - round(tw)) > 1e-9:
            raise InvalidArgument(f"{x!r} is not an integer or half-integer")
        tw = round(tw)
    if isinstance(tw, Fraction):
        if tw.denominator != 1:
            raise InvalidArgument(f"{x!r} is not an integer or half-integer")
        tw = tw.numerator
    return HalfInt(int(tw))


def _magnitude(x, name="j") -> int:
    tw = half(x).twice_value
    if tw < 0:
        raise InvalidArgument(f"{name} must be non-negative, got {tw / 2}")
    return tw


def _check_pair(tj: int, tm: int):
    if (tj - tm) % 2:
        raise InvalidArgument(f"projection {tm / 2} inconsistent with j = {tj / 2} (parity)")


def _triangle(ta: int, tb: int, tc: int) -> bool:
    return (ta + tb + tc) % 2 == 0 and abs(ta - tb) <= tc <= ta + tb


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    # triangle coefficient, squared; arguments are doubled
    return Fraction(
        factorial((ta + tb - tc) // 2) * factorial((ta - tb + tc) // 2) * factorial((-ta + tb + tc) // 2),
        factorial((ta + tb + tc) // 2 + 1),
    )


def _signed_sqrt(s: Fraction, p: Fraction) -> float:
    """Return s * sqrt(p) rounded once, for exact s and p >= 0."""
    if s == 0 or p == 0:
        return 0.0
    mag = sqrt(s * s * p)
    return mag if s > 0 else -mag


@lru_cache(maxsize=65536)
def _w3j(a1, a2, a3, b1, b2, b3) -> float:
    if b1 + b2 + b3 != 0:
        return 0.0
    if abs(b1) > a1 or abs(b2) > a2 or abs(b3) > a3:
        return 0.0
    if not _triangle(a1, a2, a3):
        return 0.0
    # integer combinations used by the Racah formula
    j1pm1, j1mm1 = (a1 + b1) // 2, (a1 - b1) // 2
    j2pm2, j2mm2 = (a2 + b2) // 2, (a2 - b2) // 2
    j3pm3, j3mm3 = (a3 + b3) // 2, (a3 - b3) // 2
    j12m3 = (a1 + a2 - a3) // 2
    j3m2pm1 = (a3 - a2 + b1) // 2
    j3m1mm2 = (a3 - a1 - b2) // 2

    kmin = max(0, -j3m2pm1, -j3m1mm2)
    kmax = min(j12m3, j1mm1, j2pm2)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (factorial(k) * factorial(j3m2pm1 + k) * factorial(j3m1mm2 + k)
               * factorial(j12m3 - k) * factorial(j1mm1 - k) * factorial(j2pm2 - k))
        total += Fraction(-1 if k % 2 else 1, den)
    pre = _delta_sq(a1, a2, a3) * (factorial(j1pm1) * factorial(j1mm1) * factorial(j2pm2)
                                   * factorial(j2mm2) * factorial(j3pm3) * factorial(j3mm3))
    if ((a1 - a2 - b3) // 2) % 2:
        total = -total
    return _signed_sqrt(total, pre)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3).

    Arguments may be HalfInt or anything :func:`half` accepts. Returns an
    exact 0.0 when the triangle rule or projection rules are violated.
    """
    a = [_magnitude(j) for j in (j1, j2, j3)]
    b = [half(m).twice_value for m in (m1, m2, m3)]
    for tj, tm in zip(a, b):
        _check_pair(tj, tm)
    return _w3j(*a, *b)


@lru_cache(maxsize=65536)
def _w6j(a1, a2, a3, a4, a5, a6) -> float:
    triads = ((a1, a2, a3), (a1, a5, a6), (a4, a2, a6), (a4, a5, a3))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    lows = [sum(t) // 2 for t in triads]
    highs = [(a1 + a2 + a4 + a5) // 2, (a2 + a3 + a5 + a6) // 2, (a3 + a1 + a6 + a4) // 2]
    total = Fraction(0)
    for t in range(max(lows), min(highs) + 1):
        den = 1
        for lo in lows:
            den *= factorial(t - lo)
        for hi in highs:
            den *= factorial(hi - t)
        total += Fraction((-1 if t % 2 else 1) * factorial(t + 1), den)
    pre = Fraction(1)
    for tri in triads:
        pre *= _delta_sq(*tri)
    return _signed_sqrt(total, pre)


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; zero if any triad is not a triangle."""
    return _w6j(*(_magnitude(j) for j in (j1, j2, j3, j4, j5, j6)))


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """<j1 m1 j2 m2 | j m> in the Condon-Shortley convention."""
    a1, a2, a = _magnitude(j1), _magnitude(j2), _magnitude(j)
    b1, b2, b = half(m1).twice_value, half(m2).twice_value, half(m).twice_value
    phase = -1 if ((a1 - a2 + b) // 2) % 2 else 1
    for tj, tm in ((a1, b1), (a2, b2), (a, b)):
        _check_pair(tj, tm)
    return phase * sqrt(a + 1) * _w3j(a1, a2, a, b1, b2, -b)


def dipole_amplitude(Fg, Mg, Fe, Me, q, I="7/2", Jg="1/2", Je="1/2") -> float:
    """Normalized dipole amplitude <Fe Me| d_q |Fg Mg> for a hyperfine transition.

    ``q`` is the spherical component (-1, 0, +1) of the absorbed photon, so the
    amplitude vanishes unless Me = Mg + q. Summing the squared amplitude over
    Fg, Mg and q gives 1 for every excited sublevel.
    """
    if q not in (-1, 0, 1):
        raise InvalidArgument(f"q must be -1, 0 or +1, got {q!r}")
    tFg, tFe = _magnitude(Fg, "Fg"), _magnitude(Fe, "Fe")
    tI, tJg, tJe = _magnitude(I, "I"), _magnitude(Jg, "Jg"), _magnitude(Je, "Je")
    tMg, tMe = half(Mg).twice_value, half(Me).twice_value
    _check_pair(tFg, tMg)
    _check_pair(tFe, tMe)
    if not (_triangle(tJg, tI, tFg) and _triangle(tJe, tI, tFe)):
        raise InvalidArgument("F is not reachable by coupling J and I")
    if tMe != tMg + 2 * q:
        return 0.0
    threej = _w3j(tFe, 2, tFg, -tMe, 2 * q, tMg)
    sixj = _w6j(tJe, tFe, tI, tFg, tJg, 2)
    if threej == 0.0 or sixj == 0.0:
        return 0.0
    phase = (tFe - tMe) // 2 + (tJe + tI + tFg + 2) // 2
    reduced = sqrt((tFe + 1) * (tFg + 1) * (tJe + 1)) * sixj
    return (-1 if phase % 2 else 1) * threej * reduced


def relative_line_strength(Fg, Fe, I="7/2", Jg="1/2", Je="1/2") -> float:
    """Fraction of the decay of any Fe sublevel that ends in the Fg manifold."""
    tFg, tFe = _magnitude(Fg, "Fg"), _magnitude(Fe, "Fe")
    total = 0.0
    for tMg in range(-tFg, tFg + 1, 2):
        for q in (-1, 0, 1):
            amp = dipole_amplitude(HalfInt(tFg), HalfInt(tMg), HalfInt(tFe), HalfInt(tFe),
                                   q, I, Jg, Je)
            total += amp * amp
    return total
