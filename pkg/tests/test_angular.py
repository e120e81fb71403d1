import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atdress.angular import (HalfInt, clebsch_gordan, dipole_amplitude, half,
                             relative_line_strength, wigner3j, wigner6j)
from atdress.errors import InvalidArgument

from oracles import dipole_bruteforce, sixj, threej

# frozen from the brute-force Clebsch-Gordan oracle (tests/oracles.py)
CONTROL_RATIO_ORACLE = 2.6457513110645907   # <4'3|d+|4 2> / <3'3|d+|4 2>
LINE_STRENGTH_4_TO_3 = 0.75


def _half_values(jmax):
    return [Fraction(k, 2) for k in range(0, 2 * jmax + 1)]


def _m_values(j):
    return [j - k for k in range(int(2 * j) + 1)]


def test_halfint_roundtrip():
    assert half("7/2") == HalfInt(7)
    assert half(3.5) == HalfInt(7)
    assert half(Fraction(4)) == HalfInt(8)
    assert str(HalfInt(7)) == "7/2"
    assert HalfInt(7).value == 3.5
    assert HalfInt(8).is_integer
    with pytest.raises(InvalidArgument):
        half(0.3)


def test_3j_matches_exact_oracle_all_small_arguments():
    worst = 0.0
    js = _half_values(5)
    count = 0
    for j1, j2 in itertools.product(js, repeat=2):
        for j3 in js:
            if not abs(j1 - j2) <= j3 <= j1 + j2 or (j1 + j2 + j3).denominator != 1:
                continue
            for m1 in _m_values(j1):
                for m2 in _m_values(j2):
                    m3 = -m1 - m2
                    if abs(m3) > j3:
                        continue
                    a = wigner3j(j1, j2, j3, m1, m2, m3)
                    b = threej(j1, j2, j3, m1, m2, m3)
                    worst = max(worst, abs(a - b))
                    count += 1
    assert count > 10000
    assert worst < 1e-12


def test_3j_zero_outside_selection_rules():
    assert wigner3j(1, 1, 1, 1, 1, 0) == 0.0          # m sum != 0
    assert wigner3j(1, 1, 3, 0, 0, 0) == 0.0          # triangle
    assert wigner3j(1, 1, 1, 0, 0, 0) == 0.0          # odd J with all m = 0


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_6j_matches_exact_oracle(data):
    js = [data.draw(st.integers(0, 10)) / 2 for _ in range(6)]
    assert abs(wigner6j(*js) - sixj(*js)) < 1e-12


def test_6j_exhaustive_integer_arguments_up_to_3():
    worst = 0.0
    for js in itertools.product(range(4), repeat=6):
        worst = max(worst, abs(wigner6j(*js) - sixj(*js)))
    assert worst < 1e-12


def test_6j_closed_form_with_zero_argument():
    # {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1)); for (1,4,3) a+b+c = 8 is even
    assert wigner6j(1, 4, 3, 0, 3, 4) == pytest.approx(1 / (3 * np.sqrt(7)), abs=1e-14)
    assert wigner6j(1, 4, 3, 0, 3, 4) == pytest.approx(sixj(1, 4, 3, 0, 3, 4), abs=1e-14)


def test_6j_triangle_violation_is_zero():
    assert wigner6j(1, 2, 4, 1, 1, 1) == 0.0


def test_3j_orthogonality():
    checked = 0
    for j1, j2 in itertools.product(_half_values(5), repeat=2):
        for j3 in _half_values(5):
            if not abs(j1 - j2) <= j3 <= j1 + j2 or (j1 + j2 + j3).denominator != 1:
                continue
            for m3 in _m_values(j3):
                total = sum((2 * j3 + 1) * wigner3j(j1, j2, j3, m1, -m1 - m3, m3) ** 2
                            for m1 in _m_values(j1) if abs(-m1 - m3) <= j2)
                assert total == pytest.approx(1.0, abs=1e-12)
                checked += 1
    assert checked > 1000


valid_triads = st.tuples(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10)).filter(
    lambda t: abs(t[0] - t[1]) <= t[2] <= t[0] + t[1] and sum(t) % 2 == 0)


@settings(max_examples=300, deadline=None)
@given(valid_triads, st.data())
def test_3j_permutation_symmetry(tw, data):
    j = [x / 2 for x in tw]
    m1 = data.draw(st.sampled_from(_m_values(Fraction(tw[0], 2))))
    m2 = data.draw(st.sampled_from(_m_values(Fraction(tw[1], 2))))
    m3 = -m1 - m2
    if abs(m3) > Fraction(tw[2], 2):
        return
    m = [float(m1), float(m2), float(m3)]
    base = wigner3j(*j, *m)
    assert wigner3j(j[1], j[2], j[0], m[1], m[2], m[0]) == pytest.approx(base, abs=1e-14)
    sign = (-1) ** int(round(sum(j)))
    assert wigner3j(j[1], j[0], j[2], m[1], m[0], m[2]) == pytest.approx(sign * base, abs=1e-14)
    assert wigner3j(j[0], j[1], j[2], -m[0], -m[1], -m[2]) == pytest.approx(sign * base, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_biedenharn_elliott_identity(tw):
    a, b, c, d, e, f, g, h, k = [x / 2 for x in tw]
    # sum_x (-1)^(S+x) (2x+1) {a b x; c d g}{c d x; e f h}{e f x; b a k}
    #   = {g h k; e a d}{g h k; f b c},  S = a+b+c+d+e+f+g+h+k
    S = a + b + c + d + e + f + g + h + k
    rhs = wigner6j(g, h, k, e, a, d) * wigner6j(g, h, k, f, b, c)
    lhs = 0.0
    for tx in range(0, 40):
        x = tx / 2
        if (S + x) % 1:
            continue
        lhs += ((-1) ** int(round(S + x)) * (2 * x + 1) * wigner6j(a, b, x, c, d, g)
                * wigner6j(c, d, x, e, f, h) * wigner6j(e, f, x, b, a, k))
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_clebsch_gordan_spin_half_coupling():
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0) == pytest.approx(np.sqrt(0.5))
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(np.sqrt(0.5))
    assert clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0) == pytest.approx(-np.sqrt(0.5))


def test_dipole_amplitudes_match_bruteforce_decomposition():
    worst, n = 0.0, 0
    for Fg, Fe in itertools.product((3, 4), repeat=2):
        for Mg in range(-Fg, Fg + 1):
            for q in (-1, 0, 1):
                Me = Mg + q
                if abs(Me) > Fe:
                    continue
                worst = max(worst, abs(dipole_amplitude(Fg, Mg, Fe, Me, q) - dipole_bruteforce(Fg, Mg, Fe, Me, q)))
                n += 1
    assert n == 86
    assert worst < 1e-12


def test_dipole_selection_rule():
    assert dipole_amplitude(4, 2, 4, 2, 1) == 0.0
    assert dipole_amplitude(4, 4, 3, 4, 0) == 0.0


def test_dipole_rejects_bad_polarization():
    with pytest.raises(InvalidArgument):
        dipole_amplitude(4, 2, 4, 4, 2)


@pytest.mark.parametrize("Fe", [3, 4])
def test_completeness_every_excited_sublevel(Fe):
    for Me in range(-Fe, Fe + 1):
        total = sum(dipole_amplitude(Fg, Mg, Fe, Me, q) ** 2
                    for Fg in (3, 4) for Mg in range(-Fg, Fg + 1) for q in (-1, 0, 1))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_control_amplitude_ratio_matches_oracle():
    ratio = dipole_amplitude(4, 2, 4, 3, 1) / dipole_amplitude(4, 2, 3, 3, 1)
    assert ratio == pytest.approx(CONTROL_RATIO_ORACLE, rel=1e-12)


def test_relative_line_strengths():
    assert relative_line_strength(4, 3) == pytest.approx(LINE_STRENGTH_4_TO_3, abs=1e-12)
    for Fe in (3, 4):
        assert relative_line_strength(3, Fe) + relative_line_strength(4, Fe) == pytest.approx(1.0, abs=1e-12)
    # D2-type manifold: F=3 cannot reach F'=5
    assert relative_line_strength(3, 5, Je="3/2") == 0.0


def test_line_strength_independent_of_excited_sublevel():
    for Fg, Fe in itertools.product((3, 4), repeat=2):
        vals = [sum(dipole_amplitude(Fg, Mg, Fe, Me, q) ** 2 for Mg in range(-Fg, Fg + 1) for q in (-1, 0, 1))
                for Me in range(-Fe, Fe + 1)]
        assert np.ptp(vals) < 1e-12
        assert vals[0] == pytest.approx(relative_line_strength(Fg, Fe), abs=1e-12)
