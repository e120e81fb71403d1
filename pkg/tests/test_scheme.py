import cmath
import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atdress.angular import HalfInt, dipole_amplitude
from atdress.errors import InvalidArgument, SchemeError
from atdress.scheme import (CS_D1_SPLITTING, FULL, LAMBDA, ControlField, LevelConfig,
                            build_scheme, config_dict, parse_config, resolve_config, validate)
from atdress.susceptibility import chi_at

from oracles import dipole_bruteforce

CS = LevelConfig()


def test_cs_defaults():
    assert CS.nuclear_spin == HalfInt(7)
    assert CS.ground_F == HalfInt(8)
    # 1167.68 MHz excited hyperfine splitting over the 4.575 MHz natural linewidth
    assert CS_D1_SPLITTING == pytest.approx(255.2306, abs=1e-4)


def test_control_coupling_is_half_rabi():
    s = build_scheme(CS, ControlField(0, 15), FULL)
    assert s.V_n == 7.5
    assert s.E_n == 0 and s.E_m == 0 and s.E_mp == 0
    assert s.E_np == CS.hyperfine_splitting


def test_lambda_drops_second_excited_sublevel():
    s = build_scheme(CS, ControlField(0, 15), LAMBDA)
    assert s.V_np == 0 and s.c_np == 0
    assert s.V_n == 7.5


def test_coupling_ratio_matches_bruteforce_oracle():
    s = build_scheme(CS, ControlField(-50, 15), FULL)
    oracle = dipole_bruteforce(4, 2, 4, 3, 1) / dipole_bruteforce(4, 2, 3, 3, 1)
    assert (s.V_np / s.V_n).real == pytest.approx(oracle, rel=1e-12)
    assert s.c_n == pytest.approx(dipole_bruteforce(4, 4, 3, 3, -1), abs=1e-13)
    assert s.c_np == pytest.approx(dipole_bruteforce(4, 4, 4, 3, -1), abs=1e-13)


def test_probe_and_control_selection_rules():
    s = build_scheme(CS)
    # m = |4,4>, m' = |4,2>, excited M' = 3: sigma- probe, sigma+ control
    assert s.amplitudes["probe_n"] == dipole_amplitude(4, 4, 3, 3, -1)
    assert s.amplitudes["control_n"] == dipole_amplitude(4, 2, 3, 3, +1)
    assert dipole_amplitude(4, 4, 4, 5, +1) == 0.0  # control cannot act on m


def test_build_is_deterministic():
    a = build_scheme(CS, ControlField(12.5, 3.0), FULL)
    b = build_scheme(CS, ControlField(12.5, 3.0), FULL)
    assert a == b
    assert (a.V_n, a.V_np, a.c_n, a.c_np) == (b.V_n, b.V_np, b.c_n, b.c_np)


def test_well_formed_schemes_validate_clean():
    for model in (FULL, LAMBDA):
        for d in (-50, 0, 50):
            assert validate(build_scheme(CS, ControlField(d, 15), model)) == []


def test_lambda_with_second_coupling_is_flagged():
    s = dataclasses.replace(build_scheme(CS, ControlField(0, 15), LAMBDA), V_np=1.0)
    assert [v.code for v in validate(s)] == ["lambda-coupling-violation"]


def test_zero_splitting_is_degenerate():
    s = build_scheme(LevelConfig(hyperfine_splitting=0.0), ControlField(0, 15), FULL)
    assert [v.code for v in validate(s)] == ["degenerate-excited-manifold"]


def test_validation_codes_for_hand_built_defects():
    s = build_scheme(CS)
    codes = lambda x: {v.code for v in validate(x)}
    assert "ground-nondegenerate" in codes(dataclasses.replace(s, E_mp=0.3))
    assert "nonpositive-linewidth" in codes(dataclasses.replace(s, gamma=0.0))
    assert "probe-strength-range" in codes(dataclasses.replace(s, c_n=1.5))
    assert "coupling-mismatch" in codes(dataclasses.replace(s, V_n=7.0))
    assert "unknown-model" in codes(dataclasses.replace(s, model="vee"))


def test_validate_never_raises_on_garbage():
    s = dataclasses.replace(build_scheme(CS), model="nonsense", gamma=-1, c_n=0)
    out = validate(s)
    assert out and all(isinstance(v.code, str) for v in out)


def test_triangle_failure_is_a_scheme_error():
    with pytest.raises(SchemeError):
        # F=4 cannot reach F'=6 with a single photon
        build_scheme(LevelConfig(nuclear_spin="9/2", ground_F=4, excited_F_low=5, excited_F_high=6,
                                 Je="3/2"))
    with pytest.raises(SchemeError):
        LevelConfig(ground_F=5)


def test_unknown_model_rejected():
    with pytest.raises(InvalidArgument):
        build_scheme(CS, ControlField(), "vee")


def test_bad_control_rejected():
    with pytest.raises(InvalidArgument):
        ControlField(detuning=float("nan"))
    with pytest.raises(InvalidArgument):
        ControlField(rabi=-1)


dyadic = lambda lo, hi: st.integers(lo * 1024, hi * 1024).map(lambda k: k / 1024)


# energies on a 1/1024 lattice and integer offsets make the frame shift exact in
# floating point, so any difference comes from the implementation, not rounding
@settings(max_examples=60, deadline=None)
@given(dyadic(-300, 300), dyadic(-200, 200), dyadic(1, 40), st.integers(-1000, 1000))
def test_rotating_frame_invariance(dbar, delta, rabi, offset):
    for model in (FULL, LAMBDA):
        s = build_scheme(CS, ControlField(delta, rabi), model)
        a = chi_at(dbar, s)
        b = chi_at(dbar, s.shifted(offset))
        assert abs(a - b) <= 1e-12 * abs(a) + 1e-15


@settings(max_examples=60, deadline=None)
@given(st.floats(-300, 300), st.floats(-200, 200), st.floats(0.5, 40),
       st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_rephasing_invariance(dbar, delta, rabi, phi_n, phi_np):
    s = build_scheme(CS, ControlField(delta, rabi), FULL)
    pn, pnp = cmath.exp(1j * phi_n), cmath.exp(1j * phi_np)
    r = dataclasses.replace(s, V_n=s.V_n * pn, c_n=s.c_n * pn, V_np=s.V_np * pnp, c_np=s.c_np * pnp)
    assert validate(r) == []
    a, b = chi_at(dbar, s), chi_at(dbar, r)
    assert abs(a - b) <= 1e-12 * abs(a) + 1e-15


def test_config_parsing_and_precedence():
    text = """
    # cesium, detuned control
    control_detuning_gamma = -50
    rabi_gamma = 10   # overridden below
    model = lambda
    """
    raw = parse_config(text)
    assert raw == {"control_detuning_gamma": "-50", "rabi_gamma": "10", "model": "lambda"}
    level, control, model = resolve_config(raw, {"rabi_gamma": 15.0, "control_detuning_gamma": None})
    assert control == ControlField(-50.0, 15.0)
    assert model == LAMBDA
    assert level == CS
    assert config_dict(level, control, model)["nuclear_spin"] == "7/2"


def test_config_errors():
    with pytest.raises(InvalidArgument):
        parse_config("rabi_gamma 15")
    with pytest.raises(InvalidArgument):
        parse_config("laser_power = 3")
    with pytest.raises(InvalidArgument):
        resolve_config({"rabi_gamma": "fast"})
    with pytest.raises(InvalidArgument):
        resolve_config({"model": "vee"})


def test_config_roundtrip():
    level, control, model = resolve_config({"hyperfine_splitting_gamma": "300", "ground_F": "4"})
    again = resolve_config(config_dict(level, control, model))
    assert again == (level, control, model)
