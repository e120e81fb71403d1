"""Probe absorption of the dressed doublet, printed as text.

Compares the four-level model with its three-level (Lambda) reduction for a
resonant and two detuned control fields, then locates the transparency dip.

    python demos/dressed_spectra.py
"""
from atdress import FULL, LAMBDA, ControlField, LevelConfig, build_scheme, eit_minimum, find_peaks, spectrum

level = LevelConfig()

for delta in (0.0, -50.0, 50.0):
    print(f"control detuning {delta:+.0f} gamma, Rabi 15 gamma")
    for model in (FULL, LAMBDA):
        scheme = build_scheme(level, ControlField(delta, 15.0), model)
        spec = spectrum((-80, 320, 40001), scheme)
        peaks = ", ".join(f"{p.position:8.2f} (h {p.height:.3f})" for p in find_peaks(spec))
        print(f"  {model:6s} peaks: {peaks}")
    print()

for model in (LAMBDA, FULL):
    m = eit_minimum(build_scheme(level, ControlField(0.0, 15.0), model))
    print(f"transparency dip, {model:6s}: position {m.position:+.4f} gamma, Im chi {m.value:.2e}")
