"""Angular couplings behind the four-level scheme.

Prints the dipole amplitudes that set the probe and control strengths and the
control-coupling ratio between the two excited hyperfine levels.

    python demos/couplings.py
"""
from atdress import build_scheme, dipole_amplitude, relative_line_strength

for Fe in (3, 4):
    print(f"<4,4| d_-1 |{Fe},3> = {dipole_amplitude(4, 4, Fe, 3, -1):+.6f}   "
          f"<4,2| d_+1 |{Fe},3> = {dipole_amplitude(4, 2, Fe, 3, 1):+.6f}")
print(f"relative line strength F=4 -> F'=3: {relative_line_strength(4, 3):.4f}")

s = build_scheme()
print(f"V_n = {s.V_n:.4f}, V_n' = {s.V_np:.4f}, ratio = {s.V_np / s.V_n:.10f}")
