"""Delaying a Gaussian pulse with the Autler-Townes window.

Sweeps carrier detuning and pulse width for a blue-detuned control, then
prints the operating point with the best delay-transmission product.

    python demos/slow_light.py
"""
import numpy as np

from atdress import ControlField, MediumConfig, build_scheme, sweep_operating_points
from atdress.propagation import best_operating_point

medium = MediumConfig(25.0, build_scheme(control=ControlField(50.0, 15.0)))
rows = sweep_operating_points(medium, np.arange(46.0, 50.01, 0.5), [2.0, 4.0, 6.0, 8.0], 2 ** 13)

print("carrier  fwhm   T      delay  delay/fwhm")
for r in rows:
    print(f"{r.carrier_detuning:7.2f} {r.fwhm:5.1f} {r.transmission:6.3f} {r.centroid_delay:6.2f} "
          f"{r.fractional_delay:8.3f}")

best = best_operating_point(rows, (0.83, 0.97))
print(f"\nbest in 0.83 <= T <= 0.97: carrier {best.carrier_detuning} gamma, fwhm {best.fwhm} (1/gamma), "
      f"T {best.transmission:.3f}, delay/fwhm {best.fractional_delay:.2f}")
