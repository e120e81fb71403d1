"""Thermal averaging of the dressed susceptibility.

Shows the resonant absorption falling as the Doppler width grows, and how
little the answer moves between quadrature orders 64 and 128.

    python demos/doppler_average.py
"""
import numpy as np

from atdress import ControlField, DopplerConfig, build_scheme, chi_doppler

scheme = build_scheme(control=ControlField(-50.0, 15.0))
x = np.linspace(-80, 320, 801)

print(" sigma   max Im chi   |order64 - order128| / |chi|")
for sigma in (0.0, 0.5, 1.0, 2.0, 5.0):
    a = chi_doppler(x, scheme, doppler=DopplerConfig(True, sigma, 64))
    b = chi_doppler(x, scheme, doppler=DopplerConfig(True, sigma, 128))
    print(f"{sigma:6.1f}   {a.imag.max():10.4f}   {np.max(np.abs(a - b) / np.abs(b)):.1e}")
