"""Independent reference computations used by the tests.

Nothing here calls into atdress' numerics: angular values come from sympy's
exact-rational implementation, Green functions from direct inversion of the
3x3 non-Hermitian Hamiltonian in extended precision, poles from numpy.roots on the expanded cubic,
and Doppler profiles from adaptive quadrature.
"""
from fractions import Fraction

import mpmath
import numpy as np
from scipy.integrate import quad
from sympy import Rational, S, sqrt
from sympy.physics.quantum.cg import CG
from sympy.physics.wigner import wigner_3j, wigner_6j


def rat(x):
    f = Fraction(x).limit_denominator(4)
    return Rational(f.numerator, f.denominator)


def threej(j1, j2, j3, m1, m2, m3):
    return float(wigner_3j(*(rat(v) for v in (j1, j2, j3, m1, m2, m3))))


def sixj(*js):
    try:
        return float(wigner_6j(*(rat(v) for v in js)))
    except ValueError:  # sympy raises on triangle violations
        return 0.0


def _ms(j):
    j = rat(j)
    return [j - k for k in range(int(2 * j) + 1)]


def hyperfine_state(F, M, J, I):
    """|(J I) F M> as {(mJ, mI): coefficient} in the uncoupled basis."""
    F, M, J, I = map(rat, (F, M, J, I))
    out = {}
    for mJ in _ms(J):
        mI = M - mJ
        if abs(mI) > I:
            continue
        c = CG(J, mJ, I, mI, F, M).doit()
        if c != 0:
            out[(mJ, mI)] = c
    return out


def electron_dipole(Je, me, Jg, mg, q):
    Je, me, Jg, mg = map(rat, (Je, me, Jg, mg))
    return (-1) ** (Je - me) * wigner_3j(Je, 1, Jg, -me, q, mg) * sqrt(2 * Je + 1)


def dipole_bruteforce(Fg, Mg, Fe, Me, q, I=3.5, Jg=0.5, Je=0.5):
    """<Fe Me|d_q|Fg Mg> by expanding both states over |J mJ>|I mI>; d acts on the electron only."""
    ge = hyperfine_state(Fe, Me, Je, I)
    gg = hyperfine_state(Fg, Mg, Jg, I)
    total = S(0)
    for (me, mIe), ce in ge.items():
        for (mg, mIg), cg in gg.items():
            if mIe == mIg:
                total += ce * cg * electron_dipole(Je, me, Jg, mg, q)
    return float(total)


def _mpc(z):
    z = complex(z)
    return mpmath.mpc(z.real, z.imag)


def green_direct(E, E_n, E_np, V_n, V_np, omega, gamma=1.0, E_mp=0.0):
    """Upper-left 2x2 block of (E - H)^-1 over (n, n', m'+photon), in 40-digit arithmetic."""
    with mpmath.workdps(40):
        E, E_n, E_np, V_n, V_np, w = map(_mpc, (E, E_n, E_np, V_n, V_np, E_mp + omega))
        hg = mpmath.mpf(gamma) / 2
        H = mpmath.matrix([[E_n - 1j * hg, 0, V_n],
                           [0, E_np - 1j * hg, V_np],
                           [mpmath.conj(V_n), mpmath.conj(V_np), w]])
        G = (E * mpmath.eye(3) - H) ** -1
        return np.array([[complex(G[i, j]) for j in range(2)] for i in range(2)])


def _gnn_polys(E_n, E_np, V_n, V_np, omega, gamma):
    """Coefficient lists (highest first) of G_nn's numerator quadratic and denominator cubic."""
    a = [mpmath.mpf(1), -(_mpc(E_n) - 0.5j * gamma)]
    b = [mpmath.mpf(1), -(_mpc(E_np) - 0.5j * gamma)]
    w = [mpmath.mpf(1), -_mpc(omega)]

    def mul(p, q):
        out = [mpmath.mpf(0)] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return out

    def sub(p, q):
        q = [0] * (len(p) - len(q)) + list(q)
        return [x - y for x, y in zip(p, q)]

    vn2, vnp2 = abs(_mpc(V_n)) ** 2, abs(_mpc(V_np)) ** 2
    quadratic = sub(mul(b, w), [vnp2])
    cubic = sub(sub(mul(mul(a, b), w), [vnp2 * x for x in a]), [vn2 * x for x in b])
    return quadratic, cubic


def gnn_cubic_coefficients(E_n, E_np, V_n, V_np, omega, gamma=1.0):
    """Coefficients (highest first) of the cubic whose roots are the poles of G_nn."""
    with mpmath.workdps(40):
        return np.array([complex(c) for c in _gnn_polys(E_n, E_np, V_n, V_np, omega, gamma)[1]])


def gnn_expanded(E, E_n, E_np, V_n, V_np, omega, gamma=1.0):
    """G_nn as a ratio of expanded polynomials, quadratic / cubic, in 40-digit arithmetic."""
    with mpmath.workdps(40):
        quadratic, cubic = _gnn_polys(E_n, E_np, V_n, V_np, omega, gamma)
        x = _mpc(E)
        return complex(mpmath.polyval(quadratic, x) / mpmath.polyval(cubic, x))


def lambda_chi(dbar, delta, rabi, c2=1.0):
    """Closed-form three-level (lambda) susceptibility; the dark point dbar = delta gives 0."""
    with np.errstate(divide="ignore", over="ignore"):
        return -0.75 * c2 / (dbar + 0.5j - (rabi ** 2 / 4) / (np.asarray(dbar) - delta))


def two_level_resonant_chi():
    """Resonant Im chi of a closed two-level line, in units n0 (lambda/2pi)^3.

    chi'' = n0 sigma0 / (4 pi k) with sigma0 = 3 lambda^2 / (2 pi), k = 2 pi / lambda.
    """
    lam = 1.0
    n0 = 1.0
    sigma0 = 3 * lam ** 2 / (2 * np.pi)
    k = 2 * np.pi / lam
    return n0 * sigma0 / (4 * np.pi * k) / (n0 * (lam / (2 * np.pi)) ** 3)


def voigt_convolution(dbar, sigma, centers, weights, gamma=1.0):
    """sum_i w_i * (-3/4) / (dbar - x - c_i + i gamma/2) averaged over x ~ N(0, sigma^2)."""
    def integrand(x, part):
        val = sum(-0.75 * w / (dbar - x - c + 0.5j * gamma) for c, w in zip(centers, weights))
        dens = np.exp(-0.5 * (x / sigma) ** 2) / (np.sqrt(2 * np.pi) * sigma)
        return (val.real if part == 0 else val.imag) * dens
    pts = sorted({dbar - c for c in centers})
    lim = 12 * sigma
    re = quad(integrand, -lim, lim, args=(0,), points=[p for p in pts if -lim < p < lim],
              limit=500, epsabs=1e-14, epsrel=1e-12)[0]
    im = quad(integrand, -lim, lim, args=(1,), points=[p for p in pts if -lim < p < lim],
              limit=500, epsabs=1e-14, epsrel=1e-12)[0]
    return re + 1j * im
