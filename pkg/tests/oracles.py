"""Reference computations that share no code with the package.

Metric functions, potentials and integrals are written out again here from
their definitions and evaluated with mpmath at 40 digits, or by integrating
the original second-order mode equations directly.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

mp.mp.dps = 40


def mp_sech2(z):
    return mp.sech(mp.mpf(z)) ** 2


# --- metric functions (G = 1 unless given) -----------------------------------


def rn_lapse(M, Q, P=0, G=1):
    return lambda r: 1 - 2 * G * M / r + G * (Q**2 + P**2) / r**2


def rn_horizon(M, Q, P=0, G=1):
    M, Q, P, G = map(mp.mpf, (M, Q, P, G))
    return G * M + mp.sqrt(G**2 * M**2 - G * (Q**2 + P**2))


def tangherlini_r0(d, M, G=1):
    d, M, G = int(d), mp.mpf(M), mp.mpf(G)
    omega = 2 * mp.pi ** ((d - 1) / mp.mpf(2)) / mp.gamma((d - 1) / mp.mpf(2))
    return (16 * mp.pi * G * M / ((d - 2) * omega)) ** (1 / mp.mpf(d - 3))


# --- barrier integrals by mpmath quadrature ----------------------------------


def rn_barrier(M, Q, P, l, G=1):
    """int V dr* = int_{r+}^inf V / Delta dr."""
    M, Q, P, G = map(mp.mpf, (M, Q, P, G))
    rp = rn_horizon(M, Q, P, G)
    q = G * (Q**2 + P**2)

    def integrand(r):
        # V / Delta with Delta cancelled analytically
        dprime = 2 * G * M / r**2 - 2 * q / r**3
        return l * (l + 1) / r**2 + dprime / r

    return mp.quad(integrand, [rp, 2 * rp, 10 * rp, mp.inf])


def tangherlini_barrier(d, M, l):
    r0 = tangherlini_r0(d, M)
    n = d - 3

    def integrand(r):
        f = 1 - (r0 / r) ** n
        fp = n * (r0 / r) ** n / r
        return (d - 2) * (d - 4) / mp.mpf(4) * f / r**2 + (d - 2) / mp.mpf(2) * fp / r \
            + l * (l + d - 3) / r**2

    return mp.quad(integrand, [r0, 2 * r0, 10 * r0, mp.inf])


def dilatonic3p1_barrier(M, Q, l):
    M, Q = mp.mpf(M), mp.mpf(Q)
    rp, rm = 2 * M, Q**2 / M
    return mp.quad(lambda r: l * (l + 1) / (r * (r - rm)), [rp, 10 * rp, mp.inf])


# --- exact 2+1 transmission at high precision --------------------------------


def exact_2p1(m, Lam, omega):
    """1 - |cosh(a - b)|^2 / |cosh(a + b)|^2 with complex b allowed."""
    m, Lam, omega = mp.mpf(m), mp.mpf(Lam), mp.mpf(omega)
    a = mp.pi * omega / (4 * Lam)
    b = mp.pi / 2 * mp.sqrt(mp.mpc((omega**2 - 8 * m**2 * Lam) / (4 * Lam**2) - 1))
    return 1 - abs(mp.cosh(a - b)) ** 2 / abs(mp.cosh(a + b)) ** 2


# --- brute-force scattering --------------------------------------------------


def brute_transmission(kind, params, l, omega, r_out_factor=3000.0, rtol=1e-11):
    """Integrate the original mode equation in s = ln(r - r_h) and read off T.

    kind: "rn" (psi'' + (w^2 - V) psi = 0) or "dilatonic3p1" (the radial
    equation with its first-derivative term, u'' + p u' + (w^2 - V) u = 0,
    whose conserved flux carries the weight R^2).
    """
    if kind == "rn":
        M, Q = params["M"], params["Q"]
        rh = float(rn_horizon(M, Q))
        rm = (Q * Q) / rh
        lapse = lambda r: (r - rh) * (r - rm) / r**2  # noqa: E731
        jac_s = lambda r: r * r / (r - rm)  # noqa: E731  dr*/ds with ds = dr/(r - rh)

        def coeffs(r):
            dl = 2 * M / r**2 - 2 * Q * Q / r**3
            f = lapse(r)
            return 0.0, l * (l + 1) * f / r**2 + f * dl / r

        weight = lambda r: 1.0  # noqa: E731
        tort = lambda r: r + (rh**2 * math.log(r - rh) - rm**2 * math.log(r - rm)) / (rh - rm)  # noqa: E731
    elif kind == "dilatonic3p1":
        M, Q = params["M"], params["Q"]
        rh, rm = 2.0 * M, Q * Q / M
        jac_s = lambda r: r  # noqa: E731  (r - rh) / f

        def coeffs(r):
            f = 1 - rh / r
            R2 = r * (r - rm)
            p = (r - rh) * (2 * r - rm) / (r * r * (r - rm))
            return p, l * (l + 1) * f / R2

        weight = lambda r: r * (r - rm)  # noqa: E731
        tort = lambda r: r + rh * math.log(r - rh)  # noqa: E731
    else:
        raise ValueError(kind)

    s0 = math.log(rh * 1e-7)
    r0 = rh + math.exp(s0)
    x0 = tort(r0)
    u0 = complex(math.cos(omega * x0), -math.sin(omega * x0))

    def rhs(s, y):
        r = rh + math.exp(s)
        j = jac_s(r)
        p, V = coeffs(r)
        u, du = y  # du = du/dr*
        return [j * du, j * (-p * du - (omega * omega - V) * u)]

    s1 = math.log(rh * r_out_factor)
    sol = solve_ivp(rhs, (s0, s1), [u0, -1j * omega * u0], method="DOP853", rtol=rtol, atol=1e-14)
    u, du = sol.y[0, -1], sol.y[1, -1]
    r1 = rh + math.exp(s1)
    x1 = tort(r1)
    # w = sqrt(weight) u behaves as a plane wave far out
    sw = math.sqrt(weight(r1))
    dsw = (sw - math.sqrt(weight(r1 * (1 - 1e-7)))) / (r1 * 1e-7)  # d sqrt(weight)/dr
    f1 = 1.0 / (jac_s(r1) / (r1 - rh))
    w = sw * u
    dw = dsw * f1 * u + sw * du
    a_in = 0.5 * (w - dw / (1j * omega)) * np.exp(1j * omega * x1)
    return weight(r0) / abs(a_in) ** 2
