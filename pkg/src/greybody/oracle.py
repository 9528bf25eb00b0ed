"""Direct numerical transmission coefficients for the Schrodinger-form mode equation.

psi'' + (w^2 - V) psi = 0 is integrated outward in r from just outside the
horizon, starting from the purely ingoing solution psi = e^{-i w r*}.

The unknown is carried as slowly varying amplitudes rather than psi itself:

* inner region, plane-wave basis: psi = a e^{i w x} + b e^{-i w x},
  a' = V (a + b e^{-2iwx}) / (2iw),  b' = -V (a e^{2iwx} + b) / (2iw);
* outer region (V <= switch_ratio * w^2 beyond the barrier peak),
  Liouville-Green basis: psi = k^{-1/2} (alpha e^{iS} + beta e^{-iS}), S' = k,
  k = sqrt(w^2 - V),  alpha' = (k'/2k) beta e^{-2iS},  beta' = (k'/2k) alpha e^{2iS}.

The fluxes w (|b|^2 - |a|^2) and |beta|^2 - |alpha|^2 are conserved exactly, so the flux residual measures the
integration error only. The horizon and infinity ends are closed with one step
of integration by parts on the oscillatory coupling integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import ConvergenceError, UnsupportedFamilyError, ValidationError
from .geometry import Dilatonic2p1Geometry, Extremality, Mode, RNGeometry, classify
from .potentials import Channel


@dataclass(frozen=True)
class OracleConfig:
    rtol: float = 1e-10
    atol: float = 1e-14
    horizon_offset: float = 1e-6
    tail_cut: float = 1e-8
    switch_ratio: float = 0.5
    method: str = "DOP853"
    flux_factor: float = 10.0
    max_refinements: int = 2

    def refined(self, factor=0.5):
        return OracleConfig(
            rtol=self.rtol * factor,
            atol=self.atol * factor,
            horizon_offset=self.horizon_offset,
            tail_cut=self.tail_cut,
            switch_ratio=self.switch_ratio,
            method=self.method,
            flux_factor=self.flux_factor,
            max_refinements=self.max_refinements,
        )


@dataclass(frozen=True)
class OracleResult:
    T: float
    R: float
    flux_residual: float
    r_match_inner: float
    r_match_outer: float
    integrator_tolerance: float
    r_switch: float = math.nan
    nfev: int = 0

    def row(self) -> dict:
        return {
            "oracle_T": self.T,
            "oracle_R": self.R,
            "flux_residual": self.flux_residual,
            "r_match_inner": self.r_match_inner,
            "r_match_outer": self.r_match_outer,
            "integrator_tolerance": self.integrator_tolerance,
        }


def _channel(geom, mode):
    if isinstance(geom, Dilatonic2p1Geometry):
        raise UnsupportedFamilyError(
            "the 2+1 dilatonic potential does not vanish at both ends; "
            "use the exact transmission coefficient instead"
        )
    if isinstance(geom, RNGeometry) and classify(geom) is not Extremality.SUB_EXTREMAL:
        raise ValidationError("the scattering oracle needs a sub-extremal RN geometry")
    return Channel(geom, mode.angular, schrodinger=True)


def _switch_radius(ch, omega, r_in, ratio):
    """First radius beyond the barrier peak where V <= ratio * w^2."""
    rh = ch.horizon
    grid = rh + (r_in - rh) * np.geomspace(1.0, 1e12, 600)
    V = ch.potential(grid)
    level = ratio * omega * omega
    peak = int(np.argmax(V))
    if V[peak] <= level:
        return r_in
    above = np.nonzero(V[peak:] <= level)[0]
    if above.size == 0:
        raise ConvergenceError("potential does not fall below the switch level")
    j = peak + int(above[0])
    return brentq(lambda r: ch.potential(r) - level, grid[j - 1], grid[j], xtol=1e-12 * grid[j])


def _outer_radius(ch, omega, r_start, tail_cut):
    """Smallest radius (geometric search) where the second integration-by-parts
    term of the remaining coupling integral is below ``tail_cut``."""
    r = max(r_start, 2.0 * ch.horizon)
    while r < 1e30 * ch.horizon:
        k2 = omega * omega - ch.potential(r)
        if k2 > 0:
            c = abs(ch.potential_slope(r) / ch.jacobian(r)) / (4.0 * k2)
            k = math.sqrt(k2)
            if 3.0 * c / (4.0 * k2 * r) <= tail_cut and c / (2.0 * k) <= 1e-2:
                return r
        r *= 1.2
    raise ConvergenceError("could not find an outer matching radius")


def _integrate(ch, mode, cfg):
    omega = mode.omega
    rh = ch.horizon
    w2 = omega * omega
    r_in = rh * (1.0 + cfg.horizon_offset)
    r_sw = _switch_radius(ch, omega, r_in, cfg.switch_ratio)
    r_out = _outer_radius(ch, omega, max(r_sw, r_in), cfg.tail_cut)
    nfev = 0

    # neglected piece between the horizon and r_in: V ~ V_in e^{2 kappa (x - x_in)}
    x_in = float(ch.tortoise(r_in))
    v_in = float(ch.potential(r_in))
    two_kappa = 1.0 / (float(ch.jacobian(r_in)) * (r_in - rh))
    a0 = v_in * np.exp(-2j * omega * x_in) / ((2j * omega) * (two_kappa - 2j * omega))
    # the exact ingoing solution carries unit flux: |b|^2 - |a|^2 = 1
    a, b = complex(a0), complex(math.sqrt(1.0 + abs(a0) ** 2))

    def plane_rhs(s, y):
        e = math.exp(s)
        r = rh * (1.0 + e)
        g = float(ch.density(r)) * rh * e / (2j * omega)
        ph = np.exp(-2j * omega * float(ch.tortoise(r)))
        return [g * (y[0] + y[1] * ph), -g * (y[0] / ph + y[1])]

    s_in = math.log(cfg.horizon_offset)
    if r_sw > r_in:
        s_sw = math.log(r_sw / rh - 1.0)
        sol = solve_ivp(plane_rhs, (s_in, s_sw), [a, b], method=cfg.method,
                        rtol=cfg.rtol, atol=cfg.atol)
        if not sol.success:
            raise ConvergenceError(f"inner integration failed: {sol.message}")
        nfev += sol.nfev
        a, b = sol.y[0, -1], sol.y[1, -1]
        r0 = r_sw
    else:
        r0 = r_in

    # change of basis at r0
    x0 = float(ch.tortoise(r0))
    k0 = math.sqrt(w2 - float(ch.potential(r0)))
    psi = a * np.exp(1j * omega * x0) + b * np.exp(-1j * omega * x0)
    dpsi = 1j * omega * (a * np.exp(1j * omega * x0) - b * np.exp(-1j * omega * x0))
    S0 = omega * x0
    sk = math.sqrt(k0)
    alpha = 0.5 * (sk * psi - 1j * dpsi / sk) * np.exp(-1j * S0)
    beta = 0.5 * (sk * psi + 1j * dpsi / sk) * np.exp(1j * S0)

    def lg_rhs(s, y):
        e = math.exp(s)
        r = rh * (1.0 + e)
        k2 = w2 - float(ch.potential(r))
        if k2 <= 0:
            raise ConvergenceError("turning point inside the Liouville-Green region")
        dr = rh * e
        c = -float(ch.potential_slope(r)) * dr / (4.0 * k2)
        ph = np.exp(-2j * y[2].real)
        return [c * y[1] * ph, c * y[0] / ph, math.sqrt(k2) * float(ch.jacobian(r)) * dr]

    s0 = math.log(r0 / rh - 1.0)
    s_out = math.log(r_out / rh - 1.0)
    sol = solve_ivp(lg_rhs, (s0, s_out), [alpha, beta, S0 + 0j], method=cfg.method,
                    rtol=cfg.rtol, atol=cfg.atol)
    if not sol.success:
        raise ConvergenceError(f"outer integration failed: {sol.message}")
    nfev += sol.nfev
    alpha, beta, S = sol.y[0, -1], sol.y[1, -1], sol.y[2, -1].real

    # remaining coupling integrals beyond r_out, first integration-by-parts term
    k2 = w2 - float(ch.potential(r_out))
    k = math.sqrt(k2)
    c_x = -float(ch.potential_slope(r_out)) / float(ch.jacobian(r_out)) / (4.0 * k2)
    d_alpha = c_x * beta * np.exp(-2j * S) / (2j * k)
    d_beta = -c_x * alpha * np.exp(2j * S) / (2j * k)
    alpha, beta = alpha + d_alpha, beta + d_beta

    # psi -> w^{-1/2} (alpha e^{iwx} + beta e^{-iwx}) at infinity
    nb2 = abs(beta) ** 2
    T = omega / nb2
    R = abs(alpha) ** 2 / nb2
    residual = abs(T + R - 1.0)
    return OracleResult(
        T=min(max(T, 0.0), 1.0),
        R=min(max(R, 0.0), 1.0),
        flux_residual=residual,
        r_match_inner=r_in,
        r_match_outer=r_out,
        integrator_tolerance=cfg.rtol,
        r_switch=r0,
        nfev=nfev,
    )


def transmission_numeric(geom, mode: Mode, config: OracleConfig | None = None) -> OracleResult:
    """Flux-normalised transmission and reflection probabilities.

    Supported families: RN (sub-extremal), Tangherlini, 3+1 dilatonic. For the
    3+1 dilatonic family the radial equation with its first-derivative term is
    brought to Schrodinger form by psi = R u, which adds R_{r*r*}/R to the
    potential and leaves the flux-normalised T unchanged.
    """
    cfg = config or OracleConfig()
    ch = _channel(geom, mode)
    for _ in range(cfg.max_refinements + 1):
        res = _integrate(ch, mode, cfg)
        if res.flux_residual <= cfg.flux_factor * cfg.rtol:
            return res
        cfg = cfg.refined(0.1)
    raise ConvergenceError(
        f"flux residual {res.flux_residual:.3g} above {cfg.flux_factor} x rtol after refinement",
        diagnostics=res.row(),
    )
