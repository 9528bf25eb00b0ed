"""Rigorous lower bounds T >= sech^2((1/2w) * integral of V dr*).

The bounds use h = omega in the transfer-matrix bound, so the argument of
sech^2 is the barrier integral (1/2w) * int V dr*. Each family has a closed
form; :func:`bound_quadrature` evaluates the same integral numerically for any
family so the two routes can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DivergentIntegralError, ValidationError
from .geometry import (
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Mode,
    RNGeometry,
    TangherliniGeometry,
    dilatonic2p1_horizons,
    dilatonic3p1_horizons,
    rn_horizons,
    tangherlini_radius,
)
from .numerics import sech2
from .potentials import Channel, _dilatonic2p1_potential

CLOSED_FORM = "ClosedForm"
QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class BoundReport:
    bound: float
    barrier_integral: float
    method: str
    family: str
    params: dict
    omega: float
    angular: int
    error_estimate: float = 0.0
    breakdown: dict = field(default_factory=dict)
    flags: tuple = ()

    def row(self) -> dict:
        out = {"family": self.family, **self.params, "omega": self.omega, "angular": self.angular}
        out.update(
            method=self.method,
            barrier_integral=self.barrier_integral,
            bound=self.bound,
            error_estimate=self.error_estimate,
        )
        if self.flags:
            out["flags"] = ";".join(self.flags)
        return out


def _report(geom, omega, angular, z, method, **extra) -> BoundReport:
    return BoundReport(
        bound=sech2(z),
        barrier_integral=abs(z),
        method=method,
        family=geom.family,
        params=geom.params(),
        omega=omega,
        angular=angular,
        **extra,
    )


def _check_omega(omega):
    if not (isinstance(omega, (int, float)) and math.isfinite(omega) and omega > 0):
        raise ValidationError(f"omega must be positive, got {omega!r}")
    return float(omega)


def _check_angular(angular, name="l"):
    if isinstance(angular, bool) or not isinstance(angular, int) or angular < 0:
        raise ValidationError(f"{name} must be a non-negative integer, got {angular!r}")
    return angular


# --- closed forms ------------------------------------------------------------


def rn_bracket(geom: RNGeometry, l: int) -> float:
    """int V dr* for RN: l(l+1)/(GM + A) + (GM + 2A)/(3 (GM + A)^2)."""
    A = rn_horizons(geom).A
    GM = geom.GM
    return l * (l + 1) / (GM + A) + (GM + 2.0 * A) / (3.0 * (GM + A) ** 2)


def bound_rn_closed(geom: RNGeometry, l: int, omega: float) -> BoundReport:
    omega, l = _check_omega(omega), _check_angular(l)
    A = rn_horizons(geom).A
    r_plus = geom.GM + A
    # bracket / (2w) rearranged as (2l(l+1) + K) / (4 r+ w); at zero charge
    # A = GM exactly, K = 1 exactly, and this is the Schwarzschild expression
    # operation for operation, so the reduction holds bit for bit.
    K = 2.0 * (geom.GM + 2.0 * A) / (3.0 * r_plus)
    z = (2 * l * (l + 1) + K) / (4.0 * r_plus * omega)
    return _report(geom, omega, l, z, CLOSED_FORM)


def bound_schwarzschild(GM: float, l: int, omega: float) -> BoundReport:
    """sech^2[(2l(l+1) + 1) / (8 G M omega)]."""
    if not GM > 0:
        raise ValidationError(f"GM must be positive, got {GM!r}")
    omega, l = _check_omega(omega), _check_angular(l)
    z = (2 * l * (l + 1) + 1) / (8.0 * GM * omega)
    return BoundReport(
        bound=sech2(z),
        barrier_integral=z,
        method=CLOSED_FORM,
        family="schwarzschild",
        params={"GM": GM},
        omega=omega,
        angular=l,
    )


def bound_tangherlini_closed(geom: TangherliniGeometry, l: int, omega: float) -> BoundReport:
    """sech^2[((d-2)(d-3) + 4 l (l + d - 3)) / (8 omega r0)]."""
    omega, l = _check_omega(omega), _check_angular(l)
    d = geom.d
    z = ((d - 2) * (d - 3) + 4 * l * (l + d - 3)) / (8.0 * omega * tangherlini_radius(geom))
    return _report(geom, omega, l, z, CLOSED_FORM)


def dilatonic2p1_terms(geom: Dilatonic2p1Geometry, m: int, omega: float) -> dict:
    """The five grouped terms of the closed-form 2+1 argument, each divided by omega."""
    dilatonic2p1_horizons(geom)
    M, Q, Lam = geom.M, geom.Q, geom.Lam
    s = math.sqrt(M * M - 64.0 * Q * Q * Lam)
    ratio = (M + s - 8.0 * Lam) / (M + s + 8.0 * Lam)
    series = 23.0 / 15.0 - ratio - ratio**3 / 3.0 - ratio**5 / 5.0
    return {
        "constant": -272.0 * m * Lam * (4 * m + 3) / (15.0 * s) / omega,
        "inverse_r": 11.0 * M * (5.0 * M + 16.0 * m * m) / (96.0 * s) / omega,
        "series_mass": -(M + 2.0 * m * m) * series / omega,
        "series_quarter": 3.0 * M / 16.0 * series / omega,
        "charge": 6.0 * Lam * Q * Q / (M + s) / omega,
    }


def bound_dilatonic2p1_closed(geom: Dilatonic2p1Geometry, m: int, omega: float) -> BoundReport:
    """Term-by-term evaluation of the 2+1 closed form.

    The grouped terms are kept in ``breakdown``; ``argument`` is the signed sum.
    A negative argument is flagged (sech^2 is even, the bound is unaffected).
    For m != 0 the defining integral diverges, which is flagged as well.
    """
    omega, m = _check_omega(omega), _check_angular(m, "m")
    terms = dilatonic2p1_terms(geom, m, omega)
    z = math.fsum(terms.values())
    flags = []
    if z < 0:
        flags.append("negative_argument")
    if m != 0:
        flags.append("integral_diverges_for_nonzero_m")
    breakdown = dict(terms, argument=z)
    return _report(geom, omega, m, z, CLOSED_FORM, breakdown=breakdown, flags=tuple(flags))


def dilatonic3p1_argument(geom: Dilatonic3p1Geometry, l: int, omega: float) -> float:
    """(l(l+1) M / (2 omega Q^2)) ln(2M^2 / (2M^2 - Q^2)), with its Q -> 0 limit."""
    dilatonic3p1_horizons(geom)
    M, Q2 = geom.M, geom.Q**2
    ll = l * (l + 1)
    if Q2 == 0.0:
        return ll / (4.0 * M * omega)
    x = Q2 / (2.0 * M * M)
    return ll * M / (2.0 * omega * Q2) * -math.log1p(-x)


def bound_dilatonic3p1_closed(geom: Dilatonic3p1Geometry, l: int, omega: float) -> BoundReport:
    omega, l = _check_omega(omega), _check_angular(l)
    return _report(geom, omega, l, dilatonic3p1_argument(geom, l, omega), CLOSED_FORM)


def dilatonic3p1_product_form(geom: Dilatonic3p1Geometry, l: int, omega: float) -> float:
    """The product form 4 a^k b^k / (a^k + b^k)^2; raises OverflowError for large k."""
    dilatonic3p1_horizons(geom)
    M, Q2 = geom.M, geom.Q**2
    k = l * (l + 1) * M / (omega * Q2)
    a, b = 2.0 * M * M, 2.0 * M * M - Q2
    ak, bk = a**k, b**k
    if not (math.isfinite(ak) and math.isfinite(bk)):
        raise OverflowError("product form overflows")
    return 4.0 * ak * bk / (ak + bk) ** 2


def closed_form_bound(geom, mode: Mode) -> BoundReport:
    if isinstance(geom, RNGeometry):
        return bound_rn_closed(geom, mode.angular, mode.omega)
    if isinstance(geom, TangherliniGeometry):
        return bound_tangherlini_closed(geom, mode.angular, mode.omega)
    if isinstance(geom, Dilatonic2p1Geometry):
        return bound_dilatonic2p1_closed(geom, mode.angular, mode.omega)
    if isinstance(geom, Dilatonic3p1Geometry):
        return bound_dilatonic3p1_closed(geom, mode.angular, mode.omega)
    raise TypeError(f"unsupported geometry {type(geom).__name__}")


# --- quadrature --------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-10
    epsrel: float = 1e-8
    limit: int = 400
    horizon_offset: float = 1e-6
    min_horizon_offset: float = 1e-13
    initial_rmax: float = 50.0
    max_rmax: float = 1e40


def _check_dilatonic2p1_convergence(geom, m, linearized):
    if not linearized:
        raise DivergentIntegralError(
            "the 14 Lam^2 r term grows linearly and its integral against dr* diverges",
            term="14*Lam^2*r",
        )
    if m != 0:
        raise DivergentIntegralError(
            "the constant term -(8 m^2 Lam + 6 m Lam) integrated against dr* ~ dr/(4 Lam r) "
            "diverges logarithmically at large r",
            term="-(8*m^2*Lam+6*m*Lam)",
        )
    r_plus, r_minus = dilatonic2p1_horizons(geom)
    v_h = _dilatonic2p1_potential(geom, 0, r_plus)
    M, Q2 = geom.M, geom.Q**2
    scale = max(5 * M * M / 8 / r_plus, 4 * M * Q2 / r_plus**2, 6 * Q2 * Q2 / r_plus**3)
    if abs(v_h) > 1e-12 * scale:
        raise DivergentIntegralError(
            f"V(r_plus) = {v_h:.6g} != 0 while dr*/dr ~ r+/(4 Lam (r+ - r-)(r - r+)); "
            "the integral diverges logarithmically at the horizon",
            term="horizon:V(r_plus)",
        )


def barrier_quadrature(channel: Channel, config: QuadratureConfig | None = None):
    """int_{r_h}^inf V dr* by adaptive Gauss-Kronrod in s, r = r_h (1 + e^s).

    Returns (integral, error_estimate). The horizon cut-off and the outer radius
    are pushed until the neglected end pieces are below 0.1 * epsabs each.
    """
    cfg = config or QuadratureConfig()
    rh = channel.horizon

    def piece_at(eps):
        r = rh * (1.0 + eps)
        return abs(float(channel.density(r))) * eps * rh

    eps = cfg.horizon_offset
    while piece_at(eps) >= 0.1 * cfg.epsabs and eps > cfg.min_horizon_offset:
        eps /= 10.0
    head = piece_at(eps)

    R = cfg.initial_rmax * rh
    while True:
        d1, d2 = abs(float(channel.density(R))), abs(float(channel.density(2.0 * R)))
        if d1 == 0.0:
            tail = 0.0
            break
        if d2 == 0.0:
            decay = np.inf
        else:
            decay = math.log(d1 / d2) / math.log(2.0)
        if decay <= 1.05:
            raise DivergentIntegralError(
                f"integrand decays like r^-{decay:.3g}; the tail does not converge",
                term="tail",
            )
        tail = d1 * R / (decay - 1.0) if math.isfinite(decay) else 0.0
        if tail < 0.1 * cfg.epsabs:
            break
        R *= 4.0
        if R > cfg.max_rmax * rh:
            raise DivergentIntegralError("tail did not fall below tolerance", term="tail")

    def integrand(s):
        e = math.exp(s)
        return float(channel.density(rh * (1.0 + e))) * rh * e

    s_lo, s_hi = math.log(eps), math.log(R / rh - 1.0)
    cuts = [s_lo] + [c for c in (-2.0, 0.0, 2.0) if s_lo < c < s_hi] + [s_hi]
    total, err = 0.0, 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, e = integrate.quad(
            integrand, a, b, epsabs=cfg.epsabs / len(cuts), epsrel=cfg.epsrel, limit=cfg.limit
        )
        total += val
        err += e
    if err > max(cfg.epsabs, cfg.epsrel * abs(total)):
        raise ConvergenceError(
            f"quadrature error {err:.3g} above tolerance", diagnostics={"integral": total}
        )
    return total, err + head + tail


def bound_quadrature(
    geom, mode: Mode, config: QuadratureConfig | None = None, *, linearized: bool = True
) -> BoundReport:
    """Numerical barrier integral for any family (2+1 only when it converges)."""
    if isinstance(geom, Dilatonic2p1Geometry):
        _check_dilatonic2p1_convergence(geom, mode.angular, linearized)
    channel = Channel(geom, mode.angular, linearized=linearized)
    integral, err = barrier_quadrature(channel, config)
    z = integral / (2.0 * mode.omega)
    return _report(
        geom, mode.omega, mode.angular, z, QUADRATURE, error_estimate=err / (2.0 * mode.omega)
    )


def dilatonic2p1_comparison(geom: Dilatonic2p1Geometry, omega: float, m: int = 0) -> dict:
    """Closed form next to the quadrature value of the same integral.

    Records the relative discrepancy when the integral converges and the
    divergent term otherwise; never asserts agreement.
    """
    closed = bound_dilatonic2p1_closed(geom, m, omega)
    out = {"closed_form": closed, "quadrature": None, "divergent_term": None,
           "relative_discrepancy": math.inf}
    try:
        quad = bound_quadrature(geom, Mode(omega, m))
    except DivergentIntegralError as exc:
        out["divergent_term"] = exc.term
        return out
    out["quadrature"] = quad
    denom = abs(quad.barrier_integral) or 1.0
    out["relative_discrepancy"] = abs(closed.breakdown["argument"] - quad.barrier_integral) / denom
    return out
