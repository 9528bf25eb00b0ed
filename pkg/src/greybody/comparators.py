"""Transmission estimates the bounds are compared against.

Three formulas: the semiclassical tunnelling estimate for RN, the large-omega
asymptotic formula for RN (electric charge only), and the exact transmission
coefficient of the 2+1 dilatonic black hole. The first two are reported as
computed even when they leave [0, 1]; ``out_of_range`` marks those cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    ExtremalSingularityError,
    NoHorizonError,
    RadicandError,
    UnsupportedChargeError,
    ValidationError,
)
from .geometry import Dilatonic2p1Geometry, Extremality, RNGeometry, classify

WKB = "WKB"
ASYMPTOTIC = "Asymptotic"
EXACT_2P1 = "Exact2p1"


@dataclass(frozen=True)
class WKBConfig:
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValidationError(f"hbar must be positive, got {self.hbar!r}")


@dataclass(frozen=True)
class ComparatorEstimate:
    value: float
    method: str
    intermediates: dict = field(default_factory=dict)
    flags: tuple = ()

    @property
    def out_of_range(self) -> bool:
        return not (0.0 <= self.value <= 1.0)

    def row(self) -> dict:
        out = {"method": self.method, "value": self.value, "out_of_range": self.out_of_range}
        out.update(self.intermediates)
        if self.flags:
            out["flags"] = ";".join(self.flags)
        return out


def _positive_omega(omega):
    if not (isinstance(omega, (int, float)) and math.isfinite(omega) and omega > 0):
        raise ValidationError(f"omega must be positive, got {omega!r}")
    return float(omega)


def wkb_rn(geom: RNGeometry, omega: float, config: WKBConfig | None = None) -> ComparatorEstimate:
    """exp(-(2 pi / hbar) E) with the tunnelling exponent E exactly as derived:

    E = 2 G w (M - w/2) - (M - w) sqrt(G^2 (M - w)^2 - Gq) + M sqrt(G^2 M^2 - Gq),
    q = Q^2 + P^2.
    """
    config = config or WKBConfig()
    omega = _positive_omega(omega)
    if classify(geom) is Extremality.SUPER_EXTREMAL:
        raise NoHorizonError("WKB estimate needs a horizon (G M^2 >= Q^2 + P^2)")
    G, M, Gq = geom.G, geom.M, geom.G * geom.charge_sq
    outer = G * G * M * M - Gq
    inner = G * G * (M - omega) ** 2 - Gq
    if inner < 0 or outer < 0:
        critical = M - math.sqrt(Gq) / G
        raise RadicandError(
            f"G^2 (M - omega)^2 < G (Q^2 + P^2) for omega = {omega!r}; "
            f"the closed form needs omega <= {critical!r} (or omega >= {M + math.sqrt(Gq) / G!r})",
            critical_omega=critical,
        )
    exponent = (
        2.0 * G * omega * (M - omega / 2.0)
        - (M - omega) * math.sqrt(inner)
        + M * math.sqrt(max(outer, 0.0))
    )
    value = math.exp(-2.0 * math.pi / config.hbar * exponent)
    flags = ("negative_exponent",) if exponent < 0 else ()
    return ComparatorEstimate(
        value, WKB, {"exponent": exponent, "hbar": config.hbar}, flags=flags
    )


def asymptotic_beta(geom: RNGeometry) -> tuple[float, float]:
    """(beta, beta_I) of the large-omega formula, beta_I carrying a leading minus sign."""
    G, M, Q2 = geom.G, geom.M, geom.Q**2
    beta = 8.0 * math.pi * M / (1.0 + Q2 / (2.0 * G * M * M) + 5.0 * Q2 * Q2 / (16.0 * G * G * M**4))
    root = math.sqrt(G * G * M * M - G * Q2)
    beta_i = -2.0 * math.pi * (G * M - root) ** 2 / root
    return beta, beta_i


def asymptotic_rn(geom: RNGeometry, omega: float, *, negate_beta_i: bool = False) -> ComparatorEstimate:
    """(e^{b w} - 1) / (e^{b w} + 2 + 3 e^{-b_I w}), evaluated without overflow.

    ``negate_beta_i`` flips the sign of beta_I, for the opposite sign
    convention.
    """
    omega = _positive_omega(omega)
    if geom.P != 0:
        raise UnsupportedChargeError("the asymptotic formula is only defined for electric charge Q")
    cls = classify(geom)
    if cls is Extremality.SUPER_EXTREMAL:
        raise NoHorizonError("asymptotic formula needs G M^2 > Q^2")
    if cls is Extremality.EXTREMAL:
        raise ExtremalSingularityError("beta_I has sqrt(G^2 M^2 - G Q^2) = 0 in its denominator")
    beta, beta_i = asymptotic_beta(geom)
    if negate_beta_i:
        beta_i = -beta_i
    # divide numerator and denominator by e^{beta w}
    t = math.exp(-beta * omega)
    tail = 3.0 * math.exp(min(-(beta + beta_i) * omega, 700.0))
    value = (1.0 - t) / (1.0 + 2.0 * t + tail)
    return ComparatorEstimate(value, ASYMPTOTIC, {"beta": beta, "beta_I": beta_i})


def exact_dilatonic2p1(geom: Dilatonic2p1Geometry, m: int, omega: float) -> ComparatorEstimate:
    """1 - cosh^2(a - b) / cosh^2(a + b), a = pi w / (4 Lam),
    b = (pi/2) sqrt((w^2 - 8 m^2 Lam) / (4 Lam^2) - 1).

    Below threshold the root is imaginary, the two cosh arguments are complex
    conjugates of equal modulus and the transmission is 0 (flagged).
    """
    omega = _positive_omega(omega)
    Lam = geom.Lam
    a = math.pi * omega / (4.0 * Lam)
    radicand = (omega * omega - 8.0 * m * m * Lam) / (4.0 * Lam * Lam) - 1.0
    if radicand < 0:
        return ComparatorEstimate(
            0.0,
            EXACT_2P1,
            {"cosh_arg_minus": a, "cosh_arg_plus": a, "radicand": radicand, "reflection": 1.0},
            flags=("below_threshold",),
        )
    b = 0.5 * math.pi * math.sqrt(radicand)
    lo, hi = abs(a - b), a + b
    # cosh(x) = e^{|x|} (1 + e^{-2|x|}) / 2
    ratio = math.exp(lo - hi) * (1.0 + math.exp(-2.0 * lo)) / (1.0 + math.exp(-2.0 * hi))
    reflection = ratio * ratio
    return ComparatorEstimate(
        1.0 - reflection,
        EXACT_2P1,
        {"cosh_arg_minus": a - b, "cosh_arg_plus": a + b, "radicand": radicand,
         "reflection": reflection},
    )
