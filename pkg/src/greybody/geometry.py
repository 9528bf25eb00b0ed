"""Black-hole parameter sets, horizon radii and extremality classification.

All geometries are frozen dataclasses. Construction only checks positivity of
the mass-like parameters; whether a horizon exists is decided by the horizon
functions, which raise :class:`NoHorizonError` when it does not.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DimensionError, GeometryError, NoHorizonError, ValidationError

EXTREMAL_RTOL = 1e-12

RADIUS_CONVENTIONS = ("consistent", "literal")


class Extremality(enum.Enum):
    SUB_EXTREMAL = "SubExtremal"
    EXTREMAL = "Extremal"
    SUPER_EXTREMAL = "SuperExtremal"


class Horizons(NamedTuple):
    r_plus: float
    r_minus: float


class RNHorizons(NamedTuple):
    r_plus: float
    r_minus: float
    A: float


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise GeometryError(f"{name} must be a positive finite number, got {value!r}")


def _finite(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value)):
        raise GeometryError(f"{name} must be a finite number, got {value!r}")


@dataclass(frozen=True)
class RNGeometry:
    """Reissner-Nordstrom black hole with electric charge Q and magnetic charge P."""

    M: float
    Q: float = 0.0
    P: float = 0.0
    G: float = 1.0

    family = "rn"

    def __post_init__(self):
        _positive("G", self.G)
        _positive("M", self.M)
        _finite("Q", self.Q)
        _finite("P", self.P)

    @property
    def charge_sq(self) -> float:
        return self.Q * self.Q + self.P * self.P

    @property
    def GM(self) -> float:
        return self.G * self.M

    @property
    def discriminant(self) -> float:
        """A^2 = G^2 M^2 - G (Q^2 + P^2); its sign decides the extremality class."""
        return self.GM**2 - self.G * self.charge_sq

    def params(self) -> dict:
        return {"G": self.G, "M": self.M, "Q": self.Q, "P": self.P}


@dataclass(frozen=True)
class TangherliniGeometry:
    """Schwarzschild-Tangherlini black hole in d spacetime dimensions.

    ``radius_convention`` selects how the horizon radius follows from the mass:
    ``"consistent"`` (default) solves r0^(d-3) = 16 pi G M / ((d-2) Omega_{d-2}),
    which is what the metric function (r0/r)^(d-3) requires; ``"literal"`` takes
    r0 = 16 pi G M / ((d-2) Omega_{d-2}) linearly in M for every d. Both agree
    at d = 4.
    """

    d: int
    M: float
    G: float = 1.0
    radius_convention: str = "consistent"

    family = "tangherlini"

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int):
            raise DimensionError(f"d must be an integer, got {self.d!r}")
        if self.d < 4:
            raise DimensionError(f"d must be >= 4, got {self.d}")
        _positive("G", self.G)
        _positive("M", self.M)
        if self.radius_convention not in RADIUS_CONVENTIONS:
            raise ValidationError(
                f"radius_convention must be one of {RADIUS_CONVENTIONS}, "
                f"got {self.radius_convention!r}"
            )

    @property
    def r0(self) -> float:
        return tangherlini_radius(self)

    def params(self) -> dict:
        return {"d": self.d, "G": self.G, "M": self.M, "radius_convention": self.radius_convention}


@dataclass(frozen=True)
class Dilatonic2p1Geometry:
    """Charged dilatonic black hole in 2+1 dimensions, f = -2Mr + 8 Lam r^2 + 8 Q^2."""

    M: float
    Q: float
    Lam: float

    family = "dilatonic2p1"

    def __post_init__(self):
        _positive("M", self.M)
        _finite("Q", self.Q)
        _positive("Lam", self.Lam)

    def params(self) -> dict:
        return {"M": self.M, "Q": self.Q, "Lam": self.Lam}


@dataclass(frozen=True)
class Dilatonic3p1Geometry:
    """Charged dilatonic black hole in 3+1 dimensions with r+ = 2M, r- = Q^2/M."""

    M: float
    Q: float

    family = "dilatonic3p1"

    def __post_init__(self):
        _positive("M", self.M)
        _finite("Q", self.Q)

    def params(self) -> dict:
        return {"M": self.M, "Q": self.Q}


@dataclass(frozen=True)
class Mode:
    """Frequency and angular number (l, or m for the 2+1 dilatonic family)."""

    omega: float
    angular: int = 0

    def __post_init__(self):
        _positive("omega", self.omega)
        if isinstance(self.angular, bool) or not isinstance(self.angular, int):
            raise ValidationError(f"angular number must be an integer, got {self.angular!r}")
        if self.angular < 0:
            raise ValidationError(f"angular number must be >= 0, got {self.angular}")


Geometry = RNGeometry | TangherliniGeometry | Dilatonic2p1Geometry | Dilatonic3p1Geometry


def classify(geom: RNGeometry, rel_tol: float = EXTREMAL_RTOL) -> Extremality:
    """Extremality class from the sign of G M^2 - (Q^2 + P^2).

    Values within ``rel_tol`` of G M^2 (relative) count as extremal.
    """
    scale = geom.G * geom.M**2
    gap = scale - geom.charge_sq
    if abs(gap) <= rel_tol * scale:
        return Extremality.EXTREMAL
    return Extremality.SUB_EXTREMAL if gap > 0 else Extremality.SUPER_EXTREMAL


def rn_horizons(geom: RNGeometry, rel_tol: float = EXTREMAL_RTOL) -> RNHorizons:
    cls = classify(geom, rel_tol)
    if cls is Extremality.SUPER_EXTREMAL:
        raise NoHorizonError(
            f"super-extremal RN geometry (G M^2 < Q^2 + P^2) has no horizon: {geom.params()}"
        )
    A = 0.0 if cls is Extremality.EXTREMAL else math.sqrt(geom.discriminant)
    r_plus = geom.GM + A
    # Vieta: r+ r- = G (Q^2 + P^2); avoids cancellation in GM - A.
    r_minus = geom.G * geom.charge_sq / r_plus
    return RNHorizons(r_plus, r_minus, A)


def sphere_area(n: int) -> float:
    """Area of the unit n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def tangherlini_radius(geom: TangherliniGeometry, convention: str | None = None) -> float:
    convention = convention or geom.radius_convention
    if convention not in RADIUS_CONVENTIONS:
        raise ValidationError(f"unknown radius convention {convention!r}")
    d = geom.d
    if d == 4:
        # Omega_2 = 4 pi: the Schwarzschild radius, kept exact
        return 2.0 * (geom.G * geom.M)
    scale = 16.0 * math.pi * geom.G * geom.M / ((d - 2) * sphere_area(d - 2))
    if convention == "literal":
        return scale
    return scale ** (1.0 / (d - 3))


def dilatonic2p1_horizons(geom: Dilatonic2p1Geometry) -> Horizons:
    M, Q, Lam = geom.M, geom.Q, geom.Lam
    disc = M * M - 64.0 * Q * Q * Lam
    if not M > 8.0 * abs(Q) * math.sqrt(Lam) or disc <= 0.0:
        raise NoHorizonError(
            f"2+1 dilatonic geometry needs M > 8|Q| sqrt(Lam) for two horizons: {geom.params()}"
        )
    r_plus = (M + math.sqrt(disc)) / (8.0 * Lam)
    r_minus = Q * Q / (Lam * r_plus)
    return Horizons(r_plus, r_minus)


def dilatonic3p1_horizons(geom: Dilatonic3p1Geometry) -> Horizons:
    r_plus = 2.0 * geom.M
    r_minus = geom.Q**2 / geom.M
    if not r_plus > r_minus:
        raise NoHorizonError(
            f"3+1 dilatonic geometry needs 2 M^2 > Q^2: {geom.params()}"
        )
    return Horizons(r_plus, r_minus)


def outer_horizon(geom: Geometry) -> float:
    """Outermost horizon radius for any supported family."""
    if isinstance(geom, RNGeometry):
        return rn_horizons(geom).r_plus
    if isinstance(geom, TangherliniGeometry):
        return tangherlini_radius(geom)
    if isinstance(geom, Dilatonic2p1Geometry):
        return dilatonic2p1_horizons(geom).r_plus
    if isinstance(geom, Dilatonic3p1Geometry):
        return dilatonic3p1_horizons(geom).r_plus
    raise TypeError(f"unsupported geometry {type(geom).__name__}")
