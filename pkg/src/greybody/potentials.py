"""Metric functions, scattering potentials and tortoise coordinates.

Every public function validates its radius argument (scalar or array) and
raises :class:`DomainError` outside the domain. Radii closer to the outer
horizon than ``r_plus * (1 + HORIZON_MARGIN)`` are rejected instead of
returning huge logarithms. The private ``_``-prefixed kernels skip validation;
they are what the quadrature and ODE code call in their inner loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, UnsupportedFamilyError, ValidationError
from .geometry import (
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Extremality,
    Mode,
    RNGeometry,
    TangherliniGeometry,
    classify,
    dilatonic2p1_horizons,
    dilatonic3p1_horizons,
    outer_horizon,
    rn_horizons,
    tangherlini_radius,
)

HORIZON_MARGIN = 1e-10

PROFILE_POINTS = 512
PROFILE_SPAN = (1.001, 50.0)


def _radii(r, lower, what, inclusive=False):
    """Return (array, was_scalar); raise DomainError naming the first bad index."""
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    bad = ~np.isfinite(flat) | ((flat < lower) if inclusive else (flat <= lower))
    if bad.any():
        i = int(np.argmax(bad))
        raise DomainError(
            f"{what}: radius {flat[i]!r} at index {i} is outside the domain (r > {lower!r})",
            index=i,
        )
    return arr, scalar


def _out(value, scalar):
    return float(value) if scalar else value


def _outside_horizon(r, r_plus, what):
    return _radii(r, r_plus * (1.0 + HORIZON_MARGIN), what, inclusive=True)


# --- Reissner-Nordstrom ------------------------------------------------------


def _rn_delta(geom, r):
    return 1.0 - 2.0 * geom.GM / r + geom.G * geom.charge_sq / r**2


def _rn_delta_prime(geom, r):
    return 2.0 * geom.GM / r**2 - 2.0 * geom.G * geom.charge_sq / r**3


def _rn_potential(geom, l, r):
    delta = _rn_delta(geom, r)
    return l * (l + 1) * delta / r**2 + delta * _rn_delta_prime(geom, r) / r


def rn_delta(geom: RNGeometry, r):
    """Lapse function 1 - 2GM/r + G(Q^2+P^2)/r^2."""
    arr, scalar = _radii(r, 0.0, "rn_delta")
    return _out(_rn_delta(geom, arr), scalar)


def rn_potential(geom: RNGeometry, l: int, r):
    """Scalar-mode potential l(l+1) Delta/r^2 + Delta Delta'/r."""
    arr, scalar = _outside_horizon(r, rn_horizons(geom).r_plus, "rn_potential")
    return _out(_rn_potential(geom, l, arr), scalar)


def _rn_tortoise(geom, r):
    GM = geom.GM
    cls = classify(geom)
    if cls is Extremality.SUPER_EXTREMAL:
        B = math.sqrt(-geom.discriminant)
        u = r - GM
        return r + GM * np.log(u * u + B * B) + (GM * GM - B * B) / B * np.arctan(u / B)
    r_plus, r_minus, A = rn_horizons(geom)
    if cls is Extremality.EXTREMAL:
        u = r - GM
        return r + GM * np.log(u * u) - GM * GM / u
    # u - A = r - r+, u + A = r - r-, written that way to keep digits near r+.
    lo, hi = np.abs(r - r_plus), np.abs(r - r_minus)
    return r + GM * np.log(lo * hi) + (GM * GM + A * A) / (2.0 * A) * np.log(lo / hi)


def rn_tortoise(geom: RNGeometry, r):
    """Closed-form r*(r) in the three charge regimes (u = r - GM).

    Each regime uses its own conventional additive constant.
    """
    if classify(geom) is Extremality.SUPER_EXTREMAL:
        arr, scalar = _radii(r, 0.0, "rn_tortoise")
    else:
        arr, scalar = _outside_horizon(r, rn_horizons(geom).r_plus, "rn_tortoise")
    return _out(_rn_tortoise(geom, arr), scalar)


# --- Schwarzschild-Tangherlini -----------------------------------------------


def _tangherlini_f(geom, r, r0=None):
    r0 = tangherlini_radius(geom) if r0 is None else r0
    return 1.0 - (r0 / r) ** (geom.d - 3)


def _tangherlini_potential(geom, l, r):
    d, r0 = geom.d, tangherlini_radius(geom)
    f = _tangherlini_f(geom, r, r0)
    fp = (d - 3) * (r0 / r) ** (d - 3) / r
    return (
        (d - 2) * (d - 4) / 4.0 * f * f / r**2
        + (d - 2) / 2.0 * f * fp / r
        + l * (l + d - 3) * f / r**2
    )


def _tangherlini_tortoise(geom, r):
    # 1/f = 1 + 1/(x^n - 1) with x = r/r0, expanded over the n-th roots of unity.
    n, r0 = geom.d - 3, tangherlini_radius(geom)
    x = np.asarray(r, dtype=float) / r0
    total = np.log((np.asarray(r, dtype=float) - r0) / r0)
    for k in range(1, n):
        zeta = np.exp(2j * np.pi * k / n)
        total = total + (zeta * np.log(x - zeta)).real
    return r + r0 / n * total


def tangherlini_f(geom: TangherliniGeometry, r):
    arr, scalar = _radii(r, 0.0, "tangherlini_f")
    return _out(_tangherlini_f(geom, arr), scalar)


def tangherlini_potential(geom: TangherliniGeometry, l: int, r):
    """d-dimensional scalar potential (all three terms)."""
    arr, scalar = _outside_horizon(r, tangherlini_radius(geom), "tangherlini_potential")
    return _out(_tangherlini_potential(geom, l, arr), scalar)


def tangherlini_tortoise(geom: TangherliniGeometry, r):
    """r*(r) with dr*/dr = 1/f; reduces to r + r0 ln(r/r0 - 1) at d = 4."""
    arr, scalar = _outside_horizon(r, tangherlini_radius(geom), "tangherlini_tortoise")
    return _out(_tangherlini_tortoise(geom, arr), scalar)


# --- 2+1 charged dilatonic ---------------------------------------------------


def _dilatonic2p1_f(geom, r):
    return -2.0 * geom.M * r + 8.0 * geom.Lam * r * r + 8.0 * geom.Q**2


def _dilatonic2p1_potential(geom, m, r, linearized=True):
    M, Q2, Lam = geom.M, geom.Q**2, geom.Lam
    V = (
        -(8.0 * m * m * Lam + 6.0 * m * Lam)
        + (5.0 * M * M / 8.0 + 2.0 * m * m * M) / r
        - (4.0 * M * Q2 + 8.0 * m * m * Q2) / r**2
        + 6.0 * Q2 * Q2 / r**3
    )
    if not linearized:
        V = V + 14.0 * Lam * Lam * r
    return V


def _dilatonic2p1_jacobian(geom, r):
    r_plus, r_minus = dilatonic2p1_horizons(geom)
    # f = 8 Lam (r - r+)(r - r-), factored to keep digits near r+.
    return 2.0 * r / (8.0 * geom.Lam * (r - r_plus) * (r - r_minus))


def _dilatonic2p1_tortoise(geom, r):
    r_plus, r_minus = dilatonic2p1_horizons(geom)
    head = 1.0 / (4.0 * geom.Lam * (r_plus - r_minus))
    tail = r_minus * np.log(r - r_minus) if r_minus > 0.0 else 0.0
    return head * (r_plus * np.log(r - r_plus) - tail)


def dilatonic2p1_f(geom: Dilatonic2p1Geometry, r):
    arr, scalar = _radii(r, 0.0, "dilatonic2p1_f")
    return _out(_dilatonic2p1_f(geom, arr), scalar)


def dilatonic2p1_potential(geom: Dilatonic2p1Geometry, m: int, r, linearized: bool = True):
    """Potential with the 14 Lam^2 r term dropped when ``linearized``.

    ``m`` is kept as the opaque integer parameter of the original expression.
    """
    r_plus = dilatonic2p1_horizons(geom).r_plus
    arr, scalar = _outside_horizon(r, r_plus, "dilatonic2p1_potential")
    return _out(_dilatonic2p1_potential(geom, m, arr, linearized), scalar)


def dilatonic2p1_tortoise(geom: Dilatonic2p1Geometry, r):
    """r* = [r+ ln(r - r+) - r- ln(r - r-)] / (4 Lam (r+ - r-)), i.e. dr*/dr = 2r/f."""
    r_plus = dilatonic2p1_horizons(geom).r_plus
    arr, scalar = _outside_horizon(r, r_plus, "dilatonic2p1_tortoise")
    return _out(_dilatonic2p1_tortoise(geom, arr), scalar)


# --- 3+1 charged dilatonic ---------------------------------------------------


def _dilatonic3p1_f(geom, r):
    return 1.0 - 2.0 * geom.M / r


def _dilatonic3p1_area_sq(geom, r):
    return r * (r - geom.Q**2 / geom.M)


def _dilatonic3p1_potential(geom, l, r):
    return l * (l + 1) * _dilatonic3p1_f(geom, r) / _dilatonic3p1_area_sq(geom, r)


def _dilatonic3p1_damping(geom, r):
    r_plus, r_minus = 2.0 * geom.M, geom.Q**2 / geom.M
    return (r - r_plus) * (2.0 * r - r_minus) / (r * r * (r - r_minus))


def _dilatonic3p1_schrodinger_potential(geom, l, r):
    # psi = R u removes the first-derivative term and adds R_{r*r*}/R.
    r_plus, r_minus = 2.0 * geom.M, geom.Q**2 / geom.M
    f = 1.0 - r_plus / r
    fp = r_plus / r**2
    R2 = r * (r - r_minus)
    return (
        l * (l + 1) * f / R2
        + f * fp * (2.0 * r - r_minus) / (2.0 * R2)
        - f * f * r_minus**2 / (4.0 * R2 * R2)
    )


def _dilatonic3p1_tortoise(geom, r):
    r_plus = 2.0 * geom.M
    return r + r_plus * np.log((r - r_plus) / r_plus)


def dilatonic3p1_f(geom: Dilatonic3p1Geometry, r):
    arr, scalar = _radii(r, 0.0, "dilatonic3p1_f")
    return _out(_dilatonic3p1_f(geom, arr), scalar)


def dilatonic3p1_potential(geom: Dilatonic3p1Geometry, l: int, r):
    """l(l+1) f / R^2, the potential term of the radial equation."""
    arr, scalar = _outside_horizon(r, dilatonic3p1_horizons(geom).r_plus, "dilatonic3p1_potential")
    return _out(_dilatonic3p1_potential(geom, l, arr), scalar)


def dilatonic3p1_damping(geom: Dilatonic3p1Geometry, r):
    """Coefficient of du/dr* in the radial equation, (r - r+)(2r - r-)/(r^2 (r - r-))."""
    arr, scalar = _outside_horizon(r, dilatonic3p1_horizons(geom).r_plus, "dilatonic3p1_damping")
    return _out(_dilatonic3p1_damping(geom, arr), scalar)


def dilatonic3p1_schrodinger_potential(geom: Dilatonic3p1Geometry, l: int, r):
    """Potential of the first-derivative-free form obtained with psi = R u.

    Equals l(l+1) f/R^2 + R_{r*r*}/R. The extra piece is positive near the
    horizon and is not part of :func:`dilatonic3p1_potential`.
    """
    arr, scalar = _outside_horizon(
        r, dilatonic3p1_horizons(geom).r_plus, "dilatonic3p1_schrodinger_potential"
    )
    return _out(_dilatonic3p1_schrodinger_potential(geom, l, arr), scalar)


def dilatonic3p1_tortoise(geom: Dilatonic3p1Geometry, r):
    """r* = r + r+ ln(r/r+ - 1), so dr*/dr = 1/f."""
    arr, scalar = _outside_horizon(r, dilatonic3p1_horizons(geom).r_plus, "dilatonic3p1_tortoise")
    return _out(_dilatonic3p1_tortoise(geom, arr), scalar)


# --- family dispatch ---------------------------------------------------------


_TORTOISE = {
    RNGeometry: _rn_tortoise,
    TangherliniGeometry: _tangherlini_tortoise,
    Dilatonic2p1Geometry: _dilatonic2p1_tortoise,
    Dilatonic3p1Geometry: _dilatonic3p1_tortoise,
}


def _jacobian(geom, r):
    if isinstance(geom, RNGeometry):
        return 1.0 / _rn_delta(geom, r)
    if isinstance(geom, TangherliniGeometry):
        return 1.0 / _tangherlini_f(geom, r)
    if isinstance(geom, Dilatonic2p1Geometry):
        return _dilatonic2p1_jacobian(geom, r)
    return 1.0 / _dilatonic3p1_f(geom, r)


@dataclass(frozen=True)
class TortoiseMap:
    """r*(r) for one geometry, with its defining derivative dr*/dr."""

    geom: object
    horizon: float = field(init=False)

    def __post_init__(self):
        if isinstance(self.geom, RNGeometry) and classify(self.geom) is Extremality.SUPER_EXTREMAL:
            object.__setattr__(self, "horizon", 0.0)
        else:
            object.__setattr__(self, "horizon", outer_horizon(self.geom))

    def _check(self, r):
        if self.horizon == 0.0:
            return _radii(r, 0.0, "tortoise")
        return _outside_horizon(r, self.horizon, "tortoise")

    def __call__(self, r):
        arr, scalar = self._check(r)
        return _out(_TORTOISE[type(self.geom)](self.geom, arr), scalar)

    def derivative(self, r):
        """Defining dr*/dr: 1/Delta, 1/f, or 2r/f depending on the family."""
        arr, scalar = self._check(r)
        return _out(_jacobian(self.geom, arr), scalar)


@dataclass(frozen=True)
class Channel:
    """A geometry paired with an angular number: everything the integrators need.

    ``schrodinger`` selects, for the 3+1 dilatonic family, the potential of the
    first-derivative-free mode equation instead of the bare l(l+1) f/R^2 term.
    ``linearized`` only affects the 2+1 dilatonic family.
    """

    geom: object
    angular: int
    linearized: bool = True
    schrodinger: bool = False
    horizon: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "horizon", outer_horizon(self.geom))

    @property
    def family(self) -> str:
        return self.geom.family

    def potential(self, r):
        g, a = self.geom, self.angular
        if isinstance(g, RNGeometry):
            return _rn_potential(g, a, r)
        if isinstance(g, TangherliniGeometry):
            return _tangherlini_potential(g, a, r)
        if isinstance(g, Dilatonic2p1Geometry):
            return _dilatonic2p1_potential(g, a, r, self.linearized)
        if self.schrodinger:
            return _dilatonic3p1_schrodinger_potential(g, a, r)
        return _dilatonic3p1_potential(g, a, r)

    def jacobian(self, r):
        return _jacobian(self.geom, r)

    def density(self, r):
        """Integrand of the barrier integral in r: V dr*/dr.

        The lapse factor in V cancels against dr*/dr analytically, so the
        integrand stays accurate right down to the horizon (and for extremal RN).
        """
        g, a = self.geom, self.angular
        if isinstance(g, RNGeometry):
            return a * (a + 1) / r**2 + _rn_delta_prime(g, r) / r
        if isinstance(g, TangherliniGeometry):
            d, r0 = g.d, tangherlini_radius(g)
            f = _tangherlini_f(g, r, r0)
            fp = (d - 3) * (r0 / r) ** (d - 3) / r
            return (d - 2) * (d - 4) / 4.0 * f / r**2 + (d - 2) / 2.0 * fp / r + a * (a + d - 3) / r**2
        if isinstance(g, Dilatonic3p1Geometry):
            r_plus, r_minus = 2.0 * g.M, g.Q**2 / g.M
            R2 = r * (r - r_minus)
            out = a * (a + 1) / R2
            if self.schrodinger:
                f = 1.0 - r_plus / r
                out = out + (r_plus / r**2) * (2.0 * r - r_minus) / (2.0 * R2) \
                    - f * r_minus**2 / (4.0 * R2 * R2)
            return out
        return self.potential(r) * self.jacobian(r)

    def tortoise(self, r):
        return _TORTOISE[type(self.geom)](self.geom, r)

    def potential_slope(self, r):
        """dV/dr by complex-step differentiation (the kernels are analytic in r)."""
        h = 1e-30 * np.maximum(np.abs(r), 1.0)
        return np.imag(self.potential(r + 1j * h)) / h


# --- profiles ----------------------------------------------------------------


@dataclass(frozen=True)
class PotentialProfile:
    family: str
    params: dict
    mode_angular: int
    r: np.ndarray
    V: np.ndarray

    def header(self) -> dict:
        return {"family": self.family, **self.params, "angular": self.mode_angular}


def default_grid(horizon: float, n: int = PROFILE_POINTS, span=PROFILE_SPAN) -> np.ndarray:
    return np.geomspace(span[0] * horizon, span[1] * horizon, n)


def potential_profile(geom, angular: int, r_grid=None, *, linearized: bool = True) -> PotentialProfile:
    """Sample V on a grid outside the outer horizon.

    ``r_grid`` defaults to 512 log-spaced points from 1.001 to 50 horizon radii.
    """
    if isinstance(angular, Mode):
        angular = angular.angular
    horizon = outer_horizon(geom)
    grid = default_grid(horizon) if r_grid is None else np.asarray(r_grid, dtype=float)
    if grid.ndim != 1:
        raise ValidationError("r_grid must be one-dimensional")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValidationError("r_grid must be strictly increasing")
    params = dict(geom.params())
    if isinstance(geom, Dilatonic2p1Geometry):
        params["linearized"] = linearized
    if grid.size == 0:
        return PotentialProfile(geom.family, params, angular, grid, grid.copy())
    _outside_horizon(grid, horizon, "potential_profile")
    V = Channel(geom, angular, linearized=linearized).potential(grid)
    if not np.all(np.isfinite(V)):
        raise DomainError("potential is not finite on the grid")
    return PotentialProfile(geom.family, params, angular, grid, np.asarray(V, dtype=float))


def potential(geom, angular: int, r, **kwargs):
    """Family dispatch with domain checking."""
    if isinstance(geom, RNGeometry):
        return rn_potential(geom, angular, r)
    if isinstance(geom, TangherliniGeometry):
        return tangherlini_potential(geom, angular, r)
    if isinstance(geom, Dilatonic2p1Geometry):
        return dilatonic2p1_potential(geom, angular, r, **kwargs)
    if isinstance(geom, Dilatonic3p1Geometry):
        return dilatonic3p1_potential(geom, angular, r)
    raise UnsupportedFamilyError(f"unknown family {type(geom).__name__}")
