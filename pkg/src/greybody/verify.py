"""Self-verification suite: cross-checks between independent computational routes.

Every check compares two routes that share no code path: closed forms against
quadrature, bounds against the scattering ODE, analytic tortoise maps against
their defining derivatives. ``fast`` skips the randomized oracle batch.

The formulas under test are looked up through an overridable namespace so a
deliberately corrupted implementation can be injected (mutation testing).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from types import SimpleNamespace

import numpy as np

from . import bounds, comparators, oracle
from .errors import GreybodyError
from .geometry import (
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Mode,
    RNGeometry,
    TangherliniGeometry,
    outer_horizon,
    tangherlini_radius,
)
from .bounds import BoundReport
from .comparators import ComparatorEstimate
from .numerics import richardson_derivative, sech2
from .oracle import OracleResult
from .potentials import TortoiseMap
from .sweeps import PRESETS

SUITES = ("fast", "full")
DEFAULT_SEED = 20240229
DOMINANCE_SLACK = 1e-6
FLUX_LIMIT = 1e-6
REFINEMENT_LIMIT = 1e-5
INSTANCES_PER_FAMILY = 50


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def row(self) -> dict:
        return {"check": self.name, "passed": self.passed, "detail": self.detail}


def default_impl() -> SimpleNamespace:
    return SimpleNamespace(
        bound_rn_closed=bounds.bound_rn_closed,
        bound_schwarzschild=bounds.bound_schwarzschild,
        bound_tangherlini_closed=bounds.bound_tangherlini_closed,
        bound_dilatonic2p1_closed=bounds.bound_dilatonic2p1_closed,
        bound_dilatonic3p1_closed=bounds.bound_dilatonic3p1_closed,
        closed_form_bound=bounds.closed_form_bound,
        bound_quadrature=bounds.bound_quadrature,
        exact_dilatonic2p1=comparators.exact_dilatonic2p1,
        asymptotic_rn=comparators.asymptotic_rn,
        transmission_numeric=oracle.transmission_numeric,
        tortoise=lambda geom, r: TortoiseMap(geom)(r),
    )


def closed_bound(impl, geom, l, omega):
    if isinstance(geom, RNGeometry):
        return impl.bound_rn_closed(geom, l, omega)
    if isinstance(geom, TangherliniGeometry):
        return impl.bound_tangherlini_closed(geom, l, omega)
    if isinstance(geom, Dilatonic2p1Geometry):
        return impl.bound_dilatonic2p1_closed(geom, l, omega)
    return impl.bound_dilatonic3p1_closed(geom, l, omega)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# --- randomized instances ----------------------------------------------------


def random_rn(rng) -> RNGeometry:
    M = float(np.exp(rng.uniform(math.log(0.5), math.log(5.0))))
    q2 = rng.uniform(0.0, 0.95) * M * M
    angle = rng.uniform(0.0, math.pi / 2)
    return RNGeometry(M=M, Q=math.sqrt(q2) * math.cos(angle), P=math.sqrt(q2) * math.sin(angle))


def random_tangherlini(rng) -> TangherliniGeometry:
    M = float(np.exp(rng.uniform(math.log(0.5), math.log(5.0))))
    return TangherliniGeometry(d=int(rng.integers(4, 9)), M=M)


def random_dilatonic3p1(rng) -> Dilatonic3p1Geometry:
    M = float(np.exp(rng.uniform(math.log(0.5), math.log(5.0))))
    return Dilatonic3p1Geometry(M=M, Q=math.sqrt(rng.uniform(0.0, 0.9) * 2.0 * M * M))


def dominance_instances(seed: int = DEFAULT_SEED, per_family: int = INSTANCES_PER_FAMILY):
    """(label, geometry, mode) triples: l in {0,1,2}, omega = w / r_h with
    w log-uniform in [0.1, 10]."""
    rng = np.random.default_rng(seed)
    out = []
    for family, make in (("rn", random_rn), ("tangherlini", random_tangherlini),
                         ("dilatonic3p1", random_dilatonic3p1)):
        for i in range(per_family):
            geom = make(rng)
            l = int(rng.integers(0, 3))
            w = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
            out.append((f"{family}#{i:02d}", geom, Mode(w / outer_horizon(geom), l)))
    return out


FIXED_ORACLE_INSTANCES = (
    ("rn-fixed", RNGeometry(M=2.0, Q=1.0), Mode(2.0, 0)),
    ("rn-fixed-l2", RNGeometry(M=1.0, Q=0.5, P=0.3), Mode(0.8, 2)),
    ("tangherlini-fixed", TangherliniGeometry(d=6, M=1.0), Mode(3.0, 1)),
    ("dilatonic3p1-fixed", Dilatonic3p1Geometry(M=1.0, Q=0.8), Mode(0.6, 1)),
)


# --- individual checks -------------------------------------------------------


def check_reduction_identities(impl) -> list:
    """Uncharged RN and d = 4 Tangherlini reproduce the Schwarzschild bound."""
    worst_rn = worst_t = 0.0
    for GM in (0.3, 1.0, 2.0, 5.0, 17.0):
        for l in range(5):
            for omega in (0.05, 0.3, 1.0, 4.0):
                ref = impl.bound_schwarzschild(GM, l, omega).bound
                rn = impl.bound_rn_closed(RNGeometry(M=GM), l, omega).bound
                tg = impl.bound_tangherlini_closed(TangherliniGeometry(d=4, M=GM), l, omega).bound
                worst_rn = max(worst_rn, _rel(rn, ref))
                worst_t = max(worst_t, _rel(tg, ref))
    return [
        CheckResult("reduction_identities/rn_uncharged", worst_rn <= 1e-14,
                    f"max relative difference {worst_rn:.3g} over 100 points"),
        CheckResult("reduction_identities/tangherlini_d4", worst_t <= 1e-14,
                    f"max relative difference {worst_t:.3g} over 100 points"),
    ]


def check_closed_vs_quadrature(impl, seed=DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed + 1)
    cases = {"rn": [], "tangherlini": [], "dilatonic3p1": []}
    for _ in range(20):
        geom = random_rn(rng)
        for l in (0, 1, 2):
            for omega in (0.3, 1.0, 3.0):
                cases["rn"].append((geom, Mode(omega, l)))
    for d in range(4, 9):
        for M in (0.7, 3.0):
            for l in (0, 1, 2):
                cases["tangherlini"].append((TangherliniGeometry(d=d, M=M), Mode(1.0, l)))
    for _ in range(10):
        geom = random_dilatonic3p1(rng)
        for l in (1, 2):
            cases["dilatonic3p1"].append((geom, Mode(1.0, l)))
    out = []
    for family, items in cases.items():
        worst, where = 0.0, ""
        for geom, mode in items:
            closed = closed_bound(impl, geom, mode.angular, mode.omega).barrier_integral
            quad = impl.bound_quadrature(geom, mode).barrier_integral
            err = _rel(closed, quad)
            if err > worst:
                worst, where = err, f"{geom.params()} l={mode.angular}"
        out.append(CheckResult(f"closed_vs_quadrature/{family}", worst <= 1e-7,
                               f"max relative difference {worst:.3g} over {len(items)} cases; "
                               f"worst at {where}"))
    return out


def check_exact_2p1(impl) -> list:
    spec = PRESETS["fig7"].spec
    geom = Dilatonic2p1Geometry(M=spec.fixed["M"], Q=spec.fixed["Q"], Lam=spec.fixed["Lam"])
    grid = spec.swept.values()
    b = np.array([impl.bound_dilatonic2p1_closed(geom, 0, float(w)).bound for w in grid])
    t = np.array([impl.exact_dilatonic2p1(geom, 0, float(w)).value for w in grid])
    excess = float(np.max(b - t))
    t2 = impl.exact_dilatonic2p1(geom, 0, 2.0).value
    return [
        CheckResult("exact_2p1/bound_below_exact", excess <= 1e-9,
                    f"max(bound - exact) = {excess:.3g} on {len(grid)} points"),
        CheckResult("exact_2p1/exact_increasing", bool(np.all(np.diff(t) > 0)),
                    f"min step {float(np.min(np.diff(t))):.3g}"),
        CheckResult("exact_2p1/near_unity_at_omega_2", t2 > 0.999, f"T(2) = {t2!r}"),
    ]


def _strict(values, increasing=True):
    d = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(d > 0) if increasing else np.all(d < 0))


def check_monotonicity(impl) -> list:
    out = []
    s = PRESETS["fig2"].spec
    A = s.swept.values()
    G, M, omega = s.fixed["G"], s.fixed["M"], s.fixed["omega"]
    table = np.array([[impl.bound_rn_closed(
        RNGeometry(M=M, G=G, Q=math.sqrt(max((G * G * M * M - a * a) / G, 0.0))), l, omega).bound
        for l in (0, 1, 2)] for a in A])
    out.append(CheckResult("monotonicity/rn_bound_increases_with_A",
                           all(_strict(table[:, j]) for j in range(3)), "fig2 grid, l = 0,1,2"))
    out.append(CheckResult("monotonicity/rn_bound_decreases_with_l",
                           bool(np.all(np.diff(table, axis=1) < 0)), "fig2 grid"))

    s = PRESETS["fig5"].spec
    Ms = s.swept.values()
    ds = s.series[1]
    table = np.array([[impl.bound_tangherlini_closed(TangherliniGeometry(d=d, M=float(m)), 1, 2.0).bound
                       for d in ds] for m in Ms])
    out.append(CheckResult("monotonicity/tangherlini_bound_increases_with_M",
                           all(_strict(table[:, j]) for j in range(len(ds))), "fig5 grid, d = 4..8"))
    out.append(CheckResult("monotonicity/tangherlini_bound_decreases_with_d",
                           bool(np.all(np.diff(table, axis=1) < 0)), "fig5 grid"))

    s = PRESETS["fig8"].spec
    vals = [impl.bound_dilatonic2p1_closed(
        Dilatonic2p1Geometry(M=s.fixed["M"], Q=float(q), Lam=s.fixed["Lam"]), 0, s.fixed["omega"]).bound
        for q in s.swept.values()]
    out.append(CheckResult("monotonicity/dilatonic2p1_bound_decreases_with_Q",
                           _strict(vals, increasing=False), "fig8 grid"))

    s = PRESETS["fig-lambda"].spec
    vals = [impl.bound_dilatonic2p1_closed(
        Dilatonic2p1Geometry(M=s.fixed["M"], Q=s.fixed["Q"], Lam=float(lam)), 0, s.fixed["omega"]).bound
        for lam in s.swept.values()]
    out.append(CheckResult("monotonicity/dilatonic2p1_bound_increases_with_Lambda",
                           _strict(vals), "fig-lambda grid"))

    s = PRESETS["fig10"].spec
    vals = [impl.bound_dilatonic3p1_closed(
        Dilatonic3p1Geometry(M=s.fixed["M"], Q=float(q)), 1, s.fixed["omega"]).bound
        for q in s.swept.values()]
    out.append(CheckResult("monotonicity/dilatonic3p1_bound_decreases_with_Q",
                           _strict(vals, increasing=False), "fig10 grid"))
    return out


def check_asymptotic_convergence(impl) -> list:
    geom = RNGeometry(M=2.0, Q=1.0)
    gaps = {}
    for omega in (1.0, 10.0):
        gaps[omega] = abs(impl.asymptotic_rn(geom, omega).value
                          - impl.bound_rn_closed(geom, 0, omega).bound)
    return [CheckResult("asymptotic_convergence/rn", gaps[10.0] < gaps[1.0],
                        f"gap(1) = {gaps[1.0]:.6g}, gap(10) = {gaps[10.0]:.6g}")]


def _defining_derivative(geom, r):
    if isinstance(geom, RNGeometry):
        return 1.0 / (1.0 - 2.0 * geom.G * geom.M / r + geom.G * (geom.Q**2 + geom.P**2) / r**2)
    if isinstance(geom, TangherliniGeometry):
        return 1.0 / (1.0 - (tangherlini_radius(geom) / r) ** (geom.d - 3))
    if isinstance(geom, Dilatonic2p1Geometry):
        return 2.0 * r / (-2.0 * geom.M * r + 8.0 * geom.Lam * r * r + 8.0 * geom.Q**2)
    return 1.0 / (1.0 - 2.0 * geom.M / r)


TORTOISE_CASES = (
    ("rn_subextremal", RNGeometry(M=2.0, Q=1.0, P=0.5)),
    ("rn_extremal", RNGeometry(M=1.5, Q=1.5)),
    ("rn_superextremal", RNGeometry(M=1.0, Q=1.2, P=0.4)),
    *((f"tangherlini_d{d}", TangherliniGeometry(d=d, M=1.3)) for d in range(4, 11)),
    ("dilatonic2p1", Dilatonic2p1Geometry(M=10.0, Q=1.0, Lam=0.1)),
    ("dilatonic3p1", Dilatonic3p1Geometry(M=10.0, Q=1.0)),
)


def check_tortoise(impl) -> list:
    out = []
    for label, geom in TORTOISE_CASES:
        base = outer_horizon(geom) if label != "rn_superextremal" else geom.G * geom.M
        radii = base * np.geomspace(1.05, 40.0, 20)
        worst = 0.0
        for r in radii:
            h = 1e-3 * (r - (outer_horizon(geom) if label != "rn_superextremal" else 0.0))
            est, _ = richardson_derivative(lambda x: impl.tortoise(geom, x), float(r), h)
            worst = max(worst, _rel(est, _defining_derivative(geom, float(r))))
        out.append(CheckResult(f"tortoise_derivative/{label}", bool(worst <= 1e-6),
                               f"max relative difference {worst:.3g} on 20 radii"))
    return out


def check_oracle(impl, instances, with_dominance=True) -> list:
    """Dominance, flux conservation and tolerance-halving stability per instance."""
    out = []
    worst_flux = worst_refine = 0.0
    failures = []
    cfg = oracle.OracleConfig()
    for label, geom, mode in instances:
        try:
            res = impl.transmission_numeric(geom, mode, cfg)
            half = impl.transmission_numeric(geom, mode, cfg.refined(0.5))
        except GreybodyError as exc:
            failures.append(f"{label}: {type(exc).__name__}: {exc}")
            if with_dominance:
                out.append(CheckResult(f"oracle_dominance/{label}", False, f"oracle failed: {exc}"))
            continue
        worst_flux = max(worst_flux, res.flux_residual, half.flux_residual)
        worst_refine = max(worst_refine, _rel(half.T, res.T) if res.T > 0 else abs(half.T))
        if with_dominance:
            bound = closed_bound(impl, geom, mode.angular, mode.omega).bound
            ok = bool(res.T + DOMINANCE_SLACK >= bound)
            out.append(CheckResult(
                f"oracle_dominance/{label}", ok,
                f"T = {res.T:.10g}, bound = {bound:.10g}, l = {mode.angular}, "
                f"omega = {mode.omega:.6g}, {geom.params()}"))
    detail = f"{len(instances)} instances"
    if failures:
        detail += "; failures: " + " | ".join(failures)
    out.append(CheckResult("oracle_flux_conservation", bool(worst_flux <= FLUX_LIMIT and not failures),
                           f"max |T + R - 1| = {worst_flux:.3g}; {detail}"))
    out.append(CheckResult("oracle_refinement_stability", bool(worst_refine < REFINEMENT_LIMIT and not failures),
                           f"max relative change under tolerance halving = {worst_refine:.3g}; {detail}"))
    return out


def run_checks(suite: str = "fast", *, seed: int = DEFAULT_SEED, overrides: dict | None = None,
               progress=None) -> list:
    """Run a suite; ``overrides`` replaces named formulas (mutation hook)."""
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}")
    impl = default_impl()
    for name, fn in (overrides or {}).items():
        if not hasattr(impl, name):
            raise KeyError(f"no overridable formula named {name!r}")
        setattr(impl, name, fn)
    results = []
    steps = [
        ("reduction_identities", lambda: check_reduction_identities(impl)),
        ("closed_vs_quadrature", lambda: check_closed_vs_quadrature(impl, seed)),
        ("exact_2p1", lambda: check_exact_2p1(impl)),
        ("monotonicity", lambda: check_monotonicity(impl)),
        ("asymptotic_convergence", lambda: check_asymptotic_convergence(impl)),
        ("tortoise", lambda: check_tortoise(impl)),
    ]
    if suite == "fast":
        steps.append(("oracle_fixed", lambda: check_oracle(impl, FIXED_ORACLE_INSTANCES)))
    else:
        steps.append(("oracle_randomized", lambda: check_oracle(impl, dominance_instances(seed))))
    for name, step in steps:
        t0 = time.perf_counter()
        try:
            got = step()
        except Exception as exc:  # a corrupted formula may raise anywhere
            got = [CheckResult(f"{name}/error", False, f"{type(exc).__name__}: {exc}")]
        results.extend(got)
        if progress:
            progress(name, got, time.perf_counter() - t0)
    return results


# --- mutation hook -----------------------------------------------------------


def _corrupt(fn):
    """Wrap a formula so its output is wrong by a modest, easily detected amount."""
    def wrapped(*args, **kwargs):
        out = fn(*args, **kwargs)
        if isinstance(out, BoundReport):
            z = 1.5 * out.barrier_integral
            return replace(out, barrier_integral=z, bound=sech2(z))
        if isinstance(out, ComparatorEstimate):
            return replace(out, value=0.5 * out.value)
        if isinstance(out, OracleResult):
            return replace(out, T=0.5 * out.T)
        return 1.01 * out

    return wrapped


def mutation(name: str) -> dict:
    """Overrides for :func:`run_checks` with one formula corrupted."""
    impl = default_impl()
    if not hasattr(impl, name):
        raise KeyError(f"no overridable formula named {name!r}; choose from {sorted(vars(impl))}")
    return {name: _corrupt(getattr(impl, name))}
