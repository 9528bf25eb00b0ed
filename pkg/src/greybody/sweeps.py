"""Point evaluations, parameter sweeps and the figure presets built on them."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import comparators
from .bounds import (
    CLOSED_FORM,
    QUADRATURE,
    QuadratureConfig,
    bound_quadrature,
    closed_form_bound,
)
from .comparators import WKBConfig, asymptotic_rn, exact_dilatonic2p1, wkb_rn
from .errors import GreybodyError, UnsupportedFamilyError, ValidationError
from .geometry import (
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Mode,
    RNGeometry,
    TangherliniGeometry,
    outer_horizon,
)
from .oracle import OracleConfig, transmission_numeric
from .potentials import potential

OUTPUTS = ("Bound", "BoundQuadrature", "WKB", "Asymptotic", "Exact2p1", "Oracle", "Potential")

FAMILIES = {
    "rn": (RNGeometry, ("G", "M", "Q", "P")),
    "tangherlini": (TangherliniGeometry, ("d", "G", "M", "radius_convention")),
    "dilatonic2p1": (Dilatonic2p1Geometry, ("M", "Q", "Lam")),
    "dilatonic3p1": (Dilatonic3p1Geometry, ("M", "Q")),
}

FAMILY_OUTPUTS = {
    "rn": {"Bound", "BoundQuadrature", "WKB", "Asymptotic", "Oracle", "Potential"},
    "tangherlini": {"Bound", "BoundQuadrature", "Oracle", "Potential"},
    "dilatonic2p1": {"Bound", "BoundQuadrature", "Exact2p1", "Potential"},
    "dilatonic3p1": {"Bound", "BoundQuadrature", "Oracle", "Potential"},
}

MODE_KEYS = ("omega", "angular", "r")
INTEGER_KEYS = {"d", "angular"}

# the headline column each output contributes to a sweep table
PRIMARY = {
    "Bound": "bound",
    "BoundQuadrature": "bound_quadrature",
    "WKB": "wkb",
    "Asymptotic": "asymptotic",
    "Exact2p1": "exact",
    "Oracle": "oracle_T",
    "Potential": "V",
}


@dataclass(frozen=True)
class Settings:
    """Numerical settings shared by every evaluation in a run."""

    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    wkb: WKBConfig = field(default_factory=WKBConfig)
    linearized: bool = True
    dilatonic_bound: str = "closed"
    negate_beta_i: bool = False

    def __post_init__(self):
        if self.dilatonic_bound not in ("closed", "quadrature"):
            raise ValidationError(
                f"dilatonic_bound must be 'closed' or 'quadrature', got {self.dilatonic_bound!r}"
            )

    def header(self) -> dict:
        q, o = self.quadrature, self.oracle
        return {
            "quadrature_tolerance": f"epsabs={q.epsabs!r} epsrel={q.epsrel!r}",
            "oracle_tolerance": f"rtol={o.rtol!r} tail_cut={o.tail_cut!r} "
            f"horizon_offset={o.horizon_offset!r}",
            "hbar": repr(self.wkb.hbar),
            "linearized_2p1": str(self.linearized).lower(),
            "dilatonic2p1_bound": self.dilatonic_bound,
            "negate_beta_i": str(self.negate_beta_i).lower(),
        }


def check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ValidationError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    return family


def check_outputs(family: str, outputs) -> tuple:
    outputs = tuple(outputs)
    if not outputs:
        raise ValidationError("at least one output is required")
    for out in outputs:
        if out not in OUTPUTS:
            raise ValidationError(f"unknown output {out!r}; choose from {OUTPUTS}")
        if out not in FAMILY_OUTPUTS[family]:
            if out == "Oracle" and family == "dilatonic2p1":
                raise UnsupportedFamilyError(
                    "Oracle is not available for dilatonic2p1; use Exact2p1"
                )
            raise UnsupportedFamilyError(f"output {out} is not defined for family {family}")
    return outputs


def make_geometry(family: str, params: dict):
    """Build a geometry from a flat parameter map; mode keys are ignored.

    For RN the horizon half-separation ``A`` may replace ``Q``:
    Q = sqrt((G^2 M^2 - A^2) / G) with P = 0 unless given.
    """
    cls, names = FAMILIES[check_family(family)]
    params = {k: v for k, v in params.items() if k not in MODE_KEYS}
    if family == "rn" and "A" in params:
        params = dict(params)
        A = params.pop("A")
        if "Q" in params:
            raise ValidationError("give either A or Q for rn, not both")
        G, M = params.get("G", 1.0), params.get("M")
        if M is None:
            raise ValidationError("rn with A needs M")
        q2 = (G * G * M * M - A * A) / G - params.get("P", 0.0) ** 2
        if not A > 0 or q2 < 0:
            raise ValidationError(f"A must lie in (0, G M] with room for P, got A={A!r}")
        params["Q"] = math.sqrt(q2)
    unknown = sorted(set(params) - set(names))
    if unknown:
        raise ValidationError(f"unknown parameter(s) {unknown} for {family}; expected {names}")
    return cls(**params)


def coerce(name: str, value):
    """Parameter values from text or numbers into the types the geometries expect."""
    if name == "radius_convention":
        return str(value)
    if name in INTEGER_KEYS:
        f = float(value)
        if f != int(f):
            raise ValidationError(f"{name} must be an integer, got {value!r}")
        return int(f)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}") from None


def _bound(geom, mode, settings):
    if isinstance(geom, Dilatonic2p1Geometry) and settings.dilatonic_bound == "quadrature":
        return bound_quadrature(geom, mode, settings.quadrature, linearized=settings.linearized)
    return closed_form_bound(geom, mode)


def evaluate(family: str, params: dict, outputs, settings: Settings | None = None) -> dict:
    """All requested outputs at one parameter point, as a flat row."""
    settings = settings or Settings()
    outputs = check_outputs(family, outputs)
    geom = make_geometry(family, params)
    needs_mode = any(o != "Potential" for o in outputs)
    angular = coerce("angular", params.get("angular", 0))
    mode = None
    if needs_mode:
        if "omega" not in params:
            raise ValidationError("omega is required for the requested outputs")
        mode = Mode(coerce("omega", params["omega"]), angular)

    row = {"family": family, **geom.params()}
    if mode is not None:
        row.update(omega=mode.omega, angular=mode.angular)
    for out in outputs:
        if out == "Bound":
            rep = _bound(geom, mode, settings)
            row.update(bound=rep.bound, barrier_integral=rep.barrier_integral,
                       bound_method=rep.method)
            if rep.flags:
                row["bound_flags"] = ";".join(rep.flags)
        elif out == "BoundQuadrature":
            rep = bound_quadrature(geom, mode, settings.quadrature, linearized=settings.linearized)
            row.update(bound_quadrature=rep.bound, barrier_integral_quadrature=rep.barrier_integral,
                       quadrature_error=rep.error_estimate)
        elif out == "WKB":
            est = wkb_rn(geom, mode.omega, settings.wkb)
            row.update(wkb=est.value, wkb_exponent=est.intermediates["exponent"],
                       wkb_out_of_range=est.out_of_range)
        elif out == "Asymptotic":
            est = asymptotic_rn(geom, mode.omega, negate_beta_i=settings.negate_beta_i)
            row.update(asymptotic=est.value, beta=est.intermediates["beta"],
                       beta_I=est.intermediates["beta_I"], asymptotic_out_of_range=est.out_of_range)
        elif out == "Exact2p1":
            est = exact_dilatonic2p1(geom, mode.angular, mode.omega)
            row.update(exact=est.value, exact_reflection=est.intermediates["reflection"],
                       below_threshold="below_threshold" in est.flags)
        elif out == "Oracle":
            res = transmission_numeric(geom, mode, settings.oracle)
            row.update(res.row())
        elif out == "Potential":
            if "r" not in params:
                raise ValidationError("the Potential output needs r")
            kw = {"linearized": settings.linearized} if family == "dilatonic2p1" else {}
            row.update(r=coerce("r", params["r"]), V=float(potential(geom, angular, float(params["r"]), **kw)))
    return row


def method_tags(family: str, outputs, settings: Settings) -> str:
    tags = []
    for out in outputs:
        if out == "Bound":
            quad = family == "dilatonic2p1" and settings.dilatonic_bound == "quadrature"
            tags.append(f"Bound={QUADRATURE if quad else CLOSED_FORM}")
        elif out == "BoundQuadrature":
            tags.append(f"BoundQuadrature={QUADRATURE}")
        elif out == "WKB":
            tags.append(f"WKB={comparators.WKB}")
        elif out == "Asymptotic":
            tags.append(f"Asymptotic={comparators.ASYMPTOTIC}")
        elif out == "Exact2p1":
            tags.append(f"Exact2p1={comparators.EXACT_2P1}")
        elif out == "Oracle":
            tags.append("Oracle=ScatteringODE")
        elif out == "Potential":
            tags.append("Potential=Analytic")
    return " ".join(tags)


# --- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    name: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ValidationError(f"grid count must be >= 2, got {self.count}")
        if not self.lo < self.hi:
            raise ValidationError(f"grid needs min < max, got {self.lo!r} >= {self.hi!r}")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"grid scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and not self.lo > 0:
            raise ValidationError("log grid needs a positive minimum")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> str:
        return f"{self.name} {self.scale} [{self.lo!r}, {self.hi!r}] count={self.count}"


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter, optionally crossed with a short series of curves."""

    family: str
    fixed: dict
    swept: Grid
    outputs: tuple
    series: tuple | None = None  # (name, values): one set of columns per value
    figure: str | None = None
    caption: str | None = None
    note: str | None = None

    def __post_init__(self):
        check_family(self.family)
        check_outputs(self.family, self.outputs)
        if self.series is not None:
            name, values = self.series
            if not values:
                raise ValidationError(f"series {name!r} is empty")
            if name == self.swept.name:
                raise ValidationError("series and swept parameter must differ")

    def series_label(self) -> str | None:
        if self.series is None:
            return None
        name = self.series[0]
        if name == "angular":
            return "m" if self.family == "dilatonic2p1" else "l"
        return name

    def columns(self) -> list:
        cols = [self.swept.name]
        primaries = [PRIMARY[o] for o in self.outputs]
        if self.series is None:
            cols += primaries
        else:
            label = self.series_label()
            for v in self.series[1]:
                cols += [f"{p}_{label}{format_series(v)}" for p in primaries]
        return cols + ["error"]

    def header(self, settings: Settings) -> dict:
        h = {}
        if self.figure:
            h["figure"] = self.figure
        if self.caption:
            h["caption_parameters"] = self.caption
        if self.note:
            h["range_note"] = self.note
        h["family"] = self.family
        h["parameters"] = " ".join(f"{k}={v!r}" for k, v in self.fixed.items())
        h["swept"] = self.swept.describe()
        if self.series is not None:
            h["series"] = f"{self.series[0]}=" + ",".join(format_series(v) for v in self.series[1])
        h["outputs"] = ",".join(self.outputs)
        h["methods"] = method_tags(self.family, self.outputs, settings)
        h.update(settings.header())
        return h


def format_series(v) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _evaluate_task(task):
    family, params, outputs, settings = task
    try:
        return evaluate(family, params, outputs, settings), None
    except GreybodyError as exc:
        return None, exc


def _tasks(spec: SweepSpec, settings: Settings):
    series = [None] if spec.series is None else list(spec.series[1])
    for x in spec.swept.values():
        for s in series:
            params = dict(spec.fixed)
            params[spec.swept.name] = coerce(spec.swept.name, x)
            if s is not None:
                params[spec.series[0]] = coerce(spec.series[0], s)
            yield spec.family, params, spec.outputs, settings


def run_sweep(spec: SweepSpec, settings: Settings | None = None, *, workers: int = 1,
              on_error: str = "row"):
    """Evaluate the grid; returns (header, columns, rows) with rows in grid order.

    ``on_error="row"`` records a failing point in the ``error`` column and
    leaves its values blank; ``on_error="fail"`` re-raises the first failure.
    """
    settings = settings or Settings()
    if on_error not in ("row", "fail"):
        raise ValidationError(f"on_error must be 'row' or 'fail', got {on_error!r}")
    tasks = list(_tasks(spec, settings))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_evaluate_task(t) for t in tasks]

    width = 1 if spec.series is None else len(spec.series[1])
    columns = spec.columns()
    value_cols = columns[1:-1]
    per = len(spec.outputs)
    rows = []
    for i, x in enumerate(spec.swept.values()):
        row = {spec.swept.name: coerce(spec.swept.name, x)}
        errors = []
        for j in range(width):
            res, exc = results[i * width + j]
            cols = value_cols[j * per:(j + 1) * per]
            if exc is not None:
                if on_error == "fail":
                    raise exc
                tag = "" if spec.series is None else f"{spec.series_label()}{format_series(spec.series[1][j])}: "
                errors.append(f"{tag}{type(exc).__name__}: {exc}")
                continue
            for col, out in zip(cols, spec.outputs):
                row[col] = res[PRIMARY[out]]
        if errors:
            row["error"] = " | ".join(errors)
        rows.append(row)
    if not any("error" in r for r in rows):
        columns = columns[:-1]
    return spec.header(settings), columns, rows


# --- figure presets ----------------------------------------------------------


@dataclass(frozen=True)
class FigurePreset:
    id: str
    spec: SweepSpec
    note: str = ""

    def __post_init__(self):
        if self.note and not self.spec.note:
            object.__setattr__(self, "spec", replace(self.spec, note=self.note))

    def with_points(self, count: int | None) -> FigurePreset:
        if count is None:
            return self
        return replace(self, spec=replace(self.spec, swept=replace(self.spec.swept, count=count)))


def _potential_grid(family, fixed, series, count=400, span=(1.001, 20.0)):
    """r grid starting just outside the largest horizon across the series."""
    horizons = []
    for v in (series[1] if series else [None]):
        params = dict(fixed)
        if v is not None and series[0] != "angular":
            params[series[0]] = v
        horizons.append(outer_horizon(make_geometry(family, params)))
    rh = max(horizons)
    return Grid("r", span[0] * rh, span[1] * rh, count, "log")


def _presets() -> dict:
    p = {}
    fixed = {"G": 1.0, "M": 2.0, "Q": 1.0, "P": 0.0}
    series = ("angular", [0, 1, 2])
    p["fig1"] = FigurePreset("fig1", SweepSpec(
        "rn", fixed, _potential_grid("rn", fixed, series), ("Potential",), series,
        "fig1", "Q = 1, M = 2, l = 0,1,2"))
    p["fig2"] = FigurePreset("fig2", SweepSpec(
        "rn", {"G": 1.0, "M": 2.0, "P": 0.0, "omega": 2.0}, Grid("A", 0.02, 2.0, 100),
        ("Bound",), ("angular", [0, 1, 2]), "fig2", "GM = 2, omega = 2, l = 0,1,2"),
        note="A in (0, 2]; A = 2 is the uncharged hole")
    p["fig3"] = FigurePreset("fig3", SweepSpec(
        "rn", {"G": 1.0, "M": 2.0, "Q": 1.0, "P": 0.0, "angular": 0}, Grid("omega", 0.1, 10.0, 100),
        ("Bound", "Asymptotic"), None, "fig3", "G = 1, M = 2, Q = 1, l = 0"))
    fixed = {"G": 1.0, "M": 1.0, "angular": 1}
    series = ("d", [5, 6, 7, 8, 9, 10])
    p["fig4"] = FigurePreset("fig4", SweepSpec(
        "tangherlini", fixed, _potential_grid("tangherlini", fixed, series), ("Potential",), series,
        "fig4", "l = 1, GM = 1, d = 5..10"))
    p["fig5"] = FigurePreset("fig5", SweepSpec(
        "tangherlini", {"G": 1.0, "angular": 1, "omega": 2.0}, Grid("M", 1.0, 10.0, 91),
        ("Bound",), ("d", [4, 5, 6, 7, 8]), "fig5", "l = 1, omega = 2, d = 4..8"))
    fixed = {"M": 10.0, "Q": 1.0, "Lam": 0.1, "angular": 1}
    p["fig6"] = FigurePreset("fig6", SweepSpec(
        "dilatonic2p1", fixed, _potential_grid("dilatonic2p1", fixed, None), ("Potential",), None,
        "fig6", "m = 1, Lambda = 0.1, Q = 1, M = 10"))
    p["fig7"] = FigurePreset("fig7", SweepSpec(
        "dilatonic2p1", {"M": 10.0, "Q": 0.0, "Lam": 0.3, "angular": 0}, Grid("omega", 0.65, 3.0, 100),
        ("Bound", "Exact2p1"), None, "fig7", "m = 0, M = 10, Q = 0, Lambda = 0.3"),
        note="starts above the threshold omega = 2 Lambda where the exact T vanishes")
    p["fig8"] = FigurePreset("fig8", SweepSpec(
        "dilatonic2p1", {"M": 10.0, "Lam": 0.1, "angular": 0, "omega": 2.0}, Grid("Q", 0.0, 3.9, 79),
        ("Bound",), None, "fig8", "m = 0, M = 10, omega = 2, Lambda = 0.1"),
        note="Q below M / (8 sqrt(Lambda)) = 3.95 keeps two horizons")
    fixed = {"M": 10.0, "Q": 1.0, "angular": 1}
    p["fig9"] = FigurePreset("fig9", SweepSpec(
        "dilatonic3p1", fixed, _potential_grid("dilatonic3p1", fixed, None), ("Potential",), None,
        "fig9", "l = 1, Q = 1, M = 10"))
    p["fig10"] = FigurePreset("fig10", SweepSpec(
        "dilatonic3p1", {"M": 10.0, "angular": 1, "omega": 2.0}, Grid("Q", 0.05, 14.1, 100),
        ("Bound",), None, "fig10", "M = 10, omega = 2, l = 1"),
        note="Q in (0, sqrt(2) M) keeps r+ > r-")
    p["fig-lambda"] = FigurePreset("fig-lambda", SweepSpec(
        "dilatonic2p1", {"M": 10.0, "Q": 1.0, "angular": 0, "omega": 2.0}, Grid("Lam", 0.01, 0.76, 76),
        ("Bound",), None, "fig-lambda", "m = 0, M = 10, omega = 2, Q = 1"),
        note="Lambda kept below 0.773 where the closed-form argument first changes sign")
    return p


PRESETS = _presets()


def figure_preset(fid: str) -> FigurePreset:
    try:
        return PRESETS[fid]
    except KeyError:
        raise ValidationError(f"unknown figure {fid!r}; choose from {sorted(PRESETS)}") from None
