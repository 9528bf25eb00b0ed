"""greybody command line: point, sweep, figure <id>, verify.

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 verification failure.

Numerical tolerances resolve as: built-in default < environment variable <
config file < command-line flag. The config file is flat ``key = value`` text
whose keys are the long flag names (dashes or underscores).
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass

from .bounds import QuadratureConfig
from .comparators import WKBConfig
from .csvio import render_table
from .errors import NumericalError, ValidationError
from .oracle import OracleConfig
from .sweeps import (
    OUTPUTS,
    Grid,
    Settings,
    SweepSpec,
    check_family,
    check_outputs,
    coerce,
    evaluate,
    figure_preset,
    method_tags,
    run_sweep,
)
from .verify import DEFAULT_SEED, mutation, run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_VERIFICATION = 0, 1, 2, 3


@dataclass(frozen=True)
class Tunable:
    flag: str
    env: str
    kind: type
    help: str


TUNABLES = (
    Tunable("quad-epsabs", "GREYBODY_QUAD_EPSABS", float, "quadrature absolute tolerance"),
    Tunable("quad-epsrel", "GREYBODY_QUAD_EPSREL", float, "quadrature relative tolerance"),
    Tunable("oracle-rtol", "GREYBODY_ORACLE_RTOL", float, "scattering ODE relative tolerance"),
    Tunable("oracle-tail-cut", "GREYBODY_ORACLE_TAIL_CUT", float, "outer matching tail criterion"),
    Tunable("oracle-horizon-offset", "GREYBODY_ORACLE_HORIZON_OFFSET", float,
            "relative inner offset r+ (1 + delta)"),
    Tunable("hbar", "GREYBODY_HBAR", float, "hbar in the WKB exponent"),
)


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _dest(flag: str) -> str:
    return flag.replace("-", "_")


def read_config(path: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_string("[greybody]\n" + fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ValidationError(f"malformed config file {path!r}: {exc}") from None
    return {_dest(k): v for k, v in parser["greybody"].items()}


def resolve(args, file_values: dict, environ=os.environ) -> dict:
    """Final value of every tunable that was set anywhere; unset ones are omitted."""
    out = {}
    for t in TUNABLES:
        key = _dest(t.flag)
        for source, raw in (("flag", getattr(args, key, None)), ("file", file_values.get(key)),
                            ("env", environ.get(t.env))):
            if raw is None:
                continue
            try:
                out[key] = t.kind(raw)
            except ValueError:
                raise ValidationError(f"{t.flag} from {source} is not a number: {raw!r}") from None
            break
    return out


def _flag_or_file(args, file_values, name, default, kind=str):
    value = getattr(args, name, None)
    if value is None:
        value = file_values.get(name)
    if value is None:
        return default
    if kind is bool and isinstance(value, str):
        return value.strip().lower() in ("1", "true", "yes", "on")
    return kind(value)


def build_settings(args, environ=os.environ) -> Settings:
    file_values = read_config(args.config) if getattr(args, "config", None) else {}
    known = {_dest(t.flag) for t in TUNABLES} | {
        "nonlinear", "dilatonic_bound", "negate_beta_i", "workers", "on_error", "seed", "suite"}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise ValidationError(f"unknown config key(s): {unknown}")
    tol = resolve(args, file_values, environ)
    q, o = QuadratureConfig(), OracleConfig()
    quad = QuadratureConfig(epsabs=tol.get("quad_epsabs", q.epsabs),
                            epsrel=tol.get("quad_epsrel", q.epsrel))
    orc = OracleConfig(rtol=tol.get("oracle_rtol", o.rtol),
                       tail_cut=tol.get("oracle_tail_cut", o.tail_cut),
                       horizon_offset=tol.get("oracle_horizon_offset", o.horizon_offset))
    for name, value in (("quad-epsabs", quad.epsabs), ("quad-epsrel", quad.epsrel),
                        ("oracle-rtol", orc.rtol), ("oracle-tail-cut", orc.tail_cut),
                        ("oracle-horizon-offset", orc.horizon_offset)):
        if not value > 0:
            raise ValidationError(f"{name} must be positive, got {value!r}")
    args._file_values = file_values
    return Settings(
        quadrature=quad,
        oracle=orc,
        wkb=WKBConfig(hbar=tol.get("hbar", 1.0)),
        linearized=not _flag_or_file(args, file_values, "nonlinear", False, bool),
        dilatonic_bound=_flag_or_file(args, file_values, "dilatonic_bound", "closed"),
        negate_beta_i=_flag_or_file(args, file_values, "negate_beta_i", False, bool),
    )


def _parse_params(items) -> dict:
    params = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ValidationError(f"--param expects NAME=VALUE, got {item!r}")
        params[name.strip()] = coerce(name.strip(), value.strip())
    return params


def _parse_outputs(text: str) -> tuple:
    lookup = {o.lower(): o for o in OUTPUTS}
    out = []
    for part in text.split(","):
        key = part.strip().lower()
        if key not in lookup:
            raise ValidationError(f"unknown output {part.strip()!r}; choose from {OUTPUTS}")
        out.append(lookup[key])
    return tuple(out)


def _parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ValidationError(f"--sweep expects NAME:MIN:MAX:COUNT[:log], got {text!r}")
    try:
        lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ValidationError(f"--sweep has a non-numeric field: {text!r}") from None
    return Grid(parts[0], lo, hi, count, parts[4] if len(parts) == 5 else "linear")


def _parse_series(text: str | None):
    if not text:
        return None
    name, sep, values = text.partition("=")
    if not sep:
        raise ValidationError(f"--series expects NAME=V1,V2,..., got {text!r}")
    name = name.strip()
    return name, [coerce(name, v) for v in values.split(",") if v.strip()]


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mode_params(args) -> dict:
    params = _parse_params(args.param)
    for key in ("omega", "angular", "r"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = coerce(key, value)
    return params


# --- subcommands -------------------------------------------------------------


def cmd_point(args) -> int:
    settings = build_settings(args)
    family = check_family(args.family)
    outputs = check_outputs(family, _parse_outputs(args.outputs))
    params = _mode_params(args)
    row = evaluate(family, params, outputs, settings)
    header = {"family": family,
              "parameters": " ".join(f"{k}={v!r}" for k, v in params.items()),
              "outputs": ",".join(outputs),
              "methods": method_tags(family, outputs, settings),
              **settings.header()}
    _emit(render_table(header, list(row), [row]), args.out)
    return EXIT_OK


def _sweep_run(spec, settings, args) -> int:
    workers = int(_flag_or_file(args, args._file_values, "workers", 1, int))
    on_error = _flag_or_file(args, args._file_values, "on_error", "row")
    header, columns, rows = run_sweep(spec, settings, workers=workers, on_error=on_error)
    _emit(render_table(header, columns, rows), args.out)
    failed = sum(1 for r in rows if r.get("error"))
    if failed:
        print(f"{failed} of {len(rows)} rows carry errors", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    settings = build_settings(args)
    family = check_family(args.family)
    spec = SweepSpec(
        family=family,
        fixed=_mode_params(args),
        swept=_parse_grid(args.sweep),
        outputs=check_outputs(family, _parse_outputs(args.outputs)),
        series=_parse_series(args.series),
    )
    return _sweep_run(spec, settings, args)


def cmd_figure(args) -> int:
    settings = build_settings(args)
    preset = figure_preset(args.id).with_points(args.points)
    return _sweep_run(preset.spec, settings, args)


def cmd_verify(args) -> int:
    build_settings(args)
    suite = _flag_or_file(args, args._file_values, "suite", "fast")
    seed = int(_flag_or_file(args, args._file_values, "seed", DEFAULT_SEED, int))
    overrides = {}
    for name in args.mutate or ():
        try:
            overrides.update(mutation(name))
        except KeyError as exc:
            raise ValidationError(str(exc.args[0])) from None

    def progress(step, results, seconds):
        bad = sum(not r.passed for r in results)
        print(f"{step}: {len(results) - bad}/{len(results)} passed ({seconds:.1f}s)", file=sys.stderr)

    results = run_checks(suite, seed=seed, overrides=overrides, progress=progress)
    failed = [r for r in results if not r.passed]
    header = {"suite": suite, "seed": str(seed), "checks": str(len(results)),
              "failed": str(len(failed))}
    if overrides:
        header["mutated"] = ",".join(sorted(overrides))
    _emit(render_table(header, ["check", "passed", "detail"], [r.row() for r in results]), args.out)
    for r in failed:
        print(f"FAIL {r.name}: {r.detail}", file=sys.stderr)
    return EXIT_VERIFICATION if failed else EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags win over it")
    common.add_argument("--out", help="write CSV here instead of stdout")
    for t in TUNABLES:
        common.add_argument(f"--{t.flag}", type=str, default=None,
                            help=f"{t.help} (env {t.env})")
    common.add_argument("--nonlinear", action="store_const", const=True, default=None,
                        help="use the full 2+1 potential instead of its linearized form")
    common.add_argument("--dilatonic-bound", choices=("closed", "quadrature"), default=None,
                        help="2+1 bound from the closed form (default) or from quadrature")
    common.add_argument("--negate-beta-i", action="store_const", const=True, default=None,
                        help="flip the sign of beta_I in the asymptotic formula")

    runner = _Parser(add_help=False)
    runner.add_argument("--workers", type=int, default=None, help="worker processes")
    runner.add_argument("--on-error", choices=("row", "fail"), default=None,
                        help="record failing points as error rows (default) or stop")

    point = _Parser(add_help=False)
    point.add_argument("--family", required=True,
                       choices=("rn", "tangherlini", "dilatonic2p1", "dilatonic3p1"))
    point.add_argument("--param", "-p", action="append", metavar="NAME=VALUE",
                       help="geometry parameter (repeatable); rn also accepts A")
    point.add_argument("--omega", "-w", type=str)
    point.add_argument("--angular", "-l", type=str, help="l, or m for dilatonic2p1")
    point.add_argument("--outputs", "-o", default="Bound",
                       help=f"comma list from {','.join(OUTPUTS)}")

    parser = _Parser(prog="greybody", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", parents=[common, point], help="evaluate one parameter point")
    p.add_argument("--r", type=str, help="radius for the Potential output")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", parents=[common, runner, point], help="sweep one parameter")
    p.add_argument("--sweep", required=True, metavar="NAME:MIN:MAX:COUNT[:log]")
    p.add_argument("--series", metavar="NAME=V1,V2,...", help="one column set per value")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", parents=[common, runner], help="run a figure preset")
    p.add_argument("id", help="fig1 .. fig10 or fig-lambda")
    p.add_argument("--points", type=int, default=None, help="override the preset grid size")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", parents=[common], help="run the self-verification suite")
    p.add_argument("--suite", choices=("fast", "full"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mutate", action="append", metavar="FORMULA",
                   help="corrupt a named formula to exercise the suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"validation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
