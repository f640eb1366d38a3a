"""Command-line driver: figure presets, sweeps, thresholds and single-state reports.

Options may also be read from a ``key = value`` text file given with
``--config``; keys are the long option names without leading dashes
(``temperature-mk`` and ``temperature_mk`` are both accepted). Flags given on
the command line override the file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .dce import DEFAULT_L_EFF0, DEFAULT_V, Convention, DriveConfig, ThermalEnvironment, output_state
from .errors import ConfigError, NumericalFailure
from .sweep import (
    FIG1_TEMPERATURES_MK,
    FIG2_EPSILONS,
    MEASURES,
    SweepSpec,
    emit_report,
    fig1_spec,
    fig2_spec,
    find_epsilon_threshold,
    find_threshold,
    format_csv,
    format_threshold_comparison,
    run_sweep,
    threshold_comparison,
)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULTS = {
    "epsilon": 0.1,
    "temperature_mk": 50.0,
    "omega_d_ghz": 10.0,
    "omega_d_rad": False,
    "l_eff_mm": DEFAULT_L_EFF0 * 1e3,
    "v_mps": DEFAULT_V,
    "convention": "paper",
    "pipeline": None,  # per-subcommand default
    "units": "nats",
    "out": None,
    "allow_nonperturbative": False,
    "variable": None,  # sweep: epsilon, threshold: temperature
    "lo": None,
    "hi": None,
    "count": 51,
    "measures": ",".join(MEASURES),
    "measure": "E",
    "t_lo": 10.0,
    "t_hi": 120.0,
    "eps_lo": 0.0,
    "eps_hi": 0.6,
    "compare_published": False,
    "json": False,
}

_FLOATS = {"epsilon", "temperature_mk", "omega_d_ghz", "l_eff_mm", "v_mps", "lo", "hi", "t_lo", "t_hi", "eps_lo", "eps_hi"}
_BOOLS = {"omega_d_rad", "allow_nonperturbative", "compare_published", "json"}
_INTS = {"count"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def read_config(path) -> dict:
    """Parse a ``key = value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key = key.strip().replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value.strip(), f"{path}:{lineno}")
    return out


def _coerce(key, value, where):
    try:
        if key in _FLOATS:
            return float(value)
        if key in _INTS:
            return int(value)
        if key in _BOOLS:
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
    except ValueError:
        raise ConfigError(f"{where}: invalid value {value!r} for {key}") from None
    return value


def _common(p):
    g = p.add_argument_group("physical parameters")
    g.add_argument("--epsilon", type=float, help="normalised pump amplitude")
    g.add_argument("--temperature-mk", type=float, help="temperature in mK")
    g.add_argument("--omega-d-ghz", type=float, help="drive frequency omega_d/2pi in GHz (default 10)")
    g.add_argument(
        "--omega-d-rad",
        action="store_true",
        default=None,
        help="read --omega-d-ghz as angular frequency in 1e9 rad/s",
    )
    g.add_argument("--l-eff-mm", type=float, help="static effective length in mm (default 0.5)")
    g.add_argument("--v-mps", type=float, help="line speed of light in m/s (default 1.2e8)")
    g.add_argument("--convention", choices=["paper", "be"], help="occupation convention: paper = twice Bose-Einstein (default), be = Bose-Einstein")
    o = p.add_argument_group("output")
    o.add_argument("--pipeline", choices=["exact", "perturbative", "both"])
    o.add_argument("--units", choices=["nats", "bits"])
    o.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    o.add_argument("--allow-nonperturbative", action="store_true", default=None)
    o.add_argument("--config", metavar="FILE", help="key = value configuration file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="casimir-coherence", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fig1", help="measures vs pump amplitude at fixed temperature")
    p.add_argument("panel", nargs="?", choices=sorted(FIG1_TEMPERATURES_MK), help="omit for all panels")
    _common(p)

    p = sub.add_parser("fig2", help="measures vs temperature at fixed pump amplitude")
    p.add_argument("panel", nargs="?", choices=sorted(FIG2_EPSILONS), help="omit for all panels")
    _common(p)

    p = sub.add_parser("sweep", help="general one-parameter sweep")
    p.add_argument("--variable", choices=["epsilon", "temperature"])
    p.add_argument("--lo", type=float, help="range start (epsilon, or temperature in mK)")
    p.add_argument("--hi", type=float, help="range end")
    p.add_argument("--count", type=int, help="number of grid points")
    p.add_argument("--measures", help="comma-separated subset of E,sqrtD,sqrtC")
    _common(p)

    p = sub.add_parser("threshold", help="locate where a measure vanishes")
    p.add_argument("--measure", choices=["E", "D", "C"])
    p.add_argument("--variable", choices=["epsilon", "temperature"])
    p.add_argument("--t-lo", type=float, help="lower temperature bracket in mK")
    p.add_argument("--t-hi", type=float, help="upper temperature bracket in mK")
    p.add_argument("--eps-lo", type=float)
    p.add_argument("--eps-hi", type=float)
    p.add_argument(
        "--compare-published",
        action="store_true",
        default=None,
        help="tabulate entanglement and discord thresholds against the published values",
    )
    _common(p)

    p = sub.add_parser("report", help="all measures for one (epsilon, T) point")
    p.add_argument("--json", action="store_true", default=None, help="emit the JSON record")
    _common(p)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags (in increasing priority)."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(read_config(args.config))
    for key, value in vars(args).items():
        if key in ("config", "command", "panel"):
            continue
        if value is not None:
            opts[key] = value
    return opts


def _physics(opts):
    scale = 1e9 if opts["omega_d_rad"] else 2 * math.pi * 1e9
    return {
        "omega_d": opts["omega_d_ghz"] * scale,
        "l_eff0": opts["l_eff_mm"] * 1e-3,
        "v": opts["v_mps"],
    }


def _spec_kwargs(opts, default_pipeline):
    return dict(
        **_physics(opts),
        convention=Convention(opts["convention"]),
        pipeline=opts["pipeline"] or default_pipeline,
        units=opts["units"],
        allow_nonperturbative=bool(opts["allow_nonperturbative"]),
    )


def _measures(opts):
    return tuple(m.strip() for m in opts["measures"].split(",") if m.strip())


def _emit(text, opts):
    if opts["out"]:
        try:
            Path(opts["out"]).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {opts['out']}: {exc}") from None
    else:
        sys.stdout.write(text)


def _figure(args, opts, panels, make_spec, title):
    chosen = [args.panel] if args.panel else sorted(panels)
    parts = []
    for i, panel in enumerate(chosen):
        spec = make_spec(panel, measures=_measures(opts), **_spec_kwargs(opts, "perturbative"))
        label = title + ("".join(chosen) if len(chosen) > 1 else panel)
        parts.append(format_csv(spec, run_sweep(spec), label, header=i == 0))
    return "".join(parts)


def cmd_fig1(args, opts):
    return _figure(args, opts, FIG1_TEMPERATURES_MK, fig1_spec, "fig1")


def cmd_fig2(args, opts):
    return _figure(args, opts, FIG2_EPSILONS, fig2_spec, "fig2")


def cmd_sweep(args, opts):
    if opts["lo"] is None or opts["hi"] is None:
        raise ConfigError("sweep needs --lo and --hi")
    spec = SweepSpec(
        opts["variable"] or "epsilon",
        opts["lo"],
        opts["hi"],
        opts["count"],
        epsilon=opts["epsilon"],
        temperature_mk=opts["temperature_mk"],
        measures=_measures(opts),
        **_spec_kwargs(opts, "perturbative"),
    )
    return format_csv(spec, run_sweep(spec))


def cmd_threshold(args, opts):
    convention = Convention(opts["convention"])
    if opts["compare_published"]:
        return format_threshold_comparison(threshold_comparison(convention))
    pipeline = opts["pipeline"] or "both"
    pipelines = ["perturbative", "exact"] if pipeline == "both" else [pipeline]
    lines = []
    for pl in pipelines:
        if (opts["variable"] or "temperature") == "temperature":
            drive = DriveConfig(opts["epsilon"], **_physics(opts))
            res = find_threshold(opts["measure"], drive, (opts["t_lo"], opts["t_hi"]), pl, convention)
        else:
            res = find_epsilon_threshold(
                opts["measure"],
                opts["temperature_mk"],
                (opts["eps_lo"], opts["eps_hi"]),
                pl,
                convention,
                **_physics(opts),
            )
        lines.append(res.describe())
    return "\n".join(lines) + "\n"


def cmd_report(args, opts):
    drive = DriveConfig(opts["epsilon"], **_physics(opts))
    env = ThermalEnvironment(opts["temperature_mk"] * 1e-3, Convention(opts["convention"]))
    if not drive.perturbative and not opts["allow_nonperturbative"]:
        raise ConfigError(f"f = {drive.f:.4g} is outside the perturbative regime; pass --allow-nonperturbative")
    text, record = emit_report(output_state(drive, env, warn=False), units=opts["units"])
    if opts["json"]:
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    return text


COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        opts = resolve(args)
        _emit(COMMANDS[args.command](args, opts), opts)
    except NumericalFailure as exc:
        print(f"casimir-coherence: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"casimir-coherence: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
