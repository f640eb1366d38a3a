"""Parameter sweeps, threshold search and reports for the DCE output state.

Measures are tabulated as ``E``, ``sqrt(D)`` and ``sqrt(C)`` so that all
three columns are of first order in ``f``.
"""

from __future__ import annotations

import csv
import io
import math
import subprocess
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .dce import (
    HBAR,
    K_B,
    DEFAULT_L_EFF0,
    DEFAULT_OMEGA_D,
    DEFAULT_V,
    PERTURBATIVE_F_MAX,
    Convention,
    DceState,
    DriveConfig,
    ThermalEnvironment,
    output_state,
    perturbative_coherence,
    perturbative_discord,
    perturbative_negativity,
)
from .errors import ConfigError
from .measures import measure_report

MEASURES = ("E", "sqrtD", "sqrtC")
PIPELINES = ("perturbative", "exact", "both")
VARIABLES = ("epsilon", "temperature")
COLUMNS = ("epsilon", "f", "T_mK", "n_th", "E", "sqrtD", "sqrtC", "diag")
EXACT_COLUMNS = ("E_exact", "sqrtD_exact", "sqrtC_exact")
NUMBER_FORMAT = "{:.8e}"  # 9 significant digits

FIG1_TEMPERATURES_MK = {"a": 30.0, "b": 50.0, "c": 70.0}
FIG1_EPSILON_RANGE = (0.0, 0.6, 121)
FIG2_EPSILONS = {"a": 0.1, "b": 0.5}
FIG2_TEMPERATURE_RANGE_MK = (10.0, 120.0, 111)

#: threshold temperatures quoted with the published figures, in mK
QUOTED_THRESHOLDS_MK = {
    0.1: {"E": 48.0, "D": 67.0},
    0.5: {"E": 70.0, "D": 100.0},
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    lo: float
    hi: float
    count: int
    epsilon: float = 0.1
    temperature_mk: float = 50.0
    omega_d: float = DEFAULT_OMEGA_D
    l_eff0: float = DEFAULT_L_EFF0
    v: float = DEFAULT_V
    convention: Convention = Convention.CALIBRATED
    measures: tuple[str, ...] = MEASURES
    pipeline: str = "perturbative"
    units: str = "nats"
    allow_nonperturbative: bool = False

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ConfigError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if not self.lo < self.hi:
            raise ConfigError(f"sweep range needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.count < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.count}")
        bad = set(self.measures) - set(MEASURES)
        if bad or not self.measures:
            raise ConfigError(f"measures must be a non-empty subset of {MEASURES}, got {self.measures}")
        if self.pipeline not in PIPELINES:
            raise ConfigError(f"pipeline must be one of {PIPELINES}, got {self.pipeline!r}")
        if self.units not in ("nats", "bits"):
            raise ConfigError(f"units must be 'nats' or 'bits', got {self.units!r}")
        try:
            object.__setattr__(self, "convention", Convention(self.convention))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.variable == "temperature":
            if self.lo <= 0:
                raise ConfigError("temperatures must be positive")
            eps_max = self.epsilon
        else:
            if self.temperature_mk <= 0:
                raise ConfigError("temperature must be positive")
            if self.lo < 0 or self.hi >= 1:
                raise ConfigError("epsilon range must lie in [0, 1)")
            eps_max = self.hi
        try:
            drive = self.drive(eps_max)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not drive.perturbative and not self.allow_nonperturbative:
            raise ConfigError(
                f"f reaches {drive.f:.4g} >= {PERTURBATIVE_F_MAX}; pass --allow-nonperturbative to proceed"
            )

    def drive(self, epsilon: float) -> DriveConfig:
        return DriveConfig(epsilon, self.omega_d, self.l_eff0, self.v)

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def points(self):
        """``(epsilon, temperature_mK)`` pairs in output order."""
        for x in self.grid():
            x = float(x)
            yield (x, self.temperature_mk) if self.variable == "epsilon" else (self.epsilon, x)


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    f: float
    T_mK: float
    n_th: float
    perturbative: dict | None
    exact: dict | None
    diagnostics: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThresholdResult:
    measure: str
    pipeline: str
    variable: str
    critical: float | None  # mK or epsilon; None when there is no sign change
    bracket_width: float
    iterations: int
    bracket: tuple[float, float]

    @property
    def found(self) -> bool:
        return self.critical is not None

    def describe(self) -> str:
        unit = " mK" if self.variable == "temperature" else ""
        if not self.found:
            lo, hi = self.bracket
            return f"{self.measure} ({self.pipeline}): no threshold in range [{lo:g}, {hi:g}]{unit}"
        return (
            f"{self.measure} ({self.pipeline}): vanishes at {self.variable} = "
            f"{self.critical:.4f}{unit} (bracket width {self.bracket_width:.2g}{unit})"
        )


def _to_units(value, units):
    return value / math.log(2.0) if units == "bits" else value


def perturbative_values(f: float, n_th: float, diagnostics: list[str] | None = None) -> dict:
    return {
        "E": perturbative_negativity(f, n_th),
        "D": perturbative_discord(f, n_th),
        "C": perturbative_coherence(f, n_th, diagnostics),
    }


def exact_values(state: DceState, diagnostics: list[str] | None = None) -> dict:
    report = measure_report(state.cm)
    if diagnostics is not None:
        diagnostics.extend(report.diagnostics)
    return {"E": report.negativity, "D": report.discord, "C": report.coherence}


def _row_measures(values, units):
    v = {k: _to_units(x, units) for k, x in values.items()}
    return {"E": v["E"], "sqrtD": math.sqrt(v["D"]), "sqrtC": math.sqrt(v["C"])}


def _state(drive, temperature_mk, convention):
    return output_state(drive, ThermalEnvironment(temperature_mk * 1e-3, convention), warn=False)


def _evaluate(spec, epsilon, temperature_mk):
    state = _state(spec.drive(epsilon), temperature_mk, spec.convention)
    tags = []
    if state.f >= PERTURBATIVE_F_MAX:
        tags.append("nonperturbative_f")
    pert = exact = None
    if spec.pipeline in ("perturbative", "both"):
        notes = []
        pert = _row_measures(perturbative_values(state.f, state.n_th, notes), spec.units)
        if notes:
            tags.append("coherence_n0_fallback")
    if spec.pipeline in ("exact", "both"):
        notes = []
        exact = _row_measures(exact_values(state, notes), spec.units)
        if any("bona fide" in n for n in notes):
            tags.append("cm_not_bona_fide")
        if any("clamped" in n for n in notes if not n.startswith("negativity")):
            tags.append("clamped")
    return SweepRow(epsilon, state.f, temperature_mk, state.n_th, pert, exact, tuple(tags))


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per grid point, in grid order."""
    return [_evaluate(spec, eps, t) for eps, t in spec.points()]


# -- CSV ----------------------------------------------------------------------


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else "unknown"


def csv_columns(spec: SweepSpec) -> tuple[str, ...]:
    if spec.pipeline == "both":
        return COLUMNS[:-1] + EXACT_COLUMNS + COLUMNS[-1:]
    return COLUMNS


def metadata(spec: SweepSpec, title: str = "sweep") -> dict:
    primary = "exact" if spec.pipeline == "exact" else "perturbative"
    return {
        "title": title,
        "package": f"casimir-coherence {__version__}",
        "build": git_describe(),
        "hbar_J_s": repr(HBAR),
        "k_B_J_per_K": repr(K_B),
        "omega_d_rad_per_s": repr(spec.omega_d),
        "mode_frequency": "omega_d/2 for both modes",
        "l_eff0_m": repr(spec.l_eff0),
        "v_m_per_s": repr(spec.v),
        "occupation_convention": spec.convention.value,
        "pipeline": spec.pipeline,
        "columns_E_sqrtD_sqrtC": primary,
        "measures": ",".join(spec.measures),
        "units": spec.units,
        "variable": spec.variable,
    }


def _fmt(x):
    return "" if x is None else NUMBER_FORMAT.format(x)


def format_csv(spec: SweepSpec, rows, title: str = "sweep", header: bool = True) -> str:
    """CSV text with a ``#`` metadata block; ``header=False`` emits data rows only."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        for key, value in metadata(spec, title).items():
            buf.write(f"# {key} = {value}\n")
        writer.writerow(csv_columns(spec))
    for row in rows:
        primary = row.exact if spec.pipeline == "exact" else row.perturbative
        cells = [_fmt(row.epsilon), _fmt(row.f), _fmt(row.T_mK), _fmt(row.n_th)]
        cells += [_fmt(primary[m]) if m in spec.measures else "" for m in MEASURES]
        if spec.pipeline == "both":
            cells += [_fmt(row.exact[m]) if m in spec.measures else "" for m in MEASURES]
        cells.append("|".join(row.diagnostics))
        writer.writerow(cells)
    return buf.getvalue()


def read_csv(text: str):
    """Parse :func:`format_csv` output into ``(metadata, rows)``."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif line:
            body.append(line)
    rows = []
    for rec in csv.DictReader(body):
        rows.append({k: (v if k == "diag" or v == "" else float(v)) for k, v in rec.items()})
    return meta, rows


# -- thresholds ---------------------------------------------------------------

_MEASURE_KEYS = {"E": "E", "D": "D", "sqrtD": "D", "C": "C", "sqrtC": "C"}


def _measure_value(measure, pipeline, state):
    key = _MEASURE_KEYS[measure]
    if pipeline == "perturbative":
        return perturbative_values(state.f, state.n_th)[key]
    return exact_values(state)[key]


def _bisect(positive, lo, hi, tol, max_iter=60):
    """Locate where ``positive`` switches value between ``lo`` and ``hi``."""
    p_lo = positive(lo)
    if p_lo == positive(hi):
        return None, hi - lo, 0
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if positive(mid) == p_lo:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), hi - lo, it


def _check_threshold_args(measure, pipeline):
    if measure not in _MEASURE_KEYS:
        raise ConfigError(f"unknown measure {measure!r}; use E, D or C")
    if pipeline not in ("perturbative", "exact"):
        raise ConfigError(f"threshold pipeline must be 'perturbative' or 'exact', got {pipeline!r}")


def find_threshold(
    measure: str,
    drive: DriveConfig,
    t_range_mk=(10.0, 120.0),
    pipeline: str = "perturbative",
    convention=Convention.CALIBRATED,
    tol_mk: float = 0.01,
) -> ThresholdResult:
    """Temperature at which ``measure`` stops being positive, by bisection."""
    _check_threshold_args(measure, pipeline)
    lo, hi = map(float, t_range_mk)
    if not 0 < lo < hi:
        raise ConfigError(f"temperature range must satisfy 0 < lo < hi, got {t_range_mk}")

    def positive(t_mk):
        return _measure_value(measure, pipeline, _state(drive, t_mk, convention)) > 0.0

    crit, width, it = _bisect(positive, lo, hi, tol_mk)
    return ThresholdResult(measure, pipeline, "temperature", crit, width, it, (lo, hi))


def find_epsilon_threshold(
    measure: str,
    temperature_mk: float,
    eps_range=(0.0, 0.6),
    pipeline: str = "perturbative",
    convention=Convention.CALIBRATED,
    tol: float = 1e-5,
    **drive_kwargs,
) -> ThresholdResult:
    """Pump amplitude above which ``measure`` becomes positive."""
    _check_threshold_args(measure, pipeline)
    lo, hi = map(float, eps_range)

    def positive(eps):
        state = _state(DriveConfig(eps, **drive_kwargs), temperature_mk, convention)
        return _measure_value(measure, pipeline, state) > 0.0

    crit, width, it = _bisect(positive, lo, hi, tol)
    return ThresholdResult(measure, pipeline, "epsilon", crit, width, it, (lo, hi))


def threshold_comparison(convention=Convention.CALIBRATED) -> list[dict]:
    """Computed entanglement and discord thresholds next to the quoted ones."""
    out = []
    for eps, quoted in QUOTED_THRESHOLDS_MK.items():
        drive = DriveConfig(eps)
        for measure in ("E", "D"):
            entry = {"epsilon": eps, "f": drive.f, "measure": measure, "quoted_mK": quoted[measure]}
            for pipeline in ("perturbative", "exact"):
                res = find_threshold(measure, drive, (10.0, 150.0), pipeline, convention)
                entry[f"{pipeline}_mK"] = res.critical
                entry[f"{pipeline}_bracket_mK"] = res.bracket_width
            out.append(entry)
    return out


def format_threshold_comparison(entries) -> str:
    def cell(x):
        return "none" if x is None else f"{x:8.3f}"

    lines = [
        "# vanishing temperatures (mK): computed vs quoted with the published figures",
        "# a 'none' entry means the measure stays positive over 10-150 mK",
        f"{'epsilon':>8} {'f':>10} {'measure':>8} {'perturb.':>9} {'exact':>9} {'quoted':>8} {'pert-quoted':>12}",
    ]
    for e in entries:
        diff = None if e["perturbative_mK"] is None else e["perturbative_mK"] - e["quoted_mK"]
        lines.append(
            f"{e['epsilon']:8.3f} {e['f']:10.6f} {e['measure']:>8} {cell(e['perturbative_mK']):>9} "
            f"{cell(e['exact_mK']):>9} {e['quoted_mK']:8.1f} {cell(diff):>12}"
        )
    return "\n".join(lines) + "\n"


# -- single-state report ----------------------------------------------------------


def emit_report(state: DceState, units: str = "nats") -> tuple[str, dict]:
    """Human-readable text plus a JSON-serialisable record for one state."""
    pert_notes: list[str] = []
    pert = perturbative_values(state.f, state.n_th, pert_notes)
    report = measure_report(state.cm)
    exact = {"E": report.negativity, "D": report.discord, "C": report.coherence}
    conv = lambda d: {k: _to_units(v, units) for k, v in d.items()}  # noqa: E731
    flags = []
    for name, values in (("perturbative", pert), ("exact", exact)):
        for key, label in (("E", "entanglement"), ("D", "discord"), ("C", "coherence")):
            if values[key] == 0.0:
                flags.append(f"{label} vanishes ({name})")
    diagnostics = list(state.diagnostics) + pert_notes + list(report.diagnostics)
    drive, env = state.drive, state.env
    record = {
        "epsilon": drive.epsilon if drive else None,
        "temperature_K": env.temperature if env else None,
        "f": state.f,
        "n_th": state.n_th,
        "units": units,
        "perturbative": conv(pert),
        "exact": conv(exact),
        "symplectic_eigenvalues": list(report.symplectic_eigenvalues),
        "pt_min_eigenvalue": report.pt_min_eigenvalue,
        "mean_occupations": list(report.mean_occupations),
        "bona_fide": report.bona_fide,
        "map_symplecticity_defect": state.map_defect,
        "conventions": {
            "covariance_vacuum": "0.5*identity",
            "occupation": env.convention.value if env else None,
            "mode_frequency": "omega_d/2",
            "log": "natural" if units == "nats" else "base 2",
        },
        "constants": {
            "hbar_J_s": HBAR,
            "k_B_J_per_K": K_B,
            "omega_d_rad_per_s": drive.omega_d if drive else None,
            "l_eff0_m": drive.l_eff0 if drive else None,
            "v_m_per_s": drive.v if drive else None,
        },
        "flags": flags,
        "diagnostics": diagnostics,
    }
    lines = [
        "DCE two-mode output state",
        f"  epsilon = {record['epsilon']}, T = {1e3 * env.temperature:.6g} mK" if env and drive else "",
        f"  f = {state.f:.9g}, n_th = {state.n_th:.9g} ({record['conventions']['occupation']} convention)",
        f"  symplectic eigenvalues = {', '.join(f'{v:.9g}' for v in report.symplectic_eigenvalues)}"
        f" (bona fide: {report.bona_fide})",
        f"  smallest PT symplectic eigenvalue = {report.pt_min_eigenvalue:.9g}",
        f"  map symplecticity defect = {state.map_defect:.3g}",
        f"  {'measure':<12}{'perturbative':>16}{'exact':>16}   [{units}]",
    ]
    for key, label in (("E", "negativity"), ("D", "discord"), ("C", "coherence")):
        lines.append(f"  {label:<12}{record['perturbative'][key]:>16.9g}{record['exact'][key]:>16.9g}")
    lines.append(f"  constants: hbar = {HBAR} J s, k_B = {K_B} J/K")
    for fl in flags:
        lines.append(f"  flag: {fl}")
    for d in diagnostics:
        lines.append(f"  diagnostic: {d}")
    return "\n".join(line for line in lines if line) + "\n", record


def fig1_spec(panel: str, **overrides) -> SweepSpec:
    lo, hi, n = FIG1_EPSILON_RANGE
    return SweepSpec("epsilon", lo, hi, n, temperature_mk=FIG1_TEMPERATURES_MK[panel], **overrides)


def fig2_spec(panel: str, **overrides) -> SweepSpec:
    lo, hi, n = FIG2_TEMPERATURE_RANGE_MK
    return SweepSpec("temperature", lo, hi, n, epsilon=FIG2_EPSILONS[panel], **overrides)
