"""Declarative parameter sweeps: config parsing, evaluation, CSV emission.

Config files are flat key=value INI text with a [sweep] section and one
section per axis ([axis1], optional [axis2]).  Unknown sections or keys are
rejected.  CSV output is UTF-8, comma-separated, LF line endings, one header
row, 12 significant digits, empty field for undefined points.  Row order is
axis1-major, axis2-minor, and results are byte-identical for any worker
count.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from gpdiag.cascade import DEFAULT_GAMMA2, DEFAULT_GAMMA3_IDEAL, DEFAULT_GAMMA3_REAL, SystemParams, steady_state
from gpdiag.gp import SWEEPABLE, UndefinedPhaseError, gp_curve_from_states, gp_derivative
from gpdiag.linops import DegenerateSteadyStateError, NoSteadyStateError, hermitian_eig
from gpdiag.photons import atomic_to_photon, concurrence, embed_two_qubit, purity

OUTPUT_KINDS = ("eigenvalues", "purity", "concurrence", "gamma_g", "dgamma")
SCHEMES = ("I", "II", "custom")

_SWEEP_KEYS = ("scheme", "path", "outputs", "omega1", "omega2",
               "delta1", "delta2", "gamma2", "gamma3")
_AXIS_KEYS = ("parameter", "start", "stop", "samples")


class ConfigError(ValueError):
    """Malformed sweep configuration (carries a line number when known)."""


@dataclass(frozen=True)
class AxisSpec:
    parameter: str
    start: float
    stop: float
    samples: int

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ConfigError(f"unknown axis parameter {self.parameter!r}")
        if not (self.start < self.stop):
            raise ConfigError(f"axis start must be < stop, got [{self.start}, {self.stop}]")
        if self.samples < 2:
            raise ConfigError(f"axis samples must be >= 2, got {self.samples}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.samples)


@dataclass(frozen=True)
class SweepSpec:
    scheme: str
    base: SystemParams
    axis1: AxisSpec
    axis2: AxisSpec | None
    outputs: tuple
    path: str

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not self.outputs:
            raise ConfigError("at least one output is required")
        for out in self.outputs:
            if out not in OUTPUT_KINDS:
                raise ConfigError(f"unknown output {out!r}")
        if self.axis2 is not None and self.axis2.parameter == self.axis1.parameter:
            raise ConfigError("axis1 and axis2 must sweep different parameters")


def _default_base(scheme: str) -> SystemParams:
    gamma3 = DEFAULT_GAMMA3_IDEAL if scheme == "II" else DEFAULT_GAMMA3_REAL
    return SystemParams(omega1=6.0, omega2=6.0, delta1=0.0, delta2=0.0,
                        gamma2=DEFAULT_GAMMA2, gamma3=gamma3)


def _get_float(section, key, lineno_hint) -> float:
    raw = section[key]
    try:
        value = float(raw)
    except ValueError as err:
        raise ConfigError(f"{lineno_hint}: {key} = {raw!r} is not a number") from err
    if not math.isfinite(value):
        raise ConfigError(f"{lineno_hint}: {key} must be finite")
    return value


def parse_config(text: str) -> SweepSpec:
    """Strict parse of the flat key=value sweep configuration."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as err:
        raise ConfigError(f"line {err.lineno}: content before any section header") from err
    except configparser.ParsingError as err:
        lines = ", ".join(str(lineno) for lineno, _ in err.errors)
        raise ConfigError(f"syntax error at line(s) {lines}") from err
    for section in parser.sections():
        if section not in ("sweep", "axis1", "axis2"):
            raise ConfigError(f"unknown section [{section}]")
        allowed = _SWEEP_KEYS if section == "sweep" else _AXIS_KEYS
        for key in parser[section]:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
    if "sweep" not in parser:
        raise ConfigError("missing [sweep] section")
    if "axis1" not in parser:
        raise ConfigError("missing [axis1] section")
    sweep = parser["sweep"]
    scheme = sweep.get("scheme", "I")
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}")
    base = _default_base(scheme)
    for key in ("omega1", "omega2", "delta1", "delta2", "gamma2", "gamma3"):
        if key in sweep:
            value = _get_float(sweep, key, "[sweep]")
            try:
                base = base.with_value(key, value)
            except ValueError as err:
                raise ConfigError(f"[sweep]: {err}") from err
    outputs_raw = sweep.get("outputs", "purity")
    outputs = tuple(token.strip() for token in outputs_raw.split(",") if token.strip())
    path = sweep.get("path", "sweep.csv")

    def axis_from(section_name):
        section = parser[section_name]
        for key in _AXIS_KEYS:
            if key not in section:
                raise ConfigError(f"[{section_name}] is missing key {key!r}")
        try:
            samples = int(section["samples"])
        except ValueError as err:
            raise ConfigError(f"[{section_name}]: samples must be an integer") from err
        return AxisSpec(section["parameter"].strip(),
                        _get_float(section, "start", f"[{section_name}]"),
                        _get_float(section, "stop", f"[{section_name}]"),
                        samples)

    axis1 = axis_from("axis1")
    axis2 = axis_from("axis2") if "axis2" in parser else None
    return SweepSpec(scheme, base, axis1, axis2, outputs, path)


def serialize_config(spec: SweepSpec) -> str:
    """Canonical config text; parse(serialize(parse(x))) == parse(x)."""
    out = io.StringIO()
    out.write("[sweep]\n")
    out.write(f"scheme = {spec.scheme}\n")
    out.write(f"path = {spec.path}\n")
    out.write(f"outputs = {', '.join(spec.outputs)}\n")
    for key in ("omega1", "omega2", "delta1", "delta2", "gamma2", "gamma3"):
        out.write(f"{key} = {getattr(spec.base, key)!r}\n")
    for name, axis in (("axis1", spec.axis1), ("axis2", spec.axis2)):
        if axis is None:
            continue
        out.write(f"\n[{name}]\n")
        out.write(f"parameter = {axis.parameter}\n")
        out.write(f"start = {axis.start!r}\n")
        out.write(f"stop = {axis.stop!r}\n")
        out.write(f"samples = {axis.samples}\n")
    return out.getvalue()


def format_field(value) -> str:
    """12-significant-digit float formatting; empty string for undefined."""
    if value is None:
        return ""
    return f"{value:.12g}"


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(format_field(v) for v in row) + "\n")


def _column_outputs(spec: SweepSpec, axis2_value):
    """Evaluate one axis1 column at a fixed axis2 value (None for 1-D sweeps).

    Returns cells, one dict per axis1 sample mapping output columns to values
    (None = undefined).  gamma_g/dgamma are evaluated along axis1.
    """
    base = spec.base
    if axis2_value is not None:
        base = base.with_value(spec.axis2.parameter, axis2_value)
    values = spec.axis1.values()
    states = []
    for v in values:
        try:
            states.append(atomic_to_photon(steady_state(base.with_value(spec.axis1.parameter, v))))
        except (DegenerateSteadyStateError, NoSteadyStateError):
            states.append(None)
    cells = [dict() for _ in values]
    for i, rho in enumerate(states):
        if rho is None:
            for out in spec.outputs:
                for col in _output_columns(out):
                    cells[i][col] = None
            continue
        if "eigenvalues" in spec.outputs:
            lam = hermitian_eig(rho).eigenvalues[::-1]
            cells[i]["lambda1"], cells[i]["lambda2"], cells[i]["lambda3"] = map(float, lam)
        if "purity" in spec.outputs:
            cells[i]["purity"] = purity(rho)
        if "concurrence" in spec.outputs:
            cells[i]["concurrence"] = concurrence(embed_two_qubit(rho))
    if "gamma_g" in spec.outputs or "dgamma" in spec.outputs:
        defined = [i for i, rho in enumerate(states) if rho is not None]
        gammas = [None] * len(values)
        if len(defined) >= 2:
            try:
                curve = gp_curve_from_states([states[i] for i in defined],
                                             [values[i] for i in defined])
                for i, (_, g) in zip(defined, curve):
                    gammas[i] = g
            except UndefinedPhaseError:
                pass
        if "gamma_g" in spec.outputs:
            for i, g in enumerate(gammas):
                cells[i]["gamma_g"] = g
        if "dgamma" in spec.outputs:
            dg = [None] * len(values)
            if all(g is not None for g in gammas):
                deriv = gp_derivative(list(zip(values.tolist(), gammas)))
                dg = [d for _, d in deriv]
            for i, d in enumerate(dg):
                cells[i]["dgamma"] = d
    return cells


def _output_columns(output: str):
    if output == "eigenvalues":
        return ("lambda1", "lambda2", "lambda3")
    return (output,)


def _worker(payload):
    spec, axis2_value = payload
    return _column_outputs(spec, axis2_value)


def run_sweep(spec: SweepSpec, out_dir, jobs: int = 1):
    """Execute a sweep and write its CSV; returns (path, undefined_point_count).

    The undefined count is the number of grid points with at least one empty
    output field.  Raises NoSteadyStateError if every sample point failed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    axis2_values = [None] if spec.axis2 is None else list(spec.axis2.values())
    payloads = [(spec, v) for v in axis2_values]
    if jobs > 1 and len(payloads) > 1:
        with Pool(processes=jobs) as pool:
            results = pool.map(_worker, payloads, chunksize=1)
    else:
        results = [_worker(p) for p in payloads]

    header = [spec.axis1.parameter]
    if spec.axis2 is not None:
        header.append(spec.axis2.parameter)
    for out in spec.outputs:
        header.extend(_output_columns(out))
    value_cols = header[1 if spec.axis2 is None else 2:]

    axis1_values = spec.axis1.values()
    rows = []
    undefined = 0
    all_failed = True
    for i1, v1 in enumerate(axis1_values):
        for i2, v2 in enumerate(axis2_values):
            cells = results[i2][i1]
            row = [float(v1)]
            if spec.axis2 is not None:
                row.append(float(v2))
            point_values = [cells.get(col) for col in value_cols]
            row.extend(point_values)
            if any(v is None for v in point_values):
                undefined += 1
            if any(v is not None for v in point_values):
                all_failed = False
            rows.append(row)
    if all_failed:
        raise NoSteadyStateError("no sample point of the sweep produced a value")
    path = out_dir / spec.path
    write_csv(path, header, rows)
    return path, undefined
