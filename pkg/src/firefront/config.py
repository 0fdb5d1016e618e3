"""Run configuration: sectioned text format, parsing, and serialization.

The format is a flat INI-like file with sections [grid], [kernel], [theta],
[omega], [beta], [run]. Node fields are given inline by small generators
(constant, ramp, bump, eigenmode, table) or read from a CSV file in the
snapshot format. Parsing validates everything and reports every problem it
finds, each with its line number, rather than stopping at the first.

The serializer emits a canonical form whose reparse reproduces an equal
configuration; float parameters are written with repr so values survive the
round trip exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .grid import GridSpec, ScalarField, VectorField, eigenmode, zero_boundary_ring
from .model import BetaFunction, Kernel, Scenario

_SECTIONS = ("grid", "kernel", "theta", "omega", "beta", "run")
_COMMANDS = ("simulate", "global", "continue", "verify")

DEFAULT_GAMMA = 1.5
DEFAULT_HORIZON = 0.25
DEFAULT_DT = 0.005
DEFAULT_CADENCE = 1
DEFAULT_OUT = "out"
DEFAULT_SEED = 42
DEFAULT_VERIFY_GRID = 17
DEFAULT_VERIFY_COUNT = 1000


@dataclass
class RunConfig:
    """Everything a run needs: the scenario plus orchestration knobs.

    scenario is None only for the verify subcommand, which takes no problem
    data. sources holds the canonical field-generator specs so the
    configuration can be serialized back out; it does not affect equality.
    """

    command: str
    scenario: Scenario | None
    outdir: str
    cadence: int
    seed: int = DEFAULT_SEED
    horizon: float | None = None
    gammas: tuple = ()
    verify_grid: int = DEFAULT_VERIFY_GRID
    verify_count: int = DEFAULT_VERIFY_COUNT
    chunk_length: float | None = None
    sources: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        problems = []
        if self.command not in _COMMANDS:
            problems.append(
                f"unknown subcommand {self.command!r}; expected one of {_COMMANDS}"
            )
        if self.cadence < 1:
            problems.append(f"cadence must be at least 1, got {self.cadence}")
        if self.command != "verify" and self.scenario is None:
            problems.append(f"the {self.command} subcommand needs a scenario")
        if self.verify_grid < 3:
            problems.append(
                f"verify grid size must be at least 3, got {self.verify_grid}"
            )
        if self.verify_count < 0:
            problems.append(
                f"verify count must be nonnegative, got {self.verify_count}"
            )
        if self.chunk_length is not None and not (self.chunk_length > 0):
            problems.append(
                f"chunk_length must be positive, got {self.chunk_length}"
            )
        if problems:
            raise ConfigError(problems)


def _read_sections(text, problems):
    sections = {name: {} for name in _SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                problems.append(
                    f"line {lineno}: unknown section [{name}]; "
                    f"expected one of {list(_SECTIONS)}"
                )
                current = None
            else:
                current = name
            continue
        if "=" not in line:
            problems.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        if current is None:
            problems.append(f"line {lineno}: key outside any known section")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in sections[current]:
            problems.append(
                f"line {lineno}: duplicate key {key!r} in section [{current}]"
            )
            continue
        sections[current][key] = (value, lineno)
    return sections


def _take(section_dict, key):
    return section_dict.pop(key, (None, None))


def _float_of(value, lineno, label, problems):
    try:
        out = float(value)
    except ValueError:
        problems.append(f"line {lineno}: {label} is not a number: {value!r}")
        return None
    if not np.isfinite(out):
        problems.append(f"line {lineno}: {label} must be finite, got {value}")
        return None
    return out


def _int_of(value, lineno, label, problems):
    try:
        return int(value)
    except ValueError:
        problems.append(f"line {lineno}: {label} is not an integer: {value!r}")
        return None


def _floats_of(tokens, lineno, label, problems):
    out = []
    for tok in tokens:
        val = _float_of(tok, lineno, label, problems)
        if val is None:
            return None
        out.append(val)
    return out


def read_field_csv(path, grid):
    """Read a node field from a snapshot-format CSV (header x,y,u)."""
    values = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if parts[-1] == "u" or parts[-1] == "value":
                continue
            values.append(float(parts[-1]))
    arr = np.asarray(values, dtype=np.float64)
    if arr.size != grid.n_nodes:
        raise ConfigError(
            f"field file {path} has {arr.size} values, expected "
            f"{grid.n_nodes} for a {grid.nx}x{grid.ny} grid"
        )
    return arr.reshape(grid.shape)


def _scalar_spec(grid, value, lineno, label, problems, base_dir):
    """Parse one field-generator spec; returns (values, canonical) or None."""
    tokens = value.split()
    if not tokens:
        problems.append(f"line {lineno}: {label} is empty")
        return None
    kind = tokens[0]
    args = tokens[1:]
    xx, yy = grid.meshgrid()
    if kind == "constant":
        if len(args) != 1:
            problems.append(f"line {lineno}: {label}: constant takes one value")
            return None
        vals = _floats_of(args, lineno, label, problems)
        if vals is None:
            return None
        return np.full(grid.shape, vals[0]), ("constant", vals[0])
    if kind == "ramp":
        if len(args) != 3:
            problems.append(
                f"line {lineno}: {label}: ramp takes x-slope, y-slope, offset"
            )
            return None
        vals = _floats_of(args, lineno, label, problems)
        if vals is None:
            return None
        ax, ay, c = vals
        return ax * xx + ay * yy + c, ("ramp", ax, ay, c)
    if kind == "bump":
        if len(args) != 4:
            problems.append(
                f"line {lineno}: {label}: bump takes amplitude, center-x, "
                "center-y, width"
            )
            return None
        vals = _floats_of(args, lineno, label, problems)
        if vals is None:
            return None
        amp, cx, cy, width = vals
        if width <= 0:
            problems.append(f"line {lineno}: {label}: bump width must be positive")
            return None
        r2 = (xx - cx) ** 2 + (yy - cy) ** 2
        return amp * np.exp(-r2 / (2.0 * width * width)), (
            "bump",
            amp,
            cx,
            cy,
            width,
        )
    if kind == "eigenmode":
        if len(args) != 1:
            problems.append(f"line {lineno}: {label}: eigenmode takes one amplitude")
            return None
        vals = _floats_of(args, lineno, label, problems)
        if vals is None:
            return None
        return eigenmode(grid, vals[0]).values, ("eigenmode", vals[0])
    if kind == "table":
        vals = _floats_of(args, lineno, label, problems)
        if vals is None:
            return None
        if len(vals) != grid.n_nodes:
            problems.append(
                f"line {lineno}: {label}: table needs {grid.n_nodes} values "
                f"for a {grid.nx}x{grid.ny} grid, got {len(vals)}"
            )
            return None
        return np.asarray(vals).reshape(grid.shape), ("table",) + tuple(vals)
    if kind == "file":
        if len(args) != 1:
            problems.append(f"line {lineno}: {label}: file takes one path")
            return None
        path = os.path.join(base_dir, args[0])
        try:
            return read_field_csv(path, grid), ("file", args[0])
        except (OSError, ValueError, ConfigError) as exc:
            problems.append(f"line {lineno}: {label}: {exc}")
            return None
    problems.append(
        f"line {lineno}: {label}: unknown generator {kind!r}; expected "
        "constant, ramp, bump, eigenmode, table, or file"
    )
    return None


def _build_grid(grid_sec, problems):
    nx_v, nx_line = _take(grid_sec, "nx")
    ny_v, ny_line = _take(grid_sec, "ny")
    lx_v, lx_line = _take(grid_sec, "lx")
    ly_v, ly_line = _take(grid_sec, "ly")
    if nx_v is None or ny_v is None:
        problems.append("section [grid] must set both nx and ny")
        return None
    nx = _int_of(nx_v, nx_line, "nx", problems)
    ny = _int_of(ny_v, ny_line, "ny", problems)
    lx = _float_of(lx_v, lx_line, "lx", problems) if lx_v is not None else 1.0
    ly = _float_of(ly_v, ly_line, "ly", problems) if ly_v is not None else 1.0
    if None in (nx, ny, lx, ly):
        return None
    try:
        return GridSpec(nx, ny, lx, ly)
    except ConfigError as exc:
        problems.extend(f"section [grid]: {p}" for p in exc.problems)
        return None


def _build_kernel(grid, kernel_sec, problems, base_dir):
    type_v, type_line = _take(kernel_sec, "type")
    window_v, window_line = _take(kernel_sec, "window")
    if type_v is None:
        if window_v is not None:
            problems.append(
                f"line {window_line}: [kernel] window given without type = stencil"
            )
        return Kernel.zero(grid), ("zero",)
    tokens = type_v.split()
    kind = tokens[0]
    args = tokens[1:]
    if kind == "zero":
        if args:
            problems.append(f"line {type_line}: kernel type zero takes no arguments")
            return None
        return Kernel.zero(grid), ("zero",)
    if kind == "constant":
        if len(args) != 1:
            problems.append(f"line {type_line}: kernel type constant takes one value")
            return None
        c = _float_of(args[0], type_line, "kernel constant", problems)
        if c is None:
            return None
        n = grid.n_nodes
        return Kernel.dense(grid, np.full((n, n), c)), ("constant", c)
    if kind == "stencil":
        if window_v is None:
            problems.append(
                f"line {type_line}: kernel type stencil needs a window key"
            )
            return None
        rows = []
        for part in window_v.split(";"):
            row = _floats_of(part.split(), window_line, "kernel window", problems)
            if row is None:
                return None
            rows.append(row)
        if len({len(r) for r in rows}) != 1:
            problems.append(
                f"line {window_line}: kernel window rows have unequal lengths"
            )
            return None
        try:
            return Kernel.stencil(grid, np.asarray(rows)), (
                "stencil",
                tuple(tuple(r) for r in rows),
            )
        except ConfigError as exc:
            problems.extend(f"line {window_line}: {p}" for p in exc.problems)
            return None
    if kind == "file":
        if len(args) != 1:
            problems.append(f"line {type_line}: kernel type file takes one path")
            return None
        path = os.path.join(base_dir, args[0])
        n = grid.n_nodes
        try:
            matrix = np.loadtxt(path, delimiter=",", dtype=np.float64)
        except (OSError, ValueError) as exc:
            problems.append(f"line {type_line}: kernel file: {exc}")
            return None
        if matrix.shape != (n, n):
            problems.append(
                f"line {type_line}: kernel file {args[0]} has shape "
                f"{matrix.shape}, expected {(n, n)}"
            )
            return None
        return Kernel.dense(grid, matrix), ("file", args[0])
    problems.append(
        f"line {type_line}: unknown kernel type {kind!r}; expected zero, "
        "constant, stencil, or file"
    )
    return None


def _build_beta(beta_sec, problems):
    const_v, const_line = _take(beta_sec, "constant")
    bp_v, bp_line = _take(beta_sec, "breakpoints")
    val_v, val_line = _take(beta_sec, "values")
    if const_v is not None and (bp_v is not None or val_v is not None):
        problems.append(
            f"line {const_line}: [beta] cannot mix constant with a "
            "breakpoints/values table"
        )
        return None
    if const_v is not None:
        c = _float_of(const_v, const_line, "beta constant", problems)
        if c is None:
            return None
        return BetaFunction.constant(c), ("constant", c)
    if bp_v is None and val_v is None:
        return BetaFunction.constant(0.0), ("constant", 0.0)
    if bp_v is None or val_v is None:
        problems.append(
            "[beta] needs both breakpoints and values when giving a table"
        )
        return None
    bps = _floats_of(bp_v.split(), bp_line, "beta breakpoints", problems)
    vals = _floats_of(val_v.split(), val_line, "beta values", problems)
    if bps is None or vals is None:
        return None
    try:
        return BetaFunction(bps, vals), ("table", tuple(bps), tuple(vals))
    except ConfigError as exc:
        problems.extend(f"line {bp_line}: {p}" for p in exc.problems)
        return None


def parse_config(text, command="simulate", base_dir=".") -> RunConfig:
    """Parse and fully validate a configuration file's text.

    Raises ConfigError listing every problem found, each prefixed with its
    line number where one applies.
    """
    problems: list[str] = []
    sections = _read_sections(text, problems)

    grid = _build_grid(sections["grid"], problems)
    if grid is None:
        raise ConfigError(problems or ["section [grid] is missing or invalid"])

    kernel_out = _build_kernel(grid, sections["kernel"], problems, base_dir)
    beta_out = _build_beta(sections["beta"], problems)

    theta_v, theta_line = _take(sections["theta"], "field")
    if theta_v is None:
        theta_values, theta_src = np.zeros(grid.shape), ("constant", 0.0)
    else:
        out = _scalar_spec(grid, theta_v, theta_line, "[theta] field", problems, base_dir)
        theta_values, theta_src = out if out is not None else (None, None)

    omega_srcs = {}
    omega_values = {}
    for comp in ("x", "y"):
        v, line = _take(sections["omega"], comp)
        if v is None:
            omega_values[comp], omega_srcs[comp] = np.zeros(grid.shape), (
                "constant",
                0.0,
            )
        else:
            out = _scalar_spec(
                grid, v, line, f"[omega] {comp}", problems, base_dir
            )
            omega_values[comp], omega_srcs[comp] = (
                out if out is not None else (None, None)
            )

    run_sec = sections["run"]
    initial_v, initial_line = _take(run_sec, "initial")
    if initial_v is None:
        problems.append("section [run] must set initial (the starting field)")
        initial_values, initial_src = None, None
    else:
        out = _scalar_spec(
            grid, initial_v, initial_line, "[run] initial", problems, base_dir
        )
        initial_values, initial_src = out if out is not None else (None, None)

    def run_float(key, default):
        v, line = _take(run_sec, key)
        if v is None:
            return default
        got = _float_of(v, line, key, problems)
        return default if got is None else got

    def run_int(key, default):
        v, line = _take(run_sec, key)
        if v is None:
            return default
        got = _int_of(v, line, key, problems)
        return default if got is None else got

    gamma = run_float("gamma", DEFAULT_GAMMA)
    horizon = run_float("horizon", DEFAULT_HORIZON)
    dt = run_float("dt", DEFAULT_DT)
    picard_tol = run_float("picard_tol", 1e-8)
    picard_maxit = run_int("picard_maxit", 50)
    cadence = run_int("cadence", DEFAULT_CADENCE)
    chunk_v, chunk_line = _take(run_sec, "chunk_length")
    chunk_length = None
    if chunk_v is not None:
        chunk_length = _float_of(chunk_v, chunk_line, "chunk_length", problems)
    out_v, _ = _take(run_sec, "out")
    outdir = out_v if out_v is not None else DEFAULT_OUT

    for name in _SECTIONS:
        for key, (_, lineno) in sections[name].items():
            problems.append(
                f"line {lineno}: unknown key {key!r} in section [{name}]"
            )

    if problems:
        raise ConfigError(problems)

    # the starting field must honor the zero boundary constraint; inline
    # generators like bump have small but nonzero tails, so clamp the ring
    initial = ScalarField(grid, zero_boundary_ring(initial_values))
    kernel, kernel_src = kernel_out
    beta, beta_src = beta_out
    theta = ScalarField(grid, theta_values)
    omega = VectorField(grid, omega_values["x"], omega_values["y"])

    try:
        scenario = Scenario(
            grid=grid,
            kernel=kernel,
            theta=theta,
            omega=omega,
            beta=beta,
            gamma=gamma,
            g=initial,
            horizon=horizon,
            dt=dt,
            picard_tol=picard_tol,
            picard_maxit=picard_maxit,
        )
    except ConfigError as exc:
        raise ConfigError([f"[run]: {p}" for p in exc.problems]) from None

    sources = {
        "kernel": kernel_src,
        "theta": theta_src,
        "omega_x": omega_srcs["x"],
        "omega_y": omega_srcs["y"],
        "beta": beta_src,
        "initial": initial_src,
    }
    return RunConfig(
        command=command,
        scenario=scenario,
        outdir=outdir,
        cadence=cadence,
        chunk_length=chunk_length,
        sources=sources,
    )


def _fmt(x) -> str:
    return repr(float(x))


def _fmt_spec(spec) -> str:
    kind = spec[0]
    if kind == "table" and isinstance(spec[1], tuple):
        raise ConfigError("beta tables are serialized by section, not inline")
    if kind == "file":
        return f"file {spec[1]}"
    return " ".join([kind] + [_fmt(v) for v in spec[1:]])


def serialize_config(config: RunConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) equals c."""
    if config.scenario is None:
        raise ConfigError("verify configurations have no file form")
    if not config.sources:
        raise ConfigError(
            "this configuration was not built from a file and has no "
            "serializable field sources"
        )
    sc = config.scenario
    s = config.sources
    lines = [
        "[grid]",
        f"nx = {sc.grid.nx}",
        f"ny = {sc.grid.ny}",
        f"lx = {_fmt(sc.grid.lx)}",
        f"ly = {_fmt(sc.grid.ly)}",
        "",
        "[kernel]",
    ]
    kernel_src = s["kernel"]
    if kernel_src[0] == "stencil":
        rows = " ; ".join(
            " ".join(_fmt(v) for v in row) for row in kernel_src[1]
        )
        lines += ["type = stencil", f"window = {rows}"]
    else:
        lines.append(f"type = {_fmt_spec(kernel_src)}")
    lines += [
        "",
        "[theta]",
        f"field = {_fmt_spec(s['theta'])}",
        "",
        "[omega]",
        f"x = {_fmt_spec(s['omega_x'])}",
        f"y = {_fmt_spec(s['omega_y'])}",
        "",
        "[beta]",
    ]
    beta_src = s["beta"]
    if beta_src[0] == "constant":
        lines.append(f"constant = {_fmt(beta_src[1])}")
    else:
        lines.append("breakpoints = " + " ".join(_fmt(v) for v in beta_src[1]))
        lines.append("values = " + " ".join(_fmt(v) for v in beta_src[2]))
    lines += [
        "",
        "[run]",
        f"initial = {_fmt_spec(s['initial'])}",
        f"gamma = {_fmt(sc.gamma)}",
        f"horizon = {_fmt(sc.horizon)}",
        f"dt = {_fmt(sc.dt)}",
        f"picard_tol = {_fmt(sc.picard_tol)}",
        f"picard_maxit = {sc.picard_maxit}",
        f"cadence = {config.cadence}",
        f"out = {config.outdir}",
    ]
    if config.chunk_length is not None:
        lines.append(f"chunk_length = {_fmt(config.chunk_length)}")
    return "\n".join(lines) + "\n"
