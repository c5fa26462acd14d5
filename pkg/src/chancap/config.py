"""Run configuration: YAML schema, validation, and dynamics construction.

A run config is a single YAML document, e.g.::

    channel: dephasing
    environment:
      kind: ohmic
      s: 3.0
      gamma_M: 0.1
      omega_c: 1.0
    grid:
      t_max: 20.0
      n: 2001
    quantities: [Q, N_Q]
    sweep:                    # optional
      parameter: s
      values: [2.5, 3.0]
    output:                   # optional
      directory: out
      basename: ohmic_dephasing
      figure: false
    options:                  # optional
      theta_samples: 9

Validation errors carry the offending field path in the message.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from chancap import channels
from chancap.capacities import ChannelFamily
from chancap.dynamics import (
    AmplitudeDynamics,
    BandGapModel,
    DephasingDynamics,
    LorentzianSpectrum,
    OhmicSpectrum,
)
from chancap.errors import ConfigError
from chancap.grids import TimeGrid

OUTPUT_DIR_ENV = "CHANCAP_OUT"

CURVE_QUANTITIES = ("Q", "C_ea", "G2", "gamma_rate")
MEASURE_QUANTITIES = ("N_Q", "N_C", "lsf_bound")
ALL_QUANTITIES = CURVE_QUANTITIES + MEASURE_QUANTITIES

_ENV_FIELDS = {
    # kind -> {field: (required, default)}
    "ohmic": {"s": (True, None), "gamma_M": (True, None), "omega_c": (False, 1.0)},
    "markovian": {"gamma_M": (True, None)},
    "lorentzian": {"gamma_M": (True, None), "lambda": (False, 1.0), "delta": (False, 0.0)},
    "bandgap": {"delta_e": (True, None), "beta": (False, 1.0)},
}

_COMPATIBLE = {
    channels.DEPHASING: ("ohmic", "markovian"),
    channels.AMPLITUDE_DAMPING: ("lorentzian", "bandgap", "markovian"),
}


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class OutputSpec:
    directory: str | None = None
    basename: str = "run"
    figure: bool = False


@dataclass(frozen=True)
class RunConfig:
    channel: str
    environment: dict
    grid: TimeGrid
    quantities: tuple
    sweep: Sweep | None = None
    output: OutputSpec = field(default_factory=OutputSpec)
    theta_samples: int = 9

    def to_dict(self) -> dict:
        d = {
            "channel": self.channel,
            "environment": dict(self.environment),
            "grid": {"t_max": self.grid.t_max, "n": self.grid.n},
            "quantities": list(self.quantities),
        }
        if self.sweep is not None:
            d["sweep"] = {"parameter": self.sweep.parameter, "values": list(self.sweep.values)}
        d["output"] = {
            "directory": self.output.directory,
            "basename": self.output.basename,
            "figure": self.output.figure,
        }
        d["options"] = {"theta_samples": self.theta_samples}
        return d


def _require_number(value, path, *, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{path}: must be > 0, got {value!r}")
    return int(value) if integer else float(value)


def _parse_environment(env, channel) -> dict:
    if not isinstance(env, dict):
        raise ConfigError("environment: expected a mapping")
    kind = env.get("kind")
    if kind not in _ENV_FIELDS:
        raise ConfigError(
            f"environment.kind: expected one of {sorted(_ENV_FIELDS)}, got {kind!r}"
        )
    if kind not in _COMPATIBLE[channel]:
        raise ConfigError(
            f"environment.kind: {kind!r} is incompatible with channel {channel!r} "
            f"(allowed: {list(_COMPATIBLE[channel])})"
        )
    out = {"kind": kind}
    fields = _ENV_FIELDS[kind]
    for name, (required, default) in fields.items():
        if name in env:
            out[name] = _require_number(env[name], f"environment.{name}")
        elif required:
            raise ConfigError(f"environment.{name}: required for kind {kind!r}")
        else:
            out[name] = default
    extra = set(env) - set(fields) - {"kind"}
    if extra:
        raise ConfigError(f"environment: unknown fields {sorted(extra)} for kind {kind!r}")
    # construct once to surface range errors (s > 0 etc.) with a field path
    try:
        build_dynamics(channel, out)
    except ValueError as exc:
        raise ConfigError(f"environment: {exc}") from exc
    return out


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a mapping at the top level")
    known = {"channel", "environment", "grid", "quantities", "sweep", "output", "options"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"config: unknown fields {sorted(extra)}")

    channel = raw.get("channel")
    if channel not in channels.CHANNEL_KINDS:
        raise ConfigError(
            f"channel: expected one of {list(channels.CHANNEL_KINDS)}, got {channel!r}"
        )
    environment = _parse_environment(raw.get("environment"), channel)

    grid_raw = raw.get("grid")
    if not isinstance(grid_raw, dict):
        raise ConfigError("grid: expected a mapping with t_max and n")
    t_max = _require_number(grid_raw.get("t_max"), "grid.t_max", positive=True)
    n = _require_number(grid_raw.get("n"), "grid.n", positive=True, integer=True)
    if n < 2:
        raise ConfigError(f"grid.n: must be >= 2, got {n}")
    grid = TimeGrid(t_max, n)

    quantities = raw.get("quantities")
    if not isinstance(quantities, (list, tuple)) or not quantities:
        raise ConfigError("quantities: expected a non-empty list")
    for q in quantities:
        if q not in ALL_QUANTITIES:
            raise ConfigError(f"quantities: unknown quantity {q!r} (valid: {list(ALL_QUANTITIES)})")
    if "G2" in quantities and channel != channels.AMPLITUDE_DAMPING:
        raise ConfigError("quantities: G2 is only defined for amplitude_damping")
    quantities = tuple(dict.fromkeys(quantities))  # dedupe, keep order

    sweep = None
    if raw.get("sweep") is not None:
        sraw = raw["sweep"]
        if not isinstance(sraw, dict):
            raise ConfigError("sweep: expected a mapping with parameter and values")
        param = sraw.get("parameter")
        allowed = [f for f in _ENV_FIELDS[environment["kind"]]]
        if param not in allowed:
            raise ConfigError(
                f"sweep.parameter: {param!r} is not a field of {environment['kind']!r} "
                f"environments (valid: {allowed})"
            )
        values = sraw.get("values")
        if not isinstance(values, (list, tuple)) or not values:
            raise ConfigError("sweep.values: expected a non-empty list of numbers")
        values = tuple(
            _require_number(v, f"sweep.values[{i}]") for i, v in enumerate(values)
        )
        for i, v in enumerate(values):
            env_i = dict(environment)
            env_i[param] = v
            try:
                build_dynamics(channel, env_i)
            except ValueError as exc:
                raise ConfigError(f"sweep.values[{i}]: {exc}") from exc
        sweep = Sweep(parameter=param, values=values)

    output = OutputSpec()
    if raw.get("output") is not None:
        oraw = raw["output"]
        if not isinstance(oraw, dict):
            raise ConfigError("output: expected a mapping")
        extra = set(oraw) - {"directory", "basename", "figure"}
        if extra:
            raise ConfigError(f"output: unknown fields {sorted(extra)}")
        directory = oraw.get("directory")
        if directory is not None and not isinstance(directory, str):
            raise ConfigError("output.directory: expected a string")
        basename = oraw.get("basename", "run")
        if not isinstance(basename, str) or not basename:
            raise ConfigError("output.basename: expected a non-empty string")
        figure = oraw.get("figure", False)
        if not isinstance(figure, bool):
            raise ConfigError("output.figure: expected true/false")
        output = OutputSpec(directory=directory, basename=basename, figure=figure)

    theta_samples = 9
    if raw.get("options") is not None:
        opts = raw["options"]
        if not isinstance(opts, dict):
            raise ConfigError("options: expected a mapping")
        extra = set(opts) - {"theta_samples"}
        if extra:
            raise ConfigError(f"options: unknown fields {sorted(extra)}")
        if "theta_samples" in opts:
            theta_samples = _require_number(
                opts["theta_samples"], "options.theta_samples", positive=True, integer=True
            )

    return RunConfig(
        channel=channel,
        environment=environment,
        grid=grid,
        quantities=quantities,
        sweep=sweep,
        output=output,
        theta_samples=theta_samples,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file is not valid YAML: {exc}") from exc
    return parse_config(raw)


def build_dynamics(channel: str, env: dict):
    """Instantiate the dynamics object described by a normalised env dict."""
    kind = env["kind"]
    if channel == channels.DEPHASING:
        if kind == "ohmic":
            return DephasingDynamics.ohmic(
                OhmicSpectrum(s=env["s"], gamma_M=env["gamma_M"], omega_c=env["omega_c"])
            )
        if kind == "markovian":
            return DephasingDynamics.markovian(env["gamma_M"])
    else:
        if kind == "lorentzian":
            return AmplitudeDynamics.lorentzian(
                LorentzianSpectrum(
                    gamma_M=env["gamma_M"], lam=env["lambda"], delta=env["delta"]
                )
            )
        if kind == "bandgap":
            return AmplitudeDynamics.bandgap(
                BandGapModel(delta_e=env["delta_e"], beta=env["beta"])
            )
        if kind == "markovian":
            return AmplitudeDynamics.markovian(env["gamma_M"])
    raise ValueError(f"environment kind {kind!r} is incompatible with channel {channel!r}")


def build_family(channel: str, env: dict) -> ChannelFamily:
    return ChannelFamily(kind=channel, dynamics=build_dynamics(channel, env))


def time_axis_label(env: dict) -> str:
    return {
        "ohmic": "omega_c t",
        "lorentzian": "lambda t",
        "bandgap": "beta t",
        "markovian": "t",
    }[env["kind"]]


def resolve_output_dir(cli_out: str | None, config_dir: str | None) -> Path:
    """Precedence: --out flag, then $CHANCAP_OUT, then the config, then ./out."""
    if cli_out:
        return Path(cli_out)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        return Path(env_dir)
    if config_dir:
        return Path(config_dir)
    return Path("out")
