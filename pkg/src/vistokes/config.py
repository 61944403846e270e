"""Run configuration: versioned TOML schema and JSON output helpers.

A run config describes one interferometer setting plus pipeline options::

    schema_version = 1

    [setup]
    pump_ratio = 1.0        # P >= 0
    transmission = 1.0      # T in [0, 1]
    theta = 0.0             # source-2 crystal phase, radians

    [idler]
    alpha = 0.6
    beta = 0.8
    xi = 0.0

    [environment.triple]    # or [environment.vectors], exactly one
    q = 1.0
    m_h = 1.0
    m_v = 1.0
    delta_phi = 0.0
    dim = 3                 # optional, embedding dimension >= 3

    [scenario]              # optional; used by the reconstruct command
    kind = "pure-coherent"
    which = "H"             # hv-asymmetric only

    [grid]                  # optional
    points = 64

    [noise]                 # optional; omit for noiseless fringes
    counts_per_point = 1000000
    seed = 1

    [outputs]               # optional
    dir = "."

Explicit environment vectors use ``e_h``/``e_v``/``e_psi`` as lists of
[re, im] pairs.  Unknown keys anywhere are rejected.  All floating-point
values in JSON outputs are printed with 17 significant digits so reruns are
byte-identical and round-trip exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .environment import CoherenceTriple, EnvironmentVectors, embed
from .interferometer import IdlerPrep, SetupConfig, SignalPrep

SCHEMA_VERSION = 1

_SCHEMA = {
    "schema_version": None,
    "setup": {"pump_ratio": None, "transmission": None, "theta": None},
    "idler": {"alpha": None, "beta": None, "xi": None},
    "environment": {
        "triple": {"q": None, "m_h": None, "m_v": None, "delta_phi": None, "dim": None},
        "vectors": {"e_h": None, "e_v": None, "e_psi": None},
    },
    "scenario": {"kind": None, "which": None},
    "grid": {"points": None},
    "noise": {"counts_per_point": None, "seed": None},
    "outputs": {"dir": None},
}


class ConfigError(Exception):
    """Malformed, incomplete, or unknown-key configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration ready for the pipeline."""

    setup: SetupConfig
    scenario_kind: str | None
    scenario_which: str
    grid_points: int
    counts_per_point: int | None
    seed: int | None
    out_dir: str

    @property
    def noisy(self) -> bool:
        return self.counts_per_point is not None


def _reject_unknown(data: dict, schema: dict, path: str = "") -> None:
    for key, value in data.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown config key: {where}")
        sub = schema[key]
        if isinstance(sub, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where} must be a table")
            _reject_unknown(value, sub, where)


def _need(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"missing config key: {where}.{key}")
    return table[key]


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return value


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer")
    return value


def _parse_vector(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{where} must be a non-empty list of [re, im] pairs")
    out = np.zeros(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"{where}[{i}] must be a [re, im] pair")
        out[i] = complex(_as_float(pair[0], f"{where}[{i}][0]"),
                         _as_float(pair[1], f"{where}[{i}][1]"))
    return out


def _build_environment(table: dict) -> EnvironmentVectors:
    has_triple = "triple" in table
    has_vectors = "vectors" in table
    if has_triple == has_vectors:
        raise ConfigError(
            "environment needs exactly one of [environment.triple] "
            "or [environment.vectors]")
    if has_triple:
        t = table["triple"]
        dim = _as_int(t.get("dim", 3), "environment.triple.dim")
        if dim < 3:
            raise ConfigError("environment.triple.dim must be at least 3")
        try:
            triple = CoherenceTriple(
                q=_as_float(_need(t, "q", "environment.triple"), "q"),
                m_h=_as_float(_need(t, "m_h", "environment.triple"), "m_h"),
                m_v=_as_float(_need(t, "m_v", "environment.triple"), "m_v"),
                delta_phi=_as_float(t.get("delta_phi", 0.0),
                                    "environment.triple.delta_phi"),
            )
        except ValueError as exc:
            raise ConfigError(f"environment.triple: {exc}") from exc
        return embed(triple, dim=dim)
    v = table["vectors"]
    try:
        return EnvironmentVectors(
            e_h=_parse_vector(_need(v, "e_h", "environment.vectors"),
                              "environment.vectors.e_h"),
            e_v=_parse_vector(_need(v, "e_v", "environment.vectors"),
                              "environment.vectors.e_v"),
            e_psi=_parse_vector(_need(v, "e_psi", "environment.vectors"),
                                "environment.vectors.e_psi"),
        )
    except ValueError as exc:
        raise ConfigError(f"environment.vectors: {exc}") from exc


_SCENARIO_KINDS = ("pure-coherent", "hv-asymmetric", "symmetric-coupling",
                   "unknown-environment")


def load_config(path) -> RunConfig:
    """Parse and validate a TOML run config; environment triples are embedded.

    Raises ConfigError for schema problems; an infeasible environment triple
    propagates as InfeasibleTripleError from the embedding.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc

    _reject_unknown(data, _SCHEMA)
    version = _need(data, "schema_version", "(top level)")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")

    setup_t = _need(data, "setup", "(top level)")
    idler_t = _need(data, "idler", "(top level)")
    env_t = _need(data, "environment", "(top level)")
    env = _build_environment(env_t)

    try:
        idler = IdlerPrep(
            alpha=_as_float(_need(idler_t, "alpha", "idler"), "idler.alpha"),
            beta=_as_float(_need(idler_t, "beta", "idler"), "idler.beta"),
            xi=_as_float(idler_t.get("xi", 0.0), "idler.xi"),
            env=env,
        )
        # the signal prep is a placeholder; the pipeline re-prepares it per
        # measurement round
        setup = SetupConfig(
            pump_ratio=_as_float(_need(setup_t, "pump_ratio", "setup"),
                                 "setup.pump_ratio"),
            transmission=_as_float(_need(setup_t, "transmission", "setup"),
                                   "setup.transmission"),
            theta=_as_float(setup_t.get("theta", 0.0), "setup.theta"),
            signal=SignalPrep.unbiased(0.0),
            idler=idler,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    scenario_t = data.get("scenario", {})
    kind = scenario_t.get("kind")
    if kind is not None and kind not in _SCENARIO_KINDS:
        raise ConfigError(f"scenario.kind must be one of {_SCENARIO_KINDS}")
    which = scenario_t.get("which", "H")
    if which not in ("H", "V"):
        raise ConfigError('scenario.which must be "H" or "V"')

    grid_points = _as_int(data.get("grid", {}).get("points", 64), "grid.points")
    if grid_points < 5:
        raise ConfigError("grid.points must be at least 5")

    noise_t = data.get("noise", {})
    counts = noise_t.get("counts_per_point")
    if counts is not None:
        counts = _as_int(counts, "noise.counts_per_point")
        if counts <= 0:
            raise ConfigError("noise.counts_per_point must be positive")
    seed = noise_t.get("seed")
    if seed is not None:
        seed = _as_int(seed, "noise.seed")

    out_dir = data.get("outputs", {}).get("dir", ".")
    if not isinstance(out_dir, str):
        raise ConfigError("outputs.dir must be a string")

    return RunConfig(
        setup=setup,
        scenario_kind=kind,
        scenario_which=which,
        grid_points=grid_points,
        counts_per_point=counts,
        seed=seed,
        out_dir=out_dir,
    )


def format_float(value: float) -> str:
    """17-significant-digit decimal form, exact for round-tripping doubles."""
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value}")
    return format(float(value), ".17g")


def dump_json(obj, indent: int = 0) -> str:
    """JSON serializer printing every float via format_float."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (np.floating,)):
        return format_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return str(int(obj))
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [dump_json(x, indent + 1) for x in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(inner + x for x in items) + f"\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{inner}{dump_json(str(k))}: {dump_json(v, indent + 1)}'
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def write_json(path, obj) -> None:
    Path(path).write_text(dump_json(obj) + "\n", encoding="utf-8")
