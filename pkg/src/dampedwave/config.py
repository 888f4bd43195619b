"""Flat key = value experiment configs.

The format is deliberately tiny: one ``namespace.key = value`` pair per
line, ``#`` comments, blank lines ignored.  It diffs cleanly and needs
no parser dependency.  Keys are validated strictly; unknown or missing
keys raise :class:`ConfigError` with the offending key and line so the
CLI can fail with a precise diagnostic (exit code 2).

Parameters outside the small-data global-existence range (p at or below
the Fujita exponent, weight power at or below its threshold) produce a
prominent warning but are accepted: the blow-up experiments need them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .exponents import (
    ProblemParams,
    admissible_range,
    fujita_exponent,
    weight_power_threshold,
)
from .solver import Nonlinearity, SolverConfig
from .spectral import Grid
from .weights import WeightParams


class ConfigError(Exception):
    """Invalid configuration; carries the key and line when known."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        prefix = ""
        if key is not None:
            prefix += f"key {key!r}"
        if line is not None:
            prefix += f" (line {line})"
        super().__init__(f"{prefix}: {message}" if prefix else message)


_REQUIRED = (
    "problem.dim",
    "problem.p",
    "weight.lambda",
    "weight.A",
    "grid.L",
    "grid.M",
    "solver.dt",
    "solver.t_end",
    "data.amplitude",
    "data.width",
)

_OPTIONAL = (
    "solver.blowup_threshold",
    "solver.dealias",
    "solver.record_every",
    "solver.nonlinearity",
    "data.kind",
    "data.center",
    "data.u1_amplitude",
    "data.u1_width",
    "fit.t_min",
    "sweep.p",
    "sweep.amplitude",
)

_KNOWN = set(_REQUIRED) | set(_OPTIONAL)


@dataclass(frozen=True)
class DataSpec:
    kind: str
    amplitude: float
    width: float
    center: float
    u1_amplitude: float
    u1_width: float


@dataclass
class RunSetup:
    problem: ProblemParams
    weight: WeightParams
    grid: Grid
    solver: SolverConfig
    data: DataSpec
    fit_t_min: float
    sweep_p: list[float] = field(default_factory=list)
    sweep_amplitude: list[float] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    raw: dict[str, str] = field(default_factory=dict)
    text: str = ""

    @property
    def hash(self) -> str:
        return config_hash(self.text)


def config_hash(text: str) -> str:
    """Stable digest of the canonicalized config (comments and blank
    lines stripped, pairs sorted)."""
    pairs = sorted(f"{k}={v}" for k, v in parse_pairs(text).items())
    return hashlib.sha256("\n".join(pairs).encode()).hexdigest()


def parse_pairs(text: str) -> dict[str, str]:
    return {k: v for k, (v, _) in _parse_with_lines(text).items()}


def _parse_with_lines(text: str) -> dict[str, tuple[str, int]]:
    pairs: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError("empty key or value", key=key or None, line=lineno)
        if key in pairs:
            raise ConfigError("duplicate key", key=key, line=lineno)
        pairs[key] = (value, lineno)
    return pairs


def _get(pairs, key, convert, default=None):
    if key not in pairs:
        if default is not None:
            return default
        raise ConfigError("required key is missing", key=key)
    value, lineno = pairs[key]
    try:
        return convert(value)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot parse value {value!r}: {exc}", key=key, line=lineno)


def _to_bool_or_auto(value: str):
    lowered = value.lower()
    if lowered == "auto":
        return None
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError("expected true/false/auto")


def _to_float_list(value: str) -> list[float]:
    return [float(part.strip()) for part in value.split(",") if part.strip()]


def load_setup_text(text: str) -> RunSetup:
    pairs = _parse_with_lines(text)
    for key, (_, lineno) in pairs.items():
        if key not in _KNOWN:
            raise ConfigError("unknown key", key=key, line=lineno)

    dim = _get(pairs, "problem.dim", int)
    p = _get(pairs, "problem.p", float)
    lam = _get(pairs, "weight.lambda", float)
    offset = _get(pairs, "weight.A", float)
    half_width = _get(pairs, "grid.L", float)
    points = _get(pairs, "grid.M", int)
    dt = _get(pairs, "solver.dt", float)
    t_end = _get(pairs, "solver.t_end", float)
    threshold = _get(pairs, "solver.blowup_threshold", float, default=1e6)
    dealias = _get(pairs, "solver.dealias", _to_bool_or_auto, default="auto")
    if dealias == "auto":
        dealias = None
    record_every = _get(pairs, "solver.record_every", int, default=10)
    nonlinearity = _get(
        pairs, "solver.nonlinearity", Nonlinearity, default=Nonlinearity.SOURCE
    )
    kind = _get(pairs, "data.kind", str, default="gaussian")
    if kind not in ("gaussian", "modulated_gaussian"):
        _, lineno = pairs["data.kind"]
        raise ConfigError(
            f"unknown data kind {kind!r}", key="data.kind", line=lineno
        )
    amplitude = _get(pairs, "data.amplitude", float)
    width = _get(pairs, "data.width", float)
    center = _get(pairs, "data.center", float, default=0.0)
    u1_amplitude = _get(pairs, "data.u1_amplitude", float, default=0.0)
    u1_width = _get(pairs, "data.u1_width", float, default=width)
    fit_t_min = _get(pairs, "fit.t_min", float, default=t_end / 10.0)
    sweep_p = _get(pairs, "sweep.p", _to_float_list, default=[])
    sweep_amplitude = _get(pairs, "sweep.amplitude", _to_float_list, default=[])

    try:
        problem = ProblemParams(dim=dim, p=p, weight_power=lam)
        weight = WeightParams(offset=offset, power=lam)
        grid = Grid(dim=dim, half_width=half_width, points=points)
        solver = SolverConfig(
            problem=problem,
            grid=grid,
            weight=weight,
            dt=dt,
            t_end=t_end,
            blowup_threshold=threshold,
            dealias=dealias,
            record_every=record_every,
            nonlinearity=nonlinearity,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))

    warnings = _range_warnings(problem)
    data = DataSpec(
        kind=kind,
        amplitude=amplitude,
        width=width,
        center=center,
        u1_amplitude=u1_amplitude,
        u1_width=u1_width,
    )
    return RunSetup(
        problem=problem,
        weight=weight,
        grid=grid,
        solver=solver,
        data=data,
        fit_t_min=fit_t_min,
        sweep_p=sweep_p,
        sweep_amplitude=sweep_amplitude,
        warnings=warnings,
        raw=parse_pairs(text),
        text=text,
    )


def load_setup(path) -> RunSetup:
    with open(path, "r", encoding="utf-8") as fh:
        return load_setup_text(fh.read())


def _range_warnings(problem: ProblemParams) -> list[str]:
    warnings = []
    lo, hi = admissible_range(problem.dim)
    if not (lo < problem.p <= hi):
        warnings.append(
            f"p = {problem.p} lies outside the small-data global-existence "
            f"range ({lo}, {hi}] for dim = {problem.dim} (Fujita exponent "
            f"{fujita_exponent(problem.dim)}); expect blow-up for sizable data"
        )
    else:
        threshold = weight_power_threshold(problem.dim, problem.p)
        if not problem.weight_power > threshold:
            warnings.append(
                f"weight power {problem.weight_power} is at or below its "
                f"threshold {threshold}; the decay bookkeeping is outside "
                "its guaranteed regime"
            )
    return warnings
