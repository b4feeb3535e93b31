"""Run configuration: flat ``key = value`` files, env overrides, CLI flags.

Precedence is flags > environment > file > defaults. Environment variables
use the prefix ``VOLKOV_`` with dots turned into underscores, so
``field.a0`` is ``VOLKOV_FIELD_A0``. Variables with the prefix that name no
config key (such as the kernel switch ``VOLKOV_NUMBA``) are ignored.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .field import SHAPES, FieldError, PlaneWaveField

SUITES = ("algebra", "spinors", "field", "volkov", "orthonormality", "completeness", "appendix")
ENV_PREFIX = "VOLKOV_"
U64_MAX = 2**64 - 1


class ConfigError(ValueError):
    pass


def _suites(text):
    names = [s.strip() for s in str(text).split(",") if s.strip()]
    if not names:
        raise ValueError("empty suite list")
    bad = [n for n in names if n not in SUITES]
    if bad:
        raise ValueError(f"unknown suite {bad[0]!r} (choose from {', '.join(SUITES)})")
    # registry order, duplicates dropped
    return tuple(s for s in SUITES if s in names)


def _shape(text):
    if text not in SHAPES:
        raise ValueError(f"unknown shape {text!r} (choose from {', '.join(SHAPES)})")
    return text


def _seed(text):
    v = int(text)
    if not 0 <= v <= U64_MAX:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(cast):
    def conv(text):
        v = cast(text)
        if not v > 0:
            raise ValueError("must be positive")
        return v
    return conv


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise ValueError("must be non-negative")
    return v


def _text(text):
    return str(text)


# key -> (parser, default, help)
KEYS = {
    "suites": (_suites, ",".join(SUITES), "comma-separated suite names"),
    "seed": (_seed, "20240611", "unsigned 64-bit RNG seed"),
    "field.shape": (_shape, "sin2-linear", "pulse shape"),
    "field.a0": (_nonneg_float, "1.0", "dimensionless amplitude |e| A_max / m"),
    "field.omega": (_positive(float), "1.0", "carrier frequency"),
    "field.cycles": (_positive(float), "4", "cycles under the envelope or plateau"),
    "field.charge": (float, "-1.0", "particle charge e"),
    "field.table": (_text, "", "two- or three-column table for shape=tabulated"),
    "samples.random": (_positive(int), "1000", "samples per algebraic identity"),
    "samples.points": (_positive(int), "100", "spacetime points per finite-difference check"),
    "tolerance.exact": (_nonneg_float, "0.0", "integer Clifford identities"),
    "tolerance.algebra": (_nonneg_float, "1e-13", "spinor and slash identities"),
    "tolerance.matrix": (_nonneg_float, "1e-12", "matrix identities"),
    "tolerance.recovery": (_nonneg_float, "1e-10", "three-point coefficient recovery"),
    "tolerance.fd": (_nonneg_float, "1e-8", "finite-difference Jacobians"),
    "tolerance.ode": (_nonneg_float, "1e-6", "f(eta) ODE residual"),
    "tolerance.dirac": (_nonneg_float, "1e-4", "first-order Dirac residual"),
    "tolerance.squared": (_nonneg_float, "1e-3", "squared Dirac residual"),
    "tolerance.ratio": (_nonneg_float, "0.2", "relative spread of the h-convergence ratio about 4"),
    "tolerance.smeared": (_nonneg_float, "0.01", "smeared distributional checks"),
    "tolerance.appendix": (_nonneg_float, "0.02", "smeared appendix integrals"),
    "volkov.h": (_positive(float), "1e-3", "finite-difference step"),
    "orthonormality.sigma": (_positive(float), "0.02", "smearing width in p_minus"),
    "appendix.sigma": (_positive(float), "0.05", "test-function width"),
    "completeness.sigma": (_positive(float), "1e-3", "smearing width of the z' delta weights"),
    "output.json": (_text, "report.json", "JSON report path"),
    "output.csv": (_text, "", "directory for CSV tables, empty for none"),
}


def env_name(key: str) -> str:
    return ENV_PREFIX + key.upper().replace(".", "_")


@dataclass(frozen=True)
class RunConfig:
    values: dict = dc_field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def suites(self):
        return self.values["suites"]

    @property
    def seed(self) -> int:
        return self.values["seed"]

    def make_field(self) -> PlaneWaveField:
        v = self.values
        if v["field.shape"] == "tabulated":
            if not v["field.table"]:
                raise ConfigError("field.table is required for shape=tabulated")
            return PlaneWaveField.from_table(v["field.table"], charge=v["field.charge"])
        return PlaneWaveField(v["field.shape"], a0=v["field.a0"], omega=v["field.omega"],
                              cycles=v["field.cycles"], charge=v["field.charge"])

    def as_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(self.values.items())}


def _convert(key, raw, where):
    parser = KEYS[key][0]
    try:
        return parser(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: invalid value for {key!r}: {exc}") from None


def parse_text(text: str, source="<config>") -> dict:
    """Raw ``key -> string`` pairs; unknown keys and bad syntax carry the line number."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{source}:{lineno}"
        if "=" not in body:
            raise ConfigError(f"{where}: expected key = value")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        out[key] = (raw, where)
    return out


def load_config(path=None, env=None, overrides=None) -> RunConfig:
    """Merge defaults, file, environment and flag overrides (highest last)."""
    layers = {k: (entry[1], "default") for k, entry in KEYS.items()}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        layers.update(parse_text(text, str(path)))
    env = os.environ if env is None else env
    for key in KEYS:
        name = env_name(key)
        if name in env:
            layers[key] = (env[name], f"environment {name}")
    for key, raw in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(f"unknown override {key!r}")
        layers[key] = (raw, "command line")
    values = {k: _convert(k, raw, where) for k, (raw, where) in layers.items()}
    cfg = RunConfig(values)
    if values["field.shape"] != "tabulated":
        try:
            cfg.make_field()
        except FieldError as exc:
            raise ConfigError(f"invalid field: {exc}") from None
    return cfg
