"""Experiment configs: flat dotted-key text files, one per run.

Example::

    experiment.kind = page-curve
    circuit.model = cnot-notc-idx9
    lattice.L = 128
    time.t_max = 28
    seeds.seed = 1

Values are parsed as int, float, or string; comma-separated lists become
tuples. Seeds are always explicit (no wall-clock defaults).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

KINDS = {
    "page-curve": ("circuit.model", "lattice.L", "time.t_max", "seeds.seed"),
    "spacelike": ("circuit.model", "lattice.L", "cut.x1", "cut.t1", "cut.x2",
                  "cut.t2", "time.t_final", "seeds.seed"),
    "mdyn": ("circuit.model", "time.t_max"),
    "surface2d": ("circuit.model", "lattice.Lx", "lattice.Ly", "sweep.m",
                  "sweep.v.min", "sweep.v.max", "sweep.v.step", "time.t_max",
                  "seeds.seed"),
    "probe": ("circuit.model", "lattice.L", "probe.kind", "probe.mode",
              "time.t", "seeds.seed"),
    "unbinding": ("circuit.model", "lattice.L", "sweep.p", "time.t_max",
                  "runs.n", "seeds.seed"),
    "plateau": ("circuit.model", "time.t_max", "seeds.seed"),
    "classify": ("cell.seed", "sweep.sizes", "seeds.seed"),
    "spreading": ("circuit.model", "lattice.L", "pauli.letter", "pauli.site",
                  "time.t_max"),
    "purity": ("circuit.model", "lattice.L", "sweep.x", "sweep.t"),
    "random-hybrid": ("lattice.L", "rate.p", "time.t_max", "seeds.seed"),
}


class ConfigError(ValueError):
    pass


def _parse_value(raw: str):
    raw = raw.strip()
    if "," in raw:
        return tuple(_parse_value(v) for v in raw.split(","))
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


@dataclass
class ExperimentConfig:
    kind: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    def require(self, key):
        if key not in self.values:
            raise ConfigError(f"missing required key {key!r} for kind {self.kind!r}")
        return self.values[key]

    def serialize(self) -> str:
        lines = [f"experiment.kind = {self.kind}"]
        for key in sorted(self.values):
            val = self.values[key]
            if isinstance(val, tuple):
                val = ",".join(str(v) for v in val)
            lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]


def parse_config(text: str) -> ExperimentConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        values[key.strip()] = _parse_value(val)
    kind = values.pop("experiment.kind", None)
    if kind is None:
        raise ConfigError("missing experiment.kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    cfg = ExperimentConfig(kind, values)
    for key in KINDS[kind]:
        cfg.require(key)
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config(fh.read())
