"""Run configuration: `[section]` headers with `key = value` lines.

Unknown keys are rejected with their line number; duplicate keys follow a
last-wins policy and are recorded as warnings for the run manifest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

COMMANDS = (
    "rotset",
    "vrotset",
    "find-periodic",
    "grow",
    "scan-translates",
    "confinement",
    "omega-probe",
    "disks",
    "mixing",
    "sft-hull",
    "sft-orbit",
    "check-all",
)

MAP_NAMES = ("standard", "translation", "identity", "drift_shear", "linear_saddle")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


def _parse_command(s: str):
    if s not in COMMANDS:
        raise ValueError("unknown command %r (expected one of %s)" % (s, ", ".join(COMMANDS)))
    return s


def _parse_map_name(s: str):
    if s == "custom":
        return s
    if s not in MAP_NAMES:
        raise ValueError("unknown map %r" % s)
    return s


def _parse_rho(s: str):
    parts = s.split(",")
    if len(parts) != 2:
        raise ValueError("rho must be 'px/qx,py/qy'")
    return (Fraction(parts[0].strip()), Fraction(parts[1].strip()))


# section -> key -> (parser, default); None default means required-if-used
SCHEMA = {
    "map": {
        "map": (_parse_map_name, "standard"),
        "name": (str, None),
        "k": (float, 2.0),
        "epsilon": (float, 0.0),
        "a": (float, 0.0),
        "b": (float, 0.0),
        "d": (float, 0.5),
        "lam": (float, 2.0),
    },
    "run": {
        "command": (_parse_command, None),
        "rng_seed": (int, 0),
        "out": (str, None),
        "threads": (int, 1),
    },
    "rotset": {"grid": (int, 64), "n1": (int, 1000), "n2": (int, 10000)},
    "vrotset": {"grid": (int, 64), "n1": (int, 1000), "n2": (int, 10000)},
    "periodic": {
        "q": (int, 1),
        "p": (int, 0),
        "r": (int, 0),
        "grid": (int, 16),
        "tol": (float, 1e-10),
    },
    "grow": {
        "q": (int, 1),
        "p": (int, 0),
        "r": (int, 0),
        "seed_x": (float, 0.1),
        "seed_y": (float, 0.1),
        "kind": (str, "unstable"),
        "branch": (str, "+"),
        "budget": (float, 200.0),
        "h_max": (float, 1e-3),
        "delta": (float, 1e-6),
    },
    "translates": {"range": (int, 1), "max_witnesses": (int, 1)},
    "confinement": {
        "mode": (str, "south"),
        "theta": (float, 0.0),
        "window": (float, 4.0),
        "step": (float, 1.0 / 128.0),
        "horizon": (int, 1000),
    },
    "omega": {"extra": (int, 10000)},
    "disks": {"region": (float, 2.0), "step": (float, 0.02)},
    "mixing": {
        "ux": (float, 0.25),
        "uy": (float, 0.25),
        "vx": (float, 0.75),
        "vy": (float, 0.75),
        "radius": (float, 0.2),
        "n_max": (int, 200),
    },
    "sft": {
        "graph": (str, None),
        "rho": (_parse_rho, None),
        "horizon": (int, 10000),
        "cycle_cap": (int, 10000),
    },
}


@dataclass
class RunConfig:
    command: str
    values: dict                 # section -> key -> parsed value (defaults filled)
    rng_seed: int = 0
    out_dir: str | None = None
    threads: int = 1
    warnings: list = field(default_factory=list)

    def get(self, section: str, key: str):
        return self.values[section][key]

    def resolved(self) -> dict:
        """JSON-friendly echo of the fully resolved config."""
        out = {}
        for sec, kv in sorted(self.values.items()):
            out[sec] = {
                k: (str(v) if isinstance(v, (Fraction, tuple)) else v)
                for k, v in sorted(kv.items())
                if v is not None
            }
        return out


def parse_config(text: str) -> RunConfig:
    """Parse and fully resolve a config; deterministic, errors carry line
    numbers."""
    values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}
    warnings: list[str] = []
    seen: set = set()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError("unknown section [%s]" % section, lineno)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value', got %r" % line, lineno)
        if section is None:
            raise ConfigError("key outside any [section]", lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in SCHEMA[section]:
            raise ConfigError("unknown key %r in [%s]" % (key, section), lineno)
        if (section, key) in seen:
            warnings.append(
                "line %d: duplicate key %r in [%s]; last value wins" % (lineno, key, section)
            )
        seen.add((section, key))
        parser = SCHEMA[section][key][0]
        try:
            values[section][key] = parser(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(
                "bad value for %s.%s: %s" % (section, key, exc), lineno
            ) from exc
    if ("run", "command") not in seen:
        raise ConfigError("missing required key 'command' in [run]")
    if ("map", "map") not in seen and values["run"]["command"] not in (
        "sft-hull",
        "sft-orbit",
    ):
        raise ConfigError("missing map block: set 'map' in [map]")
    return RunConfig(
        command=values["run"]["command"],
        values=values,
        rng_seed=values["run"]["rng_seed"],
        out_dir=values["run"]["out"],
        threads=values["run"]["threads"],
        warnings=warnings,
    )


def build_map(cfg: RunConfig):
    """Instantiate the configured map from the [map] block."""
    from . import maps

    kv = cfg.values["map"]
    name = kv["map"]
    if name == "custom":
        name = kv.get("name")
        if name not in MAP_NAMES:
            raise ConfigError("map = custom requires a known 'name'")
    if name == "standard":
        return maps.make_standard_map(kv["k"], kv["epsilon"])
    if name == "translation":
        return maps.make_translation_map(kv["a"], kv["b"])
    if name == "identity":
        return maps.make_identity_map()
    if name == "drift_shear":
        return maps.make_drift_shear(kv["d"])
    if name == "linear_saddle":
        return maps.make_linear_saddle(kv["lam"])
    raise ConfigError("no map configured")
