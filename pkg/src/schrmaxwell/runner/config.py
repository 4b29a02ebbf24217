"""Scenario configuration: parsing, validation and round-tripping."""

import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    """Invalid scenario configuration; ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


SCHEMES = ("schr1_spectral", "schr2_yee", "upwind_char", "yee_1d", "spectral_inhomogeneous",
           "interface_1d")
EXACT = ("tm_2d", "pec_1d", "pec_1d_printed", "impedance_1d", "fresnel", "gaussian_pulse")
OUTPUTS = ("fields", "diagnostics", "manifest")


@dataclass
class GridConfig:
    dim: int = 1
    m: int = 64
    lengths: List[float] = field(default_factory=lambda: [1.0])
    origin: Optional[List[float]] = None


@dataclass
class PGridConfig:
    n: int = 128
    left: float = -10.0
    right: float = 10.0
    auto_extend: bool = True


@dataclass
class BoundaryConfig:
    left: str = "periodic"
    right: str = "periodic"


@dataclass
class MediumConfig:
    """Constant ``eps``/``mu``, or a tanh profile when ``profile = "tanh"``."""

    eps: float = 1.0
    mu: float = 1.0
    profile: str = "constant"
    eps2: float = 1.0
    center: float = 0.0
    beta: float = 1.0
    mirror_fraction: float = 0.9


@dataclass
class InterfaceConfig:
    position: float = 0.0
    eps1: float = 1.0
    mu1: float = 1.0
    eps2: float = 2.0
    mu2: float = 2.0
    omega: float = 0.5
    fit_distance: float = 2.0


@dataclass
class RecoveryConfig:
    mode: str = "pointwise"
    p_star: Optional[float] = None


@dataclass
class EvolutionConfig:
    method: str = "exact_expm"
    dt: Optional[float] = None


@dataclass
class ScenarioConfig:
    scheme: str
    exact: str
    name: str = "scenario"
    t_final: float = 1.0
    grid: GridConfig = field(default_factory=GridConfig)
    pgrid: PGridConfig = field(default_factory=PGridConfig)
    boundary: BoundaryConfig = field(default_factory=BoundaryConfig)
    medium: MediumConfig = field(default_factory=MediumConfig)
    interface: Optional[InterfaceConfig] = None
    recovery: RecoveryConfig = field(default_factory=RecoveryConfig)
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    outputs: List[str] = field(default_factory=lambda: list(OUTPUTS))

    def to_dict(self):
        out = asdict(self)
        return _drop_none(out)


_SECTIONS = {
    "grid": GridConfig, "pgrid": PGridConfig, "boundary": BoundaryConfig,
    "medium": MediumConfig, "interface": InterfaceConfig, "recovery": RecoveryConfig,
    "evolution": EvolutionConfig,
}


def _drop_none(obj):
    if isinstance(obj, dict):
        return {k: _drop_none(v) for k, v in obj.items() if v is not None}
    return obj


def _section(name, cls, raw, problems):
    if not isinstance(raw, dict):
        problems.append(f"[{name}] must be a table")
        return cls()
    known = {f.name for f in fields(cls)}
    for key in raw:
        if key not in known:
            problems.append(f"unknown key {name}.{key}")
    return cls(**{k: v for k, v in raw.items() if k in known})


def from_dict(raw):
    """Build a :class:`ScenarioConfig`; raises :class:`ConfigError` listing all problems."""
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a table/object"])
    problems = []
    top = {f.name for f in fields(ScenarioConfig)}
    for key in raw:
        if key not in top:
            problems.append(f"unknown key {key}")
    for key in ("scheme", "exact"):
        if key not in raw:
            problems.append(f"missing required key {key}")
    kwargs = {k: v for k, v in raw.items() if k in top and k not in _SECTIONS}
    for name, cls in _SECTIONS.items():
        if name in raw:
            kwargs[name] = _section(name, cls, raw[name], problems)
    if problems:
        raise ConfigError(problems)
    cfg = ScenarioConfig(**kwargs)
    validate(cfg)
    return cfg


def _is_num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def validate(cfg):
    problems = []
    if cfg.scheme not in SCHEMES:
        problems.append(f"scheme must be one of {SCHEMES}, got {cfg.scheme!r}")
    if cfg.exact not in EXACT:
        problems.append(f"exact must be one of {EXACT}, got {cfg.exact!r}")
    if not _is_num(cfg.t_final) or cfg.t_final < 0:
        problems.append("t_final must be a non-negative number")
    g = cfg.grid
    if g.dim not in (1, 2, 3):
        problems.append("grid.dim must be 1, 2 or 3")
    if not isinstance(g.m, int) or g.m < 2 or g.m % 2:
        problems.append("grid.m must be an even integer >= 2")
    if not isinstance(g.lengths, list) or not all(_is_num(x) and x > 0 for x in g.lengths):
        problems.append("grid.lengths must be a list of positive numbers")
    if not isinstance(cfg.pgrid.n, int) or cfg.pgrid.n < 4 or cfg.pgrid.n % 2:
        problems.append("pgrid.n must be an even integer >= 4")
    if not cfg.pgrid.left < 0 < cfg.pgrid.right:
        problems.append("pgrid must satisfy left < 0 < right")
    if cfg.recovery.mode not in ("pointwise", "integral"):
        problems.append("recovery.mode must be pointwise or integral")
    if cfg.evolution.method not in ("exact_expm", "backward_euler"):
        problems.append("evolution.method must be exact_expm or backward_euler")
    if cfg.evolution.dt is not None and (not _is_num(cfg.evolution.dt) or cfg.evolution.dt <= 0):
        problems.append("evolution.dt must be positive")
    for out in cfg.outputs:
        if out not in OUTPUTS:
            problems.append(f"unknown output {out!r}")
    kinds = ("periodic", "perfect_conductor", "impedance", "inflow_exact")
    for side in (cfg.boundary.left, cfg.boundary.right):
        if side not in kinds:
            problems.append(f"boundary kind must be one of {kinds}, got {side!r}")
    if cfg.medium.profile not in ("constant", "tanh"):
        problems.append("medium.profile must be constant or tanh")
    if min(cfg.medium.eps, cfg.medium.mu, cfg.medium.eps2) <= 0:
        problems.append("medium eps/mu must be positive")

    # scheme compatibility
    periodic = cfg.boundary.left == cfg.boundary.right == "periodic"
    one_d = ("upwind_char", "yee_1d", "interface_1d")
    if cfg.scheme in ("schr1_spectral", "schr2_yee", "spectral_inhomogeneous") and not periodic:
        problems.append(f"{cfg.scheme} needs periodic boundaries")
    if cfg.scheme in one_d and g.dim != 1:
        problems.append(f"{cfg.scheme} needs grid.dim = 1")
    if cfg.scheme == "yee_1d" and periodic:
        problems.append("yee_1d needs perfect_conductor or impedance walls")
    if cfg.scheme == "interface_1d":
        if cfg.interface is None:
            problems.append("interface_1d needs an [interface] table")
        if periodic:
            problems.append("interface_1d does not support periodic walls")
    if cfg.scheme != "spectral_inhomogeneous" and cfg.medium.profile != "constant":
        problems.append(f"{cfg.scheme} needs a constant medium")
    if cfg.scheme == "spectral_inhomogeneous" and cfg.medium.profile != "tanh":
        problems.append("spectral_inhomogeneous needs medium.profile = tanh")
    expected = {"schr1_spectral": ("tm_2d",), "schr2_yee": ("tm_2d",),
                "upwind_char": ("pec_1d", "pec_1d_printed", "impedance_1d"),
                "yee_1d": ("pec_1d", "pec_1d_printed", "impedance_1d"),
                "spectral_inhomogeneous": ("gaussian_pulse",), "interface_1d": ("fresnel",)}
    if cfg.scheme in expected and cfg.exact not in expected[cfg.scheme]:
        problems.append(f"exact={cfg.exact!r} is not available for {cfg.scheme}")
    if cfg.exact == "tm_2d" and g.dim != 2:
        problems.append("tm_2d needs grid.dim = 2")
    if problems:
        raise ConfigError(problems)
    return cfg


def load_config(path):
    """Read a TOML or JSON scenario file."""
    path = Path(path)
    text = path.read_bytes()
    try:
        if path.suffix.lower() == ".json":
            raw = json.loads(text)
        else:
            raw = tomllib.loads(text.decode("utf-8"))
    except (json.JSONDecodeError, tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError([f"cannot parse {path}: {exc}"]) from None
    return from_dict(raw)


def dumps_toml(cfg):
    """Minimal TOML writer for the flat-ish config tree."""
    data = cfg.to_dict()
    lines = []
    for key, val in data.items():
        if not isinstance(val, dict):
            lines.append(f"{key} = {_toml_value(val)}")
    for key, val in data.items():
        if isinstance(val, dict):
            lines.append("")
            lines.append(f"[{key}]")
            for k, v in val.items():
                lines.append(f"{k} = {_toml_value(v)}")
    return "\n".join(lines) + "\n"


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)
