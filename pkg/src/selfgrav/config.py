"""Scenario configuration: flat INI files with units spelled out in key names.

One ``[scenario]`` section holds the physical inputs and numerical controls;
an optional ``[sweep]`` section lists comma-separated axis values.  Emission
is canonical (fixed key order, repr-precision floats) so that
``emit(parse(text))`` is a fixed point.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields

from .errors import ConfigError, DomainError, require_state_params
from .packets import FAMILIES

_SCENARIO_KEYS = (
    "mass_kg",
    "size_m",
    "separation_l0",
    "alpha",
    "beta",
    "family",
    "chirp",
    "width_inv_l0",
    "grid_n",
    "box_l0",
    "t_start_s",
    "t_end_s",
    "t_steps",
    "eps_xi",
    "eps_static",
    "eps_time",
    "out_dir",
)
_SWEEP_KEYS = ("alphas", "betas", "separations_l0")


@dataclass
class ScenarioConfig:
    mass_kg: float = 1e-14
    size_m: float = 1e-6
    separation_l0: float = 2.0  # peak-to-peak distance in units of l0
    alpha: float = 0.5
    beta: float = 0.5
    family: str = "gaussian"
    chirp: float = 0.0
    width_inv_l0: float = 1.0
    grid_n: int = 64
    box_l0: float = 0.0  # 0 -> default rule 16 (1 + |L|)
    t_start_s: float = 0.0
    t_end_s: float = 1e-4
    t_steps: int = 5
    eps_xi: float = 1e-2
    eps_static: float = 1e-2
    eps_time: float = 1e-2
    out_dir: str = "."
    sweep_alphas: list[float] = field(default_factory=list)
    sweep_betas: list[float] = field(default_factory=list)
    sweep_separations_l0: list[float] = field(default_factory=list)

    @property
    def l_half(self) -> float:
        return 0.5 * self.separation_l0

    def times_s(self) -> list[float]:
        if self.t_steps == 1:
            return [self.t_start_s]
        step = (self.t_end_s - self.t_start_s) / (self.t_steps - 1)
        return [self.t_start_s + i * step for i in range(self.t_steps)]

    def validate(self) -> "ScenarioConfig":
        try:
            if self.mass_kg <= 0.0:
                raise ConfigError(f"mass_kg must be positive, got {self.mass_kg!r}")
            if self.size_m <= 0.0:
                raise ConfigError(f"size_m must be positive, got {self.size_m!r}")
            if self.separation_l0 < 0.0:
                raise ConfigError("separation_l0 must be >= 0")
            if self.family not in FAMILIES:
                raise ConfigError(f"unknown family {self.family!r}; choose one of {FAMILIES}")
            if self.width_inv_l0 <= 0.0:
                raise ConfigError("width_inv_l0 must be positive")
            if self.grid_n < 32 or (self.grid_n & (self.grid_n - 1)) != 0:
                raise ConfigError(f"grid_n must be a power of two >= 32, got {self.grid_n}")
            if self.box_l0 < 0.0:
                raise ConfigError("box_l0 must be >= 0 (0 selects the default)")
            if self.t_start_s < 0.0 or self.t_end_s < self.t_start_s:
                raise ConfigError("need 0 <= t_start_s <= t_end_s")
            if self.t_steps < 1:
                raise ConfigError("t_steps must be >= 1")
            for name in ("eps_xi", "eps_static", "eps_time"):
                if getattr(self, name) <= 0.0:
                    raise ConfigError(f"{name} must be positive")
            require_state_params(self.alpha, self.beta)
            for a in self.sweep_alphas or [self.alpha]:
                for b in self.sweep_betas or [self.beta]:
                    require_state_params(a, b)
            for sep in self.sweep_separations_l0:
                if sep < 0.0:
                    raise ConfigError("sweep separations_l0 must be >= 0")
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def _format_value(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if "scenario" not in parser:
        raise ConfigError("config must contain a [scenario] section")

    defaults = ScenarioConfig()
    kwargs: dict[str, object] = {}
    section = parser["scenario"]
    for key in section:
        if key not in _SCENARIO_KEYS:
            raise ConfigError(f"unknown scenario key {key!r}")
    casts = {f.name: f.type for f in fields(ScenarioConfig)}
    for key in _SCENARIO_KEYS:
        if key not in section:
            continue
        raw = section[key].strip()
        try:
            if casts[key] == "int":
                kwargs[key] = int(raw)
            elif casts[key] == "float":
                kwargs[key] = float(raw)
            else:
                kwargs[key] = raw
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc

    if "sweep" in parser:
        sweep = parser["sweep"]
        for key in sweep:
            if key not in _SWEEP_KEYS:
                raise ConfigError(f"unknown sweep key {key!r}")
        for key, attr in (
            ("alphas", "sweep_alphas"),
            ("betas", "sweep_betas"),
            ("separations_l0", "sweep_separations_l0"),
        ):
            if key in sweep and sweep[key].strip():
                try:
                    kwargs[attr] = [float(v) for v in sweep[key].split(",")]
                except ValueError as exc:
                    raise ConfigError(f"bad sweep list for {key}: {sweep[key]!r}") from exc

    cfg = ScenarioConfig(**{**{f.name: getattr(defaults, f.name) for f in fields(defaults)}, **kwargs})
    return cfg.validate()


def emit_config(cfg: ScenarioConfig) -> str:
    out = io.StringIO()
    out.write("[scenario]\n")
    for key in _SCENARIO_KEYS:
        out.write(f"{key} = {_format_value(getattr(cfg, key))}\n")
    if cfg.sweep_alphas or cfg.sweep_betas or cfg.sweep_separations_l0:
        out.write("\n[sweep]\n")
        for key, attr in (
            ("alphas", "sweep_alphas"),
            ("betas", "sweep_betas"),
            ("separations_l0", "sweep_separations_l0"),
        ):
            values = getattr(cfg, attr)
            if values:
                out.write(f"{key} = {','.join(repr(v) for v in values)}\n")
    return out.getvalue()


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
