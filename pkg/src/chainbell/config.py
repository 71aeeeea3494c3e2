"""Flat experiment configuration, stored on disk as a JSON object."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .chainedbell import C_LIGHT, ChainedConfig, InterferometerParams, effective_visibility, equipartition_settings
from .models import LOCAL_STRATEGIES, MODELS, make_model
from .spacetime import ApparatusGeometry, Boost, Event, TimingClass, TimingKind

_OMEGA_1550 = 2 * math.pi * C_LIGHT / 1550e-9
_GEOMETRY_KEYS = ("alice_t", "alice_x", "bob_t", "bob_x", "beta_A", "beta_B")
_CHOICES = ("per-pair", "random-uniform")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Every key of the on-disk schema, with defaults.

    Geometry (``alice_t``, ``alice_x``, ``bob_t``, ``bob_x``, ``beta_A``,
    ``beta_B``) and ``timing`` are mutually exclusive. With neither, runs
    use AfterAfter, the class of a lab-frame simultaneous measurement.
    """

    model: str = "quantum"
    visibility: float = 1.0
    local_strategy: str = "product"
    delta: float = 0.25
    accidental: float = 0.0
    N: int = 2
    Theta: float = math.pi
    omega_A: float = _OMEGA_1550
    omega_B: float = _OMEGA_1550
    s_A: float = 0.1
    s_B: float = 0.1
    alice_t: float | None = None
    alice_x: float | None = None
    bob_t: float | None = None
    bob_x: float | None = None
    beta_A: float | None = None
    beta_B: float | None = None
    timing: str | None = None
    trials: int = 100_000
    seed: int = 0
    setting_choice: str = "per-pair"
    n_phases: int = 16
    phases: list | None = None
    z_threshold: float = 4.0
    workers: int = 1
    out_dir: str = "."

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        kwargs = {}
        for key, value in data.items():
            kwargs[key] = _coerce(key, value, cls.__dataclass_fields__[key].default)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model: unknown model {self.model!r}; choose from {sorted(MODELS)}")
        if self.local_strategy not in LOCAL_STRATEGIES:
            raise ConfigError(f"local_strategy: must be one of {LOCAL_STRATEGIES}")
        if self.setting_choice not in _CHOICES:
            raise ConfigError(f"setting_choice: must be one of {_CHOICES}")
        for key, ok in (
            ("visibility", 0.0 <= self.visibility <= 1.0),
            ("delta", 0.0 <= self.delta <= 0.25),
            ("accidental", 0.0 <= self.accidental < 1.0),
            ("N", self.N >= 2),
            ("Theta", 0 < self.Theta <= math.pi),
            ("trials", self.trials >= 1),
            ("seed", self.seed >= 0),
            ("workers", self.workers >= 1),
            ("n_phases", self.n_phases >= 1),
        ):
            if not ok:
                raise ConfigError(f"{key}: value {getattr(self, key)!r} out of range")
        try:
            self.interferometer()
        except ValueError as exc:
            raise ConfigError(f"interferometer: {exc}") from None
        given = [k for k in _GEOMETRY_KEYS if getattr(self, k) is not None]
        if given and self.timing is not None:
            raise ConfigError("timing: give either an apparatus geometry or a timing class, not both")
        if given and len(given) != len(_GEOMETRY_KEYS):
            missing = [k for k in _GEOMETRY_KEYS if getattr(self, k) is None]
            raise ConfigError(f"geometry incomplete, missing: {', '.join(missing)}")
        if self.timing is not None:
            try:
                TimingKind(self.timing)
            except ValueError:
                raise ConfigError(f"timing: unknown timing class {self.timing!r}") from None
        if given:
            try:
                self.geometry()
            except ValueError as exc:
                raise ConfigError(f"geometry: {exc}") from None

    def has_geometry(self) -> bool:
        return self.alice_t is not None

    def geometry(self) -> ApparatusGeometry:
        if not self.has_geometry():
            raise ConfigError("geometry: config has no apparatus geometry")
        return ApparatusGeometry(
            Event(self.alice_t, self.alice_x),
            Event(self.bob_t, self.bob_x),
            Boost(self.beta_A),
            Boost(self.beta_B),
        )

    def timing_class(self) -> TimingClass:
        from .spacetime import classify_timing

        if self.has_geometry():
            return classify_timing(self.geometry())
        return TimingClass.from_name(self.timing or TimingKind.AFTER_AFTER)

    def interferometer(self) -> InterferometerParams:
        return InterferometerParams(self.omega_A, self.omega_B, self.s_A, self.s_B)

    def chained(self) -> ChainedConfig:
        return ChainedConfig(self.N, self.Theta, self.visibility)

    def settings(self):
        return equipartition_settings(self.chained(), self.interferometer())

    def build_model(self):
        return make_model(
            self.model,
            visibility=effective_visibility(self.visibility, self.accidental),
            local_strategy=self.local_strategy,
            delta=self.delta,
        )


def _coerce(key, value, default):
    if key == "phases":
        if value is None:
            return None
        if not isinstance(value, list) or not all(_is_number(v) for v in value):
            raise ConfigError(f"{key}: expected a list of numbers")
        return [float(v) for v in value]
    if value is None:
        if default is None:
            return None
        raise ConfigError(f"{key}: must not be null")
    if isinstance(default, bool):
        raise ConfigError(f"{key}: unsupported type")
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not (isinstance(value, int) or (isinstance(value, float) and value.is_integer())):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return int(value)
    if isinstance(default, str) or (default is None and key in ("timing",)):
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if not _is_number(value):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    return float(value)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
