"""JSON configuration collecting every model parameter in one document.

Example (all keys optional; omitted ones take the prototype defaults)::

    {
      "material":  {"c10": -3.335e-5, "c01": 0.01218, "damping_c": 0.0, "deadzone_delta0": 0.0},
      "geometry":  {"height_mm": 20, "width_mm": 22, "depth_mm": 22, "gap0_mm": 2.0, "kappa": 0.3},
      "optics":    {"variant": "linear", "a": 1.9374, "b": -1.8875, "x_min": 1.0, "x_max": 2.0,
                    "out_of_range": "error", "ref_white_fraction": 0.75,
                    "pigment": {"white_fraction": 0.75, "rho_black": 0.25}},
      "noise_rms": 0.0144,
      "seed": 0,
      "detector":  {"on_threshold": 0.1, "off_threshold": 0.05, "min_hold_s": 0.1}
    }

For ``"variant": "lookup"`` give ``"lookup_csv"`` (a ``distance_mm,voltage_v``
sweep, relative paths resolved against the config file) instead of a/b/x_min/x_max.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from .errors import ConfigError, ParameterError, TactileError
from .mechanics import MaterialParams, SensorGeometry
from .optics import LinearOptics, LookupOptics, OpticalModel, PigmentMix, scale_by_pigment
from .scenarios import NOISE_RMS_DEFAULT

DEFAULT = "default"


@dataclass(frozen=True)
class DetectorSettings:
    on_threshold: float = 0.1
    off_threshold: float = 0.05
    min_hold_s: float = 0.1

    def __post_init__(self):
        if not self.on_threshold > self.off_threshold >= 0:
            raise ParameterError("need on_threshold > off_threshold >= 0", field="on_threshold")
        if not self.min_hold_s >= 0:
            raise ParameterError("min_hold_s must be >= 0", field="min_hold_s")


@dataclass(frozen=True)
class Config:
    material: MaterialParams = field(default_factory=MaterialParams)
    geometry: SensorGeometry = field(default_factory=SensorGeometry)
    base_optics: OpticalModel = field(default_factory=LinearOptics)
    pigment: PigmentMix = field(default_factory=PigmentMix)
    ref_white_fraction: float = 0.75
    noise_rms: float = NOISE_RMS_DEFAULT
    seed: int = 0
    detector: DetectorSettings = field(default_factory=DetectorSettings)
    lookup_csv: str | None = None

    @property
    def optics(self) -> OpticalModel:
        """Optical model after pigment scaling (lookup sweeps are used as measured)."""
        if isinstance(self.base_optics, LinearOptics):
            return scale_by_pigment(self.base_optics, self.pigment, self.ref_white_fraction)
        return self.base_optics

    def to_dict(self) -> dict[str, Any]:
        optics: dict[str, Any]
        if isinstance(self.base_optics, LinearOptics):
            optics = {"variant": "linear", **asdict(self.base_optics)}
        else:
            optics = {"variant": "lookup", "lookup_csv": self.lookup_csv,
                      "out_of_range": self.base_optics.out_of_range}
        optics["ref_white_fraction"] = self.ref_white_fraction
        optics["pigment"] = asdict(self.pigment)
        return {
            "material": asdict(self.material),
            "geometry": asdict(self.geometry),
            "optics": optics,
            "noise_rms": self.noise_rms,
            "seed": self.seed,
            "detector": asdict(self.detector),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _number(value, path: str, integer: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("expected a number", field=path)
    if integer and int(value) != value:
        raise ConfigError("expected an integer", field=path)
    return int(value) if integer else float(value)


def _section(data: Any, path: str) -> dict:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("expected an object", field=path)
    return data


def _build(cls, data: dict, path: str, extra: tuple[str, ...] = ()):
    names = {f.name for f in fields(cls) if f.init}
    unknown = set(data) - names - set(extra)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}", field=path)
    kwargs = {}
    for key, value in data.items():
        if key in extra:
            continue
        if key == "out_of_range":
            if not isinstance(value, str):
                raise ConfigError("expected 'error' or 'clamp'", field=f"{path}.{key}")
            kwargs[key] = value
        else:
            kwargs[key] = _number(value, f"{path}.{key}")
    try:
        return cls(**kwargs)
    except ParameterError as exc:
        raise ConfigError(str(exc), field=f"{path}.{exc.field}" if exc.field else path) from exc


def config_from_dict(data: dict, base_dir: Path | None = None) -> Config:
    """Validate a parsed configuration document."""
    data = _section(data, "config")
    known = {"material", "geometry", "optics", "noise_rms", "seed", "detector"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}", field="config")

    material = _build(MaterialParams, _section(data.get("material"), "material"), "material")
    geometry = _build(SensorGeometry, _section(data.get("geometry"), "geometry"), "geometry")
    detector = _build(DetectorSettings, _section(data.get("detector"), "detector"), "detector")

    optics = dict(_section(data.get("optics"), "optics"))
    variant = optics.pop("variant", "linear")
    pigment = _build(PigmentMix, _section(optics.pop("pigment", None), "optics.pigment"),
                     "optics.pigment")
    ref_white = _number(optics.pop("ref_white_fraction", 0.75), "optics.ref_white_fraction")
    if not 0 <= ref_white <= 1:
        raise ConfigError("must lie in [0, 1]", field="optics.ref_white_fraction")
    lookup_csv = None
    if variant == "linear":
        base = _build(LinearOptics, optics, "optics")
    elif variant == "lookup":
        unknown = set(optics) - {"lookup_csv", "out_of_range"}
        if unknown:
            raise ConfigError(f"unknown key(s) {sorted(unknown)}", field="optics")
        lookup_csv = optics.get("lookup_csv")
        if not isinstance(lookup_csv, str):
            raise ConfigError("lookup variant needs a CSV path", field="optics.lookup_csv")
        csv_path = Path(lookup_csv)
        if base_dir is not None and not csv_path.is_absolute():
            csv_path = base_dir / csv_path
        try:
            base = LookupOptics.from_csv(csv_path, optics.get("out_of_range", "error"))
            lookup_csv = str(csv_path.resolve())
        except (TactileError, OSError, ValueError) as exc:
            raise ConfigError(str(exc), field="optics.lookup_csv") from exc
    else:
        raise ConfigError("must be 'linear' or 'lookup'", field="optics.variant")

    noise = _number(data.get("noise_rms", NOISE_RMS_DEFAULT), "noise_rms")
    if noise < 0:
        raise ConfigError("must be >= 0", field="noise_rms")
    seed = _number(data.get("seed", 0), "seed", integer=True)
    if seed < 0:
        raise ConfigError("must be >= 0", field="seed")
    return Config(material=material, geometry=geometry, base_optics=base, pigment=pigment,
                  ref_white_fraction=ref_white, noise_rms=noise, seed=seed,
                  detector=detector, lookup_csv=lookup_csv)


def load_config(path: str | Path | None = DEFAULT) -> Config:
    """Load and validate a JSON config; ``None`` or ``"default"`` gives the defaults.

    Raises :class:`ConfigError` for parse errors, unknown keys and constraint
    violations, and :class:`OSError` when the file cannot be read.
    """
    if path is None or str(path) == DEFAULT:
        return Config()
    path = Path(path)
    text = path.read_text()
    if not text.strip():
        return config_from_dict({}, path.parent)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON ({exc.msg} at line {exc.lineno})", field=str(path)) from exc
    return config_from_dict(data, path.parent)
