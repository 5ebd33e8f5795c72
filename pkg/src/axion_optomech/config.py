"""Run configuration: flat dotted keys in a TOML file, layered over shipped defaults."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .axion import Geometry, Material, default_materials
from .constants import PhysConstants, get_constants
from .metrology import NoiseParams
from .spectrum import OptomechParams

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_defaults", "load_materials", "parse_override"]

REGIMES = ("proton", "neutron", "equal", "all")
MATERIAL_LABELS = ("Al", "Au", "SiO2")
MATERIAL_FIELDS = ("rho_natural_MeV4", "rho_si_kg_m3", "Z_over_mu", "N_over_mu")


class ConfigError(ValueError):
    pass


def _flatten(tree: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in tree.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        else:
            flat[key] = v
    return flat


def _parse_toml(text: str, source: str) -> dict:
    try:
        return _flatten(tomllib.loads(text))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_defaults() -> dict:
    text = resources.files("axion_optomech").joinpath("data/defaults.toml").read_text(encoding="utf-8")
    return _parse_toml(text, "defaults.toml")


def load_materials(path: str | Path, const: PhysConstants) -> dict[str, Material]:
    """Read ``[[material]]`` tables with label, rho_si_kg_m3 | rho_natural_MeV4, Z_over_mu, N_over_mu."""
    path = Path(path)
    try:
        doc = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    out = {}
    for i, entry in enumerate(doc.get("material", [])):
        extra = set(entry) - {"label", *MATERIAL_FIELDS}
        if extra:
            raise ConfigError(f"{path}: material #{i + 1}: unknown key(s) {sorted(extra)}")
        try:
            label = entry["label"]
            out[label] = _build_material(label, entry, const)
        except KeyError as exc:
            raise ConfigError(f"{path}: material #{i + 1} is missing key {exc.args[0]!r}") from None
    if not out:
        raise ConfigError(f"{path}: no [[material]] entries")
    return out


def _build_material(label: str, fields: dict, const: PhysConstants) -> Material:
    if ("rho_si_kg_m3" in fields) == ("rho_natural_MeV4" in fields):
        raise ConfigError(f"material {label}: give exactly one of rho_si_kg_m3, rho_natural_MeV4")
    try:
        if "rho_si_kg_m3" in fields:
            return Material.from_si(label, float(fields["rho_si_kg_m3"]), float(fields["Z_over_mu"]),
                                    float(fields["N_over_mu"]), const)
        return Material(label, float(fields["rho_natural_MeV4"]), float(fields["Z_over_mu"]),
                        float(fields["N_over_mu"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_override(item: str) -> tuple[str, object]:
    """``key=value`` from the command line, value parsed as a TOML value."""
    key, sep, raw = item.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {item!r} is not of the form key=value")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return key.strip(), value


@dataclass(frozen=True)
class RunConfig:
    optomech: OptomechParams
    geometry: Geometry
    materials: dict
    noise: NoiseParams
    regime: str
    mass_grid: tuple[float, float, int]
    constants_mode: str
    output_dir: Path
    spectrum_offsets: tuple[float, ...]
    spectrum_window: tuple[float, float]
    spectrum_n_coarse: int
    detection_mode: str
    linewidth: float
    sphere_mass: float
    raw: dict

    @property
    def const(self) -> PhysConstants:
        return get_constants(self.constants_mode)

    def snapshot(self) -> dict:
        """Every resolved input, for provenance sidecars."""
        return dict(sorted(self.raw.items()))


def _num(flat: dict, key: str) -> float:
    v = flat[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{key}: must be finite, got {v!r}")
    return v


def _pos(flat: dict, key: str) -> float:
    v = _num(flat, key)
    if v <= 0:
        raise ConfigError(f"{key}: must be positive, got {v!r}")
    return v


def _is_material_key(key: str) -> bool:
    parts = key.split(".")
    return len(parts) == 3 and parts[0] == "materials" and parts[1] in MATERIAL_LABELS and parts[2] in MATERIAL_FIELDS


def build_config(flat: dict, source: str = "<config>") -> RunConfig:
    defaults = load_defaults()
    allowed = set(defaults) | {"optomech.gamma_m", "materials_file"}
    for key in flat:
        if key not in allowed and not _is_material_key(key):
            raise ConfigError(f"{source}: unknown config key {key!r}")
    merged = {**defaults, **flat}
    f = merged

    mode = f["constants_mode"]
    if mode not in ("paper", "paper_literal", "codata"):
        raise ConfigError(f"constants_mode: expected 'paper', 'paper_literal' or 'codata', got {mode!r}")
    const = get_constants(mode)

    try:
        gamma = _pos(f, "optomech.gamma_m") if "optomech.gamma_m" in f else None
        optomech = OptomechParams(
            omega0=_pos(f, "optomech.omega0"),
            omega_m=_pos(f, "optomech.omega_m"),
            kappa=_pos(f, "optomech.kappa"),
            gamma_m=gamma,
            Delta=_num(f, "optomech.Delta"),
            g=_num(f, "optomech.g"),
            E_pu=_num(f, "optomech.E_pu"),
            E_pr=_num(f, "optomech.E_pr"),
            Q=_pos(f, "optomech.Q"),
            m_s=_pos(f, "detection.sphere_mass_kg"),
        )
        geometry = Geometry.from_si(
            R=_num(f, "geometry.R_nm") * 1e-9,
            D=_num(f, "geometry.D_um") * 1e-6,
            t=_num(f, "geometry.t_nm") * 1e-9,
            a=_num(f, "geometry.a_nm") * 1e-9,
            const=const,
        )
        noise = NoiseParams(
            M_eff=_pos(f, "noise.M_eff_kg"),
            omega0=optomech.omega0,
            Q=optomech.Q,
            Delta_f=_pos(f, "noise.Delta_f_hz"),
            T=_num(f, "noise.T_K"),
            x2_mean=_pos(f, "noise.x2_mean_nm2") * 1e-18,
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None

    materials = default_materials(mode, const)
    if "materials_file" in f:
        base = Path(source).parent if source not in ("<config>", "<defaults>") else Path(".")
        materials.update(load_materials(base / f["materials_file"], const))
    for label in MATERIAL_LABELS:
        fields = {k.split(".")[2]: v for k, v in f.items() if k.startswith(f"materials.{label}.")}
        if fields:
            old = materials[label]
            if "rho_si_kg_m3" not in fields and "rho_natural_MeV4" not in fields:
                fields["rho_natural_MeV4"] = old.rho_natural
            fields.setdefault("Z_over_mu", old.Z_over_mu)
            fields.setdefault("N_over_mu", old.N_over_mu)
            materials[label] = _build_material(label, fields, const)

    regime = f["constraint.regime"]
    if regime not in REGIMES:
        raise ConfigError(f"constraint.regime: expected one of {REGIMES}, got {regime!r}")
    ppd = f["constraint.points_per_decade"]
    if isinstance(ppd, bool) or not isinstance(ppd, int) or ppd < 1:
        raise ConfigError(f"constraint.points_per_decade: expected a positive integer, got {ppd!r}")
    lo, hi = _pos(f, "constraint.mass_lo_ev"), _pos(f, "constraint.mass_hi_ev")
    if not lo < hi:
        raise ConfigError("constraint.mass_lo_ev must be below constraint.mass_hi_ev")

    offsets = f["spectrum.offsets_hz"]
    if not isinstance(offsets, list) or not all(isinstance(x, (int, float)) for x in offsets):
        raise ConfigError("spectrum.offsets_hz: expected a list of numbers")
    n_coarse = f["spectrum.n_coarse"]
    if not isinstance(n_coarse, int) or n_coarse < 100:
        raise ConfigError(f"spectrum.n_coarse: expected an integer >= 100, got {n_coarse!r}")
    det_mode = f["detection.mode"]
    if det_mode not in ("linewidth", "thermal"):
        raise ConfigError(f"detection.mode: expected 'linewidth' or 'thermal', got {det_mode!r}")

    return RunConfig(
        optomech=optomech,
        geometry=geometry,
        materials=materials,
        noise=noise,
        regime=regime,
        mass_grid=(lo, hi, ppd),
        constants_mode=mode,
        output_dir=Path(f["output_dir"]),
        spectrum_offsets=tuple(float(x) for x in offsets),
        spectrum_window=(_num(f, "spectrum.window_lo_hz"), _num(f, "spectrum.window_hi_hz")),
        spectrum_n_coarse=n_coarse,
        detection_mode=det_mode,
        linewidth=_pos(f, "detection.linewidth_hz"),
        sphere_mass=optomech.m_s,
        raw=merged,
    )


def parse_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Validated run configuration; an absent or empty file gives every default."""
    flat: dict = {}
    source = "<defaults>"
    if path is not None:
        path = Path(path)
        source = str(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        flat = _parse_toml(text, source)
    if overrides:
        flat.update(overrides)
    return build_config(flat, source)
