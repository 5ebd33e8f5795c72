"""Command-line entry point: ``axion-optomech <command> [options]``.

Exit codes: 0 success, 1 computation error, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .axion import Couplings, differential_force_gradient, force_gradient, integral_i
from .config import ConfigError, RunConfig, parse_config, parse_override
from .constants import CODATA, PAPER, constants_report, force_gradient_natural_to_si
from .constraints import ConstraintError, constraint_curves, overlay_export
from .metrology import noise_floor_report, shift_report, thermal_noise_floor
from .quadrature import QuadratureError
from .spectrum import SpectrumError, locate_peak, scan_spectrum

log = logging.getLogger("axion_optomech")


class UsageError(Exception):
    pass


def write_atomic(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def _offset_label(x: float) -> str:
    return f"{x:+g}".replace(".", "p")


def cmd_spectrum(cfg: RunConfig, offsets, out: Path) -> list[Path]:
    if not offsets:
        raise UsageError("spectrum needs at least one mechanical offset")
    written = []
    peaks = []
    for off in offsets:
        p = cfg.optomech.with_mechanical_offset(off)
        spec = scan_spectrum(p, cfg.spectrum_window, cfg.spectrum_n_coarse)
        written.append(write_atomic(out / f"spectrum_offset_{_offset_label(off)}.csv", spec.to_csv()))
        entry = {"omega_m_offset_hz": off}
        if spec.peak_in_window:
            entry.update(locate_peak(p, cfg.spectrum_window).as_dict())
        else:
            entry["no_peak_in_window"] = True
        peaks.append(entry)
        log.info("offset %+g Hz: %d samples", off, len(spec.offsets))
    written.append(write_atomic(out / "peaks.json", dump_json({"gamma_m_hz": cfg.optomech.gamma_m, "peaks": peaks})))
    return written


def noise_floor(cfg: RunConfig) -> dict:
    const = cfg.const
    reports = {
        mode: noise_floor_report(mode, cfg.noise, cfg.sphere_mass, cfg.linewidth, const)
        for mode in ("linewidth", "thermal")
    }
    return {
        "thermal_hz": thermal_noise_floor(cfg.noise, const),
        "linewidth_hz": cfg.linewidth,
        "selected_mode": cfg.detection_mode,
        "reports": reports,
        "constants_mode": cfg.constants_mode,
    }


def threshold_natural(cfg: RunConfig) -> float:
    return noise_floor(cfg)["reports"][cfg.detection_mode]["threshold_natural_ev3"]


def cmd_force_gradient(cfg: RunConfig, m_a: float, gp2: float, gn2: float) -> dict:
    const = cfg.const
    c = Couplings(m_a, gp2, gn2)
    mats = cfg.materials
    I = integral_i(cfg.geometry, m_a)
    g_au = force_gradient(mats["Au"], mats["SiO2"], cfg.geometry, c, const, integral=I)
    g_al = force_gradient(mats["Al"], mats["SiO2"], cfg.geometry, c, const, integral=I)
    diff = differential_force_gradient(cfg.geometry, c, mats["Al"], mats["Au"], mats["SiO2"], const, integral=I)
    diff_si = force_gradient_natural_to_si(diff, const)
    dw = cfg.linewidth if cfg.detection_mode == "linewidth" else thermal_noise_floor(cfg.noise, const)
    rep = shift_report(diff_si, cfg.sphere_mass, cfg.optomech.omega0, dw, const)
    return {
        "m_a_ev": m_a,
        "gp2_over_4pi": gp2,
        "gn2_over_4pi": gn2,
        "integral_I_ev_inv": I,
        "gradient_au_ev3": g_au,
        "gradient_al_ev3": g_al,
        "differential_ev3": diff,
        "differential_n_per_m": diff_si,
        **rep.as_dict(),
    }


def cmd_constrain(cfg: RunConfig, regime: str, out: Path, references=()) -> list[Path]:
    lo, hi, ppd = cfg.mass_grid
    regimes = ["proton", "neutron", "equal"] if regime == "all" else [regime]
    thr = threshold_natural(cfg)
    curves = constraint_curves(
        regimes, lo, hi, ppd,
        threshold_natural=thr, materials=cfg.materials, geometry=cfg.geometry, const=cfg.const,
    )
    lines = ["m_a_ev,g2_over_4pi,regime"]
    for c in curves:
        lines += [",".join(row) for row in c.rows()]
    paths = [write_atomic(out / "constraints.csv", "\n".join(lines) + "\n")]
    provenance = {
        "tool": "axion-optomech",
        "version": __version__,
        "regimes": regimes,
        "threshold_natural_ev3": thr,
        "detection_mode": cfg.detection_mode,
        "geometry_ev_inv": {"R": cfg.geometry.R, "D": cfg.geometry.D, "t": cfg.geometry.t,
                            "a": cfg.geometry.a, "d": cfg.geometry.d},
        "materials": {k: vars(m) for k, m in sorted(cfg.materials.items())},
        "constants": constants_report(cfg.const),
        "config": cfg.snapshot(),
        "points": len(curves[0].masses),
    }
    paths.append(write_atomic(out / "constraints.provenance.json", dump_json(provenance)))
    if references:
        table = overlay_export(curves, references)
        rows = ["series,m_a_ev,g2_over_4pi"] + [f"{s},{m:.17g},{g:.17g}" for s, m, g in table]
        paths.append(write_atomic(out / "overlay.csv", "\n".join(rows) + "\n"))
    return paths


def cmd_check() -> int:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML config with dotted keys (defaults if omitted)")
    common.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    common.add_argument("--constants-mode", choices=("paper", "paper_literal", "codata"))
    common.add_argument("--regime", choices=("proton", "neutron", "equal", "all"))
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key, e.g. --set noise.T_K=4e-3")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="axion-optomech", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--check", action="store_true", help="run the acceptance suite and exit")
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("spectrum", parents=[common], help="transmission spectra and peak report")
    sp.add_argument("--offsets", type=float, nargs="*", default=None,
                    help="omega_m - omega0 values in Hz (default from config)")
    sub.add_parser("noise-floor", parents=[common], help="minimum detectable shift and thresholds")
    fg = sub.add_parser("force-gradient", parents=[common], help="axion force gradients at one mass")
    fg.add_argument("--mass", type=float, required=True, help="axion mass in eV")
    fg.add_argument("--g2", type=float, help="equal g^2/4pi for protons and neutrons")
    fg.add_argument("--gp2", type=float, default=0.0)
    fg.add_argument("--gn2", type=float, default=0.0)
    cs = sub.add_parser("constrain", parents=[common], help="exclusion curves g^2/4pi versus m_a")
    cs.add_argument("--reference", type=Path, action="append", default=[],
                    help="reference curve CSV (mass,g2_over_4pi,mass_unit[,label]) for overlay")
    sub.add_parser("constants", parents=[common], help="dump both constant tables as JSON")
    sub.add_parser("check", help="run the acceptance suite")
    return parser


def _load(args) -> RunConfig:
    overrides = dict(parse_override(s) for s in args.set)
    if args.constants_mode:
        overrides["constants_mode"] = args.constants_mode
    if args.regime:
        overrides["constraint.regime"] = args.regime
    if args.out:
        overrides["output_dir"] = str(args.out)
    return parse_config(args.config, overrides)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.check or args.command == "check":
        return cmd_check()
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")

    try:
        if args.command == "constants":
            print(dump_json({"paper": constants_report(PAPER), "codata": constants_report(CODATA)}), end="")
            return 0
        cfg = _load(args)
        out = cfg.output_dir
        if args.command == "spectrum":
            offsets = cfg.spectrum_offsets if args.offsets is None else args.offsets
            for p in cmd_spectrum(cfg, offsets, out):
                print(p)
        elif args.command == "noise-floor":
            report = noise_floor(cfg)
            write_atomic(out / "noise_floor.json", dump_json(report))
            print(dump_json(report), end="")
        elif args.command == "force-gradient":
            gp2, gn2 = (args.g2, args.g2) if args.g2 is not None else (args.gp2, args.gn2)
            print(dump_json(cmd_force_gradient(cfg, args.mass, gp2, gn2)), end="")
        elif args.command == "constrain":
            for p in cmd_constrain(cfg, cfg.regime, out, args.reference):
                print(p)
    except (ConfigError, UsageError) as exc:
        parser.error(str(exc))  # exits with status 2
    except (SpectrumError, QuadratureError, ConstraintError, ArithmeticError, ValueError) as exc:
        print(f"axion-optomech: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
