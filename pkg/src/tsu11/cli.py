"""Command-line front end.

Commands: lod, lodi, optimize, sweep, vacuum.  Numeric output is written
as CSV plus a JSON sidecar carrying the fixed parameters and engine
version; numbers are decimal strings at the working precision and output
is byte-identical across runs of the same configuration.

Exit codes: 0 ok, 2 usage or configuration error, 3 undefined result
(e.g. vacuum-seeded LOD).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import fields
from pathlib import Path

from mpmath import mp, workdps

from . import __version__
from .circuits import CIRCUITS, InterferometerParams
from .metrology import UndefinedLodError, lodi_db, report
from .optimize import AxisSpec, SweepGrid, optimize_phases, run_sweep, vacuum_noise_map
from .presets import PARAM_ALIASES, PRESETS, make_params

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNDEFINED = 3

_PARAM_FIELDS = tuple(f.name for f in fields(InterferometerParams))


class ConfigError(Exception):
    pass


#: non-parameter keys a config file may carry
_OPTION_KEYS = ("preset", "circuit", "target")


def _parse_config_file(path: str) -> dict:
    """Flat key = value lines; # starts a comment; unknown keys are errors."""
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _PARAM_FIELDS and key not in PARAM_ALIASES and key not in _OPTION_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


def _build_params(args) -> InterferometerParams:
    overrides: dict = {}
    preset = args.preset
    if args.config:
        file_values = _parse_config_file(args.config)
        preset = file_values.pop("preset", preset)
        # flags win over file-provided command options
        for key in ("circuit", "target"):
            val = file_values.pop(key, None)
            if val is not None and getattr(args, key, None) is None:
                setattr(args, key, val)
        overrides.update(file_values)
    for name in _PARAM_FIELDS + tuple(PARAM_ALIASES):
        flag = getattr(args, name, None)
        if flag is not None:
            overrides[name] = flag
    if args.precision is not None:
        overrides["precision"] = args.precision
    if args.arms is not None:
        overrides["arms"] = {"probe": "probe-only", "both": "both"}[args.arms]
    try:
        return make_params(preset, **overrides)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _nstr(x, n):
    return mp.nstr(x, n)


def _db4(x):
    """Human summary style: dB rounded to 4 decimals."""
    return "undefined" if x is None else f"{float(x):.4f}"


def _write_outputs(args, rows, header, sidecar, p):
    """CSV to --out (or stdout) plus a .json sidecar next to it."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    csv_text = buf.getvalue()
    sidecar = dict(sidecar)
    sidecar["engine_version"] = __version__
    sidecar["parameters"] = {
        f.name: (_nstr(getattr(p, f.name), p.precision)
                 if f.name not in ("arms", "precision") else getattr(p, f.name))
        for f in fields(InterferometerParams)
    }
    json_text = json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        try:
            out.write_text(csv_text)
            out.with_suffix(out.suffix + ".json").write_text(json_text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"wrote {out} and {out.with_suffix(out.suffix + '.json')}")
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_text)
    return EXIT_OK


def cmd_lod(args) -> int:
    p = _build_params(args)
    circuit = args.circuit or "tsu11"
    if circuit not in CIRCUITS:
        print(f"error: unknown circuit {circuit!r}", file=sys.stderr)
        return EXIT_CONFIG
    if circuit == "vacuum":
        # the vacuum circuit is by definition unseeded; presets may carry
        # nonzero seeds for the other circuits
        p = p.replace(alpha=0, beta=0)
    rep = report(circuit, p)
    print(f"circuit        : {circuit}")
    with workdps(p.precision):
        print(f"mean_j         : {_nstr(rep.mean_j, 12)}")
        print(f"variance       : {_nstr(rep.variance.real, 12)}")
        print(f"dj_dphi_sq     : {_nstr(rep.dj_dphi_sq, 12)}")
    if rep.lod_db is None:
        print("lod_db         : undefined (phase derivative of <J> vanishes)")
        _maybe_write_report(args, rep, circuit, p)
        return EXIT_UNDEFINED
    print(f"lod_db         : {_db4(rep.lod_db)}")
    return _maybe_write_report(args, rep, circuit, p)


def _maybe_write_report(args, rep, circuit, p) -> int:
    rows = [[
        circuit,
        _nstr(rep.variance.real, p.precision),
        _nstr(rep.dj_dphi_sq, p.precision),
        _nstr(rep.lod_db, p.precision) if rep.lod_db is not None else "undefined",
    ]]
    sidecar = {"command": "lod", "circuit": circuit, "report": rep.to_json_dict()}
    return _write_outputs(args, rows, ["circuit", "variance", "dj_dphi_sq", "lod_db"],
                          sidecar, p)


def cmd_lodi(args) -> int:
    p = _build_params(args)
    rep = lodi_db(p)
    print(f"lod_tsu11_db   : {_db4(rep.lod_tsu11_db)}")
    print(f"lod_classical  : {_db4(rep.lod_classical_db)}")
    print(f"lodi_db        : {_db4(rep.lodi_db)}")
    rows = [[
        _nstr(rep.lod_tsu11_db, p.precision),
        _nstr(rep.lod_classical_db, p.precision),
        _nstr(rep.lodi_db, p.precision),
    ]]
    sidecar = {"command": "lodi", **rep.to_json_dict()}
    return _write_outputs(args, rows, ["lod_tsu11_db", "lod_classical_db", "lodi_db"],
                          sidecar, p)


def cmd_optimize(args) -> int:
    p = _build_params(args)
    target = args.target or "lodi"
    result = optimize_phases(p, target=target, circuit=args.circuit or "tsu11",
                             grid_n=args.grid)
    print(f"phi_p          : {_nstr(result.phi_p, 8)}")
    print(f"phi_c          : {_nstr(result.phi_c, 8)}")
    print(f"{target}_db        : {_db4(result.value_db)}")
    print(f"converged      : {result.converged}")
    rows = [[
        _nstr(result.phi_p, p.precision),
        _nstr(result.phi_c, p.precision),
        _nstr(result.value_db, p.precision),
    ]]
    sidecar = {
        "command": "optimize",
        "target": target,
        **result.to_json_dict(p.precision),
    }
    if target == "lodi":
        sidecar["lodi_db"] = _nstr(result.value_db, p.precision)
    return _write_outputs(args, rows, ["phi_p", "phi_c", f"{target}_db"], sidecar, p)


def _parse_axis(spec: str) -> AxisSpec:
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"axis spec must be NAME:MIN:MAX:COUNT[:log], got {spec!r}")
    name, lo, hi, count = parts[:4]
    log = False
    if len(parts) == 5:
        if parts[4] != "log":
            raise ConfigError(f"axis spacing must be 'log', got {parts[4]!r}")
        log = True
    try:
        return AxisSpec(name, float(lo), float(hi), int(count), log)
    except ValueError as exc:
        raise ConfigError(f"bad axis spec {spec!r}: {exc}") from exc


def cmd_sweep(args) -> int:
    p = _build_params(args)
    if not args.axis:
        print("error: sweep requires at least one --axis", file=sys.stderr)
        return EXIT_CONFIG
    axes = tuple(_parse_axis(a) for a in args.axis)
    grid = SweepGrid(axes=axes, base=p, target=args.target or "lod",
                     circuit=args.circuit or "tsu11")
    rows_raw = run_sweep(grid)
    header = [ax.name for ax in axes] + [grid.target, "error"]
    rows = []
    for row in rows_raw:
        cells = [_nstr(row[ax.name], p.precision) for ax in axes]
        cells.append("" if row["value"] is None else _nstr(row["value"], p.precision))
        cells.append(row["error"])
        rows.append(cells)
    sidecar = {"command": "sweep", "target": grid.target, "circuit": grid.circuit,
               "axes": [vars(ax) for ax in axes], "points": len(rows)}
    return _write_outputs(args, rows, header, sidecar, p)


def cmd_vacuum(args) -> int:
    p = _build_params(args)
    p = p.replace(alpha=0, beta=0)
    axis_specs = args.axis or ["phi:-0.05:0.05:41", "phi_p:-0.05:0.05:5"]
    if len(axis_specs) != 2:
        print("error: vacuum expects exactly two --axis specs", file=sys.stderr)
        return EXIT_CONFIG
    axes = tuple(_parse_axis(a) for a in axis_specs)
    try:
        rows_raw, minima = vacuum_noise_map(p, axes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    header = [axes[0].name, axes[1].name, "variance", "error"]
    rows = [
        [_nstr(r[axes[0].name], p.precision), _nstr(r[axes[1].name], p.precision),
         _nstr(r["value"], p.precision), r["error"]]
        for r in rows_raw
    ]
    sidecar = {
        "command": "vacuum",
        "axes": [vars(ax) for ax in axes],
        "minima": [
            {k: _nstr(v, p.precision) for k, v in m.items()} for m in minima
        ],
    }
    return _write_outputs(args, rows, header, sidecar, p)


def _add_common(sub):
    sub.add_argument("--config", help="flat key = value configuration file")
    sub.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
    sub.add_argument("--circuit", choices=sorted(CIRCUITS),
                     help="circuit to evaluate (default tsu11)")
    sub.add_argument("--out", help="CSV output path (JSON sidecar written alongside)")
    sub.add_argument("--precision", type=int, help="working precision in digits")
    sub.add_argument("--arms", choices=["probe", "both"],
                     help="which squeezed beams pass the sample")
    sub.add_argument("--axis", action="append",
                     help="sweep axis NAME:MIN:MAX:COUNT[:log] (repeatable)")
    for name in ("r", "s", "alpha", "beta", "gamma", "kappa", "eta", "theta_f",
                 "phi_p", "phi_c", "eta_p1", "eta_c1", "eta_p2", "eta_c2",
                 "eta_p3", "eta_c3"):
        sub.add_argument(f"--{name}", dest=name, help=f"override parameter {name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsu11",
        description="Squeezed-light interferometer metrology: limit of detection "
                    "for polarization-rotation sensing.",
    )
    parser.add_argument("--version", action="version", version=f"tsu11 {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, fn, extra in (
        ("lod", cmd_lod, "limit of detection for one circuit"),
        ("lodi", cmd_lodi, "LOD improvement over the classical benchmark"),
        ("optimize", cmd_optimize, "optimize the LO phases"),
        ("sweep", cmd_sweep, "parameter sweep to CSV"),
        ("vacuum", cmd_vacuum, "vacuum-seeded noise map"),
    ):
        sub = subs.add_parser(name, help=extra)
        _add_common(sub)
        if name in ("optimize", "sweep"):
            sub.add_argument("--target", choices=["lod", "lodi", "variance"],
                             help="quantity to optimize or sweep")
        if name == "optimize":
            sub.add_argument("--grid", type=int, default=64,
                             help="coarse grid resolution per phase axis")
        sub.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; version/help exit 0
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UndefinedLodError as exc:
        print(f"undefined result: {exc}", file=sys.stderr)
        if exc.variance is not None:
            print(f"variance       : {mp.nstr(exc.variance.real, 12)}")
        return EXIT_UNDEFINED


if __name__ == "__main__":
    sys.exit(main())
