"""Batch front-end: solve, scan, verify and export.

Magnetic fields are in atomic units (1 a.u. = 2.35e5 T); angles in degrees.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import verify as verify_mod
from .eigensolver import (ClassificationError, ConvergenceError, ShiftHitsEigenvalue, SolverOptions,
                          converge, parse_target, solve_target)
from .observables import density_cartesian, potential_surface, second_moments
from .params import TESLA_PER_AU, PhysicalConfig, parse_mass_mode
from .reference import strong_field_energy, weak_field_energy

SOLVE_COLUMNS = ("B", "alpha_degrees", "mass_mode", "target", "E", "residual", "N", "rho_N", "M",
                 "iterations", "status")
SCAN_COLUMNS = SOLVE_COLUMNS + ("weak_asymptote", "strong_asymptote")

# config keys and the RunConfig field each one sets
_KEYS = {"B": "B", "alpha": "alpha", "mass": "mass", "target": "target", "N": "N", "rhoN": "rho_N",
         "M": "M", "tol": "tol", "jobs": "jobs", "out": "out", "format": "format",
         "extent": "extent", "resolution": "resolution"}


@dataclass(frozen=True)
class RunConfig:
    B: tuple = (0.0,)
    alpha: tuple = (0.0,)  # degrees
    mass: str = "infinite"
    target: str = "ground"
    N: int | None = None
    rho_N: float | None = None
    M: int | None = None
    tol: float = 1e-7
    jobs: int | None = None
    out: str | None = None
    format: str = "csv"
    extent: float | None = None
    resolution: int = 101

    def physics(self, B: float, alpha: float) -> PhysicalConfig:
        return PhysicalConfig.from_degrees(B, alpha, parse_mass_mode(self.mass))

    @property
    def explicit_numerics(self) -> bool:
        return any(v is not None for v in (self.N, self.rho_N, self.M))

    def solver_options(self) -> SolverOptions:
        return SolverOptions(N=self.N or 800, M=self.M, rho_N=self.rho_N)


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


_PARSERS = {"B": _floats, "alpha": _floats, "N": int, "rho_N": float, "M": int, "tol": float,
            "jobs": int, "extent": float, "resolution": int}


def render(cfg: RunConfig) -> str:
    """Flat key=value text; unset optional values are omitted."""
    inverse = {v: k for k, v in _KEYS.items()}
    lines = []
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if val is None:
            continue
        if isinstance(val, tuple):
            val = ",".join(repr(float(v)) for v in val)
        elif isinstance(val, float):
            val = repr(val)
        lines.append(f"{inverse[f.name]}={val}")
    return "\n".join(lines) + "\n"


def parse(text: str, base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        name = _KEYS[key]
        values[name] = _PARSERS.get(name, str)(val)
    return replace(base or RunConfig(), **values)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def solve_point(cfg: RunConfig, B: float, alpha: float) -> dict:
    """One solve; failures are reported in the status column."""
    record = {"B": float(B), "alpha_degrees": float(alpha), "mass_mode": cfg.mass, "target": cfg.target,
              "E": math.nan, "residual": math.nan, "N": None, "rho_N": None, "M": None,
              "iterations": None, "status": "ok"}
    try:
        physics = cfg.physics(B, alpha)
        target = parse_target(cfg.target)
        if cfg.explicit_numerics:
            res = solve_target(physics, target, cfg.solver_options())
        else:
            res = converge(physics, target, cfg.tol)
    except (ConvergenceError, ClassificationError, ShiftHitsEigenvalue, ValueError) as err:
        record["status"] = f"{type(err).__name__}: {err}".replace("\n", " ")
        return record
    record.update(E=res.energy, residual=res.residual, N=res.N, rho_N=float(res.rho_N), M=res.M,
                  iterations=res.iterations)
    return record


def _scan_record(args) -> dict:
    cfg, B, alpha = args
    rec = solve_point(cfg, B, alpha)
    m_r = cfg.physics(B, alpha).m_r
    rec["weak_asymptote"] = weak_field_energy(B, m_r)
    rec["strong_asymptote"] = strong_field_energy(B, m_r) if B > 0 else None
    return rec


def write_records(records: list[dict], columns, fmt: str, stream):
    if fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([_fmt(r.get(c)) for c in columns])
    elif fmt == "json-lines":
        for r in records:
            clean = {c: (None if isinstance(r.get(c), float) and math.isnan(r[c]) else r.get(c)) for c in columns}
            stream.write(json.dumps(clean) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise OSError(f"cannot write {out}: {err}") from err


def cmd_solve(cfg: RunConfig) -> int:
    rec = solve_point(cfg, cfg.B[0], cfg.alpha[0])
    buf = io.StringIO()
    write_records([rec], SOLVE_COLUMNS, cfg.format, buf)
    _emit(buf.getvalue(), cfg.out)
    return 0 if rec["status"] == "ok" else 1


def cmd_scan(cfg: RunConfig) -> int:
    if not cfg.B or not cfg.alpha:
        raise ValueError("scan needs nonempty B and alpha lists")
    points = [(cfg, B, a) for B in cfg.B for a in cfg.alpha]
    jobs = cfg.jobs or os.cpu_count() or 1
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_scan_record, points))
    else:
        records = [_scan_record(p) for p in points]
    buf = io.StringIO()
    write_records(records, SCAN_COLUMNS, cfg.format, buf)
    _emit(buf.getvalue(), cfg.out)
    return 0 if all(r["status"] == "ok" for r in records) else 1


def cmd_verify(selector: str, out: str | None = None) -> int:
    rows = verify_mod.run(selector)
    lines = [r.format() for r in rows]
    failed = sum(not r.ok for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} rows within tolerance")
    _emit("\n".join(lines) + "\n", out)
    return 0 if failed == 0 else 1


def grid_text(axis: np.ndarray, field: np.ndarray) -> str:
    lo, hi = float(axis[0]), float(axis[-1])
    ny, nx = field.shape
    head = f"# x_min x_max y_min y_max nx ny\n# {lo!r} {hi!r} {lo!r} {hi!r} {nx} {ny}\n"
    body = "\n".join(" ".join(f"{v:.12e}" for v in row) for row in field)
    return head + body + "\n"


def cmd_export(kind: str, cfg: RunConfig) -> int:
    physics = cfg.physics(cfg.B[0], cfg.alpha[0])
    if kind == "potential":
        ax, field = potential_surface(physics.B, physics.alpha, cfg.extent or 2.0, cfg.resolution)
    elif kind == "density":
        target = parse_target(cfg.target)
        try:
            if cfg.explicit_numerics:
                res = solve_target(physics, target, cfg.solver_options())
            else:
                res = converge(physics, target, cfg.tol)
        except (ConvergenceError, ClassificationError) as err:
            sys.stderr.write(f"export: {err}\n")
            return 1
        extent = cfg.extent
        if extent is None:
            extent = 4.0 * math.sqrt(sum(second_moments(res.state)))
        ax, field = density_cartesian(res.state, extent, cfg.resolution)
    else:
        raise ValueError(f"unknown export kind {kind!r}")
    _emit(grid_text(ax, field), cfg.out)
    return 0


def _add_common(p: argparse.ArgumentParser, lists: bool = False):
    p.add_argument("--config", help="key=value file; flags given on the command line take precedence")
    p.add_argument("--B", help="field in atomic units (1 a.u. = %.3g T)%s"
                   % (TESLA_PER_AU, "; comma-separated list" if lists else ""))
    p.add_argument("--alpha", help="tilt angle in degrees, 0..90%s" % ("; comma-separated list" if lists else ""))
    p.add_argument("--mass", help="infinite | finite | finite:<m_p in electron masses> (default infinite)")
    p.add_argument("--target", help="ground | near:<E> | level:<n>[,<l>] (default ground)")
    p.add_argument("--N", type=int, help="radial nodes; setting N, rhoN or M skips the convergence ladder")
    p.add_argument("--rhoN", type=float, help="box radius in bohr")
    p.add_argument("--M", type=int, help="angular truncation, 2M+1 grid points")
    p.add_argument("--tol", type=float, help="ladder agreement tolerance (default 1e-7)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json-lines"))


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse(fh.read(), cfg)
    overrides = {}
    for key, name in _KEYS.items():
        val = getattr(args, key, None)
        if val is None:
            continue
        overrides[name] = _floats(val) if name in ("B", "alpha") else val
    return replace(cfg, **overrides)


def build_parser() -> argparse.ArgumentParser:
    columns = ", ".join(SOLVE_COLUMNS)
    parser = argparse.ArgumentParser(
        prog="hydro2d",
        description="Planar hydrogen atom in a tilted magnetic field. "
                    f"Fields in atomic units: 1 a.u. = {TESLA_PER_AU:.3g} T. Angles in degrees.",
        epilog=f"solve columns: {columns}. scan adds: weak_asymptote, strong_asymptote.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="one energy", description=f"CSV columns: {columns}")
    _add_common(p)
    p = sub.add_parser("scan", help="energies over B and alpha lists",
                       description=f"CSV columns: {columns}, weak_asymptote, strong_asymptote")
    _add_common(p, lists=True)
    p.add_argument("--jobs", type=int, help="worker processes (default: available cores)")
    p = sub.add_parser("verify", help="recompute the benchmark tables")
    p.add_argument("table", choices=verify_mod.TABLES + ("all",))
    p.add_argument("--out")
    p = sub.add_parser("export", help="density or potential on a Cartesian grid")
    p.add_argument("kind", choices=("density", "potential"))
    _add_common(p)
    p.add_argument("--extent", type=float, help="half width of the square in bohr")
    p.add_argument("--resolution", type=int, help="points per side (>= 2)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args.table, args.out)
    cfg = _config_from_args(args)
    if args.command == "solve":
        return cmd_solve(cfg)
    if args.command == "scan":
        return cmd_scan(cfg)
    return cmd_export(args.kind, cfg)


if __name__ == "__main__":
    sys.exit(main())
