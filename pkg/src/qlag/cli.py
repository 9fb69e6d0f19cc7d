"""Command-line entry point.

Subcommands:
  analyze             full verification report for an instance config
  verify-cn           complex-space property suite only
  verify-cpn          projective property suite only (cones)
  scan-intersections  self-intersection scan only
  classify            quotient topology label only
  mesh                export OBJ / CSV geometry

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration
error.  Reports go to stdout and, with --out, to a file; identical
(config, seed) pairs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigInvalid, QlagError
from .pipeline import (
    VERIFY_TOLERANCES,
    InstanceConfig,
    report_passed,
    run_analyze,
    serialize_report,
)

TOL_FLAGS = sorted(
    name.replace("_", "-") for name in VERIFY_TOLERANCES
) + ["residual", "rank", "u-floor", "fd-step"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlag",
        description="Build and numerically certify Lagrangian immersions "
        "from integer quadric systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "analyze": "run every configured sweep and print the full report",
        "verify-cn": "verify the complex-space properties",
        "verify-cpn": "verify the projective properties (cones only)",
        "scan-intersections": "scan sampled images for self-intersections",
        "classify": "print the quotient topology label",
        "mesh": "export mesh geometry (OBJ surface / polyline, CSV cloud)",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the instance config (JSON)")
        p.add_argument("--seed", type=int, default=None, help="override RNG seed")
        p.add_argument(
            "--samples", type=int, default=None, help="override sample count"
        )
        p.add_argument("--out", default=None, help="also write the output to a file")
        for flag in TOL_FLAGS:
            p.add_argument(
                f"--tol-{flag}",
                type=float,
                default=None,
                dest=f"tol_{flag.replace('-', '_')}",
                help=f"override tolerance {flag}",
            )
    return parser


def _load_config(args) -> InstanceConfig:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigInvalid([f"config: cannot read {args.config}: {exc}"]) from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid([f"config: invalid JSON: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigInvalid(["config: top level must be an object"])
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.samples is not None:
        raw["samples"] = args.samples
    tolerances = dict(raw.get("tolerances", {}))
    for flag in TOL_FLAGS:
        value = getattr(args, f"tol_{flag.replace('-', '_')}", None)
        if value is not None:
            tolerances[flag.replace("-", "_")] = value
    raw["tolerances"] = tolerances
    return InstanceConfig.from_dict(raw)


def _with_sweeps(config: InstanceConfig, sweeps: tuple[str, ...]) -> InstanceConfig:
    from dataclasses import replace

    return replace(config, sweeps=sweeps)


def _emit(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)


def _run_report(config: InstanceConfig, out_path: str | None) -> int:
    report = run_analyze(config)
    _emit(serialize_report(report), out_path)
    return 0 if report_passed(report) else 1


def _run_mesh(config: InstanceConfig, out_path: str | None) -> int:
    from . import meshing

    system = config.system()
    target = config.mesh_target
    nx, ny = config.mesh_resolution
    out = out_path or "qlag-mesh.obj"
    if target == "cpn":
        if system.n == 2:
            pts, line = meshing.build_projective_polyline(system, max(nx, ny))
            meshing.write_obj(out, pts, polyline=line)
        elif system.n == 3:
            if not out.endswith(".csv"):
                out = out.rsplit(".", 1)[0] + ".csv"
            meshing.write_projective_cloud(out, system, nx, ny)
        else:
            raise ConfigInvalid(
                ["mesh.target: cpn meshes support n=2 (polyline) and n=3 (cloud)"]
            )
    else:
        mesh = meshing.build_surface_mesh(system, nx, ny)
        vertices = meshing.project_vertices(mesh.vertices, config.mesh_projection)
        meshing.write_obj(out, vertices, mesh.faces)
        chi = mesh.euler_characteristic()
        sys.stdout.write(
            "mesh: %d vertices, %d faces, euler_characteristic %d, closed %s\n"
            % (mesh.vertex_count, len(mesh.faces), chi, str(mesh.is_closed()).lower())
        )
    sys.stdout.write(f"wrote {out}\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "analyze":
            return _run_report(config, args.out)
        if args.command == "verify-cn":
            return _run_report(_with_sweeps(config, ("cn",)), args.out)
        if args.command == "verify-cpn":
            return _run_report(_with_sweeps(config, ("cpn",)), args.out)
        if args.command in ("scan-intersections", "classify"):
            return _run_report(_with_sweeps(config, ("quotient",)), args.out)
        if args.command == "mesh":
            return _run_mesh(config, args.out)
        parser.error(f"unknown command {args.command}")
    except ConfigInvalid as exc:
        for message in exc.messages:
            sys.stderr.write(f"config error: {message}\n")
        return 2
    except QlagError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
