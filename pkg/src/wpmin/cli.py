"""Command-line interface: ``wpmin verify | solve | mesh | constants``.

Exit status is 0 when every check passes, 1 when a check or computation
fails, 2 on a configuration error (argparse uses 2 as well).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import SamplingError, WpminError
from .surfaces import FAMILY_NAMES

log = logging.getLogger("wpmin")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    family: str = "vilhena3"
    resolution: int = 100
    cutoff: float = 0.04
    tolerance: float = 1e-10
    output_dir: Path = Path(".")
    report_format: str = "json"
    mesh_format: str = "obj"
    symmetrize: bool = False


class ConfigError(ValueError):
    pass


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpmin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, resolution):
        sp.add_argument("--family", choices=FAMILY_NAMES, default="vilhena3")
        sp.add_argument("--tolerance", type=_positive_float, default=1e-10,
                        help="quadrature tolerance (default 1e-10)")
        sp.add_argument("--output-dir", type=Path, default=Path("."))
        if resolution is not None:
            sp.add_argument("--resolution", type=int, default=resolution,
                            help="grid cells per side, even and >= 8")
            sp.add_argument("--cutoff", type=_positive_float, default=0.04,
                            help="radius of the disks removed around punctures")

    v = sub.add_parser("verify", help="run every check and write a report")
    common(v, 100)
    v.add_argument("--report", choices=("json", "csv"), default="json")
    v.add_argument("--no-mesh", action="store_true", help="skip the informational mesh integral")

    s = sub.add_parser("solve", help="solve the period problem for (lambda, c)")
    common(s, None)
    s.add_argument("--report", choices=("json", "csv"), default=None,
                   help="also write the solution to the output directory")

    m = sub.add_parser("mesh", help="build and export a surface mesh")
    common(m, 200)
    m.add_argument("--format", choices=("obj", "ply"), default="obj")
    m.add_argument("--symmetrize", action="store_true",
                   help="add images under the symmetry group and weld")

    sub.add_parser("constants", help="print lattice constants as JSON")
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        family=getattr(args, "family", "vilhena3"),
        resolution=getattr(args, "resolution", 100),
        cutoff=getattr(args, "cutoff", 0.04),
        tolerance=getattr(args, "tolerance", 1e-10),
        output_dir=getattr(args, "output_dir", Path(".")),
        report_format=getattr(args, "report", None) or "json",
        mesh_format=getattr(args, "format", "obj"),
        symmetrize=getattr(args, "symmetrize", False),
    )
    if args.command in ("verify", "mesh"):
        from .mesh import SamplingPlan
        try:
            SamplingPlan(cfg.resolution, cfg.cutoff)
        except SamplingError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / name
    path.write_text(text)
    return path


def cmd_verify(cfg: RunConfig, mesh: bool = True) -> int:
    from .report import verify

    rep = verify(cfg.family, cfg.resolution if mesh else None, cfg.cutoff, cfg.tolerance)
    text = rep.to_json() if cfg.report_format == "json" else rep.to_csv()
    path = _write(cfg, f"{cfg.family}-report.{cfg.report_format}", text)
    cur = rep.curvature
    print(f"family           {rep.family}")
    print(f"lambda/e1        {rep.constants['family']['lambda_over_e1']:.12g}")
    print(f"c                {rep.constants['family']['c']:.15g}")
    print(f"period residual  {rep.period_report['residual_norm']:.3e}")
    print(f"total curvature  claimed {cur['claimed'] / math.pi:.6g}pi  "
          f"jorge-meeks {cur['jorge_meeks'] / math.pi:.6g}pi  "
          f"degree-based {cur['degree_based'] / math.pi:.6g}pi  "
          f"domain {cur['domain'] / math.pi:.6g}pi")
    if cur["mesh_integrated"] is not None:
        print(f"mesh integral    {cur['mesh_integrated'] / math.pi:.6g}pi (informational, "
              f"resolution {cfg.resolution}, cutoff {cfg.cutoff})")
    print(f"symmetry         order {rep.symmetry['group_order']}, "
          f"max deviation {rep.symmetry['max_deviation']:.3e}")
    n_fail = len(rep.failed())
    print(f"checks           {len(rep.checks) - n_fail}/{len(rep.checks)} passed")
    for cid in rep.failed():
        print(f"  FAIL {cid}")
    print(f"overall          {'pass' if rep.overall else 'fail'}")
    print(f"report           {path}")
    return EXIT_OK if rep.overall else EXIT_FAIL


def cmd_solve(cfg: RunConfig) -> tuple[int, dict]:
    from . import periods as per
    from .elliptic import lattice_constants
    from .surfaces import make_family, published_solution

    e1 = lattice_constants().e1
    family = make_family(cfg.family)
    out = {"family": cfg.family}
    if cfg.family == "chen-gackstatter":
        lam = family.lam
        out["roots"] = []
        out["note"] = "lambda is fixed for this family; only c is solved"
    else:
        sol = per.solve_lambda(family, cfg.tolerance)
        out.update(sol.to_dict())
        for r, deg in zip(sol.roots, sol.degenerate):
            tag = "degenerate (lambda = e1 excluded)" if deg else "admissible"
            print(f"root  lambda = {r:.15g} = {r / e1:.12g} e1  [{tag}]")
        if not sol.admissible:
            print("no admissible root", file=sys.stderr)
            return EXIT_FAIL, out
        lam = sol.admissible[0]
    c = per.solve_c(family, lam, cfg.tolerance)
    c_ref = published_solution(cfg.family)[1]
    dev = abs(c - c_ref) / c_ref
    out.update({"lambda": lam, "c": c, "c_claimed": c_ref, "c_rel_dev": dev})
    print(f"lambda = {lam:.15g} = {lam / e1:.12g} e1")
    print(f"c      = {c:.15g}")
    print(f"claimed c = {c_ref:.15g}  relative deviation {dev:.3e}")
    if cfg.family != "chen-gackstatter":
        c_cf = per.closed_form_c(cfg.family, lam)
        out["c_closed_form"] = c_cf
        out["c_closed_form_rel_dev"] = abs(c - c_cf) / c_cf
        print(f"closed-form c(lambda) = {c_cf:.15g}  relative deviation {abs(c - c_cf) / c_cf:.3e}")
    if cfg.family == "vilhena3":
        c_deg = per.solve_c(family, e1, cfg.tolerance)
        c_w = published_solution("weber2")[1]
        out["degenerate_branch"] = {"lambda": e1, "c": c_deg, "weber2_c": c_w,
                                    "rel_dev": abs(c_deg - c_w) / c_w}
        print(f"degenerate root lambda = e1 reproduces the weber2 data: "
              f"c = {c_deg:.15g} vs weber2 c = {c_w:.15g}")
    return EXIT_OK if dev <= 1e-10 else EXIT_FAIL, out


def cmd_mesh(cfg: RunConfig) -> int:
    from .mesh import (SamplingPlan, build_mesh, export_mesh, mesh_filename,
                       symmetry_complete, total_curvature)
    from .report import TOTAL_CURVATURE_CLAIMS
    from .surfaces import make_family

    family = make_family(cfg.family)
    mesh = build_mesh(SamplingPlan(cfg.resolution, cfg.cutoff), family)
    ct = total_curvature(mesh)
    if cfg.symmetrize:
        mesh = symmetry_complete(mesh, family)
    path = cfg.output_dir / mesh_filename(cfg.family, cfg.resolution, cfg.mesh_format)
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            nbytes = export_mesh(mesh, cfg.mesh_format, fh)
    except OSError as exc:
        print(f"export failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    claim = TOTAL_CURVATURE_CLAIMS[cfg.family]
    print(f"vertices {mesh.n_vertices}")
    print(f"faces    {mesh.n_faces}")
    print(f"discrete total curvature {ct:.10g} = {ct / math.pi:.6g}pi "
          f"(claimed {claim / math.pi:.6g}pi, relative deviation {abs(ct - claim) / abs(claim):.4f})")
    print(f"wrote {path} ({nbytes} bytes)")
    return EXIT_OK


def cmd_constants() -> int:
    from .report import constants_section

    data, checks = constants_section()
    print(json.dumps(data, indent=2))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"wpmin: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "verify":
            return cmd_verify(cfg, mesh=not args.no_mesh)
        if args.command == "solve":
            status, out = cmd_solve(cfg)
            if args.report == "json":
                _write(cfg, f"{cfg.family}-solve.json", json.dumps(out, indent=2))
            elif args.report == "csv":
                rows = ["key,value"] + [f"{k},{v}" for k, v in out.items()
                                        if not isinstance(v, (dict, list))]
                _write(cfg, f"{cfg.family}-solve.csv", "\n".join(rows) + "\n")
            return status
        if args.command == "mesh":
            return cmd_mesh(cfg)
        return cmd_constants()
    except WpminError as exc:
        print(f"wpmin: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
