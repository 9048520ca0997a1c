"""Command-line front end: generate, refine, analyze, verify, sweep.

Exit codes: 0 success, 1 domain failure (bad mesh, failed check), 2 usage or
I/O errors where a subcommand defines them that way.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import (
    DegenerateTet,
    InvalidMesh,
    NonManifold,
    ParseError,
    SplitPointOutsideFace,
    UnsupportedVersion,
    WftetError,
)
from .generators import FAMILIES, GenSpec, generate
from .mesh import validate
from .meshio import load_tmesh, read_msh_ascii, save_tmesh, write_vtk_legacy
from .refine import refine_k
from .regularity import analyze_mesh, sweep_sharpness, sweep_to_csv, verify_mesh


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load_mesh(path):
    if str(path).endswith(".msh"):
        with open(path, "r") as f:
            return read_msh_ascii(f.read())
    return load_tmesh(path)


def cmd_generate(args) -> int:
    try:
        spec = GenSpec(
            family=args.family, n=args.n, sigma=args.sigma, eps=args.eps, seed=args.seed
        )
    except ValueError as e:
        return _fail(str(e), 2)
    try:
        mesh = generate(spec)
    except (DegenerateTet, WftetError) as e:
        return _fail(f"generation failed: {e}", 1)
    try:
        save_tmesh(mesh, args.output)
    except OSError as e:
        return _fail(str(e), 1)
    print(f"wrote {mesh.num_tets} tets, {mesh.num_vertices} vertices to {args.output}")
    return 0


def cmd_refine(args) -> int:
    if args.levels < 1:
        return _fail(f"--levels must be >= 1, got {args.levels}", 2)
    try:
        mesh = _load_mesh(args.input)
    except OSError as e:
        return _fail(str(e), 1)
    except (ParseError, UnsupportedVersion, InvalidMesh) as e:
        return _fail(str(e), 1)
    try:
        out = refine_k(mesh, args.levels)
    except (DegenerateTet, SplitPointOutsideFace, NonManifold) as e:
        return _fail(str(e), 1)

    refined = out.refined
    try:
        save_tmesh(refined, args.output)
        if args.vtk:
            write_vtk_legacy(refined, args.vtk)
        if args.provenance:
            with open(args.provenance, "w") as f:
                f.write("child_id,parent_id\n")
                f.writelines(
                    f"{c},{p}\n" for c, p in enumerate(out.root_parent.tolist())
                )
    except OSError as e:
        return _fail(str(e), 1)

    parent_vol = _total_volume(mesh)
    child_vol = _total_volume(refined)
    residual = abs(child_vol - parent_vol) / parent_vol if parent_vol else 0.0
    print(f"children: {refined.num_tets}")
    print(f"vertices: {refined.num_vertices}")
    print(f"volume_residual: {residual:.9g}")
    return 0


def _total_volume(mesh) -> float:
    from .geometry import signed_volumes

    if mesh.num_tets == 0:
        return 0.0
    return float(signed_volumes(mesh.tet_vertex_array()).sum())


def cmd_analyze(args) -> int:
    try:
        mesh = _load_mesh(args.input)
    except OSError as e:
        return _fail(str(e), 1)
    except (ParseError, UnsupportedVersion, InvalidMesh) as e:
        return _fail(str(e), 1)
    report = validate(mesh)
    if not report.ok:
        return _fail("invalid mesh:\n" + report.summary(), 1)
    try:
        stats = analyze_mesh(mesh)
    except ValueError as e:
        return _fail(str(e), 1)
    except (DegenerateTet, SplitPointOutsideFace) as e:
        return _fail(str(e), 1)
    print(stats.to_csv() if args.report == "csv" else stats.to_json())
    return 0


def cmd_verify(args) -> int:
    try:
        mesh = _load_mesh(args.input)
    except OSError as e:
        return _fail(str(e), 2)
    except (ParseError, UnsupportedVersion) as e:
        return _fail(str(e), 2)
    except InvalidMesh as e:
        return _fail(str(e), 1)

    vreport = validate(mesh)
    if not vreport.clean:
        print("validation failed:", file=sys.stderr)
        print(vreport.summary(), file=sys.stderr)
        return 1
    try:
        report = verify_mesh(mesh, tolerance=args.tolerance)
    except ValueError as e:
        return _fail(str(e), 1)
    except (DegenerateTet, SplitPointOutsideFace, NonManifold) as e:
        return _fail(str(e), 1)
    print(report)
    return 0 if report.all_passed else 1


def cmd_sweep(args) -> int:
    if args.steps < 1:
        return _fail(f"--steps must be >= 1, got {args.steps}", 2)
    if args.eps_from <= 0 or args.eps_to <= 0:
        return _fail("--eps-from and --eps-to must be > 0", 2)
    grid = np.geomspace(args.eps_from, args.eps_to, args.steps)
    import warnings

    with warnings.catch_warnings(record=True) as notes:
        warnings.simplefilter("always")
        records = sweep_sharpness(args.family, grid)
    for note in notes:
        print(f"note: {note.message}", file=sys.stderr)
    for r in records:
        if r.slack <= 1.0:
            print(
                f"note: param {r.param:.9g} has slack {r.slack:.9g} <= 1 "
                "(observed ratio reached the bound)",
                file=sys.stderr,
            )
    csv = sweep_to_csv(records)
    try:
        with open(args.out, "w") as f:
            f.write(csv)
    except OSError as e:
        return _fail(str(e), 1)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wftet",
        description="Worsey-Farin refinement and shape-regularity certification "
        "for tetrahedral meshes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generator-family mesh to .tmesh")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int, default=1, help="cube subdivision count")
    g.add_argument("--sigma", type=float, default=0.0, help="perturbation magnitude")
    g.add_argument("--eps", type=float, default=1.0, help="family parameter")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("refine", help="apply the 12-way refinement")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--vtk", help="also write a legacy VTK file")
    r.add_argument("--provenance", help="write child_id,parent_id CSV")
    r.add_argument("--levels", type=int, default=1)
    r.set_defaults(func=cmd_refine)

    a = sub.add_parser("analyze", help="report mesh quality statistics")
    a.add_argument("-i", "--input", required=True)
    a.add_argument("--report", choices=("json", "csv"), default="json")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run every inequality check on mesh + refinement")
    v.add_argument("-i", "--input", required=True)
    v.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="override the pass tolerance of every check",
    )
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="regularity bound sweep over a mesh family")
    s.add_argument("--family", default="sliver", choices=FAMILIES)
    s.add_argument("--eps-from", type=float, required=True)
    s.add_argument("--eps-to", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
