"""Command-line interface.

Subcommands: body, moments, section, ikbody, bp-approx, distance, verify,
report.  All configuration is explicit (no environment variables); every
output records the seed it was produced with.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bodies as bd
from . import quadrature as qd
from .approx import bp_curve
from .distances import d_bm_upper, d_geometric, d_radial
from .plots import load_rows, ovr_curve_svg, plots_from_rows
from .positions import isotropic_position
from .report import CSV_FIELDS, Report, RunConfig
from .sections import ik_solve, section_function
from .suites import SUITES, run_suite


def _add_common(parser):
    parser.add_argument("--grid", type=int, default=2000, help="sphere grid resolution")
    parser.add_argument("--samples", type=int, default=200_000,
                        help="Monte Carlo / Grassmann sample count")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", type=str, default="", help="output directory")
    parser.add_argument("--tol", type=float, default=1.0,
                        help="scale factor applied to quadrature tolerances")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="starbody",
        description="numerical toolkit for star and convex bodies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_body = sub.add_parser("body", help="summarise a body spec")
    p_body.add_argument("--spec", required=True)
    _add_common(p_body)

    p_mom = sub.add_parser("moments", help="radial/support/norm moment table")
    p_mom.add_argument("--spec", required=True)
    p_mom.add_argument("--p", type=str, default="-2,-1,1,2",
                       help="comma-separated exponents")
    _add_common(p_mom)

    p_sec = sub.add_parser("section", help="section volumes over a Grassmann sample")
    p_sec.add_argument("--spec", required=True)
    p_sec.add_argument("--k", type=int, required=True)
    _add_common(p_sec)

    p_ik = sub.add_parser("ikbody", help="solve for a k-intersection body candidate")
    p_ik.add_argument("--spec", required=True)
    p_ik.add_argument("--k", type=int, required=True)
    _add_common(p_ik)

    p_bp = sub.add_parser("bp-approx", help="ellipsoid-sum approximant and ovr curve")
    p_bp.add_argument("--spec", required=True)
    p_bp.add_argument("--k", type=str, default="", help="comma list; default all 1..n-1")
    _add_common(p_bp)

    p_dist = sub.add_parser("distance", help="distances between two body specs")
    p_dist.add_argument("--spec", required=True)
    p_dist.add_argument("--other", required=True)
    _add_common(p_dist)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", choices=sorted(SUITES), default="identities")
    p_ver.add_argument("--probes", type=int, default=200_000,
                       help="probe cloud size for covering searches")
    _add_common(p_ver)

    p_rep = sub.add_parser("report", help="merge reports from a run directory")
    p_rep.add_argument("--runs", required=True, help="directory containing report.json files")
    p_rep.add_argument("--out", type=str, default="", help="output directory")
    return parser


def _load_spec(path):
    try:
        return bd.load_body_spec(path)
    except FileNotFoundError:
        print(f"error: spec file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    except bd.SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _outdir(args, default):
    out = Path(args.out or default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_body(args) -> int:
    star, convex = _load_spec(args.spec)
    n = star.dim
    grid = qd.build_sphere_grid(n, max(args.grid, 50 * n), seed=args.seed)
    bd.validate_star_body(star, grid)
    vol = qd.volume(star, grid)
    moments = {f"m_{p:g}": qd.m_p(star, p, grid) for p in (-n, -2, -1, 1, 2)}
    iso = isotropic_position(star, grid, samples=args.samples, seed=args.seed)
    summary = {
        "label": star.label,
        "dim": n,
        "volume": vol,
        "radial_moments": moments,
        "isotropic_constant": iso.constant,
        "isotropic_stderr": iso.stderr,
        "transform": iso.transform.matrix.tolist(),
        "seed": args.seed,
    }
    text = json.dumps(summary, sort_keys=True, indent=1)
    print(text)
    if args.out:
        (_outdir(args, args.out) / "body.json").write_text(text)
    return 0


def cmd_moments(args) -> int:
    star, convex = _load_spec(args.spec)
    n = star.dim
    try:
        exponents = [float(tok) for tok in args.p.split(",") if tok.strip()]
    except ValueError:
        print(f"error: cannot parse --p list {args.p!r}", file=sys.stderr)
        return 2
    grid = qd.build_sphere_grid(n, max(args.grid, 50 * n), seed=args.seed)
    vol = qd.volume(star, grid)
    unit = qd.scale_to_volume(star, grid)
    table = []
    for p in exponents:
        entry = {"p": p, "m_p": qd.m_p(star, p, grid)}
        if convex is not None:
            entry["w_p"] = qd.w_p(convex, p, grid, check_convexity=False)
        if p > -n:
            entry["e_p_volume1"] = qd.e_p(unit, p, grid)
        table.append(entry)
    text = json.dumps({"volume": vol, "moments": table, "seed": args.seed},
                      sort_keys=True, indent=1)
    print(text)
    if args.out:
        (_outdir(args, args.out) / "moments.json").write_text(text)
    return 0


def cmd_section(args) -> int:
    star, _ = _load_spec(args.spec)
    n = star.dim
    if not 1 <= args.k <= n - 1:
        print(f"error: need 1 <= k <= {n - 1}, got {args.k}", file=sys.stderr)
        return 2
    count = min(args.samples, 5000)
    sample = qd.sample_grassmannian(n, args.k, count, seed=args.seed)
    fn = section_function(star, sample, seed=args.seed)
    print(json.dumps({
        "k": args.k,
        "count": count,
        "min": float(fn.values.min()),
        "mean": float(fn.values.mean()),
        "max": float(fn.values.max()),
        "seed": args.seed,
    }, sort_keys=True, indent=1))
    if args.out:
        fn.write(_outdir(args, args.out) / "sections.txt")
    return 0


def cmd_ikbody(args) -> int:
    star, _ = _load_spec(args.spec)
    n = star.dim
    if not 1 <= args.k <= n - 1:
        print(f"error: need 1 <= k <= {n - 1}, got {args.k}", file=sys.stderr)
        return 2
    resolution = max(min(args.grid, 1600), 50 * n)
    grid = qd.build_sphere_grid(n, resolution, seed=args.seed)
    count = max(20 * len(grid) // n, 200)
    sample = qd.sample_grassmannian(n, args.k, count, seed=args.seed)
    result = ik_solve(star, args.k, grid, sample, seed=args.seed)
    info = {
        "k": args.k,
        "residual": result.residual,
        "negativity": result.negativity,
        "regularization": result.regularization,
        "halvings": result.halvings,
        "condition": result.condition,
        "exists_numerically": result.exists_numerically,
        "diagnostics": result.diagnostics,
        "seed": args.seed,
    }
    print(json.dumps(info, sort_keys=True, indent=1))
    if args.out:
        out = _outdir(args, args.out)
        (out / "ikbody.json").write_text(json.dumps(info, sort_keys=True, indent=1))
        values = result.body.radial(grid.half)
        with open(out / "ikbody_radial.txt", "w") as fh:
            for node, val in zip(grid.half, values):
                coords = " ".join(repr(float(c)) for c in node)
                fh.write(f"{coords} {val!r}\n")
    return 0 if result.exists_numerically else 1


def cmd_bp_approx(args) -> int:
    star, convex = _load_spec(args.spec)
    n = star.dim
    if convex is None:
        print("error: bp-approx needs a convex body spec", file=sys.stderr)
        return 2
    if args.k:
        try:
            ks = [int(tok) for tok in args.k.split(",") if tok.strip()]
        except ValueError:
            print(f"error: cannot parse --k list {args.k!r}", file=sys.stderr)
            return 2
    else:
        ks = list(range(1, n))
    grid = qd.build_sphere_grid(n, max(args.grid, 50 * n), seed=args.seed)
    curve = bp_curve(star, ks, grid, probes=args.samples, seed=args.seed,
                     samples=args.samples)
    out = _outdir(args, args.out or "bp_out")
    lines = ["k,ovr,bound,t,N,analytic_t,contained"]
    points = []
    for item in curve:
        lines.append(
            f"{item.k},{item.ovr!r},{item.bound!r},{item.cover_radius!r},"
            f"{item.cover_count},{item.analytic_radius!r},{item.contained}"
        )
        points.append({"k": item.k, "ovr": item.ovr, "bound": item.bound,
                       "label": star.label})
        item.write(out / f"approximant_k{item.k}.txt")
    (out / "ovr.csv").write_text("\n".join(lines) + "\n")
    ovr_curve_svg(points, out / "ovr_curve.svg")
    print("\n".join(lines))
    return 0


def cmd_distance(args) -> int:
    star1, _ = _load_spec(args.spec)
    star2, _ = _load_spec(args.other)
    if star1.dim != star2.dim:
        print(f"error: dimension mismatch {star1.dim} != {star2.dim}", file=sys.stderr)
        return 2
    n = star1.dim
    grid = qd.build_sphere_grid(n, max(args.grid, 50 * n), seed=args.seed)
    rep = d_bm_upper(star1, star2, grid, seed=args.seed)
    result = {
        "radial": d_radial(star1, star2, grid),
        "geometric": d_geometric(star1, star2, grid),
        "banach_mazur_upper": rep.value,
        "witness": rep.witness.tolist(),
        "diagnostics": rep.diagnostics,
        "seed": args.seed,
    }
    text = json.dumps(result, sort_keys=True, indent=1)
    print(text)
    if args.out:
        (_outdir(args, args.out) / "distance.json").write_text(text)
    return 0


def cmd_verify(args) -> int:
    config = RunConfig(
        seed=args.seed,
        grid_resolution=args.grid,
        grassmann_count=min(args.samples, 2000),
        mc_count=args.samples,
        probe_count=args.probes,
        tolerance_scale=args.tol,
        out_dir=args.out or "runs/verify",
    )
    report = run_suite(args.suite, config)
    out = _outdir(args, config.out_dir)
    report.write(out)
    row_dicts = [r.to_dict() for r in report.rows]
    plots_from_rows(row_dicts, out)
    for line in report.summary_lines():
        print(line)
    failed = report.failed()
    if failed:
        print(f"FAILED rows ({len(failed)}):", file=sys.stderr)
        for row in failed:
            print(f"  {row.check_id}: value={row.value} target={row.target}",
                  file=sys.stderr)
        return 1
    return 0


def cmd_report(args) -> int:
    run_dir = Path(args.runs)
    reports = sorted(run_dir.glob("**/report.json"))
    if not reports:
        print(f"error: no report.json found under {run_dir}", file=sys.stderr)
        return 2
    merged = []
    for path in reports:
        tag = str(path.parent.relative_to(run_dir)) or "."
        for row in load_rows(path):
            row = dict(row)
            row["run"] = tag
            merged.append(row)
    out = _outdir(args, args.out or str(run_dir / "merged"))
    (out / "merged.json").write_text(json.dumps(merged, sort_keys=True, indent=1))
    header = ["run"] + CSV_FIELDS
    lines = [",".join(header)]
    for row in merged:
        cells = [str(row.get("run", ""))]
        for fieldname in CSV_FIELDS:
            value = row.get(fieldname)
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True).replace(",", ";")
            cells.append("" if value is None else str(value))
        lines.append(",".join(cells))
    (out / "merged.csv").write_text("\n".join(lines) + "\n")
    plots_from_rows(merged, out)
    print(f"merged {len(reports)} report(s), {len(merged)} rows -> {out}")
    return 0


COMMANDS = {
    "body": cmd_body,
    "moments": cmd_moments,
    "section": cmd_section,
    "ikbody": cmd_ikbody,
    "bp-approx": cmd_bp_approx,
    "distance": cmd_distance,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
