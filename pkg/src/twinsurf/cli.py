"""Command-line interface.

Exit codes: 0 success, 1 flag/validation error, 2 computation error (the
error code name is printed to stderr), 3 a verify-all check failed.

All numeric JSON output uses 17 significant digits.  ``--threads`` caps
worker threads; every code path here is single-threaded numpy, so results
are identical for any value — the flag exists so reproducibility audits
can sweep it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import catalog, conformal, gauss, reports, slag, solver, systems, twin
from .errors import TwinsurfError, ValidationError
from .fields import GridDomain, HeightMap, ScalarField, jacobian_data
from .gfield import read_gfield, read_heightmap, write_gfield, write_heightmap


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ValidationError(f"--param must be k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = float(v)
    return out


def _parse_domain(text, grid):
    try:
        x0, y0, x1, y1 = (float(t) for t in text.replace("−", "-").split(","))
    except ValueError as exc:
        raise ValidationError(f"--domain must be x0,y0,x1,y1, got {text!r}") from exc
    nx, ny = grid
    return GridDomain.from_bounds(x0, y0, x1, y1, nx, ny)


def _parse_grid(text):
    try:
        nx, ny = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"--grid must be nx,ny, got {text!r}") from exc
    return nx, ny


def _parse_basepoint(text):
    try:
        ix, iy = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"--basepoint must be ix,iy, got {text!r}") from exc
    return ix, iy


def _emit(report, out_path):
    text = reports.dumps(report)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scalar_in(path) -> ScalarField:
    domain, comps = read_gfield(path)
    if len(comps) != 1:
        raise ValidationError(f"{path}: expected a single-component field")
    return ScalarField(domain, comps[0])


def _cmd_catalog(args):
    if args.action == "list":
        for name in catalog.SURFACES:
            print(name)
        return 0
    params = _parse_params(args.param)
    grid = _parse_grid(args.grid)
    if args.domain:
        dom = _parse_domain(args.domain, grid)
    else:
        dom = catalog.default_domain(args.name, params, *grid)
    f = catalog.make_surface(args.name, params, dom)
    write_heightmap(args.out, f)
    return 0


def _cmd_residual(args):
    f = read_heightmap(args.inp)
    fn = {
        "minimal": systems.minimal_residual,
        "maximal": systems.maximal_residual,
        "divergence": systems.divergence_residual,
        "closedness": systems.closedness_identities,
    }[args.system]
    _emit(fn(f).to_report(), args.out)
    return 0


def _cmd_twin(args):
    bp = _parse_basepoint(args.basepoint)
    if args.action == "forward":
        pair = twin.twin_forward(read_heightmap(args.inp), bp, tol=args.tol)
        if args.out:
            write_heightmap(args.out, pair.g)
    elif args.action == "backward":
        pair = twin.twin_backward(read_heightmap(args.inp), bp, tol=args.tol)
        if args.out:
            write_heightmap(args.out, pair.f)
    else:  # verify: recompute diagnostics from two saved sides
        f = read_heightmap(args.inp)
        g = read_heightmap(args.twin)
        from .fields import first_fundamental_form

        pair = twin.TwinPair(
            f,
            g,
            first_fundamental_form(f, "euclidean"),
            first_fundamental_form(g, "split"),
            jacobian_data(f),
            jacobian_data(g),
            None,
            bp,
            args.tol or twin.default_tol(f.domain),
        )
        diag = twin.verify_twin(pair)
        _emit(diag.to_report(), args.report)
        return 0
    _emit(pair.diagnostics.to_report(), args.report)
    return 0


def _cmd_sl(args):
    if args.action == "lift":
        bp = _parse_basepoint(args.basepoint)
        lift = slag.sl_lift(read_heightmap(args.inp), bp, tol=args.tol)
        if args.out:
            write_gfield(
                args.out,
                lift.h.domain,
                [lift.h.values, lift.M.values, lift.N.values],
            )
        _emit(lift.to_report(), args.report)
        return 0
    if args.action == "rotate":
        params = slag.SLParams(args.lambda1, args.lambda2, args.epsilon)
        h = slag.graph_rotate(_scalar_in(args.inp), params, args.mode)
        write_gfield(args.out, h.domain, [h.values])
        return 0
    if args.action == "residual":
        h = _scalar_in(args.inp)
        if args.signature == "euclidean":
            rep = slag.sl_residual(h, args.theta)
        else:
            rep = slag.split_sl_residual(h, args.theta)
        _emit(rep.to_report(), args.out)
        return 0
    # detect-angle
    theta, const = slag.detect_angle(_scalar_in(args.inp), args.mode)
    _emit({"theta": theta, "constancy_residual": const, "mode": args.mode}, args.out)
    return 0


def _cmd_gauss(args):
    if args.action == "jorgens":
        g = gauss.jorgens_gauss(_scalar_in(args.inp))
    else:
        g = gauss.gauss_map(read_heightmap(args.inp))
    if args.action == "quadric":
        _emit({"quadric_residual": gauss.quadric_residual(g)}, args.out)
    elif args.action == "fit":
        i, j = (int(t) for t in args.pair.split(","))
        fit = gauss.hyperplane_fit(g, i, j)
        _emit(
            {
                "i": fit.i,
                "j": fit.j,
                "lambda": fit.lam,
                "residual": fit.residual,
                "is_nonreal": fit.is_nonreal,
            },
            args.out,
        )
    elif args.action == "planarity":
        _emit({"planarity_score": gauss.planarity_score(g)}, args.out)
    else:  # map / jorgens: dump the normalized field
        _emit(
            {
                "grid": {"nx": g.domain.nx, "ny": g.domain.ny},
                "components": [c for c in g.components],
            },
            args.out,
        )
    return 0


def _cmd_chart(args):
    f = read_heightmap(args.inp)
    bp = _parse_basepoint(args.basepoint)
    chart = conformal.build_chart(f, bp, tol=args.tol)
    if args.action == "build":
        _emit(
            {
                "J_psi_min": float(chart.J_psi.values.min()),
                "J_psi_max": float(chart.J_psi.values.max()),
                "basepoint": list(bp),
            },
            args.out,
        )
        return 0
    if args.action == "resample":
        X = conformal.resample_to_chart(chart, f)
        write_heightmap(args.out, X)
        return 0
    if args.action == "nullcurve":
        X = conformal.resample_to_chart(chart, f)
        nc = conformal.null_curve(X, args.signature)
        _emit(
            {
                "holomorphy_residual": nc.holomorphy_residual,
                "nullity_residual": nc.nullity_residual,
                "signature": nc.signature,
            },
            args.out,
        )
        return 0
    # weierstrass: build the twin pair and compare the null curves
    pair = twin.twin_forward(f, bp, tol=args.tol)
    _emit(conformal.verify_weierstrass_twin(pair, chart), args.out)
    return 0


def _cmd_solve(args):
    domain, comps = read_gfield(args.boundary)
    opts = solver.SolveOptions()
    if args.max_outer:
        opts.max_outer = args.max_outer
    fn = solver.solve_minimal if args.system == "minimal" else solver.solve_maximal
    result = fn(domain, comps, opts)
    if args.out:
        write_heightmap(args.out, result.surface)
    _emit(
        {
            "outer_iterations": result.outer_iterations,
            "residual": result.residual_report.to_report(),
            "update_history": result.update_history,
        },
        args.report,
    )
    return 0


def _verify_checks(name, params, dom, tol):
    f = catalog.make_surface(name, params, dom)
    checks = []

    def add(check_name, value, check_tol):
        checks.append(
            {
                "name": check_name,
                "value": float(value),
                "tol": float(check_tol),
                "pass": bool(value <= check_tol),
            }
        )

    add("quadric_residual", gauss.quadric_residual(gauss.gauss_map(f)), 1e-10)
    res = systems.minimal_residual(f)
    minimal = res.max_abs("scaled") <= tol
    add("minimal_residual", res.max_abs("scaled"), tol)
    if not minimal:
        return f, checks
    add(
        "closedness_identities",
        systems.closedness_identities(f).max_abs("scaled"),
        tol,
    )
    add("divergence_residual", systems.divergence_residual(f).max_abs("scaled"), tol)
    jac = jacobian_data(f)
    if not jac.has_positive_area_angle:
        return f, checks  # twin/lift constructions need ||J|| < 1
    pair = twin.twin_forward(f, tol=tol)
    d = pair.diagnostics
    add("twin_c1", d.c1_residual, tol)
    add("twin_c2", d.c2_residual, tol)
    add("twin_c3", d.c3_residual, tol)
    add("twin_c4", d.c4_residual, tol)
    add("twin_involution", d.involution_residual, tol)
    add("twin_maximal_residual", systems.maximal_residual(pair.g).max_abs("scaled"), tol)
    lift = slag.sl_lift(f, tol=tol)
    add("lift_gradient_symmetry", lift.gradient_symmetry_residual, tol)
    add("lift_hessian_det", lift.hessian_det_residual, tol)
    add("lift_area_preservation", lift.area_preservation_residual, tol)
    chart = conformal.build_chart(f, tol=tol)
    add("chart_jacobian_above_2", 2.0 - float(chart.J_psi.values.min()), 0.0)
    return f, checks


def _cmd_verify_all(args):
    params = _parse_params(args.param)
    grid = _parse_grid(args.grid)
    if args.domain:
        dom = _parse_domain(args.domain, grid)
    else:
        dom = catalog.default_domain(args.name, params, *grid)
    tol = args.tol if args.tol is not None else twin.default_tol(dom)
    f, checks = _verify_checks(args.name, params, dom, tol)
    report = {
        "surface": args.name,
        "grid": {"nx": dom.nx, "ny": dom.ny, "dx": dom.dx, "dy": dom.dy},
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    _emit(report, args.out)
    return 0 if report["pass"] else 3


def _add_common(p, tol=True, basepoint=False):
    p.add_argument("--threads", type=int, default=1, help="worker thread cap")
    if tol:
        p.add_argument("--tol", type=float, default=None)
    if basepoint:
        p.add_argument("--basepoint", default="0,0")


def build_parser():
    ap = argparse.ArgumentParser(prog="twinsurf")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list surfaces / sample one to GFIELD")
    p.add_argument("action", choices=["list", "sample"])
    p.add_argument("--name")
    p.add_argument("--param", action="append")
    p.add_argument("--domain")
    p.add_argument("--grid", default="129,129")
    p.add_argument("--out")
    _add_common(p, tol=False)
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("residual", help="evaluate a system residual")
    p.add_argument(
        "--system",
        required=True,
        choices=["minimal", "maximal", "divergence", "closedness"],
    )
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    _add_common(p, tol=False)
    p.set_defaults(fn=_cmd_residual)

    p = sub.add_parser("twin", help="twin correspondence")
    p.add_argument("action", choices=["forward", "backward", "verify"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--twin", help="second side for 'verify'")
    p.add_argument("--out")
    p.add_argument("--report")
    _add_common(p, basepoint=True)
    p.set_defaults(fn=_cmd_twin)

    p = sub.add_parser("sl", help="special Lagrangian operations")
    p.add_argument("action", choices=["lift", "rotate", "residual", "detect-angle"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--epsilon", type=int, default=1)
    p.add_argument("--mode", choices=["standard", "reverse", "euclidean", "split"],
                   default="standard")
    p.add_argument("--theta", type=float, default=np.pi / 2)
    p.add_argument("--signature", choices=["euclidean", "split"], default="euclidean")
    _add_common(p, basepoint=True)
    p.set_defaults(fn=_cmd_sl)

    p = sub.add_parser("gauss", help="generalized Gauss map")
    p.add_argument("action", choices=["map", "quadric", "fit", "planarity", "jorgens"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--pair", default="2,3", help="1-based i,j for 'fit'")
    p.add_argument("--out")
    _add_common(p, tol=False)
    p.set_defaults(fn=_cmd_gauss)

    p = sub.add_parser("chart", help="conformal chart operations")
    p.add_argument("action", choices=["build", "resample", "nullcurve", "weierstrass"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out")
    p.add_argument("--signature", choices=["euclidean", "split"], default="euclidean")
    _add_common(p, basepoint=True)
    p.set_defaults(fn=_cmd_chart)

    p = sub.add_parser("solve", help="Dirichlet solvers")
    p.add_argument("system", choices=["minimal", "maximal"])
    p.add_argument("--boundary", required=True, help="GFIELD; interior ignored")
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--max-outer", type=int, default=None)
    _add_common(p, tol=False)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify-all", help="full invariant suite on a catalog surface")
    p.add_argument("--name", required=True)
    p.add_argument("--param", action="append")
    p.add_argument("--domain")
    p.add_argument("--grid", default="129,129")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(fn=_cmd_verify_all)

    return ap


def run(argv=None) -> int:
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
    ):
        os.environ.setdefault(var, "1")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    if getattr(args, "threads", 1) < 1:
        print("VALIDATION: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except TwinsurfError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"VALIDATION: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
