"""Command line: synthesize, verify, suite, render.

Exit codes: 0 success (cage found and confirmed, or verify says caged),
1 malformed input, 2 infeasible, 3 oracle refutes the cage, 4 timeout,
5 solver error.
"""

from __future__ import annotations

import argparse
import logging
import math
import statistics
import sys
from pathlib import Path

from .cage import CageOptions, CageProblem, synthesize
from .cspace import make_slice_plan
from .geometry import Pose
from .io import (FileFormatError, binary_assignment, load_certificate, load_problem, save_certificate)
from .milp import ADAPTERS
from .render import render_svg
from .scenarios import random_polygon_suite
from .verifier import cross_validate, verify_cage

EXIT_OK, EXIT_MALFORMED, EXIT_INFEASIBLE, EXIT_REFUTED, EXIT_TIMEOUT, EXIT_ERROR = range(6)
STATUS_EXIT = {"infeasible": EXIT_INFEASIBLE, "timeout": EXIT_TIMEOUT, "error": EXIT_ERROR}


def _oracle_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--resolution", type=float, default=None,
                   help="grid spacing in object units (default: diameter/100)")
    p.add_argument("--theta-step", type=float, default=1.0, help="orientation step in degrees")


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=sorted(ADAPTERS), default="cbc")
    p.add_argument("--timeout", type=float, default=300.0, help="solver time budget in seconds")
    p.add_argument("--strategy", choices=("sweep", "monolithic"), default="sweep")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cagemip", description="Cage synthesis for planar polygons")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synthesize", help="solve a problem file, verify and write the certificate")
    s.add_argument("problem", type=Path)
    s.add_argument("--out", type=Path, default=None, help="output directory (default: next to the problem)")
    s.add_argument("--no-verify", action="store_true")
    _solver_args(s)
    _oracle_args(s)

    v = sub.add_parser("verify", help="run the flood-fill oracle on a certificate")
    v.add_argument("certificate", type=Path)
    _oracle_args(v)

    u = sub.add_parser("suite", help="random-polygon campaign")
    u.add_argument("--seed", type=int, default=7)
    u.add_argument("--count", type=int, default=10)
    u.add_argument("--vertices", type=int, nargs=2, default=(5, 10), metavar=("MIN", "MAX"))
    u.add_argument("--fingers", type=int, default=4)
    u.add_argument("--slices", type=int, default=9)
    u.add_argument("--no-verify", action="store_true")
    _solver_args(u)
    _oracle_args(u)

    r = sub.add_parser("render", help="write the SVG figure of a certificate")
    r.add_argument("certificate", type=Path)
    r.add_argument("--out", type=Path, default=None)
    r.add_argument("--slice", type=int, default=None, help="slice index for the C-slice panel")
    return ap


def _cmd_synthesize(args) -> int:
    try:
        problem = load_problem(args.problem)
    except (FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    res = synthesize(problem, args.solver, args.timeout, args.strategy)
    print(f"status: {res.status}  solve time: {res.solve_time:.2f}s  attempts: {len(res.attempts)}")
    if res.certificate is None:
        for d in res.solution.diagnostics[:5]:
            print("  " + d)
        return STATUS_EXIT.get(res.status, EXIT_ERROR)
    out = args.out or args.problem.parent
    out.mkdir(parents=True, exist_ok=True)
    stem = args.problem.stem
    cert_path = out / f"{stem}.certificate.json"
    save_certificate(res.certificate, problem.obj, cert_path, binary_assignment(res.model, res.solution))
    render_svg(res.certificate, problem.obj, out / f"{stem}.svg")
    lo, hi = res.certificate.theta_interval
    print(f"caged slices: {math.degrees(lo):.1f} .. {math.degrees(hi):.1f} deg  certificate: {cert_path}")
    if args.no_verify:
        return EXIT_OK
    rep = cross_validate(res.certificate, problem.obj, args.resolution, math.radians(args.theta_step))
    print(f"oracle: {rep.verdict} ({rep.elapsed:.1f}s)")
    return EXIT_OK if rep.caged else EXIT_REFUTED


def _cmd_verify(args) -> int:
    try:
        cert, obj, _ = load_certificate(args.certificate)
    except (FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    rep = verify_cage(obj, cert.q, cert.fingers, args.resolution, math.radians(args.theta_step))
    ext = "full turn" if rep.theta_extent is None else \
        f"{math.degrees(rep.theta_extent[0]):.1f} .. {math.degrees(rep.theta_extent[1]):.1f} deg"
    print(f"{rep.verdict}  component: {rep.component_size} cells, orientation extent {ext}")
    return EXIT_OK if rep.caged else EXIT_REFUTED


def _cmd_suite(args) -> int:
    objs = random_polygon_suite(args.seed, args.count, tuple(args.vertices))
    q = Pose(0.0, 0.0, 0.0)
    times = []
    feasible = refuted = 0
    print(f"{'#':>3} {'verts':>5} {'pieces':>6} {'gamma':>6} {'status':>10} {'time[s]':>8} {'oracle':>8}")
    for k, obj in enumerate(objs):
        problem = CageProblem(obj, q, args.fingers, make_slice_plan(q, args.slices), options=CageOptions())
        res = synthesize(problem, args.solver, args.timeout, args.strategy)
        times.append(res.solve_time)
        feasible += res.status == "feasible"
        gamma = obj.n_pieces * obj.n_facets * max(res.variables.n_regions.values(), default=1)
        verdict = "-"
        if res.certificate is not None and not args.no_verify:
            rep = cross_validate(res.certificate, obj, args.resolution, math.radians(args.theta_step))
            verdict = rep.verdict
            refuted += not rep.caged
        print(f"{k:>3} {len(obj.outline):>5} {obj.n_pieces:>6} {gamma:>6} {res.status:>10} "
              f"{res.solve_time:>8.2f} {verdict:>8}", flush=True)
    print(f"feasible: {feasible}/{len(objs)}  refuted: {refuted}  median solve time: {statistics.median(times):.2f}s")
    return EXIT_REFUTED if refuted else EXIT_OK


def _cmd_render(args) -> int:
    try:
        cert, obj, _ = load_certificate(args.certificate)
    except (FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    out = args.out or args.certificate.with_suffix(".svg")
    try:
        render_svg(cert, obj, out, args.slice)
    except (OSError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    print(out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    handler = {"synthesize": _cmd_synthesize, "verify": _cmd_verify, "suite": _cmd_suite,
               "render": _cmd_render}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
