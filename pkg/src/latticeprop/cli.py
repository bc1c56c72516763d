"""Command-line interface.

Every subcommand supports ``--json`` (machine output with a stable
``schema_version`` field) and deterministic seeding: the LATTICEPROP_SEED
environment variable overrides ``--seed``, which defaults to 0.  Exit codes:
0 success, 1 computation error (diagnostic on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

SCHEMA_VERSION = "1"


def _seed(args) -> int:
    env = os.environ.get("LATTICEPROP_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _emit(args, payload: dict, text_lines):
    if args.json:
        payload["schema_version"] = SCHEMA_VERSION
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _parse_point(s: str):
    parts = [p.strip() for p in s.split(",")]
    return [int(p) for p in parts[:-1]], int(parts[-1])


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_tuples(args):
    from .mink import generate_axes
    axes = generate_axes(args.dim, args.bound)
    rows = []
    for a in sorted(axes.members, key=lambda a: a.sort_key()):
        rows.append(list(a.step.x) + [a.step.t, a.length, int(a.is_null)])
    header = [f"x{i+1}" for i in range(args.dim)] + ["t", "length", "null"]
    if args.csv:
        _write_csv(args.csv, header, rows)
    _emit(args,
          {"dim": args.dim, "bound": args.bound, "count": len(rows),
           "timelike": len(axes.axes), "null": len(axes.nulls)},
          [",".join(header)] + [",".join(map(str, r)) for r in rows])
    return 0


def cmd_metric_ball(args):
    from .mink import generate_axes
    axes = generate_axes(args.dim, args.bound)
    header = [f"x{i+1}" for i in range(args.dim)] + ["t", "null"]
    rows = []
    for a in sorted(axes.axes, key=lambda a: a.sort_key()):
        pt = [args.radius * c / a.length for c in a.step.coords()]
        rows.append([f"{v!r}" for v in pt] + ["0"])
    for a in sorted(axes.nulls, key=lambda a: a.sort_key()):
        rows.append([f"{float(c)!r}" for c in a.step.coords()] + ["1"])
    if args.csv:
        _write_csv(args.csv, header, rows)
    _emit(args, {"dim": args.dim, "bound": args.bound, "radius": args.radius,
                 "vertices": len(rows)},
          [",".join(header)] + [",".join(map(str, r)) for r in rows])
    return 0


def cmd_count_paths(args):
    from .mink import LatticeVec, generate_axes
    from .pathspace import count_paths
    xs, t = _parse_point(args.target)
    axes = generate_axes(args.dim, args.bound)
    origin = LatticeVec((0,) * args.dim, 0)
    spec = count_paths(origin, LatticeVec(tuple(xs), t), axes)
    total = sum(spec.values())
    sel = spec.get(args.length, 0) if args.length is not None else total
    if args.csv:
        _write_csv(args.csv, ["I", "count"], sorted(spec.items()))
    _emit(args,
          {"target": args.target, "count": str(sel),
           "spectrum": {str(k): str(v) for k, v in sorted(spec.items())}},
          [f"paths: {sel}"] + [f"I={k}: {v}" for k, v in sorted(spec.items())])
    return 0


def cmd_contmult(args):
    from .contmult import (ContMultArgs, TruncationPolicy,
                           continuous_multinomial_with_info)
    xs = tuple(float(v) for v in args.args.split(","))
    dirs = None
    if args.letters_dirs:
        with open(args.letters_dirs, "r", encoding="utf-8") as fh:
            dirs = tuple(tuple(map(float, row)) for row in json.load(fh))
    pol = TruncationPolicy(tail_epsilon=args.tail_epsilon,
                           max_word_length=args.max_word_length)
    val, info = continuous_multinomial_with_info(ContMultArgs(xs, dirs), pol)
    lines = [f"continuous multinomial{xs} = {val!r}"]
    for k, v in sorted(info.items()):
        lines.append(f"  {k}: {v}")
    _emit(args,
          {"args": list(xs), "value": val, "diagnostics": info,
           "tail_epsilon": pol.tail_epsilon, "max_word_length": pol.max_word_length},
          lines)
    return 0


def cmd_propagator(args):
    from .mink import LatticeVec, generate_axes
    from .propagator import (PropagatorRequest, discrete_propagator,
                             length_spectrum, signed_length_spectrum)
    xs, t = _parse_point(args.target)
    axes = generate_axes(args.dim, args.bound)
    origin = LatticeVec((0,) * args.dim, 0)
    target = LatticeVec(tuple(xs), t)
    req = PropagatorRequest(d=args.dim, n=args.bound, m=args.mass,
                            source=origin, target=target, variant=args.variant)
    val = discrete_propagator(req, axes)
    if args.spectrum:
        if args.variant == "feynman":
            spec = signed_length_spectrum(origin, target, axes)
        else:
            spec = length_spectrum(origin, target, axes).as_dict()
        _write_csv(args.spectrum, ["I", "count"], sorted(spec.items()))
    if args.scan:
        rows = []
        for k in range(args.scan_steps + 1):
            m = args.scan_max * k / args.scan_steps
            kv = discrete_propagator(
                PropagatorRequest(d=args.dim, n=args.bound, m=m, source=origin,
                                  target=target, variant=args.variant), axes)
            rows.append((repr(m), repr(kv.real), repr(kv.imag)))
        _write_csv(args.scan, ["m", "re_k", "im_k"], rows)
    _emit(args,
          {"target": args.target, "mass": args.mass, "variant": args.variant,
           "re": val.real, "im": val.imag},
          [f"K = {val.real!r} + {val.imag!r} i"])
    return 0


def cmd_quotient_prop(args):
    from .manifold import QuotientLattice, quotient_propagator_flat, quotient_count_paths
    from .mink import generate_axes
    xs, t = _parse_point(args.target)
    axes = generate_axes(1, args.bound)
    q = QuotientLattice(args.circumference)
    val = quotient_propagator_flat(q, 0, xs[0], t, axes, args.mass)
    if args.spectrum:
        spec = quotient_count_paths(q, 0, xs[0], t, axes)
        _write_csv(args.spectrum, ["I", "count"], sorted(spec.items()))
    _emit(args,
          {"circumference": args.circumference, "target": args.target,
           "mass": args.mass, "re": val.real, "im": val.imag},
          [f"K_quotient = {val.real!r} + {val.imag!r} i"])
    return 0


def cmd_orbit(args):
    from .manifold import branched_cylinder_generators, orbit_enumerate
    if args.group != "cylinder3":
        print(f"unknown group {args.group}", file=sys.stderr)
        return 1
    re, im = (float(v) for v in args.base.split(","))
    orbit = orbit_enumerate(branched_cylinder_generators(), complex(re, im),
                            args.max_word, sheet_offset=args.sheet_offset)
    rows = []
    for (t, x, y), tau, word, z in zip(orbit.points, orbit.taus,
                                       orbit.words, orbit.disk_points):
        rows.append([repr(t), repr(x), repr(y), repr(tau),
                     "".join(str(g + 1) for g in word)])
    if args.csv:
        _write_csv(args.csv, ["t", "x", "y", "tau", "word"], rows)
    _emit(args,
          {"group": args.group, "max_word": args.max_word,
           "points": len(rows), "in_cone": sum(1 for tau in orbit.taus if tau >= 0)},
          [f"orbit size {len(rows)}"] +
          [f"tau={r[3]} word={r[4] or 'e'}" for r in rows])
    return 0


def cmd_kl_spectrum(args):
    from .manifold import kl_spectrum
    with open(args.taus, "r", encoding="utf-8") as fh:
        taus = [float(row[0]) for row in csv.reader(fh) if row and _is_float(row[0])]
    grid = np.arange(args.mmin, args.mmax, (args.mmax - args.mmin) / args.steps)
    sd = kl_spectrum(taus, grid, mode="1/sqrtN" if args.norm == "sqrt" else "1/N")
    rows = [(repr(float(m)), repr(float(v))) for m, v in zip(sd.grid, sd.values)]
    if args.csv:
        _write_csv(args.csv, ["m", "rho"], rows)
    _emit(args,
          {"taus": len(taus), "mmin": args.mmin, "mmax": args.mmax,
           "steps": args.steps, "norm": sd.normalization},
          [f"{m},{v}" for m, v in rows[:20]] + (["..."] if len(rows) > 20 else []))
    return 0


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def cmd_fermion(args):
    from .mink import LatticeVec, generate_axes
    from .spinor import SpinorPair, discrete_fermion_propagator, gamma_basis
    xs, t = _parse_point(args.target)
    axes = generate_axes(args.dim, args.bound)
    g = gamma_basis(args.dim)
    if args.spinors:
        with open(args.spinors, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        v = np.array([complex(c[0], c[1]) for c in data["v"]])
        w = np.array([complex(c[0], c[1]) for c in data["w"]])
    else:
        # default pair with a non-null frame normalization
        v = np.zeros(g.dim, dtype=complex)
        v[0] = 1.0
        w = np.ones(g.dim, dtype=complex) / math.sqrt(g.dim)
    origin = LatticeVec((0,) * args.dim, 0)
    pair = SpinorPair(v, w)
    target = LatticeVec(tuple(xs), t)
    val = discrete_fermion_propagator(origin, target, args.mass, pair, axes, g=g)
    n_paths = 0
    if args.rapidity_csv:
        from .spinor import fermion_path_rapidities
        etas = fermion_path_rapidities(origin, target, pair, axes, g=g)
        n_paths = len(etas)
        hist, edges = np.histogram(etas, bins=max(1, min(20, n_paths)))
        _write_csv(args.rapidity_csv, ["eta_lo", "eta_hi", "count"],
                   [(repr(float(lo)), repr(float(hi)), int(c))
                    for lo, hi, c in zip(edges[:-1], edges[1:], hist)])
    _emit(args,
          {"target": args.target, "mass": args.mass,
           "re": val.real, "im": val.imag, "paths": n_paths},
          [f"K_fermion = {val.real!r} + {val.imag!r} i"])
    return 0


def cmd_diagram(args):
    from .diagrams import (DiagramSpec, GridSpec, TheorySpec,
                           contribution_length_domain, contribution_position_space)
    with open(args.spec, "r", encoding="utf-8") as fh:
        dspec = json.load(fh)
    with open(args.theory, "r", encoding="utf-8") as fh:
        tspec = json.load(fh)
    with open(args.grid, "r", encoding="utf-8") as fh:
        gspec = json.load(fh)
    diag = DiagramSpec(externals=tuple(tuple(e) for e in dspec["externals"]),
                       vertices=tuple(v["degree"] for v in dspec["vertices"]),
                       edges=tuple(tuple(e) for e in dspec["edges"]))
    theory = TheorySpec(d=tspec.get("d", 1), m=tspec["m"],
                        couplings={int(k): v for k, v in tspec["couplings"].items()})
    gspec.setdefault("seed", _seed(args))
    gspec.setdefault("shards", args.threads)
    grid = GridSpec(**gspec)
    out = {}
    lines = []
    if args.method in ("pos", "both"):
        v, se = contribution_position_space(diag, theory, grid)
        out["position_space"] = {"re": v.real, "im": v.imag, "se": se}
        lines.append(f"position space: {v!r} (se {se!r})")
    if args.method in ("length", "both"):
        v, se = contribution_length_domain(diag, theory, grid)
        out["length_domain"] = {"re": v.real, "im": v.imag, "se": se}
        lines.append(f"length domain:  {v!r} (se {se!r})")
    if args.method == "both":
        a = complex(out["position_space"]["re"], out["position_space"]["im"])
        b = complex(out["length_domain"]["re"], out["length_domain"]["im"])
        rel = abs(a - b) / abs(a) if a else float("nan")
        out["agreement_rel_err"] = rel
        lines.append(f"agreement: rel err {rel!r}")
    _emit(args, out, lines)
    return 0


def cmd_teich_check(args):
    from .manifold import QuotientLattice, boundary_decomposition_check
    from .mink import generate_axes
    axes = generate_axes(1, args.bound)
    q = QuotientLattice(args.circumference)
    rep = boundary_decomposition_check(q, args.source, args.target, args.tmax, axes)
    lines = [f"total paths: {rep['total_paths']}"]
    for k in sorted(rep["class_counts"]):
        lines.append(f"crossings={k}: {rep['class_counts'][k]}")
    lines.append(f"all checks exact: {rep['all_exact']}")
    _emit(args, {"total_paths": rep["total_paths"],
                 "class_counts": {str(k): v for k, v in rep["class_counts"].items()},
                 "all_exact": rep["all_exact"]}, lines)
    return 0 if rep["all_exact"] else 1


def cmd_verify(args):
    from .acceptance import run_all
    results, ok = run_all(quick=args.quick)
    width = max(len(name) for name, _, _ in results)
    lines = []
    for name, passed, detail in results:
        lines.append(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  {detail}")
    lines.append("all criteria passed" if ok else "FAILURES present")
    _emit(args,
          {"results": [{"name": n, "passed": p, "detail": d} for n, p, d in results],
           "all_passed": ok},
          lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="RNG seed (LATTICEPROP_SEED overrides)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="Monte Carlo shard count (deterministic reduction order)")
    p = argparse.ArgumentParser(
        prog="latticeprop", parents=[common],
        description="Lattice path-space propagators under polygonal Minkowski metrics")
    # defaults are resolved in dispatch(): set_defaults here would mutate the
    # shared parent actions and let subparsers stomp globally-parsed values
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=lambda **kw: argparse.ArgumentParser(
                               parents=[common], **kw))

    q = sub.add_parser("tuples", help="axis table for (dim, bound)")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--csv")
    q.set_defaults(fn=cmd_tuples)

    q = sub.add_parser("metric-ball", help="unit ball vertex table")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--radius", type=float, default=1.0)
    q.add_argument("--csv")
    q.set_defaults(fn=cmd_metric_ball)

    q = sub.add_parser("count-paths", help="path counts to a target")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--target", required=True, metavar='"x,t"')
    q.add_argument("--length", type=int)
    q.add_argument("--csv")
    q.set_defaults(fn=cmd_count_paths)

    q = sub.add_parser("contmult", help="continuous multinomial value")
    q.add_argument("--args", required=True, metavar='"x1,x2,..."')
    q.add_argument("--letters-dirs", help="JSON list of direction vectors")
    q.add_argument("--tail-epsilon", type=float, default=1e-10)
    q.add_argument("--max-word-length", type=int, default=60)
    q.set_defaults(fn=cmd_contmult)

    q = sub.add_parser("propagator", help="discrete propagator")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--mass", type=float, required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--variant", choices=("standard", "feynman"), default="standard")
    q.add_argument("--spectrum", help="CSV output of (I, count)")
    q.add_argument("--scan", help="CSV output of (m, Re K, Im K) over a mass grid")
    q.add_argument("--scan-max", type=float, default=6.283185307179586)
    q.add_argument("--scan-steps", type=int, default=200)
    q.set_defaults(fn=cmd_propagator)

    q = sub.add_parser("quotient-prop", help="propagator on a pacman circle")
    q.add_argument("--bound", type=int, default=1)
    q.add_argument("--circumference", type=int, required=True)
    q.add_argument("--mass", type=float, required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--spectrum")
    q.set_defaults(fn=cmd_quotient_prop)

    q = sub.add_parser("orbit", help="deck-transformation orbit")
    q.add_argument("--group", default="cylinder3")
    q.add_argument("--max-word", type=int, required=True)
    q.add_argument("--base", default="0,0", metavar='"re,im"')
    q.add_argument("--sheet-offset", type=float, default=10.0)
    q.add_argument("--csv")
    q.set_defaults(fn=cmd_orbit)

    q = sub.add_parser("kl-spectrum", help="Kallen-Lehmann estimator")
    q.add_argument("--taus", required=True, help="CSV of proper times")
    q.add_argument("--mmin", type=float, default=0.05)
    q.add_argument("--mmax", type=float, required=True)
    q.add_argument("--steps", type=int, required=True)
    q.add_argument("--norm", choices=("n", "sqrt"), default="n")
    q.add_argument("--csv")
    q.set_defaults(fn=cmd_kl_spectrum)

    q = sub.add_parser("fermion", help="discrete fermionic propagator")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--mass", type=float, required=True)
    q.add_argument("--target", required=True)
    q.add_argument("--spinors", help='JSON {"v": [[re,im],...], "w": [[re,im],...]}')
    q.add_argument("--rapidity-csv", help="CSV histogram of total path rapidities")
    q.set_defaults(fn=cmd_fermion)

    q = sub.add_parser("diagram", help="Feynman diagram contribution")
    q.add_argument("--spec", required=True)
    q.add_argument("--theory", required=True)
    q.add_argument("--grid", required=True)
    q.add_argument("--method", choices=("pos", "length", "both"), default="both")
    q.set_defaults(fn=cmd_diagram)

    q = sub.add_parser("teich-check", help="boundary-crossing decomposition")
    q.add_argument("--circumference", type=int, default=3)
    q.add_argument("--bound", type=int, default=1)
    q.add_argument("--source", type=int, default=1)
    q.add_argument("--target", type=int, default=2)
    q.add_argument("--tmax", type=int, default=8)
    q.set_defaults(fn=cmd_teich_check)

    q = sub.add_parser("verify", help="run the acceptance suite")
    q.add_argument("--quick", action="store_true",
                   help="oracle-equality suites only, reduced grids")
    q.set_defaults(fn=cmd_verify)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    args.threads = getattr(args, "threads", os.cpu_count() or 1)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # computation error -> exit 1 with diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
