"""Command-line interface.

Exit codes: 0 success, 1 assertion/consistency failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .decompose import peel_threshold, verify_decomposition, xy_decompose
from .energy import energy, moment_via_dft
from .errors import BudgetExceeded
from .geometry import (
    Hyperplane,
    incidences,
    intersect_translates,
    paraboloid_translate_intersection,
)
from .harness import (
    CSV_COLUMNS,
    INEQUALITY_TAGS,
    ScanConfig,
    check_inequalities,
    family_instance,
    run_scan,
    write_rows,
)
from .lattice import enumerate_sphere, write_pointset


def _parse_delta(text: str) -> Fraction:
    try:
        p, q = text.split("/")
        return Fraction(int(p), int(q))
    except Exception:
        raise argparse.ArgumentTypeError(f"delta must be 'p/q', got {text!r}")


def _parse_points(text: str, d: int):
    pts = []
    for part in text.split(";"):
        part = part.strip().strip("()")
        coords = tuple(int(x) for x in part.replace(",", " ").split())
        if len(coords) != d:
            raise ValueError(f"expected {d} coordinates in {part!r}")
        pts.append(coords)
    return pts


def _family_set(args):
    fam = getattr(args, "family", None)
    if fam:
        return family_instance(fam, args.m, getattr(args, "density", 1.0),
                               getattr(args, "seed", 0))
    return enumerate_sphere(args.d, args.m)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latenergy",
                                 description="exact lattice-point energy toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=False):
        p.add_argument("--d", type=int, default=3, choices=(3, 4))
        p.add_argument("--m", type=int, required=True)
        if family:
            p.add_argument("--family", choices=(
                "sphere3", "sphere4", "paraboloid4", "random-subset", "slice-union"))
            p.add_argument("--density", type=float, default=1.0)
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("enumerate", help="enumerate a point family")
    common(p, family=True)

    p = sub.add_parser("energy", help="exact E_{s,k}")
    common(p, family=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("decompose", help="greedy slice peeling")
    common(p, family=True)
    p.add_argument("--threshold", type=int)
    p.add_argument("--delta", type=_parse_delta, default=Fraction(1, 1392))

    p = sub.add_parser("intersect", help="intersection of translates")
    common(p, family=True)
    p.add_argument("--shifts", required=True,
                   help="semicolon-separated shift vectors, e.g. '(0,0,0,0);(1,0,0,3)'")

    p = sub.add_parser("incidences", help="point/hyperplane incidence count")
    common(p, family=True)
    p.add_argument("--planes", required=True,
                   help="semicolon-separated 'a1 .. ad b' integer planes")

    p = sub.add_parser("scan", help="multi-m report rows")
    p.add_argument("--family", required=True, choices=(
        "sphere3", "sphere4", "paraboloid4", "random-subset", "slice-union"))
    p.add_argument("--m-start", type=int, required=True)
    p.add_argument("--m-stop", type=int, required=True)
    p.add_argument("--m-stride", type=int, default=1)
    p.add_argument("--s", type=int, nargs="+", default=[2])
    p.add_argument("--k", type=int, nargs="+", default=[2])
    p.add_argument("--density", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int)
    p.add_argument("--budget-pairs", type=int, default=10 ** 8)
    p.add_argument("--budget-tuples", type=int, default=10 ** 8)
    p.add_argument("--budget-grid", type=int, default=10 ** 8)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("dft-check", help="orthogonality cross-check of E_{s,2}")
    common(p, family=True)
    p.add_argument("--s", type=int, default=2)

    p = sub.add_parser("check", help="inequality ratio report")
    common(p, family=True)
    p.add_argument("--tags", nargs="+", default=list(INEQUALITY_TAGS))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 1
    except (AssertionError, ArithmeticError) as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "enumerate":
        A = _family_set(args)
        if args.out:
            with open(args.out, "w") as fh:
                write_pointset(A, fh)
        else:
            write_pointset(A, sys.stdout)
        return 0

    if cmd == "energy":
        A = _family_set(args)
        print(energy(A, args.s, args.k).value)
        return 0

    if cmd == "decompose":
        A = _family_set(args)
        thr = args.threshold if args.threshold is not None else peel_threshold(
            len(A), args.delta)
        D = xy_decompose(A, thr, args.delta)
        verdict = verify_decomposition(A, D)
        dump = {
            "threshold": D.threshold,
            "delta": str(args.delta),
            "X_size": len(D.X),
            "peels": [[list(n), len(C)] for n, C in D.peels],
            "verified": verdict.ok,
        }
        text = json.dumps(dump, indent=1)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return 0 if verdict.ok else 1

    if cmd == "intersect":
        if getattr(args, "family", None) == "paraboloid4":
            # structural path: works even where the full (2m+1)^3
            # enumeration would not fit in memory
            shifts = _parse_points(args.shifts, 4)
            inter = paraboloid_translate_intersection(args.m, shifts)
        else:
            A = _family_set(args)
            shifts = _parse_points(args.shifts, A.d)
            inter = intersect_translates(A, shifts)
        print(len(inter))
        return 0

    if cmd == "incidences":
        A = _family_set(args)
        planes = []
        for part in args.planes.split(";"):
            vals = [int(x) for x in part.replace(",", " ").split()]
            planes.append(Hyperplane(tuple(vals[:-1]), vals[-1]))
        rep = incidences(A, planes)
        print(rep.total)
        return 0

    if cmd == "scan":
        cfg = ScanConfig(
            family=args.family,
            m_values=tuple(range(args.m_start, args.m_stop + 1, args.m_stride)),
            s_values=tuple(args.s),
            k_values=tuple(args.k),
            density=args.density,
            seed=args.seed,
            threshold=args.threshold,
            pair_budget=args.budget_pairs,
            tuple_budget=args.budget_tuples,
            grid_budget=args.budget_grid,
            out=args.out,
            fmt=args.format,
        )
        rows = run_scan(cfg)
        if not args.out:
            print(",".join(CSV_COLUMNS))
            for row in rows:
                rec = row.as_record()
                print(",".join("" if rec[c] is None else str(rec[c])
                               for c in CSV_COLUMNS))
        return 0

    if cmd == "dft-check":
        A = _family_set(args)
        via_dft = moment_via_dft(A, args.s)
        via_conv = energy(A, args.s, 2)
        ok = via_dft.value == via_conv.value
        print(f"dft={via_dft.value} convolution={via_conv.value} "
              f"{'agree' if ok else 'DISAGREE'}")
        return 0 if ok else 1

    if cmd == "check":
        A = _family_set(args)
        report = check_inequalities(A, tuple(args.tags))
        print(json.dumps(report, indent=1, default=str))
        return 0

    raise ValueError(f"unknown command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
