"""Command-line interface: draw, verify, pack, witness and report.

Exit codes: 0 success, 1 malformed input, 2 class mismatch or a failed
check, 3 precision or convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import random
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import generators as gen
from . import io
from .errors import ClassificationError, ConvergenceError, MonodrawError, PrecisionError, UsageError, ValidationError
from .geometry import EPS_ANGLE
from .graph import Graph, classify, planar_embedding
from .outerplanar import draw_outerplanar
from .packing import DEFAULT_TOL, compute_packing, drawing_from_packing, witness_from_packing
from .tree import draw_tree
from .twotree import draw_two_tree
from .verify import (Drawing, bounded_faces_strictly_convex, crossing_free, is_strongly_monotone_path, monotone,
                     path_slack, strongly_monotone, tree_convexity)

log = logging.getLogger("monodraw")

EXIT_OK, EXIT_INPUT, EXIT_CLASS, EXIT_PRECISION = 0, 1, 2, 3

# classify() tag for each drawing class
CLASS_TAGS = {"tree": "tree", "outerplanar": "outerplanar", "two-tree": "twoTree", "planar3": "planar3Connected"}
AUTO_ORDER = ("tree", "outerplanar", "two-tree", "planar3")


def tolerance(cli_value: Optional[float]) -> Optional[float]:
    """--tol wins over MONODRAW_TOL; None means the module defaults."""
    if cli_value is not None:
        return cli_value
    env = os.environ.get("MONODRAW_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise ValidationError(f"MONODRAW_TOL is not a number: {env!r}") from exc
    return None


def pick_class(g: Graph, requested: str) -> str:
    tags = classify(g)
    if requested == "auto":
        for cls in AUTO_ORDER:
            if CLASS_TAGS[cls] in tags:
                return cls
        raise ClassificationError("graph is in none of the supported classes")
    if CLASS_TAGS[requested] not in tags:
        raise ClassificationError(f"graph is not a {requested} (classes: {', '.join(sorted(tags)) or 'none'})")
    return requested


def construct(g: Graph, cls: str, tol: Optional[float] = None):
    """Drawing of g with the class's drawer; planar3 also returns its packing."""
    eps = EPS_ANGLE if tol is None else tol
    if cls == "tree":
        return draw_tree(g, eps=eps), None
    if cls == "outerplanar":
        return draw_outerplanar(g, eps=eps), None
    if cls == "two-tree":
        return draw_two_tree(g, eps=eps), None
    p = compute_packing(planar_embedding(g), DEFAULT_TOL if tol is None else tol)
    return drawing_from_packing(p), p


def post_checks(d: Drawing, cls: str) -> Dict[str, bool]:
    checks = {"strongly_monotone": strongly_monotone(d).ok, "crossing_free": crossing_free(d)[0]}
    if cls == "tree":
        checks["convex"] = tree_convexity(d) in ("convex", "strictlyConvex")
    elif cls in ("outerplanar", "planar3") and checks["crossing_free"] and d.graph.n >= 3:
        checks["convex"] = bounded_faces_strictly_convex(d)
    return checks


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_draw(args) -> int:
    g, _ = io.graph_from_json(io.read_json(args.inp))
    cls = pick_class(g, args.cls)
    d, packing = construct(g, cls, tolerance(args.tol))
    checks = post_checks(d, cls)
    io.write_text(args.out, io.dumps(io.drawing_to_json(d)))
    if args.svg:
        io.write_text(args.svg, io.svg_render(packing if packing is not None else d))
    for k, v in checks.items():
        print(f"{k}: {'yes' if v else 'no'}")
    if not all(checks.values()):
        print("post-verification failed", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK


def cmd_verify(args) -> int:
    d = io.drawing_from_json(io.read_json(args.inp))
    eps = tolerance(args.tol)
    eps = EPS_ANGLE if eps is None else eps
    rep = strongly_monotone(d, eps)
    cf, crossing = crossing_free(d)
    verdicts = {"strongly_monotone": rep.ok, "monotone": monotone(d), "crossing_free": cf}
    detail: Dict[str, object] = {}
    if args.convex == "tree":
        level = tree_convexity(d, eps)
        detail["tree_convexity"] = level
        verdicts["convex"] = level in ("convex", "strictlyConvex")
    elif args.convex == "faces":
        verdicts["convex"] = cf and bounded_faces_strictly_convex(d, eps)
    for k, v in verdicts.items():
        print(f"{k}: {'yes' if v else 'no'}")
    for k, v in detail.items():
        print(f"{k}: {v}")
    if crossing is not None:
        print(f"first crossing: {crossing}")
    if rep.degenerate:
        print(f"degenerate pairs (within the angular margin): {rep.degenerate}")
    alpha = rep.alpha if rep.ok else 0.0
    if args.alpha:
        print(f"alpha: {alpha:.17g}")
    if args.report:
        doc = {
            "verdicts": verdicts,
            "alpha": alpha,
            "witnesses": [{"pair": list(k), "path": v} for k, v in sorted(rep.per_pair.items())],
            "degenerate": [list(p) for p in rep.degenerate],
        }
        doc.update(detail)
        io.write_text(args.report, io.dumps(doc))
    return EXIT_OK if all(verdicts.values()) else EXIT_CLASS


def cmd_pack(args) -> int:
    g, emb = io.graph_from_json(io.read_json(args.inp))
    pick_class(g, "planar3")
    tol = tolerance(args.tol)
    tol = DEFAULT_TOL if tol is None else tol
    try:
        p = compute_packing(emb if emb is not None else planar_embedding(g), tol)
    except ConvergenceError as exc:
        print(str(exc), file=sys.stderr)
        for i, r in enumerate(exc.residuals or []):
            print(f"  step {i}: residual {r:.3e}", file=sys.stderr)
        return EXIT_PRECISION
    io.write_text(args.out, io.dumps(io.packing_to_json(p)))
    if args.svg:
        io.write_text(args.svg, io.svg_render(p))
    print(f"circles: {g.n} vertex, {len(p.face_circles)} face, 1 outer")
    for k, v in p.residuals.items():
        print(f"residual {k}: {v:.3e}")
    return EXIT_OK


def cmd_witness(args) -> int:
    p = io.packing_from_json(io.read_json(args.packing))
    u, v = args.pair
    if not (0 <= u < p.graph.n and 0 <= v < p.graph.n) or u == v:
        raise UsageError(f"pair ({u}, {v}) is not two distinct vertices")
    notes: List[str] = []
    path = witness_from_packing(p, u, v, notes)
    d = drawing_from_packing(p)
    print("path: " + " ".join(map(str, path)))
    print(f"min slack: {path_slack(d, path):.17g}")
    for n in notes:
        print(f"degeneracy: {n}")
    if args.svg:
        io.write_text(args.svg, io.svg_render(p, witness=path))
    if not is_strongly_monotone_path(d, path):
        print("path does not re-validate", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

REPORT_SIZES = {"tree": (3, 40), "outerplanar": (3, 25), "two-tree": (3, 25), "planar3": (4, 50)}
REPORT_FIELDS = ["class", "index", "n", "m", "built", "strongly_monotone", "crossing_free", "convex",
                 "alpha", "resolution", "packing_residual", "seconds", "error"]


def _instance(cls: str, n: int, rng: random.Random) -> Graph:
    if cls == "tree":
        return gen.random_tree(n, rng)
    if cls == "outerplanar":
        return gen.random_outerplanar(n, rng)
    if cls == "two-tree":
        return gen.random_two_tree(n, rng)
    return gen.random_planar_triangulation(n, rng)


def _resolution(d: Drawing) -> float:
    """Smallest vertex distance over the diameter."""
    best = math.inf
    for i in range(d.graph.n):
        for j in range(i + 1, d.graph.n):
            best = min(best, math.dist(d.pos[i], d.pos[j]))
    diam = d.diameter()
    return best / diam if diam > 0 else 1.0


def report_rows(count: int, seed: int, classes: Sequence[str]) -> tuple:
    rows, examples = [], {}
    for cls in classes:
        rng = random.Random(f"{seed}:{cls}")
        lo, hi = REPORT_SIZES[cls]
        for i in range(count):
            g = _instance(cls, rng.randint(lo, hi), rng)
            row = {"class": cls, "index": i, "n": g.n, "m": g.m, "built": 0, "error": ""}
            t0 = time.perf_counter()
            try:
                d, p = construct(g, cls)
            except (PrecisionError, ConvergenceError) as exc:
                row["seconds"] = time.perf_counter() - t0
                row["error"] = type(exc).__name__
                row["strongly_monotone"] = 0
                rows.append(row)
                continue
            row["seconds"] = time.perf_counter() - t0
            rep = strongly_monotone(d)
            checks = post_checks(d, cls)
            row.update(built=1, strongly_monotone=int(rep.ok), crossing_free=int(checks["crossing_free"]),
                       convex=int(checks["convex"]) if "convex" in checks else None,
                       alpha=rep.alpha if rep.ok else 0.0, resolution=_resolution(d),
                       packing_residual=max(p.residuals.values()) if p is not None else None)
            rows.append(row)
            # the smallest instance of each class makes the most legible panel
            if cls not in examples or g.n < examples[cls][0]:
                examples[cls] = (g.n, p if p is not None else d)
    return rows, {c: obj for c, (_, obj) in examples.items()}


def cmd_report(args) -> int:
    from . import plotting

    os.makedirs(args.out, exist_ok=True)
    rows, examples = report_rows(args.count, args.seed, args.classes)
    csv_path = os.path.join(args.out, "report.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else (format(r[k], ".6g") if isinstance(r.get(k), float) else r[k]))
                        for k in REPORT_FIELDS})
    plotting.scatter_by_class(rows, "seconds", "construction time [s]", os.path.join(args.out, "runtime.png"), log=True)
    plotting.scatter_by_class(rows, "alpha", "angular slack alpha [rad]", os.path.join(args.out, "alpha.png"), log=True)
    plotting.scatter_by_class(rows, "resolution", "min distance / diameter",
                              os.path.join(args.out, "resolution.png"), log=True)
    plotting.success_bars(rows, os.path.join(args.out, "verified.png"))
    plotting.gallery([(c, examples[c]) for c in args.classes if c in examples], os.path.join(args.out, "gallery.png"))
    for cls in args.classes:
        sub = [r for r in rows if r["class"] == cls]
        ok = sum(r["strongly_monotone"] == 1 for r in sub)
        print(f"{cls}: {ok}/{len(sub)} verified")
    print(f"wrote {csv_path} and 5 figures")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monodraw", description="Strongly monotone drawings and their verification.")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="log progress (-vv for debug output)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("draw", help="construct a strongly monotone drawing")
    p.add_argument("--class", dest="cls", default="auto", choices=sorted(CLASS_TAGS) + ["auto"])
    p.add_argument("--in", dest="inp", required=True, help="graph JSON")
    p.add_argument("--out", required=True, help="drawing JSON to write")
    p.add_argument("--svg", help="also write an SVG rendering")
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for reproducible scripts; all drawers are deterministic")
    p.add_argument("--tol", type=float, help="angular margin, or packing tolerance for planar3")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("verify", help="check a drawing")
    p.add_argument("--in", dest="inp", required=True, help="drawing JSON")
    p.add_argument("--report", help="write verdicts and witness paths as JSON")
    p.add_argument("--alpha", action="store_true", help="print the global angular slack")
    p.add_argument("--convex", choices=["tree", "faces"], help="also check convexity")
    p.add_argument("--tol", type=float, help="angular margin in radians")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pack", help="primal-dual circle packing of a 3-connected planar graph")
    p.add_argument("--in", dest="inp", required=True, help="graph JSON")
    p.add_argument("--out", required=True, help="packing JSON to write")
    p.add_argument("--svg", help="also write an SVG rendering")
    p.add_argument("--tol", type=float, help="angle-sum tolerance")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("witness", help="witness path read off a packing")
    p.add_argument("--packing", required=True, help="packing JSON")
    p.add_argument("--pair", type=int, nargs=2, required=True, metavar=("U", "V"))
    p.add_argument("--svg", help="render the packing with the path highlighted")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("report", help="benchmark random instances; writes a CSV and PNG figures")
    p.add_argument("--out", default="report", help="output directory")
    p.add_argument("--count", type=int, default=10, help="instances per class")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classes", nargs="+", default=list(AUTO_ORDER), choices=list(AUTO_ORDER))
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ClassificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except (PrecisionError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValidationError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MonodrawError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
