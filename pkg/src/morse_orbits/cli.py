"""Command line interface: ``morse-orbits {analyze,reeb,check}``.

Every failure is reported as ``{"error": {"type": ..., "message": ...}}`` on
stdout with a nonzero exit status; exit status 0 means a report was written.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .corpus import random_field
from .errors import HomologyError, MorseError, MorseOrbitsError, ParseError, SurfaceError
from .graphaut import order_bound
from .orbitcalc import all_contraction_outcomes, k_bar, stabilizer_homotopy, table2_consistency
from .pipeline import Analysis, analyze
from .plmorse import CIRCLE, REAL, validate_morse
from .reeb import build_reeb, finalize_morse

EXIT_CODES = [
    (ParseError, 3),
    (SurfaceError, 4),
    (MorseError, 5),
    (HomologyError, 6),
    (MorseOrbitsError, 7),
    (OSError, 8),
]
CHECK_FAILED = 1
SEED_VARIABLE = "MORSE_ORBITS_SEED"


def exit_code_for(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 9


def error_object(exc: BaseException) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


def load_inputs(mesh_path: str, field_path: str, codomain: Optional[str]):
    S = io.parse_mesh(Path(mesh_path).read_text())
    f = io.parse_field(Path(field_path).read_text(), codomain, vertex_count=S.vertex_count)
    return S, f


def run_analyze(args) -> str:
    S, f = load_inputs(args.mesh, args.field, args.codomain)
    A = analyze(S, f, homology=not args.no_homology)
    if args.format == "dot":
        return io.reeb_to_dot(A.graph)
    doc = io.report_document(A)
    if args.format == "text":
        return io.render_text(doc)
    return io.dumps_report(doc) + "\n"


def run_reeb(args) -> str:
    S, f = load_inputs(args.mesh, args.field, args.codomain)
    md = validate_morse(S, f)
    G = build_reeb(S, f, md)
    md = finalize_morse(G, md)
    if args.format == "dot":
        return io.reeb_to_dot(G)
    nodes = [{"kind": n.kind.value, "level": io.format_fraction(n.level), "witnesses": list(n.witnesses)} for n in G.nodes]
    edges = [
        {"tail": e.tail, "head": e.head, "span": io.format_fraction(e.span), "internal": e.is_internal}
        for e in G.edges
    ]
    doc = {"codomain": G.codomain, "nodes": nodes, "edges": edges, "l": G.l, "cycle_rank": G.cycle_rank,
           "simple": md.is_simple, "generic": md.is_generic, "order_bound": order_bound(G)}
    if args.format == "text":
        return io.render_text({"reeb": doc})
    return json.dumps(doc, indent=2) + "\n"


# --------------------------------------------------------------------------
# property checks


def property_checks(A: Analysis, max_edges: int = 12) -> dict[str, Optional[bool]]:
    """Invariants every analysis must satisfy; None marks a check that does not apply."""
    C, md, R, G = A.classification, A.morse, A.report, A.graph
    c = md.c0 + md.c1 + md.c2
    checks: dict[str, Optional[bool]] = {}
    checks["morse_equality"] = md.c0 - md.c1 + md.c2 == C.euler_characteristic
    checks["codimensions"] = (R.codim_orbit, R.codim_orbit_cr) == (c + C.boundary_count, 3 * c + C.boundary_count)
    checks["stabilizer"] = R.stabilizer_id_type == stabilizer_homotopy(C, md)
    checks["table2_consistency"] = None
    checks["k_bound"] = None
    checks["contraction_confluence"] = None
    if md.c1 >= 1:
        checks["k_bound"] = R.k.high <= k_bar(C, md)
        if md.is_generic:
            checks["table2_consistency"] = table2_consistency(C, R.k.low, md)
        if md.is_simple and len(G.edges) <= max_edges:
            outcomes = all_contraction_outcomes(G)
            checks["contraction_confluence"] = outcomes == {(R.minimal.r_C, R.minimal.r_E)}
    checks["twists_independent"] = None
    if A.twists is not None and C.orientable:
        checks["twists_independent"] = bool(A.twists_independent)
    return checks


def _check_one(job):
    name, mesh_text, field_text, codomain, homology = job
    try:
        S = io.parse_mesh(mesh_text)
        if isinstance(field_text, int):
            f, _ = random_field(S, random.Random(field_text), codomain or REAL)
        else:
            f = io.parse_field(field_text, codomain, vertex_count=S.vertex_count)
        A = analyze(S, f, homology=homology)
        return {"name": name, "checks": property_checks(A)}
    except MorseOrbitsError as exc:
        return {"name": name, **error_object(exc)}


def collect_jobs(directory: Path, random_fields: int, seed: int, codomain: Optional[str], homology: bool):
    """Mesh files paired with same-stem ``.field`` files, plus seeded random fields."""
    jobs = []
    rng = random.Random(seed)
    meshes = sorted(p for p in directory.iterdir() if p.suffix in (".off", ".json"))
    for mesh in meshes:
        text = mesh.read_text()
        for field in sorted(directory.glob(mesh.stem + "*.field")):
            jobs.append((field.name, text, field.read_text(), codomain, homology))
        for i in range(random_fields):
            jobs.append((f"{mesh.name}#random{i}", text, rng.randrange(2**32), codomain, homology))
    return jobs


def run_check(args) -> tuple[str, int]:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    seed = int(os.environ.get(SEED_VARIABLE, "0"))
    jobs = collect_jobs(directory, args.random, seed, args.codomain, not args.no_homology)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_check_one, jobs))
    else:
        results = [_check_one(j) for j in jobs]
    summary: dict[str, dict[str, int]] = {}
    failed = []
    for r in results:
        if "error" in r:
            failed.append({"name": r["name"], "error": r["error"]})
            continue
        for check, ok in r["checks"].items():
            s = summary.setdefault(check, {"passed": 0, "failed": 0, "skipped": 0})
            s["skipped" if ok is None else ("passed" if ok else "failed")] += 1
            if ok is False:
                failed.append({"name": r["name"], "check": check})
    doc = {"seed": seed, "runs": len(results), "checks": summary, "failures": failed}
    return json.dumps(doc, indent=2) + "\n", CHECK_FAILED if failed else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morse-orbits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats):
        p.add_argument("--codomain", choices=[REAL, CIRCLE], default=None,
                       help="codomain of the field; defaults to the field file header, else real")
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("--no-homology", action="store_true", help="skip the Dehn twist homology checks")

    for name, help_ in (("analyze", "full orbit report"), ("reeb", "the Kronrod-Reeb graph only")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--mesh", required=True, help="OFF or JSON mesh")
        p.add_argument("--field", required=True, help="one value per vertex")
        add_common(p, ["json", "text", "dot"])

    p = sub.add_parser("check", help="run the property checks over a directory of meshes and fields")
    p.add_argument("directory")
    p.add_argument("--random", type=int, default=0, metavar="N",
                   help=f"add N random fields per mesh, seeded by ${SEED_VARIABLE}")
    p.add_argument("--jobs", type=int, default=1)
    add_common(p, ["json"])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            out, code = run_analyze(args), 0
        elif args.command == "reeb":
            out, code = run_reeb(args), 0
        else:
            out, code = run_check(args)
    except (MorseOrbitsError, OSError) as exc:
        sys.stdout.write(json.dumps(error_object(exc)) + "\n")
        return exit_code_for(exc)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
