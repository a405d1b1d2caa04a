"""One call from a (surface, field) pair to the full orbit analysis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphaut import GraphAutomorphism, automorphism_group
from .homology import TwistSystem, twist_system, twists_independent
from .orbitcalc import MinimalGraphSummary, OrbitReport, minimal_graph, orbit_report
from .plmorse import MorseData, ScalarField, validate_morse
from .reeb import ReebGraph, build_reeb, finalize_morse
from .surface import SurfaceClass, TriSurface, classify_surface


@dataclass(frozen=True, eq=False)
class Analysis:
    """Every intermediate object of the pipeline, kept for inspection."""

    surface: TriSurface
    field: ScalarField
    classification: SurfaceClass
    morse: MorseData
    graph: ReebGraph
    summary: Optional[MinimalGraphSummary]
    automorphisms: Optional[list[GraphAutomorphism]]
    report: OrbitReport
    twists: Optional[TwistSystem] = None
    twists_independent: Optional[bool] = None


def analyze(S: TriSurface, f: ScalarField, homology: bool = True) -> Analysis:
    """Run surface, Morse, Reeb, automorphism, homology and orbit stages.

    With ``homology=False`` the twist system is skipped; everything else in
    the report is independent of it.
    """
    C = classify_surface(S)
    md = validate_morse(S, f)
    G = build_reeb(S, f, md)
    md = finalize_morse(G, md)
    summary = minimal_graph(G, md) if md.c1 >= 1 and md.is_simple else None
    auts = automorphism_group(G) if md.c1 >= 1 else None
    report = orbit_report(S, f, md, G, C, summary=summary, auts=auts)
    T = independent = None
    if homology:
        T = twist_system(S, f, G, md)
        independent = twists_independent(T)
    return Analysis(S, f, C, md, G, summary, auts, report, T, independent)
