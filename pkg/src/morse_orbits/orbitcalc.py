"""Homotopy types of stabilizers and orbits computed from the Kronrod-Reeb graph.

The engine works in three layers: contraction of the graph to a minimal one
(which yields the rank ``k``), lookups of the homotopy types of ``Diff_id(M)``
and of the orbit tables, and :func:`orbit_report`, which assembles all of it
together with the automorphism data.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NotSimple, RequiresSaddle
from .graphaut import (
    GraphAutomorphism,
    aut_h1_boundary,
    automorphism_group,
    fixes_h1_subgraph_pointwise,
    h1_subgraph,
)
from .plmorse import MorseData, ScalarField
from .reeb import NodeKind, ReebEdge, ReebGraph, ReebNode, SaddleFreeType, detect_type
from .surface import SurfaceClass, TriSurface, table1_type

# --------------------------------------------------------------------------
# contraction


class _WorkGraph:
    """Mutable copy of a Reeb graph with stable node and edge ids."""

    def __init__(self, G: ReebGraph):
        self.kind = {i: n.kind for i, n in enumerate(G.nodes)}
        self.level = {i: n.level for i, n in enumerate(G.nodes)}
        self.edges = {j: (e.tail, e.head) for j, e in enumerate(G.edges)}
        self.next_edge = len(G.edges)

    def copy(self) -> "_WorkGraph":
        w = object.__new__(_WorkGraph)
        w.kind, w.level, w.edges, w.next_edge = dict(self.kind), dict(self.level), dict(self.edges), self.next_edge
        return w

    def slots(self, n: int) -> list[int]:
        out = []
        for j, (a, b) in self.edges.items():
            if a == n:
                out.append(j)
            if b == n:
                out.append(j)
        return out

    def degree(self, n: int) -> int:
        return len(self.slots(n))

    def is_internal(self, j: int) -> bool:
        a, b = self.edges[j]
        return self.degree(a) != 1 and self.degree(b) != 1

    def contractible(self, j: int) -> bool:
        a, b = self.edges[j]
        kinds = {self.kind[a], self.kind[b]}
        if a == b or kinds != {NodeKind.EXTREMUM, NodeKind.SADDLE}:
            return False
        c = a if self.kind[a] is NodeKind.SADDLE else b
        slots = self.slots(c)
        if len(slots) != 3:
            return False
        rest = list(slots)
        rest.remove(j)
        e1, e2 = rest
        return e1 != e2 and (self.is_internal(e1) or self.is_internal(e2))

    def contract(self, j: int) -> int:
        a, b = self.edges.pop(j)
        ext, c = (a, b) if self.kind[a] is NodeKind.EXTREMUM else (b, a)
        e1, e2 = self.slots(c)
        ends = []
        for e in (e1, e2):
            x, y = self.edges.pop(e)
            ends.append(y if x == c else x)
        del self.kind[ext], self.kind[c]
        del self.level[ext], self.level[c]
        new = self.next_edge
        self.next_edge += 1
        self.edges[new] = (ends[0], ends[1])
        return new

    def candidates(self) -> list[int]:
        return [j for j in self.edges if self.contractible(j)]

    def counts(self) -> tuple[int, int]:
        k = Counter(self.kind.values())
        return k[NodeKind.SADDLE], k[NodeKind.EXTREMUM]

    def state_key(self):
        ends = sorted(tuple(sorted(e)) for e in self.edges.values())
        return (frozenset(self.kind), tuple(ends))

    def to_graph(self, codomain) -> ReebGraph:
        ids = sorted(self.kind)
        index = {n: i for i, n in enumerate(ids)}
        nodes = tuple(ReebNode(self.kind[n], self.level[n], ()) for n in ids)
        deg = Counter()
        for a, b in self.edges.values():
            deg[a] += 1
            deg[b] += 1
        edges = tuple(
            ReebEdge(index[a], index[b], Fraction(0), is_internal=deg[a] != 1 and deg[b] != 1)
            for _, (a, b) in sorted(self.edges.items())
        )
        return ReebGraph(nodes, edges, codomain)


def is_contractible_edge(G: ReebGraph, e: int) -> bool:
    return _WorkGraph(G).contractible(e)


@dataclass(frozen=True)
class MinimalGraphSummary:
    graph: ReebGraph
    r_C: int
    r_E: int
    trace: tuple[int, ...]

    @property
    def contractions(self) -> int:
        return len(self.trace)


def minimal_graph(G: ReebGraph, md: Optional[MorseData] = None) -> MinimalGraphSummary:
    """Contract edges until none is contractible, lowest extremum first.

    Raises :class:`NotSimple` when a saddle node carries several critical
    points, since contraction is only meaningful for simple fields.
    """
    if any(len(n.witnesses) > 1 for n in G.nodes if n.kind is NodeKind.SADDLE):
        raise NotSimple("contraction needs a simple field")
    if md is not None and md.is_simple is False:
        raise NotSimple("contraction needs a simple field")
    W = _WorkGraph(G)
    trace = []
    while True:
        cand = W.candidates()
        if not cand:
            break

        def key(j):
            a, b = W.edges[j]
            ext = a if W.kind[a] is NodeKind.EXTREMUM else b
            return (W.level[ext], j)

        j = min(cand, key=key)
        trace.append(j)
        W.contract(j)
    rC, rE = W.counts()
    return MinimalGraphSummary(W.to_graph(G.codomain), rC, rE, tuple(trace))


def all_contraction_outcomes(G: ReebGraph) -> set[tuple[int, int]]:
    """``(r'_C, r'_E)`` over every maximal contraction sequence (memoised search)."""
    memo: dict = {}

    def explore(W: _WorkGraph):
        key = W.state_key()
        if key in memo:
            return memo[key]
        cand = W.candidates()
        if not cand:
            res = {W.counts()}
        else:
            res = set()
            for j in cand:
                V = W.copy()
                V.contract(j)
                res |= explore(V)
        memo[key] = res
        return res

    return explore(_WorkGraph(G))


# --------------------------------------------------------------------------
# rank k


@dataclass(frozen=True)
class KValue:
    """Either an exact rank (``low == high``) or the admissible interval."""

    low: int
    high: int

    @property
    def exact(self) -> bool:
        return self.low == self.high

    def to_json(self):
        return self.low if self.exact else [self.low, self.high]

    @classmethod
    def from_json(cls, v) -> "KValue":
        if isinstance(v, list):
            return cls(v[0], v[1])
        return cls(v, v)

    def __str__(self):
        return str(self.low) if self.exact else f"[{self.low}, {self.high}]"


def k_bar(C: SurfaceClass, md: MorseData) -> int:
    if table1_type(C) == 1:
        return md.c1 - 1
    return md.c0 + md.c2


def rank_k(C: SurfaceClass, G: ReebGraph, md: MorseData, summary: Optional[MinimalGraphSummary] = None) -> KValue:
    """Rank of the free abelian part of ``pi_1`` of the orbit."""
    if md.c1 == 0:
        raise RequiresSaddle("the rank k is defined only when there are saddles")
    simple = md.is_simple if md.is_simple is not None else all(
        len(n.witnesses) == 1 for n in G.nodes if n.kind is NodeKind.SADDLE
    )
    bound = k_bar(C, md)
    if not simple:
        return KValue(0, bound)
    if table1_type(C) == 1:
        return KValue(bound, bound)
    if summary is None:
        summary = minimal_graph(G)
    k = md.c1 - summary.r_C
    if k != md.c0 + md.c2 - summary.r_E:
        raise AssertionError("contraction bookkeeping is inconsistent")
    return KValue(k, k)


# --------------------------------------------------------------------------
# homotopy types

_ATOM_ORDER = ("SO(3)", "S2", "S1")


@dataclass(frozen=True)
class HomotopyType:
    """A finite product of the atoms SO(3), S2 and S1; the empty product is a point."""

    factors: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, **powers) -> "HomotopyType":
        names = {"SO3": "SO(3)", "S2": "S2", "S1": "S1", "T2": "T2"}
        c = Counter()
        for k, n in powers.items():
            c[names[k]] += n
        return cls.from_counter(c)

    @classmethod
    def from_counter(cls, c: Counter) -> "HomotopyType":
        c = Counter(c)
        if "T2" in c:
            c["S1"] += 2 * c.pop("T2")
        for atom in c:
            if atom not in _ATOM_ORDER:
                raise ValueError(f"unknown atom {atom!r}")
        return cls(tuple((a, c[a]) for a in _ATOM_ORDER if c[a] > 0))

    def __mul__(self, other: "HomotopyType") -> "HomotopyType":
        return HomotopyType.from_counter(Counter(dict(self.factors)) + Counter(dict(other.factors)))

    def __str__(self) -> str:
        if not self.factors:
            return "point"
        parts = []
        for atom, n in self.factors:
            if n == 1:
                parts.append(atom)
            else:
                parts.append(f"({atom})^{n}")
        return " x ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "HomotopyType":
        text = text.strip()
        if text == "point":
            return cls()
        c = Counter()
        for part in text.split(" x "):
            part = part.strip()
            if part.startswith("("):
                atom, _, power = part[1:].partition(")^")
                c[atom] += int(power)
            else:
                c[part] += 1
        return cls.from_counter(c)


POINT = HomotopyType()
S1 = HomotopyType.of(S1=1)
S2 = HomotopyType.of(S2=1)
SO3 = HomotopyType.of(SO3=1)


def circles(n: int) -> HomotopyType:
    return HomotopyType.of(S1=n)


def _surface_key(C: SurfaceClass) -> str:
    g, b = C.genus, C.boundary_count
    if C.orientable:
        return {(0, 0): "S2", (0, 1): "D2", (0, 2): "annulus", (1, 0): "T2"}.get((g, b), "other")
    return {(1, 0): "RP2", (1, 1): "Moebius", (2, 0): "Klein"}.get((g, b), "other")


def diffid_homotopy(C: SurfaceClass) -> HomotopyType:
    key = _surface_key(C)
    if key in ("S2", "RP2"):
        return SO3
    if key in ("D2", "annulus", "Moebius", "Klein"):
        return S1
    if key == "T2":
        return HomotopyType.of(T2=1)
    return POINT


def pi1_diffid(C: SurfaceClass) -> str:
    return {"SO(3)": "Z2", "S1": "Z", "(S1)^2": "Z^2", "point": "0"}[str(diffid_homotopy(C))]


def table2_row(C: SurfaceClass, c1: int, k: int) -> HomotopyType:
    """Homotopy type of the orbit of a generic field with saddles."""
    key = _surface_key(C)
    if key in ("S2", "RP2"):
        return SO3 * circles(c1 - 1)
    if key in ("D2", "annulus", "Moebius"):
        return circles(c1)
    if key == "T2":
        return circles(c1 + 1)
    if key == "Klein":
        return circles(k + 1)
    return circles(k)


def table2_consistency(C: SurfaceClass, k: int, md: MorseData) -> bool:
    """The orbit table agrees with ``Diff_id(M) x (S1)^k``."""
    return table2_row(C, md.c1, k) == diffid_homotopy(C) * circles(k)


TABLE3 = {
    "A": (S2, POINT),
    "B": (POINT, POINT),
    "C": (POINT, POINT),
    "D": (S1, S1),
    "E": (S1, S1),
}


def stabilizer_homotopy(C: SurfaceClass, md: MorseData) -> HomotopyType:
    if md.c1 >= 1 or not C.orientable:
        return POINT
    return S1


def codimensions(md: MorseData, boundary_count: int, m: int = 2) -> tuple[int, int]:
    """Codimensions of the orbit and of the critical-set preserving orbit."""
    c = md.c0 + md.c1 + md.c2
    return c + boundary_count, c * m + c + boundary_count


# --------------------------------------------------------------------------
# report

HIGHER_PI_RULE = "pi_i O(f) = pi_i M for i >= 3, pi_2 O(f) = 0"


@dataclass(frozen=True)
class GroupInfo:
    level: str  # "exact" or "bound"
    order: int
    note: str = ""


@dataclass(frozen=True)
class OrbitReport:
    surface: SurfaceClass
    morse: MorseData
    stabilizer_id_type: HomotopyType
    orbit_type: Optional[HomotopyType]
    orbit_f_type: Optional[HomotopyType]
    k: Optional[KValue]
    pi1_diff: str
    G: Optional[GroupInfo]
    higher_pi: Optional[str]
    codim_orbit: int
    codim_orbit_cr: int
    l: int
    pi0_leaf_preserving: str
    type_ABCDE: Optional[str]
    minimal: Optional[MinimalGraphSummary] = None
    diff_id: HomotopyType = POINT
    flags: tuple[str, ...] = field(default=())


def pi0_leaf_preserving(G: ReebGraph, kind: Optional[SaddleFreeType]) -> str:
    if kind is not None and kind.letter == "E":
        return "Z2"
    return f"Z^{G.l}"


def orbit_report(
    S: TriSurface,
    f: ScalarField,
    md: MorseData,
    G: ReebGraph,
    C: SurfaceClass,
    summary: Optional[MinimalGraphSummary] = None,
    auts: Optional[list[GraphAutomorphism]] = None,
) -> OrbitReport:
    """Assemble every homotopy-theoretic statement available for ``f``.

    ``md`` must already be finalised by :func:`morse_orbits.reeb.finalize_morse`.
    """
    flags = []
    codim, codim_cr = codimensions(md, C.boundary_count)
    stab = stabilizer_homotopy(C, md)
    diff = diffid_homotopy(C)
    if not C.orientable and C.genus == 1 and C.boundary_count >= 2:
        flags.append("projective plane with several holes counted as type 1 (table cell leaves the hole count open)")

    if md.c1 == 0:
        kind = detect_type(S, f, md, G)
        orbit, orbit_f = TABLE3[kind.letter]
        return OrbitReport(
            C, md, stab, orbit, orbit_f, None, pi1_diffid(C), None, None, codim, codim_cr,
            G.l, pi0_leaf_preserving(G, kind), str(kind), None, diff, tuple(flags),
        )

    if md.is_simple:
        summary = summary or minimal_graph(G, md)
    k = rank_k(C, G, md, summary)
    auts = auts if auts is not None else automorphism_group(G)
    sub = aut_h1_boundary(G, auts)
    if md.is_generic:
        group = GroupInfo("exact", 1, "generic: trivial")
    elif md.is_simple and all(fixes_h1_subgraph_pointwise(t, h1_subgraph(G)) for t in sub):
        group = GroupInfo("exact", len(sub), "simple and every H1-trivial automorphism fixes the H1-subgraph")
    else:
        group = GroupInfo("bound", len(sub), "subgroup of the H1-trivial boundary-fixing automorphisms")
    if table1_type(C) == 1 and summary is not None and summary.r_C > 1:
        flags.append(
            f"type 1 with a minimal graph of {summary.r_C} saddle nodes: k is the table value, "
            f"contraction alone only gives k >= {md.c1 - summary.r_C}"
        )
    if table1_type(C) == 3:
        flags.append("type 3: k = c0 + c2 - r'_E, bounded by c0 + c2")
    if _surface_key(C) == "Klein":
        flags.append("Klein bottle: the isotopy part of the twist group may fail to be a direct summand")
    orbit = table2_row(C, md.c1, k.low) if md.is_generic else None
    return OrbitReport(
        C, md, stab, orbit, POINT, k, pi1_diffid(C), group, HIGHER_PI_RULE, codim, codim_cr,
        G.l, pi0_leaf_preserving(G, None), None, summary, diff, tuple(flags),
    )
