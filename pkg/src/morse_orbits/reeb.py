"""Kronrod-Reeb graphs of PL Morse fields.

The graph is built by an ascending sweep over the vertex order of
:mod:`morse_orbits.plmorse`. Between two consecutive events the level set is
a disjoint union of closed polygonal contours, each one a set of mesh edges
the level crosses. Every contour is owned by an open arc of the graph; a
regular vertex hands its contour on to the arc, any other event closes the
arcs of the contours entering it and opens arcs for the contours leaving it.

Circle-valued fields are swept from a regular cut value once around the
circle and the arcs that reach the cut are glued back to the arcs that left
it, matched by their contour.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import BoundaryCritical, DegenerateLevel, MorseError, UnclassifiableNoSaddle
from .plmorse import CIRCLE, REAL, MorseData, ScalarField, VertexKind, precedes, representative, vertex_type
from .surface import Edge, TriSurface, classify_surface, edge_key


class NodeKind(enum.Enum):
    BOUNDARY = "boundary"
    EXTREMUM = "E"
    SADDLE = "C"
    ANCHOR = "anchor"


@dataclass(frozen=True)
class ReebNode:
    kind: NodeKind
    level: Fraction
    witnesses: tuple[int, ...]


@dataclass(frozen=True)
class Contour:
    """A regular level curve: the mesh edges it crosses and its sweep level."""

    edges: frozenset[Edge]
    level: Fraction


@dataclass(frozen=True)
class ReebEdge:
    tail: int
    head: int
    span: Fraction
    is_internal: bool = False
    contour: Optional[Contour] = None

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True, eq=False)
class ReebGraph:
    """Labelled multigraph; edges are directed by ascent of the field.

    ``span`` is the increase of the field along an edge (for circle-valued
    fields, measured on the universal cover). ``cut`` is the origin of the
    sweep coordinate for circle-valued fields: ``t = (value - cut) mod 1``.
    """

    nodes: tuple[ReebNode, ...]
    edges: tuple[ReebEdge, ...]
    codomain: str = REAL
    cut: Optional[Fraction] = None

    def degree(self, n: int) -> int:
        return sum((e.tail == n) + (e.head == n) for e in self.edges)

    def incident(self, n: int) -> list[int]:
        """Edge slots at ``n``: a loop appears twice."""
        out = []
        for i, e in enumerate(self.edges):
            if e.tail == n:
                out.append(i)
            if e.head == n:
                out.append(i)
        return out

    def nodes_of_kind(self, kind: NodeKind) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n.kind is kind]

    @property
    def internal_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.is_internal]

    @property
    def l(self) -> int:
        return len(self.internal_edges)

    @property
    def cycle_rank(self) -> int:
        return len(self.edges) - len(self.nodes) + _component_count(len(self.nodes), self.edges)

    def sweep_coordinate(self, value: Fraction) -> Fraction:
        if self.cut is None:
            return value
        return (value - self.cut) % 1

    def with_edges(self, edges) -> "ReebGraph":
        return replace(self, edges=tuple(edges))


def _component_count(n_nodes, edges) -> int:
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        parent[find(e.tail)] = find(e.head)
    return len({find(x) for x in range(n_nodes)})


# --------------------------------------------------------------------------
# sweep


@dataclass
class _Arc:
    start: object
    end: object = None
    contour: Optional[Contour] = None


class _Sweep:
    def __init__(self, S: TriSurface, f: ScalarField):
        self.S = S
        self.f = f
        self.cut = _choose_cut(f.values) if f.is_circle else None
        t = [self._coord(x) for x in f.values]
        self.t = t

        groups: dict[object, list[int]] = {}
        for v in range(S.vertex_count):
            cyc = S.boundary_cycle_of[v]
            groups.setdefault(("b", cyc) if cyc is not None else ("v", v), []).append(v)
        keyed = sorted(groups.items(), key=lambda kv: (t[kv[1][0]], representative(S, kv[1][0])))
        self.events = [k for k, _ in keyed]
        self.event_vertices = [vs for _, vs in keyed]
        self.event_of = [0] * S.vertex_count
        for i, vs in enumerate(self.event_vertices):
            for v in vs:
                self.event_of[v] = i

        n_ev = len(self.events)
        self.lower_edges: list[list[Edge]] = [[] for _ in range(n_ev)]
        self.upper_edges: list[list[Edge]] = [[] for _ in range(n_ev)]
        self.edge_low: dict[Edge, int] = {}
        self.wrapping: list[Edge] = []
        for e in S.edges:
            u, w = e
            if self.event_of[u] == self.event_of[w]:
                continue
            lo, hi = (u, w) if precedes(S, f, u, w) else (w, u)
            self.edge_low[e] = lo
            self.upper_edges[self.event_of[lo]].append(e)
            self.lower_edges[self.event_of[hi]].append(e)
            if self.event_of[lo] > self.event_of[hi]:
                self.wrapping.append(e)
        self.tri_edges = [
            (edge_key(a, b), edge_key(b, c), edge_key(c, a)) for a, b, c in S.triangles
        ]

    def _coord(self, value):
        return value if self.cut is None else (value - self.cut) % 1

    def event_t(self, i: int) -> Fraction:
        return self.t[self.event_vertices[i][0]]

    def slab(self, i: int) -> Optional[Fraction]:
        """Level in the middle of the slab above event ``i``, or None if it has zero width."""
        n = len(self.events)
        if i == n - 1:
            return Fraction(1) if self.cut is not None else None
        lo, hi = self.event_t(i), self.event_t(i + 1)
        return (lo + hi) / 2 if hi > lo else None

    def components(self, seeds, active) -> list[frozenset[Edge]]:
        S = self.S
        seen: set[Edge] = set()
        comps = []
        for e0 in seeds:
            if e0 in seen:
                continue
            seen.add(e0)
            stack, comp = [e0], []
            while stack:
                e = stack.pop()
                comp.append(e)
                for ti in S.edge_triangles[e]:
                    for e2 in self.tri_edges[ti]:
                        if e2 != e and e2 in active and e2 not in seen:
                            seen.add(e2)
                            stack.append(e2)
            comps.append(frozenset(comp))
        return comps


def _choose_cut(values) -> Fraction:
    distinct = sorted(set(values))
    if len(distinct) == 1:
        return (distinct[0] + Fraction(1, 2)) % 1
    best, cut = None, None
    for i, a in enumerate(distinct):
        b = distinct[i + 1] if i + 1 < len(distinct) else distinct[0] + 1
        if best is None or b - a > best:
            best, cut = b - a, ((a + b) / 2) % 1
    return cut


def build_reeb(S: TriSurface, f: ScalarField, md: MorseData) -> ReebGraph:
    """Kronrod-Reeb graph of ``f``; ``md`` must come from ``validate_morse(S, f)``."""
    sw = _Sweep(S, f)
    kinds = {v: vertex_type(S, f, v) for v in S.interior_vertices()}

    arcs: list[_Arc] = []
    nodes: list[ReebNode] = []
    node_t: list[Fraction] = []
    active: set[Edge] = set()
    owner: dict[Edge, int] = {}
    contours: dict[int, frozenset[Edge]] = {}
    arc_of: dict[int, int] = {}
    unsampled: set[int] = set()
    next_cid = 0

    def open_contour(edges_, arc_idx):
        nonlocal next_cid
        cid = next_cid
        next_cid += 1
        contours[cid] = edges_
        for e in edges_:
            owner[e] = cid
        arc_of[cid] = arc_idx
        return cid

    if sw.cut is not None:
        active.update(sw.wrapping)
        for comp in sw.components(sorted(sw.wrapping), active):
            arcs.append(_Arc(start=("cut", comp), contour=Contour(comp, Fraction(1))))
            open_contour(comp, len(arcs) - 1)

    for i, ev in enumerate(sw.events):
        low, up = sw.lower_edges[i], sw.upper_edges[i]
        entering = sorted({owner[e] for e in low})
        for e in low:
            active.discard(e)
            del owner[e]
        remaining: set[Edge] = set()
        for c in entering:
            remaining |= contours.pop(c)
        remaining.difference_update(low)
        active.update(up)
        comps = sw.components(sorted(up) + sorted(remaining), active)

        if ev[0] == "v":
            v = ev[1]
            vt = kinds[v]
            if vt.kind is VertexKind.REGULAR:
                if len(entering) != 1 or len(comps) != 1:
                    raise MorseError(f"regular vertex {v} changes the contour count")
                old = entering[0]
                arc_idx = arc_of.pop(old)
                cid = open_contour(comps[0], arc_idx)
                if old in unsampled:
                    unsampled.discard(old)
                    unsampled.add(cid)
                _sample(sw, i, unsampled, contours, arc_of, arcs)
                continue
            kind = NodeKind.EXTREMUM if vt.kind in (VertexKind.MIN, VertexKind.MAX) else NodeKind.SADDLE
            witnesses = (v,)
        else:
            if (len(entering), len(comps)) not in ((1, 0), (0, 1)):
                raise BoundaryCritical(f"boundary cycle {ev[1]} is not a regular collar")
            kind = NodeKind.BOUNDARY
            witnesses = (ev[1],)

        node = len(nodes)
        nodes.append(ReebNode(kind, f.values[sw.event_vertices[i][0]], witnesses))
        node_t.append(sw.event_t(i))
        for c in entering:
            arcs[arc_of.pop(c)].end = node
            unsampled.discard(c)
        for comp in comps:
            arcs.append(_Arc(start=node))
            unsampled.add(open_contour(comp, len(arcs) - 1))
        _sample(sw, i, unsampled, contours, arc_of, arcs)

    for cid, comp in contours.items():
        if sw.cut is None:
            raise MorseError("contours left open above the highest event")
        arcs[arc_of[cid]].end = ("cut", comp)

    edges = _resolve_arcs(arcs, node_t)
    if not nodes:
        nodes, edges = _anchor(arcs, f, sw)
        return classify_edges(ReebGraph(tuple(nodes), tuple(edges), f.codomain, sw.cut))
    nodes, edges = _merge_level_components(nodes, edges)
    graph = classify_edges(ReebGraph(tuple(nodes), tuple(edges), f.codomain, sw.cut))
    for i, n in enumerate(graph.nodes):
        if n.kind in (NodeKind.EXTREMUM, NodeKind.BOUNDARY) and graph.degree(i) != 1:
            raise MorseError(f"{n.kind.value}-vertex {i} has degree {graph.degree(i)}")
    return graph


def _sample(sw, i, unsampled, contours, arc_of, arcs):
    level = sw.slab(i)
    if level is None:
        return
    for cid in list(unsampled):
        arc = arcs[arc_of[cid]]
        if arc.contour is None:
            arc.contour = Contour(contours[cid], level)
        unsampled.discard(cid)


def _piece_length(arc: _Arc, node_t) -> Fraction:
    start = Fraction(0) if isinstance(arc.start, tuple) else node_t[arc.start]
    end = Fraction(1) if isinstance(arc.end, tuple) else node_t[arc.end]
    return end - start


def _resolve_arcs(arcs: list[_Arc], node_t) -> list[ReebEdge]:
    from_cut = {a.start[1]: i for i, a in enumerate(arcs) if isinstance(a.start, tuple)}
    edges = []
    for i, a in enumerate(arcs):
        if isinstance(a.start, tuple):
            continue
        span = _piece_length(a, node_t)
        contour = a.contour
        cur = a
        while isinstance(cur.end, tuple):
            cur = arcs[from_cut[cur.end[1]]]
            span += _piece_length(cur, node_t)
            contour = contour or cur.contour
        edges.append(ReebEdge(a.start, cur.end, span, contour=contour))
    return edges


def _anchor(arcs, f, sw):
    """Graph of a field without genuine vertices: one anchor carrying one loop."""
    contour = arcs[0].contour
    node = ReebNode(NodeKind.ANCHOR, sw.cut, ())
    return [node], [ReebEdge(0, 0, Fraction(len(arcs)), contour=contour)]


def _merge_level_components(nodes, edges):
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if e.span != 0:
            continue
        for n in (e.tail, e.head):
            kind = nodes[n].kind
            if kind is NodeKind.BOUNDARY:
                raise BoundaryCritical("a boundary cycle shares its level component with another critical set")
            if kind is NodeKind.EXTREMUM:
                raise DegenerateLevel(f"extremum at vertex {nodes[n].witnesses[0]} is not isolated in its level set")
        parent[find(e.tail)] = find(e.head)

    roots = []
    new_id = {}
    for i in range(len(nodes)):
        r = find(i)
        if r not in new_id:
            new_id[r] = len(roots)
            roots.append(r)
    merged = []
    for r in roots:
        members = [i for i in range(len(nodes)) if find(i) == r]
        wit = tuple(sorted(w for i in members for w in nodes[i].witnesses))
        merged.append(ReebNode(nodes[members[0]].kind, nodes[members[0]].level, wit))
    new_edges = [
        replace(e, tail=new_id[find(e.tail)], head=new_id[find(e.head)]) for e in edges if e.span != 0
    ]
    return merged, new_edges


def classify_edges(G: ReebGraph) -> ReebGraph:
    """Flag edges as internal (no endpoint of degree 1) or external."""
    deg = defaultdict(int)
    for e in G.edges:
        deg[e.tail] += 1
        deg[e.head] += 1
    edges = [replace(e, is_internal=deg[e.tail] != 1 and deg[e.head] != 1) for e in G.edges]
    return G.with_edges(edges)


# --------------------------------------------------------------------------
# simplicity, genericity, and the saddle-free types


def is_simple(G: ReebGraph, md: MorseData) -> bool:
    return all(len(n.witnesses) == 1 for n in G.nodes if n.kind is NodeKind.SADDLE)


def finalize_morse(G: ReebGraph, md: MorseData) -> MorseData:
    """Fill ``is_simple`` and settle ``is_generic`` from the level components."""
    simple = is_simple(G, md)
    levels = [n.level for n in G.nodes if n.kind in (NodeKind.SADDLE, NodeKind.EXTREMUM)]
    generic = simple and md.is_generic and len(set(levels)) == len(levels)
    return replace(md, is_simple=simple, is_generic=generic)


@dataclass(frozen=True)
class SaddleFreeType:
    letter: str
    degree: Optional[int] = None

    def __str__(self):
        return self.letter if self.degree is None else f"{self.letter}({self.degree})"


def detect_type(S: TriSurface, f: ScalarField, md: MorseData, G: ReebGraph) -> Optional[SaddleFreeType]:
    """Which saddle-free normal form ``f`` factors through, or None when ``c1 > 0``."""
    if md.c1 > 0:
        return None
    C = classify_surface(S)
    key = (C.orientable, C.genus, C.boundary_count)
    extrema = md.c0 + md.c2
    if key == (True, 0, 0) and (md.c0, md.c2) == (1, 1):
        return SaddleFreeType("A")
    if key == (True, 0, 1) and extrema == 1:
        return SaddleFreeType("B")
    if key == (True, 0, 2) and extrema == 0:
        return SaddleFreeType("C")
    if f.codomain == CIRCLE and extrema == 0 and C.boundary_count == 0:
        anchors = G.nodes_of_kind(NodeKind.ANCHOR)
        if anchors and len(G.edges) == 1:
            n = int(G.edges[0].span)
            if key == (True, 1, 0):
                return SaddleFreeType("D", n)
            if key == (False, 2, 0):
                return SaddleFreeType("E", n)
    raise UnclassifiableNoSaddle(f"no saddle-free normal form for {C.name} with counts {(md.c0, md.c1, md.c2)}")


def count_level_components(S: TriSurface, f: ScalarField, level: Fraction) -> int:
    """Number of components of ``f^-1(level)`` for a level that is no vertex value.

    Works directly with the true values (no tie-breaking) and is meant as an
    independent cross-check of the sweep.
    """
    level = Fraction(level)
    if f.is_circle:
        level %= 1
    vals = f.values
    if level in set(vals):
        raise ValueError("level must avoid vertex values")

    def crosses(u, w):
        a, b = vals[u], vals[w]
        if f.is_circle:
            d = (b - a) % 1
            if d > Fraction(1, 2):
                a, d = b, 1 - d
            return 0 < (level - a) % 1 < d
        return min(a, b) < level < max(a, b)

    crossing = {e for e in S.edges if crosses(*e)}
    parent = {e: e for e in crossing}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c in S.triangles:
        hit = [e for e in (edge_key(a, b), edge_key(b, c), edge_key(c, a)) if e in crossing]
        if len(hit) == 2:
            parent[find(hit[0])] = find(hit[1])
    return len({find(e) for e in crossing})
