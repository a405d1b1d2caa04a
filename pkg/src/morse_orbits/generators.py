"""Random Kronrod-Reeb graphs built by an event process, without any mesh.

A graph is grown by sweeping a level upwards through a short list of integer
levels. Each event creates one node at the current level:

* ``min`` / ``max``: an extremum opening or closing one arc,
* ``bnd_in`` / ``bnd_out``: a boundary circle opening or closing one arc,
* ``merge`` / ``split``: a saddle joining two arcs into one or the reverse,
* ``twist``: a saddle with one arc in and one arc out, which only occurs on
  non-orientable surfaces.

Arcs only close at a level strictly above their start, so every edge has a
positive span. Because the level list is short, many events share a level,
which produces ties and with them non-trivial automorphisms.

Circle-valued graphs start with some arcs crossing the cut at level 0; at the
end the arcs still open are glued back to them by a permutation. The
:func:`cyclic_cover` of such a period reproduces the Reeb graph of a lifted
function on a cyclic covering surface.

The surface each graph belongs to follows from the counts: with ``t``
twisted saddles and cycle rank ``r`` the surface is orientable of genus ``r``
when ``t = 0`` and non-orientable of genus ``2r + t`` otherwise.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .plmorse import CIRCLE, REAL, MorseData
from .reeb import NodeKind, ReebEdge, ReebGraph, ReebNode, classify_edges
from .surface import SurfaceClass

OPENING = ("min", "bnd_in")
CLOSING = ("max", "bnd_out", "merge")


@dataclass(frozen=True)
class GeneratedGraph:
    graph: ReebGraph
    surface: SurfaceClass
    morse: MorseData
    twisted: int = 0


@dataclass
class _Period:
    """Nodes and arcs of one sweep; arc ends are node ids or ``("cut", i)``."""

    nodes: list[ReebNode] = field(default_factory=list)
    index: list[Optional[int]] = field(default_factory=list)  # Morse index per node, None for boundary
    arcs: list[list] = field(default_factory=list)
    initial: int = 0
    gluing: tuple[int, ...] = ()
    scale: int = 1

    def add_node(self, kind: NodeKind, level: int, index: Optional[int]) -> int:
        n = len(self.nodes)
        self.nodes.append(ReebNode(kind, Fraction(level), (n,)))
        self.index.append(index)
        return n

    def open_arc(self, start) -> int:
        self.arcs.append([start, None])
        return len(self.arcs) - 1

    def start_level(self, a: int) -> Fraction:
        s = self.arcs[a][0]
        return Fraction(0) if isinstance(s, tuple) else self.nodes[s].level


@dataclass(frozen=True)
class Params:
    """Knobs of the event process.

    Attributes
    ----------
    boundary : float
        Probability that an opening or closing event is a boundary circle.
    twist : float
        Probability of a twisted saddle (forces a non-orientable surface).
    births : float
        Probability of an extremum born in the middle of the sweep.
    tie : float
        Probability that the next event stays on the current level.
    """

    boundary: float = 0.25
    twist: float = 0.0
    births: float = 0.15
    tie: float = 0.4


def _event(P: _Period, rng: random.Random, op: str, level: int, open_: list[int]) -> bool:
    eligible = [a for a in open_ if P.start_level(a) < level]
    need = {"max": 1, "bnd_out": 1, "merge": 2, "split": 1, "twist": 1}.get(op, 0)
    if len(eligible) < need:
        return False
    closing = rng.sample(eligible, need)
    if op in ("min", "bnd_in"):
        kind, idx = (NodeKind.EXTREMUM, 0) if op == "min" else (NodeKind.BOUNDARY, None)
    elif op in ("max", "bnd_out"):
        kind, idx = (NodeKind.EXTREMUM, 2) if op == "max" else (NodeKind.BOUNDARY, None)
    else:
        kind, idx = NodeKind.SADDLE, 1
    n = P.add_node(kind, level, idx)
    for a in closing:
        P.arcs[a][1] = n
        open_.remove(a)
    outgoing = {"min": 1, "bnd_in": 1, "merge": 1, "split": 2, "twist": 1}.get(op, 0)
    for _ in range(outgoing):
        open_.append(P.open_arc(n))
    return True


def _grow(P: _Period, rng: random.Random, params: Params, open_: list[int], level: int,
          target: int, budget: int, top: Optional[int] = None) -> int:
    """Run random events until ``target`` arcs are open; returns the last level.

    ``budget`` bounds the number of arcs created; once it is spent only
    events that move the open count towards ``target`` are drawn. With
    ``top`` set, no event happens above that level.
    """
    created = 0
    steps = 0
    while True:
        steps += 1
        if steps > 500:
            raise _Reject
        done = len(open_) == target
        if done and (created >= budget or rng.random() < 0.3):
            return level
        if rng.random() >= params.tie:
            level += 1
        if top is not None and level > top:
            raise _Reject
        if created >= budget:
            if len(open_) > target:
                if target >= 1 or (len(open_) >= 2 and rng.random() < 0.5):
                    op = "merge"
                else:
                    op = "bnd_out" if rng.random() < params.boundary else "max"
            elif len(open_) < target:
                op = "split"
            else:
                continue
        else:
            r = rng.random()
            if r < params.births:
                op = "bnd_in" if rng.random() < params.boundary else "min"
            elif r < params.births + params.twist:
                op = "twist"
            else:
                op = rng.choice(["split", "merge", "max", "merge", "split"])
                if op == "max" and rng.random() < params.boundary:
                    op = "bnd_out"
        before = len(P.arcs)
        if _event(P, rng, op, level, open_):
            created += len(P.arcs) - before


class _Reject(Exception):
    pass


def _resolve(P: _Period, copies: int = 1, codomain: str = REAL) -> ReebGraph:
    """Turn ``copies`` glued copies of a period into a Reeb graph."""
    nn = len(P.nodes)
    scale = Fraction(1, P.scale) if codomain == CIRCLE else Fraction(1)
    initial_arcs = [a for a, arc in enumerate(P.arcs) if isinstance(arc[0], tuple)]
    by_cut = {P.arcs[a][0][1]: a for a in initial_arcs}
    nodes = [
        ReebNode(n.kind, n.level * scale, (c * nn + i,))
        for c in range(copies)
        for i, n in enumerate(P.nodes)
    ]
    edges = []
    for c in range(copies):
        for a, (start, end) in enumerate(P.arcs):
            if isinstance(start, tuple):
                continue
            tail = c * nn + start
            copy, wraps = c, 0
            while isinstance(end, tuple):
                copy = (copy + 1) % copies
                wraps += 1
                end = P.arcs[by_cut[P.gluing[end[1]]]][1]
            head = copy * nn + end
            span = (P.nodes[end].level - P.nodes[start].level) * scale + wraps
            edges.append(ReebEdge(tail, head, span))
    return classify_edges(ReebGraph(tuple(nodes), tuple(edges), codomain, Fraction(0) if codomain == CIRCLE else None))


def _connected(G: ReebGraph) -> bool:
    return G.cycle_rank == len(G.edges) - len(G.nodes) + 1


def _package(P: _Period, G: ReebGraph, copies: int = 1, orientable: Optional[bool] = None) -> GeneratedGraph:
    kinds = Counter()
    for c in range(copies):
        for i in P.index:
            kinds[i] += 1
    c0, c1, c2, b = kinds[0], kinds[1], kinds[2], kinds[None]
    twisted = sum(1 for i, n in enumerate(G.nodes) if n.kind is NodeKind.SADDLE and G.degree(i) == 2)
    chi = c0 - c1 + c2
    r = G.cycle_rank
    if orientable is None:
        orientable = twisted == 0
    if twisted and orientable:
        raise ValueError("twisted saddles need a non-orientable surface")
    genus = r if orientable else 2 * r + twisted
    if genus == 0 and not orientable:
        raise ValueError("a non-orientable surface has positive genus")
    C = SurfaceClass(orientable, genus, b, chi)
    levels = [n.level for n in G.nodes if n.kind in (NodeKind.SADDLE, NodeKind.EXTREMUM)]
    crit = tuple((i, P.index[i % len(P.nodes)]) for i, n in enumerate(G.nodes) if n.kind is not NodeKind.BOUNDARY)
    md = MorseData(crit, c0, c1, c2, is_generic=len(set(levels)) == len(levels), is_simple=True)
    return GeneratedGraph(G, C, md, twisted)


def random_reeb_graph(rng: random.Random, max_edges: int = 12, params: Params = Params(),
                      codomain: str = REAL, attempts: int = 1000) -> GeneratedGraph:
    """A connected random Reeb graph with at most ``max_edges`` edges and at least one saddle."""
    for _ in range(attempts):
        P = _Period()
        try:
            if codomain == REAL:
                open_ = []
                _event(P, rng, "bnd_in" if rng.random() < params.boundary else "min", 0, open_)
                _grow(P, rng, params, open_, 0, 0, rng.randint(1, max_edges))
                G = _resolve(P)
            else:
                P.scale = 8
                k0 = rng.choice([1, 1, 2])
                open_ = [P.open_arc(("cut", i)) for i in range(k0)]
                P.initial = k0
                _grow(P, rng, params, open_, 1, k0, rng.randint(1, max_edges), top=P.scale - 1)
                perm = list(range(k0))
                rng.shuffle(perm)
                for j, a in enumerate(open_):
                    P.arcs[a][1] = ("cut", j)
                P.gluing = tuple(perm)
                if not P.nodes:
                    raise _Reject
                G = _resolve(P, 1, CIRCLE)
        except _Reject:
            continue
        if not _connected(G) or len(G.edges) > max_edges:
            continue
        if not any(n.kind is NodeKind.SADDLE for n in G.nodes):
            continue
        return _package(P, G)
    raise RuntimeError("no graph found; loosen the parameters")


def symmetric_reeb_graph(rng: random.Random, max_edges: int = 12, params: Params = Params(),
                         boundary_root: bool = False, rejoin: bool = False, attempts: int = 1000) -> GeneratedGraph:
    """Two identical branches hanging from one split saddle.

    The branches are grown from the same random state, so swapping them is
    a level-preserving automorphism. With ``rejoin`` their top arcs merge
    again, closing a cycle through the two branches.
    """
    for _ in range(attempts):
        P = _Period()
        try:
            root = P.add_node(NodeKind.BOUNDARY if boundary_root else NodeKind.EXTREMUM, 0, None if boundary_root else 0)
            a0 = P.open_arc(root)
            split_open = [a0]
            _event(P, rng, "split", 1, split_open)
            state = rng.getstate()
            budget = rng.randint(0, max(0, (max_edges - 3) // 2 - 1))
            tips, tops = [], []
            for arc in split_open:
                rng.setstate(state)
                open_ = [arc]
                tops.append(_grow(P, rng, params, open_, 1, 1 if rejoin else 0, budget))
                tips.extend(open_)
            if rejoin:
                level = max(tops) + 1
                n = P.add_node(NodeKind.SADDLE, level, 1)
                for a in tips:
                    P.arcs[a][1] = n
                a = P.open_arc(n)
                m = P.add_node(NodeKind.EXTREMUM, level + 1, 2)
                P.arcs[a][1] = m
        except _Reject:
            continue
        G = _resolve(P)
        if not _connected(G) or len(G.edges) > max_edges:
            continue
        return _package(P, G)
    raise RuntimeError("no symmetric graph found")


def circle_period(events, initial: int, gluing, scale: int) -> _Period:
    """A hand-written circle-valued period.

    ``events`` is a list of ``(op, level, arcs)`` where ``arcs`` lists the
    positions (in the current open list) of the arcs the event closes;
    levels are integers in ``1 .. scale - 1`` and are divided by ``scale``.
    """
    P = _Period(initial=initial, gluing=tuple(gluing), scale=scale)
    open_ = [P.open_arc(("cut", i)) for i in range(initial)]
    for op, level, positions in events:
        closing = [open_[p] for p in positions]
        n = P.add_node(
            {"min": NodeKind.EXTREMUM, "max": NodeKind.EXTREMUM}.get(op, NodeKind.SADDLE),
            level,
            {"min": 0, "max": 2}.get(op, 1),
        )
        for a in closing:
            P.arcs[a][1] = n
            open_.remove(a)
        for _ in range({"min": 1, "merge": 1, "split": 2, "twist": 1}.get(op, 0)):
            open_.append(P.open_arc(n))
    for j, a in enumerate(open_):
        P.arcs[a][1] = ("cut", j)
    return P


def cyclic_cover(P: _Period, copies: int, orientable: Optional[bool] = None) -> GeneratedGraph:
    """Reeb graph of the lift of a circle-valued function to a ``copies``-fold cyclic cover."""
    G = _resolve(P, copies, CIRCLE)
    return _package(P, G, copies, orientable)


def torus_covering_example(copies: int = 2) -> GeneratedGraph:
    """A torus function with one minimum at 1/5 and one saddle at 1/2, lifted to a cover.

    The deck transformation rotates the single cycle of the lifted graph. It
    acts trivially on homology but fixes no point of the cycle.
    """
    # scale 10: the minimum sits at 2/10 = 1/5, the saddle at 5/10 = 1/2
    P = circle_period([("min", 2, []), ("merge", 5, [0, 1])], initial=1, gluing=[0], scale=10)
    return cyclic_cover(P, copies, orientable=True)
