"""First homology of a punctured surface, level curves, and Dehn twist actions.

Model
-----
Removing every vertex from the surface leaves a space that retracts onto the
dual graph: one node per triangle, one dual edge per interior mesh edge. Its
cycle space is free; putting back an unpunctured interior vertex kills the
small loop around it (its *star cycle*). Hence

    H_1(M minus punctures) = cycle space of the dual graph / star cycles.

A cycle is recorded by its coefficients on the dual edges outside a fixed
spanning tree of the dual graph. The quotient is computed with the Smith
normal form (or row reduction over GF(2) for the mod-2 variant).

Curves are :class:`DualCurve` objects: the cyclic list of mesh edges they
cross, the crossing positions, and the triangle between two consecutive
crossings. Within a triangle a curve is the straight chord between its
crossing points, so two curves meet there iff their endpoints interleave
around the triangle boundary.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from ._intlinalg import rank_gf2, rank_q, rref_gf2, smith_normal_form
from .errors import DimensionMismatch, HomologyError, NonOrientableUnsupported, NotInternal
from .plmorse import MorseData, ScalarField, precedes
from .reeb import ReebGraph
from .surface import Edge, TriSurface, edge_key, oriented_triangles


@dataclass(frozen=True)
class DualCurve:
    """A closed curve transverse to the mesh edges and avoiding all vertices.

    ``crossings[k]`` is ``(edge, position)`` with the position measured along
    the edge from its smaller vertex id, strictly inside ``(0, 1)``.
    ``triangles[k]`` is the triangle entered through crossing ``k`` and left
    through crossing ``k + 1`` (indices cyclic).
    """

    crossings: tuple[tuple[Edge, Fraction], ...]
    triangles: tuple[int, ...]

    def __len__(self):
        return len(self.crossings)

    def reversed(self) -> "DualCurve":
        n = len(self.crossings)
        cr = tuple(self.crossings[(-k) % n] for k in range(n))
        tri = tuple(self.triangles[(-k - 1) % n] for k in range(n))
        return DualCurve(cr, tri)

    def segments(self):
        """Yield ``(triangle, entry crossing, exit crossing)``."""
        n = len(self.crossings)
        for k in range(n):
            yield self.triangles[k], self.crossings[k], self.crossings[(k + 1) % n]


def _dual_edge_ends(S: TriSurface, e: Edge) -> tuple[int, int]:
    t0, t1 = S.edge_triangles[e]
    return (t0, t1) if t0 < t1 else (t1, t0)


def curve_chain(S: TriSurface, c: DualCurve) -> dict[Edge, int]:
    """Signed dual edge chain of a curve; dual edges run from the smaller to the larger triangle."""
    chain: dict[Edge, int] = defaultdict(int)
    n = len(c)
    for k in range(n):
        e = c.crossings[k][0]
        came_from = c.triangles[(k - 1) % n]
        lo, hi = _dual_edge_ends(S, e)
        if {came_from, c.triangles[k]} != {lo, hi}:
            raise HomologyError(f"curve does not cross edge {e} between its triangles")
        chain[e] += 1 if came_from == lo else -1
    return {e: x for e, x in chain.items() if x}


# --------------------------------------------------------------------------
# intersection numbers


def _param(tri: tuple[int, int, int], crossing) -> Fraction:
    """Position of a crossing on the boundary of an oriented triangle, in ``[0, 3)``."""
    (u, w), pos = crossing
    a, b, c = tri
    for k, (x, y) in enumerate(((a, b), (b, c), (c, a))):
        if {x, y} == {u, w}:
            along = pos if x == min(u, w) else 1 - pos
            return k + along
    raise HomologyError(f"edge {(u, w)} is not a side of triangle {tri}")


def _in_arc(q, p1, p2) -> bool:
    return q != p1 and (q - p1) % 3 < (p2 - p1) % 3


def _segment_sign(tri, seg_a, seg_b) -> int:
    p1, p2 = _param(tri, seg_a[0]), _param(tri, seg_a[1])
    q1, q2 = _param(tri, seg_b[0]), _param(tri, seg_b[1])
    if len({p1, p2, q1, q2}) != 4:
        raise HomologyError("curves share a crossing point; choose distinct positions")
    a, b = _in_arc(q1, p1, p2), _in_arc(q2, p1, p2)
    if a and not b:
        return 1
    if b and not a:
        return -1
    return 0


def intersection(S: TriSurface, A: DualCurve, B: DualCurve, orientation=None, modulus: int = 0) -> int:
    """Algebraic intersection number of two curves (or their crossing count mod 2).

    ``orientation`` is the coherently oriented triangle list; it defaults to
    :func:`oriented_triangles` and is only needed when ``modulus == 0``.
    """
    if modulus == 0 and orientation is None:
        orientation = oriented_triangles(S)
        if orientation is None:
            raise NonOrientableUnsupported("signed intersections need an orientable surface")
    tris = orientation if orientation is not None else S.triangles
    by_tri = defaultdict(list)
    for t, p, q in B.segments():
        by_tri[t].append((p, q))
    total = 0
    for t, p, q in A.segments():
        for seg in by_tri.get(t, ()):
            total += _segment_sign(tris[t], (p, q), seg)
    return total % 2 if modulus == 2 else total


# --------------------------------------------------------------------------
# homology basis


@dataclass(eq=False)
class HomologyBasis:
    """Free generators of ``H_1(M minus punctures)`` (mod 2 when ``modulus == 2``).

    Attributes
    ----------
    coords : list of Edge
        Dual edges outside the spanning tree; a cycle is a vector indexed by them.
    rank : int
        Rank of the free part.
    torsion : list of int
        Invariant factors greater than one (integral case only).
    """

    S: TriSurface
    punctures: frozenset[int]
    modulus: int
    coords: list[Edge]
    tree_parent: dict[int, Optional[tuple[int, Edge]]] = field(repr=False)
    rank: int = 0
    torsion: list[int] = field(default_factory=list)
    _V: list = field(default=None, repr=False)
    _Vi: list = field(default=None, repr=False)
    _r: int = 0
    _rref: list = field(default=None, repr=False)
    _pivots: list = field(default=None, repr=False)

    # -- coordinates ------------------------------------------------------
    def vector(self, chain: dict[Edge, int]) -> list[int]:
        return [chain.get(e, 0) for e in self.coords]

    def project(self, x: Sequence[int]) -> list[int]:
        """Class of a cycle given by its coordinate vector."""
        if self.modulus == 2:
            x = [v & 1 for v in x]
            for row, p in zip(self._rref, self._pivots):
                if x[p]:
                    x = [a ^ b for a, b in zip(x, row)]
            piv = set(self._pivots)
            return [x[j] for j in range(len(x)) if j not in piv]
        n = len(self.coords)
        y = [sum(x[i] * self._V[i][j] for i in range(n)) for j in range(n)]
        return y[self._r:]

    def curve_class(self, c: DualCurve) -> list[int]:
        return self.project(self.vector(curve_chain(self.S, c)))

    def generator(self, k: int) -> list[int]:
        """Coordinate vector of a cycle representing the ``k``-th free generator."""
        if self.modulus == 2:
            free = [j for j in range(len(self.coords)) if j not in set(self._pivots)]
            return [int(j == free[k]) for j in range(len(self.coords))]
        return list(self._Vi[self._r + k])

    # -- representatives --------------------------------------------------
    def _ancestors(self, t: int) -> tuple[list[int], list[Edge]]:
        chain, edges = [t], []
        while self.tree_parent[t] is not None:
            t, e = self.tree_parent[t]
            chain.append(t)
            edges.append(e)
        return chain, edges

    def fundamental_curve(self, i: int, avoid: Optional[dict[Edge, set]] = None) -> DualCurve:
        """The loop closing the ``i``-th non-tree dual edge through the tree.

        Crossing positions are chosen away from the positions listed in
        ``avoid`` so that intersections with given curves are transverse.
        """
        e = self.coords[i]
        lo, hi = _dual_edge_ends(self.S, e)
        up, up_edges = self._ancestors(hi)
        down, down_edges = self._ancestors(lo)
        depth = {t: k for k, t in enumerate(down)}
        meet = next(k for k, t in enumerate(up) if t in depth)
        d = depth[up[meet]]
        # cross e into hi, climb to the common ancestor, descend to lo
        tris = up[: meet + 1] + down[:d][::-1]
        edges = [e] + up_edges[:meet] + down_edges[:d][::-1]
        crossings = tuple((x, _free_position(x, avoid)) for x in edges)
        return DualCurve(crossings, tuple(tris))

    def generator_pairings(self, gamma: DualCurve, orientation=None) -> list[int]:
        """``<x_k, gamma>`` for every free generator ``x_k``."""
        avoid = defaultdict(set)
        for e, p in gamma.crossings:
            avoid[e].add(p)
        fund = [
            intersection(self.S, self.fundamental_curve(i, avoid), gamma, orientation, self.modulus)
            for i in range(len(self.coords))
        ]
        out = []
        for k in range(self.rank):
            g = self.generator(k)
            v = sum(a * b for a, b in zip(g, fund))
            out.append(v % 2 if self.modulus == 2 else v)
        return out


def _free_position(edge, avoid) -> Fraction:
    taken = sorted(set(avoid.get(edge, ())) | {Fraction(0), Fraction(1)}) if avoid else [Fraction(0), Fraction(1)]
    best = max(range(len(taken) - 1), key=lambda i: taken[i + 1] - taken[i])
    return (taken[best] + taken[best + 1]) / 2


def h1_basis(S: TriSurface, punctures=(), modulus: int = 0) -> HomologyBasis:
    """Free generators of ``H_1(S minus punctures)`` with coefficients in Z (or GF(2))."""
    punctures = frozenset(punctures)
    for v in punctures:
        if S.is_boundary_vertex(v):
            raise HomologyError(f"puncture {v} lies on the boundary")
    if modulus not in (0, 2):
        raise ValueError("modulus must be 0 or 2")

    adj = defaultdict(list)
    for e in S.interior_edges:
        a, b = S.edge_triangles[e]
        adj[a].append((b, e))
        adj[b].append((a, e))
    parent: dict[int, Optional[tuple[int, Edge]]] = {0: None}
    tree_edges = set()
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for s, e in sorted(adj[t], key=lambda x: x[1]):
            if s not in parent:
                parent[s] = (t, e)
                tree_edges.add(e)
                queue.append(s)
    coords = [e for e in S.interior_edges if e not in tree_edges]
    HB = HomologyBasis(S, punctures, modulus, coords, parent)

    relations = []
    for v in S.interior_vertices():
        if v not in punctures:
            relations.append(HB.vector(star_chain(S, v)))
    n = len(coords)
    if modulus == 2:
        rows, pivots = rref_gf2(relations, n)
        HB._rref, HB._pivots = rows, pivots
        HB.rank = n - len(pivots)
        return HB
    if relations and n:
        U, D, V, Vi = smith_normal_form(relations)
        diag = [D[i][i] for i in range(min(len(D), n)) if D[i][i] != 0]
    else:
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        Vi = [row[:] for row in V]
        diag = []
    HB._V, HB._Vi, HB._r = V, Vi, len(diag)
    HB.rank = n - len(diag)
    HB.torsion = [d for d in diag if d > 1]
    return HB


def star_chain(S: TriSurface, v: int) -> dict[Edge, int]:
    """The dual loop around interior vertex ``v``, following its link order."""
    link = S.links[v]
    tris_of = {}
    for i, t in enumerate(S.triangles):
        if v in t:
            a, b = (w for w in t if w != v)
            tris_of[frozenset((a, b))] = i
    k = len(link)
    chain = {}
    for i in range(k):
        prev_t = tris_of[frozenset((link[i - 1], link[i]))]
        e = edge_key(v, link[i])
        lo, _ = _dual_edge_ends(S, e)
        chain[e] = 1 if prev_t == lo else -1
    return chain


def expected_rank(S: TriSurface, punctures) -> int:
    """Betti number of ``S minus punctures`` from the Euler characteristic (integral case)."""
    from .surface import classify_surface

    C = classify_surface(S)
    p = len(punctures)
    if p == 0 and C.boundary_count == 0:
        return 2 - C.euler_characteristic if C.orientable else 1 - C.euler_characteristic
    return 1 - C.euler_characteristic + p


# --------------------------------------------------------------------------
# level curves


def _sweep_t(G: ReebGraph, f: ScalarField, v: int) -> Fraction:
    return G.sweep_coordinate(f.values[v])


def crossing_position(S: TriSurface, f: ScalarField, G: ReebGraph, e: Edge, level: Fraction) -> Fraction:
    """Where the level ``level`` (a sweep coordinate) meets edge ``e``, from its smaller end."""
    u, w = e
    lo, hi = (u, w) if precedes(S, f, u, w) else (w, u)
    tl, th = _sweep_t(G, f, lo), _sweep_t(G, f, hi)
    s = level
    if f.is_circle:
        if th <= tl:
            th += 1
        if s < tl:
            s += 1
    if not tl < s < th:
        raise HomologyError(f"level {level} does not cross edge {e}")
    pos = (s - tl) / (th - tl)
    return pos if lo == u else 1 - pos


def trace_contour(S: TriSurface, f: ScalarField, G: ReebGraph, edges, level: Fraction) -> DualCurve:
    """Order the crossed edges of a regular level component into a closed curve."""
    edges = set(edges)
    start = min(edges)
    crossings, tris = [], []
    e = start
    t = S.edge_triangles[start][0]
    while True:
        crossings.append((e, crossing_position(S, f, G, e, level)))
        tris.append(t)
        a, b, c = S.triangles[t]
        nxt = [x for x in (edge_key(a, b), edge_key(b, c), edge_key(c, a)) if x != e and x in edges]
        if len(nxt) != 1:
            raise HomologyError(f"contour is not a simple curve in triangle {t}")
        e = nxt[0]
        if e == start:
            break
        t0, t1 = S.edge_triangles[e] if len(S.edge_triangles[e]) == 2 else (None, None)
        t = t1 if t0 == t else t0
        if t is None:
            raise HomologyError("contour reaches the boundary")
    if len(crossings) != len(edges):
        raise HomologyError("contour edge set is not a single curve")
    return DualCurve(tuple(crossings), tuple(tris))


def level_curve(S: TriSurface, f: ScalarField, G: ReebGraph, edge: int) -> DualCurve:
    """A regular level component inside Reeb edge ``edge``."""
    e = G.edges[edge]
    if not e.is_internal:
        raise NotInternal(f"edge {edge} is external")
    if e.contour is None:
        raise HomologyError(f"edge {edge} carries no contour sample")
    return trace_contour(S, f, G, e.contour.edges, e.contour.level)


def level_cycle(S: TriSurface, f: ScalarField, G: ReebGraph, edge: int, basis: Optional[HomologyBasis] = None,
                punctures=None) -> list[int]:
    """Class of the level curve of an internal edge in ``H_1(M minus critical points)``."""
    if basis is None:
        if punctures is None:
            from .plmorse import validate_morse

            punctures = validate_morse(S, f).critical_vertices
        basis = h1_basis(S, punctures)
    return basis.curve_class(level_curve(S, f, G, edge))


# --------------------------------------------------------------------------
# twists


@dataclass(frozen=True)
class TwistSystem:
    """Internal level curves with their classes and pairings.

    ``classes[i]`` are the coordinates of ``gamma_i``; ``pairings[i][k]`` is
    ``<x_k, gamma_i>`` for the ``k``-th free generator ``x_k``.
    """

    rank: int
    modulus: int
    edges: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    pairings: tuple[tuple[int, ...], ...]
    curve_intersections: tuple[tuple[int, ...], ...] = ()
    orientable: bool = True

    @property
    def l(self) -> int:
        return len(self.classes)

    def duplicated(self, i: int) -> "TwistSystem":
        return replace(
            self,
            edges=self.edges + (self.edges[i],),
            classes=self.classes + (self.classes[i],),
            pairings=self.pairings + (self.pairings[i],),
            curve_intersections=(),
        )

    def pairing(self, x: Sequence[int], i: int) -> int:
        v = sum(a * b for a, b in zip(x, self.pairings[i]))
        return v % 2 if self.modulus == 2 else v


def twist_system(S: TriSurface, f: ScalarField, G: ReebGraph, md: MorseData, modulus: Optional[int] = None) -> TwistSystem:
    """Classes and pairings of the level curves of all internal edges of ``G``.

    ``modulus`` defaults to 0 on orientable surfaces and 2 otherwise.
    """
    orientation = oriented_triangles(S)
    if modulus is None:
        modulus = 0 if orientation is not None else 2
    if modulus == 0 and orientation is None:
        raise NonOrientableUnsupported("integral twist actions need an orientable surface")
    basis = h1_basis(S, md.critical_vertices, modulus)
    edges = tuple(G.internal_edges)
    curves = [level_curve(S, f, G, j) for j in edges]
    classes = tuple(tuple(basis.curve_class(c)) for c in curves)
    pairings = tuple(tuple(basis.generator_pairings(c, orientation)) for c in curves)
    inter = tuple(
        tuple(intersection(S, a, b, orientation, modulus) if i != j else 0 for j, b in enumerate(curves))
        for i, a in enumerate(curves)
    )
    return TwistSystem(basis.rank, modulus, edges, classes, pairings, inter, orientation is not None)


def twist_action(T: TwistSystem, m: Sequence[int], x: Sequence[int]) -> list[int]:
    """``x + sum_i m_i <x, gamma_i> gamma_i``."""
    if len(m) != T.l:
        raise DimensionMismatch(f"{len(m)} exponents for {T.l} twists")
    if len(x) != T.rank:
        raise DimensionMismatch(f"class of length {len(x)} in a rank {T.rank} group")
    out = list(x)
    for i, mi in enumerate(m):
        if mi:
            c = mi * T.pairing(x, i)
            out = [a + c * g for a, g in zip(out, T.classes[i])]
    return [v % 2 for v in out] if T.modulus == 2 else out


def action_matrix(T: TwistSystem) -> list[list[int]]:
    """Column ``i`` is ``gamma_i (x) <., gamma_i>`` flattened: the linear part of twist ``i``."""
    cols = []
    for i in range(T.l):
        cols.append([g * a for g in T.classes[i] for a in T.pairings[i]])
    n = T.rank * T.rank
    return [[cols[i][r] for i in range(T.l)] for r in range(n)]


def twists_independent(T: TwistSystem) -> bool:
    """Whether ``m -> action(m)`` is injective on ``Z^l``.

    The action of ``m`` is ``x -> x + M(m) x`` with ``M`` linear in ``m``, so
    injectivity is full column rank of :func:`action_matrix`. In the mod-2
    variant only the reduction is tested, which is a weaker statement.
    """
    if T.modulus == 0 and not T.orientable:
        raise NonOrientableUnsupported("signed intersection is undefined on a non-orientable surface")
    if T.l == 0:
        return True
    M = action_matrix(T)
    if T.modulus == 2:
        return rank_gf2(M, T.l) == T.l
    return rank_q(M) == T.l


def twist_curve(S: TriSurface, x: DualCurve, gamma: DualCurve, orientation=None) -> DualCurve:
    """Image of ``x`` under a left-handed Dehn twist along ``gamma``.

    At every crossing, ``x`` turns left onto ``gamma``, runs once around it
    and continues along its own path.
    """
    if orientation is None:
        orientation = oriented_triangles(S)
        if orientation is None:
            raise NonOrientableUnsupported("twist direction needs an orientation")
    where = {t: j for j, t in enumerate(gamma.triangles)}
    n = len(gamma)
    crossings, tris = [], []
    for k, (t, p, q) in enumerate(x.segments()):
        crossings.append(x.crossings[k])
        tris.append(t)
        if t not in where:
            continue
        j = where[t]
        q1, q2 = gamma.crossings[j], gamma.crossings[(j + 1) % n]
        tri = orientation[t]
        sign = _segment_sign(tri, (p, q), (q1, q2))
        if sign == 0:
            continue
        p1, p2 = _param(tri, p), _param(tri, q)
        forward = _in_arc(_param(tri, q2), p2, p1)
        if forward:
            order = [(j + 1 + i) % n for i in range(n)]
            after = [gamma.triangles[i] for i in order]
        else:
            order = [(j - i) % n for i in range(n)]
            after = [gamma.triangles[(i - 1) % n] for i in order]
        for i, t_after in zip(order, after):
            crossings.append(gamma.crossings[i])
            tris.append(t_after)
    return DualCurve(tuple(crossings), tuple(tris))
