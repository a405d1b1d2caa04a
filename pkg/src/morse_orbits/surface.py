"""Combinatorial compact surfaces: validation, Euler characteristic, classification.

A surface is given by its triangles only; vertex coordinates never enter any
computation here.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    BadLink,
    DegenerateTriangle,
    Disconnected,
    DuplicateTriangle,
    EmptyMesh,
    IsolatedVertex,
    NonManifoldEdge,
)

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class TriSurface:
    """A validated triangulated surface.

    Build instances with :func:`validate_surface`; the derived tables below
    are filled there and must not be mutated afterwards.

    Attributes
    ----------
    vertex_count : int
        Vertices are ``0 .. vertex_count - 1``.
    triangles : tuple of (int, int, int)
        Triangles in input order and input orientation.
    edge_triangles : dict
        Sorted edge -> indices of the one or two triangles containing it.
    links : tuple
        Per vertex, its link as an ordered vertex sequence. For interior
        vertices the sequence is cyclic; for boundary vertices it is a path
        whose two ends lie on the boundary.
    boundary_cycles : tuple
        Each boundary component as a cyclic vertex sequence.
    """

    vertex_count: int
    triangles: tuple[tuple[int, int, int], ...]
    edge_triangles: dict[Edge, tuple[int, ...]] = field(repr=False)
    links: tuple[tuple[int, ...], ...] = field(repr=False)
    boundary_cycles: tuple[tuple[int, ...], ...] = field(repr=False)
    boundary_cycle_of: tuple[Optional[int], ...] = field(repr=False)

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.edge_triangles)

    @property
    def boundary_edges(self) -> list[Edge]:
        return sorted(e for e, ts in self.edge_triangles.items() if len(ts) == 1)

    @property
    def interior_edges(self) -> list[Edge]:
        return sorted(e for e, ts in self.edge_triangles.items() if len(ts) == 2)

    def is_boundary_vertex(self, v: int) -> bool:
        return self.boundary_cycle_of[v] is not None

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.vertex_count) if self.boundary_cycle_of[v] is None]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.links[v]

    def __len__(self) -> int:
        return len(self.triangles)


@dataclass(frozen=True)
class SurfaceClass:
    orientable: bool
    genus: int
    boundary_count: int
    euler_characteristic: int

    @property
    def name(self) -> str:
        """Short human-readable name, e.g. ``"T2"`` or ``"N3 with 2 holes"``."""
        g, b = self.genus, self.boundary_count
        if self.orientable:
            base = {0: "S2", 1: "T2"}.get(g, f"genus-{g} surface")
            special = {(0, 1): "D2", (0, 2): "annulus"}
        else:
            base = {1: "RP2", 2: "Klein bottle"}.get(g, f"N{g}")
            special = {(1, 1): "Moebius band"}
        if (g, b) in special:
            return special[(g, b)]
        if b == 0:
            return base
        return f"{base} with {b} hole{'s' if b > 1 else ''}"


def validate_surface(raw_triangles: Iterable[Sequence[int]], vertex_count: Optional[int] = None) -> TriSurface:
    """Check a triangle soup and return the derived surface.

    Parameters
    ----------
    raw_triangles : iterable of vertex triples
        Vertex ids must be non-negative integers.
    vertex_count : int, optional
        Number of vertices. Defaults to ``max id + 1``. Every vertex must be
        used by some triangle.

    Raises
    ------
    EmptyMesh, DegenerateTriangle, DuplicateTriangle, IsolatedVertex,
    NonManifoldEdge, BadLink, Disconnected
    """
    triangles = [tuple(int(v) for v in t) for t in raw_triangles]
    if not triangles:
        raise EmptyMesh("no triangles given")
    seen: set[frozenset[int]] = set()
    for i, t in enumerate(triangles):
        if len(t) != 3 or len(set(t)) != 3 or min(t) < 0:
            raise DegenerateTriangle(f"triangle {i} {t} is not a triple of distinct vertex ids")
        key = frozenset(t)
        if key in seen:
            raise DuplicateTriangle(f"triangle {t} listed twice")
        seen.add(key)

    n = max(max(t) for t in triangles) + 1
    if vertex_count is None:
        vertex_count = n
    elif vertex_count < n:
        raise DegenerateTriangle(f"vertex id {n - 1} out of range for {vertex_count} vertices")

    edge_tris: dict[Edge, list[int]] = defaultdict(list)
    vertex_tris: list[list[int]] = [[] for _ in range(vertex_count)]
    for i, (a, b, c) in enumerate(triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_tris[edge_key(u, v)].append(i)
        for v in (a, b, c):
            vertex_tris[v].append(i)

    isolated = [v for v in range(vertex_count) if not vertex_tris[v]]
    if isolated:
        raise IsolatedVertex(f"vertices {isolated[:10]} belong to no triangle")
    for e, ts in edge_tris.items():
        if len(ts) > 2:
            raise NonManifoldEdge(f"edge {e} lies in {len(ts)} triangles")

    boundary_adj: dict[int, list[int]] = defaultdict(list)
    for (u, v), ts in edge_tris.items():
        if len(ts) == 1:
            boundary_adj[u].append(v)
            boundary_adj[v].append(u)

    links = []
    for v in range(vertex_count):
        links.append(_ordered_link(v, [triangles[i] for i in vertex_tris[v]], v in boundary_adj))

    _check_connected(triangles, edge_tris)
    cycles, cycle_of = _boundary_cycles(vertex_count, boundary_adj)

    return TriSurface(
        vertex_count=vertex_count,
        triangles=tuple(triangles),
        edge_triangles={e: tuple(ts) for e, ts in edge_tris.items()},
        links=tuple(links),
        boundary_cycles=cycles,
        boundary_cycle_of=cycle_of,
    )


def _ordered_link(v: int, star: list[tuple[int, int, int]], on_boundary: bool) -> tuple[int, ...]:
    adj: dict[int, list[int]] = defaultdict(list)
    for t in star:
        a, b = (w for w in t if w != v)
        adj[a].append(b)
        adj[b].append(a)
    degrees = {w: len(ns) for w, ns in adj.items()}
    ends = sorted(w for w, d in degrees.items() if d == 1)
    if any(d > 2 for d in degrees.values()):
        raise BadLink(f"link of vertex {v} branches")
    if on_boundary:
        if len(ends) != 2:
            raise BadLink(f"link of boundary vertex {v} is not a single path")
        start = ends[0]
    else:
        if ends:
            raise BadLink(f"link of interior vertex {v} is not a cycle")
        start = min(adj)
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt or nxt[0] == start:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    if len(order) != len(adj):
        raise BadLink(f"link of vertex {v} has {len(adj) - len(order) + 1} components")
    return tuple(order)


def _check_connected(triangles, edge_tris) -> None:
    adjacency: dict[int, list[int]] = defaultdict(list)
    for ts in edge_tris.values():
        if len(ts) == 2:
            adjacency[ts[0]].append(ts[1])
            adjacency[ts[1]].append(ts[0])
    seen = {0}
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for s in adjacency[t]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    if len(seen) != len(triangles):
        raise Disconnected(f"triangle adjacency graph has a component of size {len(seen)} out of {len(triangles)}")


def _boundary_cycles(vertex_count, boundary_adj):
    cycle_of: list[Optional[int]] = [None] * vertex_count
    cycles = []
    for start in sorted(boundary_adj):
        if cycle_of[start] is not None:
            continue
        idx = len(cycles)
        cyc = [start]
        cycle_of[start] = idx
        prev, cur = None, start
        while True:
            a, b = boundary_adj[cur]
            nxt = a if a != prev else b
            if nxt == start:
                break
            cycle_of[nxt] = idx
            cyc.append(nxt)
            prev, cur = cur, nxt
        cycles.append(tuple(cyc))
    return tuple(cycles), tuple(cycle_of)


def boundary_cycle_edges(S: TriSurface) -> list[list[Edge]]:
    """Edges of each boundary cycle; together they partition the boundary edge set."""
    out = []
    for cyc in S.boundary_cycles:
        out.append([edge_key(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))])
    return out


def euler_characteristic(S: TriSurface) -> int:
    return S.vertex_count - len(S.edge_triangles) + len(S.triangles)


def orientation_signs(S: TriSurface, start: int = 0) -> Optional[list[int]]:
    """Propagate a coherent orientation from triangle ``start``.

    Returns one sign per triangle (``+1`` keeps the input vertex order,
    ``-1`` reverses it), or ``None`` when the surface is non-orientable.
    """
    signs: list[int] = [0] * len(S.triangles)
    signs[start] = 1
    queue = deque([start])
    while queue:
        t = queue.popleft()
        a, b, c = S.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            ts = S.edge_triangles[edge_key(u, v)]
            if len(ts) == 1:
                continue
            s = ts[0] if ts[1] == t else ts[1]
            # coherent neighbours traverse the shared edge in opposite directions
            same_dir = _traverses(S.triangles[s], u, v)
            want = -signs[t] if same_dir else signs[t]
            if signs[s] == 0:
                signs[s] = want
                queue.append(s)
            elif signs[s] != want:
                return None
    return signs


def _traverses(tri, u, v) -> bool:
    a, b, c = tri
    return (a, b) == (u, v) or (b, c) == (u, v) or (c, a) == (u, v)


def oriented_triangles(S: TriSurface) -> Optional[list[tuple[int, int, int]]]:
    """Coherently oriented copy of the triangle list, or ``None`` if non-orientable."""
    signs = orientation_signs(S)
    if signs is None:
        return None
    return [t if s > 0 else (t[0], t[2], t[1]) for t, s in zip(S.triangles, signs)]


def classify_surface(S: TriSurface) -> SurfaceClass:
    chi = euler_characteristic(S)
    b = len(S.boundary_cycles)
    orientable = orientation_signs(S) is not None
    if orientable:
        twice_genus = 2 - chi - b
        assert twice_genus >= 0 and twice_genus % 2 == 0, (chi, b)
        genus = twice_genus // 2
    else:
        genus = 2 - chi - b
        assert genus >= 1, (chi, b)
    return SurfaceClass(orientable, genus, b, chi)


def table1_type(C: SurfaceClass) -> int:
    """Row of the k-bar table the surface falls into (1, 2 or 3)."""
    if C.orientable:
        return 1 if (C.genus, C.boundary_count) in {(0, 0), (0, 1), (0, 2), (1, 0)} else 2
    return 1 if C.genus == 1 else 3
