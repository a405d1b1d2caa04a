"""Automorphisms of Kronrod-Reeb graphs and the subgraph carrying their homology.

An automorphism is a permutation of nodes and of edges that respects
incidence, node kinds and levels. Since levels are preserved, so is the
ascending direction of every edge, and with it the span of the edge.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, Optional

from .reeb import NodeKind, ReebGraph


@dataclass(frozen=True)
class GraphAutomorphism:
    """``nodes[i]`` is the image of node ``i``; ``edges[j]`` the image of edge ``j``."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...]

    @classmethod
    def identity(cls, G: ReebGraph) -> "GraphAutomorphism":
        return cls(tuple(range(len(G.nodes))), tuple(range(len(G.edges))))

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.nodes)) and all(i == x for i, x in enumerate(self.edges))

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self`` after ``other``."""
        return GraphAutomorphism(
            tuple(self.nodes[x] for x in other.nodes),
            tuple(self.edges[x] for x in other.edges),
        )

    def inverse(self) -> "GraphAutomorphism":
        nodes = [0] * len(self.nodes)
        edges = [0] * len(self.edges)
        for i, x in enumerate(self.nodes):
            nodes[x] = i
        for i, x in enumerate(self.edges):
            edges[x] = i
        return GraphAutomorphism(tuple(nodes), tuple(edges))


def is_automorphism(G: ReebGraph, theta: GraphAutomorphism) -> bool:
    if sorted(theta.nodes) != list(range(len(G.nodes))) or sorted(theta.edges) != list(range(len(G.edges))):
        return False
    for i, n in enumerate(G.nodes):
        m = G.nodes[theta.nodes[i]]
        if (n.kind, n.level) != (m.kind, m.level):
            return False
    for j, e in enumerate(G.edges):
        d = G.edges[theta.edges[j]]
        if (theta.nodes[e.tail], theta.nodes[e.head], e.span) != (d.tail, d.head, d.span):
            return False
    return True


def _node_signature(G: ReebGraph, n: int):
    node = G.nodes[n]
    out = sorted(e.span for e in G.edges if e.tail == n)
    inc = sorted(e.span for e in G.edges if e.head == n)
    return (node.kind.value, node.level, tuple(out), tuple(inc))


def _parallel_groups(G: ReebGraph) -> dict[tuple, list[int]]:
    groups: dict[tuple, list[int]] = defaultdict(list)
    for j, e in enumerate(G.edges):
        groups[(e.tail, e.head, e.span)].append(j)
    return groups


def node_automorphisms(G: ReebGraph) -> Iterator[tuple[int, ...]]:
    """Node permutations extendable to automorphisms, by refined backtracking."""
    n = len(G.nodes)
    sig = [_node_signature(G, i) for i in range(n)]
    between: dict[tuple[int, int], Counter] = defaultdict(Counter)
    for e in G.edges:
        between[(e.tail, e.head)][e.span] += 1
    # constrained nodes (small classes, high degree) are placed first
    class_size = Counter(sig)
    order = sorted(range(n), key=lambda i: (class_size[sig[i]], -G.degree(i), i))
    image: dict[int, int] = {}
    used: set[int] = set()
    empty = Counter()

    def consistent(u, x):
        for w, y in list(image.items()) + [(u, x)]:
            if between.get((u, w), empty) != between.get((x, y), empty):
                return False
            if between.get((w, u), empty) != between.get((y, x), empty):
                return False
        return True

    def extend(k):
        if k == n:
            yield tuple(image[i] for i in range(n))
            return
        u = order[k]
        for x in range(n):
            if x in used or sig[x] != sig[u]:
                continue
            if not consistent(u, x):
                continue
            image[u] = x
            used.add(x)
            yield from extend(k + 1)
            del image[u]
            used.discard(x)

    yield from extend(0)


def automorphism_group(G: ReebGraph) -> list[GraphAutomorphism]:
    """Every automorphism of ``G``; the identity comes first."""
    groups = _parallel_groups(G)
    keys = sorted(groups)
    out = []
    for node_map in node_automorphisms(G):
        choices = []
        for key in keys:
            src = groups[key]
            dst = groups[(node_map[key[0]], node_map[key[1]], key[2])]
            choices.append([(src, p) for p in permutations(dst)])
        for combo in product(*choices):
            edges = [0] * len(G.edges)
            for src, dst in combo:
                for a, b in zip(src, dst):
                    edges[a] = b
            out.append(GraphAutomorphism(node_map, tuple(edges)))
    out.sort(key=lambda t: (not t.is_identity, t.nodes, t.edges))
    return out


def order_bound(G: ReebGraph) -> int:
    """A multiple of ``|Aut(G)|``: node classes by (kind, level) times parallel edge groups."""
    classes = Counter((n.kind, n.level) for n in G.nodes)
    bound = 1
    for size in classes.values():
        bound *= math.factorial(size)
    for group in _parallel_groups(G).values():
        bound *= math.factorial(len(group))
    return bound


# --------------------------------------------------------------------------
# cycles


def spanning_forest(G: ReebGraph) -> tuple[list[int], list[int]]:
    """Tree edges and non-tree edges of a BFS spanning forest, in edge order."""
    adj = defaultdict(list)
    for j, e in enumerate(G.edges):
        adj[e.tail].append((j, e.head))
        adj[e.head].append((j, e.tail))
    seen = set()
    tree = []
    for root in range(len(G.nodes)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for j, w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    tree.append(j)
                    queue.append(w)
    tree_set = set(tree)
    return sorted(tree), [j for j in range(len(G.edges)) if j not in tree_set]


def cycle_basis(G: ReebGraph) -> list[dict[int, int]]:
    """Fundamental cycles as edge -> coefficient maps (edges oriented tail to head)."""
    tree, cotree = spanning_forest(G)
    adj = defaultdict(list)
    for j in tree:
        e = G.edges[j]
        adj[e.tail].append((j, e.head, 1))
        adj[e.head].append((j, e.tail, -1))

    def tree_path(a, b):
        # signed edge chain from a to b inside the tree
        prev = {a: None}
        queue = [a]
        while queue:
            u = queue.pop(0)
            for j, w, s in adj[u]:
                if w not in prev:
                    prev[w] = (u, j, s)
                    queue.append(w)
        chain = defaultdict(int)
        x = b
        while prev[x] is not None:
            u, j, s = prev[x]
            chain[j] += s
            x = u
        return chain

    basis = []
    for j in cotree:
        e = G.edges[j]
        z = tree_path(e.head, e.tail)
        z[j] += 1
        basis.append({k: v for k, v in z.items() if v})
    return basis


def acts_trivially_on_h1(G: ReebGraph, theta: GraphAutomorphism) -> bool:
    for z in cycle_basis(G):
        image = {theta.edges[j]: c for j, c in z.items()}
        if image != z:
            return False
    return True


def aut_h1_boundary(G: ReebGraph, auts: Optional[list[GraphAutomorphism]] = None) -> list[GraphAutomorphism]:
    """Automorphisms fixing every boundary node and acting trivially on ``H_1(G)``."""
    if auts is None:
        auts = automorphism_group(G)
    boundary = G.nodes_of_kind(NodeKind.BOUNDARY)
    return [
        t for t in auts
        if all(t.nodes[b] == b for b in boundary) and acts_trivially_on_h1(G, t)
    ]


def bridges(G: ReebGraph) -> set[int]:
    """Edges whose removal disconnects their endpoints (loops never are)."""
    out = set()
    for j, e in enumerate(G.edges):
        if e.is_loop:
            continue
        adj = defaultdict(list)
        for k, d in enumerate(G.edges):
            if k != j:
                adj[d.tail].append(d.head)
                adj[d.head].append(d.tail)
        seen = {e.tail}
        stack = [e.tail]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if e.head not in seen:
            out.add(j)
    return out


def cycle_union_components(G: ReebGraph) -> list[frozenset[int]]:
    """Edge sets of the connected components of the union of all simple cycles."""
    cyc = [j for j in range(len(G.edges)) if j not in bridges(G)]
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in cyc:
        e = G.edges[j]
        parent[find(e.tail)] = find(e.head)
    comps = defaultdict(set)
    for j in cyc:
        comps[find(G.edges[j].tail)].add(j)
    return [frozenset(c) for c in comps.values()]


# --------------------------------------------------------------------------
# the H1-subgraph


@dataclass(frozen=True)
class H1Subgraph:
    nodes: frozenset[int]
    edges: frozenset[int]


def h1_subgraph(G: ReebGraph, order: Optional[list[int]] = None) -> H1Subgraph:
    """Prune non-boundary nodes of degree at most one until none is left.

    What remains is the smallest connected subgraph containing every cycle
    and every boundary node. When ``G`` is a tree without boundary nodes the
    result is empty. ``order`` optionally fixes the node priority in which
    leaves are removed; the result does not depend on it.
    """
    nodes = set(range(len(G.nodes)))
    edges = set(range(len(G.edges)))
    rank = {n: i for i, n in enumerate(order)} if order is not None else {}
    protected = set(G.nodes_of_kind(NodeKind.BOUNDARY))
    while True:
        deg = Counter()
        for j in edges:
            deg[G.edges[j].tail] += 1
            deg[G.edges[j].head] += 1
        leaves = [n for n in nodes if deg[n] <= 1 and n not in protected]
        if not leaves:
            break
        n = min(leaves, key=lambda x: (rank.get(x, len(rank)), x))
        nodes.discard(n)
        edges = {j for j in edges if n not in (G.edges[j].tail, G.edges[j].head)}
    return H1Subgraph(frozenset(nodes), frozenset(edges))


def fixes_h1_subgraph_pointwise(theta: GraphAutomorphism, H: H1Subgraph) -> bool:
    return all(theta.nodes[n] == n for n in H.nodes) and all(theta.edges[j] == j for j in H.edges)
