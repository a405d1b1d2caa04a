"""Small triangulated surfaces and scalar fields used by tests, demos and the CLI.

Every constructor returns a validated :class:`TriSurface`. Grid-based meshes
use ``n`` columns around the periodic direction and ``m`` rows; vertex
``(i, j)`` has id ``i * m + j`` unless stated otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import MorseError
from .plmorse import CIRCLE, REAL, MorseData, ScalarField, validate_morse
from .surface import TriSurface, validate_surface


def tetrahedron() -> TriSurface:
    return validate_surface([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])


def csaszar_torus() -> TriSurface:
    """The 7-vertex torus: triangles ``{i, i+1, i+3}`` and ``{i, i+2, i+3}`` mod 7."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 3) % 7, (i + 2) % 7))
    return validate_surface(tris)


def mobius_5() -> TriSurface:
    """The 5-vertex Moebius band: triangles ``{i, i+1, i+3}`` mod 5."""
    return validate_surface([(i, (i + 1) % 5, (i + 3) % 5) for i in range(5)])


def rp2_6() -> TriSurface:
    """The 6-vertex projective plane (half of the icosahedron)."""
    return validate_surface([
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
    ])


def _square(tris, a, b, c, d):
    # a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1)
    tris.append((a, b, c))
    tris.append((a, c, d))


def grid_torus(n: int = 4, m: int = 3) -> TriSurface:
    vid = lambda i, j: (i % n) * m + (j % m)
    tris = []
    for i in range(n):
        for j in range(m):
            _square(tris, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
    return validate_surface(tris)


def klein_grid(n: int = 6, m: int = 3) -> TriSurface:
    """Klein bottle: the torus grid with column ``n`` glued to column 0 by ``j -> -j``."""

    def vid(i, j):
        if i == n:
            return (-j) % m
        return i * m + (j % m)

    tris = []
    for i in range(n):
        for j in range(m):
            _square(tris, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
    return validate_surface(tris)


def mobius_grid(n: int = 5, m: int = 3) -> TriSurface:
    """Moebius band: ``m`` rows, column ``n`` glued to column 0 by ``j -> m-1-j``."""

    def vid(i, j):
        if i == n:
            return m - 1 - j
        return i * m + j

    tris = []
    for i in range(n):
        for j in range(m - 1):
            _square(tris, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
    return validate_surface(tris)


def cylinder(n: int = 5, m: int = 3) -> TriSurface:
    """Annulus with ``m`` rings of ``n`` vertices; ring 0 and ring ``m-1`` are the boundary."""
    vid = lambda i, j: j * n + (i % n)
    tris = []
    for i in range(n):
        for j in range(m - 1):
            _square(tris, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
    return validate_surface(tris)


def polar_disk(n: int = 5, rings: int = 2) -> TriSurface:
    """Disk: centre 0 and ``rings`` rings of ``n`` vertices; the last ring is the rim."""
    vid = lambda r, i: 1 + (r - 1) * n + (i % n)
    tris = [(0, vid(1, i), vid(1, i + 1)) for i in range(n)]
    for r in range(1, rings):
        for i in range(n):
            _square(tris, vid(r, i), vid(r, i + 1), vid(r + 1, i + 1), vid(r + 1, i))
    return validate_surface(tris)


def capped_tube(n: int = 5, m: int = 3) -> TriSurface:
    """Sphere: a tube of ``m`` rings closed by a south pole ``0`` and north pole ``last``."""
    vid = lambda r, i: 1 + r * n + (i % n)
    north = 1 + m * n
    tris = [(0, vid(0, i + 1), vid(0, i)) for i in range(n)]
    for r in range(m - 1):
        for i in range(n):
            _square(tris, vid(r, i), vid(r, i + 1), vid(r + 1, i + 1), vid(r + 1, i))
    tris += [(north, vid(m - 1, i), vid(m - 1, i + 1)) for i in range(n)]
    return validate_surface(tris)


def connected_sum(A: TriSurface, B: TriSurface, ta: int = 0, tb: int = 0) -> TriSurface:
    """Remove triangle ``ta`` of ``A`` and ``tb`` of ``B`` and glue along the two holes."""
    a = A.triangles[ta]
    b = B.triangles[tb]
    offset = A.vertex_count
    relabel = {}
    nxt = offset
    for v in range(B.vertex_count):
        if v in b:
            # reversing the identification keeps the result orientable when both are
            relabel[v] = a[(3 - b.index(v)) % 3]
        else:
            relabel[v] = nxt
            nxt += 1
    tris = [t for i, t in enumerate(A.triangles) if i != ta]
    tris += [tuple(relabel[v] for v in t) for i, t in enumerate(B.triangles) if i != tb]
    return validate_surface(tris)


def genus_two(n: int = 4, m: int = 4) -> TriSurface:
    T = grid_torus(n, m)
    return connected_sum(T, T)


def punctured(S: TriSurface, t: int = 0) -> TriSurface:
    """Remove one triangle, adding a boundary component (the triangle must be far from the boundary)."""
    return validate_surface([tri for i, tri in enumerate(S.triangles) if i != t])


# --------------------------------------------------------------------------
# fields


def field_from(S: TriSurface, fn: Callable[[int], object], codomain: str = REAL) -> ScalarField:
    return ScalarField(codomain, tuple(Fraction(fn(v)) for v in range(S.vertex_count)))


def random_field(S: TriSurface, rng: random.Random, codomain: str = REAL, attempts: int = 200) -> tuple[ScalarField, MorseData]:
    """A random injective Morse field; boundary cycles take the extreme values.

    Interior vertices get a random permutation of ``1..n``; each boundary
    cycle sits at ``0`` or ``n+1`` (below or above every interior value), so
    collars are automatically regular. Circle fields are scaled into a short
    arc when the surface is not a circle fibration; most tests want real
    fields. Rejects fields whose saddles are degenerate.
    """
    interior = S.interior_vertices()
    for _ in range(attempts):
        perm = list(range(1, len(interior) + 1))
        rng.shuffle(perm)
        vals = [Fraction(0)] * S.vertex_count
        for v, x in zip(interior, perm):
            vals[v] = Fraction(x)
        top = Fraction(len(interior) + 1)
        for cyc in S.boundary_cycles:
            level = Fraction(0) if rng.random() < 0.5 else top
            for v in cyc:
                vals[v] = level
        if codomain == CIRCLE:
            vals = [x / (4 * (top + 1)) for x in vals]
        f = ScalarField(codomain, tuple(vals))
        try:
            return f, validate_morse(S, f)
        except MorseError:
            continue
    raise RuntimeError("no admissible random field found")


@dataclass(frozen=True)
class Example:
    name: str
    surface: TriSurface
    field: ScalarField


def canonical_examples() -> dict[str, Example]:
    """The five saddle-free normal forms plus the torus height function."""
    ex = {}
    S = tetrahedron()
    ex["sphere_height"] = Example("sphere_height", S, field_from(S, lambda v: v))
    D = polar_disk(5, 2)
    ex["disk_paraboloid"] = Example("disk_paraboloid", D, field_from(D, lambda v: 0 if v == 0 else (1 if v <= 5 else 2)))
    A = cylinder(5, 3)
    ex["annulus_product"] = Example("annulus_product", A, field_from(A, lambda v: v // 5))
    T = grid_torus(4, 3)
    ex["torus_fibration"] = Example("torus_fibration", T, field_from(T, lambda v: Fraction(v // 3, 4), CIRCLE))
    K = klein_grid(6, 3)
    ex["klein_fibration"] = Example("klein_fibration", K, field_from(K, lambda v: Fraction(2 * (v // 3), 6), CIRCLE))
    C = csaszar_torus()
    ex["torus_height"] = Example("torus_height", C, ScalarField.real(csaszar_height_values()))
    return ex


def special_examples() -> dict[str, Example]:
    """Fields with ties, found by a seeded search over small value ranges.

    * ``torus_nonsimple``: both saddles on one level component; the Reeb
      graph collapses to a path through a single C-node with two witnesses.
    * ``sphere_nonsimple``: c = (3, 3, 2) with two saddles merged.
    * ``sphere_symmetric``: simple, with two minima and two maxima on
      common levels, so the Reeb graph has node-swapping automorphisms.
    """
    C = csaszar_torus()
    T = capped_tube(5, 3)
    T2 = capped_tube(4, 2)
    return {
        "torus_nonsimple": Example("torus_nonsimple", C, ScalarField.real((0, 2, 3, 4, 4, 3, 3))),
        "sphere_nonsimple": Example(
            "sphere_nonsimple", T, ScalarField.real((4, 3, 0, 3, 2, 3, 1, 2, 1, 1, 0, 4, 2, 1, 0, 3, 4))
        ),
        "sphere_symmetric": Example("sphere_symmetric", T2, ScalarField.real((4, 3, 0, 1, 3, 0, 2, 1, 3, 4))),
    }


def csaszar_height_values() -> tuple[int, ...]:
    """First permutation of ``0..6`` (lexicographic) giving critical counts (1, 2, 1)."""
    from itertools import permutations

    S = csaszar_torus()
    for perm in permutations(range(7)):
        md = validate_morse(S, ScalarField.real(perm))
        if (md.c0, md.c1, md.c2) == (1, 2, 1):
            return perm
    raise RuntimeError("unreachable: every torus has such a field")


def surface_zoo() -> dict[str, TriSurface]:
    """One mesh per surface class exercised by the suites."""
    return {
        "sphere": capped_tube(5, 3),
        "tetrahedron": tetrahedron(),
        "disk": polar_disk(5, 3),
        "annulus": cylinder(5, 4),
        "torus": grid_torus(4, 4),
        "csaszar": csaszar_torus(),
        "mobius": mobius_grid(5, 3),
        "rp2": rp2_6(),
        "klein": klein_grid(6, 3),
        "genus2": genus_two(4, 4),
        "torus_holed": punctured(grid_torus(4, 4), 9),
        "klein_holed": punctured(klein_grid(6, 4), 9),
        "rp2_two_holes": punctured(mobius_grid(6, 4), 14),
    }
