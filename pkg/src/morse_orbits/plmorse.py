"""Piecewise-linear Morse analysis of vertex scalar fields.

Values are exact (``Fraction``). Ties are broken by simulation of simplicity:
a vertex is compared by ``(value, representative)`` where the representative
of an interior vertex is its own id and that of a boundary vertex is the
smallest id on its boundary cycle, so every boundary cycle stays level.

Circle-valued fields store representatives in ``[0, 1)``; two vertices that
share a triangle are compared through the shortest lift of their difference.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BoundaryCritical,
    BoundaryVertexQueried,
    CircleSpreadViolation,
    CountMismatch,
    DegenerateLevel,
    DegenerateSaddle,
    MorseEqualityViolated,
    NonLevelBoundary,
)
from .surface import TriSurface, euler_characteristic

REAL = "real"
CIRCLE = "circle"
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ScalarField:
    codomain: str
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if self.codomain not in (REAL, CIRCLE):
            raise ValueError(f"unknown codomain {self.codomain!r}")
        vals = tuple(Fraction(v) for v in self.values)
        if self.codomain == CIRCLE:
            vals = tuple(v - (v.numerator // v.denominator) for v in vals)
        object.__setattr__(self, "values", vals)

    @classmethod
    def real(cls, values: Sequence) -> "ScalarField":
        return cls(REAL, tuple(values))

    @classmethod
    def circle(cls, values: Sequence) -> "ScalarField":
        return cls(CIRCLE, tuple(values))

    @property
    def is_circle(self) -> bool:
        return self.codomain == CIRCLE

    def __len__(self):
        return len(self.values)

    def map(self, fn) -> "ScalarField":
        """Apply ``fn`` to every value (used for reparametrisation checks)."""
        return ScalarField(self.codomain, tuple(fn(v) for v in self.values))


def circle_delta(a: Fraction, b: Fraction) -> Fraction:
    """Shortest lift of ``b - a`` modulo 1, in ``(-1/2, 1/2]``."""
    d = (b - a) % 1
    return d - 1 if d > _HALF else d


class VertexKind(enum.Enum):
    REGULAR = "regular"
    MIN = "min"
    MAX = "max"
    SADDLE = "saddle"


@dataclass(frozen=True)
class VertexType:
    kind: VertexKind
    multiplicity: int = 0

    @property
    def index(self) -> Optional[int]:
        return {VertexKind.MIN: 0, VertexKind.SADDLE: 1, VertexKind.MAX: 2}.get(self.kind)


REGULAR = VertexType(VertexKind.REGULAR)
MIN = VertexType(VertexKind.MIN)
MAX = VertexType(VertexKind.MAX)


def Saddle(multiplicity: int = 1) -> VertexType:
    return VertexType(VertexKind.SADDLE, multiplicity)


@dataclass(frozen=True)
class MorseData:
    critical_points: tuple[tuple[int, int], ...]
    c0: int
    c1: int
    c2: int
    is_generic: bool
    is_simple: Optional[bool] = None

    @property
    def critical_vertices(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.critical_points)

    @property
    def total(self) -> int:
        return self.c0 + self.c1 + self.c2


def representative(S: TriSurface, v: int) -> int:
    cyc = S.boundary_cycle_of[v]
    return v if cyc is None else min(S.boundary_cycles[cyc])


def precedes(S: TriSurface, f: ScalarField, u: int, w: int) -> bool:
    """Strict order ``u < w`` for vertices sharing a triangle (or any pair, for real fields)."""
    if f.is_circle:
        d = circle_delta(f.values[u], f.values[w])
        if d != 0:
            return d > 0
    else:
        a, b = f.values[u], f.values[w]
        if a != b:
            return a < b
    return representative(S, u) < representative(S, w)


def check_field(S: TriSurface, f: ScalarField) -> None:
    """Raise if ``f`` violates the structural conditions on a field over ``S``."""
    if len(f) != S.vertex_count:
        raise CountMismatch(f"{len(f)} values for {S.vertex_count} vertices")
    vals = f.values
    for cyc in S.boundary_cycles:
        if any(vals[v] != vals[cyc[0]] for v in cyc):
            raise NonLevelBoundary(f"field is not constant on boundary cycle through {cyc[0]}")
    for t in S.triangles:
        if f.is_circle:
            a = vals[t[0]]
            lifts = [Fraction(0), circle_delta(a, vals[t[1]]), circle_delta(a, vals[t[2]])]
            if max(lifts) - min(lifts) >= _HALF:
                raise CircleSpreadViolation(f"triangle {t} spans half a turn or more")
            flat = max(lifts) == min(lifts)
        else:
            flat = vals[t[0]] == vals[t[1]] == vals[t[2]]
        if flat:
            raise DegenerateLevel(f"field is constant on triangle {t}")


def vertex_type(S: TriSurface, f: ScalarField, v: int) -> VertexType:
    if S.is_boundary_vertex(v):
        raise BoundaryVertexQueried(f"vertex {v} lies on the boundary")
    link = S.links[v]
    lower = [precedes(S, f, w, v) for w in link]
    if not any(lower):
        return MIN
    if all(lower):
        return MAX
    arcs = sum(1 for i in range(len(lower)) if lower[i] and not lower[i - 1])
    if arcs == 1:
        return REGULAR
    return Saddle(arcs - 1)


def classify_vertices(S: TriSurface, f: ScalarField) -> dict[int, VertexType]:
    return {v: vertex_type(S, f, v) for v in S.interior_vertices()}


def validate_morse(S: TriSurface, f: ScalarField) -> MorseData:
    """Classify every interior vertex and check the admissibility conditions.

    ``is_generic`` here only records that critical values are pairwise
    distinct; :func:`morse_orbits.reeb.finalize_morse` completes it once the
    level components are known.
    """
    check_field(S, f)
    _check_boundary_collars(S, f)
    crit = []
    for v, vt in classify_vertices(S, f).items():
        if vt.kind is VertexKind.SADDLE and vt.multiplicity > 1:
            raise DegenerateSaddle(f"vertex {v} is a saddle of multiplicity {vt.multiplicity}")
        if vt.index is not None:
            crit.append((v, vt.index))
    counts = [sum(1 for _, i in crit if i == k) for k in range(3)]
    chi = euler_characteristic(S)
    if counts[0] - counts[1] + counts[2] != chi:
        raise MorseEqualityViolated(f"c0-c1+c2 = {counts[0] - counts[1] + counts[2]} but chi = {chi}")
    values = [f.values[v] for v, _ in crit]
    return MorseData(
        critical_points=tuple(crit),
        c0=counts[0],
        c1=counts[1],
        c2=counts[2],
        is_generic=len(set(values)) == len(values),
    )


def _check_boundary_collars(S: TriSurface, f: ScalarField) -> None:
    for idx, cyc in enumerate(S.boundary_cycles):
        members = set(cyc)
        sides = set()
        for v in cyc:
            for w in S.links[v]:
                if w not in members:
                    sides.add(precedes(S, f, w, v))
        if len(sides) != 1:
            raise BoundaryCritical(f"boundary cycle {idx} has neighbours on both sides of its level")


def morse_counts(md: MorseData) -> tuple[int, int, int]:
    return (md.c0, md.c1, md.c2)
