"""Homology of punctured surfaces, level curves and Dehn twist actions.

The reference for ranks and torsion is ordinary simplicial homology of the
triangulation, computed with sympy from the boundary matrices.
"""

import random
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morse_orbits.corpus import csaszar_torus, grid_torus, random_field, surface_zoo, tetrahedron
from morse_orbits.errors import DimensionMismatch, NonOrientableUnsupported, NotInternal
from morse_orbits.graphaut import bridges
from morse_orbits.homology import (
    expected_rank,
    h1_basis,
    intersection,
    level_curve,
    star_chain,
    twist_action,
    twist_curve,
    twist_system,
    twists_independent,
)
from morse_orbits.pipeline import analyze
from morse_orbits.surface import classify_surface, oriented_triangles
from oracles import simplicial_h1, simplicial_h1_mod2

ORIENTABLE = ["sphere", "tetrahedron", "disk", "annulus", "torus", "csaszar", "genus2", "torus_holed"]
NON_ORIENTABLE = ["mobius", "rp2", "klein", "klein_holed", "rp2_two_holes"]


class TestRanks:
    @pytest.mark.parametrize(
        "make, punctures, rank",
        [
            (tetrahedron, (0, 1), 1),
            (csaszar_torus, (), 2),
            (csaszar_torus, (0, 2, 4, 6), 5),
            (tetrahedron, (), 0),
        ],
    )
    def test_spot_values(self, make, punctures, rank):
        assert h1_basis(make(), punctures).rank == rank

    @pytest.mark.parametrize("name", ORIENTABLE + NON_ORIENTABLE)
    def test_unpunctured_against_simplicial(self, name):
        S = surface_zoo()[name]
        B = h1_basis(S)
        assert (B.rank, B.torsion) == simplicial_h1(S)
        assert h1_basis(S, modulus=2).rank == simplicial_h1_mod2(S)

    @pytest.mark.parametrize("name", ORIENTABLE + NON_ORIENTABLE)
    def test_punctured_against_euler(self, name, rng):
        S = surface_zoo()[name]
        chi = classify_surface(S).euler_characteristic
        interior = S.interior_vertices()
        for p in (1, 2, 3):
            P = rng.sample(interior, p)
            B = h1_basis(S, P)
            # removing p >= 1 points leaves a free group of rank 1 - chi + p
            assert B.rank == 1 - chi + p == expected_rank(S, P)
            assert B.torsion == []

    def test_star_cycles_vanish(self):
        S = grid_torus(4, 4)
        B = h1_basis(S)
        for v in range(S.vertex_count):
            assert B.project(B.vector(star_chain(S, v))) == [0] * B.rank

    def test_modulus_validated(self):
        with pytest.raises(ValueError):
            h1_basis(tetrahedron(), modulus=3)


class TestIntersections:
    def test_antisymmetric_and_mod2(self, canonical):
        ex = canonical["torus_height"]
        S = ex.surface
        A = analyze(S, ex.field)
        B = h1_basis(S, A.morse.critical_vertices)
        o = oriented_triangles(S)
        g = level_curve(S, ex.field, A.graph, A.graph.internal_edges[0])
        avoid = defaultdict(set)
        for e, p in g.crossings:
            avoid[e].add(p)
        for i in range(len(B.coords)):
            x = B.fundamental_curve(i, avoid)
            n = intersection(S, x, g, o)
            assert intersection(S, g, x, o) == -n
            assert intersection(S, x, g, modulus=2) == n % 2

    def test_signed_needs_orientation(self):
        S = surface_zoo()["mobius"]
        f, md = random_field(S, random.Random(0))
        A = analyze(S, f, homology=False)
        with pytest.raises(NonOrientableUnsupported):
            twist_system(S, f, A.graph, A.morse, modulus=0)


class TestTwists:
    def test_torus_height(self, canonical):
        ex = canonical["torus_height"]
        A = analyze(ex.surface, ex.field)
        T = A.twists
        assert T.l == 2 and T.rank == 5
        assert twists_independent(T)
        x = next(
            [int(k == j) for k in range(T.rank)] for j in range(T.rank) if T.pairing([int(k == j) for k in range(T.rank)], 0)
        )
        c = T.pairing(x, 0)
        assert twist_action(T, [1, 0], x) == [a + c * g for a, g in zip(x, T.classes[0])]
        assert twist_action(T, [0, 0], x) == x

    def test_duplicated_curve_is_dependent(self, canonical):
        ex = canonical["torus_height"]
        T = analyze(ex.surface, ex.field).twists
        assert not twists_independent(T.duplicated(0))

    def test_no_internal_edges(self, canonical):
        ex = canonical["sphere_height"]
        T = analyze(ex.surface, ex.field).twists
        assert T.l == 0 and twists_independent(T)

    def test_dimension_checks(self, canonical):
        ex = canonical["torus_height"]
        T = analyze(ex.surface, ex.field).twists
        with pytest.raises(DimensionMismatch):
            twist_action(T, [1], [0] * T.rank)
        with pytest.raises(DimensionMismatch):
            twist_action(T, [1, 0], [0])

    def test_external_edge_has_no_twist(self, canonical):
        ex = canonical["torus_height"]
        A = analyze(ex.surface, ex.field)
        external = next(j for j, e in enumerate(A.graph.edges) if not e.is_internal)
        with pytest.raises(NotInternal):
            level_curve(ex.surface, ex.field, A.graph, external)

    @pytest.mark.parametrize("name", ["csaszar", "torus", "genus2"])
    def test_geometric_twist_matches_formula(self, name, rng):
        """Twisting a curve on the mesh and taking its class agrees with x + <x, g> g."""
        S = surface_zoo()[name]
        o = oriented_triangles(S)
        f, _ = random_field(S, rng)
        A = analyze(S, f, homology=False)
        B = h1_basis(S, A.morse.critical_vertices)
        for j in A.graph.internal_edges:
            g = level_curve(S, f, A.graph, j)
            gc = B.curve_class(g)
            avoid = defaultdict(set)
            for e, p in g.crossings:
                avoid[e].add(p)
            for i in range(len(B.coords)):
                x = B.fundamental_curve(i, avoid)
                n = intersection(S, x, g, o)
                y = twist_curve(S, x, g, o)
                assert B.curve_class(y) == [a + n * b for a, b in zip(B.curve_class(x), gc)]

    @pytest.mark.parametrize("name", ORIENTABLE)
    def test_separating_curves_act_trivially(self, name, rng):
        """A level curve in a bridge separates the surface, so it pairs to zero with every class."""
        S = surface_zoo()[name]
        for _ in range(6):
            f, _ = random_field(S, rng)
            A = analyze(S, f)
            T = A.twists
            br = bridges(A.graph)
            for i, j in enumerate(T.edges):
                if j in br:
                    assert not any(T.pairings[i])
            if set(T.edges) & br:
                assert not A.twists_independent

    @pytest.mark.parametrize("name", ORIENTABLE)
    def test_independent_without_internal_bridges(self, name, rng):
        S = surface_zoo()[name]
        for _ in range(6):
            f, _ = random_field(S, rng)
            A = analyze(S, f)
            if not set(A.graph.internal_edges) & bridges(A.graph):
                assert A.twists_independent

    @pytest.mark.parametrize("name", NON_ORIENTABLE)
    def test_mod2_on_non_orientable(self, name, rng):
        S = surface_zoo()[name]
        f, _ = random_field(S, rng)
        T = analyze(S, f).twists
        assert T.modulus == 2 and not T.orientable
        assert all(x in (0, 1) for row in T.classes for x in row)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_action_is_additive_in_exponents(seed, m):
    """Commuting twists: applying m then m' equals applying m + m' (the curves are disjoint)."""
    S = grid_torus(4, 4)
    f, _ = random_field(S, random.Random(seed))
    T = analyze(S, f).twists
    m = (m + [0] * T.l)[: T.l]
    x = [1] * T.rank
    once = twist_action(T, m, twist_action(T, m, x))
    twice = twist_action(T, [2 * a for a in m], x)
    assert once == twice
