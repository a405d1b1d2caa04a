"""Walk through the analysis of a height function on the 7-vertex torus.

Run with ``python3 demos/torus_walkthrough.py``.
"""

from morse_orbits.corpus import canonical_examples
from morse_orbits.homology import action_matrix
from morse_orbits.pipeline import analyze


def main():
    ex = canonical_examples()["torus_height"]
    A = analyze(ex.surface, ex.field)

    C, md, G = A.classification, A.morse, A.graph
    print(f"surface: orientable={C.orientable} genus={C.genus} boundary={C.boundary_count} chi={C.euler_characteristic}")
    print(f"critical points: c0={md.c0} c1={md.c1} c2={md.c2} (generic={md.is_generic})")

    print("\nReeb graph")
    for i, n in enumerate(G.nodes):
        print(f"  node {i}: {n.kind.name:<9} level {n.level}")
    for j, e in enumerate(G.edges):
        kind = "internal" if e.is_internal else "external"
        print(f"  edge {j}: {e.tail} -> {e.head} ({kind})")

    s = A.summary
    print(f"\nminimal graph after {s.contractions} contraction(s): r'_C={s.r_C}, r'_E={s.r_E}")
    R = A.report
    print(f"k = {R.k}, orbit ~ {R.orbit_type}, stabilizer ~ {R.stabilizer_id_type}")

    T = A.twists
    print(f"\n{T.l} internal level curves; their twists act on H1 of the punctured torus (rank {T.rank})")
    M = action_matrix(T)
    print(f"action matrix is {len(M)} x {T.l}; twists independent: {A.twists_independent}")


if __name__ == "__main__":
    main()
