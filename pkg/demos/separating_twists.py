"""Why the homology test of twist independence fails on spheres.

A level curve inside a bridge of the Reeb graph separates the surface. It
meets every closed curve an even number of times with opposite signs, so its
Dehn twist fixes every homology class. This script finds such a field on a
sphere and shows the zero pairings.
"""

import random

from morse_orbits.corpus import random_field, surface_zoo
from morse_orbits.graphaut import bridges
from morse_orbits.pipeline import analyze


def main(seed=1):
    S = surface_zoo()["sphere"]
    rng = random.Random(seed)
    while True:
        f, md = random_field(S, rng)
        if md.c1 >= 2:
            break
    A = analyze(S, f)
    T = A.twists
    br = bridges(A.graph)
    print(f"sphere field with c = ({md.c0}, {md.c1}, {md.c2}); {T.l} internal edges")
    for i, j in enumerate(T.edges):
        tag = "bridge" if j in br else "on a cycle"
        print(f"  edge {j} ({tag}): pairings with the generators {list(T.pairings[i])}")
    print(f"twists independent on H1: {A.twists_independent}")


if __name__ == "__main__":
    main()
