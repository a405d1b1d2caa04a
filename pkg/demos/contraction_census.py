"""Census of minimal graphs over randomly generated Reeb graphs.

Counts how often each (r'_C, r'_E) pair occurs per surface type and shows
that the contraction order never matters.
"""

import random
from collections import Counter

from morse_orbits.generators import Params, random_reeb_graph
from morse_orbits.orbitcalc import all_contraction_outcomes, minimal_graph
from morse_orbits.surface import table1_type


def main(n=300, seed=0):
    rng = random.Random(seed)
    census = Counter()
    orders_agree = 0
    for i in range(n):
        g = random_reeb_graph(rng, 12, Params(twist=0.15 if i % 2 else 0.0))
        s = minimal_graph(g.graph)
        orders_agree += all_contraction_outcomes(g.graph) == {(s.r_C, s.r_E)}
        census[table1_type(g.surface), s.r_C, s.r_E] += 1
    print(f"{orders_agree}/{n} graphs: every maximal contraction order gives the same minimal graph")
    print("type  r'_C  r'_E  count")
    for (t, rc, re_), c in sorted(census.items()):
        print(f"{t:>4}  {rc:>4}  {re_:>4}  {c:>5}")


if __name__ == "__main__":
    main()
