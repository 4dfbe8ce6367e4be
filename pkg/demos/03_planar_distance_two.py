"""Inside the planar distance-2 sketch: realizers, splits, closures.

A planar triangulation decomposes into three trees (a realizer): every
non-root vertex gets exactly one parent per color.  Two structural
consequences make a constant-size sketch possible.  Splitting each vertex
into per-color satellites keeps the graph planar-sparse while separating
the roles a vertex plays; and the head-to-head closure - joining the two
out-neighbors a vertex keeps after deleting one color - is always
5-degenerate, so it admits a bounded-width orientation.  Distance <= 2 then
falls into three checkable families: shared parent, grandparent chain, or
closure adjacency.
"""

import random
from fractions import Fraction

from smplab import (
    HashRandomness,
    PlanarTwoDistance,
    all_pairs_distances,
    degeneracy,
    head_to_head_closure,
    schnyder_wood,
    split_graph,
    stacked_triangulation,
)

N = 120
EPS = Fraction(1, 6)
TRIALS = 1500


def main():
    emb = stacked_triangulation(random.Random(42), N)
    base = emb.base_graph()
    wood = schnyder_wood(emb)
    print(f"stacked triangulation: {N} vertices, {len(base.edges())} edges")
    print(f"realizer roots: {wood.roots}")

    sat = split_graph(base, wood).graph
    print(f"split graph: {sat.n} satellites, {len(sat.edges())} edges"
          f" (planar bound {3 * sat.n - 6})")

    closure = head_to_head_closure(base, wood)
    print("closure degeneracy per color:",
          [degeneracy(g) for g in closure.per_color], "(always <= 5)")

    # taxonomy: every distance-2 pair is covered by one of three families.
    dist = all_pairs_distances(base)
    parents = [{p for p in wood.parent[v] if p is not None} for v in range(N)]
    counts = {"shared parent": 0, "grandparent": 0, "closure": 0}
    for x in range(N):
        for y in range(x + 1, N):
            if dist[x, y] != 2:
                continue
            if parents[x] & parents[y]:
                counts["shared parent"] += 1
            elif y in {g for p in parents[x] for g in parents[p]} or x in {
                g for p in parents[y] for g in parents[p]
            }:
                counts["grandparent"] += 1
            else:
                assert closure.union.adjacent(x, y)
                counts["closure"] += 1
    print(f"distance-2 pairs by family: {counts}")
    if not counts["closure"]:
        print("  (stacked triangulations happen to be covered by the two tree"
              " families;\n   the closure is the safety net for the general case)")

    proto = PlanarTwoDistance(emb, EPS)
    print(f"\nsketch: {proto.cost_bits} bits per message, one-sided")
    near = [(x, y) for x in range(N) for y in range(N) if dist[x, y] <= 2]
    far = [(x, y) for x in range(N) for y in range(N) if dist[x, y] > 2]
    for name, pool in (("close", near), ("far", far)):
        bad = sum(
            not proto.run(*pool[t % len(pool)], HashRandomness(900 + t)).correct
            for t in range(TRIALS)
        )
        print(f"  errors on {name} pairs: {bad}/{TRIALS}")


if __name__ == "__main__":
    main()
