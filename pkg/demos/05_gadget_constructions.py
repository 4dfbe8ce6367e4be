"""Planting arbitrary graphs inside structured hosts.

Sketchable families are closed downward under faithful maps (maps that
preserve edges, non-edges, and loops), so hardness travels upward: if an
arbitrary graph embeds into a family's distance relation, the family
inherits every lower bound the arbitrary graph has.  Three constructions
demonstrate that.  A modular lattice whose distance-<=2 relation contains
any reflexive source up to 5 vertices; a 2-degenerate product whose
distance-2 pairs are exactly the source's edges; and an interval graph
whose adjacency answers order comparisons.
"""

import random

from smplab import (
    Graph,
    arboricity2_gadget,
    bfs_distance,
    classify,
    cover_graph,
    degeneracy,
    interval_gt_instance,
    k_closure,
    modular_gadget,
    twin_reduction,
    verify_gadget,
)


def main():
    # 1. modular lattice hosting a 4-cycle (with loops; adjacency sketches
    #    treat equal inputs as adjacent, so the closure is reflexive).
    source = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)], loops="all")
    inst = modular_gadget(source)
    verify_gadget(inst)
    L = inst.product
    print(f"modular host: {L.n}-element lattice, kind {classify(L)!r}")
    near = k_closure(cover_graph(L.poset), 2)
    img = inst.injection
    ok = all(
        source.adjacent(u, v) == near.adjacent(img(u), img(v))
        for u in range(4)
        for v in range(4)
    )
    print(f"  image of the 4-cycle induces exactly the source adjacency: {ok}")

    # 2. sparse product: adjacency becomes distance exactly 2.
    rng = random.Random(12)
    src = Graph(7, [(u, v) for u in range(7) for v in range(u + 1, 7)
                    if rng.random() < 0.4])
    inst2 = arboricity2_gadget(src)
    verify_gadget(inst2)
    prod = inst2.product
    print(f"\nsparse host: {prod.n} vertices, degeneracy {degeneracy(prod)}")
    pair = next((u, v) for u in range(7) for v in range(7) if src.adjacent(u, v))
    u, v = pair
    print(f"  source edge {pair} sits at host distance "
          f"{bfs_distance(prod, inst2.injection(u), inst2.injection(v))}")

    # 3. interval graph deciding x < y through two adjacency queries.
    order = interval_gt_instance(6)
    row = "".join("<" if order.less_than(x, y) else "." for y in range(1, 7)
                  for x in (3,))
    print(f"\ninterval order on 1..6: row for x=3 -> {row} (dots: not x<y)")

    # 4. faithful maps ignore twins: reducing duplicate rows first changes
    #    nothing about what embeds where.
    twinned = Graph(6, [(0, 2), (1, 2), (0, 3), (1, 3)])
    reduced, proj = twin_reduction(twinned)
    print(f"\ntwin reduction: {twinned.n} vertices -> {reduced.n}, "
          f"projection {proj.image}")


if __name__ == "__main__":
    main()
