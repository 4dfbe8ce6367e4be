"""Distance sketches on distributive lattices, two referee models.

Two players each hold one lattice element and send a constant-size sketch
to a referee who must decide whether the elements are within cover-graph
distance k.  In the *weak* model the referee sees the shared random seed;
in the *blind* (universal) model it must decide from the two messages
alone.  Both sketches never reject a close pair; the random seed only
controls how often a far pair slips through.
"""

import random
from fractions import Fraction

from smplab import (
    HashRandomness,
    UniversalLatticeDistance,
    WeakLatticeDistance,
    boolean_lattice,
    bfs_distance,
    cover_graph,
    derive_seed,
    random_downset_lattice,
)

K = 2
EPS = Fraction(1, 4)
TRIALS = 2000


def measure(proto, pairs, salt):
    bad = 0
    for t in range(TRIALS):
        x, y = pairs[t % len(pairs)]
        rnd = HashRandomness(derive_seed(99, salt, t))
        bad += not proto.run(x, y, rnd).correct
    return bad / TRIALS


def main():
    L = boolean_lattice(6)
    cover = cover_graph(L.poset)
    print(f"lattice: subsets of a 6-element set, {L.n} elements")

    close, far = [], []
    for x in range(L.n):
        for y in range(L.n):
            (close if bfs_distance(cover, x, y) <= K else far).append((x, y))
    print(f"pairs within distance {K}: {len(close)}, beyond: {len(far)}")

    for name, proto in (
        ("weak  ", WeakLatticeDistance(L, K, EPS)),
        ("blind ", UniversalLatticeDistance(L, K, EPS)),
    ):
        p = proto.params()
        size = ", ".join(f"{k}={p[k]}" for k in p if k not in ("name", "eps", "n"))
        print(f"\n{name} sketch ({size}), {proto.cost_bits} bits per message")
        print(f"  false rejects on close pairs: {measure(proto, close, name)!r}")
        print(f"  false accepts on far pairs:   {measure(proto, far, name):.4f}"
              f"  (budget {float(EPS):.4f})")

    # the same protocols run unchanged on any distributive lattice.
    L2 = random_downset_lattice(random.Random(7), 9)
    proto = UniversalLatticeDistance(L2, K, EPS)
    cover2 = cover_graph(L2.poset)
    far2 = [(x, y) for x in range(L2.n) for y in range(L2.n)
            if bfs_distance(cover2, x, y) > K]
    print(f"\nrandom downset lattice with {L2.n} elements:")
    print(f"  blind sketch far-pair false accepts: "
          f"{measure(proto, far2, 'downset'):.4f}")


if __name__ == "__main__":
    main()
