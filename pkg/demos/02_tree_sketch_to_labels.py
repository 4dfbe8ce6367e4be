"""From a randomized tree sketch to deterministic distance labels.

Three stages.  First, a sketch that reports the exact distance between
tree vertices when they are within k hops (and says "beyond k" otherwise),
using shared randomness.  Second, the shared randomness is replaced by a
small verified bank of seeds: for every input pair, at most an eps+delta
fraction of the bank misleads the referee.  Third, each vertex's messages
under the whole bank are frozen into a label, and a majority vote over any
two labels decodes the relation with no randomness at all.
"""

import random
from fractions import Fraction

from smplab import (
    HashRandomness,
    TreeKDistance,
    bfs_distance,
    decode_labels,
    derandomized_labeling,
    newman_seed_bank,
    random_tree,
)

N, K = 40, 2
EPS = DELTA = Fraction(1, 8)


def main():
    tree = random_tree(random.Random(3), N)
    proto = TreeKDistance(tree, K, EPS)
    print(f"random tree, {N} vertices; sketch reports distances up to {K}")
    print(f"message size: {proto.cost_bits} bits")

    rnd = HashRandomness(2024)
    shown = {bfs_distance(tree, 0, y): (0, y) for y in range(N - 1, -1, -1)}
    for d in (1, 2, min(d for d in shown if d > K)):
        x, y = shown[d]
        got = proto.run(x, y, rnd).verdict
        print(f"  pair ({x},{y}): true distance {d},"
              f" verdict {got.kind} {got.value if got.value is not None else ''}")

    bank = newman_seed_bank(proto, range(N), EPS, DELTA, rng=11)
    print(f"\nseed bank: {bank.m} seeds, verified exhaustively")
    print(f"  worst pair misled by {bank.worst_bad} of the bank"
          f" (budget {EPS + DELTA})")

    scheme = derandomized_labeling(proto, range(N), bank)
    print(f"\nlabels: {scheme.label_bits} bits per vertex, decoded by majority vote")
    wrong = sum(
        decode_labels(scheme, scheme.labels[x], scheme.labels[y])
        != (bfs_distance(tree, x, y) <= K)
        for x in range(N)
        for y in range(N)
    )
    print(f"  decoding errors over all {N * N} pairs: {wrong}")


if __name__ == "__main__":
    main()
