"""Distance-threshold sketches for distributive lattices.

Both protocols ride on the irreducible-set representation: an element maps
to the set of join-irreducibles below it, and lattice distance is the size
of the symmetric difference of those sets.  Deciding distance <= k is then
a small-set-difference problem, solved two ways:

* ``WeakLatticeDistance`` hashes irreducibles into m buckets, attaches a
  random q-bit vector to each bucket, and sends the XOR of the vectors its
  set touches.  The referee (who here is allowed to read the shared draws)
  accepts iff the two messages differ by an XOR of at most k bucket
  vectors.  Yes instances always pass; message width is q bits.

* ``UniversalLatticeDistance`` sends, per round, the parity vector of its
  hashed set occupancy.  The referee accepts iff every round's XOR has
  weight at most k - a fixed rule of the two messages alone, which is what
  makes the messages reusable as vertex labels of a fixed decision graph.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..bits import Bits, concat_all
from ..errors import CapacityError, InputError
from ..lattices import Lattice, birkhoff, poset_from_json, poset_to_json, build_lattice
from .base import (
    ACCEPT,
    REJECT,
    SmpProtocol,
    as_fraction,
    ceil_log2,
    eps_from_json,
    eps_to_json,
)


def weak_sketch_width(m: int, k: int, eps) -> int:
    """Vector width q making a false k-fold XOR hit rarer than eps.

    There are sum_{i<=k} C(m, i) subsets the referee tests; q grows until
    the union of their 2^-q hit probabilities is under eps.
    """
    candidates = sum(math.comb(m, i) for i in range(k + 1))
    return ceil_log2(candidates / as_fraction(eps))


def weak_sketch_params(k: int, eps) -> tuple[int, int]:
    """Bucket count m and message width q for the weak-referee sketch."""
    eps = as_fraction(eps)
    m = math.ceil((k + 2) ** 2 / eps)
    return m, weak_sketch_width(m, k, eps)


def universal_sketch_params(k: int, eps) -> tuple[int, int]:
    """Bucket count m and round count r for the parity-vector sketch."""
    eps = as_fraction(eps)
    m = math.ceil(Fraction(3 * (k + 2) ** 2, 2))
    r = 1
    while Fraction(1, 3**r) > eps:
        r += 1
    return m, r


class _LatticeSketch(SmpProtocol):
    one_sided = True

    def __init__(self, L: Lattice, k: int, eps):
        if k < 0:
            raise InputError("negative distance threshold")
        self.lattice = L
        self.k = k
        self.eps = as_fraction(eps)
        rep = birkhoff(L)
        self.rep = rep
        self._jset = tuple(
            tuple(j for j in range(rep.width) if rep.downsets[v] >> j & 1)
            for v in range(L.n)
        )

    def expected(self, x, y):
        d = (self.rep.downsets[x] ^ self.rep.downsets[y]).bit_count()
        return ACCEPT if d <= self.k else REJECT

    def to_payload(self):
        return {"poset": poset_to_json(self.lattice.poset)}


class WeakLatticeDistance(_LatticeSketch):
    name = "lattice-distance-weak"
    referee_reads_randomness = True

    def __init__(self, L, k, eps, m=None, q=None):
        """m and q default to the guarantee-carrying formulas; explicit
        values are for toy-scale exhaustive analysis and forfeit the
        error bound."""
        super().__init__(L, k, eps)
        self.m = math.ceil((k + 2) ** 2 / self.eps) if m is None else int(m)
        if self.m < 1:
            raise InputError("bucket count must be positive")
        self.q = weak_sketch_width(self.m, k, self.eps) if q is None else int(q)
        if self.q < 1:
            raise InputError("vector width must be positive")
        if self.q > 63:
            raise CapacityError("sketch width beyond 63 bits; shrink k or grow eps")

    def params(self):
        return {"name": self.name, "k": self.k, "eps": eps_to_json(self.eps),
                "n": self.lattice.n, "m": self.m, "q": self.q}

    @classmethod
    def from_payload(cls, params, payload):
        # birkhoff() re-certifies distributivity, so skip the generic pass
        L = build_lattice(poset_from_json(payload["poset"]), validate=False)
        return cls(L, params["k"], eps_from_json(params["eps"]),
                   m=params["m"], q=params["q"])

    @classmethod
    def referee_from_params(cls, params):
        """The decision rule alone, reconstructed from scalar parameters."""
        m, q, k = params["m"], params["q"], params["k"]
        return lambda ma, mb, rnd=None: weak_xor_referee(ma, mb, rnd, m, q, k)

    @property
    def cost_bits(self):
        return self.q

    def support(self, v):
        idx = [(("idx", j), self.m) for j in self._jset[v]]
        vecs = [(("s", i), 2**self.q) for i in range(self.m)]
        return idx + vecs

    def encode(self, v, rnd):
        buckets = {rnd.integer(("idx", j), self.m) for j in self._jset[v]}
        acc = 0
        for i in buckets:
            acc ^= rnd.integer(("s", i), 2**self.q)
        return Bits(acc, self.q)

    def referee(self, ma, mb, rnd=None):
        return weak_xor_referee(ma, mb, rnd, self.m, self.q, self.k)


def weak_xor_referee(ma: Bits, mb: Bits, rnd, m: int, q: int, k: int):
    """Accept iff the messages differ by an XOR of at most k bucket vectors."""
    if rnd is None:
        raise InputError("weak referee needs the shared randomness")
    vecs = np.array([rnd.integer(("s", i), 2**q) for i in range(m)], dtype=np.uint64)
    return ACCEPT if _small_xor_hit(ma.value ^ mb.value, vecs, k) else REJECT


def _small_xor_hit(target: int, vecs: np.ndarray, k: int) -> bool:
    """Is target the XOR of at most k of the given vectors?

    Meet in the middle: XORs of <= floor(k/2) vectors against target XOR
    (<= ceil(k/2))-fold XORs.  Overlapping halves cancel to a smaller
    subset, so the test is exact, not just one-sided.
    """
    t = np.uint64(target)
    if k == 0:
        return target == 0
    if k == 1:
        return target == 0 or bool(np.any(vecs == t))
    lo = _xor_closure(vecs, k // 2)
    hi = _xor_closure(vecs, (k + 1) // 2)
    lo.sort(kind="stable")
    pos = np.searchsorted(lo, hi ^ t)
    pos = np.minimum(pos, len(lo) - 1)
    return bool(np.any(lo[pos] == (hi ^ t)))


def _xor_closure(vecs: np.ndarray, size: int) -> np.ndarray:
    """All XORs of subsets with at most ``size`` elements (with repeats)."""
    out = np.zeros(1, dtype=np.uint64)
    for _ in range(size):
        out = np.unique(np.concatenate([out, (out[:, None] ^ vecs[None, :]).ravel()]))
    return out


class UniversalLatticeDistance(_LatticeSketch):
    name = "lattice-distance-universal"

    def __init__(self, L, k, eps, m=None, rounds=None):
        """m and rounds default to the guarantee-carrying formulas;
        explicit values are for toy-scale exhaustive analysis and forfeit
        the error bound."""
        super().__init__(L, k, eps)
        fm, fr = universal_sketch_params(k, self.eps)
        self.m = fm if m is None else int(m)
        self.rounds = fr if rounds is None else int(rounds)
        if self.m < 1 or self.rounds < 1:
            raise InputError("bucket and round counts must be positive")

    def params(self):
        return {"name": self.name, "k": self.k, "eps": eps_to_json(self.eps),
                "n": self.lattice.n, "m": self.m, "rounds": self.rounds}

    @classmethod
    def from_payload(cls, params, payload):
        L = build_lattice(poset_from_json(payload["poset"]), validate=False)
        return cls(L, params["k"], eps_from_json(params["eps"]),
                   m=params["m"], rounds=params["rounds"])

    @classmethod
    def referee_from_params(cls, params):
        """The decision rule alone, reconstructed from scalar parameters."""
        m, k = params["m"], params["k"]
        return lambda ma, mb, rnd=None: parity_blocks_referee(ma, mb, m, k)

    @property
    def cost_bits(self):
        return self.m * self.rounds

    def support(self, v):
        return [
            (("idx", t, j), self.m)
            for t in range(self.rounds)
            for j in self._jset[v]
        ]

    def encode(self, v, rnd):
        parts = []
        for t in range(self.rounds):
            vec = 0
            for j in self._jset[v]:
                vec ^= 1 << rnd.integer(("idx", t, j), self.m)
            parts.append(Bits(vec, self.m))
        return concat_all(parts)

    def referee(self, ma, mb, rnd=None):
        return parity_blocks_referee(ma, mb, self.m, self.k)


def parity_blocks_referee(ma: Bits, mb: Bits, m: int, k: int):
    """Accept iff every m-bit round block XORs to weight at most k."""
    for block_a, block_b in zip(ma.blocks(m), mb.blocks(m)):
        if (block_a.value ^ block_b.value).bit_count() > k:
            return REJECT
    return ACCEPT
