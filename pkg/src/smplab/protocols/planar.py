"""Distance <= 2 sketch for planar graphs via 3-tree decompositions.

The input graph rides inside a triangulation of its embedding; the
triangulation's three-color parent decomposition, restricted to real edges,
orients every edge with at most three parents per vertex.  A length-2 path
through a middle vertex then falls into one of four orientation patterns:

* out-out from an endpoint (parent's parent) - caught by comparing a color
  against the other side's grandparent slots;
* into a shared parent - caught by comparing parent slots;
* both edges out of the middle vertex - the head-to-head case.  These pairs
  form the closure graph, which is itself sparse; a second color family
  over a bounded-outdegree orientation of the closure catches them.

Identity of the full message covers distance 0 and the parent slots cover
distance 1, so the sketch accepts every pair at distance <= 2 with
certainty; each of the finitely many comparisons falsely fires with
probability 1/m against fresh colors, so the two bucket counts scale as
86/eps and 68/eps to keep the union under eps.
"""

from __future__ import annotations

import math

from ..bits import Bits, concat_all
from ..errors import VerificationError
from ..graphs import bfs_from, degeneracy_orientation
from ..planar import (
    PlanarEmbedding,
    embedding_from_json,
    embedding_to_json,
    head_to_head_closure,
    schnyder_wood,
    triangulate,
)
from .base import ACCEPT, REJECT, SmpProtocol, as_fraction, eps_from_json, eps_to_json

CLOSURE_SLOTS = 17


class PlanarTwoDistance(SmpProtocol):
    name = "planar-distance-2"
    one_sided = True

    def __init__(self, emb: PlanarEmbedding, eps):
        self.embedding = emb
        self.eps = as_fraction(eps)
        self.base = emb.base_graph()
        tri = triangulate(emb)
        self.wood = schnyder_wood(tri)
        closure = head_to_head_closure(self.base, self.wood)
        self.closure_orientation = degeneracy_orientation(closure.union)
        if self.closure_orientation.max_outdegree > CLOSURE_SLOTS:
            raise VerificationError(
                "closure orientation needs more than "
                f"{CLOSURE_SLOTS} slots; embedding is not plane"
            )
        self.m1 = math.ceil(86 / self.eps)
        self.m2 = math.ceil(68 / self.eps)
        self.w1 = max(1, (self.m1 - 1).bit_length())
        self.w2 = max(1, (self.m2 - 1).bit_length())
        self._dist_cache = {}

    def params(self):
        return {"name": self.name, "eps": eps_to_json(self.eps),
                "n": self.base.n, "m1": self.m1, "m2": self.m2}

    @property
    def cost_bits(self):
        return 13 * self.w1 + (1 + CLOSURE_SLOTS) * self.w2

    def to_payload(self):
        return {"embedding": embedding_to_json(self.embedding)}

    @classmethod
    def from_payload(cls, params, payload):
        return cls(embedding_from_json(payload["embedding"]),
                   eps_from_json(params["eps"]))

    # -- slots ---------------------------------------------------------------
    def _tree_slots(self, v):
        """13 vertices-or-None: self, 3 parents, 9 grandparents."""
        parents = self.wood.parent[v]
        slots = [v] + list(parents)
        for p in parents:
            if p is None:
                slots += [None, None, None]
            else:
                slots += list(self.wood.parent[p])
        return slots

    def support(self, v):
        sup = []
        seen = set()
        for u in self._tree_slots(v):
            if u is not None and u not in seen:
                seen.add(u)
                sup.append((("c1", u), self.m1))
        sup.append((("c2", v), self.m2))
        for p in self.closure_orientation.parents[v]:
            sup.append((("c2", p), self.m2))
        return sup

    def encode(self, v, rnd):
        slots = self._tree_slots(v)
        colors = []
        for pos, u in enumerate(slots):
            if u is not None:
                colors.append(rnd.integer(("c1", u), self.m1))
            elif pos < 4:
                colors.append(colors[0])  # missing parent: own color
            else:
                colors.append(colors[1 + (pos - 4) // 3])  # missing grandparent
        own2 = rnd.integer(("c2", v), self.m2)
        closure = [rnd.integer(("c2", p), self.m2)
                   for p in self.closure_orientation.parents[v]]
        closure += [own2] * (CLOSURE_SLOTS - len(closure))
        return concat_all([
            Bits.pack(colors, self.w1),
            Bits.pack([own2] + closure, self.w2),
        ])

    @classmethod
    def referee_from_params(cls, params):
        """The decision rule alone, reconstructed from scalar parameters."""
        w1 = max(1, (params["m1"] - 1).bit_length())
        w2 = max(1, (params["m2"] - 1).bit_length())
        return lambda ma, mb, rnd=None: two_hop_referee(ma, mb, w1, w2)

    def _unpack(self, msg):
        return _unpack_two_hop(msg, self.w1, self.w2)

    def referee(self, ma, mb, rnd=None):
        return two_hop_referee(ma, mb, self.w1, self.w2)

    def distance(self, x, y):
        if x not in self._dist_cache:
            self._dist_cache[x] = bfs_from(self.base, x)
        return self._dist_cache[x][y]

    def expected(self, x, y):
        return ACCEPT if self.distance(x, y) <= 2 else REJECT


def _unpack_two_hop(msg: Bits, w1: int, w2: int):
    tree_bits = 13 * w1
    tree = msg.take(0, tree_bits).unpack(w1)
    closure = msg.take(tree_bits, msg.length - tree_bits).unpack(w2)
    return tree, closure


def two_hop_referee(ma: Bits, mb: Bits, w1: int, w2: int):
    if ma == mb:
        return ACCEPT
    a, a2 = _unpack_two_hop(ma, w1, w2)
    b, b2 = _unpack_two_hop(mb, w1, w2)
    # direct edge: one side is a parent of the other
    if a[0] in b[1:4] or b[0] in a[1:4]:
        return ACCEPT
    # grandparent routes: out-out paths through a middle vertex
    if a[0] in b[4:13] or b[0] in a[4:13]:
        return ACCEPT
    # shared parent: both edges point into the middle vertex
    if any(c in b[1:4] for c in a[1:4]):
        return ACCEPT
    # head-to-head: the closure color families
    if a2[0] in b2[1:] or b2[0] in a2[1:]:
        return ACCEPT
    return REJECT
