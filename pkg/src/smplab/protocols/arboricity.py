"""Adjacency sketch for graphs with a bounded-outdegree orientation.

Orient the edges so every vertex has at most D parents (a degeneracy
orientation does this with D = degeneracy).  Each vertex sends its own
random color plus the colors of its parents; the senders are adjacent iff
one of them lists the other's color.  Missing parent slots repeat the
sender's own color so the width is fixed at (1 + D) color fields.

Equal messages are accepted outright, which serves x = y on reflexive
graphs: adjacency instances are expected to carry all self-loops.
"""

from __future__ import annotations

import math

from ..bits import Bits
from ..errors import InputError
from ..graphs import Graph, Orientation, degeneracy_orientation, graph_from_json, graph_to_json
from .base import ACCEPT, REJECT, SmpProtocol, as_fraction, eps_from_json, eps_to_json


class ArboricityAdjacency(SmpProtocol):
    name = "sparse-adjacency"
    one_sided = True

    def __init__(self, G: Graph, eps, orientation: Orientation | None = None):
        self.graph = G
        self.eps = as_fraction(eps)
        if orientation is None:
            orientation = degeneracy_orientation(G)
        if not all(len(p) <= orientation.max_outdegree for p in orientation.parents):
            raise InputError("orientation outdegree exceeds its declared bound")
        self.orientation = orientation
        self.outdeg = orientation.max_outdegree
        self.m = math.ceil(2 * max(1, self.outdeg) / self.eps)
        self.color_width = max(1, (self.m - 1).bit_length())

    def params(self):
        return {"name": self.name, "eps": eps_to_json(self.eps),
                "n": self.graph.n, "outdegree": self.outdeg, "m": self.m}

    @property
    def cost_bits(self):
        return (1 + self.outdeg) * self.color_width

    def to_payload(self):
        return {"graph": graph_to_json(self.graph),
                "parents": [list(p) for p in self.orientation.parents]}

    @classmethod
    def from_payload(cls, params, payload):
        G = graph_from_json(payload["graph"])
        parents = tuple(tuple(p) for p in payload["parents"])
        orient = Orientation(parents, max(len(p) for p in parents) if parents else 0)
        return cls(G, eps_from_json(params["eps"]), orient)

    def support(self, v):
        labels = [(("c", v), self.m)]
        labels += [(("c", p), self.m) for p in self.orientation.parents[v]]
        return labels

    def encode(self, v, rnd):
        own = rnd.integer(("c", v), self.m)
        slots = [rnd.integer(("c", p), self.m) for p in self.orientation.parents[v]]
        slots += [own] * (self.outdeg - len(slots))
        return Bits.pack([own] + slots, self.color_width)

    @classmethod
    def referee_from_params(cls, params):
        """The decision rule alone, reconstructed from scalar parameters."""
        width = max(1, (params["m"] - 1).bit_length())
        return lambda ma, mb, rnd=None: color_slots_referee(ma, mb, width)

    def referee(self, ma, mb, rnd=None):
        return color_slots_referee(ma, mb, self.color_width)

    def expected(self, x, y):
        return ACCEPT if self.graph.adjacent(x, y) else REJECT


def color_slots_referee(ma: Bits, mb: Bits, color_width: int):
    """Accept iff the messages agree or either lists the other's own color."""
    if ma == mb:
        return ACCEPT
    a = ma.unpack(color_width)
    b = mb.unpack(color_width)
    if a[0] in b[1:] or b[0] in a[1:]:
        return ACCEPT
    return REJECT
