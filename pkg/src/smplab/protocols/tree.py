"""Exact distance sketches on trees, up to a threshold k.

Each vertex sends the random colors of an ancestor window: itself and its
k1 nearest ancestors, where k1 = (extended depth mod k) + k.  The extended
depth adds a virtual chain of 2k sentinel ancestors above the root (with
fixed colors), so every vertex has a full window and the window end always
sits exactly one k-band below a band boundary.

The referee aligns the two windows at every offset compatible with the
senders' band residues and takes the smallest candidate distance whose
aligned color runs agree.  A true meeting point always matches, so the
sketch never overestimates; rare color coincidences can underestimate,
which is why this one is *not* one-sided.
"""

from __future__ import annotations

import math

from ..bits import Bits, concat_all
from ..errors import InputError
from ..graphs import Graph, bfs_from, graph_from_json, graph_to_json
from .base import (
    SmpProtocol,
    Verdict,
    as_fraction,
    beyond_verdict,
    distance_verdict,
    eps_from_json,
    eps_to_json,
)


class TreeKDistance(SmpProtocol):
    name = "tree-distance"
    one_sided = False

    def __init__(self, tree: Graph, k: int, eps, root: int = 0):
        if k < 1:
            raise InputError("distance threshold must be at least 1")
        if tree.edge_count() != tree.n - 1:
            raise InputError("input graph is not a tree")
        dist_from_root = bfs_from(tree, root)
        if any(d == math.inf for d in dist_from_root):
            raise InputError("input graph is not connected")
        self.tree = tree
        self.k = k
        self.eps = as_fraction(eps)
        self.root = root
        self.m = math.ceil(6 / self.eps)
        self.pad = self.m
        self.color_width = max(1, self.m.bit_length())
        self.res_width = max(1, (k - 1).bit_length())
        self.depth = [int(d) for d in dist_from_root]
        self.parent = [None] * tree.n
        for v in sorted(range(tree.n), key=lambda u: self.depth[u]):
            for u in tree.neighbors(v):
                if self.depth[u] == self.depth[v] - 1:
                    self.parent[v] = u

    def params(self):
        return {"name": self.name, "k": self.k, "eps": eps_to_json(self.eps),
                "n": self.tree.n, "root": self.root, "m": self.m}

    @property
    def cost_bits(self):
        return 2 + self.res_width + 2 * self.k * self.color_width

    def to_payload(self):
        return {"graph": graph_to_json(self.tree)}

    @classmethod
    def from_payload(cls, params, payload):
        return cls(graph_from_json(payload["graph"]), params["k"],
                   eps_from_json(params["eps"]), params.get("root", 0))

    # -- ancestor window ---------------------------------------------------
    def _window_vertices(self, v):
        """Ancestors 0..k1 above v: real vertices, then virtual heights."""
        ext = self.depth[v] + 2 * self.k
        k1 = ext % self.k + self.k
        out = []
        u = v
        for j in range(k1 + 1):
            if j <= self.depth[v]:
                out.append(("real", u))
                u = self.parent[u]
            else:
                out.append(("virtual", j - self.depth[v]))
        return ext, k1, out

    def support(self, v):
        _, _, window = self._window_vertices(v)
        return [(("c", u), self.m) for kind, u in window if kind == "real"]

    def encode(self, v, rnd):
        ext, k1, window = self._window_vertices(v)
        colors = []
        for kind, u in window:
            if kind == "real":
                colors.append(rnd.integer(("c", u), self.m))
            else:
                colors.append(u % self.m)  # fixed sentinel color by height
        colors += [self.pad] * (2 * self.k - len(colors))
        fields = [
            Bits(ext // self.k % 3, 2),
            Bits(ext % self.k, self.res_width),
            Bits.pack(colors, self.color_width),
        ]
        return concat_all(fields)

    @classmethod
    def referee_from_params(cls, params):
        """The decision rule alone, reconstructed from scalar parameters."""
        k, m = params["k"], params["m"]
        res_width = max(1, (k - 1).bit_length())
        color_width = max(1, m.bit_length())
        return lambda ma, mb, rnd=None: window_scan_referee(
            ma, mb, k, res_width, color_width
        )

    def referee(self, ma, mb, rnd=None) -> Verdict:
        return window_scan_referee(ma, mb, self.k, self.res_width, self.color_width)

    def _unpack(self, msg):
        return _unpack_window(msg, self.k, self.res_width, self.color_width)

    def true_distance(self, x, y):
        d = 0
        while self.depth[x] > self.depth[y]:
            x = self.parent[x]
            d += 1
        while self.depth[y] > self.depth[x]:
            y = self.parent[y]
            d += 1
        while x != y:
            x, y = self.parent[x], self.parent[y]
            d += 2
        return d

    def expected(self, x, y):
        d = self.true_distance(x, y)
        return distance_verdict(d) if d <= self.k else beyond_verdict(self.k)


def _unpack_window(msg: Bits, k: int, res_width: int, color_width: int):
    band3 = msg.take(0, 2).value
    res = min(msg.take(2, res_width).value, k - 1)
    colors = msg.take(2 + res_width, 2 * k * color_width).unpack(color_width)
    return band3, res, colors


def window_scan_referee(ma: Bits, mb: Bits, k: int, res_width: int,
                        color_width: int) -> Verdict:
    """Smallest distance at which the two ancestor windows can meet.

    The senders' band residues fix the depth offset up to one of three
    cases (same band, or either side one band deeper); for each feasible
    alignment the candidate meeting points are the positions whose color
    suffixes agree.
    """
    ta, ra, ca = _unpack_window(ma, k, res_width, color_width)
    tb, rb, cb = _unpack_window(mb, k, res_width, color_width)
    k1a, k1b = ra + k, rb + k
    delta = (ta - tb) % 3
    if delta == 0:
        off = ra - rb
    elif delta == 1:
        off = k + ra - rb
    else:
        off = ra - rb - k
    best = None
    for pb in range(k1b + 1):
        pa = pb + off
        if not 0 <= pa <= k1a:
            continue
        run = min(k1a - pa, k1b - pb)
        if ca[pa:pa + run + 1] == cb[pb:pb + run + 1]:
            d = pa + pb
            if best is None or d < best:
                best = d
    if best is None or best > k:
        return beyond_verdict(k)
    return distance_verdict(best)
