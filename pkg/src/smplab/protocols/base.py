"""Simultaneous-message sketches: the shared machinery.

A protocol encodes each input into a fixed-width bit message using labeled
shared randomness, and a referee maps the two messages to a verdict.  Two
referee disciplines coexist: most referees here are *blind* (a fixed function
of the messages alone, which is what lets the messages double as vertex
labels in a fixed decision structure), while others may read the shared
randomness (``referee_reads_randomness = True``).

``exact_error`` enumerates the full labeled-draw space with rational
arithmetic, so small instances get provable error probabilities rather than
estimates.  ``symmetrize`` turns a protocol with distinct sender roles into
a role-free one: both parties send both encodings, and the referee takes the
more pessimistic of the two cross evaluations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..bits import Bits
from ..errors import InputError
from ..rng import (
    HashRandomness,
    SharedRandomness,
    TableRandomness,
    enumerate_assignments,
    support_size,
)


@dataclass(frozen=True)
class Verdict:
    kind: str  # "accept" | "reject" | "distance" | "beyond"
    value: int | None = None

    def sort_key(self):
        if self.kind == "accept":
            return (0, 0)
        if self.kind == "reject":
            return (1, 0)
        if self.kind == "distance":
            return (0, self.value)
        if self.kind == "beyond":
            return (1, self.value)
        raise InputError(f"unknown verdict kind {self.kind!r}")

    def __str__(self):
        if self.value is None:
            return self.kind
        return f"{self.kind}({self.value})"


ACCEPT = Verdict("accept")
REJECT = Verdict("reject")


def distance_verdict(d: int) -> Verdict:
    return Verdict("distance", d)


def beyond_verdict(k: int) -> Verdict:
    return Verdict("beyond", k)


def verdict_max(u: Verdict, v: Verdict) -> Verdict:
    """The more pessimistic of two verdicts (reject/larger distance wins)."""
    return max(u, v, key=Verdict.sort_key)


@dataclass(frozen=True)
class TrialResult:
    x: int
    y: int
    message_a: Bits
    message_b: Bits
    verdict: Verdict
    expected: Verdict

    @property
    def correct(self) -> bool:
        return self.verdict == self.expected


def merge_support(*supports):
    """Deduplicate (label, cardinality) lists; clashing cardinalities fail."""
    seen = {}
    out = []
    for sup in supports:
        for label, card in sup:
            if label in seen:
                if seen[label] != card:
                    raise InputError(f"label {label!r} declared with two cardinalities")
                continue
            seen[label] = card
            out.append((label, card))
    return out


class SmpProtocol:
    """Base class; subclasses fill in encoders, referee, and ground truth."""

    name = "abstract"
    one_sided = False
    referee_reads_randomness = False

    # -- per-protocol surface -------------------------------------------
    def encode(self, v: int, rnd: SharedRandomness) -> Bits:
        raise NotImplementedError

    def support(self, v: int):
        """Labeled draws ``encode(v)`` may read: list of (label, cardinality)."""
        raise NotImplementedError

    def referee(self, ma: Bits, mb: Bits, rnd: SharedRandomness | None = None) -> Verdict:
        raise NotImplementedError

    def expected(self, x: int, y: int) -> Verdict:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    @property
    def cost_bits(self) -> int:
        raise NotImplementedError

    # -- role split (overridden by symmetrize wrappers) ------------------
    def encode_a(self, v, rnd):
        return self.encode(v, rnd)

    def encode_b(self, v, rnd):
        return self.encode(v, rnd)

    def support_a(self, v):
        return self.support(v)

    def support_b(self, v):
        return self.support(v)

    @property
    def cost_bits_a(self):
        return self.cost_bits

    @property
    def cost_bits_b(self):
        return self.cost_bits

    @property
    def symmetric(self) -> bool:
        return type(self).encode_a is SmpProtocol.encode_a and (
            type(self).encode_b is SmpProtocol.encode_b
        )

    # -- running ----------------------------------------------------------
    def draw_support(self, x: int, y: int):
        return merge_support(self.support_a(x), self.support_b(y))

    def run(self, x: int, y: int, rnd: SharedRandomness) -> TrialResult:
        ma = self.encode_a(x, rnd)
        mb = self.encode_b(y, rnd)
        if ma.length != self.cost_bits_a or mb.length != self.cost_bits_b:
            raise InputError("encoder produced a message of the wrong width")
        verdict = self.referee(ma, mb, rnd)
        return TrialResult(x, y, ma, mb, verdict, self.expected(x, y))

    def exact_error(self, x: int, y: int, cap: int = 1 << 24) -> Fraction:
        """P[verdict != expected] by enumerating every draw assignment."""
        support = self.draw_support(x, y)
        total = support_size(support)
        bad = 0
        expected = self.expected(x, y)
        for assignment in enumerate_assignments(support, cap=cap):
            rnd = TableRandomness(assignment)
            if self.run(x, y, rnd).verdict != expected:
                bad += 1
        return Fraction(bad, total)

    def monte_carlo_error(self, x: int, y: int, trials: int, seed: int) -> Fraction:
        master = random.Random(seed)
        bad = 0
        for _ in range(trials):
            rnd = HashRandomness(master.getrandbits(63))
            if not self.run(x, y, rnd).correct:
                bad += 1
        return Fraction(bad, trials)


class SymmetrizedProtocol(SmpProtocol):
    """Role-free wrapper: send both encodings, judge both cross pairings.

    The referee evaluates the inner protocol on (a-part of x, b-part of y)
    and on (a-part of y, b-part of x) and returns the more pessimistic
    verdict, so a one-sided inner protocol stays one-sided and the cost is
    the sum of the two inner widths on each side.
    """

    def __init__(self, inner: SmpProtocol):
        self.inner = inner
        self.name = f"symmetrized-{inner.name}"
        self.one_sided = inner.one_sided
        self.referee_reads_randomness = inner.referee_reads_randomness

    def params(self):
        return {"inner": self.inner.params()}

    @property
    def cost_bits(self):
        return self.inner.cost_bits_a + self.inner.cost_bits_b

    def encode(self, v, rnd):
        return self.inner.encode_a(v, rnd).concat(self.inner.encode_b(v, rnd))

    def support(self, v):
        return merge_support(self.inner.support_a(v), self.inner.support_b(v))

    def referee(self, ma, mb, rnd=None):
        wa = self.inner.cost_bits_a
        xa, xb = ma.take(0, wa), ma.take(wa, ma.length - wa)
        ya, yb = mb.take(0, wa), mb.take(wa, mb.length - wa)
        forward = self.inner.referee(xa, yb, rnd)
        backward = self.inner.referee(ya, xb, rnd)
        return verdict_max(forward, backward)

    def expected(self, x, y):
        return self.inner.expected(x, y)


def symmetrize(protocol: SmpProtocol) -> SymmetrizedProtocol:
    return SymmetrizedProtocol(protocol)


def as_fraction(eps) -> Fraction:
    value = Fraction(eps)
    if not 0 < value < 1:
        raise InputError("error budget must lie strictly between 0 and 1")
    return value


def eps_to_json(eps: Fraction):
    return [eps.numerator, eps.denominator]


def eps_from_json(doc) -> Fraction:
    return Fraction(doc[0], doc[1])


def ceil_log2(x: Fraction) -> int:
    """Smallest q with 2**q >= x (exact rational comparison)."""
    if x <= 0:
        raise InputError("ceil_log2 needs a positive argument")
    q = max(0, (x.numerator // x.denominator).bit_length() - 1)
    while 2**q < x:
        q += 1
    return q
