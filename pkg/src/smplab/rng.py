"""Shared randomness for simultaneous-message protocols.

Both encoders and (in the seed-visible model) the referee must derive the
same random values without talking to each other.  Values are therefore
keyed by ``(seed, label)``: any party holding the seed can reproduce the
draw for a label such as ``("color", 17)``.  Draws are backed by BLAKE2b,
so they are deterministic across platforms and independent of call order.

``TableRandomness`` replaces the hash with an explicit assignment of values
to labels; exhaustive error computations enumerate all assignments of the
labels a protocol declares it may touch.
"""

from __future__ import annotations

import hashlib
import itertools
from fractions import Fraction

from .errors import CapacityError, InputError


def _canon(label) -> bytes:
    """Stable byte encoding of a label (nested tuples of ints/strings)."""
    if isinstance(label, tuple):
        return b"(" + b",".join(_canon(x) for x in label) + b")"
    if isinstance(label, (int, str)):
        return repr(label).encode()
    raise InputError(f"label parts must be ints or strings, got {type(label)!r}")


class SharedRandomness:
    """Interface: uniform draws addressed by label."""

    def integer(self, label, n: int) -> int:
        raise NotImplementedError

    def bitvector(self, label, nbits: int) -> int:
        return self.integer(label, 1 << nbits)


class HashRandomness(SharedRandomness):
    """Pseudorandom draws keyed by (seed, label).

    The 128-bit digest makes the modulo bias below 2**-90 for any draw
    cardinality used here; we treat the draws as exactly uniform.
    """

    def __init__(self, seed: int):
        self._key = int(seed).to_bytes(16, "big", signed=True)

    def integer(self, label, n: int) -> int:
        if n <= 0:
            raise InputError("draw cardinality must be positive")
        if n == 1:
            return 0
        digest = hashlib.blake2b(_canon(label), key=self._key, digest_size=16).digest()
        return int.from_bytes(digest, "big") % n


class TableRandomness(SharedRandomness):
    """Draws read from a fixed table; unknown labels are an error.

    Raising on unknown labels keeps a protocol's declared draw support
    honest: if an encoder consumes a draw it did not declare, exhaustive
    enumeration fails loudly instead of silently under-counting.
    """

    def __init__(self, assignment: dict):
        self._assignment = assignment

    def integer(self, label, n: int) -> int:
        try:
            value = self._assignment[label]
        except KeyError:
            raise InputError(f"draw {label!r} missing from assignment") from None
        if not 0 <= value < n:
            raise InputError(f"assigned value {value} out of range for {label!r}")
        return value


def derive_seed(master: int, *parts) -> int:
    """A 63-bit stream seed derived from a master seed and a label path."""
    key = int(master).to_bytes(16, "big", signed=True)
    digest = hashlib.blake2b(_canon(tuple(parts)), key=key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def support_size(support: list[tuple]) -> int:
    total = 1
    for _, card in support:
        total *= card
    return total


def enumerate_assignments(support: list[tuple], cap: int = 1 << 24):
    """Yield every assignment of values to the labels in ``support``.

    ``support`` is a list of (label, cardinality) pairs; the product of the
    cardinalities is the size of the enumerated space and must stay under
    ``cap``.
    """
    labels = [label for label, _ in support]
    if len(set(labels)) != len(labels):
        raise InputError("duplicate labels in draw support")
    total = support_size(support)
    if total > cap:
        raise CapacityError(f"draw space of size {total} exceeds cap {cap}")
    ranges = [range(card) for _, card in support]
    for values in itertools.product(*ranges):
        yield dict(zip(labels, values))


def exact_probability(support: list[tuple], event, cap: int = 1 << 24) -> Fraction:
    """Exact Pr[event(randomness)] over the uniform product space."""
    total = support_size(support)
    hits = sum(1 for a in enumerate_assignments(support, cap) if event(TableRandomness(a)))
    return Fraction(hits, total)
