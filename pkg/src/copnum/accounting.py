"""Which difference elements k let a single cop guard which robber moves.

A cop sitting at robber + gamma*k punishes every robber move a with
a - k in S u {0}: it answers with b = a - k and the gap shrinks by k.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .cayley import BoundaryClass, GameInstance, classify_boundary
from .errors import BoundaryInstance, NoValidPair, PreconditionError, ZeroK
from .groups import Element


@dataclass(frozen=True)
class GuardCertificate:
    k: Element
    guarded: tuple[Element, ...]
    response: dict[Element, Element]

    def __len__(self) -> int:
        return len(self.guarded)

    def check(self, inst: GameInstance) -> None:
        G = inst.group
        if self.k == G.zero:
            raise ZeroK("certificate with k = 0")
        allowed = inst.S_set | {G.zero}
        for a in self.guarded:
            b = self.response[a]
            if b not in allowed or G.sub(a, b) != self.k:
                raise PreconditionError(f"bad response {a} -> {b} for k={self.k}")


def accounted_set(inst: GameInstance, k: Element) -> GuardCertificate:
    G = inst.group
    if k == G.zero:
        raise ZeroK("k must be nonzero")
    allowed = inst.S_set | {G.zero}
    response = {}
    for a in inst.T:
        b = G.sub(a, k)
        if b in allowed:
            response[a] = b
    return GuardCertificate(k, tuple(response), response)


def difference_tally(inst: GameInstance) -> Counter:
    """Multiplicities of the multiset {a - b : a in T, b in S u {0}, a != b}."""
    G = inst.group
    tally: Counter = Counter()
    for a in inst.T:
        for b in (G.zero,) + inst.S:
            if a != b:
                tally[G.sub(a, b)] += 1
    return tally


def pigeonhole_floor(inst: GameInstance) -> int:
    return math.ceil(inst.t * inst.s / (inst.n - 1))


def best_accounting_element(inst: GameInstance) -> GuardCertificate:
    if classify_boundary(inst) is not BoundaryClass.NOT_BOUNDARY:
        raise BoundaryInstance(f"{inst!r} is a boundary value")
    tally = difference_tally(inst)
    best = max(tally.values())
    k = min(x for x, c in tally.items() if c == best)
    return accounted_set(inst, k)


def frankl_pair(inst: GameInstance) -> GuardCertificate:
    """k = a + b for the first pair of distinct robber moves with a + b != 0."""
    if inst.directed:
        raise PreconditionError("the pairing argument needs S = -S")
    G = inst.group
    T = inst.T
    for i, a in enumerate(T):
        for b in T[i + 1 :]:
            k = G.add(a, b)
            if k != G.zero:
                cert = accounted_set(inst, k)
                assert a in cert.response and b in cert.response
                return cert
    raise NoValidPair(f"no pair a, b in T with a + b != 0 (T = {T})")


def single_move_certificate(inst: GameInstance) -> GuardCertificate:
    """Directed fallback: k = a guards a itself (reply: stay)."""
    if not inst.T:
        raise PreconditionError("T is empty")
    return accounted_set(inst, inst.T[0])
