"""Game instances (G, S, T) on abelian Cayley graphs.

The cops move with S and the robber with T, a subset of S.  S never
contains the identity: a zero in the input is stripped, and staying put is
always legal for both sides (every vertex carries an implicit loop).
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import EmptyS, NonGenerating, PreconditionError, TNotSubset, UnknownFormat
from .groups import AbelianGroup, Element, FiniteAbelianGroup, is_generating


class BoundaryClass(enum.Enum):
    NOT_BOUNDARY = "NotBoundary"
    EMPTY_T = "EmptyT"
    COMPLETE_GRAPH = "CompleteGraph"
    TINY_GROUP = "TinyGroup"
    INVERSE_PAIR = "InversePair"
    SINGLETON_T = "SingletonT"


Selector = Literal["cop", "robber"]


@dataclass(frozen=True, eq=False)
class GameInstance:
    group: FiniteAbelianGroup
    S: tuple[Element, ...]
    T: tuple[Element, ...]
    directed: bool

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def s(self) -> int:
        return len(self.S)

    @property
    def t(self) -> int:
        return len(self.T)

    @property
    def zero(self) -> Element:
        return self.group.zero

    def moveset(self, selector: Selector) -> tuple[Element, ...]:
        if selector == "cop":
            return self.S
        if selector == "robber":
            return self.T
        raise PreconditionError(f"unknown moveset selector {selector!r}")

    def moves_with_stay(self, selector: Selector) -> tuple[Element, ...]:
        """Legal steps including the stay move, in lexicographic order."""
        return tuple(sorted((self.zero,) + self.moveset(selector)))

    @cached_property
    def S_set(self) -> frozenset[Element]:
        return frozenset(self.S)

    @cached_property
    def T_set(self) -> frozenset[Element]:
        return frozenset(self.T)

    def key(self) -> tuple:
        return (repr(self.group), self.S, self.T)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GameInstance) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"GameInstance({self.group!r}, |S|={self.s}, |T|={self.t}, {kind})"

    def with_T(self, T: Iterable[Element]) -> "GameInstance":
        return build_instance(self.group, self.S, T)

    @cached_property
    def step_tables(self) -> dict[str, np.ndarray]:
        """Index tables: table[sel][v, j] = index of v + move_j (stay included)."""
        G = self.group
        add = G.add_table
        out = {}
        for sel in ("cop", "robber"):
            cols = [G.index(m) for m in self.moves_with_stay(sel)]
            out[sel] = np.ascontiguousarray(add[:, cols])
        return out


def build_instance(
    group: FiniteAbelianGroup,
    S: Iterable[Element | Sequence[int] | int],
    T: Iterable[Element | Sequence[int] | int] | None = None,
    directed_hint: bool | None = None,
) -> GameInstance:
    zero = group.zero
    S_clean = sorted({group.coerce(x) for x in S} - {zero})
    T_clean = sorted({group.coerce(x) for x in (S_clean if T is None else T)} - {zero})
    # the trivial group is generated by the empty set
    if not S_clean and group.order > 1:
        raise EmptyS("S is empty after removing the identity")
    if not set(T_clean) <= set(S_clean):
        raise TNotSubset(f"T is not a subset of S: {sorted(set(T_clean) - set(S_clean))}")
    if not is_generating(group, S_clean):
        raise NonGenerating(f"S does not generate {group!r}")
    directed = {group.neg(s) for s in S_clean} != set(S_clean)
    if directed_hint is not None and directed_hint != directed:
        raise PreconditionError(
            f"directed_hint={directed_hint} but S {'is not' if directed else 'is'} symmetric"
        )
    return GameInstance(group, tuple(S_clean), tuple(T_clean), directed)


def classify_boundary(inst: GameInstance) -> BoundaryClass:
    if inst.t == 0:
        return BoundaryClass.EMPTY_T
    if inst.s == inst.n - 1:
        return BoundaryClass.COMPLETE_GRAPH
    if inst.n <= 2:
        return BoundaryClass.TINY_GROUP
    if not inst.directed:
        if inst.t == 2 and inst.group.neg(inst.T[0]) == inst.T[1]:
            return BoundaryClass.INVERSE_PAIR
        if inst.t == 1:
            return BoundaryClass.SINGLETON_T
    return BoundaryClass.NOT_BOUNDARY


def out_neighbors(inst: GameInstance, v: Element, selector: Selector) -> set[Element]:
    G = inst.group
    return {v} | {G.add(v, m) for m in inst.moveset(selector)}


def distances_to(inst: GameInstance, targets: Iterable[Element], selector: Selector = "cop") -> dict[Element, int]:
    """Length of a shortest forward walk from each vertex into ``targets``."""
    G = inst.group
    moves = inst.moveset(selector)
    dist = {x: 0 for x in targets}
    queue = deque(dist)
    while queue:
        y = queue.popleft()
        for m in moves:
            x = G.sub(y, m)
            if x not in dist:
                dist[x] = dist[y] + 1
                queue.append(x)
    return dist


def _label(g: Element) -> str:
    return "(" + ",".join(str(c) for c in g) + ")"


def export_graph(inst: GameInstance, format: str) -> bytes:
    if format == "json":
        return instance_to_json(inst).encode()
    if format != "dot":
        raise UnknownFormat(f"unknown export format {format!r}")
    G = inst.group
    kind, arrow = ("digraph", "->") if inst.directed else ("graph", "--")
    lines = [f"{kind} cayley {{", "  graph [reflexive=true];"]
    for g in G.elements:
        lines.append(f'  "{_label(g)}";')
    seen = set()
    for u in G.elements:
        for s in inst.S:
            v = G.add(u, s)
            if not inst.directed:
                edge = tuple(sorted((u, v)))
                if edge in seen:
                    continue
                seen.add(edge)
            lines.append(f'  "{_label(u)}" {arrow} "{_label(v)}";')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def instance_to_json(inst: GameInstance) -> str:
    if not isinstance(inst.group, AbelianGroup):
        raise UnknownFormat("only product-of-cyclic groups have a JSON encoding")
    doc = {
        "factors": list(inst.group.factors),
        "S": [list(s) for s in inst.S],
        "T": [list(t) for t in inst.T],
    }
    return json.dumps(doc, sort_keys=True)


def instance_from_json(text: str | bytes | dict) -> GameInstance:
    doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    G = AbelianGroup(doc["factors"])
    S = [tuple(x) for x in doc["S"]]
    T = [tuple(x) for x in doc.get("T", doc["S"])]
    return build_instance(G, S, T)


@dataclass(frozen=True)
class GeneralGraph:
    """A reflexive digraph given by explicit arcs (not necessarily Cayley)."""

    vertices: tuple
    arcs: tuple[tuple[int, int], ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def out_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.vertices]
        for u, v in self.arcs:
            if v != u and v not in out[u]:
                out[u].append(v)
        for lst in out:
            lst.sort()
        return out

    def is_strongly_connected(self) -> bool:
        n = self.n
        if n == 0:
            return False
        rev: list[list[int]] = [[] for _ in range(n)]
        for u, outs in enumerate(self.out_lists):
            for v in outs:
                rev[v].append(u)
        for adj in (self.out_lists, rev):
            seen = {0}
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            if len(seen) != n:
                return False
        return True

    def to_json(self) -> str:
        verts = [list(v) if isinstance(v, tuple) else v for v in self.vertices]
        return json.dumps({"vertices": verts, "arcs": [list(a) for a in self.arcs]}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str | bytes | dict) -> "GeneralGraph":
        doc = json.loads(text) if isinstance(text, (str, bytes)) else text
        verts = tuple(tuple(v) if isinstance(v, list) else v for v in doc["vertices"])
        arcs = tuple((int(u), int(v)) for u, v in doc["arcs"])
        n = len(verts)
        if any(not (0 <= u < n and 0 <= v < n) for u, v in arcs):
            raise PreconditionError("arc endpoint out of range")
        return cls(verts, arcs)


def cayley_as_general(inst: GameInstance) -> GeneralGraph:
    G = inst.group
    arcs = tuple(
        (i, G.index(G.add(u, s))) for i, u in enumerate(G.elements) for s in inst.S
    )
    return GeneralGraph(tuple(G.elements), arcs)


def load_graph(text: str | bytes) -> GameInstance | GeneralGraph:
    """Read either JSON flavor: Cayley ({"factors", "S", "T"}) or general ({"vertices", "arcs"})."""
    doc = json.loads(text)
    if "factors" in doc:
        return instance_from_json(doc)
    if "arcs" in doc:
        return GeneralGraph.from_json(doc)
    raise UnknownFormat("JSON document is neither a Cayley nor a general graph")
