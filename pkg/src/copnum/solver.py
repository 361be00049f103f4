"""Exact k-cop game solver by retrograde analysis.

The cop team's turn is split into k single-cop sub-moves.  A state is a
tuple of cop vertices whose first ``phase`` entries have already moved
this round (sorted among themselves), followed by the unmoved cops (also
sorted); the next mover is always the smallest unmoved cop.  Phase k means
the robber is to move.  On Cayley instances the robber can be pinned at
the identity (``translation=True``): a robber step by t shifts every cop
by -t instead.

Cop-win states are the least fixpoint of "captured, or cop to move with a
cop-win successor, or robber to move with only cop-win successors".  It is
computed layer by layer from the captured states over a reversed-arc
index, with an unresolved-successor counter on every robber state, so the
layer number is the optimal capture depth in plies (cop sub-moves and
robber moves both count).
"""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .cayley import GameInstance, GeneralGraph
from .errors import BudgetExceeded, PreconditionError

log = logging.getLogger(__name__)

DEFAULT_ARC_BUDGET = 2 * 10**8
BUDGET_ENV = "COPNUM_BUDGET"

COPS_WIN = "CopsWin"
ROBBER_WIN = "RobberWin"


def budget_from_env(default: int = DEFAULT_ARC_BUDGET) -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(float(raw)) if raw else default


@dataclass(frozen=True)
class SolverOptions:
    translation: bool = True
    budget: int = DEFAULT_ARC_BUDGET


@dataclass(frozen=True)
class Arena:
    """Index-level view of the board handed to the solver."""

    n: int
    cop_steps: np.ndarray  # (n, wc) successor vertex per cop step, column 0 = stay
    robber_steps: np.ndarray  # (n, wr)
    pinned: bool
    zero: int = 0
    sub: np.ndarray | None = None  # sub[v, r] = v - r, pinned arenas only
    robber_shift: np.ndarray | None = None  # (wr, n): v - t_c

    @classmethod
    def from_instance(cls, inst: GameInstance, translation: bool = True) -> "Arena":
        G = inst.group
        cop = inst.step_tables["cop"]
        rob = inst.step_tables["robber"]
        if not translation:
            return cls(G.order, cop, rob, pinned=False)
        add = G.add_table
        neg = G.neg_table
        sub = np.ascontiguousarray(add[:, neg])
        moves = [G.index(m) for m in inst.moves_with_stay("robber")]
        shift = np.ascontiguousarray(sub[:, moves].T)
        return cls(G.order, cop, rob, pinned=True, zero=G.index(G.zero), sub=sub, robber_shift=shift)

    @classmethod
    def from_general(cls, graph: GeneralGraph) -> "Arena":
        lists = [[v] + outs for v, outs in enumerate(graph.out_lists)]
        width = max(len(x) for x in lists)
        steps = np.array([x + [x[0]] * (width - len(x)) for x in lists], dtype=np.int32)
        return cls(graph.n, steps, steps, pinned=False)


@dataclass(frozen=True)
class GameState:
    """cops: first ``phase`` entries moved this round; phase == k: robber to move."""

    cops: tuple[int, ...]
    robber: int
    phase: int

    def is_robber_to_move(self) -> bool:
        return self.phase == len(self.cops)


def _multisets(n: int, m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((1, 0), dtype=np.int32)
    flat = np.fromiter(
        (v for combo in combinations_with_replacement(range(n), m) for v in combo),
        dtype=np.int32,
    )
    return flat.reshape(-1, m)


def _n_multisets(n: int, m: int) -> int:
    return math.comb(n + m - 1, m)


def estimate(arena: Arena, k: int) -> tuple[int, int]:
    """(state count, expanded arc count) for a k-cop solve."""
    mult = 1 if arena.pinned else arena.n
    wc = arena.cop_steps.shape[1]
    wr = arena.robber_steps.shape[1]
    states = arcs = 0
    for j in range(k + 1):
        size = _n_multisets(arena.n, j if j < k else k) * (_n_multisets(arena.n, k - j) if j < k else 1) * mult
        states += size
        arcs += size * (wc if j < k else wr)
    return states, arcs


class _Layout:
    """Dense numbering of all states, phase by phase."""

    def __init__(self, arena: Arena, k: int):
        self.arena = arena
        self.k = k
        self.n = arena.n
        self.codes: list[np.ndarray] = []
        offsets = [0]
        for j in range(k + 1):
            X = self.enumerate_phase(j)
            c = self.encode(X)
            if c.size > 1 and not np.all(c[1:] > c[:-1]):
                raise AssertionError("phase enumeration is not lexicographic")
            self.codes.append(c)
            offsets.append(offsets[-1] + c.size)
        self.offsets = offsets
        self.total = offsets[-1]

    @property
    def width(self) -> int:
        return self.k + (0 if self.arena.pinned else 1)

    def enumerate_phase(self, j: int) -> np.ndarray:
        n, k = self.n, self.k
        if j == k:
            X = _multisets(n, k)
        else:
            P = _multisets(n, j)
            Q = _multisets(n, k - j)
            X = np.concatenate([np.repeat(P, len(Q), axis=0), np.tile(Q, (len(P), 1))], axis=1)
        if not self.arena.pinned:
            X = np.concatenate(
                [np.repeat(X, n, axis=0), np.tile(np.arange(n, dtype=np.int32), len(X))[:, None]], axis=1
            )
        return X

    def encode(self, X: np.ndarray) -> np.ndarray:
        code = np.zeros(len(X), dtype=np.int64)
        for col in range(X.shape[1]):
            code = code * self.n + X[:, col]
        return code

    def decode(self, phase: int, pos: np.ndarray) -> np.ndarray:
        code = self.codes[phase][pos].copy()
        out = np.empty((len(code), self.width), dtype=np.int32)
        for col in range(self.width - 1, -1, -1):
            out[:, col] = code % self.n
            code //= self.n
        return out

    def lookup(self, phase: int, Y: np.ndarray) -> np.ndarray:
        c = self.encode(Y)
        pos = np.searchsorted(self.codes[phase], c)
        return self.offsets[phase] + pos

    def phase_of(self, idx: int) -> int:
        return int(np.searchsorted(self.offsets, idx, side="right") - 1)

    def terminal(self, X: np.ndarray) -> np.ndarray:
        k = self.k
        if self.arena.pinned:
            return np.any(X == self.arena.zero, axis=1)
        return np.any(X[:, :k] == X[:, k : k + 1], axis=1)

    def successors(self, j: int, X: np.ndarray, col: int) -> np.ndarray:
        """Global index of the successor of each row of phase-j states via step ``col``."""
        k, arena = self.k, self.arena
        if j < k:
            moved = arena.cop_steps[X[:, j], col]
            pre = np.concatenate([X[:, :j], moved[:, None]], axis=1)
            pre.sort(axis=1)
            Y = np.concatenate([pre, X[:, j + 1 :]], axis=1)
            return self.lookup(j + 1, Y)
        if arena.pinned:
            Y = arena.robber_shift[col][X]
            Y.sort(axis=1)
            return self.lookup(0, Y)
        Y = X.copy()
        Y[:, k] = arena.robber_steps[X[:, k], col]
        return self.lookup(0, Y)

    def n_steps(self, j: int) -> int:
        return self.arena.cop_steps.shape[1] if j < self.k else self.arena.robber_steps.shape[1]


def _gather(indptr: np.ndarray, pred: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    starts = indptr[frontier]
    lens = indptr[frontier + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return pred[:0]
    excl = np.cumsum(lens) - lens
    idx = np.arange(total, dtype=np.int64) + np.repeat(starts - excl, lens)
    return pred[idx]


@dataclass
class SolveResult:
    winner: str
    k: int
    arena: Arena
    layout: _Layout = field(repr=False)
    won: np.ndarray = field(repr=False)
    depth: np.ndarray = field(repr=False)
    placement: tuple[int, ...] | None
    placement_depth: int | None
    n_states: int
    n_arcs: int
    seconds: float

    @property
    def cops_win(self) -> bool:
        return self.winner == COPS_WIN

    # --- state addressing -------------------------------------------------
    def canonical(self, cops: Sequence[int], robber: int, phase: int = -1) -> GameState:
        """Canonical state for absolute positions.  ``phase=-1`` means robber to move."""
        k = self.k
        phase = k if phase < 0 else phase
        cops = list(cops)
        if len(cops) != k:
            raise PreconditionError(f"expected {k} cops, got {len(cops)}")
        moved, unmoved = sorted(cops[:phase]), sorted(cops[phase:])
        return GameState(tuple(moved + unmoved), int(robber), phase)

    def _row(self, state: GameState) -> np.ndarray:
        arena = self.arena
        if arena.pinned:
            rel = [int(arena.sub[c, state.robber]) for c in state.cops]
            j = state.phase
            row = sorted(rel[:j]) + sorted(rel[j:])
        else:
            row = list(state.cops) + [state.robber]
        return np.array([row], dtype=np.int32)

    def index(self, state: GameState) -> int:
        return int(self.layout.lookup(state.phase, self._row(state))[0])

    def decode(self, idx: int) -> GameState:
        j = self.layout.phase_of(idx)
        row = self.layout.decode(j, np.array([idx - self.layout.offsets[j]]))[0]
        if self.arena.pinned:
            return GameState(tuple(int(x) for x in row), self.arena.zero, j)
        return GameState(tuple(int(x) for x in row[: self.k]), int(row[self.k]), j)

    def is_cop_win(self, state: GameState) -> bool:
        return bool(self.won[self.index(state)])

    def capture_depth(self, state: GameState) -> int | None:
        d = int(self.depth[self.index(state)])
        return d if d >= 0 else None

    def win_table(self) -> dict[GameState, str]:
        """Full table keyed by canonical state (only sensible for small solves)."""
        return {
            self.decode(i): (COPS_WIN if self.won[i] else ROBBER_WIN) for i in range(self.layout.total)
        }

    def successor_indices(self, idx: int) -> np.ndarray:
        j = self.layout.phase_of(idx)
        X = self.layout.decode(j, np.array([idx - self.layout.offsets[j]]))
        return np.array([self.layout.successors(j, X, c)[0] for c in range(self.layout.n_steps(j))])

    def is_terminal(self, idx: int) -> bool:
        j = self.layout.phase_of(idx)
        X = self.layout.decode(j, np.array([idx - self.layout.offsets[j]]))
        return bool(self.layout.terminal(X)[0])


def solve_fixed_cops(
    board: GameInstance | GeneralGraph | Arena, k: int, options: SolverOptions | None = None
) -> SolveResult:
    options = options or SolverOptions()
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if isinstance(board, Arena):
        arena = board
    elif isinstance(board, GeneralGraph):
        arena = Arena.from_general(board)
    else:
        arena = Arena.from_instance(board, translation=options.translation)
    n_states, n_arcs = estimate(arena, k)
    if n_arcs > options.budget:
        raise BudgetExceeded(n_arcs, options.budget)
    t0 = time.perf_counter()
    layout = _Layout(arena, k)
    total = layout.total
    won = np.zeros(total, dtype=bool)
    depth = np.full(total, -1, dtype=np.int32)

    srcs, dsts = [], []
    for j in range(k + 1):
        X = layout.enumerate_phase(j)
        base = layout.offsets[j]
        term = layout.terminal(X)
        won[base : base + len(X)] = term
        live = np.nonzero(~term)[0]
        Xl = X[live]
        src = (base + live).astype(np.int32)
        for col in range(layout.n_steps(j)):
            dsts.append(layout.successors(j, Xl, col).astype(np.int32))
            srcs.append(src)
        del X, Xl
    src = np.concatenate(srcs)
    dst = np.concatenate(dsts)
    del srcs, dsts
    order = np.argsort(dst, kind="stable")
    pred = src[order]
    counts = np.bincount(dst, minlength=total)
    indptr = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    del order, src, dst, counts

    rob0 = layout.offsets[k]
    counter = np.full(total - rob0, layout.n_steps(k), dtype=np.int32)
    depth[won] = 0
    frontier = np.nonzero(won)[0]
    d = 0
    while frontier.size:
        p = _gather(indptr, pred, frontier)
        p = p[~won[p]]
        cop_new = np.unique(p[p < rob0])
        rp = p[p >= rob0]
        if rp.size:
            u, cnt = np.unique(rp, return_counts=True)
            counter[u - rob0] -= cnt
            rob_new = u[counter[u - rob0] == 0]
        else:
            rob_new = rp
        frontier = np.concatenate([cop_new, rob_new]).astype(np.int64)
        d += 1
        won[frontier] = True
        depth[frontier] = d
    del pred, indptr

    placement, pdepth = _initial_placement(layout, won, depth)
    elapsed = time.perf_counter() - t0
    winner = COPS_WIN if placement is not None else ROBBER_WIN
    log.info("k=%d: %s (%d states, %d arcs, %.2fs)", k, winner, n_states, n_arcs, elapsed)
    return SolveResult(winner, k, arena, layout, won, depth, placement, pdepth, n_states, n_arcs, elapsed)


def _initial_placement(layout: _Layout, won: np.ndarray, depth: np.ndarray):
    """Cops place first, then the robber, then the cops move.

    Returns the lexicographically first cop multiset minimizing the worst
    capture depth over robber placements, or (None, None) if no multiset
    wins against every placement.
    """
    arena, k, n = layout.arena, layout.k, layout.n
    C = _multisets(n, k)
    ok = np.ones(len(C), dtype=bool)
    worst = np.zeros(len(C), dtype=np.int64)
    for r in range(n):
        if arena.pinned:
            Y = arena.sub[C, r]
            Y.sort(axis=1)
        else:
            Y = np.concatenate([C, np.full((len(C), 1), r, dtype=np.int32)], axis=1)
        idx = layout.lookup(0, Y)
        ok &= won[idx]
        worst = np.maximum(worst, depth[idx])
    if not ok.any():
        return None, None
    cand = np.nonzero(ok)[0]
    best = cand[np.argmin(worst[cand])]
    return tuple(int(x) for x in C[best]), int(worst[best])


@dataclass(frozen=True)
class NotFoundBelow:
    max_k: int


def cop_number(
    board: GameInstance | GeneralGraph, max_k: int, options: SolverOptions | None = None
) -> int | NotFoundBelow:
    if max_k < 1:
        raise PreconditionError("max_k must be >= 1")
    for k in range(1, max_k + 1):
        if solve_fixed_cops(board, k, options).cops_win:
            return k
    return NotFoundBelow(max_k)


class CopPolicy:
    """Depth-minimizing cop play read off a solved table."""

    def __init__(self, result: SolveResult):
        self.result = result

    def placement(self) -> tuple[int, ...] | None:
        return self.result.placement

    def submove(self, state: GameState) -> int:
        """New vertex for the next mover (the smallest unmoved cop)."""
        res = self.result
        j = state.phase
        if state.is_robber_to_move():
            raise PreconditionError("robber to move")
        mover = state.cops[j]
        idx = res.index(state)
        if res.is_terminal(idx) or not res.won[idx]:
            return mover
        succ = res.successor_indices(idx)
        depths = np.where(res.won[succ], res.depth[succ], np.iinfo(np.int32).max)
        col = int(np.argmin(depths))
        if res.arena.pinned:
            rel = int(res.arena.sub[mover, state.robber])
            new_rel = int(res.arena.cop_steps[rel, col])
            return int(_add_back(res.arena, new_rel, state.robber))
        return int(res.arena.cop_steps[mover, col])

    def team_move(self, cops: Sequence[int], robber: int) -> tuple[int, ...]:
        """Move every cop once; result is aligned with ``sorted(cops)``."""
        unmoved = sorted(cops)
        moved: list[int] = []
        for j in range(len(unmoved)):
            state = GameState(tuple(sorted(moved) + unmoved[j:]), robber, j)
            moved.append(self.submove(state))
        return tuple(moved)


def _add_back(arena: Arena, rel: int, robber: int) -> int:
    # v - robber == rel  <=>  v = rel + robber; sub[:, robber] is a bijection
    col = arena.sub[:, robber]
    return int(np.nonzero(col == rel)[0][0])


class RobberPolicy:
    """Evasive robber play: stay in robber-win states, else delay capture."""

    def __init__(self, result: SolveResult):
        self.result = result

    def place(self, cops: Sequence[int]) -> int:
        res = self.result
        best, best_d = 0, -1
        for r in range(res.arena.n):
            idx = res.index(res.canonical(cops, r, phase=0))
            if not res.won[idx]:
                return r
            if res.depth[idx] > best_d:
                best, best_d = r, int(res.depth[idx])
        return best

    def move(self, cops: Sequence[int], robber: int) -> int:
        """New robber vertex (possibly unchanged)."""
        res = self.result
        idx = res.index(res.canonical(cops, robber))
        succ = res.successor_indices(idx)
        if not res.won[idx]:
            col = int(np.nonzero(~res.won[succ])[0][0])
        else:
            col = int(np.argmax(res.depth[succ]))
        return int(res.arena.robber_steps[robber, col])


def extract_policies(result: SolveResult) -> tuple[CopPolicy, RobberPolicy]:
    return CopPolicy(result), RobberPolicy(result)
