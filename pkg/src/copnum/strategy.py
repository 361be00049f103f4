"""Constructive cop strategies on abelian Cayley graphs.

A plan is a tree.  A ``Recurse`` node picks an element k, lets its cops
play the game on G/<k> until one of them sits in the robber's <k>-coset,
turns that cop into a guard for every robber move accounted for by k, and
hands the remaining cops to the residual plan on the shrunken robber
moveset.  Leaves are direct boundary tactics.

Executors track each cop by its offset from the robber (cop - robber), so
a subtree that copies the robber's move is literally frozen.  That is how
the residual strategy is paused while a guard answers a guarded move.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Protocol, Union

from .accounting import GuardCertificate, best_accounting_element, frankl_pair, single_move_certificate
from .bounds import constants_for_order
from .cayley import (
    BoundaryClass,
    GameInstance,
    build_instance,
    classify_boundary,
    distances_to,
    instance_from_json,
    instance_to_json,
)
from .errors import IllegalAdversaryMove, IllegalMove, PreconditionError, StrategyInvariantError
from .groups import Element, QuotientMap, cyclic_subgroup, discrete_log, quotient_by_cyclic

Flavor = Literal["frankl", "gstar"]


# --- plans -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryTactic:
    kind: BoundaryClass


@dataclass(frozen=True, eq=False)
class Recurse:
    certificate: GuardCertificate
    quotient_map: QuotientMap
    quotient_plan: "StrategyPlan"
    residual_plan: "StrategyPlan"


@dataclass(frozen=True, eq=False)
class StrategyPlan:
    instance: GameInstance
    node: Union[BoundaryTactic, Recurse]
    cop_count: int

    @cached_property
    def lift(self) -> dict[Element, Element]:
        """Quotient step -> lexicographically smallest preimage in S u {0}."""
        node = self.node
        assert isinstance(node, Recurse)
        out: dict[Element, Element] = {}
        for s in self.instance.moves_with_stay("cop"):
            out.setdefault(node.quotient_map(s), s)
        return out

    @cached_property
    def dist_to_zero(self) -> dict[Element, int]:
        return distances_to(self.instance, [self.instance.zero])

    @cached_property
    def dist_to_line(self) -> dict[Element, int]:
        a = self.instance.T[0]
        return distances_to(self.instance, cyclic_subgroup(self.instance.group, a))

    def depth(self) -> int:
        if isinstance(self.node, BoundaryTactic):
            return 1
        return 1 + max(self.node.quotient_plan.depth(), self.node.residual_plan.depth())

    def describe(self, indent: int = 0) -> str:
        pad = "  " * indent
        inst = self.instance
        head = f"{pad}[{self.cop_count} cops] n={inst.n} |S|={inst.s} |T|={inst.t}"
        if isinstance(self.node, BoundaryTactic):
            return f"{head} boundary {self.node.kind.value}"
        cert = self.node.certificate
        lines = [
            f"{head} guard k={cert.k} covering {len(cert.guarded)} moves",
            f"{pad}  quotient:",
            self.node.quotient_plan.describe(indent + 2),
            f"{pad}  residual:",
            self.node.residual_plan.describe(indent + 2),
        ]
        return "\n".join(lines)


def _boundary_count(kind: BoundaryClass) -> int:
    return 2 if kind is BoundaryClass.INVERSE_PAIR else 1


def _frankl_certificate(inst: GameInstance) -> GuardCertificate:
    if inst.directed:
        return single_move_certificate(inst)
    return frankl_pair(inst)


def build_plan(inst: GameInstance, flavor: Flavor = "frankl", *, c_const: dict[str, float] | None = None) -> StrategyPlan:
    """Recursive plan; ``gstar`` switches to the best pigeonhole element above c*sqrt(n)."""
    if flavor not in ("frankl", "gstar"):
        raise PreconditionError(f"unknown flavor {flavor!r}")
    if flavor == "gstar" and c_const is None:
        c_const = {v: constants_for_order(v, inst.n).c for v in ("undirected", "directed")}
    kind = classify_boundary(inst)
    if kind is not BoundaryClass.NOT_BOUNDARY:
        return StrategyPlan(inst, BoundaryTactic(kind), _boundary_count(kind))

    sub_flavor: Flavor = "frankl"
    cert = None
    if flavor == "gstar":
        c = c_const["directed" if inst.directed else "undirected"]
        if inst.t > c * math.sqrt(inst.n):
            cert = best_accounting_element(inst)
            sub_flavor = "gstar"
    if cert is None:
        cert = _frankl_certificate(inst)

    G = inst.group
    qmap = quotient_by_cyclic(G, cert.k)
    qzero = qmap.target.zero
    qS = {qmap(s) for s in inst.S} - {qzero}
    qT = {qmap(t) for t in inst.T} - {qzero}
    qinst = build_instance(qmap.target, qS, qT)
    qplan = build_plan(qinst, sub_flavor, c_const=c_const)
    residual = build_instance(G, inst.S, [t for t in inst.T if t not in cert.response])
    rplan = build_plan(residual, sub_flavor, c_const=c_const)
    count = max(qplan.cop_count, rplan.cop_count + 1)
    return StrategyPlan(inst, Recurse(cert, qmap, qplan, rplan), count)


def plan_cop_count(plan: StrategyPlan) -> int:
    node = plan.node
    if isinstance(node, BoundaryTactic):
        return _boundary_count(node.kind)
    return max(plan_cop_count(node.quotient_plan), plan_cop_count(node.residual_plan) + 1)


# --- executors -----------------------------------------------------------------

Offsets = dict[int, Element]
Moves = dict[int, Element]


class _Executor:
    def __init__(self, plan: StrategyPlan, cops: list[int], events: list, path: str):
        self.plan = plan
        self.inst = plan.instance
        self.G = plan.instance.group
        self.cops = cops
        self.events = events
        self.path = path

    def respond(self, a: Element, d: Offsets) -> Moves:
        """Moves for this node's cops, given the robber's last step ``a``
        and the offsets (cop - robber) after that step."""
        raise NotImplementedError

    def _toward(self, x: Element, dist: dict[Element, int]) -> Element:
        G = self.G
        best, best_d = G.zero, dist[x]
        for s in self.inst.moves_with_stay("cop"):
            dd = dist[G.add(x, s)]
            if dd < best_d:
                best, best_d = s, dd
        return best


class _BoundaryExecutor(_Executor):
    def respond(self, a: Element, d: Offsets) -> Moves:
        kind = self.plan.node.kind
        G = self.G
        if kind is BoundaryClass.INVERSE_PAIR:
            return self._squeeze(d)
        c = self.cops[0]
        if kind is BoundaryClass.SINGLETON_T:
            step = self.inst.T[0]
            if discrete_log(G, step, d[c]) is not None:
                return {c: G.neg(step)}
            return {c: self._toward(d[c], self.plan.dist_to_line)}
        # EmptyT, CompleteGraph, TinyGroup: walk straight at the robber
        return {c: self._toward(d[c], self.plan.dist_to_zero)}

    def _squeeze(self, d: Offsets) -> Moves:
        G = self.G
        step = self.inst.T[0]
        length = len(cyclic_subgroup(G, step))
        logs = {c: discrete_log(G, step, d[c]) for c in self.cops}
        if any(g is None for g in logs.values()):
            return {
                c: (G.zero if logs[c] is not None else self._toward(d[c], self.plan.dist_to_line))
                for c in self.cops
            }
        low, high = sorted(self.cops, key=lambda c: (logs[c], c))
        arc = logs[low] + (length - logs[high])
        prev = getattr(self, "_arc", None)
        if prev is not None and arc > prev:
            raise StrategyInvariantError(f"free arc did not shrink: {prev} -> {arc}")
        self._arc = arc - 2
        self.events.append({"squeeze": [low, high], "free_arc": arc, "node": self.path})
        return {low: G.neg(step), high: step}


class _RecurseExecutor(_Executor):
    def __init__(self, plan, cops, events, path):
        super().__init__(plan, cops, events, path)
        node: Recurse = plan.node
        self.cert = node.certificate
        self.k = node.certificate.k
        self.phi = node.quotient_map
        q_count = node.quotient_plan.cop_count
        self.pursuers = cops[:q_count]
        self.quotient = make_executor(node.quotient_plan, self.pursuers, events, path + "q")
        self.guard: int | None = None
        self.gamma: int | None = None
        self.residual: _Executor | None = None
        self.residual_cops: list[int] = []
        self._fresh = False

    def _establish(self, c: int, offset: Element, fresh: bool) -> None:
        gamma = discrete_log(self.G, self.k, offset)
        if gamma is None:
            raise StrategyInvariantError(f"cop {c} is not in the robber's <{self.k}>-coset")
        self.guard, self.gamma = c, gamma
        need = self.plan.node.residual_plan.cop_count
        self.residual_cops = [x for x in self.cops if x != c][:need]
        self.residual = make_executor(self.plan.node.residual_plan, self.residual_cops, self.events, self.path + "r")
        self._fresh = fresh
        self.events.append({"establish": c, "k": list(self.k), "gamma": gamma, "node": self.path})

    def respond(self, a: Element, d: Offsets) -> Moves:
        G = self.G
        if self.guard is None:
            qzero = self.phi.target.zero
            for c in self.pursuers:
                if self.phi(d[c]) == qzero:
                    self._establish(c, d[c], fresh=True)
                    break
        if self.guard is None:
            qd = {c: self.phi(d[c]) for c in self.pursuers}
            qmoves = self.quotient.respond(self.phi(a), qd)
            moves = {c: G.zero for c in self.cops}
            for c in self.pursuers:
                moves[c] = self.plan.lift[qmoves[c]]
            for c in self.pursuers:
                after = G.add(d[c], moves[c])
                if self.phi(after) == self.phi.target.zero:
                    self._establish(c, after, fresh=False)
                    break
            return moves

        moves = {c: G.zero for c in self.cops}
        g = self.guard
        sub_d = {c: d[c] for c in self.residual_cops}
        if self._fresh:
            self._fresh = False
            moves.update(self.residual.respond(G.zero, sub_d))
            return moves
        if a in self.cert.response:
            b = self.cert.response[a]
            moves[g] = b
            after = discrete_log(G, self.k, G.add(d[g], b))
            if after != self.gamma - 1:
                raise StrategyInvariantError(f"guard gap went {self.gamma} -> {after}, expected -1")
            self.events.append(
                {"guard": g, "k": list(self.k), "gamma_before": self.gamma, "gamma_after": after,
                 "node": self.path, "pause": list(self.residual_cops)}
            )
            self.gamma = after
            for c in self.residual_cops:
                moves[c] = a
            return moves
        moves[g] = a
        moves.update(self.residual.respond(a, sub_d))
        return moves


def make_executor(plan: StrategyPlan, cops: list[int], events: list, path: str = "") -> _Executor:
    if len(cops) < plan.cop_count:
        raise StrategyInvariantError(f"node needs {plan.cop_count} cops, got {len(cops)}")
    cops = cops[: plan.cop_count]
    if isinstance(plan.node, BoundaryTactic):
        return _BoundaryExecutor(plan, cops, events, path)
    return _RecurseExecutor(plan, cops, events, path)


# --- adversaries ------------------------------------------------------------------


class Adversary(Protocol):
    def place(self, inst: GameInstance, cops: list[Element]) -> Element: ...

    def move(self, inst: GameInstance, cops: list[Element], robber: Element) -> Element: ...


class RandomAdversary:
    """Uniform over T u {stay}; placement uniform over vertices."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def place(self, inst, cops):
        return self.rng.choice(inst.group.elements)

    def move(self, inst, cops, robber):
        return self.rng.choice(inst.moves_with_stay("robber"))


class GreedyAdversary:
    """Maximize the distance from the nearest cop (ties: lexicographic)."""

    name = "greedy"

    def __init__(self):
        self._dist: dict[GameInstance, dict[Element, int]] = {}

    def _gap(self, inst: GameInstance, cops, v: Element) -> int:
        dist = self._dist.get(inst)
        if dist is None:
            # distance from 0 to x under cop steps; translation gives cop -> v as x = v - cop
            G = inst.group
            neg = build_instance(G, [G.neg(s) for s in inst.S], [])
            dist = distances_to(neg, [G.zero])
            self._dist[inst] = dist
        G = inst.group
        return min(dist[G.sub(v, c)] for c in cops)

    def place(self, inst, cops):
        return max(inst.group.elements, key=lambda v: (self._gap(inst, cops, v), [-x for x in v]))

    def move(self, inst, cops, robber):
        G = inst.group
        best, best_gap = None, -1
        for t in inst.moves_with_stay("robber"):
            gap = self._gap(inst, cops, G.add(robber, t))
            if gap > best_gap:
                best, best_gap = t, gap
        return best


class OptimalAdversary:
    """The exact solver's evader for the plan's cop count."""

    name = "optimal"

    def __init__(self, inst: GameInstance, k: int, options=None):
        from .solver import RobberPolicy, solve_fixed_cops

        self.result = solve_fixed_cops(inst, k, options)
        self.policy = RobberPolicy(self.result)
        self.inst = inst

    def place(self, inst, cops):
        G = inst.group
        return G.element(self.policy.place([G.index(c) for c in cops]))

    def move(self, inst, cops, robber):
        G = inst.group
        new = self.policy.move([G.index(c) for c in cops], G.index(robber))
        return G.sub(G.element(new), robber)


# --- games --------------------------------------------------------------------------


@dataclass
class GameTranscript:
    instance: GameInstance
    plan_cop_count: int
    cop_starts: list[Element]
    robber_start: Element
    moves: list[dict] = field(default_factory=list)
    outcome: dict = field(default_factory=dict)

    @property
    def captured(self) -> bool:
        return self.outcome.get("kind") == "Captured"

    @property
    def capture_turn(self) -> int | None:
        return self.outcome.get("turn") if self.captured else None

    def cops_that_moved(self) -> set[int]:
        moved = set()
        prev = self.cop_starts
        for rec in self.moves:
            cops = [tuple(c) for c in rec["positions"]["cops"]]
            if rec["side"] == "cop":
                moved |= {i for i, (x, y) in enumerate(zip(prev, cops)) if x != y}
            prev = cops
        return moved

    def to_json(self) -> str:
        doc = {
            "instance": json.loads(instance_to_json(self.instance)),
            "plan_cop_count": self.plan_cop_count,
            "cop_starts": [list(c) for c in self.cop_starts],
            "robber_start": list(self.robber_start),
            "moves": self.moves,
            "outcome": self.outcome,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str | bytes) -> "GameTranscript":
        doc = json.loads(text)
        inst = instance_from_json(doc["instance"])
        return cls(
            inst,
            doc.get("plan_cop_count", len(doc["cop_starts"])),
            [tuple(c) for c in doc["cop_starts"]],
            tuple(doc["robber_start"]),
            doc["moves"],
            doc["outcome"],
        )


def default_step_cap(plan: StrategyPlan) -> int:
    n = plan.instance.n
    return 4 * n * n * (plan.cop_count + 1)


def execute_game(
    plan: StrategyPlan, adversary: Adversary, step_cap: int | None = None, seed: int = 0
) -> GameTranscript:
    """Play the plan from all cops at the identity; the step cap counts half-moves."""
    inst = plan.instance
    G = inst.group
    step_cap = default_step_cap(plan) if step_cap is None else step_cap
    if step_cap < 1:
        raise PreconditionError("step_cap must be >= 1")
    if hasattr(adversary, "reseed"):
        adversary.reseed(seed)
    m = plan.cop_count
    cops = [G.zero] * m
    robber = G.coerce(adversary.place(inst, list(cops)))
    tr = GameTranscript(inst, m, list(cops), robber)
    if robber in cops:
        tr.outcome = {"kind": "Captured", "turn": 0}
        return tr
    events: list = []
    root = make_executor(plan, list(range(m)), events)
    cop_steps = inst.S_set | {G.zero}
    rob_steps = inst.T_set | {G.zero}
    last = G.zero
    turn = 0
    while turn < step_cap:
        events.clear()
        offsets = {c: G.sub(cops[c], robber) for c in range(m)}
        moves = root.respond(last, offsets)
        for c in range(m):
            s = moves.get(c, G.zero)
            if s not in cop_steps:
                raise IllegalMove(f"strategy moved cop {c} by {s}, not in S u {{0}}")
            cops[c] = G.add(cops[c], s)
        turn += 1
        tr.moves.append(_record("cop", cops, robber, list(events)))
        if robber in cops:
            tr.outcome = {"kind": "Captured", "turn": turn}
            return tr
        if turn >= step_cap:
            break
        last = tuple(adversary.move(inst, list(cops), robber))
        if last not in rob_steps:
            raise IllegalAdversaryMove(f"robber step {last} is not in T u {{0}}")
        robber = G.add(robber, last)
        turn += 1
        tr.moves.append(_record("robber", cops, robber, []))
        if robber in cops:
            tr.outcome = {"kind": "Captured", "turn": turn}
            return tr
    tr.outcome = {"kind": "StepCapExceeded", "turn": turn}
    return tr


def _record(side: str, cops: list[Element], robber: Element, events: list) -> dict:
    rec = {"side": side, "positions": {"cops": [list(c) for c in cops], "robber": list(robber)}}
    if events:
        rec["events"] = events
    return rec


@dataclass
class ReplayReport:
    ok: bool
    errors: list[str]
    outcome: dict


def replay(tr: GameTranscript) -> ReplayReport:
    """Re-check every half-move's legality and the recorded outcome."""
    inst = tr.instance
    G = inst.group
    cop_steps = inst.S_set | {G.zero}
    rob_steps = inst.T_set | {G.zero}
    errors: list[str] = []
    cops = [tuple(c) for c in tr.cop_starts]
    robber = tuple(tr.robber_start)
    captured_at = 0 if robber in cops else None
    expected_side = "cop"
    for i, rec in enumerate(tr.moves, start=1):
        if captured_at is not None:
            errors.append(f"half-move {i} recorded after capture at {captured_at}")
            break
        side = rec["side"]
        if side != expected_side:
            errors.append(f"half-move {i}: expected {expected_side}, got {side}")
        new_cops = [tuple(c) for c in rec["positions"]["cops"]]
        new_robber = tuple(rec["positions"]["robber"])
        if len(new_cops) != len(cops):
            errors.append(f"half-move {i}: cop count changed")
            break
        if side == "cop":
            if new_robber != robber:
                errors.append(f"half-move {i}: robber moved on the cops' turn")
            for c, (x, y) in enumerate(zip(cops, new_cops)):
                if G.sub(y, x) not in cop_steps:
                    errors.append(f"half-move {i}: cop {c} step {G.sub(y, x)} not in S u {{0}}")
        else:
            if new_cops != cops:
                errors.append(f"half-move {i}: cops moved on the robber's turn")
            if G.sub(new_robber, robber) not in rob_steps:
                errors.append(f"half-move {i}: robber step {G.sub(new_robber, robber)} not in T u {{0}}")
        cops, robber = new_cops, new_robber
        expected_side = "robber" if side == "cop" else "cop"
        if robber in cops:
            captured_at = i
    if captured_at is not None:
        derived = {"kind": "Captured", "turn": captured_at}
    else:
        derived = {"kind": "StepCapExceeded", "turn": len(tr.moves)}
    if derived != tr.outcome:
        errors.append(f"recorded outcome {tr.outcome} but replay gives {derived}")
    return ReplayReport(not errors, errors, derived)


def make_adversary(name: str, inst: GameInstance | None = None, k: int | None = None, seed: int = 0, options=None):
    if name == "random":
        return RandomAdversary(seed)
    if name == "greedy":
        return GreedyAdversary()
    if name == "optimal":
        if inst is None or k is None:
            raise PreconditionError("the optimal adversary needs the instance and cop count")
        return OptimalAdversary(inst, k, options)
    raise PreconditionError(f"unknown adversary {name!r}")
