"""``copnum`` command line.

Human-readable results go to stdout as ``key value`` lines; machine output
(CSV tables, JSON-lines sweeps, transcripts, figures) goes to the paths
given by flags.  Exit status: 0 success, 2 bad input, 3 solver budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bounds, cayley, constructions, solver, strategy
from .errors import BudgetExceeded, CopnumError, PreconditionError
from .groups import construct_group, cyclic_subgroup, element_order, quotient_by_cyclic

log = logging.getLogger("copnum")

CONSTRUCTIONS = {"sidon-undirected": "undirected_cubic", "sidon-directed": "directed_quadratic"}


def _element(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad element {text!r}; use comma-separated residues")


def _add_board(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("board")
    g.add_argument("--graph", type=Path, help="instance or general graph JSON file")
    g.add_argument("--construction", choices=sorted(CONSTRUCTIONS) + ["meyniel"])
    g.add_argument("--p", type=int, help="prime for constructions")
    g.add_argument("--n", type=int, help="vertex count for the meyniel construction")
    g.add_argument("--factors", type=_element, help="cyclic factors, e.g. 5,5")
    g.add_argument("--S", nargs="+", type=_element, metavar="ELEM", help="cop moveset, e.g. 1,1 2,3")
    g.add_argument("--T", nargs="*", type=_element, metavar="ELEM", help="robber moveset (default: S)")


def _board(args) -> cayley.GameInstance | cayley.GeneralGraph:
    if args.graph:
        return cayley.load_graph(args.graph.read_bytes())
    if args.construction:
        if args.p is None:
            raise PreconditionError("--construction needs --p")
        if args.construction == "meyniel":
            return constructions.meyniel_extremal(args.n or args.p * args.p, args.p)
        return constructions.build_sidon(args.p, CONSTRUCTIONS[args.construction])
    if args.factors and args.S:
        G = construct_group(args.factors)
        return cayley.build_instance(G, args.S, args.T)
    raise PreconditionError("give --graph, --construction, or --factors with --S")


def _instance(args) -> cayley.GameInstance:
    board = _board(args)
    if not isinstance(board, cayley.GameInstance):
        raise PreconditionError("this command needs a Cayley instance, not a general graph")
    return board


def _options(args) -> solver.SolverOptions:
    budget = args.budget if args.budget is not None else solver.budget_from_env()
    return solver.SolverOptions(translation=not args.no_translation, budget=budget)


def _fmt(elem) -> str:
    return "(" + ",".join(map(str, elem)) + ")"


# --- commands ------------------------------------------------------------------


def cmd_group(args) -> int:
    G = construct_group(args.factors)
    print(f"factors {','.join(map(str, G.factors))}")
    print(f"order {G.order}")
    if args.element is not None:
        g = G.coerce(args.element)
        print(f"element {_fmt(g)}")
        print(f"element_order {element_order(G, g)}")
        print("cyclic_subgroup " + " ".join(_fmt(x) for x in cyclic_subgroup(G, g)))
        q = quotient_by_cyclic(G, g)
        print(f"quotient_order {q.target.order}")
        if args.list:
            for x in G.elements:
                print(f"project {_fmt(x)} {_fmt(q(x))}")
    elif args.list:
        for x in G.elements:
            print(f"{_fmt(x)} order {element_order(G, x)}")
    return 0


def cmd_graph(args) -> int:
    inst = _instance(args)
    data = cayley.export_graph(inst, args.format)
    if args.out:
        args.out.write_bytes(data)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(data.decode())
        if not data.endswith(b"\n"):
            sys.stdout.write("\n")
    if args.info:
        print(f"directed {str(inst.directed).lower()}", file=sys.stderr)
        print(f"boundary {cayley.classify_boundary(inst).value}", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    board = _board(args)
    options = _options(args)
    if args.k is not None:
        res = solver.solve_fixed_cops(board, args.k, options)
        print(f"k {args.k}")
        print(f"winner {res.winner}")
        if res.placement is not None:
            print(f"placement {' '.join(map(str, res.placement))}")
            print(f"capture_depth {res.placement_depth}")
        print(f"states {res.n_states}")
        print(f"arcs {res.n_arcs}")
        return 0
    found = solver.cop_number(board, args.max_k, options)
    if isinstance(found, solver.NotFoundBelow):
        print(f"cop_number >{found.max_k}")
    else:
        print(f"cop_number {found}")
    return 0


def cmd_bounds(args) -> int:
    small = "printed" if args.printed else "corrected"
    if args.sweep is None:
        if None in (args.n, args.s, args.t):
            raise PreconditionError("give --n, --s and --t, or --sweep N_MAX")
        rep = bounds.bound_report(args.n, args.s, args.t, args.variant, args.prime)
        for key, val in rep.as_dict().items():
            if isinstance(val, float):
                val = f"{val:.6f}"
            elif val is None:
                val = "n/a"
            print(f"{key} {val}")
        return 0
    report = bounds.verify_constant_inequalities(
        args.variant, args.sweep, p=args.prime or 2, directed_small=small,
        threads=args.threads, keep_rows=args.csv is not None,
    )
    _emit_sweep(report, args)
    return 0 if report.passed or args.printed else 1


def _emit_sweep(report: bounds.SweepReport, args) -> None:
    for line in report.summary_lines():
        print(line)
    print(f"passed {str(report.passed).lower()}")
    if args.csv:
        args.csv.write_text(report.to_csv())
        print(f"csv {args.csv}")
    if args.jsonl:
        with args.jsonl.open("w") as fh:
            for ch in report.checks.values():
                doc = {"variant": report.variant, "small_case": report.directed_small, "check": ch.name,
                       "passed": ch.passed, "checked": ch.checked, "worst_margin": ch.worst_margin,
                       "counterexample": ch.counterexample}
                fh.write(json.dumps(doc, sort_keys=True) + "\n")
        print(f"jsonl {args.jsonl}")
    if args.figure:
        from .plotting import plot_sweep_profile

        plot_sweep_profile([report], args.figure)
        print(f"figure {args.figure}")


def cmd_strategy(args) -> int:
    inst = _instance(args)
    plan = strategy.build_plan(inst, args.flavor)
    print(f"plan_cop_count {plan.cop_count}")
    if args.show_plan:
        print(plan.describe())
    adv = strategy.make_adversary(args.adversary, inst, plan.cop_count, seed=args.seed, options=_options(args))
    tr = strategy.execute_game(plan, adv, step_cap=args.step_cap, seed=args.seed)
    print(f"outcome {tr.outcome['kind']}")
    print(f"turn {tr.outcome['turn']}")
    print(f"cops_moved {len(tr.cops_that_moved())}")
    if args.transcript:
        args.transcript.write_text(tr.to_json())
        print(f"transcript {args.transcript}")
    return 0


def cmd_construct(args) -> int:
    if args.kind == "meyniel":
        graph = constructions.meyniel_extremal(args.n or args.p * args.p, args.p)
        text = graph.to_json()
        summary = [f"vertices {graph.n}", f"strongly_connected {str(graph.is_strongly_connected()).lower()}"]
    else:
        construction = constructions.ConstructionSpec(args.p, CONSTRUCTIONS[args.kind])
        inst = constructions.build_sidon(args.p, construction.kind)
        text = cayley.instance_to_json(inst)
        summary = [
            "S " + " ".join(_fmt(s) for s in inst.S),
            f"directed {str(inst.directed).lower()}",
            f"claimed_cop_number {construction.claimed_cop_number}",
        ]
    if args.out:
        args.out.write_text(text)
        summary.append(f"wrote {args.out}")
    else:
        summary.insert(0, text)
    print("\n".join(summary))
    return 0


def cmd_verify(args) -> int:
    ok = True
    if args.what in ("guards", "all"):
        rep = constructions.verify_guard_bounds(args.p_max)
        for row in rep.rows:
            print(f"guards p={row.p} max_undirected={row.max_undirected} max_directed={row.max_directed} "
                  f"lower_bounds={row.lower_bound_undirected},{row.lower_bound_directed} "
                  f"{'pass' if row.ok else 'FAIL'}")
        ok &= rep.passed
        if args.figure_dir:
            from .plotting import plot_guard_table

            args.figure_dir.mkdir(parents=True, exist_ok=True)
            p = rep.rows[0].p
            for kind in ("undirected_cubic", "directed_quadratic"):
                out = args.figure_dir / f"guards_{kind}_p{p}.png"
                plot_guard_table(constructions.guard_count_table(p, kind), f"{kind}, p={p}", out)
                print(f"figure {out}")
    if args.what in ("constants", "all"):
        for variant in ("undirected", "directed"):
            for p in (2, 3, 5):
                const = bounds.theorem_constants(variant, p)
                r1, r2 = bounds.constant_residuals(const)
                good = r1 >= -1e-12 and r2 >= -1e-12
                ok &= good
                print(f"constants {variant} p={p} c={const.c:.6f} d={const.d:.6f} "
                      f"residuals={r1:.3g},{r2:.3g} {'pass' if good else 'FAIL'}")
    if args.what in ("sweep", "all"):
        reports = []
        for variant, small in (("undirected", "corrected"), ("directed", "corrected"), ("directed", "printed")):
            rep = bounds.verify_constant_inequalities(variant, args.n_max, directed_small=small, threads=args.threads)
            reports.append(rep)
            for line in rep.summary_lines():
                print(line)
            # the printed small case is expected to fail; that is the point of running it
            ok &= rep.passed if small == "corrected" else not rep.passed
        if args.figure_dir:
            from .plotting import plot_sweep_profile

            args.figure_dir.mkdir(parents=True, exist_ok=True)
            out = args.figure_dir / "sweep_profile.png"
            plot_sweep_profile(reports[:2], out)
            print(f"figure {out}")
    print(f"passed {str(bool(ok)).lower()}")
    return 0 if ok else 1


def cmd_replay(args) -> int:
    tr = strategy.GameTranscript.from_json(args.transcript.read_text())
    rep = strategy.replay(tr)
    for err in rep.errors:
        print(f"error {err}")
    print(f"half_moves {len(tr.moves)}")
    print(f"outcome {rep.outcome['kind']}")
    print(f"valid {str(rep.ok).lower()}")
    return 0 if rep.ok else 1


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copnum", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="group arithmetic")
    p.add_argument("--factors", type=_element, required=True)
    p.add_argument("--element", type=_element)
    p.add_argument("--list", action="store_true", help="list every element")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("graph", help="export a Cayley graph")
    _add_board(p)
    p.add_argument("--format", choices=["dot", "json"], default="json")
    p.add_argument("--out", type=Path)
    p.add_argument("--info", action="store_true", help="print direction and boundary class to stderr")
    p.set_defaults(func=cmd_graph)

    def solver_flags(q):
        q.add_argument("--budget", type=int, help="arc budget (default: $COPNUM_BUDGET or 2e8)")
        q.add_argument("--no-translation", action="store_true", help="disable robber pinning")
        q.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("solve", help="exact cop number")
    _add_board(p)
    solver_flags(p)
    p.add_argument("--k", type=int, help="solve for exactly k cops")
    p.add_argument("--max-k", type=int, default=8)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bounds", help="evaluate g* or sweep the constant inequalities")
    p.add_argument("--variant", choices=["undirected", "directed"], default="undirected")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--prime", type=int, help="smallest prime factor bucket (default: from n, or 2 in sweeps)")
    p.add_argument("--sweep", type=int, metavar="N_MAX")
    p.add_argument("--printed", action="store_true", help="directed: use ceil((t+1)/2) in the small case")
    p.add_argument("--csv", type=Path)
    p.add_argument("--jsonl", type=Path)
    p.add_argument("--figure", type=Path)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("strategy", help="play a constructive strategy against an adversary")
    _add_board(p)
    solver_flags(p)
    p.add_argument("--flavor", choices=["frankl", "gstar"], default="frankl")
    p.add_argument("--adversary", choices=["optimal", "greedy", "random"], default="greedy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int)
    p.add_argument("--transcript", type=Path)
    p.add_argument("--show-plan", action="store_true")
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("construct", help="emit an extremal construction as JSON")
    p.add_argument("--kind", choices=sorted(CONSTRUCTIONS) + ["meyniel"], required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="guard counts, constants and bound sweeps")
    p.add_argument("--what", choices=["guards", "constants", "sweep", "all"], default="all")
    p.add_argument("--p-max", type=int, default=31)
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--figure-dir", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("replay", help="re-validate a transcript")
    p.add_argument("--transcript", type=Path, required=True)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PreconditionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CopnumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
