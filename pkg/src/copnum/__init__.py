"""Cops and robbers on abelian Cayley graphs: exact solver, constructive strategies, bounds."""

from __future__ import annotations

from .accounting import GuardCertificate, accounted_set, best_accounting_element, frankl_pair
from .bounds import bound_report, g_star, h_value, theorem_constants, verify_constant_inequalities
from .cayley import BoundaryClass, GameInstance, build_instance, classify_boundary, export_graph
from .constructions import build_sidon, guard_count, meyniel_extremal, verify_guard_bounds
from .groups import AbelianGroup, construct_group, quotient_by_cyclic
from .solver import SolverOptions, cop_number, extract_policies, solve_fixed_cops
from .strategy import build_plan, execute_game, plan_cop_count

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "BoundaryClass",
    "GameInstance",
    "GuardCertificate",
    "SolverOptions",
    "accounted_set",
    "best_accounting_element",
    "bound_report",
    "build_instance",
    "build_plan",
    "build_sidon",
    "classify_boundary",
    "construct_group",
    "cop_number",
    "execute_game",
    "export_graph",
    "extract_policies",
    "frankl_pair",
    "g_star",
    "guard_count",
    "h_value",
    "meyniel_extremal",
    "plan_cop_count",
    "quotient_by_cyclic",
    "solve_fixed_cops",
    "theorem_constants",
    "verify_constant_inequalities",
    "verify_guard_bounds",
]
