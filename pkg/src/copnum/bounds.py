"""Closed-form cop-number bounds for abelian Cayley graphs and their checks.

All logarithms are natural.  ``c`` is the threshold constant separating the
pairing regime (t <= c*sqrt(n)) from the pigeonhole regime, ``d`` the
coefficient of the headline bound d*sqrt(n) + additive.

Directed g* uses t + 1 in the pairing regime.  The value ceil((t+1)/2)
can be requested with ``directed_small="printed"``; it breaks the
shrinking condition at t = 1, which :func:`verify_constant_inequalities`
demonstrates.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .errors import OutOfRegime, PreconditionError
from .groups import smallest_prime_factor

Variant = Literal["undirected", "directed"]
SmallCase = Literal["corrected", "printed"]

TOL = 1e-9
ADDITIVE = {"undirected": 2.5, "directed": 2.0}
# coefficient a in d >= 1/(c e) + a c, and b in  b c >= d / sqrt(p)
_SLOPE = {"undirected": 0.5, "directed": 1.0}


@dataclass(frozen=True)
class Constants:
    variant: str
    p_bucket: int
    c: float
    d: float
    additive: float


def p_bucket(p: int) -> int:
    if p <= 2:
        return 2
    return 3 if p == 3 else 5


def theorem_constants(variant: Variant, p: int = 2) -> Constants:
    _check_variant(variant)
    e = math.e
    b = p_bucket(p)
    if variant == "undirected":
        if b == 2:
            c = math.sqrt(2 / (math.sqrt(2) * e - e))
            d = 1 / math.sqrt(math.sqrt(2) * e - e)
        elif b == 3:
            c = math.sqrt(2 / ((math.sqrt(3) - 1) * e))
            d = math.sqrt(3 / (2 * (math.sqrt(3) - 1) * e))
        else:
            c = d = math.sqrt(2 / e)
    else:
        if b == 2:
            c = 1 / math.sqrt((math.sqrt(2) - 1) * e)
            d = math.sqrt(2 / ((math.sqrt(2) - 1) * e))
        elif b == 3:
            c = 1 / math.sqrt((math.sqrt(3) - 1) * e)
            d = math.sqrt(3 / ((math.sqrt(3) - 1) * e))
        else:
            c = 1 / math.sqrt(e)
            d = 2 / math.sqrt(e)
    return Constants(variant, b, c, d, ADDITIVE[variant])


def constants_for_order(variant: Variant, n: int) -> Constants:
    return theorem_constants(variant, smallest_prime_factor(n) if n >= 2 else 2)


def constant_residuals(const: Constants) -> tuple[float, float]:
    """Slack in (d >= 1/(ce) + a c, b c >= d/sqrt(p)); both must be >= 0.

    The p >= 5 bucket is checked at p = 5, the weakest prime in the bucket.
    """
    a = _SLOPE[const.variant]
    first = const.d - (1 / (const.c * math.e) + a * const.c)
    second = a * const.c - const.d / math.sqrt(const.p_bucket)
    return first, second


def grid_min_d(variant: Variant, p: int, step: float = 1e-4, c_max: float = 5.0) -> tuple[float, float]:
    """Smallest feasible d over a c-grid: returns (d_min, c_at_min)."""
    a = _SLOPE[variant]
    c = np.arange(step, c_max, step)
    lower = 1 / (c * math.e) + a * c
    upper = a * c * math.sqrt(p_bucket(p))
    feasible = lower <= upper
    i = int(np.argmin(np.where(feasible, lower, np.inf)))
    return float(lower[i]), float(c[i])


def _check_variant(variant: str) -> None:
    if variant not in ("undirected", "directed"):
        raise PreconditionError(f"unknown variant {variant!r}")


def h_value(n: int, s: int, t: int, variant: Variant, c: float) -> float:
    _check_variant(variant)
    t_min = 2 if variant == "undirected" else 1
    if n < 3 or s >= n - 1 or t < t_min or t > s:
        raise OutOfRegime(f"(n, s, t) = ({n}, {s}, {t}) is a boundary value for the {variant} h")
    if t <= c * math.sqrt(n):
        return 2.0 if variant == "undirected" else 1.0
    return t * s / (n - 1)


def g_star(
    n: int, s: int, t: int, variant: Variant, c: float, *, directed_small: SmallCase = "corrected"
) -> float:
    _check_variant(variant)
    if not (n >= 1 and 0 <= t <= s <= n):
        raise PreconditionError(f"need n >= 1 and 0 <= t <= s <= n, got ({n}, {s}, {t})")
    if s >= n - 1:
        return 1.0
    root = c * math.sqrt(n)
    if t <= root:
        if variant == "directed" and directed_small == "corrected":
            return float(t + 1)
        return float(math.ceil((t + 1) / 2))
    tail = root / 2 + 2.5 if variant == "undirected" else root + 2.0
    return math.log(t / root) / math.log((n - 1) / (n - s - 1)) + tail


def g_star_grid(
    n: int, S: np.ndarray, T: np.ndarray, variant: Variant, c: float, directed_small: SmallCase = "corrected"
) -> np.ndarray:
    """Vectorized g* for arrays S, T with 0 <= T <= S <= n - 2."""
    root = c * math.sqrt(n)
    if variant == "directed" and directed_small == "corrected":
        small = T + 1.0
    else:
        small = np.ceil((T + 1) / 2.0)
    tail = root / 2 + 2.5 if variant == "undirected" else root + 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        large = np.log(np.maximum(T, 1) / root) / np.log((n - 1) / (n - S - 1.0)) + tail
    return np.where(T <= root, small, large)


@dataclass(frozen=True)
class IterationCount:
    i: int
    remaining: list[float]  # t * q**j for j = 0..i
    z_recursive: list[float]
    z_closed: list[float]

    @property
    def closed_form_matches(self) -> bool:
        return all(abs(a - b) <= 1e-9 * max(1.0, abs(b)) for a, b in zip(self.z_recursive, self.z_closed))


def iteration_count(n: int, s: int, t: int, c: float) -> IterationCount:
    """Pigeonhole rounds until at most c*sqrt(n) robber moves are unaccounted for."""
    root = c * math.sqrt(n)
    if t <= root or s >= n - 1 or n < 3:
        raise OutOfRegime(f"iteration count needs t > c sqrt(n) and s < n - 1, got ({n}, {s}, {t})")
    q = (n - s - 1) / (n - 1)
    remaining = [float(t)]
    while remaining[-1] > root:
        remaining.append(remaining[-1] * q)
    i = len(remaining) - 1
    z = [0.0]
    for _ in range(i):
        z.append(q * z[-1] + s * t / (n - 1))
    closed = [t - t * q**j for j in range(i + 1)]
    return IterationCount(i, remaining, z, closed)


def iteration_count_closed_form(n: int, s: int, t: int, c: float) -> int:
    return math.ceil(math.log(t / (c * math.sqrt(n))) / math.log((n - 1) / (n - s - 1)))


@dataclass
class BoundReport:
    n: int
    s: int
    t: int
    variant: str
    c_const: float
    d_const: float
    additive: float
    h_value: float | None
    g_star: float
    iteration_count: int | None
    headline_bound: float
    printed_g_small_case: float | None
    smallest_prime_factor: int
    within_headline: bool

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(n: int, s: int, t: int, variant: Variant, p: int | None = None) -> BoundReport:
    """Evaluate everything at (n, s, t).

    Constants come from the base theorem (valid for every group) unless a
    prime bucket ``p`` is given; the smallest prime factor of n is reported
    either way so callers can opt into the refinement.
    """
    spf = smallest_prime_factor(n) if n >= 2 else 1
    const = theorem_constants(variant, 2 if p is None else p)
    c, d = const.c, const.d
    try:
        h = h_value(n, s, t, variant, c)
    except OutOfRegime:
        h = None
    g = g_star(n, s, t, variant, c)
    it = None
    if s < n - 1 and n >= 3 and t > c * math.sqrt(n):
        it = iteration_count(n, s, t, c).i
    printed = None
    if variant == "directed":
        printed = g_star(n, s, t, variant, c, directed_small="printed")
    headline = d * math.sqrt(n) + const.additive
    return BoundReport(
        n, s, t, variant, c, d, const.additive, h, g, it, headline, printed, spf, g <= headline + TOL
    )


# --- numerical sweep -------------------------------------------------------


@dataclass
class CheckOutcome:
    name: str
    passed: bool = True
    checked: int = 0
    counterexample: dict | None = None
    worst_margin: float = math.inf


@dataclass
class SweepReport:
    variant: str
    n_max: int
    p: int
    directed_small: str
    constants: Constants
    checks: dict[str, CheckOutcome]
    rows: list[tuple] = field(default_factory=list, repr=False)
    profile: list[tuple[int, float, float]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks.values())

    def first_failure(self) -> CheckOutcome | None:
        for ch in self.checks.values():
            if not ch.passed:
                return ch
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "s", "t", "g_star", "bound", "margin"])
        for row in self.rows:
            n, s, t, g, b, m = row
            w.writerow([n, s, t, f"{g:.9f}", f"{b:.9f}", f"{m:.9f}"])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        out = []
        for ch in self.checks.values():
            status = "pass" if ch.passed else "FAIL"
            line = f"{self.variant}[{self.directed_small}] {ch.name}: {status} ({ch.checked} checks, worst margin {ch.worst_margin:.6g})"
            if ch.counterexample:
                line += f" first counterexample {ch.counterexample}"
            out.append(line)
        return out


def _record(ch: CheckOutcome, margins: np.ndarray, n: int, S: np.ndarray, T: np.ndarray, extra: dict) -> None:
    if margins.size == 0:
        return
    ch.checked += int(margins.size)
    i = int(np.argmin(margins))
    ch.worst_margin = min(ch.worst_margin, float(margins[i]))
    if ch.passed and margins[i] < -TOL:
        bad = np.nonzero(margins < -TOL)[0]
        # first in (s, t) order
        j = bad[np.lexsort((T[bad], S[bad]))[0]]
        ch.passed = False
        ch.counterexample = {"n": n, "s": int(S[j]), "t": int(T[j])} | {
            key: float(val[j]) for key, val in extra.items()
        }


def _sweep_one(n: int, variant: Variant, const: Constants, small: SmallCase):
    """Grids and per-point quantities for one n (pure; safe to run in threads)."""
    c = const.c
    s_vals = np.arange(0, n - 1)
    S, T = np.meshgrid(s_vals, s_vals, indexing="ij")
    mask = T <= S
    S, T = S[mask], T[mask]
    G = g_star_grid(n, S, T, variant, c, small)
    table = np.full((n - 1, n - 1), np.nan)
    table[S, T] = G
    return S, T, G, table


def verify_constant_inequalities(
    variant: Variant,
    n_max: int,
    *,
    p: int = 2,
    directed_small: SmallCase = "corrected",
    threads: int = 1,
    keep_rows: bool = False,
) -> SweepReport:
    """Check the three inequalities that make g* admissible, for all 3 <= n <= n_max.

    (a) g*(n,s,t) <= d sqrt(n) + additive,
    (b) quotient condition: in the pigeonhole regime g*(n,s,t) is at least
        the largest g* over every group of order <= n/p; in the pairing
        regime it dominates the pairing bound of any t' <= t,
    (c) shrinking condition: g*(n,s,t) >= g*(n,s,floor(t - h)) + 1.

    Here s ranges over 1..n-2 and t over 1..s.  Failures are reported, not raised.
    """
    _check_variant(variant)
    if n_max < 3:
        raise PreconditionError("n_max must be >= 3")
    const = theorem_constants(variant, p)
    c, d, add = const.c, const.d, const.additive
    checks = {
        "bound": CheckOutcome("bound"),
        "quotient": CheckOutcome("quotient"),
        "shrink": CheckOutcome("shrink"),
        "monotone_t": CheckOutcome("monotone_t"),
    }
    report = SweepReport(variant, n_max, p, directed_small, const, checks)
    # prefix maximum of g* over all triples with group order <= N (boundary orders give 1)
    prefix_max = np.ones(n_max + 1)

    ns = list(range(3, n_max + 1))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            grids = pool.map(lambda n: _sweep_one(n, variant, const, directed_small), ns)
            grids = list(grids)
    else:
        grids = (_sweep_one(n, variant, const, directed_small) for n in ns)

    t_min = 2 if variant == "undirected" else 1
    for n, (S, T, G, table) in zip(ns, grids):
        root = c * math.sqrt(n)
        bound = d * math.sqrt(n) + add
        sel = (S >= 1) & (T >= 1)
        Ss, Ts, Gs = S[sel], T[sel], G[sel]

        _record(checks["bound"], bound - Gs, n, Ss, Ts, {"g_star": Gs})

        large = Ts > root
        q_cap = prefix_max[n // p_bucket(p)] if n // p_bucket(p) >= 1 else 1.0
        if large.any():
            _record(
                checks["quotient"], Gs[large] - q_cap, n, Ss[large], Ts[large],
                {"g_star": Gs[large], "quotient_max": np.full(large.sum(), q_cap)},
            )
        small = ~large
        if small.any():
            if variant == "directed":
                pairing = Ts[small] + 1.0
            else:
                pairing = np.ceil((Ts[small] + 1) / 2.0)
            _record(
                checks["quotient"], Gs[small] - pairing, n, Ss[small], Ts[small],
                {"g_star": Gs[small], "pairing": pairing},
            )

        hsel = Ts >= t_min
        Sh, Th, Gh = Ss[hsel], Ts[hsel], Gs[hsel]
        small_h = 2.0 if variant == "undirected" else 1.0
        h = np.where(Th <= root, small_h, Th * Sh / (n - 1.0))
        t_prime = np.floor(Th - h + TOL).astype(np.int64)
        ok = t_prime >= 0
        g_prime = table[Sh[ok], t_prime[ok]]
        _record(
            checks["shrink"], Gh[ok] - (g_prime + 1), n, Sh[ok], Th[ok],
            {"g_star": Gh[ok], "t_prime": t_prime[ok].astype(float), "g_star_t_prime": g_prime},
        )

        step = table[1:, 1:] - table[1:, :-1]
        s_idx, t_idx = np.nonzero(~np.isnan(step))
        _record(
            checks["monotone_t"], step[s_idx, t_idx], n, s_idx + 1, t_idx + 1,
            {"increment": step[s_idx, t_idx]},
        )

        prefix_max[n] = max(prefix_max[n - 1], float(np.nanmax(table)) if table.size else 1.0)
        gmax = float(Gs.max()) if Gs.size else 1.0
        report.profile.append((n, gmax, bound))
        if keep_rows and Gs.size:
            margins = bound - Gs
            # per s, the t with the smallest margin
            for s in np.unique(Ss):
                m = Ss == s
                j = np.nonzero(m)[0][np.argmin(margins[m])]
                report.rows.append((n, int(Ss[j]), int(Ts[j]), float(Gs[j]), bound, float(margins[j])))
    return report
