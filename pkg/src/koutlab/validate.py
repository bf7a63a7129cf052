"""Self-check suites runnable from the CLI.

quick: exhaustive-oracle agreement on tiny graphs, structural
invariants (cut implications, coupling, dual component algorithms,
solver residuals, geometric ratios), and a fast statistical bound
check.  full: adds the 10^5-trial statistical suites, including the
large-sweep largest-component gate.

Suites either pass or fail; statistical checks may also attach flags
for marginal observations that do not constitute failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, exp, sqrt

import numpy as np

from .bounds import (deleted_tail_bound, deleted_tail_bound_alt, er_giant_fraction,
                     mean_selections, r_class_tail_bound, tail_bound)
from .errors import ParameterError
from .component_analysis import (connected_components, connected_components_bfs,
                                 cut_range_implication)
from .experiments import collect_cmax, coupling_experiment
from .graph_model import GraphParams, construct_r_type, delete_random_nodes, two_type_params
from .oracle import (exact_cut_probability, exact_cut_probability_deleted,
                     exhaustive_event_probability, union_bound_sum)

_SEED = 20240817


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    flags: tuple = ()


def _suite_oracle_agreement() -> SuiteResult:
    """Closed-form cut probabilities equal exhaustive enumeration."""
    worst = 0.0
    checked = 0
    for n in (4, 5, 6):
        for k in (2, 3):
            if k >= n:
                continue
            mu = 0.5
            for d in (0, 1):
                for r in range(1, n - d):
                    s = frozenset(range(r))
                    if d == 0:
                        enum = exhaustive_event_probability(
                            n, mu, k, 0, lambda g: g.is_cut(s))
                        closed = exact_cut_probability(n, mu, k, r)
                    else:
                        joint = exhaustive_event_probability(
                            n, mu, k, d,
                            lambda g: not (s & g.deleted) and g.is_cut(s))
                        enum = joint * comb(n, d) / comb(n - r, d)
                        closed = exact_cut_probability_deleted(n, mu, k, d, r)
                    worst = max(worst, abs(enum - closed))
                    checked += 1
    return SuiteResult(
        name="oracle-agreement",
        passed=worst <= 1e-12,
        detail=f"{checked} (n,K,d,r) combinations, worst |enum - closed| = {worst:.2e}",
    )


def _suite_cut_implication() -> SuiteResult:
    """No mid-range cut implies a large component, on random graphs."""
    params = two_type_params(30, 0.5, 2)
    rng = np.random.default_rng(_SEED)
    bad = 0
    graphs = 1000
    for _ in range(graphs):
        g = construct_r_type(params, rng)
        for x in range(1, 11):
            if not cut_range_implication(g, x).holds:
                bad += 1
    return SuiteResult(
        name="cut-range-implication",
        passed=bad == 0,
        detail=f"{graphs} graphs x 10 thresholds, {bad} violations",
    )


def _suite_coupling() -> SuiteResult:
    """Coupled extensions keep every edge and never shrink cmax."""
    target = GraphParams(200, (0.5, 0.3, 0.2), (1, 2, 4))
    rep = coupling_experiment(target, trials=1000, seed=_SEED)
    ok = rep.edge_superset_violations == 0 and rep.cmax_violations == 0
    return SuiteResult(
        name="coupling-monotonicity",
        passed=ok,
        detail=(f"{rep.trials} paired draws, {rep.edge_superset_violations} edge "
                f"violations, {rep.cmax_violations} cmax violations"),
    )


def _suite_dual_components() -> SuiteResult:
    """Union-find and BFS component partitions agree, with deletions."""
    rng = np.random.default_rng(_SEED + 1)
    mismatches = 0
    cases = 200
    for _ in range(cases):
        n = int(rng.integers(3, 41))
        k = int(rng.integers(2, min(n, 5)))
        mu = float(rng.uniform(0.1, 0.9))
        g = construct_r_type(two_type_params(n, mu, k), rng)
        view = g
        if rng.random() < 0.5:
            _, view = delete_random_nodes(g, int(rng.integers(0, n)), rng)
        if connected_components(view) != connected_components_bfs(view):
            mismatches += 1
    return SuiteResult(
        name="dual-component-algorithms",
        passed=mismatches == 0,
        detail=f"{cases} random graphs, {mismatches} mismatches",
    )


def _suite_er_solver() -> SuiteResult:
    worst = 0.0
    for c in (1.1, 2.2, 5.0):
        beta = er_giant_fraction(c)
        worst = max(worst, abs(beta + exp(-beta * c) - 1.0))
    b22 = er_giant_fraction(2.2)
    ok = worst < 1e-10 and abs(b22 - 0.8437) < 5e-4
    return SuiteResult(
        name="er-fixed-point",
        passed=ok,
        detail=f"worst residual {worst:.2e}, beta(2.2) = {b22:.6f}",
    )


def _suite_geometric_ratios() -> SuiteResult:
    """Each closed-form tail shrinks by its exact geometric ratio."""
    worst = 0.0
    for mu, k in ((0.5, 2), (0.9, 2), (0.3, 5)):
        rate = mean_selections(mu, k) - 1.0
        for m in (1, 5, 20):
            ratio = tail_bound(mu, k, m + 1).value / tail_bound(mu, k, m).value
            worst = max(worst, abs(ratio - exp(-rate)))
        two = r_class_tail_bound((mu, 1.0 - mu), (1, k), 7).value
        worst = max(worst, abs(two - tail_bound(mu, k, 7).value))
    for x in (45, 60):  # above the alt threshold (1+eps)*d/(1-mu) = 40
        full = deleted_tail_bound(0.5, 3, d=10, x=x, eps=1.0).value
        alt = deleted_tail_bound_alt(0.5, d=10, x=x, eps=1.0).value
        if alt > full:
            worst = max(worst, alt - full)
    return SuiteResult(
        name="geometric-ratios",
        passed=worst < 1e-12,
        detail=f"worst deviation {worst:.2e}",
    )


def _suite_log_direct() -> SuiteResult:
    """Log-domain and direct float64 oracle evaluation agree."""
    worst = 0.0
    for n in (10, 50, 200):
        for mu in (0.25, 0.75):
            for k in (2, 3):
                for r in (1, 2, n // 3, n // 2):
                    r = max(1, r)
                    a = exact_cut_probability(n, mu, k, r, mode="log")
                    b = exact_cut_probability(n, mu, k, r, mode="direct")
                    if b > 0:
                        worst = max(worst, abs(a - b) / b)
                ub_l = union_bound_sum(n, mu, k, 2, mode="log")
                ub_d = union_bound_sum(n, mu, k, 2, mode="direct")
                if ub_d.raw_sum > 0:
                    worst = max(worst, abs(ub_l.raw_sum - ub_d.raw_sum) / ub_d.raw_sum)
    return SuiteResult(
        name="log-vs-direct-arithmetic",
        passed=worst <= 1e-9,
        detail=f"worst relative difference {worst:.2e}",
    )


def _tail_check(cm, n_eff, mu, k, trials, m_lo=5):
    """Compare empirical P[outside >= M] with the closed-form tail.

    Returns (fail_list, flag_list): beyond 5 sigma fails, between 4 and
    5 sigma flags only (the dropped o(1) terms favor the bound, so a
    marginal excursion is worth a look but not a failure).
    """
    outside = n_eff - cm
    fails, flags = [], []
    m_hi = int(outside.max()) + 2
    for m in range(m_lo, max(m_lo + 1, m_hi)):
        emp = float((outside >= m).mean())
        if emp == 0.0:
            break
        bound = min(1.0, tail_bound(mu, k, m).value)
        sigma = sqrt(emp * (1.0 - emp) / trials)
        if emp > bound + 5 * sigma:
            fails.append(f"M={m}: empirical {emp:.3g} > bound {bound:.3g} + 5 sigma")
        elif emp > bound + 4 * sigma:
            flags.append(f"M={m}: empirical {emp:.3g} within (4,5] sigma of bound {bound:.3g}")
    return fails, flags


def _suite_bound_soundness(trials) -> SuiteResult:
    """Union-bound sums dominate the simulated small-component tail."""
    n, mu, k = 30, 0.5, 2
    cm = collect_cmax(two_type_params(n, mu, k), 0, trials, _SEED + 2)
    fails = []
    for m in range(2, 9):
        emp = float((cm <= n - m).mean())
        bound = union_bound_sum(n, mu, k, m).value
        sigma = sqrt(max(emp * (1.0 - emp), 1.0 / trials) / trials)
        if emp > bound + 4 * sigma:
            fails.append(f"M={m}: empirical {emp:.3g} > bound {bound:.3g} + 4 sigma")
    return SuiteResult(
        name="union-bound-soundness",
        passed=not fails,
        detail=("; ".join(fails) if fails
                else f"{trials} trials at n={n}, all M in 2..8 dominated"),
    )


def _suites_statistical_full() -> list:
    """10^5-trial suites: large-sweep gate plus desk-scale tail checks."""
    trials = 100_000
    results = []

    cm1000 = collect_cmax(two_type_params(1000, 0.9, 2), 0, trials, _SEED + 3)
    worst_outside = 1000 - int(cm1000.min())
    results.append(SuiteResult(
        name="large-run-outside-gate",
        passed=worst_outside <= 90,
        detail=f"n=1000 mu=0.9 K=2, {trials} trials, max outside = {worst_outside}",
    ))

    fails, flags = _tail_check(cm1000, 1000, 0.9, 2, trials)
    cm200 = collect_cmax(two_type_params(200, 0.9, 2), 0, trials, _SEED + 4)
    f2, fl2 = _tail_check(cm200, 200, 0.9, 2, trials)
    fails += f2
    flags += fl2
    results.append(SuiteResult(
        name="desk-scale-tail-dominance",
        passed=not fails,
        detail=("; ".join(fails) if fails
                else f"closed-form tails dominate at n in (200, 1000), {trials} trials"),
        flags=tuple(flags),
    ))
    return results


def run_suites(level="quick") -> list:
    """Run the validation suites; returns a list of SuiteResult."""
    if level not in ("quick", "full"):
        raise ParameterError("level must be 'quick' or 'full'")
    results = [
        _suite_oracle_agreement(),
        _suite_cut_implication(),
        _suite_coupling(),
        _suite_dual_components(),
        _suite_er_solver(),
        _suite_geometric_ratios(),
        _suite_log_direct(),
        _suite_bound_soundness(trials=20_000),
    ]
    if level == "full":
        results.extend(_suites_statistical_full())
    return results
