"""Connected components, largest-component statistics, and cut detection.

Functions here accept any graph view exposing n, n_effective,
surviving() and edge_arrays(); both KoutGraph and InducedSubgraph
qualify.  A cut is a nonempty proper subset of the surviving nodes with
no edge to its complement.  Every union of whole components is a cut
and every cut is such a union, which is what makes the subset-sum
test in has_cut_in_range exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class ComponentReport:
    """Component size multiset plus largest-component statistics."""

    component_sizes: tuple[int, ...]  # sorted descending
    cmax: int
    outside_count: int

    @property
    def n_effective(self) -> int:
        return sum(self.component_sizes)


def _dsu_parents(n, eu, ev):
    # union-find with path halving and union by size over 0..n-1
    parent = list(range(n))
    size = [1] * n
    for u, v in zip(eu.tolist(), ev.tolist()):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u == v:
            continue
        if size[u] < size[v]:
            u, v = v, u
        parent[v] = u
        size[u] += size[v]
    return parent


def connected_components(g) -> ComponentReport:
    """Exact component partition of a graph view via union-find."""
    surv = g.surviving()
    if surv.size == 0:
        raise ParameterError("component analysis needs at least one node")
    eu, ev = g.edge_arrays()
    parent = _dsu_parents(g.n, eu, ev)
    counts = {}
    for i in surv.tolist():
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        counts[i] = counts.get(i, 0) + 1
    sizes = tuple(sorted(counts.values(), reverse=True))
    return ComponentReport(sizes, sizes[0], int(surv.size) - sizes[0])


def connected_components_bfs(g) -> ComponentReport:
    """Breadth-first dual of connected_components, kept for cross-checks."""
    surv = g.surviving()
    if surv.size == 0:
        raise ParameterError("component analysis needs at least one node")
    eu, ev = g.edge_arrays()
    adj = {int(i): [] for i in surv.tolist()}
    for u, v in zip(eu.tolist(), ev.tolist()):
        adj[u].append(v)
        adj[v].append(u)
    seen = set()
    sizes = []
    for start in surv.tolist():
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        count = 0
        while queue:
            node = queue.popleft()
            count += 1
            for nb in adj[node]:
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        sizes.append(count)
    sizes = tuple(sorted(sizes, reverse=True))
    return ComponentReport(sizes, sizes[0], int(surv.size) - sizes[0])


def is_cut(g, subset) -> bool:
    """True iff no edge joins the subset to the rest of the surviving nodes."""
    s = {int(x) for x in subset}
    if not s:
        raise ParameterError("cut subset must be nonempty")
    surv = g.surviving()
    alive = np.zeros(g.n, dtype=bool)
    alive[surv] = True
    if any(not (0 <= x < g.n) or not alive[x] for x in s):
        raise ParameterError("cut subset must contain only surviving nodes")
    if len(s) == surv.size:
        raise ParameterError("cut subset must be a proper subset of the surviving nodes")
    eu, ev = g.edge_arrays()
    inside = np.zeros(g.n, dtype=bool)
    inside[list(s)] = True
    return not bool((inside[eu] != inside[ev]).any())


def _sizes_reach_range(sizes, lo, hi, n_eff) -> bool:
    # subset-sum reachability over component sizes, bitset DP; a cut is a
    # proper nonempty union of components, so cap the window at n_eff - 1
    hi_eff = min(hi, n_eff - 1)
    if hi_eff < lo:
        return False
    reach = 1
    for s in sizes:
        reach |= reach << s
    window = (reach >> lo) & ((1 << (hi_eff - lo + 1)) - 1)
    return window != 0


def has_cut_in_range(g, lo, hi) -> bool:
    """True iff the graph has a cut whose size lies in [lo, hi]."""
    lo, hi = int(lo), int(hi)
    n_eff = g.n_effective
    if not 1 <= lo <= hi <= n_eff:
        raise ParameterError("need 1 <= lo <= hi <= surviving node count")
    sizes = connected_components(g).component_sizes
    return _sizes_reach_range(sizes, lo, hi, n_eff)


@dataclass(frozen=True)
class CutRangeImplication:
    """Both sides of the mid-range-cut implication for one graph and x."""

    x: int
    no_mid_cut: bool      # antecedent: no cut with size in [x, n_eff - x]
    giant_exceeds: bool   # consequent: cmax > n_eff - x
    holds: bool


def cut_range_implication(g, x) -> CutRangeImplication:
    """Evaluate: no cut with size in [x, n_eff - x] implies cmax > n_eff - x.

    Test harness for the structural fact that a largest component of
    size <= n_eff - x would itself be (part of) a cut in that range.
    Requires 1 <= x <= floor(n_eff / 3) so the range is nonempty and the
    implication is the meaningful one.
    """
    x = int(x)
    n_eff = g.n_effective
    if not 1 <= x <= n_eff // 3:
        raise ParameterError("need 1 <= x <= floor(surviving node count / 3)")
    report = connected_components(g)
    no_mid_cut = not _sizes_reach_range(report.component_sizes, x, n_eff - x, n_eff)
    giant_exceeds = report.cmax > n_eff - x
    return CutRangeImplication(
        x=x,
        no_mid_cut=no_mid_cut,
        giant_exceeds=giant_exceeds,
        holds=(not no_mid_cut) or giant_exceeds,
    )
