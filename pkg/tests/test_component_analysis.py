import itertools

import numpy as np
import pytest

from koutlab import ParameterError
from koutlab.component_analysis import (ComponentReport, connected_components,
                                        connected_components_bfs,
                                        cut_range_implication,
                                        has_cut_in_range, is_cut)
from koutlab.graph_model import (construct_two_type, delete_random_nodes,
                                 two_type_params)


class HandGraph:
    """Minimal graph view over an explicit edge list, for hand-built cases."""

    def __init__(self, n, edges, deleted=()):
        self.n = n
        dead = set(deleted)
        self.n_effective = n - len(dead)
        self._surv = np.array([i for i in range(n) if i not in dead],
                              dtype=np.int64)
        kept = sorted((min(u, v), max(u, v)) for u, v in edges
                      if u not in dead and v not in dead)
        self._eu = np.array([u for u, _ in kept], dtype=np.int64)
        self._ev = np.array([v for _, v in kept], dtype=np.int64)

    def surviving(self):
        return self._surv

    def edge_arrays(self):
        return self._eu, self._ev


def test_hand_built_component_partition():
    g = HandGraph(6, [(1, 2), (3, 4), (4, 5)])
    report = connected_components(g)
    assert report.component_sizes == (3, 2, 1)
    assert report.cmax == 3
    assert report.outside_count == 3
    assert report.n_effective == 6


def test_component_report_invariants_on_random_graphs():
    rng = np.random.default_rng(14)
    for _ in range(50):
        g = construct_two_type(two_type_params(40, 0.7, 2), rng)
        d = int(rng.integers(0, 20))
        view = delete_random_nodes(g, d, rng)[1] if d else g
        rep = connected_components(view)
        assert sum(rep.component_sizes) == view.n_effective
        assert rep.cmax == max(rep.component_sizes)
        assert rep.outside_count == view.n_effective - rep.cmax
        assert rep.component_sizes == tuple(sorted(rep.component_sizes,
                                                   reverse=True))


def test_union_find_agrees_with_bfs():
    rng = np.random.default_rng(21)
    for _ in range(100):
        g = construct_two_type(two_type_params(35, 0.8, 2), rng)
        d = int(rng.integers(0, 12))
        view = delete_random_nodes(g, d, rng)[1] if d else g
        assert connected_components(view) == connected_components_bfs(view)


def test_empty_view_is_rejected():
    g = HandGraph(3, [], deleted=(0, 1, 2))
    with pytest.raises(ParameterError):
        connected_components(g)


def test_is_cut_on_hand_graph():
    g = HandGraph(6, [(1, 2), (3, 4), (4, 5)])
    assert is_cut(g, {1, 2})            # a whole component
    assert is_cut(g, {0})
    assert is_cut(g, {3, 4, 5})
    assert not is_cut(g, {3, 4})        # proper piece of a component
    assert not is_cut(g, {1})
    assert is_cut(g, {0, 1, 2})         # union of two components


def test_is_cut_validates_subset():
    g = HandGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(ParameterError):
        is_cut(g, set())
    with pytest.raises(ParameterError):
        is_cut(g, {0, 1, 2, 3})
    with pytest.raises(ParameterError):
        is_cut(g, {0, 7})
    gd = HandGraph(4, [(0, 1), (2, 3)], deleted=(3,))
    with pytest.raises(ParameterError):
        is_cut(gd, {3})


def test_cut_complement_symmetry_on_random_subsets():
    rng = np.random.default_rng(33)
    g = construct_two_type(two_type_params(24, 0.6, 2), rng)
    nodes = list(range(24))
    for _ in range(1000):
        size = int(rng.integers(1, 24))
        subset = set(rng.choice(nodes, size=size, replace=False).tolist())
        comp = set(nodes) - subset
        assert is_cut(g, subset) == is_cut(g, comp)


def test_whole_components_are_cuts_and_pieces_are_not():
    rng = np.random.default_rng(3)
    g = construct_two_type(two_type_params(30, 0.9, 2), rng)
    rep = connected_components(g)
    eu, ev = g.edge_arrays()
    parent = {}

    def find(i):
        while parent.setdefault(i, i) != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in zip(eu.tolist(), ev.tolist()):
        parent[find(u)] = find(v)
    groups = {}
    for i in range(30):
        groups.setdefault(find(i), set()).add(i)
    for comp in groups.values():
        if len(comp) < 30:
            assert is_cut(g, comp)
        if 1 < len(comp) < 30:
            assert not is_cut(g, set(itertools.islice(comp, len(comp) - 1)))
    assert rep.component_sizes == tuple(
        sorted((len(c) for c in groups.values()), reverse=True))


def test_has_cut_in_range_on_known_sizes():
    g = HandGraph(6, [(1, 2), (3, 4), (4, 5)])  # sizes 3, 2, 1
    assert has_cut_in_range(g, 4, 5)            # 3 + 2 = 5, 3 + 1 = 4
    assert has_cut_in_range(g, 1, 1)
    assert has_cut_in_range(g, 2, 3)
    assert not has_cut_in_range(g, 6, 6)        # full set is not a proper cut
    connected = HandGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert not has_cut_in_range(connected, 1, 4)
    with pytest.raises(ParameterError):
        has_cut_in_range(g, 0, 3)
    with pytest.raises(ParameterError):
        has_cut_in_range(g, 3, 2)
    with pytest.raises(ParameterError):
        has_cut_in_range(g, 1, 7)


def _brute_force_has_cut(g, lo, hi):
    nodes = g.surviving().tolist()
    eu, ev = g.edge_arrays()
    edges = list(zip(eu.tolist(), ev.tolist()))
    for size in range(1, len(nodes)):
        if not lo <= size <= hi:
            continue
        for subset in itertools.combinations(nodes, size):
            inside = set(subset)
            if all((u in inside) == (v in inside) for u, v in edges):
                return True
    return False


def test_has_cut_in_range_matches_brute_force_enumeration():
    rng = np.random.default_rng(55)
    for _ in range(500):
        n = int(rng.integers(4, 9))
        g = construct_two_type(two_type_params(n, 0.5, 2), rng)
        d = int(rng.integers(0, n - 2))
        view = delete_random_nodes(g, d, rng)[1] if d else g
        n_eff = view.n_effective
        lo = int(rng.integers(1, n_eff + 1))
        hi = int(rng.integers(lo, n_eff + 1))
        assert has_cut_in_range(view, lo, hi) == _brute_force_has_cut(view, lo, hi)


def test_cut_range_implication_cases():
    connected = HandGraph(9, [(i, i + 1) for i in range(8)])
    rec = cut_range_implication(connected, 3)
    assert rec.no_mid_cut and rec.giant_exceeds and rec.holds

    # sizes (25, 5): the size-5 component is a cut inside [4, 26], so the
    # antecedent fails and the implication holds vacuously
    edges = [(i, i + 1) for i in range(24)] + [(i, i + 1) for i in range(25, 29)]
    split = HandGraph(30, edges)
    rec = cut_range_implication(split, 4)
    assert not rec.no_mid_cut
    assert rec.holds

    with pytest.raises(ParameterError):
        cut_range_implication(connected, 4)  # x above floor(n/3)
    with pytest.raises(ParameterError):
        cut_range_implication(connected, 0)


def test_cut_range_implication_never_fails_on_random_graphs():
    rng = np.random.default_rng(101)
    for _ in range(300):
        g = construct_two_type(two_type_params(30, 0.5, 2), rng)
        for x in range(1, 11):
            assert cut_range_implication(g, x).holds


def test_component_report_equality_is_structural():
    assert ComponentReport((3, 2), 3, 2) == ComponentReport((3, 2), 3, 2)
    assert ComponentReport((3, 2), 3, 2) != ComponentReport((3, 1), 3, 2)
