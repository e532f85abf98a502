from fractions import Fraction

import pytest

from ratiocut.constructions import Densest, NormalizedCut, RatioRegions
from ratiocut.errors import InfeasibleError, InstanceTooLargeError, NoFiniteCutError
from ratiocut.flow import FlowNetwork
from ratiocut.graph import INF, WeightedGraph
from ratiocut.oracle import brute_force_min_cut, brute_force_ratio


def test_path_normalized_cut(path4):
    res = brute_force_ratio(path4, NormalizedCut((1, 2), (3, 4)))
    assert res.best_ratio == Fraction(1, 3)
    assert res.best_set == {1, 2}


def test_path_unseeded_normalized_cut(path4):
    assert brute_force_ratio(path4, NormalizedCut()).best_ratio == Fraction(1, 3)


def test_triangle_density(triangle):
    res = brute_force_ratio(triangle, Densest())
    assert res.best_ratio == 1
    assert res.best_set == {1, 2, 3}
    assert res.evaluated_count == 7


def test_rr_path(path3):
    res = brute_force_ratio(path3, RatioRegions(1, 3))
    assert res.best_ratio == 1
    assert res.best_set == {1, 2}


def test_no_feasible_subset():
    g = WeightedGraph.build(3, [(1, 2, 1)])
    with pytest.raises(InfeasibleError, match="infeasible"):
        brute_force_ratio(g, NormalizedCut())


def test_too_large():
    g = WeightedGraph.build(25, [(1, 2, 1)])
    with pytest.raises(InstanceTooLargeError):
        brute_force_ratio(g, Densest())


def test_ties_go_to_smallest_mask():
    g = WeightedGraph.build(4, [(1, 2, 1), (3, 4, 1)])
    # {1,2} and {3,4} both have density 1/2
    assert brute_force_ratio(g, Densest()).best_set == {1, 2}


def test_min_cut_diamond(diamond):
    cut = brute_force_min_cut(diamond)
    assert cut.value == 5
    assert cut.source_set == {0}


def test_min_cut_single_arc():
    cut = brute_force_min_cut(FlowNetwork.build(2, 0, 1, [(0, 1, 7)]))
    assert cut.value == 7
    assert cut.source_set == {0}


def test_min_cut_infinite_only():
    net = FlowNetwork.build(3, 0, 2, [(0, 1, INF), (1, 2, INF)])
    with pytest.raises(NoFiniteCutError, match="no finite cut"):
        brute_force_min_cut(net)
