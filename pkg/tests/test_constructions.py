import random
from fractions import Fraction

import pytest

from gen import nc_graph, rr_graph, densest_graph
from ratiocut.constructions import (
    Densest,
    NormalizedCut,
    NormalizedCutPrime,
    RatioRegions,
    build,
    build_densest,
    build_lambda_nc,
    build_lambda_rr,
    evaluate_ratio,
    is_feasible,
    objective_parts,
)
from ratiocut.errors import InfeasibleError, RatioCutError, UndefinedRatioError
from ratiocut.flow import CutResult
from ratiocut.graph import WeightedGraph
from ratiocut.parametric import flow_at, min_cut_at

F = Fraction


def finite_cuts(red, lam):
    """Every finite cut of the reduction at ``lam`` as (decoded set, g value)."""
    net = red.network
    inner = [v for v in range(net.node_count) if v not in (net.source, net.sink)]
    out = []
    for mask in range(1 << len(inner)):
        side = frozenset([net.source] + [v for k, v in enumerate(inner) if mask >> k & 1])
        line = net.line_of(side)
        if line is None:
            continue
        value = line(lam)
        out.append((red.decode(side), value - red.offset(lam)))
    return out


# --- objective values -----------------------------------------------------


def test_normalized_cut_value(path4):
    assert evaluate_ratio(path4, {1, 2}, NormalizedCut()) == F(1, 3)


def test_normalized_cut_prime_value(path4):
    assert evaluate_ratio(path4, {1, 2}, NormalizedCutPrime()) == F(1, 4)


def test_density_value(triangle):
    assert evaluate_ratio(triangle, {1, 2, 3}, Densest()) == 1


def test_zero_denominator_is_undefined(path4):
    with pytest.raises(UndefinedRatioError, match="undefined ratio"):
        evaluate_ratio(path4, {1}, NormalizedCut())


def test_normalized_cut_prime_identity_per_set():
    rng = random.Random(3)
    for _ in range(50):
        g = nc_graph(rng)
        for _ in range(10):
            s = {v for v in g.nodes if rng.random() < 0.5}
            try:
                r = evaluate_ratio(g, s, NormalizedCut())
            except UndefinedRatioError:
                continue
            assert evaluate_ratio(g, s, NormalizedCutPrime()) == r / (1 + r)


# --- kinds ----------------------------------------------------------------


def test_equal_seeds_rejected():
    with pytest.raises(InfeasibleError):
        NormalizedCut((1, 2), (2, 1))
    with pytest.raises(InfeasibleError):
        RatioRegions(1, 1)


def test_seed_keys_are_normalised():
    assert NormalizedCut((2, 1), (4, 3)).seed_in == (1, 2)


def test_feasibility_of_seeded_normalized_cut(path4):
    kind = NormalizedCut((1, 2), (3, 4))
    assert is_feasible(path4, {1, 2}, kind)
    assert not is_feasible(path4, {1}, kind)
    assert not is_feasible(path4, {1, 2, 3}, kind)


# --- normalized cut network -------------------------------------------------


def test_path_network_only_decodes_feasible_sets(path4):
    red = build_lambda_nc(path4, (1, 2), (3, 4))
    kind = NormalizedCut((1, 2), (3, 4))
    for lam in (F(0), F(1, 3), F(2)):
        cuts = finite_cuts(red, lam)
        assert cuts
        for s, gval in cuts:
            assert is_feasible(path4, s, kind)
            num, den = objective_parts(path4, s, kind)
            assert gval >= num - lam * den
        assert min(v for _, v in cuts) == F(1) - lam * 3


def test_network_size_is_nodes_plus_edges():
    rng = random.Random(4)
    for _ in range(20):
        g = nc_graph(rng)
        e_in, e_out = None, None
        for a in g.edges:
            for b in g.edges:
                if not {a.i, a.j} & {b.i, b.j}:
                    e_in, e_out = (a.i, a.j), (b.i, b.j)
                    break
            if e_in:
                break
        if e_in is None:
            continue
        red = build_lambda_nc(g, e_in, e_out)
        assert red.network.node_count <= g.node_count + len(g.edges) + 2
        assert len(red.network.arcs) <= 5 * len(g.edges)


def test_no_free_nodes_gives_constant_g():
    g = WeightedGraph.build(4, [(1, 2, 2), (3, 4, 5)])
    red = build_lambda_nc(g, (1, 2), (3, 4))
    for lam in (F(0), F(1), F(3)):
        cut = min_cut_at(red.network, lam)
        num, den = objective_parts(g, {1, 2}, NormalizedCut((1, 2), (3, 4)))
        assert red.g_value(cut) == num - lam * den == -2 * lam
    # the slope comes entirely from the forced internal edge
    assert red.offset_slope == 2


def test_g_at_zero_is_min_feasible_numerator():
    rng = random.Random(5)
    for _ in range(20):
        g = nc_graph(rng)
        pairs = [
            (a, b) for a in g.edges for b in g.edges if not {a.i, a.j} & {b.i, b.j}
        ]
        if not pairs:
            continue
        a, b = pairs[0]
        kind = NormalizedCut((a.i, a.j), (b.i, b.j))
        red = build(g, kind)
        cut = min_cut_at(red.network, 0)
        best = min(
            objective_parts(g, s, kind)[0]
            for s in _subsets(g.node_count)
            if is_feasible(g, s, kind)
        )
        assert red.g_value(cut) == best


def test_source_side_of_only_the_source_decodes_to_seed(path4):
    red = build_lambda_nc(path4, (1, 2), (3, 4))
    assert red.decode({red.network.source}) == {1, 2}


def test_nc_grows_toward_sink_seed_at_large_parameter():
    g = WeightedGraph.build(5, [(1, 2, 3), (2, 3, 1), (3, 4, 1), (4, 5, 3)])
    red = build_lambda_nc(g, (1, 2), (4, 5))
    hi = red.network.hi
    s = red.decode(min_cut_at(red.network, hi))
    assert s == {1, 2, 3}
    assert red.decode(min_cut_at(red.network, 0)) == {1, 2}


def test_seed_edges_must_exist_and_be_disjoint(path4):
    with pytest.raises(InfeasibleError):
        build_lambda_nc(path4, (1, 3), (3, 4))
    with pytest.raises(InfeasibleError, match="infeasible seeds"):
        build_lambda_nc(path4, (1, 2), (2, 3))


def test_inconsistent_cut_rejected(path4):
    red = build_lambda_nc(path4, (1, 2), (3, 4))
    y = red.edge_node[1]  # edge (2,3) has one endpoint on the sink side
    with pytest.raises(RatioCutError):
        red.decode({red.network.source, y})
    with pytest.raises(RatioCutError):
        red.decode(CutResult(frozenset(), Fraction(0), is_finite=False))


# --- ratio regions network ------------------------------------------------


def test_rr_path_envelope(path3):
    red = build_lambda_rr(path3, 1, 3)
    kind = RatioRegions(1, 3)
    for lam in (F(0), F(1, 2), F(1), F(3, 2), F(2)):
        cut = min_cut_at(red.network, lam)
        assert red.g_value(cut) == min(2 - lam, 2 - 2 * lam)
        s = red.decode(cut)
        num, den = objective_parts(path3, s, kind)
        assert red.g_value(cut) == num - lam * den


def test_rr_path_at_zero_is_seed_only(path3):
    red = build_lambda_rr(path3, 1, 3)
    assert red.decode(min_cut_at(red.network, 0)) == {1}


def test_rr_zero_weights_have_no_parametric_arcs(path3):
    g = WeightedGraph.build(3, [(1, 2, 2), (2, 3, 2)], [0, 0, 0])
    red = build_lambda_rr(g, 1, 3)
    assert all(a.slope == 0 for a in red.network.arcs)


def test_rr_negative_weight_uses_sink_arc():
    g = WeightedGraph.build(3, [(1, 2, 2), (2, 3, 2)], [1, -1, 1])
    red = build_lambda_rr(g, 1, 3)
    x2 = red.x_node[2]
    net = red.network
    assert any(a.tail == x2 and a.head == net.sink and a.slope > 0 for a in net.arcs)
    kind = RatioRegions(1, 3)
    for lam in (F(0), F(1), F(2)):
        cut = min_cut_at(net, lam)
        expected = min(
            objective_parts(g, s, kind)[0] - lam * objective_parts(g, s, kind)[1]
            for s in ({1}, {1, 2})
        )
        assert red.g_value(cut) == expected


# --- densest network --------------------------------------------------------


def test_densest_needs_an_edge():
    with pytest.raises(InfeasibleError):
        build_densest(WeightedGraph.build(2, []))


def test_densest_network_is_monotone(triangle):
    red = build_densest(triangle)
    assert red.network.is_monotone
    assert red.network.hi == 0


# --- the affine identity on random instances ------------------------------


def _subsets(n):
    for mask in range(1 << n):
        yield frozenset(v + 1 for v in range(n) if mask >> v & 1)


@pytest.mark.parametrize("seed", range(30))
def test_affine_identity_every_cut(seed):
    rng = random.Random(seed)
    choice = seed % 3
    if choice == 0:
        g = nc_graph(rng, split_weights=True)
        pairs = [(a, b) for a in g.edges for b in g.edges if not {a.i, a.j} & {b.i, b.j}]
        if not pairs:
            return
        a, b = rng.choice(pairs)
        kind = NormalizedCut((a.i, a.j), (b.i, b.j))
    elif choice == 1:
        g = rr_graph(rng, negative=True)
        s, t = rng.sample(list(g.nodes), 2)
        kind = RatioRegions(s, t)
    else:
        g = densest_graph(rng)
        kind = Densest()
    red = build(g, kind)
    net = red.network
    if net.node_count > 16:
        return
    lam = net.lo + (net.hi - net.lo) * F(rng.randint(0, 100), 100)
    for s, gval in finite_cuts(red, lam):
        num, den = objective_parts(g, s, kind)
        assert gval >= num - lam * den
        # the empty set is a valid cut for density and carries den = 0
        assert is_feasible(g, s, kind) or (choice == 2 and not s)
    res = flow_at(net, lam)
    s = red.decode(res.cut)
    num, den = objective_parts(g, s, kind)
    assert red.g_value(res.cut) == num - lam * den
