import random
from fractions import Fraction

import pytest

from gen import monotone_network
from ratiocut.flow import cut_value
from ratiocut.graph import INF
from ratiocut.parametric import (
    Line,
    ParametricArc,
    ParametricNetwork,
    breakpoints,
    instantiate,
    min_cut_at,
)

F = Fraction


def gadget(lo=0, hi=10):
    # s=0, v=1, t=2: s->v has capacity lam, v->t capacity 1
    return ParametricNetwork(
        3, 0, 2, (ParametricArc(0, 1, F(0), F(1)), ParametricArc(1, 2, F(1))), F(lo), F(hi)
    )


def test_affine_capacity():
    assert ParametricArc(0, 1, F(0), F(3)).at(F(2)) == 6


def test_instantiate_at_zero_uses_constants():
    net = instantiate(gadget(), 0)
    assert [a.cap for a in net.arcs] == [0, 1]


def test_instantiate_outside_domain():
    with pytest.raises(ValueError):
        instantiate(gadget(), 11)


def test_min_cut_below_kink():
    cut = min_cut_at(gadget(), F(1, 2))
    assert cut.value == F(1, 2)
    assert cut.source_set == {0}


def test_min_cut_above_kink():
    cut = min_cut_at(gadget(), 2)
    assert cut.value == 1
    assert cut.source_set == {0, 1}


def test_min_cut_at_tie_is_minimal():
    cut = min_cut_at(gadget(), 1)
    assert cut.value == 1
    assert cut.source_set == {0}


def test_single_breakpoint():
    seq = breakpoints(gadget())
    assert [b.lam for b in seq.breakpoints] == [1]
    assert seq.initial_set == {0}
    assert seq.breakpoints[0].source_set == {0, 1}


def test_constant_network_has_no_breakpoints():
    net = ParametricNetwork(3, 0, 2, (ParametricArc(0, 1, F(2)), ParametricArc(1, 2, F(1))), F(0), F(5))
    seq = breakpoints(net)
    assert seq.breakpoints == ()
    assert seq.initial_line == Line(F(1), F(0))


def test_independent_gadgets():
    arcs = (
        ParametricArc(0, 1, F(0), F(1)),
        ParametricArc(1, 3, F(1)),
        ParametricArc(0, 2, F(0), F(1)),
        ParametricArc(2, 3, F(3)),
    )
    seq = breakpoints(ParametricNetwork(4, 0, 3, arcs, F(0), F(10)))
    assert [b.lam for b in seq.breakpoints] == [1, 3]
    assert [b.source_set for b in seq.breakpoints] == [{0, 1}, {0, 1, 2}]


def test_monotone_flag():
    assert gadget().is_monotone
    bad = ParametricNetwork(3, 0, 2, (ParametricArc(0, 1, F(5), F(-1)), ParametricArc(1, 2, F(1))), F(0), F(5))
    assert not bad.is_monotone


def test_rejects_negative_capacity_on_domain():
    with pytest.raises(ValueError):
        ParametricNetwork(2, 0, 1, (ParametricArc(0, 1, F(1), F(-1)),), F(0), F(5))


def test_rejects_parametric_infinite_arc():
    with pytest.raises(ValueError):
        ParametricNetwork(2, 0, 1, (ParametricArc(0, 1, INF, F(1)),), F(0), F(5))


def test_line_of_infinite_cut_is_none():
    net = ParametricNetwork(3, 0, 2, (ParametricArc(0, 1, F(1)), ParametricArc(1, 2, INF)), F(0), F(1))
    assert net.line_of({0, 1}) is None
    assert net.line_of({0}) == Line(F(1), F(0))


@pytest.mark.parametrize("seed", range(40))
def test_random_monotone_networks(seed):
    rng = random.Random(seed)
    net = monotone_network(rng, rng.randint(1, 8))
    seq = breakpoints(net)
    lams = [b.lam for b in seq.breakpoints]
    assert lams == sorted(set(lams))
    assert len(lams) <= net.node_count
    sets = [seq.initial_set] + [b.source_set for b in seq.breakpoints]
    for a, b in zip(sets, sets[1:]):
        assert a < b
    # every interval's stored set and line agree with a fresh solve
    edges = [net.lo] + lams + [net.hi]
    for a, b in zip(edges, edges[1:]):
        if a == b:
            continue
        mid = (a + b) / 2
        cut = min_cut_at(net, mid)
        assert cut.source_set == seq.set_at(mid)
        assert cut.value == seq.value_at(mid)
        assert net.line_of(cut.source_set)(mid) == cut.value
    # the envelope is the exact minimum cut everywhere
    for _ in range(10):
        x = net.lo + (net.hi - net.lo) * F(rng.randint(0, 1000), 1000)
        assert seq.value_at(x) == min_cut_at(net, x).value
    # sampled pairs stay nested
    for _ in range(5):
        x, y = sorted(net.lo + (net.hi - net.lo) * F(rng.randint(0, 97), 97) for _ in range(2))
        assert min_cut_at(net, x).source_set <= min_cut_at(net, y).source_set


@pytest.mark.parametrize("seed", range(20))
def test_envelope_midpoint_concavity(seed):
    rng = random.Random(500 + seed)
    net = monotone_network(rng, rng.randint(1, 8))
    for _ in range(10):
        a, b = sorted(net.lo + (net.hi - net.lo) * F(rng.randint(0, 1000), 1000) for _ in range(2))
        va = min_cut_at(net, a).value
        vb = min_cut_at(net, b).value
        assert min_cut_at(net, (a + b) / 2).value >= (va + vb) / 2


def test_instantiated_cut_matches_line():
    net = gadget()
    for lam in (F(0), F(1, 3), F(7)):
        inst = instantiate(net, lam)
        for s in ({0}, {0, 1}):
            assert cut_value(inst, s) == net.line_of(s)(lam)
