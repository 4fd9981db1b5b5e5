import random

import pytest
from hypothesis import given, settings

from hdecomp.graphs import Graph, GraphClassSpec
from hdecomp.oracles import brute_separable
from hdecomp.separation import (
    Separation,
    find_extremal_separation,
    find_separation_bip,
    find_separation_forbidden,
    find_separation_restricted,
)
from hdecomp.separators import SearchStats

from .conftest import connected_graphs_st, random_graph

BIP = GraphClassSpec.bipartite()
TRI = GraphClassSpec.triangle_free()


def bip_base(g, Z, k, within):
    return find_separation_bip(g, Z, k, within=within)


def test_bip_examples():
    c4 = Graph.cycle(4)
    out = find_separation_bip(c4, frozenset({0}), 0)
    assert out is not None and out.C == {0, 1, 2, 3} and out.S == frozenset()

    k3 = Graph.complete(3)
    out = find_separation_bip(k3, frozenset({0}), 1)
    assert out is not None and not out.validate(k3) and len(out.S) <= 2
    assert brute_separable(k3, frozenset({0}), 1, BIP) is not None

    k5 = Graph.complete(5)
    assert find_separation_bip(k5, frozenset({0}), 1) is None
    assert brute_separable(k5, frozenset({0}), 1, BIP) is None


def test_bip_rejects_bad_z():
    g = Graph.path(3)
    with pytest.raises(ValueError):
        find_separation_bip(g, frozenset(), 1)
    with pytest.raises(ValueError):
        find_separation_bip(g, frozenset({0, 2}), 1)


def test_forbidden_examples():
    c4 = Graph.cycle(4)
    out = find_separation_forbidden(c4, frozenset({0}), 0, TRI)
    assert out is not None and out.C == {0, 1, 2, 3} and not out.S

    k4 = Graph.complete(4)
    assert find_separation_forbidden(k4, frozenset({0}), 1, TRI) is None
    assert brute_separable(k4, frozenset({0}), 1, TRI) is None
    out = find_separation_forbidden(k4, frozenset({0}), 2, TRI)
    assert out is not None and not out.validate(k4)
    assert out.covers(frozenset({0})) and len(out.S) <= 2
    assert brute_separable(k4, frozenset({0}), 2, TRI) is not None


def test_forbidden_obstruction_inside_z_is_inseparable():
    k3 = Graph.complete(3)
    assert find_separation_forbidden(k3, frozenset({0, 1, 2}), 2, TRI) is None


def test_restricted_delegates_on_small_family():
    k3 = Graph.complete(3)
    out = find_separation_restricted(k3, frozenset({0}), 1, 1, BIP, [], bip_base)
    assert out is not None and out.weakly_covers(frozenset({0}))
    assert find_separation_restricted(k3, frozenset({0}), 0, 0, BIP, [], bip_base) is None


def test_restricted_with_triangle_family():
    # two triangles joined by a path; each triangle is (bip,k)-inseparable
    g = Graph(
        7,
        [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)],
    )
    fam = [frozenset({0, 1, 2}), frozenset({4, 5, 6})]
    for k in (1, 2):
        out = find_separation_restricted(g, frozenset({3}), k, k, BIP, fam, bip_base)
        truth = brute_separable(g, frozenset({3}), k, BIP)
        if out is None:
            assert truth is None
        else:
            assert not out.validate(g)
            assert out.weakly_covers(frozenset({3}))
            assert len(out.S) <= BIP.h_value(k) + k
            swallowed = sum(1 for f in fam if f <= out.C)
            assert swallowed <= k
        if truth is not None:
            assert out is not None


def test_restricted_rejects_bad_family():
    g = Graph.path(4)
    with pytest.raises(ValueError):
        find_separation_restricted(
            g, frozenset({0}), 1, 1, BIP, [frozenset({1, 3})], bip_base
        )  # disconnected family member
    with pytest.raises(ValueError):
        find_separation_restricted(
            g, frozenset({0}), 1, 1, BIP, [frozenset({1}), frozenset({1, 2})], bip_base
        )  # overlap
    with pytest.raises(ValueError):
        find_separation_restricted(g, frozenset({0}), 2, 1, BIP, [], bip_base)  # k > t
    with pytest.raises(ValueError):
        find_separation_restricted(
            g, frozenset({0}), 1, 1, BIP, [frozenset({0, 1})], bip_base
        )  # family member meets Z


def finder_bip(g, Z, k, family):
    return find_separation_bip(g, Z, k)


def test_extremal_covers_whole_member_graph():
    c4 = Graph.cycle(4)
    region = frozenset(range(4))
    seed = Separation(frozenset(), frozenset({0}), BIP, BIP.h_value(1) + 1)
    zp, sep, certified = find_extremal_separation(
        c4, region, frozenset({0}), 1, seed, BIP, [], finder_bip
    )
    assert zp == region and not certified
    assert sep.C == region and not sep.S


def test_extremal_k0_on_triangle_is_inseparable():
    k3 = Graph.complete(3)
    region = frozenset(range(3))
    seed = Separation(frozenset(), frozenset({0}), BIP, 1)
    zp, sep, certified = find_extremal_separation(
        k3, region, frozenset({0}), 0, seed, BIP, [], finder_bip
    )
    assert zp == frozenset({0}) and certified
    assert sep.weakly_covers(zp)


def test_extremal_output_is_inseparable_or_whole_region():
    rng = random.Random(3)
    for _ in range(80):
        g = random_graph(rng, rng.randint(1, 8), 0.4)
        from hdecomp.graphs import connected_components

        comp = connected_components(g)[0]
        k = rng.randint(0, 2)
        seed = Separation(frozenset(), frozenset({min(comp)}), BIP, BIP.h_value(k) + 1)
        zp, sep, certified = find_extremal_separation(
            g, comp, frozenset({min(comp)}), k, seed, BIP, [], finder_bip
        )
        assert sep.weakly_covers(zp)
        assert not sep.validate(g)
        if zp != comp:
            assert certified
            assert brute_separable(g, zp, k, BIP) is None


@settings(max_examples=80, deadline=None)
@given(connected_graphs_st(max_n=7))
def test_finders_sound_and_complete(g):
    for z in range(min(g.n, 3)):
        Z = frozenset({z})
        for k in (0, 1, 2):
            truth_bip = brute_separable(g, Z, k, BIP)
            out = find_separation_bip(g, Z, k)
            if out is None:
                assert truth_bip is None
            else:
                assert not out.validate(g)
                assert out.weakly_covers(Z) and len(out.S) <= 2 * k
            if truth_bip is not None:
                assert out is not None
            truth_tri = brute_separable(g, Z, k, TRI)
            out = find_separation_forbidden(g, Z, k, TRI)
            assert (out is not None) == (truth_tri is not None)
            if out is not None:
                assert not out.validate(g)
                assert out.covers(Z) and len(out.S) <= k


def test_forbidden_recursion_bound():
    # recursion nodes (excluding the top call) <= k * (5q)^k, q = 3
    rng = random.Random(17)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 7), 0.5)
        from hdecomp.graphs import connected_components

        comp = connected_components(g)[0]
        for k in (1, 2, 3):
            stats = SearchStats()
            find_separation_forbidden(g, frozenset({min(comp)}), k, TRI, stats=stats)
            assert stats.nodes <= k * (5 * 3) ** k
